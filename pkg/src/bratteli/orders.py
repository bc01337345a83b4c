"""Orders on odometer chains, successor dynamics, and extension verdicts.

Each vertex (n, i) with n >= 1 of an odometer chain receives the incoming
edges e_1, ..., e_a (vertical, from (n-1, i)) and f (diagonal, from
(n-1, i+1)).  A linear order on that set is *left* when f is minimal,
*right* when f is maximal, and *middle* otherwise.  A quasi-stationary order
fixes the tag per vertex index, independent of the level, so the eventual
behaviour of every odometer is decidable exactly:

* left-tagged i: no right orders ever occur, so odometer i is finite-right
  (its saturation carries the unique maximal path) but not finite-left;
* right-tagged i: symmetric, finite-left only;
* middle-tagged i: both, carrying one maximal and one minimal path.

The successor map increments the first non-maximal edge and resets the
prefix to the minimal path into the new source vertex.  Infinite paths only
appear through truncations; a truncated path whose in-window edges are all
maximal is reported as such rather than pretending to decide the limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .diagram import DiagramError, DiagramSpec, Truncation
from .measure import DIAGONAL, VERTICAL, CylinderSpec, EndVertex, ExplicitPath, cylinder_measure

LEFT = "left"
RIGHT = "right"
MIDDLE = "middle"
TAGS = (LEFT, RIGHT, MIDDLE)

ALEPH0 = "aleph0"
Cardinal = Union[int, str]

Edge = tuple[str, int]  # ("v", k) vertical, ("f", 0) diagonal


def _edge_set(a: int) -> frozenset[Edge]:
    return frozenset([(VERTICAL, k) for k in range(1, a + 1)] + [(DIAGONAL, 0)])


@dataclass(frozen=True)
class VertexOrder:
    """Linear order on the incoming edges of one vertex, minimal first."""

    sequence: tuple[Edge, ...]

    def __post_init__(self):
        a = len(self.sequence) - 1
        if frozenset(self.sequence) != _edge_set(a) or len(set(self.sequence)) != len(self.sequence):
            raise DiagramError("order must be a permutation of the vertical edges plus the diagonal")

    @property
    def tag(self) -> str:
        if self.sequence[0][0] == DIAGONAL:
            return LEFT
        if self.sequence[-1][0] == DIAGONAL:
            return RIGHT
        return MIDDLE

    def position(self, edge: Edge) -> int:
        try:
            return self.sequence.index(edge)
        except ValueError:
            raise DiagramError(f"edge {edge} is not incoming at this vertex") from None

    @property
    def minimal(self) -> Edge:
        return self.sequence[0]

    @property
    def maximal(self) -> Edge:
        return self.sequence[-1]

    def successor_of(self, edge: Edge) -> Optional[Edge]:
        pos = self.position(edge)
        return self.sequence[pos + 1] if pos + 1 < len(self.sequence) else None


def canonical_order(tag: str, a: int) -> VertexOrder:
    """The canonical permutation per tag: left puts f first, right puts f
    last, middle slots f between e_1 and e_2 (needs a >= 2)."""
    verticals = [(VERTICAL, k) for k in range(1, a + 1)]
    f = (DIAGONAL, 0)
    if tag == LEFT:
        return VertexOrder(tuple([f] + verticals))
    if tag == RIGHT:
        return VertexOrder(tuple(verticals + [f]))
    if tag == MIDDLE:
        if a < 2:
            raise DiagramError("a middle order needs at least two vertical edges")
        return VertexOrder(tuple(verticals[:1] + [f] + verticals[1:]))
    raise DiagramError(f"unknown tag {tag!r}")


# ---------------------------------------------------------------------------
# Order specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuasiStationary:
    """Tag per vertex index; unlisted indices cycle through ``default``.

    ``default`` may have several tags: index i gets default[(i-1) % len],
    which expresses e.g. alternating left/right assignments.
    """

    tags: tuple[tuple[int, str], ...] = ()
    default: tuple[str, ...] = (MIDDLE,)

    def __post_init__(self):
        object.__setattr__(self, "tags", tuple(sorted(dict(self.tags).items())))
        object.__setattr__(
            self, "default", (self.default,) if isinstance(self.default, str) else tuple(self.default)
        )
        for _, t in self.tags:
            if t not in TAGS:
                raise DiagramError(f"unknown tag {t!r}")
        for t in self.default:
            if t not in TAGS:
                raise DiagramError(f"unknown tag {t!r}")

    def tag_of(self, i: int) -> str:
        for j, t in self.tags:
            if j == i:
                return t
        return self.default[(i - 1) % len(self.default)]


@dataclass(frozen=True)
class EventuallyQuasiStationary:
    """Quasi-stationary tail with finitely many per-vertex exceptions.

    Exceptions override the order at specific (level, index) pairs only; they
    never change an odometer's eventual tag, hence never the classification.
    """

    base: QuasiStationary
    exceptions: tuple[tuple[tuple[int, int], str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "exceptions", tuple(sorted(dict(self.exceptions).items())))
        for (n, i), t in self.exceptions:
            if n < 1 or i < 1:
                raise DiagramError("exception positions need level >= 1 and index >= 1")
            if t not in TAGS:
                raise DiagramError(f"unknown tag {t!r}")

    def tag_of(self, i: int) -> str:
        return self.base.tag_of(i)

    def tag_at(self, n: int, i: int) -> str:
        for (en, ei), t in self.exceptions:
            if (en, ei) == (n, i):
                return t
        return self.base.tag_of(i)


@dataclass(frozen=True)
class ExplicitOrder:
    """Concrete orders within a window; nothing is known beyond it."""

    orders: tuple[tuple[tuple[int, int], VertexOrder], ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(sorted(dict(self.orders).items())))

    def order_at(self, n: int, i: int) -> VertexOrder:
        for (on, oi), order in self.orders:
            if (on, oi) == (n, i):
                return order
        raise DiagramError(f"no order given for vertex (level {n}, index {i})")


OrderSpec = Union[QuasiStationary, EventuallyQuasiStationary, ExplicitOrder]


def order_at(spec: DiagramSpec, order: OrderSpec, n: int, i: int) -> VertexOrder:
    """The order on the incoming edges of vertex (n, i), n >= 1."""
    if n < 1:
        raise DiagramError("level-0 vertices have no incoming edges")
    if isinstance(order, ExplicitOrder):
        return order.order_at(n, i)
    a = spec.vertical_edges(n - 1, i)
    tag = order.tag_at(n, i) if isinstance(order, EventuallyQuasiStationary) else order.tag_of(i)
    return canonical_order(tag, a)


def order_from_json(doc: dict) -> OrderSpec:
    kind = doc.get("kind", "quasiStationary")
    if kind == "quasiStationary":
        raw = dict(doc.get("tags", {}))
        default = raw.pop("default", MIDDLE)
        if isinstance(default, str):
            default = (default,)
        tags = tuple((int(k), str(v)) for k, v in raw.items())
        return QuasiStationary(tags, tuple(default))
    if kind == "eventuallyQuasiStationary":
        base = order_from_json({"kind": "quasiStationary", "tags": doc.get("tags", {})})
        exceptions = tuple(
            ((int(k.split(",")[0]), int(k.split(",")[1])), str(v))
            for k, v in doc.get("exceptions", {}).items()
        )
        return EventuallyQuasiStationary(base, exceptions)
    raise DiagramError(f"unknown order kind {kind!r}")


# ---------------------------------------------------------------------------
# Odometer classification and the extension verdict
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OdometerClass:
    finite_right: Optional[bool]  # None = unknown from finite data
    finite_left: Optional[bool]
    note: str = ""


def classify_odometer(spec: DiagramSpec, order: OrderSpec, i: int) -> OdometerClass:
    """Finite-right / finite-left status of odometer i.

    Decidable exactly for (eventually) quasi-stationary orders from the
    eventual tag alone; explicit windowed orders cannot decide it.
    """
    if not spec.is_odometer_chain:
        raise DiagramError("odometer classification requires an odometer chain")
    if isinstance(order, ExplicitOrder):
        return OdometerClass(None, None, "undecidable from a finite window of explicit orders")
    tag = order.tag_of(i)
    if tag == LEFT:
        return OdometerClass(True, False, "left orders: never right, always left")
    if tag == RIGHT:
        return OdometerClass(False, True, "right orders: never left, always right")
    return OdometerClass(True, True, "middle orders: never left nor right")


@dataclass(frozen=True)
class ExtensionVerdict:
    """Verdict on extending the successor map to the whole path space."""

    i_fr: Cardinal
    i_fl: Cardinal
    fr_witness: tuple[int, ...]  # members within the inspected range
    fl_witness: tuple[int, ...]
    borel_extension: bool
    homeomorphism: str  # "yes" / "no" / "no-quasi-stationary"


def extension_verdict(spec: DiagramSpec, order: OrderSpec, i_max: int = 20) -> ExtensionVerdict:
    """Cardinalities of the finite-right / finite-left sets and what follows.

    A Borel extension exists iff the cardinalities agree; a homeomorphism
    needs both sets empty, which no quasi-stationary order achieves.
    """
    if isinstance(order, ExplicitOrder):
        raise DiagramError("extension verdict is undecidable from finite explicit-order data")
    qs = order.base if isinstance(order, EventuallyQuasiStationary) else order

    def cardinal(member_tags: frozenset[str]) -> Cardinal:
        if any(t in member_tags for t in qs.default):
            return ALEPH0
        return sum(1 for _, t in qs.tags if t in member_tags)

    fr_tags = frozenset((LEFT, MIDDLE))
    fl_tags = frozenset((RIGHT, MIDDLE))
    i_fr = cardinal(fr_tags)
    i_fl = cardinal(fl_tags)
    fr_witness = tuple(i for i in range(1, i_max + 1) if qs.tag_of(i) in fr_tags)
    fl_witness = tuple(i for i in range(1, i_max + 1) if qs.tag_of(i) in fl_tags)
    borel = i_fr == i_fl
    if not borel:
        homeo = "no"
    elif i_fr == 0 and i_fl == 0:
        homeo = "yes"  # unreachable for quasi-stationary orders: every tag populates a set
    else:
        homeo = "no-quasi-stationary"
    return ExtensionVerdict(i_fr, i_fl, fr_witness, fl_witness, borel, homeo)


# ---------------------------------------------------------------------------
# Successor map on truncated paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedPath:
    """Finite path prefix: start vertex at level 0 and one edge per level."""

    start: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.start < 1:
            raise DiagramError("path start index must be >= 1")
        idx = self.start
        for kind, k in self.edges:
            if kind == DIAGONAL:
                idx -= 1
            elif kind != VERTICAL:
                raise DiagramError(f"unknown edge kind {kind!r}")
            if idx < 1:
                raise DiagramError("path walks below vertex 1")

    def vertex_at(self, level: int) -> int:
        idx = self.start
        for kind, _ in self.edges[:level]:
            if kind == DIAGONAL:
                idx -= 1
        return idx

    @property
    def depth(self) -> int:
        return len(self.edges)

    def as_cylinder(self, length: int) -> ExplicitPath:
        return ExplicitPath(self.start, self.edges[:length])


class AllMaximalPrefix:
    """Every in-window edge is maximal: the successor leaves the window."""

    def __repr__(self):
        return "AllMaximalPrefix()"


def vertical_path(spec: DiagramSpec, i: int, depth: int, k: int = 1) -> TruncatedPath:
    """The path climbing odometer i taking its k-th vertical edge each level."""
    for n in range(depth):
        if k > spec.vertical_edges(n, i):
            raise DiagramError(f"vertical edge {k} out of range at level {n}")
    return TruncatedPath(i, ((VERTICAL, k),) * depth)


def minimal_path_into(spec: DiagramSpec, order: OrderSpec, level: int, index: int) -> TruncatedPath:
    """The order-minimal finite path from level 0 into vertex (level, index),
    built by walking down and always taking the minimal incoming edge."""
    edges: list[Edge] = []
    cur = index
    for l in range(level, 0, -1):
        e = order_at(spec, order, l, cur).minimal
        edges.append(e)
        if e[0] == DIAGONAL:
            cur += 1
    edges.reverse()
    return TruncatedPath(cur, tuple(edges))


def successor(
    spec: DiagramSpec, order: OrderSpec, path: TruncatedPath
) -> Union[TruncatedPath, AllMaximalPrefix]:
    """One step of the adic successor map on a truncated path.

    Finds the smallest level m whose edge is not maximal, advances it to the
    next edge in its vertex order, and replaces everything below with the
    minimal path into the new source vertex; the tail is kept unchanged.
    """
    for m in range(path.depth):
        w = path.vertex_at(m + 1)
        vo = order_at(spec, order, m + 1, w)
        nxt = vo.successor_of(path.edges[m])
        if nxt is None:
            continue
        source = w if nxt[0] == VERTICAL else w + 1
        prefix = minimal_path_into(spec, order, m, source)
        return TruncatedPath(prefix.start, prefix.edges + (nxt,) + path.edges[m + 1 :])
    return AllMaximalPrefix()


# ---------------------------------------------------------------------------
# Orbit statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitEntry:
    cylinder: CylinderSpec
    empirical: Fraction
    theoretical: Optional[Fraction]


@dataclass(frozen=True)
class OrbitReport:
    entries: tuple[OrbitEntry, ...]
    steps_done: int
    aborted: bool  # hit an all-maximal prefix before finishing


def orbit_frequencies(
    spec: DiagramSpec,
    order: OrderSpec,
    start: TruncatedPath,
    steps: int,
    cylinders: list[CylinderSpec],
    measure=None,
    window: Optional[Truncation] = None,
) -> OrbitReport:
    """Visit frequencies of cylinders along the successor orbit of ``start``.

    An ``EndVertex`` cylinder is represented by the order-minimal path into
    that vertex (all cylinders with the same end vertex share one measure
    value, so any concrete representative serves for the comparison).
    Theoretical values, when a measure is supplied, must evaluate exactly.
    """
    matchers = []
    for cyl in cylinders:
        path = (
            minimal_path_into(spec, order, cyl.length, cyl.index)
            if isinstance(cyl, EndVertex)
            else TruncatedPath(cyl.start, cyl.edges)
        )
        matchers.append((cyl, path.start, path.edges))

    counts = [0] * len(matchers)
    current = start
    done = 0
    aborted = False
    for _ in range(steps):
        if window is not None and max(
            (current.vertex_at(l) for l in range(current.depth + 1)), default=current.start
        ) > window.max_vertex:
            raise DiagramError("orbit left the certified window")
        for idx, (_, cstart, cedges) in enumerate(matchers):
            if current.start == cstart and current.edges[: len(cedges)] == cedges:
                counts[idx] += 1
        done += 1
        step = successor(spec, order, current)
        if isinstance(step, AllMaximalPrefix):
            aborted = True
            break
        current = step

    entries = []
    for (cyl, _, _), count in zip(matchers, counts):
        emp = Fraction(count, done) if done else Fraction(0)
        theo = None
        if measure is not None:
            val = cylinder_measure(measure, cyl)
            if isinstance(val, Fraction):
                theo = val
        entries.append(OrbitEntry(cyl, emp, theo))
    return OrbitReport(tuple(entries), done, aborted)

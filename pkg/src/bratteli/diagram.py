"""Diagram families, incidence windows, tower heights, telescoping.

A generalized Bratteli diagram here is a graded graph with levels 0, 1, 2, ...
and countably many vertices per level (indexed 1, 2, ...).  Edges only join
consecutive levels; the level-n incidence matrix F_n counts edges between a
vertex w of level n and a vertex v of level n+1 (entry ``f[v][w]``).

Most families are "odometer chains": upper-bidiagonal incidence matrices
``f[i][i] = a_n(i)`` (vertical edges of the i-th odometer) and
``f[i][i+1] = 1`` (the single edge tying odometer i to odometer i+1).
Everything is exact integer arithmetic; a :class:`Truncation` only bounds what
a caller asks for, never the precision of what is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .sequences import Arithmetic, Constant, IntSequence, Table, seq_from_json


class DiagramError(ValueError):
    """Invalid diagram description or request."""


class WindowError(DiagramError):
    """Request falls outside the truncation window or its certified region."""


class WorkBudgetError(DiagramError):
    """Brute-force enumeration exceeded its work budget."""


@dataclass(frozen=True)
class VertexId:
    level: int
    index: int

    def __post_init__(self):
        if self.level < 0:
            raise DiagramError("vertex level must be >= 0")
        if self.index < 1:
            raise DiagramError("vertex index must be >= 1")


@dataclass(frozen=True)
class Truncation:
    """Finite window onto a (possibly infinite) diagram."""

    max_level: int
    max_vertex: int

    def __post_init__(self):
        if self.max_level < 1:
            raise DiagramError("truncation needs max_level >= 1")
        if self.max_vertex < 2:
            raise DiagramError("truncation needs max_vertex >= 2")

    def to_json(self) -> dict:
        return {"maxLevel": self.max_level, "maxVertex": self.max_vertex}

    @staticmethod
    def from_json(doc: dict) -> "Truncation":
        return Truncation(int(doc["maxLevel"]), int(doc["maxVertex"]))


# ---------------------------------------------------------------------------
# Diagram families
# ---------------------------------------------------------------------------


class DiagramSpec:
    """Base class for diagram families."""

    family: str = "?"
    is_odometer_chain: bool = False  # upper-bidiagonal odometer chain
    stationary: bool = False

    # odometer-chain structure ------------------------------------------------
    def vertical_edges(self, n: int, i: int) -> int:
        """Vertical multiplicity a_n(i) of odometer i at level n."""
        raise DiagramError(f"{self.family} family is not an odometer chain")

    @property
    def vertex_diag(self) -> Optional[IntSequence]:
        """Vertex-indexed diagonal (value at sequence index i-1) when the
        multiplicities depend on the vertex only."""
        return None

    @property
    def level_diag(self) -> Optional[IntSequence]:
        """Level-indexed diagonal when the multiplicities depend on the level
        only (all vertices alike)."""
        return None

    # generic structure -----------------------------------------------------
    def incidence_row(self, n: int, v: int) -> Optional[list[tuple[int, int]]]:
        """Full row v of F_n as ``[(w, mult), ...]``, or None if unknown."""
        if self.is_odometer_chain:
            return [(v, self.vertical_edges(n, v)), (v + 1, 1)]
        raise NotImplementedError

    def vertex_count(self, n: int) -> Optional[int]:
        """Number of vertices at level n; None means countably infinite."""
        return None

    def params_json(self) -> dict:
        raise NotImplementedError

    def to_json(self, window: Optional[Truncation] = None) -> dict:
        doc = {"family": self.family, "params": self.params_json()}
        if window is not None:
            doc["truncation"] = window.to_json()
        return doc


@dataclass(frozen=True)
class StationaryAK(DiagramSpec):
    """Stationary chain with first odometer a and all later odometers a-k."""

    a: int
    k: int
    family = "ak"
    is_odometer_chain = True
    stationary = True

    def __post_init__(self):
        if self.a < 2 or self.k < 1 or self.a - self.k < 1:
            raise DiagramError("ak family needs a >= 2, k >= 1 and a - k >= 1")

    def vertical_edges(self, n: int, i: int) -> int:
        return self.a if i == 1 else self.a - self.k

    @property
    def vertex_diag(self) -> IntSequence:
        return Table((self.a,), Constant(self.a - self.k))

    def params_json(self) -> dict:
        return {"a": self.a, "k": self.k}


@dataclass(frozen=True)
class StationaryDecreasing(DiagramSpec):
    """Stationary chain with vertex multiplicities a_1 > a_j for j >= 2.

    Dominance is only checkable on a finite range; operations validate it up
    to the window they are given.
    """

    diagonal: IntSequence
    family = "decreasing"
    is_odometer_chain = True
    stationary = True

    def vertical_edges(self, n: int, i: int) -> int:
        val = self.diagonal.value(i - 1)
        if val < 1:
            raise DiagramError(f"vertex multiplicity a_{i}={val} must be >= 1")
        return val

    @property
    def vertex_diag(self) -> IntSequence:
        return self.diagonal

    def validate_dominance(self, up_to: int, pivot: int = 1) -> None:
        top = self.vertical_edges(0, pivot)
        for j in range(pivot + 1, up_to + 1):
            if self.vertical_edges(0, j) >= top:
                raise DiagramError(
                    f"dominance violated: a_{pivot}={top} is not greater than a_{j}={self.vertical_edges(0, j)}"
                )

    def params_json(self) -> dict:
        return {"diagonal": self.diagonal.to_json()}


@dataclass(frozen=True)
class StationaryIncreasing(DiagramSpec):
    """Stationary chain with multiplicities 2, 3, 4, ... down the diagonal."""

    family = "increasing"
    is_odometer_chain = True
    stationary = True

    def vertical_edges(self, n: int, i: int) -> int:
        return i + 1

    @property
    def vertex_diag(self) -> IntSequence:
        return Arithmetic(2, 1)

    def params_json(self) -> dict:
        return {}


@dataclass(frozen=True)
class NonStationaryUniform(DiagramSpec):
    """Non-stationary chain: at level n every odometer has a_n edges."""

    levels: IntSequence
    family = "nonstationary-uniform"
    is_odometer_chain = True

    def vertical_edges(self, n: int, i: int) -> int:
        val = self.levels.value(n)
        if val < 2:
            raise DiagramError(f"level multiplicity a_{n}={val} must be >= 2")
        return val

    @property
    def level_diag(self) -> IntSequence:
        return self.levels

    def params_json(self) -> dict:
        return {"levels": self.levels.to_json()}


@dataclass(frozen=True)
class GeneralChain(DiagramSpec):
    """Odometer chain with an explicit (level, vertex) multiplicity table."""

    entries: tuple[tuple[int, int, int], ...]  # (level, vertex, multiplicity)
    default: int = 2
    family = "general-chain"
    is_odometer_chain = True
    _table: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        table = {}
        for n, i, val in self.entries:
            if val < 2:
                raise DiagramError("odometer-chain multiplicities must be >= 2")
            table[(n, i)] = val
        if self.default < 2:
            raise DiagramError("default multiplicity must be >= 2")
        object.__setattr__(self, "entries", tuple(sorted((n, i, v) for (n, i), v in table.items())))
        object.__setattr__(self, "_table", table)

    def vertical_edges(self, n: int, i: int) -> int:
        return self._table.get((n, i), self.default)

    def params_json(self) -> dict:
        return {"entries": [list(e) for e in self.entries], "default": self.default}


@dataclass(frozen=True)
class ExplicitFinite(DiagramSpec):
    """Finite stationary standard diagram given by A = F^T with a simple hat."""

    a_matrix: tuple[tuple[int, ...], ...]
    family = "explicit-finite"
    stationary = True

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.a_matrix)
        object.__setattr__(self, "a_matrix", rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DiagramError("matrix must be square and nonempty")
        if any(x < 0 for r in rows for x in r):
            raise DiagramError("matrix entries must be nonnegative")
        # diagram validity: every vertex needs incoming and outgoing edges
        for v in range(n):
            if all(rows[w][v] == 0 for w in range(n)):
                raise DiagramError(f"vertex {v + 1} has no incoming edges (column {v + 1} of A is zero)")
            if all(x == 0 for x in rows[v]):
                raise DiagramError(f"vertex {v + 1} has no outgoing edges (row {v + 1} of A is zero)")

    @property
    def size(self) -> int:
        return len(self.a_matrix)

    def incidence_row(self, n: int, v: int) -> Optional[list[tuple[int, int]]]:
        if not 1 <= v <= self.size:
            return None
        # F = A^T, so f[v][w] = a[w][v]
        return [(w, self.a_matrix[w - 1][v - 1]) for w in range(1, self.size + 1) if self.a_matrix[w - 1][v - 1] > 0]

    def vertex_count(self, n: int) -> int:
        return self.size

    def params_json(self) -> dict:
        return {"matrix": [list(r) for r in self.a_matrix]}


@dataclass(frozen=True)
class ExplicitLevels(DiagramSpec):
    """Explicit sparse incidence matrices within a window.

    ``levels[n]`` lists entries ``(v, w, mult)`` of F_n.  Every row that
    appears is taken to be a complete description of that row; absent rows are
    unknown, not zero.
    """

    levels: tuple[tuple[tuple[int, int, int], ...], ...]
    family = "explicit-levels"

    def __post_init__(self):
        norm = []
        for lvl in self.levels:
            entries = tuple(sorted((int(v), int(w), int(m)) for v, w, m in lvl))
            if any(m < 0 for _, _, m in entries):
                raise DiagramError("multiplicities must be nonnegative")
            rows: dict[int, int] = {}
            for v, w, m in entries:
                rows[v] = rows.get(v, 0) + m
            if any(total == 0 for total in rows.values()):
                raise DiagramError("every described incidence row must be nonzero")
            norm.append(entries)
        object.__setattr__(self, "levels", tuple(norm))

    def level_rows(self, n: int) -> dict[int, dict[int, int]]:
        if not 0 <= n < len(self.levels):
            raise WindowError(f"explicit-levels diagram has no level {n} matrix")
        rows: dict[int, dict[int, int]] = {}
        for v, w, m in self.levels[n]:
            if m > 0:
                rows.setdefault(v, {})[w] = rows.setdefault(v, {}).get(w, 0) + m
        return rows

    def incidence_row(self, n: int, v: int) -> Optional[list[tuple[int, int]]]:
        rows = self.level_rows(n)
        if v not in rows:
            return None
        return sorted(rows[v].items())

    def params_json(self) -> dict:
        return {"levels": [[list(e) for e in lvl] for lvl in self.levels]}


_FAMILIES = {
    "ak": lambda p: StationaryAK(int(p["a"]), int(p["k"])),
    "decreasing": lambda p: StationaryDecreasing(seq_from_json(p["diagonal"])),
    "increasing": lambda p: StationaryIncreasing(),
    "nonstationary-uniform": lambda p: NonStationaryUniform(seq_from_json(p["levels"])),
    "general-chain": lambda p: GeneralChain(
        tuple((int(n), int(i), int(v)) for n, i, v in p.get("entries", ())), int(p.get("default", 2))
    ),
    "explicit-finite": lambda p: ExplicitFinite(tuple(tuple(row) for row in p["matrix"])),
    "explicit-levels": lambda p: ExplicitLevels(
        tuple(tuple(tuple(e) for e in lvl) for lvl in p["levels"])
    ),
}


def diagram_from_json(doc: dict) -> tuple[DiagramSpec, Optional[Truncation]]:
    family = doc.get("family")
    if family not in _FAMILIES:
        raise DiagramError(f"unknown diagram family: {family!r}")
    spec = _FAMILIES[family](doc.get("params", {}))
    window = Truncation.from_json(doc["truncation"]) if "truncation" in doc else None
    return spec, window


# ---------------------------------------------------------------------------
# Incidence windows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelMatrix:
    """Window restriction of one incidence matrix F_n."""

    level: int
    entries: tuple[tuple[int, int, int], ...]  # (row v in V_{n+1}, col w in V_n, mult)
    complete_rows: frozenset[int]  # rows whose full support fits in the window
    max_vertex: int

    def row_map(self) -> dict[int, dict[int, int]]:
        rows: dict[int, dict[int, int]] = {}
        for v, w, m in self.entries:
            rows.setdefault(v, {})[w] = m
        return rows


def incidence(spec: DiagramSpec, n: int, window: Truncation) -> LevelMatrix:
    """Window restriction of F_n: entries with both endpoints <= max_vertex."""
    if n < 0 or n >= window.max_level:
        raise WindowError(f"level {n} outside window (max_level={window.max_level})")
    m = window.max_vertex
    entries: list[tuple[int, int, int]] = []
    complete: set[int] = set()
    count = spec.vertex_count(n + 1)
    top = m if count is None else min(m, count)
    for v in range(1, top + 1):
        row = spec.incidence_row(n, v)
        if row is None:
            continue
        kept = [(v, w, mult) for w, mult in row if w <= m and mult > 0]
        entries.extend(kept)
        if len(kept) == sum(1 for _, mult in row if mult > 0):
            complete.add(v)
    return LevelMatrix(n, tuple(sorted(entries)), frozenset(complete), m)


# ---------------------------------------------------------------------------
# Heights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeightsVector:
    """Tower heights H^(n): number of paths from level 0 into each vertex."""

    level: int
    values: dict[int, int]
    exact_width: int

    def value(self, i: int) -> int:
        if i not in self.values:
            raise WindowError(f"height at vertex {i}, level {self.level} is not certified")
        return self.values[i]


def heights(spec: DiagramSpec, n: int, window: Truncation) -> HeightsVector:
    """Exact tower heights at level n for the vertices of the window.

    For odometer chains the recursion only looks at vertices i..i+n (the
    matrices are upper bidiagonal), so the computation widens its own scratch
    window and every requested entry comes out exact.
    """
    if n < 0 or n > window.max_level:
        raise WindowError(f"level {n} outside window (max_level={window.max_level})")
    m = window.max_vertex

    if spec.is_odometer_chain:
        width = m + n  # dependence cone of the bidiagonal recursion
        h = [1] * (width + 2)  # h[i] = H^(l)_i, 1-based
        for lvl in range(n):
            top = width - lvl
            nxt = [0] * (width + 2)
            for i in range(1, top + 1):
                nxt[i] = spec.vertical_edges(lvl, i) * h[i] + h[i + 1]
            h = nxt
        return HeightsVector(n, {i: h[i] for i in range(1, m + 1)}, m)

    if isinstance(spec, ExplicitFinite):
        size = spec.size
        h = {i: 1 for i in range(1, size + 1)}
        for lvl in range(n):
            nxt = {}
            for v in range(1, size + 1):
                nxt[v] = sum(mult * h[w] for w, mult in spec.incidence_row(lvl, v))
            h = nxt
        return HeightsVector(n, h, size)

    if isinstance(spec, ExplicitLevels):
        certified: Optional[dict[int, int]] = None  # None = level 0, all ones
        for lvl in range(n):
            rows = spec.level_rows(lvl)
            nxt = {}
            for v, row in rows.items():
                if certified is None:
                    nxt[v] = sum(row.values())
                elif all(w in certified for w in row):
                    nxt[v] = sum(mult * certified[w] for w, mult in row.items())
            certified = nxt
        if certified is None:
            certified = {i: 1 for i in range(1, m + 1)}
        values = {i: certified[i] for i in certified if i <= m}
        width = 0
        while (width + 1) in values:
            width += 1
        if width == 0 and n > 0:
            raise WindowError(f"window too small to certify any height at level {n}")
        return HeightsVector(n, values, width)

    raise DiagramError(f"heights not implemented for family {spec.family}")


# ---------------------------------------------------------------------------
# Telescoping
# ---------------------------------------------------------------------------


def telescope(spec: DiagramSpec, breakpoints: Iterable[int], window: Truncation) -> ExplicitLevels:
    """Collapse levels between consecutive breakpoints, composing edges.

    The output level-k matrix is the product F_{n_{k+1}-1} ... F_{n_k}; only
    rows certified exact inside the window are emitted.
    """
    pts = list(breakpoints)
    if not pts or pts[0] != 0:
        raise DiagramError("breakpoints must start at 0")
    if any(b >= c for b, c in zip(pts, pts[1:])):
        raise DiagramError("breakpoints must be strictly increasing")
    if pts[-1] > window.max_level:
        raise WindowError("breakpoints exceed the window")

    out_levels = []
    for n_k, n_next in zip(pts, pts[1:]):
        # product[v] maps w -> number of paths from (n_k, w) to (current, v)
        product: dict[int, dict[int, int]] = {}
        complete: dict[int, bool] = {}
        for v in range(1, window.max_vertex + 1):
            product[v] = {v: 1}
            complete[v] = True
        for lvl in range(n_k, n_next):
            mat = incidence(spec, lvl, window)
            rows = mat.row_map()
            nxt: dict[int, dict[int, int]] = {}
            nxt_complete: dict[int, bool] = {}
            for v, row in rows.items():
                acc: dict[int, int] = {}
                ok = v in mat.complete_rows
                for u, mult in row.items():
                    if u not in product:
                        ok = False
                        continue
                    ok = ok and complete[u]
                    for w, c in product[u].items():
                        acc[w] = acc.get(w, 0) + mult * c
                nxt[v] = acc
                nxt_complete[v] = ok
            product, complete = nxt, nxt_complete
        entries = tuple(
            (v, w, c)
            for v in sorted(product)
            if complete[v]
            for w, c in sorted(product[v].items())
            if c > 0
        )
        if not entries:
            raise WindowError(
                f"telescoping between levels {n_k} and {n_next} cannot be certified in this window"
            )
        out_levels.append(entries)
    return ExplicitLevels(tuple(out_levels))


# ---------------------------------------------------------------------------
# Brute-force path counting (independent oracle for heights)
# ---------------------------------------------------------------------------


def count_paths_bruteforce(
    spec: DiagramSpec, target: VertexId, window: Truncation, budget: int = 200_000
) -> int:
    """Count paths from level 0 into ``target`` by explicit enumeration.

    Walks every edge sequence one at a time (no closed form, no memoization)
    so it can serve as an independent check of :func:`heights`.  Raises
    :class:`WorkBudgetError` once more than ``budget`` edge steps are taken.
    """
    if target.level > 12:
        raise DiagramError("brute-force enumeration is limited to level <= 12")
    if target.level > window.max_level:
        raise WindowError("target outside window")

    steps = 0

    def descend(level: int, vertex: int) -> int:
        nonlocal steps
        if level == 0:
            return 1
        count = spec.vertex_count(level - 1)
        total = 0
        if spec.is_odometer_chain:
            incoming = [(vertex, spec.vertical_edges(level - 1, vertex)), (vertex + 1, 1)]
        else:
            row = spec.incidence_row(level - 1, vertex)
            if row is None:
                raise WindowError(f"incidence row for vertex {vertex} at level {level - 1} unknown")
            incoming = row
        for src, mult in incoming:
            if count is not None and src > count:
                continue
            for _ in range(mult):
                steps += 1
                if steps > budget:
                    raise WorkBudgetError(f"enumeration exceeded budget of {budget} steps")
                total += descend(level - 1, src)
        return total

    return descend(target.level, target.index)

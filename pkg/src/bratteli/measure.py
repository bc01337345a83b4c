"""Tail-invariant measures as level vector sequences.

A tail-invariant measure assigning finite values to cylinder sets is the same
data as a sequence of nonnegative vectors p^(n) with F_n^T p^(n+1) = p^(n);
the value of a cylinder depends only on its end vertex and length.  This
module represents such measures, evaluates cylinders, checks the defining
relation exactly, and builds the canonical probability measure carried by a
single odometer of an odometer chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .diagram import DiagramSpec, DiagramError, Truncation, WindowError

Rational = Fraction  # exact arithmetic substrate; always stored in lowest terms


# ---------------------------------------------------------------------------
# Cylinders
# ---------------------------------------------------------------------------

VERTICAL = "v"
DIAGONAL = "f"


@dataclass(frozen=True)
class EndVertex:
    """The tail-invariant cylinder abbreviation: length m, end vertex index.

    A length-m cylinder is determined by a path of m edges ending at a vertex
    of level m; by tail invariance its measure depends only on (m, index).
    ``EndVertex(0, i)`` is the trivial cylinder of all paths starting at i.
    """

    length: int
    index: int

    def __post_init__(self):
        if self.length < 0 or self.index < 1:
            raise DiagramError("cylinder needs length >= 0 and index >= 1")


@dataclass(frozen=True)
class ExplicitPath:
    """A concrete finite path on an odometer chain.

    ``edges[l]`` is the level-l edge: ``("v", k)`` takes the k-th vertical
    edge (1-based), ``("f", 0)`` the single diagonal edge, which lowers the
    vertex index by one going up.
    """

    start: int
    edges: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if self.start < 1:
            raise DiagramError("path start index must be >= 1")
        idx = self.start
        for kind, _ in self.edges:
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

    def end(self) -> EndVertex:
        return EndVertex(len(self.edges), self.vertex_at(len(self.edges)))

    def validate(self, spec: DiagramSpec) -> None:
        """Check edge indices against the multiplicities of ``spec``."""
        idx = self.start
        for level, (kind, k) in enumerate(self.edges):
            if kind == VERTICAL:
                mult = spec.vertical_edges(level, idx)
                if not 1 <= k <= mult:
                    raise DiagramError(
                        f"vertical edge {k} out of range 1..{mult} at level {level}, vertex {idx}"
                    )
            else:
                idx -= 1


CylinderSpec = Union[EndVertex, ExplicitPath]


def as_end_vertex(cyl: CylinderSpec) -> EndVertex:
    """Canonical query form: every cylinder reduces to (length, end vertex)."""
    return cyl if isinstance(cyl, EndVertex) else cyl.end()


# ---------------------------------------------------------------------------
# Measure vectors
# ---------------------------------------------------------------------------


class MeasureVectors:
    """Level-indexed family of exact rational vectors p^(n).

    ``width(n)`` is the certified width at level n: entries 1..width(n) are
    exact.  Values may be given as a table or generated lazily from a closed
    form.
    """

    def __init__(
        self,
        value_fn: Callable[[int, int], Fraction],
        max_level: int,
        width_fn: Callable[[int], int],
        label: str = "vectors",
    ):
        self._value_fn = value_fn
        self.max_level = max_level
        self._width_fn = width_fn
        self.label = label

    @classmethod
    def from_table(cls, table: dict[int, dict[int, Fraction]], label: str = "vectors") -> "MeasureVectors":
        levels = sorted(table)
        if levels != list(range(len(levels))):
            raise DiagramError("measure vector table must cover levels 0..N contiguously")

        def width(n: int) -> int:
            row = table[n]
            w = 0
            while (w + 1) in row:
                w += 1
            return w

        return cls(lambda n, i: Fraction(table[n][i]), len(levels) - 1, width, label)

    @classmethod
    def from_function(
        cls,
        fn: Callable[[int, int], Fraction],
        window: Truncation,
        label: str = "vectors",
    ) -> "MeasureVectors":
        return cls(fn, window.max_level, lambda n: window.max_vertex, label)

    def width(self, level: int) -> int:
        if level < 0 or level > self.max_level:
            return 0
        return self._width_fn(level)

    def value(self, level: int, index: int) -> Fraction:
        if level < 0 or level > self.max_level or index < 1 or index > self.width(level):
            raise WindowError(f"measure vector entry (level={level}, vertex={index}) is not certified")
        val = Fraction(self._value_fn(level, index))
        if val < 0:
            raise DiagramError("measure vectors must be nonnegative")
        return val

    def perturbed(self, level: int, index: int, delta: Fraction) -> "MeasureVectors":
        base = self

        def fn(n: int, i: int) -> Fraction:
            v = base._value_fn(n, i)
            return v + delta if (n, i) == (level, index) else v

        return MeasureVectors(fn, base.max_level, base._width_fn, label=f"{base.label}+perturbation")


# ---------------------------------------------------------------------------
# Tail-invariance check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvarianceReport:
    """Exact per-level verdicts for F_n^T p^(n+1) = p^(n)."""

    levels: dict[int, bool]
    failures: tuple[tuple[int, int], ...]  # (level, vertex) of every violated row
    checked_rows: int

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def first_violation(self) -> Optional[tuple[int, int]]:
        return self.failures[0] if self.failures else None


def check_tail_invariance(spec: DiagramSpec, mv: MeasureVectors, window: Truncation) -> InvarianceReport:
    """Exact equality test of sum_v f^(n)_{v,w} p^(n+1)_v = p^(n)_w.

    The relation at level n, vertex w uses column w of F_n, i.e. the rows v
    whose support contains w.  Only rows certified on both sides are tested.
    """
    if mv.max_level < window.max_level:
        raise WindowError("measure vectors are narrower than the requested window")
    levels: dict[int, bool] = {}
    failures: list[tuple[int, int]] = []
    checked = 0
    for n in range(window.max_level):
        w_n = min(mv.width(n), window.max_vertex)
        w_next = mv.width(n + 1)
        level_ok = True
        for w in range(1, w_n + 1):
            # column w of F_n for an odometer chain: row w (vertical block)
            # and row w-1 (whose single diagonal entry sits in column w);
            # other families scan their rows for the column.
            if spec.is_odometer_chain:
                contributors = [(w, spec.vertical_edges(n, w))]
                if w >= 2:
                    contributors.append((w - 1, 1))
            else:
                count = spec.vertex_count(n + 1)
                contributors = []
                top = count if count is not None else w_next
                for v in range(1, top + 1):
                    row = spec.incidence_row(n, v)
                    if row is None:
                        contributors = None
                        break
                    mult = dict(row).get(w, 0)
                    if mult:
                        contributors.append((v, mult))
            if contributors is None:
                continue
            if any(v > w_next for v, _ in contributors):
                continue  # uncertified upstream entry; not checkable
            checked += 1
            lhs = sum((mult * mv.value(n + 1, v) for v, mult in contributors), Fraction(0))
            if lhs != mv.value(n, w):
                level_ok = False
                failures.append((n, w))
        levels[n] = level_ok
    return InvarianceReport(levels, tuple(failures), checked)


# ---------------------------------------------------------------------------
# Odometer measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OdometerMeasure:
    """The unique tail-invariant probability measure of one vertical odometer.

    A vertical cylinder of length m ending at the odometer's vertex has
    measure 1/(a_0 ... a_{m-1}); anything leaving the odometer has measure 0.
    """

    spec: DiagramSpec
    index: int

    def __post_init__(self):
        if not self.spec.is_odometer_chain:
            raise DiagramError("odometer measures require an odometer-chain diagram")
        if self.index < 1:
            raise DiagramError("odometer index must be >= 1")

    def level_denominator(self, m: int) -> int:
        out = 1
        for level in range(m):
            out *= self.spec.vertical_edges(level, self.index)
        return out

    def cylinder_value(self, cyl: CylinderSpec) -> Fraction:
        if isinstance(cyl, ExplicitPath):
            cyl.validate(self.spec)
            if any(kind == DIAGONAL for kind, _ in cyl.edges) or cyl.start != self.index:
                return Fraction(0)
            cyl = cyl.end()
        if cyl.index != self.index:
            return Fraction(0)
        return Fraction(1, self.level_denominator(cyl.length))

    def subdiagram_vectors(self, window: Truncation) -> MeasureVectors:
        """The vectors p^(n) of the measure on the one-vertex subdiagram."""
        i = self.index

        def fn(n: int, j: int) -> Fraction:
            return Fraction(1, self.level_denominator(n)) if j == i else Fraction(0)

        return MeasureVectors(fn, window.max_level, lambda n: max(window.max_vertex, i), label=f"odometer-{i}")


def odometer_measure(spec: DiagramSpec, index: int) -> OdometerMeasure:
    return OdometerMeasure(spec, index)


# ---------------------------------------------------------------------------
# Uniform cylinder evaluation
# ---------------------------------------------------------------------------


def cylinder_measure(measure, cyl: CylinderSpec, max_terms: int = 512):
    """Evaluate a cylinder under any measure object of this library.

    Returns an exact :class:`fractions.Fraction` when the measure is exact at
    that cylinder; extension measures may return a certified series result
    (finite interval, infinite, or undetermined) instead.
    """
    if isinstance(measure, MeasureVectors):
        end = as_end_vertex(cyl)
        return measure.value(end.length, end.index)
    if hasattr(measure, "cylinder_value"):
        try:
            return measure.cylinder_value(cyl, max_terms=max_terms)
        except TypeError:
            return measure.cylinder_value(cyl)
    raise DiagramError(f"cannot evaluate cylinders under {type(measure).__name__}")

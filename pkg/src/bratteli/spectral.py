"""Explicit eigenvectors for stationary odometer chains and their measures.

For a stationary chain the transpose A = F^T is lower bidiagonal, so an
eigenpair can be written down in closed form and verified row by row in exact
arithmetic: row 1 reads a_1 x_1 = lam x_1 and row i reads
x_{i-1} + a_i x_i = lam x_i.  A verified eigenpair induces a tail-invariant
measure whose cylinder values are x_v / lam^m; this module builds those
measures and checks their equality with extension measures on cylinder grids.

No eigensolver for infinite matrices is attempted: only constructive closed
forms (and user-supplied ones) are accepted, and windows bound verification,
never the representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .diagram import DiagramError, DiagramSpec, Truncation
from .extension import (
    FINITE,
    UNDETERMINED,
    ConvergenceResult,
    extended_cylinder_measure,
)
from .measure import CylinderSpec, EndVertex, MeasureVectors, as_end_vertex
from .sequences import IntSequence


class EigenError(DiagramError):
    """Invalid eigenpair request or failed verification."""


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalue and a closed-form nonnegative eigenvector for A = F^T.

    ``component(i)`` returns the exact i-th entry (1-based) for any index;
    ``checked_to`` records how far the defining equations have been verified.
    """

    lam: Fraction
    component: Callable[[int], Fraction]
    label: str = "eigenpair"
    checked_to: int = 0

    def xi(self, i: int) -> Fraction:
        if i < 1:
            raise EigenError("eigenvector entries are indexed from 1")
        val = Fraction(self.component(i))
        if val < 0:
            raise EigenError("eigenvector entries must be nonnegative")
        return val

    def scaled(self, factor: Fraction) -> "EigenPair":
        if factor <= 0:
            raise EigenError("scaling factor must be positive")
        base = self.component
        return EigenPair(self.lam, lambda i: factor * base(i), f"{self.label} * {factor}", self.checked_to)


def eigenvector_ak(a: int, k: int) -> EigenPair:
    """The eigenpair lam = a, xi_i = k^-(i-1) of the two-parameter chain.

    For k = 1 this is the all-ones vector: the induced measure is infinite in
    total but still finite on every cylinder.
    """
    if a < 2 or k < 1 or a - k <= 1:
        raise EigenError("need a >= 2, k >= 1 and a - k > 1")
    return EigenPair(Fraction(a), lambda i: Fraction(1, k ** (i - 1)), f"ak(a={a},k={k})")


def eigenvector_decreasing(diag: IntSequence, shift: int = 1, check_to: int = 64) -> EigenPair:
    """Eigenpair lam = a_m for a vertex-indexed diagonal dominated from m.

    Entries: zeros below m, 1 at m, then running products of 1/(a_m - a_j).
    Requires a_m > a_j for all j > m, validated up to ``check_to``.
    """
    if shift < 1:
        raise EigenError("shift must be >= 1")
    a_m = diag.value(shift - 1)
    for j in range(shift + 1, check_to + 1):
        if diag.value(j - 1) >= a_m:
            raise EigenError(
                f"dominance violated: a_{shift}={a_m} is not greater than a_{j}={diag.value(j - 1)}"
            )

    def component(i: int) -> Fraction:
        if i < shift:
            return Fraction(0)
        out = Fraction(1)
        for j in range(shift + 1, i + 1):
            out /= a_m - diag.value(j - 1)
        return out

    return EigenPair(Fraction(a_m), component, f"decreasing(shift={shift},lam={a_m})")


@dataclass(frozen=True)
class ResidualReport:
    """Exact residuals (A xi)_i - lam xi_i per row; verified means all zero."""

    residuals: dict[int, Fraction]
    nonzero: tuple[int, ...]

    @property
    def verified(self) -> bool:
        return not self.nonzero


def _require_stationary_chain(spec: DiagramSpec) -> IntSequence:
    if not spec.is_odometer_chain or spec.vertex_diag is None:
        raise EigenError("eigen verification needs a stationary odometer chain")
    return spec.vertex_diag


def verify_eigenpair(spec: DiagramSpec, pair: EigenPair, window: Truncation) -> ResidualReport:
    """Row residuals of A xi = lam xi over rows 1..window.max_vertex, exact.

    A is lower bidiagonal, so row i only involves xi_{i-1} and xi_i and every
    in-window row is fully certifiable.
    """
    diag = _require_stationary_chain(spec)
    residuals: dict[int, Fraction] = {}
    nonzero: list[int] = []
    for i in range(1, window.max_vertex + 1):
        acc = diag.value(i - 1) * pair.xi(i)
        if i >= 2:
            acc += pair.xi(i - 1)
        res = acc - pair.lam * pair.xi(i)
        residuals[i] = res
        if res != 0:
            nonzero.append(i)
    return ResidualReport(residuals, tuple(nonzero))


@dataclass(frozen=True)
class EigenMeasure:
    """Tail-invariant measure with cylinder values xi_v / lam^m."""

    spec: DiagramSpec
    pair: EigenPair

    def cylinder_value(self, cyl: CylinderSpec) -> Fraction:
        end = as_end_vertex(cyl)
        return self.pair.xi(end.index) / self.pair.lam**end.length

    def measure_vectors(self, window: Truncation) -> MeasureVectors:
        pair = self.pair

        def fn(n: int, i: int) -> Fraction:
            return pair.xi(i) / pair.lam**n

        return MeasureVectors(fn, window.max_level, lambda n: window.max_vertex, label=pair.label)


def eigen_measure(spec: DiagramSpec, pair: EigenPair, window: Optional[Truncation] = None) -> EigenMeasure:
    """Build the induced measure after verifying the pair on the window."""
    window = window or Truncation(8, 100)
    report = verify_eigenpair(spec, pair, window)
    if not report.verified:
        raise EigenError(
            f"eigenpair rejected: nonzero residuals at rows {report.nonzero[:5]}"
        )
    return EigenMeasure(spec, pair)


# ---------------------------------------------------------------------------
# Eigen measure vs. extension measure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CylinderComparison:
    cylinder: EndVertex
    eigen_value: Fraction
    extension: ConvergenceResult
    verdict: str  # equal-exact / equal-within-tail / mismatch / skipped-undetermined


@dataclass(frozen=True)
class ComparisonReport:
    entries: tuple[CylinderComparison, ...]

    @property
    def all_equal(self) -> bool:
        return all(e.verdict.startswith("equal") for e in self.entries)

    @property
    def skipped(self) -> tuple[EndVertex, ...]:
        return tuple(e.cylinder for e in self.entries if e.verdict == "skipped-undetermined")


def compare_eigen_vs_extension(
    spec: DiagramSpec,
    i: int,
    pair: EigenPair,
    cylinders: list[CylinderSpec],
    max_terms: int = 512,
    tail_threshold: Fraction = Fraction(1, 10**9),
) -> ComparisonReport:
    """Per-cylinder comparison of xi_v/lam^m with the certified extension value.

    Equality is declared when the extension value is exactly the eigen value,
    or when the certified interval contains it with a tail bound below
    ``tail_threshold``.  Undetermined series are skipped and flagged.
    """
    _require_stationary_chain(spec)
    entries = []
    for cyl in cylinders:
        end = as_end_vertex(cyl)
        eigen_val = pair.xi(end.index) / pair.lam**end.length
        ext = extended_cylinder_measure(spec, i, end, max_terms)
        if ext.status == UNDETERMINED:
            verdict = "skipped-undetermined"
        elif ext.status != FINITE:
            verdict = "mismatch"
        elif ext.is_exact:
            verdict = "equal-exact" if ext.exact_value == eigen_val else "mismatch"
        elif ext.contains(eigen_val) and ext.tail_bound <= tail_threshold:
            verdict = "equal-within-tail"
        else:
            verdict = "mismatch"
        entries.append(CylinderComparison(end, eigen_val, ext, verdict))
    return ComparisonReport(tuple(entries))

"""Measure extension from subdiagrams with certified convergence.

The total mass of the canonical extension of a subdiagram measure is

    1 + sum over levels n of sum over v in W_{n+1}, w outside W_n of
        f^(n)_{v,w} * H^(n)_w * p^(n+1)_v

a series of nonnegative rational terms.  For one odometer of an odometer
chain this collapses to  sum_n H^(n)_{i+1} / (a_0(i) ... a_n(i)).

The engine never reports a finite or infinite verdict without a certificate:

* exact closed forms (geometric and negative-binomial series, where the term
  law is exact by the height recursion);
* a verified ratio bound t_{n+1}/t_n <= q < 1 whose persistence follows from
  the family's term recurrence;
* geometric domination of the exact terms, t_n <= K * rho^n / a^(n+1), with K
  built by a backward induction over the finitely many vertices whose
  multiplicities exceed the eventual tail value;
* comparison against sum 1/a_n with an integral tail bound, for polynomially
  growing level sequences;
* for divergence, terms eventually nondecreasing and bounded below, a block
  lower bound for harmonic-type series, or a climb bound (paths may take
  diagonal steps to a dominating odometer, pinning terms above a positive
  rational).

Anything else comes back Undetermined, with exact partial sums attached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .diagram import (
    DiagramError,
    DiagramSpec,
    StationaryAK,
    Truncation,
    WindowError,
    heights,
)
from .measure import CylinderSpec, EndVertex, MeasureVectors, as_end_vertex
from .sequences import Arithmetic, Constant, Geometric, IntSequence, Polynomial, Table

FINITE = "finite"
INFINITE = "infinite"
UNDETERMINED = "undetermined"

DEFAULT_MAX_TERMS = 512

# stop refining once the certified tail is this small relative to the sum
_NEGLIGIBLE = Fraction(1, 10**40)


class CertificateError(DiagramError):
    """A certificate failed its own verification (internal inconsistency)."""


@dataclass(frozen=True)
class ConvergenceResult:
    """Certified outcome of a nonnegative series.

    ``finite``: the true value lies in [partial_sum, partial_sum+tail_bound];
    ``exact_value`` is set when the certificate pins the sum exactly.
    ``infinite``: ``divergence_witness`` describes the verified lower-bound
    argument.  ``undetermined``: only the exact partial sum is known.
    """

    status: str
    partial_sum: Fraction
    terms_used: int
    tail_bound: Optional[Fraction] = None
    divergence_witness: Optional[str] = None
    certificate: Optional[str] = None
    exact_value: Optional[Fraction] = None

    def interval(self) -> tuple[Fraction, Optional[Fraction]]:
        if self.status == FINITE:
            return (self.partial_sum, self.partial_sum + self.tail_bound)
        return (self.partial_sum, None)

    def contains(self, value: Fraction) -> bool:
        lo, hi = self.interval()
        return self.status == FINITE and lo <= value <= hi

    @property
    def is_exact(self) -> bool:
        return self.exact_value is not None


def _finite(partial, terms, tail, cert, exact=None) -> ConvergenceResult:
    if tail < 0:
        raise CertificateError("negative tail bound")
    return ConvergenceResult(FINITE, partial, terms, tail_bound=tail, certificate=cert, exact_value=exact)


def _infinite(partial, terms, witness, cert) -> ConvergenceResult:
    return ConvergenceResult(INFINITE, partial, terms, divergence_witness=witness, certificate=cert)


def _undetermined(partial, terms, note=None) -> ConvergenceResult:
    return ConvergenceResult(UNDETERMINED, partial, terms, certificate=note)


def _exact0() -> ConvergenceResult:
    return _finite(Fraction(0), 0, Fraction(0), "disjoint-support", exact=Fraction(0))


def _geometric_cutoff(q: Fraction, scale: Fraction) -> int:
    """Terms after which a q-geometric tail drops below scale * 1e-40."""
    m = 8
    while m < 4096 and q**m > scale * _NEGLIGIBLE:
        m *= 2
    return m


# ---------------------------------------------------------------------------
# Subdiagrams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubdiagramSpec:
    """Vertex subdiagram: one nonempty proper vertex set per level.

    ``odometer(i)`` is the one-vertex-per-level subdiagram {i}; the general
    form lists explicit finite sets for levels 0..L.
    """

    levels: Optional[tuple[frozenset[int], ...]] = None
    singleton: Optional[int] = None

    def __post_init__(self):
        if (self.levels is None) == (self.singleton is None):
            raise DiagramError("subdiagram needs either explicit level sets or a singleton index")
        if self.levels is not None:
            if any(not s for s in self.levels):
                raise DiagramError("subdiagram level sets must be nonempty")
            object.__setattr__(self, "levels", tuple(frozenset(s) for s in self.levels))
        if self.singleton is not None and self.singleton < 1:
            raise DiagramError("odometer index must be >= 1")

    @classmethod
    def odometer(cls, i: int) -> "SubdiagramSpec":
        return cls(singleton=i)

    def at(self, n: int) -> frozenset[int]:
        if self.singleton is not None:
            return frozenset((self.singleton,))
        if n >= len(self.levels):
            raise WindowError(f"subdiagram not described at level {n}")
        return self.levels[n]

    def described_levels(self) -> Optional[int]:
        return None if self.singleton is not None else len(self.levels)


# ---------------------------------------------------------------------------
# Term streams
# ---------------------------------------------------------------------------


def _odometer_denominators(spec: DiagramSpec, i: int, count: int) -> list[int]:
    """Partial products a_0(i) ... a_n(i) for n = 0..count-1."""
    out, acc = [], 1
    for n in range(count):
        acc *= spec.vertical_edges(n, i)
        out.append(acc)
    return out


def _heights_of_vertex(spec: DiagramSpec, v0: int, count: int) -> list[int]:
    """H^(n)_{v0} for n = 0..count-1, exact.

    Vertex-indexed families with an eventually constant diagonal use the
    closed form H^(n)_v = (tau+1)^n for v in the constant range, so the
    recursion only tracks the finitely many vertices below that range;
    otherwise the full dependence cone is walked.
    """
    diag = spec.vertex_diag
    if diag is not None:
        cf = diag.constant_from()
        if cf is not None:
            first, tau = cf
            v_const = first + 1  # diagonal equals tau for vertices >= v_const
            if v0 >= v_const:
                # entirely inside the constant range: pure closed form
                return [(tau + 1) ** n for n in range(count)]
            # track vertices v0..v_const-1; the closed form feeds the top
            vals = {v: 1 for v in range(v0, v_const)}
            const_pow = 1  # (tau+1)^n, the previous level's value at v_const
            out = [1]
            for n in range(1, count):
                nxt = {}
                for v in range(v0, v_const):
                    upper = const_pow if v + 1 >= v_const else vals[v + 1]
                    nxt[v] = spec.vertical_edges(n - 1, v) * vals[v] + upper
                const_pow *= tau + 1
                vals = nxt
                out.append(vals[v0])
            return out
    level = spec.level_diag
    if level is not None:
        out, acc = [1], 1
        for n in range(1, count):
            acc *= level.value(n - 1) + 1
            out.append(acc)
        return out
    # general cone recursion
    width = v0 + count
    h = {v: 1 for v in range(v0, width + 1)}
    out = [1]
    for n in range(1, count):
        nxt = {}
        for v in range(v0, width - n + 1):
            nxt[v] = spec.vertical_edges(n - 1, v) * h[v] + h[v + 1]
        h = nxt
        out.append(h[v0])
    return out


def mass_series_terms(spec: DiagramSpec, i: int, count: int) -> list[Fraction]:
    """Exact terms H^(n)_{i+1} / (a_0(i) ... a_n(i)) of the mass series."""
    if not spec.is_odometer_chain:
        raise DiagramError("mass series terms are defined for odometer chains")
    hs = _heights_of_vertex(spec, i + 1, count)
    dens = _odometer_denominators(spec, i, count)
    return [Fraction(h, d) for h, d in zip(hs, dens)]


def _verify_nondecreasing(terms: list[Fraction], n0: int) -> None:
    for n in range(n0, len(terms) - 1):
        if terms[n + 1] < terms[n]:
            raise CertificateError(f"terms decrease at n={n}, contradicting the certificate")
    if n0 < len(terms) and terms[n0] <= 0:
        raise CertificateError("nondecreasing certificate needs a positive starting term")


# ---------------------------------------------------------------------------
# Vertex-indexed families (stationary odometer chains)
# ---------------------------------------------------------------------------


def _mass_vertex_table(spec: DiagramSpec, i: int, max_terms: int) -> ConvergenceResult:
    diag = spec.vertex_diag
    a_i = diag.value(i - 1)
    lead = Fraction(1)
    cf = diag.constant_from()

    if cf is not None:
        v_const = cf[0] + 1
        tau = cf[1]
        if i + 1 >= v_const:
            # heights of vertex i+1 are exactly (tau+1)^n: a geometric series
            t0 = Fraction(1, a_i)
            q = Fraction(tau + 1, a_i)
            if q < 1:
                total = t0 / (1 - q)
                used = min(max_terms, _geometric_cutoff(q, total))
                partial = t0 * (1 - q**used) / (1 - q)
                return _finite(
                    lead + partial,
                    used,
                    total - partial,
                    "geometric-exact",
                    exact=lead + total,
                )
            m = min(max_terms, 48)
            terms = [t0 * q**n for n in range(m)]
            _verify_nondecreasing(terms, 0)
            witness = (
                f"terms are exactly {t0} * ({q})^n with ratio {q} >= 1, "
                f"hence nondecreasing and bounded below by {t0}"
            )
            return _infinite(lead + sum(terms), m, witness, "geometric-exact")

        if diag.value(i) >= a_i:
            return _nondecreasing_mass(spec, i, a_i, diag.value(i), max_terms, lead)
        # divergence via the diagonal climb: paths may spend d diagonal steps
        # to reach a vertex w, so H^(n)_{i+1} >= H^(n-d)_w; any odometer at
        # least as big as a_i, or a constant tail with tau+1 >= a_i, keeps
        # the terms bounded below by a positive rational
        for w in range(i + 2, v_const):
            a_w = diag.value(w - 1)
            if a_w >= a_i:
                e = w - i - 1
                eps = Fraction(1, a_w**e * a_i)
                why = (
                    f"H^(n)_{i + 1} >= a_{w}^(n-{e}) = {a_w}^(n-{e}) by climbing to "
                    f"odometer {w}, and {a_w} >= {a_i}, so t_n >= {eps} for n >= {e}"
                )
                return _climb_infinite(spec, i, e, eps, why, max_terms, lead)
        if tau + 1 >= a_i:
            d = v_const - i - 1
            eps = Fraction(1, (tau + 1) ** d * a_i)
            why = (
                f"H^(n)_{i + 1} >= ({tau}+1)^(n-{d}) by climbing into the constant "
                f"range at vertex {v_const}, and {tau + 1} >= {a_i}, so t_n >= {eps} for n >= {d}"
            )
            return _climb_infinite(spec, i, d, eps, why, max_terms, lead)
        # every multiplicity above i is smaller than a_i: geometric domination
        rho_raw = max([tau + 1] + [diag.value(v - 1) for v in range(i + 1, v_const)])
        rho = Fraction(rho_raw + a_i, 2)
        k_bound = Fraction(1)
        for v in range(v_const - 1, i, -1):
            k_bound = max(Fraction(1), k_bound / (rho - diag.value(v - 1)))
        return _dominated_sum(
            terms_fn=lambda count: mass_series_terms(spec, i, count),
            k_bound=k_bound,
            rho=rho,
            denom=Fraction(a_i),
            max_terms=max_terms,
            lead=lead,
        )

    # no eventual constant (unbounded diagonal, e.g. 2,3,4,...)
    if diag.value(i) >= a_i:
        return _nondecreasing_mass(spec, i, a_i, diag.value(i), max_terms, lead)
    for w in range(i + 2, i + 66):
        a_w = diag.value(w - 1)
        if a_w >= a_i:
            e = w - i - 1
            eps = Fraction(1, a_w**e * a_i)
            why = (
                f"H^(n)_{i + 1} >= {a_w}^(n-{e}) by climbing to odometer {w}, "
                f"and {a_w} >= {a_i}, so t_n >= {eps} for n >= {e}"
            )
            return _climb_infinite(spec, i, e, eps, why, max_terms, lead)
    return _undetermined(
        lead + sum(mass_series_terms(spec, i, min(max_terms, 64))),
        min(max_terms, 64),
        "diagonal sequence has no tail rule usable for certification",
    )


def _nondecreasing_mass(spec, i, a_i, a_next, max_terms, lead) -> ConvergenceResult:
    m = min(max_terms, 48)
    terms = mass_series_terms(spec, i, m)
    _verify_nondecreasing(terms, 0)
    witness = (
        f"H^(n+1)_{i + 1} >= {a_next} * H^(n)_{i + 1} by the height recursion, so "
        f"t_(n+1)/t_n >= {a_next}/{a_i} >= 1 and every term is >= t_0 = {terms[0]}"
    )
    return _infinite(lead + sum(terms), m, witness, "nondecreasing-terms")


def _climb_infinite(spec, i, n0, eps, why, max_terms, lead) -> ConvergenceResult:
    m = min(max_terms, max(n0 + 8, 48))
    terms = mass_series_terms(spec, i, m)
    for n in range(n0, m):
        if terms[n] < eps:
            raise CertificateError(f"term {n} fell below its climb lower bound")
    return _infinite(lead + sum(terms), m, why, "climb-lower-bound")


def _dominated_sum(terms_fn, k_bound, rho, denom, max_terms, lead) -> ConvergenceResult:
    """Sum exact terms verified against t_n <= k_bound * rho^n / denom^(n+1)."""
    ratio = rho / denom
    if ratio >= 1:
        raise CertificateError("domination needs rho < denominator base")

    def tail_at(n: int) -> Fraction:
        return k_bound / denom * ratio**n / (1 - ratio)

    count = max_terms
    terms = terms_fn(count)
    partial = Fraction(0)
    bound = k_bound / denom  # k_bound * rho^n / denom^(n+1) at n=0
    used = 0
    for n, t in enumerate(terms):
        if t > bound:
            raise CertificateError(f"term {n} exceeds its domination bound")
        partial += t
        bound *= ratio
        used = n + 1
        if tail_at(used) <= (lead + partial) * _NEGLIGIBLE:
            break
    return _finite(lead + partial, used, tail_at(used), "geometric-domination")


# ---------------------------------------------------------------------------
# Level-indexed families (all odometers alike per level)
# ---------------------------------------------------------------------------


def _resolve_level_seq(seq: IntSequence) -> tuple[IntSequence, int]:
    """Peel table prefixes: returns (tail generator, global index where it starts)."""
    offset = 0
    while isinstance(seq, Table):
        if seq.tail is None:
            return seq, offset
        offset += len(seq.values)
        seq = seq.tail
    return seq, offset


def _poly_comparison(poly: Polynomial) -> tuple[Fraction, int]:
    """Return (alpha, n1) with poly(u) >= alpha*(u+1)^2 for all u >= n1.

    alpha is half the leading coefficient; n1 comes from a root bound of the
    difference polynomial, beyond which it is positive.
    """
    deg = poly.degree()
    if deg < 2:
        raise CertificateError("comparison certificate needs degree >= 2")
    alpha = Fraction(poly.coeffs[deg], 2)
    # difference = poly(u) - alpha*(u+1)^2, coefficients in Fractions
    diff = [Fraction(c) for c in poly.coeffs] + [Fraction(0)] * 2
    diff[0] -= alpha
    diff[1] -= 2 * alpha
    diff[2] -= alpha
    while len(diff) > 1 and diff[-1] == 0:
        diff.pop()
    top = diff[-1]
    if top <= 0:
        raise CertificateError("difference polynomial must have a positive leading coefficient")
    n1 = 1 + max((abs(c) / top for c in diff[:-1]), default=Fraction(0))
    return alpha, math.ceil(n1)


def _mass_level_uniform(spec: DiagramSpec, i: int, max_terms: int) -> ConvergenceResult:
    levels = spec.level_diag
    lead = Fraction(1)
    tail_seq, start = _resolve_level_seq(levels)

    def exact_terms(count: int) -> list[Fraction]:
        out, prod_plus, prod_a = [], 1, 1
        for n in range(count):
            a_n = spec.vertical_edges(n, i)
            out.append(Fraction(prod_plus, prod_a * a_n))
            prod_plus *= a_n + 1
            prod_a *= a_n
        return out

    if isinstance(tail_seq, (Constant,)) or (
        isinstance(tail_seq, Arithmetic) and tail_seq.step == 0
    ) or (isinstance(tail_seq, Geometric) and tail_seq.ratio == 1) or (
        isinstance(tail_seq, Polynomial) and tail_seq.degree() == 0
    ):
        m = min(max_terms, max(start + 8, 48))
        terms = exact_terms(m)
        _verify_nondecreasing(terms, start)
        c = tail_seq.value(0) if not isinstance(tail_seq, Constant) else tail_seq.c
        witness = (
            f"for n >= {start} the term ratio is (a_n+1)/a_(n+1) = ({c}+1)/{c} > 1, "
            f"so terms are nondecreasing and bounded below by {terms[start]}"
        )
        return _infinite(lead + sum(terms), m, witness, "nondecreasing-terms")

    if isinstance(tail_seq, Arithmetic):
        s, d = tail_seq.start, tail_seq.step
        if d < 0:
            return _undetermined(lead, 0, "decreasing level sequence has no certificate")
        if d == 1:
            m = min(max_terms, max(start + 8, 48))
            terms = exact_terms(m)
            _verify_nondecreasing(terms, start)
            witness = (
                f"for n >= {start} the term ratio is (a_n+1)/a_(n+1) = 1 exactly, "
                f"so the terms stay at {terms[start]} > 0"
            )
            return _infinite(lead + sum(terms), m, witness, "nondecreasing-terms")
        m = min(max_terms, max(start + 8, 48))
        terms = exact_terms(m)
        delta = Fraction(1, s + 2 * d)
        witness = (
            f"t_n >= 1/a_n = 1/({s} + {d}(n-{start})) for n >= {start}; every block "
            f"N <= n <= 2N contributes at least {delta}, so partial sums are unbounded"
        )
        for n in range(start, m):
            if terms[n] < Fraction(1, spec.vertical_edges(n, i)):
                raise CertificateError("term fell below its harmonic lower bound")
        return _infinite(lead + sum(terms), m, witness, "block-lower-bound")

    if isinstance(tail_seq, Geometric) and tail_seq.ratio >= 2:
        # term ratio (a_n+1)/a_(n+1) is strictly decreasing along the tail,
        # so a single observed ratio bounds every later one
        min_used = max(start + 2, 2)
        partial, used = Fraction(0), 0
        prod_plus, prod_a = 1, 1
        last_t = Fraction(0)
        cap = min(max_terms, 512)
        while used < cap:
            a_n = spec.vertical_edges(used, i)
            last_t = Fraction(prod_plus, prod_a * a_n)
            partial += last_t
            prod_plus *= a_n + 1
            prod_a *= a_n
            used += 1
            if used < min_used:
                continue
            q = Fraction(spec.vertical_edges(used - 1, i) + 1, spec.vertical_edges(used, i))
            if q < 1 and last_t * q / (1 - q) <= (lead + partial) * _NEGLIGIBLE:
                break
        q = Fraction(spec.vertical_edges(used - 1, i) + 1, spec.vertical_edges(used, i))
        if q >= 1:
            return _undetermined(lead + partial, used, "geometric tail too slow in this window")
        tail = last_t * q / (1 - q)
        return _finite(lead + partial, used, tail, "ratio-bound (ratio decreasing along the tail)")

    if isinstance(tail_seq, Polynomial) and tail_seq.degree() >= 2:
        alpha, n1 = _poly_comparison(tail_seq)
        m_local = max(n1, math.ceil(2 / alpha) + 1, 256)
        m = start + m_local
        if m > max_terms:
            m = max_terms
            m_local = m - start
            if m_local < max(n1, math.ceil(2 / alpha) + 1):
                return _undetermined(
                    lead + sum(exact_terms(min(max_terms, 64))),
                    min(max_terms, 64),
                    "maxTerms too small for the comparison certificate",
                )
        terms = exact_terms(m)
        for n in range(start + n1, m):
            u = n - start
            if Fraction(tail_seq.value(u)) < alpha * (u + 1) ** 2:
                raise CertificateError("level sequence fell below its comparison envelope")
        s_bound = Fraction(1, 1) / (alpha * m_local)
        if s_bound >= 1:
            return _undetermined(lead + sum(terms), m, "comparison tail not yet below 1")
        prod = Fraction(1)
        for n in range(m):
            prod *= 1 + Fraction(1, spec.vertical_edges(n, i))
        tail = prod * s_bound / (1 - s_bound)
        return _finite(lead + sum(terms), m, tail, "comparison-with-reciprocal-sum")

    return _undetermined(
        lead + sum(exact_terms(min(max_terms, 64))),
        min(max_terms, 64),
        "level sequence has no tail rule usable for certification",
    )


# ---------------------------------------------------------------------------
# Public mass operations
# ---------------------------------------------------------------------------


def odometer_extension_mass(spec: DiagramSpec, i: int, max_terms: int = DEFAULT_MAX_TERMS) -> ConvergenceResult:
    """Total mass of the extension of odometer i's probability measure.

    Equals 1 + sum_n H^(n)_{i+1} / (a_0(i) ... a_n(i)), certified.
    """
    if not spec.is_odometer_chain:
        raise DiagramError("extension mass of an odometer requires an odometer chain")
    if i < 1:
        raise DiagramError("odometer index must be >= 1")
    if max_terms < 2:
        raise DiagramError("max_terms must be at least 2")
    if spec.vertex_diag is not None:
        return _mass_vertex_table(spec, i, max_terms)
    if spec.level_diag is not None:
        return _mass_level_uniform(spec, i, max_terms)
    m = min(max_terms, 64)
    return _undetermined(
        Fraction(1) + sum(mass_series_terms(spec, i, m)),
        m,
        "general multiplicity tables carry no certificate",
    )


def _check_subdiagram_invariance(
    spec: DiagramSpec, sub: SubdiagramSpec, p: MeasureVectors, levels: int
) -> None:
    for n in range(levels):
        w_n, w_next = sub.at(n), sub.at(n + 1)
        for w in sorted(w_n):
            lhs = Fraction(0)
            for v in sorted(w_next):
                row = spec.incidence_row(n, v)
                if row is None:
                    raise WindowError(f"incidence row {v} at level {n} unknown")
                lhs += dict(row).get(w, 0) * p.value(n + 1, v)
            if lhs != p.value(n, w):
                raise DiagramError(
                    f"vectors are not tail-invariant on the subdiagram (level {n}, vertex {w})"
                )
    total0 = sum((p.value(0, w) for w in sorted(sub.at(0))), Fraction(0))
    if total0 != 1:
        raise DiagramError("subdiagram measure must be a probability (level-0 values sum to 1)")


def extension_total_mass(
    spec: DiagramSpec,
    sub: SubdiagramSpec,
    p: MeasureVectors,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> ConvergenceResult:
    """Certified evaluation of the extension-mass series for a subdiagram.

    Terms are summed level by level, within a level by vertex index.  For the
    one-odometer subdiagram this delegates to the certified odometer engine;
    other subdiagrams get exact partial sums (their tails carry no generic
    certificate and come back Undetermined).
    """
    check_levels = min(8, p.max_level)
    if sub.described_levels() is not None:
        check_levels = min(check_levels, sub.described_levels() - 1)
    _check_subdiagram_invariance(spec, sub, p, check_levels)

    if sub.singleton is not None:
        return odometer_extension_mass(spec, sub.singleton, max_terms)

    levels = sub.described_levels() - 1
    levels = min(levels, p.max_level, max_terms)
    partial = Fraction(1)
    hv = None
    for n in range(levels):
        w_n, w_next = sub.at(n), sub.at(n + 1)
        # heights of the complement vertices feeding W_{n+1}
        needed = set()
        rows = {}
        for v in sorted(w_next):
            row = spec.incidence_row(n, v)
            if row is None:
                raise WindowError(f"incidence row {v} at level {n} unknown")
            rows[v] = row
            needed.update(w for w, mult in row if mult > 0 and w not in w_n)
        if needed:
            width = max(needed)
            hv = heights(spec, n, Truncation(max(n, 1) + 1, max(width, 2)))
        term = Fraction(0)
        for v in sorted(w_next):
            pv = p.value(n + 1, v)
            for w, mult in sorted(rows[v]):
                if w in w_n or mult == 0:
                    continue
                term += mult * hv.value(w) * pv
        partial += term
    return _undetermined(partial, levels, "no certificate for general subdiagrams")


# ---------------------------------------------------------------------------
# Extended measures on cylinders
# ---------------------------------------------------------------------------


def _cylinder_series_vertex_table(spec, i, m, j, max_terms) -> ConvergenceResult:
    diag = spec.vertex_diag
    a_i = diag.value(i - 1)
    d = j - i - 1
    zone = [diag.value(v - 1) for v in range(i + 1, j + 1)]

    def dp_terms(count: int) -> list[Fraction]:
        """Exact terms N_n(i+1) / (a_0(i)...a_n(i)) via the path DP."""
        n_vec = {v: 0 for v in range(i + 1, j + 1)}
        n_vec[j] = 1
        out = []
        den = a_i ** (m + 1)
        for n in range(m, m + count):
            out.append(Fraction(n_vec[i + 1], den))
            nxt = {}
            for v in range(i + 1, j + 1):
                nxt[v] = diag.value(v - 1) * n_vec[v] + n_vec.get(v + 1, 0)
            n_vec = nxt
            den *= a_i
        return out

    if all(val == zone[0] for val in zone):
        tau = zone[0]
        if tau < a_i:
            total = Fraction(1, a_i**m * (a_i - tau) ** (d + 1))
            # partial sums of C(n-m, d) tau^(n-m-d) / a_i^(n+1)
            partial = Fraction(0)
            used = 0
            binom, power, den = 1, 1, a_i ** (m + d + 1)
            for l in range(max_terms):  # series index n = m + d + l
                t = Fraction(binom * power, den)
                partial += t
                used = m + d + l + 1
                if total - partial <= total * _NEGLIGIBLE:
                    break
                binom = binom * (l + d + 1) // (l + 1)
                power *= tau
                den *= a_i
            return _finite(partial, used, total - partial, "negative-binomial-exact", exact=total)
        count = min(max_terms, 48)
        terms = dp_terms(count)
        _verify_nondecreasing(terms, d)
        witness = (
            f"from n = {m + d} on, t_n = C(n-{m},{d}) * {tau}^(n-{m}-{d}) / {a_i}^(n+1) with "
            f"{tau} >= {a_i}: nondecreasing and bounded below by {terms[d]}"
        )
        return _infinite(sum(terms), m + count, witness, "binomial-exact")

    rho_raw = max(zone)
    if rho_raw < a_i:
        rho = Fraction(rho_raw + a_i, 2)
        k_bound = Fraction(1) / rho**m
        for v in range(j - 1, i, -1):
            k_bound = k_bound / (rho - diag.value(v - 1))

        def shifted_terms(count: int) -> list[Fraction]:
            # align indices: term at series position n corresponds to rho^n
            return [Fraction(0)] * m + dp_terms(count - m if count > m else 0)

        return _dominated_sum(
            terms_fn=shifted_terms,
            k_bound=k_bound,
            rho=rho,
            denom=Fraction(a_i),
            max_terms=max(max_terms, m + 8),
            lead=Fraction(0),
        )
    if diag.value(i) >= a_i:
        count = min(max_terms, 48)
        terms = dp_terms(count)
        _verify_nondecreasing(terms, d)
        witness = (
            f"the path-count recursion gives t_(n+1)/t_n >= {diag.value(i)}/{a_i} >= 1 "
            f"once terms are positive (n >= {m + d})"
        )
        return _infinite(sum(terms), m + count, witness, "nondecreasing-terms")
    # some interior zone vertex w dominates a_i: refinements may sit on its
    # vertical edges, so N_n(i+1) >= a_w^(n-m-d) and terms stay bounded below
    w = i + 1 + zone.index(rho_raw)
    eps = Fraction(1, rho_raw ** (m + d) * a_i)
    count = min(max_terms, max(d + 8, 48))
    terms = dp_terms(count)
    for n in range(d, count):
        if terms[n] < eps:
            raise CertificateError(f"term {m + n} fell below its climb lower bound")
    witness = (
        f"N_n({i + 1}) >= {rho_raw}^(n-{m + d}) by routing refinements through the "
        f"vertical edges of odometer {w}, and {rho_raw} >= {a_i}, so t_n >= {eps} "
        f"for n >= {m + d}"
    )
    return _infinite(sum(terms), m + count, witness, "climb-lower-bound")


def _reciprocal_series(
    seq: IntSequence, scale: Fraction, start: int, max_terms: int
) -> ConvergenceResult:
    """Certified evaluation of sum_{n >= start} scale / seq(n)."""
    tail_seq, offset = _resolve_level_seq(seq)
    lo = max(start, offset)

    def prefix_sum(upto: int) -> Fraction:
        return sum((scale / seq.value(n) for n in range(start, upto)), Fraction(0))

    constant_like = (
        isinstance(tail_seq, Constant)
        or (isinstance(tail_seq, Arithmetic) and tail_seq.step == 0)
        or (isinstance(tail_seq, Geometric) and tail_seq.ratio == 1)
        or (isinstance(tail_seq, Polynomial) and tail_seq.degree() == 0)
    )
    if constant_like:
        c = tail_seq.value(0)
        m = min(max_terms, lo - start + 16)
        witness = f"terms are eventually the constant {scale}/{c} > 0"
        return _infinite(prefix_sum(start + m), m, witness, "nondecreasing-terms")

    linear_like = (isinstance(tail_seq, Arithmetic) and tail_seq.step >= 1) or (
        isinstance(tail_seq, Polynomial) and tail_seq.degree() == 1
    )
    if linear_like:
        if isinstance(tail_seq, Arithmetic):
            s, dd = tail_seq.start, tail_seq.step
        else:
            s, dd = tail_seq.coeffs[0], tail_seq.coeffs[1]
        m = min(max_terms, lo - start + 16)
        delta = scale / (s + 2 * dd)
        witness = (
            f"sum of {scale}/a_n over any block N <= n <= 2N (N >= {lo}) is at least {delta}, "
            "so the partial sums are unbounded"
        )
        return _infinite(prefix_sum(start + m), m, witness, "block-lower-bound")

    if isinstance(tail_seq, Arithmetic) and tail_seq.step < 0:
        return _undetermined(Fraction(0), 0, "decreasing sequences carry no certificate")

    if isinstance(tail_seq, Geometric) and tail_seq.ratio >= 2:
        b, r = tail_seq.base, tail_seq.ratio
        # exact: sum_{n>=lo} scale/(b r^(n-offset)) plus the finite prefix
        first = scale / Fraction(b * r ** (lo - offset))
        geom_total = first * Fraction(r, r - 1)
        total = prefix_sum(lo) + geom_total
        used = min(max_terms, lo - start + 24)
        partial = prefix_sum(start + used)
        return _finite(partial, used, total - partial, "geometric-exact", exact=total)

    if isinstance(tail_seq, Polynomial) and tail_seq.degree() >= 2:
        alpha, n1 = _poly_comparison(tail_seq)
        m_local = max(n1, 128)
        upto = offset + m_local
        if upto - start > max_terms:
            upto = start + max_terms
            m_local = upto - offset
            if m_local < n1:
                return _undetermined(prefix_sum(start + max_terms), max_terms, "maxTerms too small")
        tail = scale / (alpha * m_local)
        return _finite(prefix_sum(upto), upto - start, tail, "comparison-integral-tail")

    return _undetermined(
        prefix_sum(start + min(max_terms, 32)),
        min(max_terms, 32),
        "sequence has no tail rule usable for certification",
    )


def extended_cylinder_measure(
    spec: DiagramSpec, i: int, cyl: CylinderSpec, max_terms: int = DEFAULT_MAX_TERMS
) -> ConvergenceResult:
    """Value of the extension of odometer i on one cylinder, certified.

    The cylinder is reduced to (length m, end vertex j).  Vertices below i
    cannot reach the supporting saturation, so j < i gives exact 0; j = i is
    the base odometer value; j > i is a certified series over the cylinder
    refinements that enter the odometer.
    """
    if not spec.is_odometer_chain:
        raise DiagramError("extended cylinder values require an odometer chain")
    end = as_end_vertex(cyl)
    m, j = end.length, end.index
    if j < i:
        return _exact0()
    if j == i:
        dens = _odometer_denominators(spec, i, m) if m else [1]
        val = Fraction(1, dens[-1])
        return _finite(val, 0, Fraction(0), "restriction-exact", exact=val)

    if spec.vertex_diag is not None:
        return _cylinder_series_vertex_table(spec, i, m, j, max_terms)

    if spec.level_diag is not None and j == i + 1:
        # terms reduce to c / a_n with c the base cylinder value at level m
        dens = _odometer_denominators(spec, i, m) if m else [1]
        c = Fraction(1, dens[-1])
        return _reciprocal_series(spec.level_diag, c, m, max_terms)

    # exact partial sums via the path DP, no certificate
    def dp_partial(count: int) -> Fraction:
        n_vec = {v: 0 for v in range(i + 1, j + 1)}
        n_vec[j] = 1
        dens = _odometer_denominators(spec, i, m + count + 1)
        total = Fraction(0)
        for n in range(m, m + count):
            total += Fraction(n_vec[i + 1], dens[n])
            nxt = {}
            for v in range(i + 1, j + 1):
                nxt[v] = spec.vertical_edges(n, v) * n_vec[v] + n_vec.get(v + 1, 0)
            n_vec = nxt
        return total

    count = min(max_terms, 64)
    return _undetermined(dp_partial(count), m + count, "no certificate for this family/cylinder")


# ---------------------------------------------------------------------------
# Extended measures and the odometer classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedMeasure:
    """Canonical extension of odometer ``index``'s measure to its saturation."""

    spec: DiagramSpec
    index: int
    total_mass: ConvergenceResult
    normalized: bool = False

    def normalize(self) -> "ExtendedMeasure":
        if self.total_mass.status != FINITE:
            raise DiagramError("only finite extensions can be normalized")
        return ExtendedMeasure(self.spec, self.index, self.total_mass, normalized=True)

    def cylinder_value(self, cyl: CylinderSpec, max_terms: int = DEFAULT_MAX_TERMS):
        res = extended_cylinder_measure(self.spec, self.index, cyl, max_terms)
        if not self.normalized:
            return res.exact_value if res.is_exact else res
        if res.status != FINITE:
            return res
        if self.total_mass.is_exact:
            mass = self.total_mass.exact_value
            if res.is_exact:
                return res.exact_value / mass
            return ConvergenceResult(
                FINITE,
                res.partial_sum / mass,
                res.terms_used,
                tail_bound=res.tail_bound / mass,
                certificate=f"{res.certificate} / exact mass",
            )
        lo, hi = self.total_mass.interval()
        mid = (lo + hi) / 2
        return ConvergenceResult(
            FINITE,
            res.partial_sum / mid,
            res.terms_used,
            tail_bound=res.tail_bound / mid,
            certificate=f"{res.certificate} / midpoint mass",
        )

    def measure_vectors(self, window: Truncation) -> MeasureVectors:
        """Ambient vectors p^(n)_j when every needed cylinder value is exact."""

        def fn(n: int, jj: int) -> Fraction:
            res = extended_cylinder_measure(self.spec, self.index, EndVertex(n, jj))
            if not res.is_exact:
                raise WindowError(
                    f"extension value at (level={n}, vertex={jj}) is not exact; "
                    "ambient vectors unavailable"
                )
            val = res.exact_value
            if self.normalized:
                val /= self.total_mass.exact_value
            return val

        return MeasureVectors(fn, window.max_level, lambda n: window.max_vertex, label=f"extension-{self.index}")


def extend_odometer(spec: DiagramSpec, i: int, max_terms: int = DEFAULT_MAX_TERMS) -> ExtendedMeasure:
    return ExtendedMeasure(spec, i, odometer_extension_mass(spec, i, max_terms))


@dataclass(frozen=True)
class ErgodicEntry:
    index: int
    mass: ConvergenceResult
    normalizing_constant: Optional[Fraction]  # 1/mass when the mass is exact


@dataclass(frozen=True)
class ErgodicClassification:
    """Per-odometer extension masses and what they mean for the chain."""

    entries: tuple[ErgodicEntry, ...]
    partial: bool  # True when any entry is undetermined
    notes: tuple[str, ...]

    @property
    def finite_indices(self) -> tuple[int, ...]:
        return tuple(e.index for e in self.entries if e.mass.status == FINITE)

    @property
    def infinite_indices(self) -> tuple[int, ...]:
        return tuple(e.index for e in self.entries if e.mass.status == INFINITE)


def classify_ergodic_measures(
    spec: DiagramSpec, i_max: int, max_terms: int = DEFAULT_MAX_TERMS
) -> ErgodicClassification:
    """Extension mass of every odometer i <= i_max, with certificates.

    The normalized finite entries exhaust the ergodic probability
    tail-invariant measures of the chain, and extensions from distinct
    odometers are mutually singular (their saturations are disjoint).
    """
    if not spec.is_odometer_chain:
        raise DiagramError("the odometer classification requires an odometer chain")
    entries = []
    for i in range(1, i_max + 1):
        res = odometer_extension_mass(spec, i, max_terms)
        norm = Fraction(1) / res.exact_value if res.status == FINITE and res.is_exact else None
        entries.append(ErgodicEntry(i, res, norm))
    partial = any(e.mass.status == UNDETERMINED for e in entries)
    notes = (
        "normalized finite entries exhaust the ergodic probability tail-invariant measures",
        "distinct entries are mutually singular: their supporting saturations are disjoint",
    )
    if partial:
        notes = notes + ("classification is partial: some masses are undetermined",)
    return ErgodicClassification(tuple(entries), partial, notes)


# ---------------------------------------------------------------------------
# Closed-form cross-checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OracleVerdict:
    status: str  # finite / infinite / undetermined
    mass: Optional[Fraction]  # exact total mass when a closed form exists
    criterion: str


def closed_form_oracles(spec: DiagramSpec, index: int = 1) -> Optional[OracleVerdict]:
    """Independent closed-form verdict for the extension mass, when one exists.

    Used to cross-check the series engine; families without a closed form
    return None.
    """
    if isinstance(spec, StationaryAK):
        if index == 1:
            if spec.k > 1:
                return OracleVerdict(FINITE, 1 + Fraction(1, spec.k - 1), "mass = 1 + 1/(k-1)")
            return OracleVerdict(INFINITE, None, "k = 1: the mass series has constant terms 1/a")
        return OracleVerdict(
            INFINITE, None, "odometers beyond the first have nondecreasing mass-series terms"
        )

    diag = spec.vertex_diag
    if diag is not None:
        a_i = diag.value(index - 1)
        cf = diag.constant_from()
        if cf is None:
            # unbounded diagonals: divergence whenever some later odometer is at
            # least as big, which covers the increasing family for every index
            if diag.value(index) >= a_i:
                return OracleVerdict(INFINITE, None, "a_{i+1} >= a_i forces a divergent mass series")
            return None
        v_const, tau = cf[0] + 1, cf[1]
        for v in range(index + 1, max(v_const, index + 1) + 1):
            if diag.value(v - 1) >= a_i:
                return OracleVerdict(INFINITE, None, f"a_{v} >= a_{index} forces divergence")
        # criterion: sum over j > i of prod_{l=i+1..j} 1/(a_i - a_l)
        if tau >= a_i:
            return OracleVerdict(INFINITE, None, "tail multiplicity >= a_i forces divergence")
        if a_i - tau == 1:
            return OracleVerdict(
                INFINITE, None, "criterion terms stop shrinking: a_i - a_l = 1 along the tail"
            )
        total = Fraction(1)
        prod = Fraction(1)
        j = index + 1
        while j < v_const:
            prod /= a_i - diag.value(j - 1)
            total += prod
            j += 1
        # geometric tail: successive factors are 1/(a_i - tau) < 1
        fac = Fraction(1, a_i - tau)
        total += prod * fac / (1 - fac)
        return OracleVerdict(FINITE, total, "mass = sum of products of 1/(a_i - a_l), j > i")

    levels = spec.level_diag
    if levels is not None:
        rec = levels.reciprocal_sum_finite()
        if rec is None:
            return None
        if rec:
            return OracleVerdict(FINITE, None, "sum of 1/a_n converges")
        return OracleVerdict(INFINITE, None, "sum of 1/a_n diverges")

    return None

"""Integer sequence generators with tail knowledge.

Diagram families are described by integer sequences (edge multiplicities per
level or per vertex).  Because convergence certification needs to know how a
sequence behaves *beyond* any finite prefix, sequences are closed-form
generators rather than bare arrays: constant, arithmetic, geometric,
polynomial, or a finite table with an explicit tail rule.  A table without a
tail rule is allowed but limits certification to the table range.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


class SequenceError(ValueError):
    """Malformed sequence description."""


@dataclass(frozen=True)
class IntSequence:
    """Base class; subclasses implement ``value`` and the analysis hooks."""

    def value(self, n: int) -> int:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def constant_from(self) -> Optional[tuple[int, int]]:
        """Return ``(n0, c)`` if the sequence equals c for all n >= n0."""
        return None

    def max_from(self, n0: int) -> Optional[int]:
        """Supremum of values over n >= n0, or None if unbounded."""
        return None

    def reciprocal_sum_finite(self) -> Optional[bool]:
        """Whether sum of 1/a_n converges; None when the tail is unknown."""
        return None

    def __call__(self, n: int) -> int:
        return self.value(n)


@dataclass(frozen=True)
class Constant(IntSequence):
    c: int

    def value(self, n: int) -> int:
        return self.c

    def to_json(self) -> dict:
        return {"kind": "constant", "value": self.c}

    def constant_from(self):
        return (0, self.c)

    def max_from(self, n0: int):
        return self.c

    def reciprocal_sum_finite(self):
        return False


@dataclass(frozen=True)
class Arithmetic(IntSequence):
    start: int
    step: int

    def value(self, n: int) -> int:
        return self.start + self.step * n

    def to_json(self) -> dict:
        return {"kind": "arithmetic", "start": self.start, "step": self.step}

    def constant_from(self):
        return (0, self.start) if self.step == 0 else None

    def max_from(self, n0: int):
        if self.step > 0:
            return None
        return self.value(n0)

    def reciprocal_sum_finite(self):
        # sum 1/(start + step*n) is harmonic-like for step > 0
        return False


@dataclass(frozen=True)
class Geometric(IntSequence):
    base: int
    ratio: int

    def __post_init__(self):
        if self.base < 1 or self.ratio < 1:
            raise SequenceError("geometric sequence needs base >= 1, ratio >= 1")

    def value(self, n: int) -> int:
        return self.base * self.ratio**n

    def to_json(self) -> dict:
        return {"kind": "geometric", "base": self.base, "ratio": self.ratio}

    def constant_from(self):
        return (0, self.base) if self.ratio == 1 else None

    def max_from(self, n0: int):
        if self.ratio == 1:
            return self.base
        return None

    def reciprocal_sum_finite(self):
        return self.ratio >= 2


@dataclass(frozen=True)
class Polynomial(IntSequence):
    """a_n = coeffs[0] + coeffs[1]*n + ... ; leading coefficient positive."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if not coeffs or all(c == 0 for c in coeffs):
            raise SequenceError("polynomial sequence needs a nonzero coefficient")
        if self.degree() > 0 and coeffs[self.degree()] <= 0:
            raise SequenceError("polynomial sequence needs a positive leading coefficient")

    def degree(self) -> int:
        d = len(self.coeffs) - 1
        while d > 0 and self.coeffs[d] == 0:
            d -= 1
        return d

    def value(self, n: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * n + c
        return out

    def to_json(self) -> dict:
        return {"kind": "polynomial", "coeffs": list(self.coeffs)}

    def constant_from(self):
        return (0, self.coeffs[0]) if self.degree() == 0 else None

    def max_from(self, n0: int):
        if self.degree() == 0:
            return self.coeffs[0]
        return None

    def reciprocal_sum_finite(self):
        return self.degree() >= 2


@dataclass(frozen=True)
class Table(IntSequence):
    """Finite table of leading values followed by a tail rule (may be None)."""

    values: tuple[int, ...]
    tail: Optional[IntSequence] = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise SequenceError("table sequence needs at least one value")

    def value(self, n: int) -> int:
        if n < len(self.values):
            return self.values[n]
        if self.tail is None:
            raise SequenceError(f"table sequence has no tail rule; index {n} is out of range")
        return self.tail.value(n - len(self.values))

    def to_json(self) -> dict:
        doc: dict = {"kind": "table", "values": list(self.values)}
        if self.tail is not None:
            doc["tail"] = self.tail.to_json()
        return doc

    def constant_from(self):
        if self.tail is None:
            return None
        tc = self.tail.constant_from()
        if tc is None:
            return None
        k, c = tc
        start = len(self.values) + k
        # absorb trailing table entries already equal to the constant
        j = len(self.values)
        if k == 0:
            while j > 0 and self.values[j - 1] == c:
                j -= 1
            start = j if j < len(self.values) else start
        return (start, c)

    def max_from(self, n0: int):
        best = max(self.values[n0:], default=None)
        tail_start = max(0, n0 - len(self.values))
        if self.tail is None:
            return best if n0 < len(self.values) else None
        tm = self.tail.max_from(tail_start)
        if tm is None:
            return None
        return tm if best is None else max(best, tm)

    def reciprocal_sum_finite(self):
        # finitely many table terms never decide convergence
        return None if self.tail is None else self.tail.reciprocal_sum_finite()


def seq_from_json(doc: dict) -> IntSequence:
    kind = doc.get("kind")
    if kind == "constant":
        return Constant(int(doc["value"]))
    if kind == "arithmetic":
        return Arithmetic(int(doc["start"]), int(doc["step"]))
    if kind == "geometric":
        return Geometric(int(doc["base"]), int(doc["ratio"]))
    if kind == "polynomial":
        return Polynomial(tuple(int(c) for c in doc["coeffs"]))
    if kind == "table":
        tail = seq_from_json(doc["tail"]) if "tail" in doc and doc["tail"] is not None else None
        return Table(tuple(int(v) for v in doc["values"]), tail)
    raise SequenceError(f"unknown sequence kind: {kind!r}")


def seq_from_text(text: str) -> IntSequence:
    """Parse the CLI mini-grammar, e.g. ``constant:2``, ``geometric:2,2``,
    ``poly:4,4,1`` or ``table:5,3:constant:2`` (table values, then tail)."""
    head, _, rest = text.partition(":")
    head = head.strip().lower()
    if head == "constant":
        return Constant(int(rest))
    if head == "arithmetic":
        start, step = (int(x) for x in rest.split(","))
        return Arithmetic(start, step)
    if head == "geometric":
        base, ratio = (int(x) for x in rest.split(","))
        return Geometric(base, ratio)
    if head in ("poly", "polynomial"):
        return Polynomial(tuple(int(x) for x in rest.split(",")))
    if head == "table":
        vals, sep, tail_text = rest.partition(":")
        values = tuple(int(x) for x in vals.split(","))
        tail = seq_from_text(tail_text) if sep else None
        return Table(values, tail)
    raise SequenceError(f"cannot parse sequence text: {text!r}")

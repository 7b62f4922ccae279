"""Ordinals below epsilon_0 in Cantor normal form.

An :class:`Ordinal` is a strictly decreasing list of ``(exponent, coefficient)``
terms, exponents being ordinals themselves.  Products follow the lexicographic
convention: ``mul(a, b)`` is the order type of ``b`` copies of ``a``, so
``mul(OMEGA, 2) == omega*2`` while ``mul(2, OMEGA) == omega``.

Elements of ``omega**k`` are handled separately by :class:`OmegaPowerElement`,
a fixed-length digit vector (most significant digit first).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Union

__all__ = [
    "Ordinal",
    "OmegaPowerElement",
    "OrdinalError",
    "OrdinalDepthError",
    "InfiniteDecompositionError",
    "ZERO",
    "ONE",
    "OMEGA",
    "MAX_DEPTH",
    "compare",
    "add",
    "mul",
    "omega_power",
    "is_add_indecomposable",
    "decompose_into_indecomposables",
    "element_compare",
    "enumerate_truncation",
    "parse_ordinal",
]

# nesting bound for exponent towers; results deeper than this are rejected
MAX_DEPTH = 16


class OrdinalError(ValueError):
    pass


class OrdinalDepthError(OrdinalError):
    pass


class InfiniteDecompositionError(OrdinalError):
    pass


OrdinalLike = Union["Ordinal", int]


@total_ordering
class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[tuple[OrdinalLike, int]] = ()):
        norm = []
        for exp, coef in terms:
            exp = as_ordinal(exp)
            if not isinstance(coef, int) or coef < 1:
                raise OrdinalError(f"coefficient must be a positive integer, got {coef!r}")
            if norm and compare(norm[-1][0], exp) <= 0:
                raise OrdinalError("exponents must be strictly decreasing")
            norm.append((exp, coef))
        self.terms: tuple[tuple[Ordinal, int], ...] = tuple(norm)
        self._hash = None

    @classmethod
    def from_int(cls, n: int) -> "Ordinal":
        if n < 0:
            raise OrdinalError("ordinals are non-negative")
        return cls(((ZERO, n),)) if n else cls()

    # structure

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or self.terms[0][0].is_zero()

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def leading_exponent(self) -> "Ordinal":
        if not self.terms:
            raise OrdinalError("0 has no leading exponent")
        return self.terms[0][0]

    def last_exponent(self) -> "Ordinal":
        if not self.terms:
            raise OrdinalError("0 has no last exponent")
        return self.terms[-1][0]

    def depth(self) -> int:
        if not self.terms:
            return 0
        return 1 + max(e.depth() for e, _ in self.terms)

    def __int__(self) -> int:
        if not self.is_finite():
            raise OrdinalError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def has_finite_exponents(self) -> bool:
        return all(e.is_finite() for e, _ in self.terms)

    def coefficients(self, degree: int) -> tuple[int, ...]:
        """Digits of ``self < omega**degree``, most significant first."""
        if not self.has_finite_exponents() or (self.terms and int(self.terms[0][0]) >= degree):
            raise OrdinalError(f"{self} is not below w^{degree}")
        digits = [0] * degree
        for e, c in self.terms:
            digits[degree - 1 - int(e)] = c
        return tuple(digits)

    # python protocol

    def __eq__(self, other):
        if isinstance(other, int):
            other = Ordinal.from_int(other) if other >= 0 else None
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        if isinstance(other, int):
            other = Ordinal.from_int(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return compare(self, other) < 0

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __str__(self):
        return format_ordinal(self)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"


def as_ordinal(x: OrdinalLike) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Ordinal.from_int(x)
    if isinstance(x, str):
        return parse_ordinal(x)
    raise TypeError(f"cannot interpret {x!r} as an ordinal")


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def omega_power(exponent: OrdinalLike, coefficient: int = 1) -> Ordinal:
    return Ordinal(((as_ordinal(exponent), coefficient),))


def _check_depth(result: Ordinal, max_depth: int | None) -> Ordinal:
    limit = MAX_DEPTH if max_depth is None else max_depth
    if result.depth() > limit:
        raise OrdinalDepthError(f"result nesting depth {result.depth()} exceeds {limit}")
    return result


def compare(a: OrdinalLike, b: OrdinalLike) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    a, b = as_ordinal(a), as_ordinal(b)
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    la, lb = len(a.terms), len(b.terms)
    return (la > lb) - (la < lb)


def add(a: OrdinalLike, b: OrdinalLike, max_depth: int | None = None) -> Ordinal:
    a, b = as_ordinal(a), as_ordinal(b)
    if b.is_zero():
        return a
    lead, lead_coef = b.terms[0]
    kept = []
    for e, c in a.terms:
        rel = compare(e, lead)
        if rel > 0:
            kept.append((e, c))
        elif rel == 0:
            lead_coef += c
            break
        else:
            break
    terms = kept + [(lead, lead_coef)] + list(b.terms[1:])
    return _check_depth(Ordinal(terms), max_depth)


def mul(a: OrdinalLike, b: OrdinalLike, max_depth: int | None = None) -> Ordinal:
    """Ordinal product: ``b`` copies of ``a`` laid end to end."""
    a, b = as_ordinal(a), as_ordinal(b)
    if a.is_zero() or b.is_zero():
        return ZERO
    a_lead, a_coef = a.terms[0]
    result = ZERO
    for e, c in b.terms:
        if e.is_zero():
            piece = Ordinal([(a_lead, a_coef * c)] + list(a.terms[1:]))
        else:
            piece = Ordinal([(add(a_lead, e, max_depth), c)])
        result = add(result, piece, max_depth)
    return _check_depth(result, max_depth)


def is_add_indecomposable(a: OrdinalLike) -> bool:
    """True iff ``a == omega**beta`` for some beta (so 1 counts, 0 does not)."""
    a = as_ordinal(a)
    return len(a.terms) == 1 and a.terms[0][1] == 1


def decompose_into_indecomposables(a: OrdinalLike) -> list[Ordinal]:
    """Expand the CNF of ``a < omega**omega`` into its additively indecomposable summands."""
    a = as_ordinal(a)
    if not a.has_finite_exponents():
        raise InfiniteDecompositionError(
            f"{a} is not below w^w; its decomposition is not a finite list of finite powers")
    out = []
    for e, c in a.terms:
        out.extend([omega_power(e)] * c)
    return out


# text format

def format_ordinal(a: Ordinal) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero():
            parts.append(str(c))
            continue
        if e == ONE:
            base = "w"
        elif e.is_finite():
            base = f"w^{int(e)}"
        else:
            base = f"w^({format_ordinal(e)})"
        parts.append(base if c == 1 else f"{base}*{c}")
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(w)|([\^*+()]))")


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise OrdinalError(f"unexpected character {text[pos]!r} in {text!r}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise OrdinalError(f"expected {expected or 'a token'} in {self.text!r}")
        self.i += 1
        return tok

    def sum(self) -> Ordinal:
        value = self.product()
        while self.peek() == "+":
            self.take()
            value = add(value, self.product())
        return value

    def product(self) -> Ordinal:
        value = self.atom()
        while self.peek() == "*":
            self.take()
            value = mul(value, self.atom())
        return value

    def atom(self) -> Ordinal:
        tok = self.take()
        if tok.isdigit():
            return Ordinal.from_int(int(tok))
        if tok == "(":
            value = self.sum()
            self.take(")")
            return value
        if tok == "w":
            if self.peek() != "^":
                return OMEGA
            self.take()
            nxt = self.take()
            if nxt.isdigit():
                exp = Ordinal.from_int(int(nxt))
            elif nxt == "w":
                exp = OMEGA
            elif nxt == "(":
                exp = self.sum()
                self.take(")")
            else:
                raise OrdinalError(f"bad exponent in {self.text!r}")
            return omega_power(exp) if not exp.is_zero() else ONE
        raise OrdinalError(f"unexpected token {tok!r} in {self.text!r}")


def parse_ordinal(text: str) -> Ordinal:
    """Parse ``0``, ``w^2*3 + w + 5``, ``w^(w+1)`` and similar (whitespace-insensitive)."""
    p = _Parser(text)
    if not p.tokens:
        raise OrdinalError("empty ordinal expression")
    value = p.sum()
    if p.peek() is not None:
        raise OrdinalError(f"trailing input in {text!r}")
    return value


# elements of omega**k

@dataclass(frozen=True, order=True)
class OmegaPowerElement:
    """The element ``w^(k-1)*d[0] + ... + d[k-1]`` of ``w^k``."""

    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if any(d < 0 for d in self.digits):
            raise OrdinalError("digits must be natural numbers")

    @property
    def degree(self) -> int:
        return len(self.digits)

    def to_ordinal(self) -> Ordinal:
        k = self.degree
        terms = [(k - 1 - i, d) for i, d in enumerate(self.digits) if d]
        return Ordinal(terms)

    @classmethod
    def from_ordinal(cls, a: OrdinalLike, degree: int) -> "OmegaPowerElement":
        return cls(as_ordinal(a).coefficients(degree))

    def rank(self, bound: int) -> int:
        """Position of this element in :func:`enumerate_truncation` with the given bound."""
        r = 0
        for d in self.digits:
            if d >= bound:
                raise OrdinalError(f"digit {d} not below bound {bound}")
            r = r * bound + d
        return r

    @classmethod
    def from_rank(cls, rank: int, degree: int, bound: int) -> "OmegaPowerElement":
        digits = []
        for _ in range(degree):
            rank, d = divmod(rank, bound)
            digits.append(d)
        if rank:
            raise OrdinalError("rank out of range")
        return cls(tuple(reversed(digits)))


def element_compare(x: OmegaPowerElement, y: OmegaPowerElement) -> int:
    if x.degree != y.degree:
        raise OrdinalError(f"degree mismatch: {x.degree} vs {y.degree}")
    return (x.digits > y.digits) - (x.digits < y.digits)


def enumerate_truncation(k: int, bound: int) -> list[OmegaPowerElement]:
    """All elements of ``w^k`` whose digits are below ``bound``, in increasing order."""
    if k < 0 or bound < 0:
        raise OrdinalError("degree and bound must be natural numbers")
    return [OmegaPowerElement(t) for t in itertools.product(range(bound), repeat=k)]

"""Symbolic countable order types.

Terms are built from ``Fin(n)``, ``Omega``, ``OmegaStar``, ``Eta``, ``Sum``,
``Prod`` and ``Reverse``.  ``Prod(a, b)`` is ``b`` copies of ``a`` (the right
factor is the index), which agrees with :func:`ordpart.ordinal.mul`.  One
extra leaf, ``Ord(alpha)``, holds an arbitrary ordinal below epsilon_0 so that
types such as ``w^w`` can be written down directly.

Decision procedures answer with :class:`TriBool`; ``UNKNOWN`` means the rule set
implemented here cannot settle the question, never that the answer is false.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Union

from .ordinal import (
    OMEGA, ONE, ZERO, Ordinal, add, compare, is_add_indecomposable, mul, omega_power,
    parse_ordinal,
)

__all__ = [
    "Fin", "Omega", "OmegaStar", "Eta", "Sum", "Prod", "Reverse", "Ord", "OrderTerm",
    "TriBool", "TypewiseClass", "Kind", "LedgerEntry", "LEDGER", "ALEPH_0",
    "OrderTermError", "normalize", "is_scattered", "cardinal_size", "embeds",
    "classify_typewise", "decomposability", "decomposability_profile",
    "parse_term", "format_term", "as_well_order", "as_reverse_well_order",
    "ledger_lookup",
]


class OrderTermError(ValueError):
    pass


# terms

@dataclass(frozen=True)
class Fin:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise OrderTermError(f"Fin needs a natural number, got {self.n!r}")


@dataclass(frozen=True)
class _Omega:
    pass


@dataclass(frozen=True)
class _OmegaStar:
    pass


@dataclass(frozen=True)
class _Eta:
    pass


Omega = _Omega()
OmegaStar = _OmegaStar()
Eta = _Eta()


@dataclass(frozen=True)
class Sum:
    parts: tuple

    def __init__(self, parts):
        parts = tuple(parts)
        if not parts:
            raise OrderTermError("Sum needs at least one summand")
        object.__setattr__(self, "parts", parts)


@dataclass(frozen=True)
class Prod:
    """``right`` copies of ``left``."""

    left: object
    right: object


@dataclass(frozen=True)
class Reverse:
    term: object


@dataclass(frozen=True)
class Ord:
    """An ordinal used as a well-ordered leaf."""

    value: Ordinal


OrderTerm = Union[Fin, _Omega, _OmegaStar, _Eta, Sum, Prod, Reverse, Ord]


class TriBool(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __bool__(self):
        raise TypeError("TriBool has no truth value; compare with TriBool.YES/NO")

    @classmethod
    def of(cls, value: bool) -> "TriBool":
        return cls.YES if value else cls.NO

    def negate(self) -> "TriBool":
        if self is TriBool.UNKNOWN:
            return self
        return TriBool.NO if self is TriBool.YES else TriBool.YES


class TypewiseClass(enum.Enum):
    ZERO = "class-0"
    ONE = "class-1"
    TWO = "class-2"
    OMEGA = "class-omega"
    OMEGA_STAR = "class-omega*"
    ETA = "class-eta"
    DECOMPOSABLE = "TypewiseDecomposable"


class Kind(enum.Enum):
    ADDITIVE = "additive"
    UNIONWISE = "unionwise"
    MULTIPLICATIVE = "multiplicative"
    TYPEWISE = "typewise"
    MULT_SURPASSABLE = "mult-surpassable"
    MULT_TRANSCENDENT = "mult-transcendent"


class _Aleph0:
    """Marker for countably infinite size."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ALEPH_0"

    __str__ = __repr__


ALEPH_0 = _Aleph0()


# normalisation
#
# Terms are first flattened into a list of items.  An item is ("W", alpha) for a
# well-ordered run, ("A", beta) for the reverse of the ordinal beta, ("F", n) for a
# finite run, or an atomic term (Eta or an irreducible Prod).  Adjacent runs fold.

def _is_run(item, tag):
    return isinstance(item, tuple) and item[0] == tag


def _item_ordinal(item, tag):
    if _is_run(item, "F"):
        return Ordinal.from_int(item[1])
    if _is_run(item, tag):
        return item[1]
    return None


def _fold(items):
    out = []
    pending = 0  # finite run waiting to join the next run
    for it in items:
        if isinstance(it, tuple) and it[0] in "WA" and it[1].is_finite():
            it = ("F", int(it[1]))
        if _is_run(it, "F"):
            if it[1] == 0:
                continue
            if out and _is_run(out[-1], "W"):
                out[-1] = ("W", add(out[-1][1], it[1]))
            elif out and _is_run(out[-1], "A"):
                # beta* + n == (n + beta)*
                out[-1] = ("A", add(it[1], out[-1][1]))
            else:
                pending += it[1]
            continue
        if _is_run(it, "W"):
            alpha = add(pending, it[1]) if pending else it[1]
            pending = 0
            if out and _is_run(out[-1], "W"):
                out[-1] = ("W", add(out[-1][1], alpha))
            else:
                out.append(("W", alpha))
            continue
        if _is_run(it, "A"):
            beta = add(it[1], pending) if pending else it[1]
            pending = 0
            if out and _is_run(out[-1], "A"):
                out[-1] = ("A", add(beta, out[-1][1]))
            else:
                out.append(("A", beta))
            continue
        if pending:
            out.append(("F", pending))
            pending = 0
        if it == Eta and out and out[-1] == Eta:
            continue
        out.append(it)
    if pending:
        out.append(("F", pending))
    return out


def _run_leaves(alpha: Ordinal, reverse: bool) -> list:
    leaves = []
    for e, c in alpha.terms:
        if e.is_zero():
            leaves.append(Fin(c))
        elif e == ONE:
            leaves.extend([OmegaStar if reverse else Omega] * c)
        else:
            leaf = Ord(omega_power(e))
            leaves.extend([Reverse(leaf) if reverse else leaf] * c)
    if reverse:
        leaves.reverse()
    return leaves


def _emit_items(items) -> list:
    pieces = []
    for it in items:
        if _is_run(it, "F"):
            pieces.append(Fin(it[1]))
        elif _is_run(it, "W"):
            pieces.extend(_run_leaves(it[1], False))
        elif _is_run(it, "A"):
            pieces.extend(_run_leaves(it[1], True))
        else:
            pieces.append(it)
    return pieces


def _wrap(pieces) -> OrderTerm:
    if not pieces:
        return Fin(0)
    if len(pieces) == 1:
        return pieces[0]
    return Sum(pieces)


def _index_pieces(items):
    """Split index items into atomic index pieces: Fin, omega powers, reversed powers, others."""
    out = []
    for it in items:
        if _is_run(it, "F"):
            out.append(it)
        elif _is_run(it, "W"):
            for e, c in it[1].terms:
                out.extend([("F", c)] if e.is_zero() else [("W", omega_power(e))] * c)
        elif _is_run(it, "A"):
            chunk = []
            for e, c in it[1].terms:
                chunk.extend([("F", c)] if e.is_zero() else [("A", omega_power(e))] * c)
            out.extend(reversed(chunk))
        else:
            out.append(it)
    return out


def _index_leaf(item) -> OrderTerm:
    return _emit_items([item])[0]


def _prod_items(left, right):
    """Items of ``right`` copies of ``left``; both arguments are folded item lists."""
    if not left or not right:
        return []
    out = []
    for q in _index_pieces(right):
        out.extend(_prod_piece(left, q))
    return _fold(out)


def _prod_piece(left, q):
    if _is_run(q, "F"):
        return list(left) * q[1]
    if len(left) == 1:
        (a,) = left
        if a == Eta:
            return [Eta]
        if _is_run(a, "F") and a[1] == 1:
            return [q]
        for tag in ("W", "A"):
            x, y = _item_ordinal(a, tag), _item_ordinal(q, tag)
            if x is not None and y is not None:
                return [(tag, mul(x, y))]
    if isinstance(q, Prod):
        inner = _prod_items(left, _items(q.left, False))
        return _prod_items(inner, _items(q.right, False))
    return [Prod(_wrap(_emit_items(left)), _index_leaf(q))]


def _items(t, rev: bool) -> list:
    if isinstance(t, Fin):
        return [("F", t.n)] if t.n else []
    if t == Omega:
        return [("A", OMEGA)] if rev else [("W", OMEGA)]
    if t == OmegaStar:
        return [("W", OMEGA)] if rev else [("A", OMEGA)]
    if t == Eta:
        return [Eta]
    if isinstance(t, Ord):
        if t.value.is_zero():
            return []
        return [("A" if rev else "W", t.value)]
    if isinstance(t, Reverse):
        return _items(t.term, not rev)
    if isinstance(t, Sum):
        parts = reversed(t.parts) if rev else t.parts
        out = []
        for p in parts:
            out.extend(_items(p, rev))
        return _fold(out)
    if isinstance(t, Prod):
        return _prod_items(_fold(_items(t.left, rev)), _fold(_items(t.right, rev)))
    raise OrderTermError(f"not an order term: {t!r}")


def normalize(t: OrderTerm) -> OrderTerm:
    """An order-isomorphic normal form; applying it twice changes nothing."""
    current = _wrap(_emit_items(_fold(_items(t, False))))
    for _ in range(8):
        nxt = _wrap(_emit_items(_fold(_items(current, False))))
        if nxt == current:
            return current
        current = nxt
    return current


def _pieces(nf) -> list:
    if nf == Fin(0):
        return []
    return list(nf.parts) if isinstance(nf, Sum) else [nf]


def _contains(nf, pred) -> bool:
    if pred(nf):
        return True
    if isinstance(nf, Sum):
        return any(_contains(p, pred) for p in nf.parts)
    if isinstance(nf, Prod):
        return _contains(nf.left, pred) or _contains(nf.right, pred)
    if isinstance(nf, Reverse):
        return _contains(nf.term, pred)
    return False


def is_scattered(t: OrderTerm) -> bool:
    return not _contains(normalize(t), lambda x: x == Eta)


def cardinal_size(t: OrderTerm):
    """Exact size for finite terms, :data:`ALEPH_0` otherwise."""
    nf = normalize(t)
    return nf.n if isinstance(nf, Fin) else ALEPH_0


def _nf_ordinal(nf, reverse=False):
    total = ZERO
    pieces = _pieces(nf)
    if reverse:
        pieces = pieces[::-1]
    for p in pieces:
        if isinstance(p, Fin):
            val = Ordinal.from_int(p.n)
        elif p == (OmegaStar if reverse else Omega):
            val = OMEGA
        elif not reverse and isinstance(p, Ord):
            val = p.value
        elif reverse and isinstance(p, Reverse) and isinstance(p.term, Ord):
            val = p.term.value
        else:
            return None
        total = add(total, val)
    return total


def as_well_order(t: OrderTerm):
    """The ordinal isomorphic to ``t``, or None when ``t`` is not well-ordered."""
    return _nf_ordinal(normalize(t))


def as_reverse_well_order(t: OrderTerm):
    """The ordinal ``beta`` with ``t`` isomorphic to ``beta*``, or None."""
    return _nf_ordinal(normalize(t), reverse=True)


def _has_omega(nf) -> bool:
    if isinstance(nf, Fin) or nf == OmegaStar:
        return False
    if nf == Omega or nf == Eta:
        return True
    if isinstance(nf, Ord):
        return not nf.value.is_finite()
    if isinstance(nf, Reverse):
        return _has_omega_star(nf.term)
    if isinstance(nf, Sum):
        return any(_has_omega(p) for p in nf.parts)
    if isinstance(nf, Prod):
        return _has_omega(nf.left) or _has_omega(nf.right)
    raise OrderTermError(repr(nf))


def _has_omega_star(nf) -> bool:
    if isinstance(nf, Fin) or nf == Omega:
        return False
    if nf == OmegaStar or nf == Eta:
        return True
    if isinstance(nf, Ord):
        return False
    if isinstance(nf, Reverse):
        return _has_omega(nf.term)
    if isinstance(nf, Sum):
        return any(_has_omega_star(p) for p in nf.parts)
    if isinstance(nf, Prod):
        return _has_omega_star(nf.left) or _has_omega_star(nf.right)
    raise OrderTermError(repr(nf))


def _rank(nf, reverse=False):
    """Largest beta with w^beta (or its reverse) embeddable; scattered, non-empty input."""
    if isinstance(nf, Fin):
        return ZERO
    if nf == Omega:
        return ZERO if reverse else ONE
    if nf == OmegaStar:
        return ONE if reverse else ZERO
    if isinstance(nf, Ord):
        return ZERO if reverse else nf.value.leading_exponent()
    if isinstance(nf, Reverse):
        return _rank(nf.term, not reverse)
    if isinstance(nf, Sum):
        return max((_rank(p, reverse) for p in nf.parts), key=_OrdKey)
    if isinstance(nf, Prod):
        return add(_rank(nf.left, reverse), _rank(nf.right, reverse))
    raise OrderTermError(f"rank undefined for {nf!r}")


class _OrdKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return compare(self.v, other.v) < 0


def _single_power(nf):
    """(beta, reversed) when ``nf`` is exactly w^beta or its reverse with beta >= 1."""
    if nf == Omega:
        return ONE, False
    if nf == OmegaStar:
        return ONE, True
    if isinstance(nf, Ord) and is_add_indecomposable(nf.value) and not nf.value.is_finite():
        return nf.value.leading_exponent(), False
    if isinstance(nf, Reverse) and isinstance(nf.term, Ord) and is_add_indecomposable(nf.term.value) \
            and not nf.term.value.is_finite():
        return nf.term.value.leading_exponent(), True
    return None


def embeds(s: OrderTerm, t: OrderTerm) -> TriBool:
    """Whether a set of type ``s`` embeds order-preservingly into one of type ``t``."""
    return _embeds_nf(normalize(s), normalize(t))


def _embeds_nf(S, T) -> TriBool:
    if S == T:
        return TriBool.YES
    ss, st = (S.n if isinstance(S, Fin) else ALEPH_0), (T.n if isinstance(T, Fin) else ALEPH_0)
    if ss == 0:
        return TriBool.YES
    if st is not ALEPH_0 and (ss is ALEPH_0 or ss > st):
        return TriBool.NO
    eta = lambda x: x == Eta  # noqa: E731
    if _contains(T, eta):
        # every countable order embeds into eta, and eta into any non-scattered order
        return TriBool.YES
    if _contains(S, eta):
        return TriBool.NO
    if ss is not ALEPH_0:
        return TriBool.YES
    a, b = _nf_ordinal(S), _nf_ordinal(T)
    if a is not None and b is not None:
        return TriBool.of(compare(a, b) <= 0)
    a, b = _nf_ordinal(S, True), _nf_ordinal(T, True)
    if a is not None and b is not None:
        return TriBool.of(compare(a, b) <= 0)
    if _has_omega(S) and not _has_omega(T):
        return TriBool.NO
    if _has_omega_star(S) and not _has_omega_star(T):
        return TriBool.NO
    for rev in (False, True):
        if compare(_rank(S, rev), _rank(T, rev)) > 0:
            return TriBool.NO
    power = _single_power(S)
    if power is not None:
        beta, rev = power
        return TriBool.of(compare(beta, _rank(T, rev)) <= 0)
    s_pieces, t_pieces = _pieces(S), _pieces(T)
    if len(s_pieces) > 1:
        for p in s_pieces:
            if _embeds_nf(p, T) is TriBool.NO:
                return TriBool.NO
    if len(t_pieces) > 1:
        verdict = _match_summands(s_pieces, t_pieces)
        if verdict is not TriBool.UNKNOWN:
            return verdict
    if _embeds_in_factor(S, T):
        return TriBool.YES
    return TriBool.UNKNOWN


def _embeds_in_factor(S, T) -> bool:
    if isinstance(T, Prod):
        return _embeds_nf(S, T.left) is TriBool.YES or _embeds_nf(S, T.right) is TriBool.YES
    return False


def _indecomposable_piece(p) -> bool:
    return p == Fin(1) or _single_power(p) is not None


def _match_summands(s_pieces, t_pieces) -> TriBool:
    """Embed a sum into a sum of at least two pieces, summand block by summand block.

    A YES is always sound.  A NO is returned only when every summand of the source
    is 1, w^beta or a reverse of one: such a summand landing across several target
    pieces keeps a full copy of itself inside one of them (a final segment of w^beta
    is again w^beta), so some embedding sends each summand into a single piece.
    """
    expanded = []
    for p in s_pieces:
        if isinstance(p, Fin) and p.n <= 64:
            expanded.extend([Fin(1)] * p.n)
        else:
            expanded.append(p)
    exact = all(_indecomposable_piece(p) for p in expanded)
    n_s, n_t = len(expanded), len(t_pieces)
    memo = {}

    def block(i, k, j):
        return _embeds_nf(normalize(_wrap(expanded[i:k + 1])), t_pieces[j])

    def f(i, j):
        if i == n_s:
            return TriBool.YES
        if j == n_t:
            return TriBool.NO
        key = (i, j)
        if key in memo:
            return memo[key]
        unknown = False
        result = None
        options = [(None, j + 1)] + [(k, j + 1) for k in range(i, n_s)]
        for k, nxt in options:
            if k is None:
                here = TriBool.YES
                rest = f(i, nxt)
            else:
                here = block(i, k, j)
                if here is TriBool.NO:
                    continue
                rest = f(k + 1, nxt)
            if here is TriBool.YES and rest is TriBool.YES:
                result = TriBool.YES
                break
            if here is TriBool.UNKNOWN or rest is TriBool.UNKNOWN:
                unknown = True
        if result is None:
            result = TriBool.UNKNOWN if unknown else TriBool.NO
        memo[key] = result
        return result

    verdict = f(0, 0)
    if verdict is TriBool.NO and not exact:
        return TriBool.UNKNOWN
    return verdict


# classification

def classify_typewise(t: OrderTerm) -> TypewiseClass:
    """The typewise-indecomposable equimorphism class of ``t``, or DECOMPOSABLE.

    Up to equimorphism the countable typewise indecomposable types are 0, 1, 2,
    w, w* and eta; everything else is decomposable.
    """
    nf = normalize(t)
    size = nf.n if isinstance(nf, Fin) else ALEPH_0
    if size is not ALEPH_0:
        return {0: TypewiseClass.ZERO, 1: TypewiseClass.ONE, 2: TypewiseClass.TWO}.get(
            size, TypewiseClass.DECOMPOSABLE)
    if _contains(nf, lambda x: x == Eta):
        return TypewiseClass.ETA
    if _embeds_nf(nf, Omega) is TriBool.YES:
        return TypewiseClass.OMEGA
    if _embeds_nf(normalize(Reverse(nf)), Omega) is TriBool.YES:
        return TypewiseClass.OMEGA_STAR
    return TypewiseClass.DECOMPOSABLE


# decomposability

@dataclass(frozen=True)
class LedgerEntry:
    term: OrderTerm
    kind: Kind
    value: bool
    source: str


LEDGER: tuple[LedgerEntry, ...] = (
    # w copies of (w* + w); see README for why the index sits on the right
    LedgerEntry(Prod(Sum([OmegaStar, Omega]), Omega), Kind.UNIONWISE, True,
                "separating examples, w.(w* + w): unionwise decomposable"),
    LedgerEntry(Prod(Sum([OmegaStar, Omega]), Omega), Kind.ADDITIVE, False,
                "separating examples, w.(w* + w): additively indecomposable"),
    LedgerEntry(Ord(omega_power(OMEGA)), Kind.TYPEWISE, True,
                "separating examples, w^w: typewise decomposable"),
    LedgerEntry(Ord(omega_power(OMEGA)), Kind.MULTIPLICATIVE, False,
                "separating examples, w^w: multiplicatively indecomposable"),
    LedgerEntry(Sum([Omega, OmegaStar]), Kind.MULT_TRANSCENDENT, True,
                "separating examples, w + w*: multiplicatively transcendent"),
    LedgerEntry(Sum([Omega, OmegaStar]), Kind.MULTIPLICATIVE, False,
                "separating examples, w + w*: multiplicatively indecomposable"),
    LedgerEntry(Fin(2), Kind.UNIONWISE, True,
                "closing remarks on 2: unionwise decomposable"),
    LedgerEntry(Fin(2), Kind.MULT_TRANSCENDENT, False,
                "closing remarks on 2: multiplicatively untranscendent"),
)

# The same remark records that the real line (uncountable, so not a term here) is
# unionwise decomposable yet multiplicatively untranscendent.


def _ordinal_multiplicative(alpha: Ordinal) -> bool:
    """Exact: is ``alpha == beta * gamma`` with both factors smaller than ``alpha``?"""
    for beta, gamma in _ordinal_factorisations(alpha):
        if compare(beta, alpha) < 0 and compare(gamma, alpha) < 0:
            return True
    return False


def _left_subtract(a: Ordinal, b: Ordinal):
    """The unique d with a + d == b, or None when a > b."""
    if compare(a, b) > 0:
        return None
    for i, ((ea, ca), (eb, cb)) in enumerate(zip(a.terms, b.terms)):
        if ea == eb and ca == cb:
            continue
        if ea == eb:
            return Ordinal([(eb, cb - ca)] + list(b.terms[i + 1:]))
        return Ordinal(b.terms[i:])
    return Ordinal(b.terms[len(a.terms):])


def _ordinal_factorisations(alpha: Ordinal):
    """Candidate factorisations covering every way the product can produce ``alpha``.

    Writing ``gamma = gamma_inf + n`` the product ``beta*gamma`` is
    ``w^(L+d) c ...`` for the infinite terms of gamma followed by
    ``w^L (b*n) + rest(beta)`` when ``n > 0``; here L is beta's leading exponent.
    """
    terms = alpha.terms
    if not terms:
        return
    # n > 0: the term with exponent L carries b*n
    for i, (L, c) in enumerate(terms):
        head = []
        ok = True
        for e, cc in terms[:i]:
            d = _left_subtract(L, e)
            if d is None or d.is_zero():
                ok = False
                break
            head.append((d, cc))
        if not ok:
            continue
        for n in range(1, c + 1):
            if c % n:
                continue
            beta = Ordinal([(L, c // n)] + list(terms[i + 1:]))
            gamma = Ordinal(head + ([(ZERO, n)]))
            if mul(beta, gamma) == alpha:
                yield beta, gamma
    # n == 0: gamma has no finite part; beta = w^L with L below the last exponent
    last = terms[-1][0]
    if last.is_zero():
        return
    candidates = {ONE}
    lead_last = omega_power(last.leading_exponent())
    if compare(lead_last, last) < 0:
        candidates.add(lead_last)
    for L in candidates:
        if compare(L, last) >= 0:
            continue
        gamma_terms = []
        for e, cc in terms:
            d = _left_subtract(L, e)
            if d is None or d.is_zero():
                break
            gamma_terms.append((d, cc))
        else:
            beta, gamma = omega_power(L), Ordinal(gamma_terms)
            if mul(beta, gamma) == alpha:
                yield beta, gamma


def _ordinal_profile(alpha: Ordinal) -> dict:
    Y, N = TriBool.YES, TriBool.NO
    if alpha.is_finite():
        n = int(alpha)
        composite = n >= 4 and any(n % p == 0 for p in range(2, int(n ** 0.5) + 1))
        return {
            Kind.ADDITIVE: TriBool.of(n >= 2),
            Kind.UNIONWISE: TriBool.of(n >= 2),
            Kind.MULTIPLICATIVE: TriBool.of(composite),
            Kind.TYPEWISE: TriBool.of(n >= 3),
            Kind.MULT_SURPASSABLE: TriBool.of(n >= 3),
            Kind.MULT_TRANSCENDENT: TriBool.of(n >= 3),
        }
    indec = is_add_indecomposable(alpha)
    prof = {
        Kind.ADDITIVE: N if indec else Y,
        Kind.UNIONWISE: N if indec else Y,
        Kind.MULTIPLICATIVE: TriBool.of(_ordinal_multiplicative(alpha)),
        Kind.TYPEWISE: TriBool.of(alpha != OMEGA),
    }
    # transcendent: some psi, tau < alpha with psi*tau >= alpha.  Fails exactly for
    # alpha = w^(w^x), where products of smaller ordinals stay below alpha.
    e = alpha.leading_exponent()
    closed = indec and is_add_indecomposable(e)
    prof[Kind.MULT_TRANSCENDENT] = N if closed else Y
    if not closed:
        prof[Kind.MULT_SURPASSABLE] = Y
    elif alpha == OMEGA:
        prof[Kind.MULT_SURPASSABLE] = N
    else:
        prof[Kind.MULT_SURPASSABLE] = TriBool.UNKNOWN
    return prof


def _term_profile(t: OrderTerm, nf) -> dict:
    U = TriBool.UNKNOWN
    prof = {k: U for k in Kind}
    alpha = _nf_ordinal(nf)
    if alpha is None:
        alpha = _nf_ordinal(nf, reverse=True)
    if alpha is not None:
        return _ordinal_profile(alpha)
    if _contains(nf, lambda x: x == Eta):
        # any split or factorisation keeps a copy of eta, which absorbs every countable type
        return {k: TriBool.NO for k in Kind}
    prof[Kind.TYPEWISE] = TriBool.of(classify_typewise(nf) is TypewiseClass.DECOMPOSABLE)
    pieces = _pieces(nf)
    for cut in range(1, len(pieces)):
        left, right = _wrap(pieces[:cut]), _wrap(pieces[cut:])
        if _embeds_nf(nf, normalize(left)) is TriBool.NO and _embeds_nf(nf, normalize(right)) is TriBool.NO:
            prof[Kind.ADDITIVE] = TriBool.YES
            break
    for a, b in _factor_candidates(t, nf):
        if _embeds_nf(nf, a) is TriBool.NO and _embeds_nf(nf, b) is TriBool.NO:
            prof[Kind.MULTIPLICATIVE] = TriBool.YES
            break
    return prof


def _factor_candidates(t, nf):
    seen = []
    cur = t
    while isinstance(cur, Reverse) and isinstance(cur.term, Reverse):
        cur = cur.term.term
    for cand in (cur, nf):
        rev = False
        while isinstance(cand, Reverse):
            cand, rev = cand.term, not rev
        if isinstance(cand, Prod):
            a, b = (Reverse(cand.left), Reverse(cand.right)) if rev else (cand.left, cand.right)
            pair = (normalize(a), normalize(b))
            if pair not in seen:
                seen.append(pair)
    return seen


_IMPLICATIONS = (
    (Kind.ADDITIVE, Kind.UNIONWISE),
    (Kind.MULTIPLICATIVE, Kind.TYPEWISE),
    (Kind.MULTIPLICATIVE, Kind.MULT_TRANSCENDENT),
    (Kind.MULT_TRANSCENDENT, Kind.MULT_SURPASSABLE),
)


def ledger_lookup(t: OrderTerm, kind: Kind):
    nf = normalize(t)
    for entry in LEDGER:
        if entry.kind is kind and normalize(entry.term) in (nf, normalize(Reverse(nf))):
            return entry
    return None


def decomposability_profile(t: OrderTerm) -> dict:
    """All six decomposability answers for ``t`` as a ``{Kind: TriBool}`` dict."""
    nf = normalize(t)
    prof = _term_profile(t, nf)
    for kind in Kind:
        entry = ledger_lookup(nf, kind)
        if entry is None:
            continue
        value = TriBool.of(entry.value)
        if prof[kind] is TriBool.UNKNOWN:
            prof[kind] = value
        elif prof[kind] is not value:
            raise AssertionError(f"derived {prof[kind]} contradicts ledger entry {entry}")
    changed = True
    while changed:
        changed = False
        for strong, weak in _IMPLICATIONS:
            if prof[strong] is TriBool.YES and prof[weak] is TriBool.UNKNOWN:
                prof[weak] = TriBool.YES
                changed = True
            if prof[weak] is TriBool.NO and prof[strong] is TriBool.UNKNOWN:
                prof[strong] = TriBool.NO
                changed = True
    return prof


def decomposability(t: OrderTerm, kind) -> TriBool:
    return decomposability_profile(t)[Kind(kind)]


# text format:  0 | n | w | w* | eta | t + t | t . t | rev(t) | w^k | ord(<ordinal>)

_TERM_TOKEN = re.compile(r"\s*(w\*|w\^\d+|ord\(|rev\(|eta|w|\d+|[+.()])")


def _tokenize_term(text: str) -> list:
    tokens, pos = [], 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TERM_TOKEN.match(text, pos)
        if not m:
            raise OrderTermError(f"unexpected input at {text[pos:]!r}")
        tok = m.group(1)
        if tok == "ord(":
            depth, end = 1, m.end()
            while end < len(text) and depth:
                depth += {"(": 1, ")": -1}.get(text[end], 0)
                end += 1
            if depth:
                raise OrderTermError(f"unbalanced ord( in {text!r}")
            tokens.append(("ord", text[m.end():end - 1]))
            pos = end
            continue
        tokens.append(tok)
        pos = m.end()
    return tokens


class _TermParser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize_term(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise OrderTermError(f"expected {expected or 'more input'} in {self.text!r}")
        self.i += 1
        return tok

    def sum(self):
        parts = [self.product()]
        while self.peek() == "+":
            self.take()
            parts.append(self.product())
        return parts[0] if len(parts) == 1 else Sum(parts)

    def product(self):
        value = self.atom()
        while self.peek() == ".":
            self.take()
            value = Prod(value, self.atom())
        return value

    def atom(self):
        tok = self.take()
        if isinstance(tok, tuple):
            try:
                return Ord(parse_ordinal(tok[1]))
            except ValueError as exc:
                raise OrderTermError(str(exc)) from None
        if tok.isdigit():
            return Fin(int(tok))
        if tok == "w":
            return Omega
        if tok == "w*":
            return OmegaStar
        if tok == "eta":
            return Eta
        if tok.startswith("w^"):
            return Ord(omega_power(int(tok[2:])))
        if tok == "rev(":
            inner = self.sum()
            self.take(")")
            return Reverse(inner)
        if tok == "(":
            inner = self.sum()
            self.take(")")
            return inner
        raise OrderTermError(f"unexpected token {tok!r} in {self.text!r}")


def parse_term(text: str) -> OrderTerm:
    p = _TermParser(text)
    if not p.toks:
        raise OrderTermError("empty term")
    t = p.sum()
    if p.peek() is not None:
        raise OrderTermError(f"trailing input in {text!r}")
    return t


def format_term(t: OrderTerm) -> str:
    if isinstance(t, Fin):
        return str(t.n)
    if t == Omega:
        return "w"
    if t == OmegaStar:
        return "w*"
    if t == Eta:
        return "eta"
    if isinstance(t, Ord):
        v = t.value
        if is_add_indecomposable(v) and v.leading_exponent().is_finite() and int(v.leading_exponent()) >= 2:
            return f"w^{int(v.leading_exponent())}"
        return f"ord({v})"
    if isinstance(t, Reverse):
        return f"rev({format_term(t.term)})"
    if isinstance(t, Sum):
        return " + ".join(f"({format_term(p)})" if isinstance(p, Sum) else format_term(p)
                          for p in t.parts)
    if isinstance(t, Prod):
        left = format_term(t.left)
        if isinstance(t.left, Sum):
            left = f"({left})"
        right = format_term(t.right)
        if isinstance(t.right, (Sum, Prod)):
            right = f"({right})"
        return f"{left} . {right}"
    raise OrderTermError(f"not an order term: {t!r}")

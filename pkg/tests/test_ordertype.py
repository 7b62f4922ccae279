import pytest
from hypothesis import assume, given, settings, strategies as st

from ordpart.ordinal import OMEGA, add, mul, omega_power
from ordpart.ordertype import (
    ALEPH_0, LEDGER, Eta, Fin, Kind, Omega, OmegaStar, Ord, OrderTermError, Prod, Reverse, Sum,
    TriBool, TypewiseClass, as_well_order, cardinal_size, classify_typewise, decomposability,
    embeds, format_term, is_scattered, normalize, parse_term,
)

from oracles import embeds_brute, finite_typewise_decomposable, materialize

YES, NO, UNKNOWN = TriBool.YES, TriBool.NO, TriBool.UNKNOWN


def leaves(infinite=True):
    base = [st.integers(0, 3).map(Fin)]
    if infinite:
        base += [st.just(Omega), st.just(OmegaStar), st.just(Eta), st.just(Ord(omega_power(2)))]
    return st.one_of(*base)


def terms(infinite=True, max_leaves=6):
    return st.recursive(
        leaves(infinite),
        lambda inner: st.one_of(
            st.lists(inner, min_size=2, max_size=3).map(Sum),
            st.tuples(inner, inner).map(lambda p: Prod(*p)),
            inner.map(Reverse),
        ),
        max_leaves=max_leaves,
    )


def test_normalize_examples():
    assert normalize(Reverse(Sum([Omega, Fin(1)]))) == Sum([Fin(1), OmegaStar])
    assert normalize(Prod(Fin(0), Eta)) == Fin(0)
    assert normalize(Sum([Fin(2), Fin(3)])) == Fin(5)


def test_scattered_examples():
    assert is_scattered(Sum([Omega, OmegaStar]))
    assert not is_scattered(Eta)
    assert is_scattered(Prod(Eta, Fin(0)))


def test_embeds_examples():
    assert embeds(Omega, OmegaStar) is NO
    assert embeds(Sum([Eta, Fin(1)]), Eta) is YES
    assert embeds(Omega, Sum([Fin(5), Omega])) is YES
    # equimorphic but distinct
    assert embeds(Eta, Sum([Eta, Fin(1)])) is YES


def test_embeds_scattered_cases():
    w2 = Prod(Omega, Omega)
    assert embeds(w2, Prod(Omega, Sum([OmegaStar, Omega]))) is YES
    assert embeds(w2, Prod(Omega, OmegaStar)) is NO
    assert embeds(Sum([Omega, OmegaStar]), Sum([OmegaStar, Omega])) is NO
    assert embeds(Sum([Omega, OmegaStar]), Sum([Omega, Fin(1), OmegaStar])) is YES
    assert embeds(Ord(omega_power(OMEGA)), Ord(omega_power(3))) is NO
    assert embeds(Ord(omega_power(3)), Ord(omega_power(OMEGA))) is YES


def test_cardinal_size_examples():
    assert cardinal_size(Fin(4)) == 4
    assert cardinal_size(Eta) is ALEPH_0
    assert cardinal_size(Prod(Fin(2), Fin(3))) == 6


def test_classify_examples():
    assert classify_typewise(Sum([Eta, Fin(1)])) is TypewiseClass.ETA
    assert classify_typewise(Prod(Omega, Omega)) is TypewiseClass.DECOMPOSABLE
    assert classify_typewise(Fin(3)) is TypewiseClass.DECOMPOSABLE
    # w^2 fits neither in w nor in w*, which forces the decomposable verdict
    w2 = Prod(Omega, Omega)
    assert embeds(w2, Omega) is NO and embeds(Reverse(w2), Omega) is NO


def test_decomposability_examples():
    half_copies = Prod(Omega, Sum([OmegaStar, Omega]))  # (w* + w) copies of w
    assert decomposability(half_copies, "unionwise") is YES
    # splitting into w.w* + w^2 leaves two parts neither of which contains the whole
    assert decomposability(half_copies, "additive") is YES
    assert decomposability(Sum([Omega, OmegaStar]), "mult-transcendent") is YES


@pytest.mark.parametrize("entry", LEDGER, ids=lambda e: f"{format_term(e.term)}-{e.kind.value}")
def test_ledger_entries_reproduced(entry):
    assert entry.source
    assert decomposability(entry.term, entry.kind) is TriBool.of(entry.value)


def test_ledger_ordinal_cases_are_derived_not_looked_up():
    w_w = Ord(omega_power(OMEGA))
    assert decomposability(w_w, Kind.TYPEWISE) is YES
    assert decomposability(w_w, Kind.MULTIPLICATIVE) is NO
    assert decomposability(Fin(2), Kind.MULT_TRANSCENDENT) is NO


def test_ordinal_decomposability():
    assert decomposability(Prod(Omega, Omega), Kind.MULTIPLICATIVE) is YES
    assert decomposability(Omega, Kind.MULTIPLICATIVE) is NO
    assert decomposability(Sum([Omega, Fin(1)]), Kind.MULTIPLICATIVE) is NO
    assert decomposability(Sum([Omega, Omega, Fin(1)]), Kind.MULTIPLICATIVE) is YES
    assert decomposability(Sum([Omega, Omega]), Kind.ADDITIVE) is YES
    assert decomposability(Ord(omega_power(3)), Kind.ADDITIVE) is NO
    assert decomposability(Fin(4), Kind.MULTIPLICATIVE) is YES
    assert decomposability(Fin(5), Kind.MULTIPLICATIVE) is NO
    assert decomposability(Reverse(Prod(Omega, Omega)), Kind.MULTIPLICATIVE) is YES


def test_non_scattered_all_indecomposable():
    for t in [Eta, Sum([Eta, Fin(1)]), Prod(Fin(2), Eta)]:
        for kind in Kind:
            assert decomposability(t, kind) is NO


@pytest.mark.parametrize("text", [
    "0", "7", "w", "w*", "eta", "w + w*", "w . (w* + w)", "rev(w + 1)", "w^3 . 2 + eta",
    "(w + 1) . w", "ord(w^w + 1)", "rev(eta) . 3", "(w* + w) . w . w",
])
def test_parse_format_roundtrip(text):
    t = parse_term(text)
    assert parse_term(format_term(t)) == t
    n = normalize(t)
    assert parse_term(format_term(n)) == n


def test_parse_errors():
    for bad in ["", "w +", "rev(w", "x", "ord(q)", "(w"]:
        with pytest.raises(OrderTermError):
            parse_term(bad)


def test_precedence():
    assert parse_term("w + w . 2") == Sum([Omega, Prod(Omega, Fin(2))])
    assert parse_term("1 + 2 + 3") == Sum([Fin(1), Fin(2), Fin(3)])


@settings(max_examples=300, deadline=None)
@given(terms())
def test_normalize_idempotent_and_preserving(t):
    n = normalize(t)
    assert normalize(n) == n
    assert cardinal_size(n) == cardinal_size(t)
    assert is_scattered(n) == is_scattered(t)
    assert normalize(Reverse(Reverse(t))) == n
    assert embeds(t, t) is YES


@settings(max_examples=200, deadline=None)
@given(terms(), terms())
def test_normalize_preserves_embeds(s, t):
    assert embeds(normalize(s), normalize(t)) is embeds(s, t)


@settings(max_examples=300, deadline=None)
@given(terms(), terms(), terms())
def test_embeds_transitive_when_decided(a, b, c):
    ab, bc, ac = embeds(a, b), embeds(b, c), embeds(a, c)
    if ab is YES and bc is YES:
        assert ac is not NO


@settings(max_examples=300, deadline=None)
@given(terms())
def test_eta_class_iff_not_scattered(t):
    assert (classify_typewise(t) is TypewiseClass.ETA) == (not is_scattered(t))


@settings(max_examples=300, deadline=None)
@given(terms(infinite=False, max_leaves=4), terms(infinite=False, max_leaves=4))
def test_finite_terms_against_brute_force(s, t):
    ks, kt = materialize(s), materialize(t)
    assume(len(ks) <= 6 and len(kt) <= 6)
    assert ks == sorted(ks) and len(set(ks)) == len(ks)
    assert cardinal_size(s) == len(ks)
    assert embeds(s, t) is TriBool.of(embeds_brute(ks, kt))
    cls = classify_typewise(s)
    small = {0: TypewiseClass.ZERO, 1: TypewiseClass.ONE, 2: TypewiseClass.TWO}
    if finite_typewise_decomposable(len(ks)):
        assert cls is TypewiseClass.DECOMPOSABLE
    else:
        assert cls is small[len(ks)]


def _ordinal_of(t):
    if isinstance(t, Fin):
        return t.n
    if t == Omega:
        return OMEGA
    if isinstance(t, Ord):
        return t.value
    if isinstance(t, Sum):
        total = 0
        for p in t.parts:
            total = add(total, _ordinal_of(p))
        return total
    return mul(_ordinal_of(t.left), _ordinal_of(t.right))


well_ordered = st.recursive(
    st.one_of(st.integers(0, 3).map(Fin), st.just(Omega), st.just(Ord(omega_power(2)))),
    lambda inner: st.one_of(st.lists(inner, min_size=2, max_size=3).map(Sum),
                            st.tuples(inner, inner).map(lambda p: Prod(*p))),
    max_leaves=6,
)


@settings(max_examples=300, deadline=None)
@given(well_ordered, well_ordered)
def test_well_ordered_terms_follow_ordinal_arithmetic(s, t):
    a, b = as_well_order(s), as_well_order(t)
    assert a == _ordinal_of(s)
    assert as_well_order(Reverse(Reverse(s))) == a
    assert embeds(s, t) is TriBool.of(a <= b)

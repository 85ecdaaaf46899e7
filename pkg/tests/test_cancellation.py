from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from smallcancel.cancellation import (
    VerificationParams,
    max_common_piece,
    parse_label,
    ratio_scan,
    verify_metric,
)
from smallcancel.freeprod import FactorFamily
from smallcancel.groups import alternating_group, cyclic_group
from smallcancel.suffix import lcp_array, suffix_array
from smallcancel.symmetrize import SymmetrizedSet

FAM = FactorFamily.of(A=cyclic_group(2, "a"), B=cyclic_group(3, "b"), S=alternating_group(4))


def naive_piece(r1, r2):
    k = 0
    n = min(len(r1), len(r2))
    while k < n and r1[k] == r2[k]:
        k += 1
    if k < n and r1[k].factor == r2[k].factor:
        k += 1
    return k


def brute_worst(sset):
    """Worst piece ratio per class, straight from the definition."""
    members = sorted(sset.materialize())
    worst = {}
    for m in members:
        best = max((naive_piece(m, o) for o in members if o != m), default=0)
        label = sset.classes[sset.class_index(m)].label
        worst[label] = max(worst.get(label, Fraction(0)), Fraction(best, len(m)))
    return worst


def test_suffix_array_and_lcp():
    text = [2, 1, 3, 1, 3, 1, 0]
    sa = suffix_array(text)
    assert list(sa) == sorted(range(len(text)), key=lambda i: text[i:])
    lcp = lcp_array(text, sa)
    for r in range(1, len(text)):
        a, b = text[sa[r - 1]:], text[sa[r]:]
        k = 0
        while k < min(len(a), len(b)) and a[k] == b[k]:
            k += 1
        assert lcp[r] == k


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=40))
def test_suffix_array_sorted(text):
    assert list(suffix_array(text)) == sorted(range(len(text)), key=lambda i: text[i:])


def test_max_common_piece_split():
    r1 = FAM.parse("B.b A.a B.b A.a")
    r2 = FAM.parse("B.b A.a B.[b^2] A.a")
    p = max_common_piece(r1, r2)
    assert len(p) == 3 and p.split_tail
    assert p.word == r2[:3]
    assert max_common_piece(FAM.parse("A.a B.b"), FAM.parse("B.b A.a")) is None
    with pytest.raises(ValueError):
        max_common_piece(r1, r1)


def test_triangle_pieces(tri7, tri10):
    rep7 = verify_metric(tri7.symmetrized)
    assert not rep7.passed
    assert rep7.worst_ratio == Fraction(3, 14)
    assert rep7.worst.witness.split_tail
    rep10 = verify_metric(tri10.symmetrized)
    assert rep10.passed and rep10.worst_ratio == Fraction(3, 20)


def test_short_relators_fail():
    s = SymmetrizedSet(FAM, [FAM.parse("(A.a B.b)^3")])
    rep = verify_metric(s, VerificationParams(Fraction(1, 2)))
    assert rep.short_relators and not rep.passed


@pytest.mark.parametrize("texts", [
    ["(A.a B.b)^7"],
    ["(A.a B.b)^4 A.a B.[b^2]"],
    ["(A.a S.[(123)])^3 B.b", "A.a B.b S.[(12)(34)] B.b"],
    ["S.[(123)] B.b S.[(132)] A.a"],
])
def test_scan_matches_materialized_and_brute_force(texts):
    s = SymmetrizedSet(FAM, [FAM.parse(t) for t in texts])
    fast = verify_metric(s, method="scan")
    slow = verify_metric(s, method="materialized")
    assert fast == slow
    brute = brute_worst(s)
    assert {c.label: c.ratio for c in fast.classes} == brute


seed_words = st.lists(
    st.lists(st.sampled_from(["A.a", "B.b", "B.[b^2]", "S.[(123)]", "S.[(12)(34)]", "S.[(134)]"]),
             min_size=2, max_size=9).map(lambda xs: FAM.parse(" ".join(xs))),
    min_size=1, max_size=3)


@settings(max_examples=80, deadline=None)
@given(seed_words)
def test_scan_equals_materialized(words):
    words = [w for w in words if w]
    if not words:
        return
    s = SymmetrizedSet(FAM, words)
    assert verify_metric(s, method="scan") == verify_metric(s, method="materialized")


@settings(max_examples=30, deadline=None)
@given(seed_words)
def test_scan_equals_definition(words):
    words = [w for w in words if w]
    if not words:
        return
    s = SymmetrizedSet(FAM, words)
    rep = verify_metric(s)
    assert {c.label: c.ratio for c in rep.classes} == brute_worst(s)


def test_early_exit_verdict(tri7, tri10):
    assert not verify_metric(tri7.symmetrized, early_exit=True).passed
    assert verify_metric(tri10.symmetrized, early_exit=True).passed


def test_parse_label():
    assert parse_label("u[3]") == ("u", (3,))
    assert parse_label("w_a[0,1]") == ("w_a", (0, 1))
    with pytest.raises(ValueError):
        parse_label("r0")


def test_ratio_scan_missing_selector(tri10):
    with pytest.raises(KeyError):
        ratio_scan(tri10.symmetrized, "u", [0])


def test_params_validation():
    with pytest.raises(ValueError):
        VerificationParams(Fraction(0))
    p = VerificationParams()
    assert p.violates(1, 6) and not p.violates(1, 7)

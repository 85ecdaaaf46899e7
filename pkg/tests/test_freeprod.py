import pytest
from hypothesis import given, settings, strategies as st

from smallcancel.freeprod import (
    FactorFamily,
    FamilyMismatch,
    Letter,
    LiteralError,
    Word,
    cyclic_reduce,
    is_weakly_cyclically_reduced,
    normalize,
    weakly_cyclic_reduce,
)
from smallcancel.groups import alternating_group, cyclic_group

FAM = FactorFamily.of(A=cyclic_group(2, "a"), B=cyclic_group(3, "b"), S=alternating_group(4))


def raw_letters(max_size=12):
    sizes = [g.order for _, g in FAM.factors]
    letter = st.integers(0, len(sizes) - 1).flatmap(
        lambda f: st.integers(0, sizes[f] - 1).map(lambda e: Letter(f, e)))
    return st.lists(letter, max_size=max_size)


words = raw_letters().map(FAM.word)


def test_parse_and_serialize():
    w = FAM.parse("(A.a B.b)^3")
    assert len(w) == 6
    assert FAM.parse("A.a A.a") == FAM.identity()
    assert FAM.parse("B.b B.b").serialize() == "B.[b^2]"
    assert FAM.parse("1").serialize() == "1"
    assert FAM.parse("S.[(123)] S.[(132)]") == FAM.identity()
    assert FAM.parse("(A.a B.b)^-1").serialize() == "B.[b^2] A.a"
    assert FAM.parse("B.b^-1") == FAM.parse("B.[b^2]")


@pytest.mark.parametrize("text, col", [
    ("A.a )", 5), ("(A.a", 5), ("^2", 1), ("Q.a", 1), ("A.z", 3), ("A.a %", 5),
])
def test_literal_errors(text, col):
    with pytest.raises(LiteralError, match=f"column {col}"):
        FAM.parse(text)


def test_mixed_families_raise():
    other = FactorFamily.of(A=cyclic_group(2, "a"), B=cyclic_group(5, "b"))
    with pytest.raises(FamilyMismatch):
        FAM.parse("A.a") * other.parse("A.a")


def test_weak_cyclic_reduction():
    w = FAM.parse("B.b A.a B.[b^2] B.[b^2]")  # normalizes to b a b
    assert w.serialize() == "B.b A.a B.b"
    assert is_weakly_cyclically_reduced(w)
    u = FAM.parse("B.b A.a B.[b^2]")
    r, c = weakly_cyclic_reduce(u)
    assert r == FAM.parse("A.a") and c * u * c.inverse() == r
    r, c = cyclic_reduce(w)
    assert r.serialize() == "B.[b^2] A.a"
    assert c * w * c.inverse() == r


@settings(max_examples=1000, deadline=None)
@given(words, words, words)
def test_associativity(u, v, w):
    assert (u * v) * w == u * (v * w)


@settings(max_examples=800, deadline=None)
@given(words, words)
def test_inverse_and_length(u, v):
    assert (u * u.inverse()) == FAM.identity()
    assert (u * v).inverse() == v.inverse() * u.inverse()
    assert len(u * v) <= len(u) + len(v)
    assert len(u * v) >= abs(len(u) - len(v))


@settings(max_examples=800, deadline=None)
@given(raw_letters())
def test_normal_form_is_canonical(raw):
    w = FAM.word(raw)
    assert normalize(FAM, w.letters) == w.letters
    assert all(x.factor != y.factor for x, y in zip(w.letters, w.letters[1:]))
    # left-to-right product equals the letter-by-letter product
    acc = FAM.identity()
    for x in raw:
        acc = acc * FAM.word([x])
    assert acc == w


@settings(max_examples=500, deadline=None)
@given(words)
def test_literal_round_trip(w):
    assert FAM.parse(w.serialize()) == w


@settings(max_examples=500, deadline=None)
@given(words, words)
def test_cyclic_reduce_is_conjugate(u, c):
    w = c * u * c.inverse()
    r, k = cyclic_reduce(w)
    assert k * w * k.inverse() == r
    assert is_weakly_cyclically_reduced(r)
    assert len(r) <= 1 or r[0].factor != r[-1].factor


def test_word_slicing_and_hash():
    w = FAM.parse("A.a B.b A.a S.[(123)]")
    assert isinstance(w[1:3], Word) and len(w[1:3]) == 2
    assert w[0] == Letter(0, 1)
    assert hash(w) == hash(FAM.parse(w.serialize()))
    assert (w ** 3) * (w ** -3) == FAM.identity()

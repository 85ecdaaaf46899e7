"""Normal-form arithmetic in a free product of finite groups.

A letter is a nonidentity element of one factor.  A word is reduced when
adjacent letters come from different factors; every element of the free
product has exactly one reduced word, so reduced words are used as the
elements themselves.

Word literals are whitespace-separated tokens ``factor.elem`` with an
optional ``^k``; parentheses group subwords and may carry exponents too,
e.g. ``(A.a B.b)^23``.  Element names that are not plain identifiers are
written in brackets, ``S0.[(12)(34)]``.  The empty word is ``1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from .groups import GroupError, GroupTable


class FamilyMismatch(ValueError):
    pass


class LiteralError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at column {pos + 1}")
        self.pos = pos


class Letter(NamedTuple):
    factor: int
    elem: int


@dataclass(frozen=True, eq=False)
class FactorFamily:
    """An ordered list of nontrivial finite factors ``(id, table)``."""

    factors: tuple[tuple[str, GroupTable], ...]

    def __post_init__(self):
        ids = [fid for fid, _ in self.factors]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate factor ids in {ids}")
        for fid, g in self.factors:
            if not _IDENT.fullmatch(fid):
                raise ValueError(f"factor id {fid!r} is not an identifier")
            if g.order < 2:
                raise ValueError(f"factor {fid} is trivial")
        object.__setattr__(self, "_pos", {fid: i for i, fid in enumerate(ids)})

    @classmethod
    def of(cls, **factors: GroupTable) -> "FactorFamily":
        return cls(tuple(factors.items()))

    def __eq__(self, other):
        if not isinstance(other, FactorFamily):
            return NotImplemented
        return self is other or self.factors == other.factors

    def __hash__(self):
        return hash(tuple(fid for fid, _ in self.factors))

    def __repr__(self):
        return "FactorFamily(" + " * ".join(f"{fid}={g.name}" for fid, g in self.factors) + ")"

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(fid for fid, _ in self.factors)

    def __len__(self):
        return len(self.factors)

    def factor_index(self, fid: str | int) -> int:
        if isinstance(fid, int):
            if not 0 <= fid < len(self.factors):
                raise ValueError(f"factor index {fid} out of range")
            return fid
        try:
            return self._pos[fid]
        except KeyError:
            raise ValueError(f"unknown factor {fid!r}") from None

    def group(self, f: int | str) -> GroupTable:
        return self.factors[self.factor_index(f)][1]

    def letter(self, fid: str | int, elem: int | str) -> Letter:
        f = self.factor_index(fid)
        e = self.factors[f][1].index(elem)
        if e == 0:
            raise ValueError(f"identity of {self.factors[f][0]} is not a letter")
        return Letter(f, e)

    def word(self, letters: Iterable[Letter | tuple[int, int]] = ()) -> "Word":
        """Normalize an arbitrary letter sequence (identities allowed)."""
        return Word(self, normalize(self, letters))

    def identity(self) -> "Word":
        return Word(self, ())

    def parse(self, text: str) -> "Word":
        return Word(self, _Parser(self, text).parse())

    def letter_name(self, x: Letter) -> str:
        fid, g = self.factors[x.factor]
        name = g.elements[x.elem]
        return f"{fid}.{name}" if _IDENT.fullmatch(name) else f"{fid}.[{name}]"

    def mul_letters(self, x: Letter, y: Letter) -> int:
        """Element index of ``x*y`` for two letters of the same factor."""
        return self.factors[x.factor][1].mul[x.elem][y.elem]

    def inv_letter(self, x: Letter) -> Letter:
        return Letter(x.factor, self.factors[x.factor][1].inv[x.elem])


def normalize(family: FactorFamily, raw: Iterable[Letter | tuple[int, int]]) -> tuple[Letter, ...]:
    """Single left-to-right stack pass merging same-factor neighbours."""
    tables = [g.mul for _, g in family.factors]
    out: list[Letter] = []
    for f, e in raw:
        if not 0 <= f < len(tables) or not 0 <= e < len(tables[f]):
            raise ValueError(f"letter ({f}, {e}) does not belong to {family!r}")
        if e == 0:
            continue
        if out and out[-1][0] == f:
            e = tables[f][out[-1][1]][e]
            out.pop()
            if e == 0:
                continue
        out.append(Letter(f, e))
    return tuple(out)


class Word:
    """A reduced word; immutable and hashable."""

    __slots__ = ("family", "letters", "_hash")

    def __init__(self, family: FactorFamily, letters: Sequence[Letter] = ()):
        self.family = family
        self.letters = tuple(letters)
        self._hash = None

    # the constructor trusts its input; use FactorFamily.word to normalize
    @classmethod
    def checked(cls, family: FactorFamily, letters: Sequence[Letter]) -> "Word":
        letters = tuple(Letter(*x) for x in letters)
        if normalize(family, letters) != letters:
            raise ValueError("letter sequence is not in normal form")
        return cls(family, letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.family, self.letters[i])
        return self.letters[i]

    def __bool__(self):
        return bool(self.letters)

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters and self.family == other.family

    def __lt__(self, other: "Word"):
        return self.letters < other.letters

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def _check(self, other: "Word"):
        if self.family is not other.family and self.family != other.family:
            raise FamilyMismatch("words belong to different free products")

    def __mul__(self, other: "Word") -> "Word":
        self._check(other)
        return Word(self.family, _join(self.family, self.letters, other.letters))

    def inverse(self) -> "Word":
        inv = [g.inv for _, g in self.family.factors]
        return Word(self.family, tuple(Letter(f, inv[f][e]) for f, e in reversed(self.letters)))

    __invert__ = inverse

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        out = self.family.identity()
        for _ in range(abs(k)):
            out = out * base
        return out

    def conjugate(self, c: "Word") -> "Word":
        """``c * self * c^-1``."""
        return c * self * c.inverse()

    def serialize(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(self.family.letter_name(x) for x in self.letters)

    __str__ = serialize

    def __repr__(self):
        text = self.serialize()
        if len(text) > 80:
            text = text[:77] + "..."
        return f"Word({text})"


def _join(family: FactorFamily, u: tuple[Letter, ...], v: tuple[Letter, ...]) -> tuple[Letter, ...]:
    # only the junction can cancel; walk it instead of renormalizing everything
    i, j = len(u), 0
    while i > 0 and j < len(v) and u[i - 1].factor == v[j].factor:
        e = family.mul_letters(u[i - 1], v[j])
        if e:
            return u[:i - 1] + (Letter(v[j].factor, e),) + v[j + 1:]
        i -= 1
        j += 1
    return u[:i] + v[j:]


def multiply(u: Word, v: Word) -> Word:
    return u * v


def invert(u: Word) -> Word:
    return u.inverse()


def length(u: Word) -> int:
    return len(u.letters)


def is_weakly_cyclically_reduced(u: Word) -> bool:
    if len(u) <= 1:
        return True
    first, last = u.letters[0], u.letters[-1]
    return first.factor != last.factor or u.family.mul_letters(last, first) != 0


def weakly_cyclic_reduce(u: Word) -> tuple[Word, Word]:
    """Return ``(r, c)`` with ``r = c u c^-1`` weakly cyclically reduced."""
    fam, letters = u.family, u.letters
    lo, hi = 0, len(letters)
    while hi - lo >= 2:
        first, last = letters[lo], letters[hi - 1]
        if first.factor != last.factor or fam.mul_letters(last, first) != 0:
            break
        lo += 1
        hi -= 1
    # conjugator is the inverse of the stripped prefix
    return Word(fam, letters[lo:hi]), Word(fam, letters[:lo]).inverse()


def cyclic_reduce(u: Word) -> tuple[Word, Word]:
    """Return ``(r, c)``, ``r = c u c^-1``, whose end letters lie in distinct factors.

    Stronger than weak cyclic reduction: same-factor ends are merged.
    """
    fam = u.family
    r, c = weakly_cyclic_reduce(u)
    letters = r.letters
    if len(letters) >= 2 and letters[0].factor == letters[-1].factor:
        last = letters[-1]
        merged = Letter(last.factor, fam.mul_letters(last, letters[0]))
        letters = (merged,) + letters[1:-1]
        c = Word(fam, (last,)) * c
        r = Word(fam, letters)
    return r, c


# ---------------------------------------------------------------- literals

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(
    r"\s*(?:(?P<lp>\()|(?P<rp>\))|(?P<pow>\^\s*(?P<exp>[+-]?\d+))|(?P<one>1(?![\d.]))"
    r"|(?P<fac>[A-Za-z_][A-Za-z0-9_]*)\.(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|\[(?P<br>[^\]]*)\]))"
)


class _Parser:
    def __init__(self, family: FactorFamily, text: str):
        self.family = family
        self.text = text
        self.pos = 0

    def _next(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            rest = self.text[self.pos:]
            if rest.strip() == "":
                return None
            raise LiteralError(f"unexpected input {rest.strip()[:12]!r}", self.pos + len(rest) - len(rest.lstrip()))
        return m

    def parse(self) -> tuple[Letter, ...]:
        out = self._seq(top=True)
        return out

    def _seq(self, top: bool) -> tuple[Letter, ...]:
        acc: tuple[Letter, ...] = ()
        while True:
            m = self._next()
            if m is None:
                if not top:
                    raise LiteralError("unclosed parenthesis", len(self.text))
                return acc
            start = m.start(m.lastgroup) if m.lastgroup else m.start()
            if m.group("rp"):
                if top:
                    raise LiteralError("unbalanced ')'", start)
                self.pos = m.end()
                return acc
            if m.group("pow") is not None:
                raise LiteralError("exponent without a base", start)
            self.pos = m.end()
            if m.group("lp"):
                item = self._seq(top=False)
            elif m.group("one"):
                item = ()
            else:
                fid = m.group("fac")
                has_name = m.group("name") is not None
                name = m.group("name") if has_name else m.group("br")
                try:
                    f = self.family.factor_index(fid)
                except ValueError as exc:
                    raise LiteralError(str(exc), m.start("fac")) from None
                try:
                    e = self.family.factors[f][1].index(name)
                except (ValueError, GroupError) as exc:
                    raise LiteralError(str(exc), m.start("name" if has_name else "br")) from None
                item = (Letter(f, e),)
            nxt = _TOKEN.match(self.text, self.pos)
            if nxt and nxt.group("pow") is not None:
                self.pos = nxt.end()
                item = self._power(item, int(nxt.group("exp")))
            acc = _join(self.family, acc, normalize(self.family, item))

    def _power(self, item: tuple[Letter, ...], k: int) -> tuple[Letter, ...]:
        if len(item) == 1:
            f, e = item[0]
            return (Letter(f, self.family.factors[f][1].power(e, k)),)
        w = Word(self.family, normalize(self.family, item)) ** k
        return w.letters


def parse_word(family: FactorFamily, text: str) -> Word:
    return family.parse(text)

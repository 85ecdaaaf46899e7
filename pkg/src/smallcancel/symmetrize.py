"""Symmetrized closures of finite relator seeds.

Every weakly cyclically reduced conjugate of a relator is, after merging
its end letters, a rotation of one cyclically reduced word.  So the
closure splits into finitely many *classes*, one per cyclic word (and
one per inverse cyclic word).  The members of a class with cyclic word
``x_0 ... x_{L-1}`` are, for each start ``j`` and each nonidentity ``z``
in the factor of ``x_j``::

    z x_{j+1} ... x_{j-1} y        with y = x_j z^-1 (dropped when trivial)

A one-letter class consists of the conjugacy class of its letter inside
the factor.  ``SymmetrizedSet`` stores only the classes; ``members()``
enumerates them from the formula above and ``materialize()`` builds the
same set independently by saturating under inversion, rotation and
boundary conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .freeprod import (
    FactorFamily,
    Letter,
    Word,
    cyclic_reduce,
    is_weakly_cyclically_reduced,
    weakly_cyclic_reduce,
)


def least_rotation(s: Sequence) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    n = len(s)
    if n == 0:
        return 0
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j % n]
        i = f[j - k - 1]
        while i != -1 and sj != s[(k + i + 1) % n]:
            if sj < s[(k + i + 1) % n]:
                k = j - i - 1
            i = f[i]
        if i == -1 and sj != s[(k + i + 1) % n]:
            if sj < s[(k + i + 1) % n]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def primitive_period(s: Sequence) -> int:
    """Smallest ``p`` dividing ``len(s)`` with ``s`` a power of ``s[:p]``."""
    n = len(s)
    if n == 0:
        return 0
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and s[i] != s[k]:
            k = fail[k - 1]
        if s[i] == s[k]:
            k += 1
        fail[i] = k
    p = n - fail[-1]
    return p if n % p == 0 else n


def canonical_cyclic(w: Word) -> tuple[Letter, ...]:
    """Canonical representative of the class of ``w`` (any nonempty word)."""
    r, _ = cyclic_reduce(w)
    letters = r.letters
    if not letters:
        raise ValueError("the empty word has no relator class")
    if len(letters) == 1:
        x = letters[0]
        g = w.family.group(x.factor)
        return (Letter(x.factor, min(g.conjugacy_class(x.elem))),)
    k = least_rotation(letters)
    return letters[k:] + letters[:k]


@dataclass(frozen=True)
class RelatorClass:
    letters: tuple[Letter, ...]
    label: str
    period: int

    @property
    def length(self) -> int:
        return len(self.letters)


def member_letters(family: FactorFamily, cls: RelatorClass, j: int, z: int) -> tuple[Letter, ...]:
    """The member of ``cls`` starting at position ``j`` with first letter ``(factor, z)``."""
    c = cls.letters
    x = c[j]
    if len(c) == 1:
        return (Letter(x.factor, z),)
    g = family.group(x.factor)
    y = g.mul[x.elem][g.inv[z]]
    tail = c[j + 1:] + c[:j]
    return (Letter(x.factor, z),) + tail + ((Letter(x.factor, y),) if y else ())


class SymmetrizedSet:
    def __init__(self, family: FactorFamily, seed: Sequence[Word], labels: Sequence[str] | None = None):
        if labels is None:
            labels = [f"r{i}" for i in range(len(seed))]
        if len(labels) != len(seed):
            raise ValueError("one label per seed word is required")
        self.family = family
        self.seed = tuple(seed)
        self.labels = tuple(labels)
        self.classes: list[RelatorClass] = []
        self._by_letters: dict[tuple[Letter, ...], int] = {}
        # seed label -> indices of its forward and inverse classes
        self.seed_classes: dict[str, tuple[int, ...]] = {}
        for w, label in zip(self.seed, self.labels):
            if w.family != family:
                raise ValueError(f"seed {label} belongs to another free product")
            if not w:
                raise ValueError(f"seed {label} is the empty word")
            idx = []
            for word, suffix in ((w, ""), (w.inverse(), "^-1")):
                key = canonical_cyclic(word)
                if key not in self._by_letters:
                    self._by_letters[key] = len(self.classes)
                    self.classes.append(RelatorClass(key, label + suffix, primitive_period(key)))
                if self._by_letters[key] not in idx:
                    idx.append(self._by_letters[key])
            self.seed_classes[label] = tuple(idx)

    def __repr__(self):
        return f"SymmetrizedSet({len(self.seed)} seeds, {len(self.classes)} classes)"

    @property
    def total_letters(self) -> int:
        """Letters over all classes; the size of the rotation scan."""
        return sum(c.length for c in self.classes)

    def positions(self, cls: RelatorClass) -> range:
        return range(cls.period if cls.length > 1 else 1)

    def first_letters(self, cls: RelatorClass, j: int) -> list[int]:
        x = cls.letters[j]
        g = self.family.group(x.factor)
        if cls.length == 1:
            return sorted(g.conjugacy_class(x.elem))
        return list(g.nonidentity())

    def class_members(self, cls: RelatorClass) -> Iterator[Word]:
        for j in self.positions(cls):
            for z in self.first_letters(cls, j):
                yield Word(self.family, member_letters(self.family, cls, j, z))

    def members(self) -> Iterator[Word]:
        for cls in self.classes:
            yield from self.class_members(cls)

    def member_count(self) -> int:
        n = 0
        for cls in self.classes:
            for j in self.positions(cls):
                n += len(self.first_letters(cls, j))
        return n

    def class_index(self, w: Word) -> int | None:
        if not w:
            return None
        return self._by_letters.get(canonical_cyclic(w))

    def contains(self, w: Word) -> bool:
        if w.family != self.family or not w or not is_weakly_cyclically_reduced(w):
            return False
        return self.class_index(w) is not None

    __contains__ = contains

    def materialize(self) -> frozenset[Word]:
        """Saturate the seeds under inversion, rotation and boundary conjugation."""
        fam = self.family
        start = {weakly_cyclic_reduce(w)[0].letters for w in self.seed}
        seen = set(start)
        stack = list(start)
        while stack:
            w = stack.pop()
            for nxt in _neighbours(fam, w):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return frozenset(Word(fam, w) for w in seen)


def _neighbours(fam: FactorFamily, w: tuple[Letter, ...]) -> Iterator[tuple[Letter, ...]]:
    inv = [g.inv for _, g in fam.factors]
    yield tuple(Letter(f, inv[f][e]) for f, e in reversed(w))
    if len(w) == 1:
        x = w[0]
        g = fam.group(x.factor)
        for c in g.nonidentity():
            yield (Letter(x.factor, g.mul[g.mul[g.inv[c]][x.elem]][c]),)
        return
    first, last = w[0], w[-1]
    # move the first letter to the end, merging when the ends share a factor
    if first.factor == last.factor:
        yield w[1:-1] + (Letter(last.factor, fam.mul_letters(last, first)),)
        return
    yield w[1:] + (first,)
    # c^-1 w c for c in the factor of the first letter splits that letter
    g = fam.group(first.factor)
    for c in g.nonidentity():
        head = g.mul[g.inv[c]][first.elem]
        yield ((Letter(first.factor, head),) if head else ()) + w[1:] + (Letter(first.factor, c),)


def symmetrized_closure(seed: Sequence[Word], labels: Sequence[str] | None = None) -> SymmetrizedSet:
    if not seed:
        raise ValueError("empty seed")
    return SymmetrizedSet(seed[0].family, seed, labels)

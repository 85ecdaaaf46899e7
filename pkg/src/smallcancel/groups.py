"""Finite groups given extensionally by multiplication tables.

Products are read left to right: ``mul[x][y]`` is "x then y".  For
permutation groups this means the permutation ``x`` is applied first.
Element index 0 is always the identity.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

ORDER_CAP = 400


class GroupError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GroupTable:
    name: str
    elements: tuple[str, ...]
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = len(self.elements)
        if n == 0:
            raise GroupError(f"{self.name}: empty element list")
        if n > ORDER_CAP:
            raise GroupError(f"{self.name}: order {n} exceeds cap {ORDER_CAP}")
        if len(set(self.elements)) != n:
            raise GroupError(f"{self.name}: element names are not unique")
        if len(self.mul) != n or any(len(row) != n for row in self.mul):
            raise GroupError(f"{self.name}: table is not {n}x{n}")
        m = np.asarray(self.mul, dtype=np.int32)
        if m.min() < 0 or m.max() >= n:
            raise GroupError(f"{self.name}: table entry out of range")
        ar = np.arange(n)
        if not (np.array_equal(m[0], ar) and np.array_equal(m[:, 0], ar)):
            raise GroupError(f"{self.name}: element 0 ({self.elements[0]}) is not the identity")
        # each row must contain the identity exactly where the column does
        left = np.argmax(m == 0, axis=1)
        if not np.all(m[ar, left] == 0) or not np.all(m[left, ar] == 0):
            raise GroupError(f"{self.name}: some element has no two-sided inverse")
        if not _associative(m):
            raise GroupError(f"{self.name}: table is not associative")
        inv = tuple(int(x) for x in left)
        if self.inv and tuple(self.inv) != inv:
            raise GroupError(f"{self.name}: inverse list disagrees with the table")
        object.__setattr__(self, "inv", inv)
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.elements)})

    @classmethod
    def from_names(cls, name: str, elements: Sequence[str], table: Sequence[Sequence[str]]) -> "GroupTable":
        """Build from a table whose entries are element names."""
        idx = {e: i for i, e in enumerate(elements)}
        try:
            mul = tuple(tuple(idx[x] for x in row) for row in table)
        except KeyError as exc:
            raise GroupError(f"{name}: unknown element {exc.args[0]!r} in table") from None
        return cls(name, tuple(elements), mul)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        if not isinstance(other, GroupTable):
            return NotImplemented
        return (self.name, self.elements, self.mul) == (other.name, other.elements, other.mul)

    def __hash__(self):
        return hash((self.name, self.elements))

    def __repr__(self):
        return f"GroupTable({self.name!r}, order={self.order})"

    def index(self, x: int | str) -> int:
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            if not 0 <= x < self.order:
                raise GroupError(f"{self.name}: element index {x} out of range")
            return int(x)
        try:
            return self._index[x]
        except KeyError:
            raise GroupError(f"{self.name}: unknown element {x!r}") from None

    def name_of(self, x: int) -> str:
        return self.elements[x]

    def op(self, x: int, y: int) -> int:
        return self.mul[x][y]

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv[x], -k
        r = 0
        for _ in range(k % self.element_order(x)):
            r = self.mul[r][x]
        return r

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul[y][x]
            k += 1
        return k

    def nonidentity(self) -> range:
        return range(1, self.order)

    def conjugacy_class(self, x: int) -> frozenset[int]:
        return frozenset(self.mul[self.mul[self.inv[g]][x]][g] for g in range(self.order))


def _associative(m: np.ndarray, chunk: int = 32) -> bool:
    n = m.shape[0]
    for start in range(0, n, chunk):
        a = m[start:start + chunk]              # rows a, columns b -> ab
        left = m[a]                             # (ab)c indexed [a, b, c]
        right = a[:, m]                         # a(bc) indexed [a, b, c]
        if not np.array_equal(left, right):
            return False
    return True


def cyclic_group(m: int, gen: str = "g", name: str | None = None) -> GroupTable:
    """Cyclic group of order ``m`` with elements ``e, g, g^2, ...``."""
    if m < 1:
        raise GroupError("cyclic group order must be positive")
    names = ["e"] + [gen if k == 1 else f"{gen}^{k}" for k in range(1, m)]
    mul = tuple(tuple((i + j) % m for j in range(m)) for i in range(m))
    return GroupTable(name or f"C{m}", tuple(names), mul)


def cycle_notation(perm: Sequence[int]) -> str:
    """Name a permutation of ``0..k-1`` by its cycles on ``1..k``; identity is ``e``."""
    seen, parts = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = perm[x]
        parts.append("(" + ("".join(cyc) if len(perm) < 10 else ",".join(cyc)) + ")")
    return "".join(parts) or "e"


def _parity(perm: Sequence[int]) -> int:
    seen, p = set(), 0
    for start in range(len(perm)):
        x, length = start, 0
        while x not in seen:
            seen.add(x)
            x = perm[x]
            length += 1
        if length:
            p ^= (length - 1) & 1
    return p


def permutation_group(name: str, perms: Iterable[Sequence[int]]) -> GroupTable:
    perms = sorted({tuple(p) for p in perms})
    k = len(perms[0])
    ident = tuple(range(k))
    perms.remove(ident)
    perms.insert(0, ident)
    pos = {p: i for i, p in enumerate(perms)}
    # x then y: i -> y[x[i]]
    mul = tuple(tuple(pos[tuple(y[x[i]] for i in range(k))] for y in perms) for x in perms)
    return GroupTable(name, tuple(cycle_notation(p) for p in perms), mul)


def alternating_group(k: int) -> GroupTable:
    if not 3 <= k <= 6:
        raise GroupError("alternating group degree must be in 3..6")
    perms = [p for p in itertools.permutations(range(k)) if _parity(p) == 0]
    return permutation_group(f"A{k}", perms)


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Parse ``(123)(45)`` or ``(1,2,3)`` into a permutation of ``0..degree-1``."""
    perm = list(range(degree))
    text = text.strip()
    if text in ("e", "()", ""):
        return tuple(perm)
    for body in text.strip("()").split(")("):
        pts = [int(x) - 1 for x in (body.split(",") if "," in body else list(body))]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
    return tuple(perm)


def subgroup_generated(g: GroupTable, gens: Iterable[int | str]) -> frozenset[int]:
    gens = [g.index(x) for x in gens]
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s in gens:
            for y in (g.mul[x][s], g.mul[x][g.inv[s]]):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return frozenset(seen)


def normal_closure(g: GroupTable, gens: Iterable[int | str]) -> frozenset[int]:
    conj = set()
    for x in gens:
        conj |= g.conjugacy_class(g.index(x))
    return subgroup_generated(g, conj)


def is_simple(g: GroupTable) -> bool:
    if g.order == 1:
        return False
    done = set()
    for x in g.nonidentity():
        if x in done:
            continue
        cls = g.conjugacy_class(x)
        done |= cls
        if len(normal_closure(g, [x])) != g.order:
            return False
    return True


@dataclass(frozen=True)
class Homomorphism:
    source: GroupTable
    target: GroupTable
    image: tuple[int, ...]

    @classmethod
    def from_names(cls, source: GroupTable, target: GroupTable, mapping: dict) -> "Homomorphism":
        """Extend a map given on generators (by name) to the whole source.

        Raises GroupError if the assignment does not extend to a homomorphism.
        """
        gens = {source.index(k): target.index(v) for k, v in mapping.items()}
        image = _extend(source, target, gens)
        if image is None:
            raise GroupError(f"assignment {mapping} does not extend to a homomorphism "
                             f"{source.name} -> {target.name}")
        return cls(source, target, image)

    def __call__(self, x: int) -> int:
        return self.image[x]


@dataclass(frozen=True)
class HomReport:
    is_hom: bool
    is_injective: bool


def validate_homomorphism(h: Homomorphism) -> HomReport:
    if len(h.image) != h.source.order:
        raise GroupError(f"image map has {len(h.image)} entries, source has order {h.source.order}")
    s, t, im = h.source, h.target, h.image
    ok = im[0] == 0 and all(
        im[s.mul[x][y]] == t.mul[im[x]][im[y]] for x in range(s.order) for y in range(s.order)
    )
    return HomReport(ok, ok and len(set(im)) == s.order)


def identity_hom(g: GroupTable) -> Homomorphism:
    return Homomorphism(g, g, tuple(range(g.order)))


def _extend(source: GroupTable, target: GroupTable, gens: dict[int, int]) -> tuple[int, ...] | None:
    image = {0: 0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s, ts in gens.items():
            y, ty = source.mul[x][s], target.mul[image[x]][ts]
            if y in image:
                if image[y] != ty:
                    return None
            else:
                image[y] = ty
                queue.append(y)
    if len(image) != source.order:
        return None
    im = tuple(image[x] for x in range(source.order))
    if not validate_homomorphism(Homomorphism(source, target, im)).is_hom:
        return None
    return im


def generating_set(g: GroupTable) -> list[int]:
    """A small generating set, chosen greedily by descending element order."""
    order = sorted(g.nonidentity(), key=lambda x: (-g.element_order(x), x))
    gens: list[int] = []
    span = frozenset({0})
    for x in order:
        if x not in span:
            gens.append(x)
            span = subgroup_generated(g, gens)
            if len(span) == g.order:
                break
    return gens


def find_embedding(source: GroupTable, target: GroupTable) -> Homomorphism | None:
    """Search for an injective homomorphism by backtracking over generator images."""
    gens = generating_set(source)
    cands = [[y for y in range(target.order) if target.element_order(y) == source.element_order(x)]
             for x in gens]
    for choice in itertools.product(*cands):
        im = _extend(source, target, dict(zip(gens, choice)))
        if im is not None and len(set(im)) == source.order:
            return Homomorphism(source, target, im)
    return None


@dataclass(frozen=True)
class SimpleFactorSpec:
    """A finite simple group together with designated generators.

    The first two generators play the roles of ``s`` and ``t``; longer
    tuples are used for the indexed generating families of the
    uncountable construction.
    """

    group: GroupTable
    gens: tuple[int, ...]

    @property
    def s(self) -> int:
        return self.gens[0]

    @property
    def t(self) -> int:
        return self.gens[1 if len(self.gens) > 1 else 0]

    def problems(self) -> list[str]:
        out = []
        if not is_simple(self.group):
            out.append(f"host {self.group.name} is not simple")
        if len(subgroup_generated(self.group, self.gens)) != self.group.order:
            names = ", ".join(self.group.elements[x] for x in self.gens)
            out.append(f"host {self.group.name} is not generated by {names}")
        return out


A5_GENERATORS = ("(12345)", "(12)(34)")


def default_host() -> SimpleFactorSpec:
    a5 = alternating_group(5)
    return SimpleFactorSpec(a5, tuple(a5.index(x) for x in A5_GENERATORS))

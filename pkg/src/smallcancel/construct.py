"""Relator families over ``A * B * S_0 * S_1 * ...``.

``A = C2 = <a>``, ``B = C3 = <b>`` and each ``S_i`` is a finite simple
host with designated generators ``s_i, t_i`` containing a copy of the
member group ``H_i``.  The distinguished elements ``h_i`` (and ``hbar_i``)
are written as their images in ``S_i``, so each is a single letter.

Countable family (``build_theorem_a``), with ``k`` running down::

    u_i      = (ab)^k (ab^-1) ... (ab)^k' s_i      k = (2i+2)n .. (2i+1)n+1
    v_i      = (ab)^k (ab^-1) ... (ab)^k' t_i      k = (2i+3)n .. (2i+2)n+1
    w_a[i,j] = (h_i h_j)^k (h_i hbar_j) ... a      k = n .. 1
    w_b[i,j] = (h_i h_j)^k (h_i hbar_j) ... b      k = 2n .. n+1
    pow_a[i] = (h_i a)^n,   pow_b[i] = (h_i b)^n

The indexed variant (``build_theorem_b``) replaces ``B`` by a free product
of copies ``B_j`` of C3 over a finite index list ``J``.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .cancellation import PieceReport, VerificationParams, verify_metric
from .freeprod import FactorFamily, Letter, Word, is_weakly_cyclically_reduced
from .groups import (
    GroupTable,
    Homomorphism,
    SimpleFactorSpec,
    cyclic_group,
    default_host,
    find_embedding,
    validate_homomorphism,
)
from .symmetrize import SymmetrizedSet


class ConstructionError(ValueError):
    def __init__(self, problems: Sequence[str] | str):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class NoAdmissibleN(ValueError):
    pass


@dataclass(frozen=True)
class FamilyMemberSpec:
    group: GroupTable
    host: SimpleFactorSpec
    embedding: Homomorphism
    h: int
    h_bar: int | None = None

    def problems(self, i: int) -> list[str]:
        out = []
        g = self.group
        rep = validate_homomorphism(self.embedding) if self.embedding.source == g \
            and self.embedding.target == self.host.group else None
        if rep is None:
            out.append(f"member {i}: embedding does not map {g.name} into the host {self.host.group.name}")
        elif not rep.is_hom:
            out.append(f"member {i}: embedding is not a homomorphism")
        elif not rep.is_injective:
            out.append(f"member {i}: embedding is not injective")
        out += [f"member {i}: {p}" for p in self.host.problems()]
        if not 0 < self.h < g.order:
            out.append(f"member {i}: h must be a nontrivial element")
        if i > 0 and (self.h_bar is None or not 0 < self.h_bar < g.order or self.h_bar == self.h):
            out.append(f"member {i} requires a pair of distinct nontrivial elements h, h_bar")
        return out

    def image(self, x: int) -> int:
        return self.embedding.image[x]


def member(group: GroupTable, host: SimpleFactorSpec | None = None, embedding: Homomorphism | None = None,
           h: int | str | None = None, h_bar: int | str | None = None) -> FamilyMemberSpec:
    """Fill in defaults: the standard A5 host, a searched embedding, the first elements."""
    host = host or default_host()
    if embedding is None:
        embedding = find_embedding(group, host.group)
        if embedding is None:
            raise ConstructionError(f"{group.name} does not embed in {host.group.name}")
    h = 1 if h is None else group.index(h)
    if h_bar is None:
        h_bar = next((x for x in group.nonidentity() if x != h), None)
    else:
        h_bar = group.index(h_bar)
    return FamilyMemberSpec(group, host, embedding, h, h_bar)


@dataclass(frozen=True)
class ConstructionParams:
    n: int
    family: tuple[FamilyMemberSpec, ...]
    force: bool = False   # skip the coprime-to-6 gate (experiments only)

    def problems(self) -> list[str]:
        out = []
        if self.n < 1:
            out.append("n must be a positive integer")
        elif math.gcd(self.n, 6) != 1 and not self.force:
            out.append(f"n must be relatively prime to 6 (got {self.n})")
        if len(self.family) < 2:
            out.append("the family needs at least 2 members")
        if not any(m.group.order >= 3 for m in self.family):
            out.append("some member must have at least 3 elements")
        for i, m in enumerate(self.family):
            if i > 0 and m.group.order == 2:
                out.append(f"member {i} has order 2; the order-2 member must sit at index 0 "
                           f"and appear once (use reindex_family)")
            out += m.problems(i)
        return out


def reindex_family(members: Sequence[FamilyMemberSpec]) -> tuple[FamilyMemberSpec, ...]:
    """Move the unique order-2 member to index 0."""
    twos = [i for i, m in enumerate(members) if m.group.order == 2]
    if len(twos) > 1:
        raise ConstructionError(f"members {twos} all have order 2; only one copy of C2 is allowed")
    if not twos:
        return tuple(members)
    k = twos[0]
    return (members[k],) + tuple(m for i, m in enumerate(members) if i != k)


@dataclass(frozen=True)
class TaggedRelator:
    word: Word
    tag: str
    indices: tuple[int, ...]

    @property
    def label(self) -> str:
        return f"{self.tag}[{','.join(map(str, self.indices))}]"


class Presentation:
    """Free-product factors, seed relators, and designated factor generators."""

    def __init__(self, family: FactorFamily, relators: Sequence[TaggedRelator],
                 generators: dict[str, tuple[Letter, ...]] | None = None, meta: dict | None = None):
        self.family = family
        self.relators = tuple(relators)
        if generators is None:
            generators = {fid: tuple(Letter(f, e) for e in g.nonidentity())
                          for f, (fid, g) in enumerate(family.factors)}
        self.generators = dict(generators)
        self.meta = dict(meta or {})
        self._reports: dict[VerificationParams, PieceReport] = {}
        for r in self.relators:
            if not r.word or not is_weakly_cyclically_reduced(r.word):
                raise ConstructionError(f"relator {r.label} is empty or not weakly cyclically reduced")

    @classmethod
    def from_words(cls, family: FactorFamily, words: Sequence[Word], tag: str = "r") -> "Presentation":
        return cls(family, [TaggedRelator(w, tag, (i,)) for i, w in enumerate(words)])

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return (self.family == other.family and self.relators == other.relators
                and self.generators == other.generators and self.meta == other.meta)

    def __repr__(self):
        return f"Presentation({self.family!r}, {len(self.relators)} relators)"

    @cached_property
    def symmetrized(self) -> SymmetrizedSet:
        return SymmetrizedSet(self.family, [r.word for r in self.relators], [r.label for r in self.relators])

    def relator(self, label: str) -> TaggedRelator:
        for r in self.relators:
            if r.label == label:
                return r
        raise KeyError(label)

    def report(self, params: VerificationParams | None = None) -> PieceReport:
        params = params or VerificationParams()
        if params not in self._reports:
            self._reports[params] = verify_metric(self.symmetrized, params)
        return self._reports[params]

    def is_verified(self) -> bool:
        return self.report().passed


# ------------------------------------------------------------ words

def _descending(pair: tuple[Letter, Letter], sep: tuple[Letter, Letter], hi: int, lo: int,
                terminal: Letter) -> list[Letter]:
    out: list[Letter] = []
    for k in range(hi, lo - 1, -1):
        if k != hi:
            out += sep
        out += pair * k
    out.append(terminal)
    return out


def _word(family: FactorFamily, letters: list[Letter]) -> Word:
    w = family.word(letters)
    if len(w) != len(letters):
        raise ConstructionError("relator letters cancel; check the chosen elements")
    return w


def theorem_a_family(members: Sequence[FamilyMemberSpec]) -> FactorFamily:
    factors = [("A", cyclic_group(2, "a", "C2")), ("B", cyclic_group(3, "b", "C3"))]
    factors += [(f"S{i}", m.host.group) for i, m in enumerate(members)]
    return FactorFamily(tuple(factors))


def build_theorem_a(params: ConstructionParams) -> Presentation:
    problems = params.problems()
    if problems:
        raise ConstructionError(problems)
    n, members = params.n, params.family
    fam = theorem_a_family(members)
    a, b, b_inv = Letter(0, 1), Letter(1, 1), Letter(1, 2)
    S = lambda i, e: Letter(2 + i, e)  # noqa: E731
    h = [S(i, m.image(m.h)) for i, m in enumerate(members)]
    hb = [S(i, m.image(m.h_bar)) if m.h_bar is not None else None for i, m in enumerate(members)]
    rels: list[TaggedRelator] = []
    I = range(len(members))
    for i in I:
        w = _descending((a, b), (a, b_inv), (2 * i + 2) * n, (2 * i + 1) * n + 1, S(i, members[i].host.s))
        rels.append(TaggedRelator(_word(fam, w), "u", (i,)))
    for i in I:
        w = _descending((a, b), (a, b_inv), (2 * i + 3) * n, (2 * i + 2) * n + 1, S(i, members[i].host.t))
        rels.append(TaggedRelator(_word(fam, w), "v", (i,)))
    pairs = [(i, j) for i in I for j in I if i < j]
    for i, j in pairs:
        w = _descending((h[i], h[j]), (h[i], hb[j]), n, 1, a)
        rels.append(TaggedRelator(_word(fam, w), "w_a", (i, j)))
    for i, j in pairs:
        w = _descending((h[i], h[j]), (h[i], hb[j]), 2 * n, n + 1, b)
        rels.append(TaggedRelator(_word(fam, w), "w_b", (i, j)))
    for i in I:
        rels.append(TaggedRelator(_word(fam, [h[i], a] * n), "pow_a", (i,)))
    for i in I:
        rels.append(TaggedRelator(_word(fam, [h[i], b] * n), "pow_b", (i,)))
    gens = {"A": (a,), "B": (b,)}
    for i, m in enumerate(members):
        gens[f"S{i}"] = (S(i, m.host.s), S(i, m.host.t))
    return Presentation(fam, rels, gens, {"theorem": "a", "n": n})


# ------------------------------------------------------------ closed forms

def predicted_length(tag: str, n: int, i: int = 0) -> int:
    return {
        "u": 4 * n * n * i + 3 * n * n + 3 * n - 1,
        "v": 4 * n * n * i + 5 * n * n + 3 * n - 1,
        "w_a": n * n + 3 * n - 1,
        "w_b": 3 * n * n + 3 * n - 1,
        "pow_a": 2 * n,
        "pow_b": 2 * n,
        "u_ij": n * n + 3 * n - 1,
        "w_a_B": n * n + 3 * n - 1,
        "w_bj_B": n * n + 3 * n - 1,
    }[tag]


@dataclass(frozen=True)
class LengthRow:
    label: str
    measured: int
    predicted: int

    @property
    def ok(self) -> bool:
        return self.measured == self.predicted


def predicted_lengths(pres: Presentation) -> list[LengthRow]:
    n = pres.meta["n"]
    return [LengthRow(r.label, len(r.word), predicted_length(r.tag, n, r.indices[0]))
            for r in pres.relators]


# ------------------------------------------------------------ indexed variant

@dataclass(frozen=True)
class TheoremBSpec:
    J: tuple[int, ...]
    alpha: dict[tuple[int, int], int] | None = None
    L: tuple[tuple[int, int], ...] | None = None
    # large member i' -> one (h_{i',j}, hbar_{i',j}) pair per j in J
    h_indexed: dict[int, tuple[tuple[int, int], ...]] = field(default_factory=dict)


def default_L(members: Sequence[FamilyMemberSpec]) -> tuple[tuple[int, int], ...]:
    top = max(m.group.order for m in members)
    out = []
    for i, mi in enumerate(members):
        for k, mk in enumerate(members):
            if mk.group.order != top or i == k:
                continue
            if mi.group.order < top or i < k:
                out.append((i, k))
    return tuple(out)


def _check_L(members, L) -> list[str]:
    top = max(m.group.order for m in members)
    out = []
    Ls = set(L)
    for i, k in Ls:
        if members[k].group.order != top or i == k:
            out.append(f"pair ({i},{k}) in L: second member must be of maximal order and distinct")
    for i, mi in enumerate(members):
        for k, mk in enumerate(members):
            if i == k or mk.group.order != top:
                continue
            if mi.group.order < top and (i, k) not in Ls:
                out.append(f"L must contain ({i},{k})")
            if mi.group.order == top and i < k and ((i, k) in Ls) == ((k, i) in Ls):
                out.append(f"L must contain exactly one of ({i},{k}) and ({k},{i})")
    return out


def build_theorem_b(spec: TheoremBSpec, params: ConstructionParams) -> Presentation:
    members, n, J = params.family, params.n, tuple(spec.J)
    problems = [p for p in params.problems() if "relatively prime" in p or "positive" in p
                or "at least 2" in p]
    for i, m in enumerate(members):
        problems += [p for p in m.problems(i) if "pair of distinct" not in p]
    if not J or len(set(J)) != len(J):
        problems.append("J must be a nonempty list of distinct indices")
    if problems:
        raise ConstructionError(problems)
    I = range(len(members))
    alpha = spec.alpha
    if alpha is None:
        alpha = {(i, j): J[(i * len(J) + k) % len(J)] for i in I for k, j in enumerate(J)}
    if set(alpha) != {(i, j) for i in I for j in J}:
        raise ConstructionError("alpha must be defined on every pair in I x J")
    if len(set(alpha.values())) != len(alpha):
        raise ConstructionError(f"alpha is not injective on I x J ({len(alpha)} pairs, "
                                f"{len(set(alpha.values()))} images)")
    L = tuple(spec.L) if spec.L is not None else default_L(members)
    problems = _check_L(members, L)
    if not L:
        problems.append("L is empty")
    large = sorted({k for _, k in L})
    chosen: dict[int, tuple[tuple[int, int], ...]] = {}
    for k in large:
        m = members[k]
        if m.h_bar is None or m.h_bar == m.h or m.h_bar == 0:
            problems.append(f"member {k} requires a pair of distinct nontrivial elements h, h_bar")
            continue
        pairs = spec.h_indexed.get(k)
        if pairs is None:
            free = [x for x in m.group.nonidentity() if x not in (m.h, m.h_bar)]
            if len(free) < 2 * len(J):
                problems.append(f"member {k} has too few elements for {len(J)} indexed pairs")
                continue
            pairs = tuple((free[2 * q], free[2 * q + 1]) for q in range(len(J)))
        flat = [m.h, m.h_bar] + [x for p in pairs for x in p]
        if len(pairs) != len(J) or 0 in flat or len(set(flat)) != len(flat):
            problems.append(f"member {k}: indexed elements must be distinct, nontrivial, "
                            f"and different from h and h_bar")
        chosen[k] = tuple(pairs)
    for i, m in enumerate(members):
        if len(m.host.gens) > len(J):
            used = m.host.gens[:len(J)]
            if len(SimpleFactorSpec(m.host.group, used).problems()) > len(m.host.problems()):
                problems.append(f"member {i}: the first {len(J)} host generators do not generate")
    if problems:
        raise ConstructionError(problems)

    b_labels = sorted(set(J) | set(alpha.values()))
    factors = [("A", cyclic_group(2, "a", "C2"))]
    factors += [(f"B{j}", cyclic_group(3, "b", "C3")) for j in b_labels]
    factors += [(f"S{i}", m.host.group) for i, m in enumerate(members)]
    fam = FactorFamily(tuple(factors))
    bpos = {j: 1 + q for q, j in enumerate(b_labels)}
    spos = 1 + len(b_labels)
    a = Letter(0, 1)
    B = lambda j, e=1: Letter(bpos[j], e)  # noqa: E731
    S = lambda i, e: Letter(spos + i, e)  # noqa: E731
    img = lambda i, x: S(i, members[i].image(x))  # noqa: E731
    h = [img(i, m.h) for i, m in enumerate(members)]

    rels: list[TaggedRelator] = []
    for i in I:
        gens = members[i].host.gens
        for q, j in enumerate(J):
            bj = alpha[(i, j)]
            w = _descending((a, B(bj)), (a, B(bj, 2)), n, 1, S(i, gens[q % len(gens)]))
            rels.append(TaggedRelator(_word(fam, w), "u_ij", (i, j)))
    for i, k in L:
        w = _descending((h[i], h[k]), (h[i], img(k, members[k].h_bar)), n, 1, a)
        rels.append(TaggedRelator(_word(fam, w), "w_a_B", (i, k)))
    for i, k in L:
        for q, j in enumerate(J):
            x, xb = chosen[k][q]
            w = _descending((h[i], img(k, x)), (h[i], img(k, xb)), n, 1, B(j))
            rels.append(TaggedRelator(_word(fam, w), "w_bj_B", (i, k, j)))
    for i in I:
        rels.append(TaggedRelator(_word(fam, [h[i], a] * n), "pow_a", (i,)))
    for i in I:
        for j in J:
            rels.append(TaggedRelator(_word(fam, [h[i], B(j)] * n), "pow_b", (i, j)))
    gens = {"A": (a,)}
    gens.update({f"B{j}": (B(j),) for j in b_labels})
    for i, m in enumerate(members):
        gens[f"S{i}"] = tuple(S(i, x) for x in m.host.gens)
    return Presentation(fam, rels, gens, {"theorem": "b", "n": n})


# ------------------------------------------------------------ families and n

def corollary_a_family(g: GroupTable, max_order: int) -> list[GroupTable]:
    """``[C2, g, C3, C3, C4, C4, ..., C_max, C_max]``."""
    if max_order < 3:
        raise ValueError("max_order must be at least 3")
    if g.order == 2:
        warnings.warn("g has order 2 and collides with the designated C2 at index 0", stacklevel=2)
    out = [cyclic_group(2), g]
    for m in range(3, max_order + 1):
        out += [cyclic_group(m), cyclic_group(m)]
    return out


def _passes(args) -> bool:
    members, n, vparams = args
    pres = build_theorem_a(ConstructionParams(n, members, force=True))
    return verify_metric(pres.symmetrized, vparams, early_exit=True).passed


def find_min_n(members: Sequence[FamilyMemberSpec], params: VerificationParams | None = None,
               coprime6: bool = False, bound: int = 64, jobs: int = 1) -> int:
    """Least ``n <= bound`` whose countable-family build satisfies the metric condition."""
    params = params or VerificationParams()
    members = tuple(members)
    cands = [n for n in range(1, bound + 1) if not coprime6 or math.gcd(n, 6) == 1]
    if jobs <= 1:
        for n in cands:
            if _passes((members, n, params)):
                return n
    else:
        with ProcessPoolExecutor(jobs) as pool:
            for start in range(0, len(cands), jobs):
                batch = cands[start:start + jobs]
                for n, ok in zip(batch, pool.map(_passes, [(members, n, params) for n in batch])):
                    if ok:
                        return n
    raise NoAdmissibleN(f"no admissible n in 1..{bound}")


def ratio_bound(n: int) -> Fraction:
    """The binding inequality's left side, piece 4n+2 over |w_a| = n^2+3n-1."""
    return Fraction(4 * n + 2, n * n + 3 * n - 1)

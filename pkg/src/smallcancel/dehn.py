"""Dehn's algorithm over a free product, plus a brute-force triviality oracle.

The solver works on cyclic words.  A step rotates the current cyclically
reduced word to some offset, finds a prefix ``s`` that is a semi-reduced
prefix of a closure member ``r = s q`` with ``2|s| > |r|``, and replaces it
by ``q^-1``.  Members are never materialized: each class contributes an
index entry per start position, keyed by the factor of its first letter and
a rolling hash of the letters that any long enough match must reproduce
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .cancellation import VerificationParams
from .construct import Presentation
from .freeprod import FactorFamily, Letter, Word, cyclic_reduce, normalize
from .symmetrize import RelatorClass, SymmetrizedSet, member_letters

_MOD = (1 << 61) - 1
_BASE = 1_000_003


class NotVerified(ValueError):
    pass


@dataclass(frozen=True)
class DehnStep:
    offset: int          # rotation applied to the current cyclic word
    matched: Word
    relator: str         # label of the relator class
    member: Word         # the closure member r = matched * q (semi-reduced)
    replacement: Word    # q^-1
    result: Word         # new cyclically reduced word


@dataclass(frozen=True)
class ReductionTrace:
    initial: Word
    start: Word          # cyclically reduced conjugate of ``initial``
    steps: tuple[DehnStep, ...]
    final: Word

    def lines(self) -> list[str]:
        """One step per line: offset, relator, matched length, new length."""
        return [f"{s.offset}\t{s.relator}\t{len(s.matched)}\t{len(s.result)}" for s in self.steps]


def apply_step(current: Word, offset: int, matched: Word, replacement: Word) -> Word:
    fam = current.family
    rot = current.letters[offset:] + current.letters[:offset]
    k = len(matched)
    if rot[:k] != matched.letters:
        raise ValueError("matched subword not found at the recorded offset")
    return cyclic_reduce(Word(fam, normalize(fam, replacement.letters + rot[k:])))[0]


def replay(trace: ReductionTrace) -> Word:
    cur = cyclic_reduce(trace.initial)[0]
    if cur != trace.start:
        raise ValueError("trace start does not match the initial word")
    for s in trace.steps:
        cur = apply_step(cur, s.offset, s.matched, s.replacement)
        if cur != s.result:
            raise ValueError(f"replay diverged at offset {s.offset}")
    return cur


def _code(x: Letter) -> int:
    return (x.factor << 20) + x.elem + 1


def _prefix_hashes(codes: Sequence[int]) -> list[int]:
    h = [0] * (len(codes) + 1)
    for i, c in enumerate(codes):
        h[i + 1] = (h[i] * _BASE + c) % _MOD
    return h


class DehnSolver:
    def __init__(self, pres: Presentation, unchecked: bool = False,
                 params: VerificationParams | None = None):
        if not unchecked:
            rep = pres.report(params or VerificationParams())
            if not rep.passed:
                raise NotVerified("presentation does not satisfy the metric condition; "
                                  "Dehn's algorithm is not a decision procedure here")
        self.pres = pres
        self.family: FactorFamily = pres.family
        self.sset: SymmetrizedSet = pres.symmetrized
        self._pow: dict[int, int] = {}
        # (g, factor, window hash) -> [(class index, start)]
        self._index: dict[tuple[int, int, int], list[tuple[int, int]]] = {}
        self._singles: dict[Letter, int] = {}
        self._gaps: set[int] = set()
        for ci, cls in enumerate(self.sset.classes):
            if cls.length == 1:
                x = cls.letters[0]
                for e in self.family.group(x.factor).conjugacy_class(x.elem):
                    self._singles.setdefault(Letter(x.factor, e), ci)
                continue
            g = max(0, cls.length // 2 - 1)
            self._gaps.add(g)
            doubled = [_code(x) for x in cls.letters * 2]
            ph = _prefix_hashes(doubled)
            pw = self._power(g)
            for j in self.sset.positions(cls):
                key = (g, cls.letters[j].factor, (ph[j + 1 + g] - ph[j + 1] * pw) % _MOD)
                self._index.setdefault(key, []).append((ci, j))

    def _power(self, g: int) -> int:
        if g not in self._pow:
            self._pow[g] = pow(_BASE, g, _MOD)
        return self._pow[g]

    # -------------------------------------------------------------- search

    def _candidates(self, cur: tuple[Letter, ...]) -> Iterable[tuple[int, int, int]]:
        """Yield ``(offset, class, start)`` in offset order."""
        m = len(cur)
        doubled = [_code(x) for x in cur * 2]
        ph = _prefix_hashes(doubled)
        gaps = sorted(g for g in self._gaps if g + 2 <= m)
        for p in range(m):
            f = cur[p].factor
            for g in gaps:
                h = (ph[p + 1 + g] - ph[p + 1] * self._power(g)) % _MOD
                for ci, j in self._index.get((g, f, h), ()):
                    yield p, ci, j

    def _match(self, cur: tuple[Letter, ...], p: int, cls: RelatorClass, j: int):
        """Longest admissible match of a member starting with ``cur[p]`` at class start ``j``."""
        fam = self.family
        m, L = len(cur), cls.length
        c = cls.letters
        z = cur[p].elem
        member = member_letters(fam, cls, j, z)
        e = 0
        lim = min(L - 1, m - 1)
        while e < lim and cur[(p + 1 + e) % m] == c[(j + 1 + e) % L]:
            e += 1
        # member[1..e] matched exactly; try to extend by one same-factor letter
        k = e + 1
        if k < min(len(member), m):
            nxt = cur[(p + k) % m]
            if nxt.factor == member[k].factor:
                k += 1
        if 2 * k <= len(member):
            return None
        s = tuple(cur[(p + i) % m] for i in range(k))
        last, want = s[-1], member[k - 1]
        g = fam.group(last.factor)
        head = g.mul[g.inv[last.elem]][want.elem]
        q = ((Letter(last.factor, head),) if head else ()) + member[k:]
        return s, member, q

    def step(self, current: Word) -> DehnStep | None:
        cur = current.letters
        fam = self.family
        if len(cur) == 1 and cur[0] in self._singles:
            ci = self._singles[cur[0]]
            return DehnStep(0, current, self.sset.classes[ci].label, current, fam.identity(), fam.identity())
        best = None
        best_key = None
        for p, ci, j in self._candidates(cur):
            if best is not None and p > best[0]:
                break
            cls = self.sset.classes[ci]
            got = self._match(cur, p, cls, j)
            if got is None:
                continue
            s, member, q = got
            key = (-len(s), member)
            if best_key is not None and key >= best_key:
                continue
            rep = Word(fam, tuple(fam.inv_letter(x) for x in reversed(q)))
            res = apply_step(current, p, Word(fam, s), rep)
            if len(res) >= len(cur):
                continue
            best, best_key = (p, cls.label, s, member, rep, res), key
        if best is None:
            # a lone letter conjugate to a one-letter relator hides inside longer words
            for p, x in enumerate(cur):
                if x in self._singles:
                    res = apply_step(current, p, Word(fam, (x,)), fam.identity())
                    return DehnStep(p, Word(fam, (x,)), self.sset.classes[self._singles[x]].label,
                                    Word(fam, (x,)), fam.identity(), res)
            return None
        p, label, s, member, rep, res = best
        return DehnStep(p, Word(fam, s), label, Word(fam, member), rep, res)

    def reduce(self, w: Word) -> tuple[Word, ReductionTrace]:
        if w.family != self.family:
            raise ValueError("word belongs to another free product")
        start = cyclic_reduce(w)[0]
        cur = start
        steps = []
        while cur:
            st = self.step(cur)
            if st is None:
                break
            steps.append(st)
            cur = st.result
        return cur, ReductionTrace(w, start, tuple(steps), cur)

    def is_trivial(self, w: Word) -> bool:
        return not self.reduce(w)[0]


def dehn_reduce(w: Word, pres: Presentation, unchecked: bool = False) -> tuple[Word, ReductionTrace]:
    return DehnSolver(pres, unchecked).reduce(w)


def is_trivial(w: Word, pres: Presentation, unchecked: bool = False) -> bool:
    return DehnSolver(pres, unchecked).is_trivial(w)


# ------------------------------------------------------------ certificates

@dataclass
class EmbeddingReport:
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def check_factor_embedding(pres: Presentation, solver: DehnSolver | None = None,
                           factors: Iterable[str] | None = None, pairs: bool = True) -> EmbeddingReport:
    """Every nonidentity factor element must survive Dehn reduction.

    With ``pairs`` the quotients ``x y^-1`` of distinct elements are checked too.
    """
    solver = solver or DehnSolver(pres)
    fam = pres.family
    rep = EmbeddingReport()
    for fid in (factors if factors is not None else fam.ids):
        f = fam.factor_index(fid)
        g = fam.group(f)
        for x in g.nonidentity():
            rep.checked += 1
            if solver.is_trivial(Word(fam, (Letter(f, x),))):
                rep.failures.append(f"{fam.letter_name(Letter(f, x))} reduces to 1")
        if pairs:
            for x, y in product(range(g.order), repeat=2):
                if x == y:
                    continue
                rep.checked += 1
                w = Word(fam, normalize(fam, [Letter(f, x), Letter(f, g.inv[y])]))
                if solver.is_trivial(w):
                    rep.failures.append(f"{fid}: elements {g.elements[x]} and {g.elements[y]} collapse")
    return rep


@dataclass
class GenerationReport:
    expressions: dict[str, Word] = field(default_factory=dict)
    via: dict[str, str] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def check_generation(pres: Presentation, targets: Iterable[str],
                     solver: DehnSolver | None = None) -> GenerationReport:
    """Express outside generators through relators in which they occur once.

    A relator ``P g Q`` with every other letter in already reached factors
    gives ``g = (Q P)^-1``.  Reached factors grow until nothing changes.
    """
    solver = solver or DehnSolver(pres)
    fam = pres.family
    known = {fam.factor_index(t) for t in targets}
    rep = GenerationReport()
    pending = {fam.factor_index(fid): list(gens) for fid, gens in pres.generators.items()
               if fam.factor_index(fid) not in known}
    progress = True
    while pending and progress:
        progress = False
        for f in sorted(pending):
            gens = pending[f]
            for g in list(gens):
                found = _express(pres, known, g)
                if found is None:
                    continue
                label, expr = found
                name = fam.letter_name(g)
                if not solver.is_trivial(expr * Word(fam, (fam.inv_letter(g),))):
                    rep.failures.append(f"{name}: expression from {label} does not verify")
                rep.expressions[name] = expr
                rep.via[name] = label
                gens.remove(g)
            if not gens:
                known.add(f)
                del pending[f]
                progress = True
    for f, gens in sorted(pending.items()):
        for g in gens:
            rep.failures.append(f"{fam.letter_name(g)}: not syntactically expressible")
    return rep


def _express(pres: Presentation, known: set[int], g: Letter) -> tuple[str, Word] | None:
    fam = pres.family
    for r in pres.relators:
        letters = r.word.letters
        hits = [i for i, x in enumerate(letters) if x == g]
        if len(hits) != 1:
            continue
        i = hits[0]
        if any(x.factor not in known for k, x in enumerate(letters) if k != i):
            continue
        rest = Word(fam, normalize(fam, letters[i + 1:] + letters[:i]))
        return r.label, rest.inverse()
    return None


# ------------------------------------------------------------ oracle

ORACLE_LETTER_CAP = 500


def oracle_is_trivial(w: Word, pres: Presentation, max_len: int, conj_len: int = 2) -> bool | None:
    """Search the normal closure by products of conjugated relators.

    Returns True when ``w`` is reached, ``None`` (unknown) otherwise.
    """
    sset = pres.symmetrized
    if sset.total_letters > ORACLE_LETTER_CAP:
        raise ValueError(f"oracle is for toy presentations (at most {ORACLE_LETTER_CAP} closure letters)")
    fam = pres.family
    if not w:
        return True
    if len(w) > max_len:
        return None
    letters = [Letter(f, e) for f, (_, g) in enumerate(fam.factors) for e in g.nonidentity()]
    conj = {()}
    frontier = {()}
    for _ in range(conj_len):
        frontier = {normalize(fam, c + (x,)) for c in frontier for x in letters}
        conj |= frontier
    gens = set()
    for r in sset.materialize():
        for c in conj:
            cw = Word(fam, c)
            x = cw * r * cw.inverse()
            if len(x) <= 2 * max_len:
                gens.add(x.letters)
    target = w.letters
    seen = {()}
    queue = [()]
    while queue:
        nxt = []
        for e in queue:
            for x in gens:
                y = normalize(fam, e + x)
                if len(y) <= max_len and y not in seen:
                    if y == target:
                        return True
                    seen.add(y)
                    nxt.append(y)
        queue = nxt
    return None

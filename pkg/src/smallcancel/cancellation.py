"""Pieces and the metric small-cancellation condition over free products.

A nonempty reduced word ``p`` is a piece of two distinct closure members
``r1, r2`` when both factor as semi-reduced products ``r = p q``: the
last letter of ``p`` may be a proper divisor of the corresponding letter
of ``r`` (same factor, no cancellation).  So a maximal common piece is
the longest common letter prefix, extended by one letter when the first
disagreeing letters share a factor.

Two independent routes compute the worst piece of every closure member:

``method="scan"``
    works on the relator classes only.  The member of a class starting at
    position ``j`` with first letter ``z`` continues with the cyclic tail
    after ``j``, so two members with the same first letter share exactly
    the common prefix of their tails.  All tails are suffixes of doubled
    class words; a suffix array puts tails with long common prefixes next
    to each other.
``method="materialized"``
    builds every member explicitly and compares them pairwise.

All ratios are ``Fraction``s; nothing is ever rounded.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .freeprod import Letter, Word
from .suffix import lcp_array, suffix_array
from .symmetrize import RelatorClass, SymmetrizedSet, member_letters


@dataclass(frozen=True)
class Piece:
    word: Word
    relator_1: Word
    relator_2: Word
    split_tail: bool

    def __len__(self):
        return len(self.word)

    def key(self):
        return (self.word.letters, self.relator_1.letters, self.relator_2.letters)


def _common(a: Sequence[Letter], b: Sequence[Letter]) -> tuple[int, bool]:
    n = min(len(a), len(b))
    k = 0
    while k < n and a[k] == b[k]:
        k += 1
    if k < n and a[k].factor == b[k].factor:
        return k + 1, True
    return k, False


def max_common_piece(r1: Word, r2: Word) -> Piece | None:
    """Longest ``p`` with ``r1 = p q1`` and ``r2 = p q2`` both semi-reduced.

    In the split case the last letter of ``p`` is taken from ``r2``, so
    ``p`` is always a prefix of ``r2``.
    """
    if r1 == r2:
        raise ValueError("a piece needs two distinct relators")
    r1._check(r2)
    k, split = _common(r1.letters, r2.letters)
    if k == 0:
        return None
    return Piece(r2[:k], r1, r2, split)


@dataclass(frozen=True)
class VerificationParams:
    lambda_: Fraction = Fraction(1, 6)
    min_relator_length: int = 7

    def __post_init__(self):
        lam = Fraction(self.lambda_)
        if not 0 < lam < 1:
            raise ValueError("lambda must lie strictly between 0 and 1")
        object.__setattr__(self, "lambda_", lam)

    def violates(self, piece_len: int, rel_len: int) -> bool:
        # |p| < lambda |r|, cross-multiplied
        lam = self.lambda_
        return piece_len * lam.denominator >= lam.numerator * rel_len


@dataclass(frozen=True)
class ClassReport:
    label: str
    cyclic_length: int
    piece_length: int
    relator_length: int
    ratio: Fraction
    witness: Piece | None


@dataclass(frozen=True, order=True)
class Violation:
    label: str
    relator: tuple[Letter, ...] = field(repr=False)
    piece_length: int
    relator_length: int


@dataclass(frozen=True)
class PieceReport:
    passed: bool
    lambda_: Fraction
    min_relator_length: int
    classes: tuple[ClassReport, ...]
    short_relators: tuple[str, ...]
    violations: tuple[Violation, ...]
    complete: bool = True

    @property
    def worst(self) -> ClassReport | None:
        best = None
        for c in self.classes:
            if c.witness is None:
                continue
            if best is None or c.ratio > best.ratio or (c.ratio == best.ratio and c.witness.key() < best.witness.key()):
                best = c
        return best

    @property
    def worst_ratio(self) -> Fraction:
        w = self.worst
        return w.ratio if w else Fraction(0)

    def class_report(self, label: str) -> ClassReport:
        for c in self.classes:
            if c.label == label:
                return c
        raise KeyError(label)

    def seed_table(self, sset: SymmetrizedSet) -> dict[str, ClassReport]:
        """Worst class report per seed label (over the seed and its inverse)."""
        by_label = {c.label: c for c in self.classes}
        out = {}
        for label, idx in sset.seed_classes.items():
            reps = [by_label[sset.classes[i].label] for i in idx if sset.classes[i].label in by_label]
            if reps:
                out[label] = max(reps, key=lambda c: c.ratio)
        return out


# ------------------------------------------------------------ shared parts

def _better(cand_key, cur_key) -> bool:
    return cur_key is None or cand_key < cur_key


class _Members:
    """Explicit members grouped by first letter and by first factor."""

    def __init__(self, words: Iterable[tuple[Letter, ...]]):
        self.by_first: dict[Letter, list[tuple[Letter, ...]]] = defaultdict(list)
        self.by_factor: dict[int, list[tuple[Letter, ...]]] = defaultdict(list)
        for w in words:
            self.by_first[w[0]].append(w)
            self.by_factor[w[0].factor].append(w)
        for lst in list(self.by_first.values()) + list(self.by_factor.values()):
            lst.sort()

    def best(self, r1: tuple[Letter, ...]) -> tuple[int, tuple | None]:
        """Worst piece length of ``r1`` and the least ``(p, r1, r2)`` achieving it."""
        best, key = 0, None
        for r2 in self.by_first[r1[0]]:
            if r2 == r1:
                continue
            k, _ = _common(r1, r2)
            if k > best:
                best, key = k, (r2[:k], r1, r2)
            elif k == best and _better((r2[:k], r1, r2), key):
                key = (r2[:k], r1, r2)
        if best <= 1:
            for r2 in self.by_factor[r1[0].factor]:
                if r2[0] != r1[0]:
                    cand = (r2[:1], r1, r2)
                    if best == 0:
                        best, key = 1, cand
                    elif _better(cand, key):
                        key = cand
        return best, key


def _piece_from_key(family, key) -> Piece | None:
    if key is None:
        return None
    p, r1, r2 = key
    split = p[-1] != r1[len(p) - 1] if len(p) <= len(r1) else False
    return Piece(Word(family, p), Word(family, r1), Word(family, r2), split)


class _ClassAcc:
    """Per-class running maximum of piece/relator ratios."""

    def __init__(self, cls: RelatorClass):
        self.cls = cls
        self.ratio = Fraction(-1)
        self.piece_len = 0
        self.rel_len = cls.length
        self.key = None

    def offer(self, piece_len: int, rel_len: int, key):
        if key is None:
            return
        ratio = Fraction(piece_len, rel_len)
        if ratio > self.ratio or (ratio == self.ratio and _better(key, self.key)):
            self.ratio, self.piece_len, self.rel_len, self.key = ratio, piece_len, rel_len, key

    def report(self, family) -> ClassReport:
        if self.key is None:
            return ClassReport(self.cls.label, self.cls.length, 0, self.cls.length, Fraction(0), None)
        return ClassReport(self.cls.label, self.cls.length, self.piece_len, self.rel_len,
                           self.ratio, _piece_from_key(family, self.key))


def _short(sset: SymmetrizedSet, params: VerificationParams) -> tuple[str, ...]:
    return tuple(c.label for c in sset.classes if c.length < params.min_relator_length)


# ------------------------------------------------------------ materialized route

def _verify_materialized(sset: SymmetrizedSet, params: VerificationParams) -> PieceReport:
    fam = sset.family
    members = [w.letters for w in sset.materialize()]
    groups = _Members(members)
    accs = [_ClassAcc(c) for c in sset.classes]
    violations = []
    for r1 in members:
        ci = sset.class_index(Word(fam, r1))
        best, key = groups.best(r1)
        accs[ci].offer(best, len(r1), key)
        if key is not None and params.violates(best, len(r1)):
            violations.append(Violation(sset.classes[ci].label, r1, best, len(r1)))
    return _assemble(sset, params, accs, violations)


def _assemble(sset, params, accs, violations) -> PieceReport:
    short = _short(sset, params)
    classes = tuple(a.report(sset.family) for a in accs)
    violations = tuple(sorted(violations))
    return PieceReport(not short and not violations, params.lambda_, params.min_relator_length,
                       classes, short, violations)


# ------------------------------------------------------------ scan route

class _Scan:
    """Suffix-array scan over the doubled class words."""

    MARGIN = 3

    def __init__(self, sset: SymmetrizedSet):
        self.sset = sset
        classes = sset.classes
        k = len(classes)
        alphabet = sorted({x for c in classes for x in c.letters})
        code = {x: i + k for i, x in enumerate(alphabet)}
        self.factor_of = [-1 - i for i in range(k)] + [x.factor for x in alphabet]
        text: list[int] = []
        self.base = []
        for ci, c in enumerate(classes):
            self.base.append(len(text))
            codes = [code[x] for x in c.letters]
            text += codes + codes + [ci]      # sentinel codes are below all letters
        self.text = text
        # queries: the tail of the member starting at (class, j)
        self.q_class, self.q_pos, self.q_prev, self.q_cap = [], [], [], []
        q_at = {}
        for ci, c in enumerate(classes):
            if c.length < 2:
                continue
            for j in sset.positions(c):
                q_at[self.base[ci] + j + 1] = len(self.q_class)
                self.q_class.append(ci)
                self.q_pos.append(j)
                self.q_prev.append(c.letters[j].factor)
                self.q_cap.append(c.length - 1)
        sa = suffix_array(text)
        self.lcp = lcp_array(text, sa)
        self.sa = [int(x) for x in sa]
        self.q_of_rank = [q_at.get(p, -1) for p in self.sa]
        self.rank_of_q = [0] * len(self.q_class)
        for r, q in enumerate(self.q_of_rank):
            if q >= 0:
                self.rank_of_q[q] = r

    def walk(self, s: int) -> tuple[int, list[tuple[int, int]], bool]:
        """Best tail-derived piece for query ``s``: (value, [(t, value)], anomalous)."""
        text, fac, lcp = self.text, self.factor_of, self.lcp
        q_of_rank, q_prev, q_cap = self.q_of_rank, self.q_prev, self.q_cap
        prev, cap_s = q_prev[s], q_cap[s]
        ps = self.sa[self.rank_of_q[s]]
        best, ties, anomalous = 0, [], False
        n = len(self.sa)
        for step in (1, -1):
            r = self.rank_of_q[s]
            runmin = 1 << 60
            while True:
                if step == 1:
                    r += 1
                    if r >= n:
                        break
                    runmin = min(runmin, lcp[r])
                else:
                    if r == 0:
                        break
                    runmin = min(runmin, lcp[r])
                    r -= 1
                if runmin + self.MARGIN < best:
                    break
                t = q_of_rank[r]
                if t < 0 or q_prev[t] != prev:
                    continue
                cap = min(cap_s, q_cap[t])
                if runmin >= cap:
                    anomalous = True
                    continue
                pt = self.sa[r]
                v = 1 + runmin + (fac[text[ps + runmin]] == fac[text[pt + runmin]])
                if v > best:
                    best, ties = v, [t]
                elif v == best:
                    ties.append(t)
        return best, ties, anomalous


def _verify_scan(sset: SymmetrizedSet, params: VerificationParams, early_exit: bool) -> PieceReport:
    fam = sset.family
    short = _short(sset, params)
    if early_exit and short:
        return PieceReport(False, params.lambda_, params.min_relator_length, (), short, (), complete=False)
    scan = _Scan(sset)
    per_class: dict[int, list[tuple[int, int, list[int]]]] = defaultdict(list)
    fallback = {ci for ci, c in enumerate(sset.classes) if c.length < 2}
    for s in range(len(scan.q_class)):
        best, ties, anomalous = scan.walk(s)
        ci = scan.q_class[s]
        if anomalous:
            fallback.add(ci)
        per_class[ci].append((scan.q_pos[s], best, ties))
    for ci, rows in per_class.items():
        if max(b for _, b, _ in rows) <= 1:
            fallback.add(ci)
    if early_exit:
        for ci, rows in per_class.items():
            if ci in fallback:
                continue
            cls = sset.classes[ci]
            for j, best, _ in rows:
                if params.violates(best, cls.length):
                    return PieceReport(False, params.lambda_, params.min_relator_length, (), short,
                                       (), complete=False)

    accs = [_ClassAcc(c) for c in sset.classes]
    violations = []
    members = None
    for ci, cls in enumerate(sset.classes):
        acc = accs[ci]
        if ci in fallback:
            if members is None:
                members = _Members(w.letters for w in sset.members())
            for r1 in sset.class_members(cls):
                best, key = members.best(r1.letters)
                acc.offer(best, len(r1), key)
                if key is not None and params.violates(best, len(r1)):
                    violations.append(Violation(cls.label, r1.letters, best, len(r1)))
            continue
        rows = per_class[ci]
        top = max(b for _, b, _ in rows)
        cands = []
        for j, best, ties in rows:
            if best != top:
                continue
            z = cls.letters[j]
            for t in ties:
                tc = sset.classes[scan.q_class[t]]
                jt = scan.q_pos[t]
                tail = tc.letters[jt + 1:] + tc.letters[:jt]
                cands.append(((z,) + tail[:top - 1], j, t))
        pmin = min(c[0] for c in cands)
        key = None
        for p, j, t in cands:
            if p != pmin:
                continue
            r1 = member_letters(fam, cls, j, cls.letters[j].elem)
            tc = sset.classes[scan.q_class[t]]
            r2 = member_letters(fam, tc, scan.q_pos[t], cls.letters[j].elem)
            if _better((p, r1, r2), key):
                key = (p, r1, r2)
        acc.offer(top, cls.length, key)
        for j, best, _ in rows:
            x = cls.letters[j]
            for z in sset.first_letters(cls, j):
                rel_len = cls.length if z == x.elem else cls.length + 1
                if params.violates(best, rel_len):
                    violations.append(Violation(cls.label, member_letters(fam, cls, j, z), best, rel_len))
    return _assemble(sset, params, accs, violations)


def verify_metric(sset: SymmetrizedSet, params: VerificationParams | None = None,
                  method: str = "scan", early_exit: bool = False) -> PieceReport:
    """Check C'(lambda): every relator is long enough and every piece is short.

    ``early_exit`` (scan only) stops at the first violation; the returned
    report then has ``complete=False`` and carries only the verdict.
    """
    params = params or VerificationParams()
    if not sset.classes:
        raise ValueError("empty symmetrized set")
    if method == "scan":
        return _verify_scan(sset, params, early_exit)
    if method == "materialized":
        return _verify_materialized(sset, params)
    raise ValueError(f"unknown method {method!r}")


_LABEL = re.compile(r"(?P<tag>[A-Za-z_]+)\[(?P<idx>[^\]]*)\]$")


def parse_label(label: str) -> tuple[str, tuple[int, ...]]:
    m = _LABEL.match(label)
    if not m:
        raise ValueError(f"label {label!r} carries no construction indices")
    idx = tuple(int(x) for x in re.split(r"[,;]", m.group("idx")) if x.strip())
    return m.group("tag"), idx


def ratio_scan(sset: SymmetrizedSet, tag: str, indices: Iterable[int],
               params: VerificationParams | None = None, report: PieceReport | None = None) -> list[Fraction]:
    """Worst piece ratio of the seed ``tag[i]`` for each ``i`` in ``indices``."""
    report = report or verify_metric(sset, params)
    table = report.seed_table(sset)
    by_index: dict[int, Fraction] = {}
    for label, rep in table.items():
        try:
            t, idx = parse_label(label)
        except ValueError:
            continue
        if t == tag and idx:
            by_index[idx[0]] = max(by_index.get(idx[0], Fraction(0)), rep.ratio)
    out = []
    for i in indices:
        if i not in by_index:
            raise KeyError(f"no relator {tag}[{i}] in the presentation")
        out.append(by_index[i])
    if not out:
        raise KeyError(f"selector {tag} matches nothing")
    return out

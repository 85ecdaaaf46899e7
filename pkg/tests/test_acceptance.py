"""One test per acceptance criterion; each records a PASS/FAIL line."""

import random
import time
from fractions import Fraction

import pytest

from smallcancel.cancellation import ratio_scan, verify_metric
from smallcancel.construct import (
    ConstructionParams,
    build_theorem_a,
    find_min_n,
    member,
    predicted_length,
    predicted_lengths,
)
from smallcancel.dehn import DehnSolver, check_factor_embedding, check_generation, oracle_is_trivial, replay
from smallcancel.freeprod import FactorFamily, Letter, Word, is_weakly_cyclically_reduced
from smallcancel.groups import alternating_group, cyclic_group
from smallcancel.symmetrize import SymmetrizedSet


@pytest.fixture(scope="module")
def four_members():
    return (member(cyclic_group(2)), member(cyclic_group(3)), member(cyclic_group(5)),
            member(alternating_group(4)))


def letters_of(fam):
    return [Letter(f, e) for f, (_, g) in enumerate(fam.factors) for e in g.nonidentity()]


# 1 ----------------------------------------------------------------------------

def test_criterion_1_length_formulas(four_members, acceptance):
    t0 = time.perf_counter()
    mismatches, checked, u0 = [], 0, None
    for n in (7, 23):
        pres = build_theorem_a(ConstructionParams(n, four_members))
        for row in predicted_lengths(pres):
            checked += 1
            if not row.ok:
                mismatches.append((n, row))
        if n == 23:
            u0 = len(pres.relator("u[0]").word)
    dt = time.perf_counter() - t0
    ok = not mismatches and u0 == 1655 and dt < 10
    acceptance(1, ok, f"{checked} relator lengths exact, {len(mismatches)} mismatches, "
                      f"|u_0| = {u0} at n = 23 (want 1655), {dt:.1f} s (limit 10 s)")
    assert ok


# 2 ----------------------------------------------------------------------------

def test_criterion_2_metric_verification(pair_members, acceptance):
    t0 = time.perf_counter()
    p23 = build_theorem_a(ConstructionParams(23, pair_members))
    rep = verify_metric(p23.symmetrized)
    u0 = ratio_scan(p23.symmetrized, "u", [0], report=rep)[0]
    p19 = build_theorem_a(ConstructionParams(19, pair_members, force=True))
    rep19 = verify_metric(p19.symmetrized)
    w = rep19.worst
    dt = time.perf_counter() - t0
    ok = (rep.passed and u0 == Fraction(186, 1655) and not rep19.passed
          and w.piece_length == 4 * 19 + 2 and w.label.startswith("w_a[") and dt < 300)
    acceptance(2, ok, f"n=23 passed={rep.passed}, worst u_0 ratio {u0} (want 186/1655 exact); "
                      f"n=19 passed={rep19.passed}, witness {w.piece_length} letters in {w.label} "
                      f"(want 78 in w_a); {dt:.1f} s (limit 300 s)")
    assert ok


# 3 ----------------------------------------------------------------------------

def test_criterion_3_min_n(pair_members, acceptance):
    t0 = time.perf_counter()
    free = find_min_n(pair_members, bound=64)
    coprime = find_min_n(pair_members, coprime6=True, bound=64)
    dt = time.perf_counter() - t0
    ok = free == 22 and coprime == 23 and dt < 1800
    acceptance(3, ok, f"min n = {free} unconstrained (want 22), {coprime} coprime to 6 (want 23), "
                      f"{dt:.1f} s (limit 1800 s)")
    assert ok


# 4 ----------------------------------------------------------------------------

def test_criterion_4_monotone_u_ratios(four_members, acceptance):
    pres = build_theorem_a(ConstructionParams(23, four_members))
    ratios = ratio_scan(pres.symmetrized, "u", [0, 1, 2, 3])
    ok = all(a > b for a, b in zip(ratios, ratios[1:]))
    acceptance(4, ok, "u ratios at n = 23: " + " > ".join(str(r) for r in ratios) + " (strict, exact)")
    assert ok


# 5 ----------------------------------------------------------------------------

def _soundness_suite(pres, seed=5):
    """Oracle agreement on 1000 random words, seeds and 100 conjugates; returns counts."""
    solver = DehnSolver(pres, unchecked=True)
    fam = pres.family
    rnd = random.Random(seed)
    letters = letters_of(fam)
    longest = max(len(r.word) for r in pres.relators)
    disagreements = 0
    for _ in range(1000):
        w = fam.word([rnd.choice(letters) for _ in range(rnd.randint(0, 10))])
        if solver.is_trivial(w) != bool(oracle_is_trivial(w, pres, max_len=2 * longest)):
            disagreements += 1
    seeds_dead = sum(not solver.reduce(r.word)[0] for r in pres.relators)
    conj_dead = 0
    for _ in range(100):
        g = fam.word([rnd.choice(letters) for _ in range(rnd.randint(0, 4))])
        r = rnd.choice(pres.relators).word
        conj_dead += not solver.reduce(g * r * g.inverse())[0]
    return disagreements, seeds_dead, conj_dead


def test_criterion_5_word_problem_triangle_7(tri7, acceptance):
    gate = verify_metric(tri7.symmetrized)
    dis, seeds, conj = _soundness_suite(tri7)
    ok = gate.passed and dis == 0 and seeds == len(tri7.relators) and conj == 100
    w = gate.worst
    acceptance(5, ok, f"(ab)^7 metric gate passed={gate.passed} (worst piece {w.piece_length}/"
                      f"{w.relator_length} = {gate.worst_ratio} against 1/6); with the gate bypassed: "
                      f"{dis} oracle disagreements in 1000, seeds dead {seeds}/{len(tri7.relators)}, "
                      f"conjugates dead {conj}/100")
    assert ok


def test_criterion_5_supplement_triangle_10(tri10, acceptance):
    gate = verify_metric(tri10.symmetrized)
    dis, seeds, conj = _soundness_suite(tri10)
    ok = gate.passed and dis == 0 and seeds == len(tri10.relators) and conj == 100
    acceptance("5 (supplement, (ab)^10)", ok,
               f"gate passed={gate.passed} ({gate.worst_ratio}), {dis} oracle disagreements in 1000, "
               f"seeds dead {seeds}/{len(tri10.relators)}, conjugates dead {conj}/100")
    assert ok


# 6 ----------------------------------------------------------------------------

def test_criterion_6_factor_embedding(pair23, acceptance):
    t0 = time.perf_counter()
    solver = DehnSolver(pair23)
    fam = pair23.family
    singles = [Word(fam, (x,)) for x in letters_of(fam)]
    survivors = 0
    for w in singles:
        final, _ = solver.reduce(w)
        survivors += final == w and bool(final)
    rep = check_factor_embedding(pair23, solver)
    dt = time.perf_counter() - t0
    ok = survivors == len(singles) == 1 + 2 + 59 + 59 and rep.passed and dt < 600
    acceptance(6, ok, f"{survivors}/{len(singles)} nonidentity letters Dehn-irreducible (want 121), "
                      f"{rep.checked} letter and quotient checks with {len(rep.failures)} failures, "
                      f"{dt:.1f} s (limit 600 s)")
    assert ok


# 7 ----------------------------------------------------------------------------

def test_criterion_7_generation(pair23, acceptance):
    solver = DehnSolver(pair23)
    ab = check_generation(pair23, ["A", "B"], solver)
    ss = check_generation(pair23, ["S0", "S1"], solver)
    want_ab = {"S0.[(12345)]", "S0.[(12)(34)]", "S1.[(12345)]", "S1.[(12)(34)]"}
    ok = ab.passed and set(ab.expressions) == want_ab and ss.passed and set(ss.expressions) == {"A.a", "B.b"}
    acceptance(7, ok, f"targets {{A,B}}: {sorted(ab.via.items())}; targets {{S0,S1}}: "
                      f"{sorted(ss.via.items())}; failures {ab.failures + ss.failures}")
    assert ok


# 8 ----------------------------------------------------------------------------

def test_criterion_8_representation_equivalence(tri7, pair5, acceptance):
    results = []
    for name, pres in (("(ab)^7", tri7), ("n=5 build", pair5)):
        s = pres.symmetrized
        assert s.total_letters <= 2000
        same = verify_metric(s, method="scan") == verify_metric(s, method="materialized")
        results.append((name, s.total_letters, same))
    ok = all(r[2] for r in results)
    acceptance(8, ok, "; ".join(f"{n}: {L} closure letters, reports equal={e}" for n, L, e in results))
    assert ok


# 9 ----------------------------------------------------------------------------

def test_criterion_9_invariants(tri7, tri10, pair5, pair23, acceptance):
    rnd = random.Random(9)
    fam = FactorFamily.of(A=cyclic_group(2, "a"), B=cyclic_group(3, "b"), S=alternating_group(4))
    letters = letters_of(fam)
    algebra_failures = 0
    for _ in range(10_000):
        u, v, w = (fam.word([rnd.choice(letters) for _ in range(rnd.randint(0, 12))]) for _ in range(3))
        ok = ((u * v) * w == u * (v * w)
              and u * u.inverse() == fam.identity() and u.inverse() * u == fam.identity()
              and len(u * v) <= len(u) + len(v))
        algebra_failures += not ok

    closure_failures = 0
    for pres in (tri7, tri10, pair5):
        s = pres.symmetrized
        members = set(s.members())
        again = set(SymmetrizedSet(pres.family, sorted(members)).members())
        closure_failures += again != members
        for m in members:
            if m.inverse() not in members:
                closure_failures += 1
            first, rest = m.letters[0], m.letters[1:]
            if rest and rest[-1].factor == first.factor:
                rot = pres.family.word(rest + (first,))
            else:
                rot = Word(pres.family, rest + (first,))
            if rot and is_weakly_cyclically_reduced(rot) and rot not in members:
                closure_failures += 1
    closure_failures += set(tri7.symmetrized.members()) != tri7.symmetrized.materialize()

    replay_failures, traces = 0, 0
    for pres, unchecked in ((tri10, False), (pair23, False)):
        solver = DehnSolver(pres, unchecked)
        pl = letters_of(pres.family)
        for _ in range(200):
            g = pres.family.word([rnd.choice(pl) for _ in range(rnd.randint(0, 4))])
            noise = pres.family.word([rnd.choice(pl) for _ in range(rnd.randint(0, 6))])
            r = rnd.choice(pres.relators).word
            final, trace = solver.reduce(g * r * g.inverse() * noise)
            traces += 1
            replay_failures += replay(trace) != final
    ok = algebra_failures == 0 and closure_failures == 0 and replay_failures == 0
    acceptance(9, ok, f"10000 word-algebra checks, {algebra_failures} failures; closure idempotence and "
                      f"inversion/rotation closure over 3 closures, {closure_failures} failures; "
                      f"{traces} trace replays, {replay_failures} mismatches")
    assert ok

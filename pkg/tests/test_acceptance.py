"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines and
timings.  Seeds are pinned, so every statistical check below is a
deterministic replay; the runtime limits are the stated budgets for a
desk-class machine.
"""

import random
import time
from collections import Counter
from fractions import Fraction

from scipy.stats import chi2

from lawless import montecarlo as mc
from lawless import perm, separation, thompson, trees, words


def _report(num: int, ok: bool, elapsed: float, detail: str):
    status = "PASS" if ok else "FAIL"
    print(f"criterion {num}: {status} ({elapsed:.1f}s) - {detail}")
    assert ok, f"criterion {num}: {detail}"


def _within(elapsed: float, limit: float, num: int):
    assert elapsed < limit, f"criterion {num} exceeded its {limit:.0f}s budget: {elapsed:.1f}s"


def test_criterion_1_survival_bound_sweep():
    # A_k for k in 8..16, every reduced word of length <= 3 in rank 2,
    # 10^4 samples per pair, 99% Hoeffding: no interval falls below
    # (1 - n/(k-n))^n
    started = time.perf_counter()
    wordlist = words.enumerate_reduced(2, 3)
    assert len(wordlist) == 52
    failures = []
    rows = 0
    for k in range(8, 17):
        sampler = mc.ChainSampler(perm.build_bsgs(perm.standard_group("alternating", k)))
        for w in wordlist:
            n = len(w.letters)
            est = mc.estimate_nontrivial_prob(sampler, w, 10_000, 0.99, seed=mc.row_seed(7, 1000 * k + rows))
            verdict = mc.check_bound(est, mc.finperm_bound(n, k - n)).verdict
            rows += 1
            if verdict == "fail":
                failures.append((k, str(w)))
    elapsed = time.perf_counter() - started
    _within(elapsed, 60, 1)
    _report(1, not failures, elapsed, f"no fail verdict across {rows} (degree, word) pairs{failures or ''}")


def test_criterion_2_exact_oracle_agreement():
    started = time.perf_counter()
    w = words.parse_word("abAB")
    exact = mc.exact_prob_small(perm.standard_group("alternating", 4), w)
    sampler = mc.ChainSampler(perm.build_bsgs(perm.standard_group("alternating", 4)))
    est = mc.estimate_nontrivial_prob(sampler, w, 100_000, 0.99, seed=42)
    gap = abs(float(est.point) - float(exact))
    elapsed = time.perf_counter() - started
    _within(elapsed, 5, 2)
    _report(2, exact == Fraction(2, 3) and gap < 0.02, elapsed, f"exact=2/3, estimate off by {gap:.4f}")


def test_criterion_3_witness_batch_a14():
    # every reduced word of length <= 5 in rank 2 gets an independently
    # verified certificate over the natural action on 14 points
    started = time.perf_counter()
    wordlist = words.enumerate_reduced(2, 5)
    assert len(wordlist) == 484
    action = separation.perm_action(perm.build_bsgs(perm.standard_group("alternating", 14)), "alt:14")
    bad = []
    for w in wordlist:
        cert = separation.certify_not_law(w, action, 1)
        if separation.check_certificate(cert, action) is not None:
            bad.append(str(w))
    elapsed = time.perf_counter() - started
    _within(elapsed, 60, 3)
    _report(3, not bad, elapsed, f"484 certificates verified{bad or ''}")


def test_criterion_4_thompson_witness_batch():
    started = time.perf_counter()
    wordlist = words.enumerate_reduced(2, 3)
    action = separation.thompson_action()
    half = thompson.parse_dyadic("1/2^1")
    bad = []
    for w in wordlist:
        cert = separation.certify_not_law(w, action, half)
        if separation.check_certificate(cert, action) is not None:
            bad.append(str(w))
            continue
        value = words.evaluate(w, cert.trace.tuple_, action.multiply, action.invert, action.identity())
        if value.is_identity():  # breakpoint comparison against the identity map
            bad.append(str(w))
    elapsed = time.perf_counter() - started
    _within(elapsed, 30, 4)
    _report(4, not bad, elapsed, f"52 exact certificates, all maps non-identity{bad or ''}")


def test_criterion_5_rigid_stabilizer_witness():
    started = time.perf_counter()
    gens = trees.grigorchuk_generators()
    found = trees.rist_search(gens, "1", 1, 10)
    ok = "d" in found
    tw = trees.TreeWord(gens)
    config = tw.config([("d", 1)])
    moved_inside = 0
    for s in trees.strings_at_depth(2, 10):
        image = tw.act(config, s)
        if s.startswith("0"):
            ok = ok and image == s
        elif image != s:
            moved_inside += 1
    ok = ok and moved_inside > 0
    elapsed = time.perf_counter() - started
    _within(elapsed, 10, 5)
    _report(5, ok, elapsed, f"rist_search found {found}; d fixes the 0-subtree, moves {moved_inside} strings under 1")


def test_criterion_6_freeness_decay():
    started = time.perf_counter()
    table = mc.freeness_experiment(2, [3, 6, 9, 12], n=2, max_len=6, samples=200, seed=11, confidence=0.95)
    ests = [r.estimate for r in table.rows]
    fractions = [float(e.point) for e in ests]
    # consecutive depths: no statistically significant increase at 95%
    monotone = all(mc.trend_pvalue(ests[i], ests[i + 1]) > 0.05 for i in range(len(ests) - 1))
    strict = fractions[-1] < fractions[0] and mc.trend_pvalue(ests[-1], ests[0]) <= 0.05
    elapsed = time.perf_counter() - started
    _within(elapsed, 120, 6)
    _report(6, monotone and strict, elapsed, f"fractions by depth {dict(zip([3, 6, 9, 12], fractions))}")


def test_criterion_7_alternating_trend():
    started = time.perf_counter()
    w = words.parse_word("abAB")
    table = mc.alter_sweep(w, [8, 12, 16, 20, 24], 10_000, seed=7, confidence=0.95)
    all_clear = all(r.verdict == "pass" for r in table.rows)
    est8 = table.rows[0].estimate
    est24 = table.rows[-1].estimate
    exceeds = float(est24.point) > float(est8.point)
    pvalue = mc.trend_pvalue(est8, est24)
    elapsed = time.perf_counter() - started
    _within(elapsed, 60, 7)
    _report(
        7,
        all_clear and exceeds and pvalue <= 0.05,
        elapsed,
        f"all intervals clear their bounds; estimate rose {float(est8.point):.4f} -> "
        f"{float(est24.point):.4f} (one-sided p={pvalue:.4f})",
    )


def test_criterion_8_infrastructure():
    started = time.perf_counter()
    # (a) chain order vs brute-force closure on 50 random subgroups of S_7
    rng = random.Random(2024)
    S7 = perm.build_bsgs(perm.standard_group("symmetric", 7))
    closure_ok = True
    for _ in range(50):
        gens = [perm.uniform_element(S7, rng) for _ in range(rng.randint(1, 3))]
        seen = {perm.identity_perm(7)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for f in frontier:
                for g in gens:
                    h = perm.compose(f, g)
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
            frontier = nxt
        chain = perm.build_bsgs(perm.group(gens, degree=7))
        closure_ok = closure_ok and perm.group_order(chain) == len(seen)

    # (b) chi-square for uniform_element on A_4 at 10^5 draws, 99% level
    chain = perm.build_bsgs(perm.standard_group("alternating", 4))
    draw_rng = random.Random(20240404)
    draws = 100_000
    counts = Counter(perm.uniform_element(chain, draw_rng) for _ in range(draws))
    expected = draws / 12
    stat = sum((c - expected) ** 2 / expected for c in counts.values())
    chi_ok = len(counts) == 12 and stat < chi2.ppf(0.99, 11)

    # (c) byte-identical estimator output across 1 and 8 workers
    w = words.parse_word("abAB")
    sweep1 = mc.alter_sweep(w, [8, 10], 4000, seed=5, workers=1)
    sweep8 = mc.alter_sweep(w, [8, 10], 4000, seed=5, workers=8)
    free1 = mc.freeness_experiment(2, [3, 5], 2, 4, 80, seed=5, workers=1)
    free8 = mc.freeness_experiment(2, [3, 5], 2, 4, 80, seed=5, workers=8)
    worker_ok = sweep1.to_csv() == sweep8.to_csv() and free1.to_csv() == free8.to_csv()

    elapsed = time.perf_counter() - started
    _report(
        8,
        closure_ok and chi_ok and worker_ok,
        elapsed,
        f"50 closures match; chi-square {stat:.1f} < {chi2.ppf(0.99, 11):.1f}; workers byte-identical",
    )

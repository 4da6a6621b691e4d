import random
from collections import Counter
from fractions import Fraction

import pytest
from scipy.stats import chi2

from lawless import montecarlo as mc
from lawless import perm, trees, words
from lawless.errors import BudgetError, EmptyWordError, RangeError


def w(text):
    return words.parse_word(text)


def alt_sampler(k):
    return mc.ChainSampler(perm.build_bsgs(perm.standard_group("alternating", k)))


# ---------------------------------------------------------------- bounds


def test_finperm_bound_values():
    assert mc.finperm_bound(2, 8) == Fraction(9, 16)
    assert mc.finperm_bound(5, 5) == 0
    assert mc.finperm_bound(4, 16) == Fraction(81, 256)
    assert mc.finperm_bound(6, 2) == 0  # clamp below zero
    with pytest.raises(RangeError):
        mc.finperm_bound(0, 4)


def test_check_bound_verdicts():
    def est(p, samples=10000):
        return mc.Estimate(int(p * samples), samples, 0.99, seed=0)

    bound = Fraction(9, 16)
    assert mc.check_bound(est(0.70), bound).verdict == "pass"
    assert mc.check_bound(est(0.30), bound).verdict == "fail"
    assert mc.check_bound(est(0.56), bound).verdict == "inconclusive"


def test_estimate_interval_ordering():
    e = mc.Estimate(77, 100, 0.95, seed=1)
    assert 0.0 <= e.ci_low <= float(e.point) <= e.ci_high <= 1.0


# ---------------------------------------------------------------- exact oracle


def test_exact_prob_a4_commutator_two_routes():
    word = w("abAB")
    exact = mc.exact_prob_small(perm.standard_group("alternating", 4), word)
    assert exact == Fraction(2, 3)
    # independent route: commuting pairs = (#conjugacy classes) * |G|
    chain = perm.build_bsgs(perm.standard_group("alternating", 4))
    els = perm.elements(chain)
    classes = set()
    for g in els:
        cls = frozenset(perm.compose(perm.compose(perm.inverse(h), g), h) for h in els)
        classes.add(cls)
    commuting = len(classes) * len(els)
    assert 1 - Fraction(commuting, len(els) ** 2) == exact


def test_exact_prob_rejects_empty_word():
    with pytest.raises(EmptyWordError):
        mc.exact_prob_small(perm.standard_group("alternating", 4), w("aA"))


def test_exact_prob_trivial_group():
    trivial = perm.group([perm.identity_perm(3)])
    assert mc.exact_prob_small(trivial, w("a")) == 0


def test_exact_prob_budget():
    with pytest.raises(BudgetError):
        mc.exact_prob_small(perm.standard_group("alternating", 6), w("abAB"), budget=1000)


# ---------------------------------------------------------------- estimation


def test_estimate_matches_exact_on_a4():
    word = w("abAB")
    est = mc.estimate_nontrivial_prob(alt_sampler(4), word, 100000, 0.99, seed=42)
    assert abs(float(est.point) - 2 / 3) < 0.02


def test_estimate_trivial_group_is_zero():
    sampler = mc.ChainSampler(perm.build_bsgs(perm.group([perm.identity_perm(3)])))
    assert mc.estimate_nontrivial_prob(sampler, w("a"), 500, seed=1).successes == 0


def test_estimate_c2_square_is_zero():
    sampler = mc.ChainSampler(perm.build_bsgs(perm.group([perm.from_cycles([(1, 2)], 2)])))
    assert mc.estimate_nontrivial_prob(sampler, w("aa"), 2000, seed=1).successes == 0


def test_estimate_rejects_empty_word():
    with pytest.raises(EmptyWordError):
        mc.estimate_nontrivial_prob(alt_sampler(4), w(""), 10, seed=0)


def test_generic_sampler_path_matches_oracle():
    # HaarSampler has no batched path, exercising the substream loop
    sampler = mc.HaarSampler(2, 1)
    est = mc.estimate_nontrivial_prob(sampler, w("a"), 4000, seed=9)
    assert abs(float(est.point) - 0.5) < 0.03


def test_oracle_agreement_random_small_groups():
    rng = random.Random(55)
    S5 = perm.build_bsgs(perm.standard_group("symmetric", 5))
    radius99 = mc.hoeffding_radius(4000, 0.999)
    for _ in range(6):
        gens = [perm.uniform_element(S5, rng) for _ in range(2)]
        G = perm.group(gens, degree=5)
        if perm.group_order(perm.build_bsgs(G)) ** 2 > 10**5:
            continue
        for text in ["ab", "aab", "aBa"]:
            word = w(text)
            exact = mc.exact_prob_small(G, word, budget=10**7)
            est = mc.estimate_nontrivial_prob(mc.ChainSampler(perm.build_bsgs(G)), word, 4000, seed=rng.randrange(2**32))
            assert abs(float(est.point) - float(exact)) <= radius99


# ---------------------------------------------------------------- substreams


def test_substream_deterministic():
    a = mc.substream(123, 5)
    b = mc.substream(123, 5)
    assert [a.random() for _ in range(20)] == [b.random() for _ in range(20)]
    c = mc.substream(123, 6)
    assert [mc.substream(123, 5).random() for _ in range(5)] != [c.random() for _ in range(5)]


def test_substream_pairwise_independence_chi_square():
    # bin paired draws from two substreams into a 4x4 grid
    counts = Counter()
    n = 20000
    for i in range(n):
        u = mc.substream(7, i).random()
        v = mc.substream(1009, i).random()
        counts[(int(u * 4), int(v * 4))] += 1
    expected = n / 16
    stat = sum((counts[(r, c)] - expected) ** 2 / expected for r in range(4) for c in range(4))
    assert stat < chi2.ppf(0.99, 15)


def test_worker_count_invariance():
    word = w("abAB")
    sampler = alt_sampler(6)
    results = [
        mc.estimate_nontrivial_prob(sampler, word, 5000, 0.99, seed=3, workers=k) for k in (1, 2, 8)
    ]
    assert results[0] == results[1] == results[2]


# ---------------------------------------------------------------- sweeps


def test_alter_sweep_rows_and_bounds():
    table = mc.alter_sweep(w("abAB"), [6, 12, 20], 400, seed=5)
    by_degree = {r.params["degree"]: r for r in table.rows}
    assert by_degree[6].bound == 0  # clamped, still a valid row
    assert by_degree[12].bound == Fraction(1, 16)
    assert by_degree[20].bound == Fraction(81, 256)
    assert not table.has_failure()


def test_alter_sweep_skips_tiny_degrees():
    table = mc.alter_sweep(w("abAB"), [5, 8], 100, seed=5)
    assert table.rows[0].verdict.startswith("skipped")
    assert table.rows[0].estimate is None
    assert table.rows[1].verdict == "pass"


def test_alter_sweep_csv_deterministic_and_schema():
    t1 = mc.alter_sweep(w("ab"), [6, 8], 300, seed=11, workers=1)
    t2 = mc.alter_sweep(w("ab"), [6, 8], 300, seed=11, workers=4)
    assert t1.to_csv() == t2.to_csv()
    header = t1.to_csv().splitlines()[0].split(",")
    assert header == [
        "param_degree",
        "samples",
        "successes",
        "point",
        "ci_low",
        "ci_high",
        "bound",
        "verdict",
        "seed",
    ]


def test_trend_pvalue_direction():
    low = mc.Estimate(9992, 10000, 0.99, 0)
    high = mc.Estimate(10000, 10000, 0.99, 0)
    assert mc.trend_pvalue(low, high) < 0.05
    assert mc.trend_pvalue(high, low) > 0.5
    same = mc.Estimate(9996, 10000, 0.99, 0)
    assert mc.trend_pvalue(same, same) > 0.05


# ---------------------------------------------------------------- freeness


def test_freeness_forced_relation_at_depth_one():
    table = mc.freeness_experiment(2, [1], n=1, max_len=2, samples=300, seed=5)
    assert table.rows[0].estimate.point == 1  # x^2 dies at depth 1


def test_freeness_identity_rate_matches_group_order():
    # n=1, L=1: the tuple admits a relation iff the sample is the identity
    table = mc.freeness_experiment(2, [1, 2], n=1, max_len=1, samples=4000, seed=5)
    d1, d2 = (float(r.estimate.point) for r in table.rows)
    assert abs(d1 - 1 / 2) < 0.03  # level-1 group has order 2
    assert abs(d2 - 1 / 8) < 0.03  # level-2 group has order 8


def test_freeness_haar_leaf_action_matches_portrait_sampler():
    # identical stream, two representations of the same sampled element
    for i in range(10):
        rng1 = mc.substream(99, i)
        rng2 = mc.substream(99, i)
        leaf = mc._haar_leaf_action(2, 4, rng1)
        portrait = trees.haar_sample(2, 4, rng2)
        for idx, s in enumerate(trees.strings_at_depth(2, 4)):
            image = trees.act_on_string(portrait, s)
            assert int(image, 2) == leaf[idx]


def test_freeness_worker_invariance():
    t1 = mc.freeness_experiment(2, [3, 5], 2, 4, 60, seed=8, workers=1)
    t2 = mc.freeness_experiment(2, [3, 5], 2, 4, 60, seed=8, workers=8)
    assert t1.to_csv() == t2.to_csv()


def test_freeness_decay_direction():
    table = mc.freeness_experiment(2, [2, 7], 2, 4, 80, seed=21)
    shallow, deep = (float(r.estimate.point) for r in table.rows)
    assert deep < shallow


# ---------------------------------------------------------------- tables


def test_bound_check_table_example():
    table = mc.bound_check_table("alternating", 12, w("abAB"), 2000, seed=7)
    row = table.rows[0]
    assert row.bound == Fraction(1, 16)
    assert row.verdict == "pass"
    assert row.params["group"] == "alt:12"


def test_table_json_shape():
    table = mc.bound_check_table("alternating", 8, w("ab"), 500, seed=3)
    blob = table.to_json()
    assert blob["name"] == "bound-check"
    assert blob["rows"][0]["estimate"]["samples"] == 500
    assert "wall" not in str(blob)  # no timing in serialized output

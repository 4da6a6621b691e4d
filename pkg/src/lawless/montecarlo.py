"""Probability estimates, bound checks and freeness experiments.

Reproducibility contract
------------------------

Every estimator derives the randomness for sample i from the 64-bit key

    key(seed, i, t) = splitmix64(splitmix64(seed ^ ((i+1)*PHI)) ^ ((t+1)*PSI))

where t enumerates the draws one sample makes and PHI, PSI are the fixed odd
constants below.  Keys depend only on (seed, sample index, draw index), never
on execution order, so results are bit-identical for a fixed seed under any
partition of the sample range across workers.  substream(seed, i) wraps
key(seed, i, 0) as a seeded random.Random for samplers that draw sequentially.

Estimates carry two-sided Hoeffding intervals: radius sqrt(ln(2/d)/(2N)) at
confidence 1-d.  They are distribution-free and easy to recompute by hand,
which is worth more here than their slack.

Tables serialize to CSV and JSON without timestamps, so identical
(config, seed) pairs produce byte-identical files.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import log, sqrt
import random
from typing import Mapping, Sequence

import numpy as np

from . import perm, trees, words
from .errors import BudgetError, EmptyWordError, RangeError
from .words import ReducedWord

_M64 = (1 << 64) - 1
_PHI = 0x9E3779B97F4A7C15
_PSI = 0xD1B54A32D192ED03


def _splitmix64(z: int) -> int:
    z = (z + _PHI) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def _key(seed: int, index: int, tag: int) -> int:
    inner = _splitmix64((seed ^ ((index + 1) * _PHI)) & _M64)
    return _splitmix64((inner ^ ((tag + 1) * _PSI)) & _M64)


def _splitmix64_np(z: np.ndarray) -> np.ndarray:
    z = z + np.uint64(_PHI)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _key_array(seed: int, indices: np.ndarray, tag: int) -> np.ndarray:
    """Vectorized _key over an array of sample indices (uint64 wraparound)."""
    z = np.uint64(seed & _M64) ^ ((indices + np.uint64(1)) * np.uint64(_PHI))
    z = _splitmix64_np(z)
    z = z ^ np.uint64(((tag + 1) * _PSI) & _M64)
    return _splitmix64_np(z)


def substream(seed: int, index: int) -> random.Random:
    """An independent deterministic stream for one sample index."""
    return random.Random(_key(seed, index, 0))


def row_seed(master_seed: int, row_index: int) -> int:
    """Per-row seed, so any table row can be re-run standalone."""
    return _key(master_seed, row_index, 0xA0)


def hoeffding_radius(samples: int, confidence: float) -> float:
    if not 0 < confidence < 1:
        raise RangeError(f"confidence must be in (0,1), got {confidence}")
    return sqrt(log(2.0 / (1.0 - confidence)) / (2.0 * samples))


@dataclass(frozen=True)
class Estimate:
    """A Bernoulli estimate with a two-sided Hoeffding interval."""

    successes: int
    samples: int
    confidence: float
    seed: int

    @property
    def point(self) -> Fraction:
        return Fraction(self.successes, self.samples)

    @property
    def ci_low(self) -> float:
        return max(0.0, float(self.point) - hoeffding_radius(self.samples, self.confidence))

    @property
    def ci_high(self) -> float:
        return min(1.0, float(self.point) + hoeffding_radius(self.samples, self.confidence))


@dataclass(frozen=True)
class BoundCheck:
    estimate: Estimate
    bound: Fraction
    verdict: str  # pass | fail | inconclusive

    @staticmethod
    def of(estimate: Estimate, bound: Fraction) -> "BoundCheck":
        if Fraction(estimate.ci_low) >= bound:
            verdict = "pass"
        elif Fraction(estimate.ci_high) < bound:
            verdict = "fail"
        else:
            verdict = "inconclusive"
        return BoundCheck(estimate, bound, verdict)


def check_bound(estimate: Estimate, bound: Fraction) -> BoundCheck:
    """pass when the interval sits on or above the bound, fail when below it."""
    return BoundCheck.of(estimate, bound)


def trend_pvalue(a: Estimate, b: Estimate) -> float:
    """Exact one-sided p-value against H0 "equal success rates", H1 "b > a".

    Conditions on the total failure count and computes the hypergeometric
    tail probability that the failures split at least this unevenly toward a.
    Small p means b's success probability credibly exceeds a's.
    """
    from math import comb

    fa = a.samples - a.successes
    fb = b.samples - b.successes
    total = fa + fb
    denom = comb(a.samples + b.samples, total)
    tail = sum(
        comb(a.samples, j) * comb(b.samples, total - j)
        for j in range(fa, min(total, a.samples) + 1)
        if total - j <= b.samples
    )
    return tail / denom


def finperm_bound(n: int, a: int) -> Fraction:
    """(1 - n/a)^n, clamped at zero: the survival bound at separation order (n, a)."""
    if n < 1 or a < 1:
        raise RangeError(f"need n >= 1 and a >= 1, got n={n}, a={a}")
    base = max(Fraction(0), 1 - Fraction(n, a))
    return base**n


# --------------------------------------------------------------------------
# samplers


class ChainSampler:
    """Uniform elements of a finite permutation group via transversal picks.

    draw(rng) multiplies one uniformly chosen coset representative per level
    of the stabilizer chain, which is exactly uniform.  The batched path does
    the same multiplication with numpy gathers, taking the pick at level l
    for tuple slot s of sample i from key(seed, i, 64*s + l) modulo the orbit
    size (the modulo bias at orbit sizes < 2^7 is below 2^-57).
    """

    def __init__(self, chain: perm.BSGS):
        self.chain = chain
        self.degree = chain.degree
        self._reps = []
        for lv in chain.levels:
            arr = np.array([lv.transversal[p].images for p in lv.order_list], dtype=np.int64)
            self._reps.append(arr)

    # generic ops
    def identity(self):
        return perm.identity_perm(self.degree)

    def multiply(self, f, g):
        return perm.compose(f, g)

    def invert(self, f):
        return perm.inverse(f)

    def is_identity(self, f) -> bool:
        return f.is_identity()

    def draw(self, rng) -> perm.Permutation:
        return perm.uniform_element(self.chain, rng)

    # vectorized path
    def _sample_batch(self, seed: int, indices: np.ndarray, slot: int) -> np.ndarray:
        m = self.degree
        P = np.broadcast_to(np.arange(m, dtype=np.int64), (len(indices), m)).copy()
        for pos, reps in enumerate(reversed(self._reps)):
            size = reps.shape[0]
            if size == 1:
                continue
            keys = _key_array(seed, indices, 64 * slot + pos)
            picks = (keys % np.uint64(size)).astype(np.int64)
            P = reps[picks[:, None], P]
        return P

    def eval_word_batch(self, w: ReducedWord, seed: int, lo: int, hi: int) -> int:
        """Number of sample indices in [lo, hi) where w evaluates nontrivially."""
        m = self.degree
        indices = np.arange(lo, hi, dtype=np.uint64)
        slots = {}
        for a in w.letters:
            s = a.generator_index - 1
            if s not in slots:
                slots[s] = self._sample_batch(seed, indices, s)
        inverses = {}
        W = None
        for a in w.letters:
            E = slots[a.generator_index - 1]
            if a.sign < 0:
                s = a.generator_index - 1
                if s not in inverses:
                    inv = np.empty_like(E)
                    np.put_along_axis(inv, E, np.broadcast_to(np.arange(m), E.shape), axis=1)
                    inverses[s] = inv
                E = inverses[s]
            W = E.copy() if W is None else np.take_along_axis(E, W, axis=1)
        nontrivial = (W != np.arange(m, dtype=np.int64)).any(axis=1)
        return int(nontrivial.sum())


class HaarSampler:
    """Haar-uniform depth-D portraits, drawn per sample via trees.haar_sample."""

    def __init__(self, arity: int, depth: int, label_group=None):
        self.arity = arity
        self.depth = depth
        self.label_group = label_group

    def identity(self):
        return trees.identity_portrait(self.arity, self.depth)

    def multiply(self, f, g):
        return trees.compose_aut(f, g)

    def invert(self, f):
        return trees.inverse_aut(f)

    def is_identity(self, f) -> bool:
        return f.is_identity()

    def draw(self, rng):
        return trees.haar_sample(self.arity, self.depth, rng, self.label_group)


def _chunks(total: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, total)) if total else 1
    step = (total + workers - 1) // workers
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _run_chunks(fn, chunks, workers: int):
    if workers <= 1 or len(chunks) <= 1:
        return [fn(lo, hi) for lo, hi in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: fn(*c), chunks))


def estimate_nontrivial_prob(
    sampler,
    w: ReducedWord,
    samples: int,
    confidence: float = 0.99,
    seed: int = 0,
    workers: int = 1,
) -> Estimate:
    """Monte Carlo estimate of P(w(g_1,...,g_k) != 1) under uniform tuples.

    Sample i fills its tuple from substream(seed, i) (or from the sampler's
    documented batched scheme when it provides one); the result is identical
    for any worker count.
    """
    if w.is_empty():
        raise EmptyWordError("the empty word evaluates trivially everywhere")
    if samples < 1:
        raise RangeError(f"need samples >= 1, got {samples}")
    chunks = _chunks(samples, workers)

    if hasattr(sampler, "eval_word_batch"):
        counts = _run_chunks(lambda lo, hi: sampler.eval_word_batch(w, seed, lo, hi), chunks, workers)
        return Estimate(sum(counts), samples, confidence, seed)

    identity = sampler.identity()

    def run(lo: int, hi: int) -> int:
        hits = 0
        for i in range(lo, hi):
            rng = substream(seed, i)
            tup = [sampler.draw(rng) for _ in range(w.rank)]
            value = words.evaluate(w, tup, sampler.multiply, sampler.invert, identity)
            if not sampler.is_identity(value):
                hits += 1
        return hits

    counts = _run_chunks(run, chunks, workers)
    return Estimate(sum(counts), samples, confidence, seed)


def exact_prob_small(G: perm.PermGroup, w: ReducedWord, budget: int = 10**7) -> Fraction:
    """Exact fraction of tuples with w != 1, by full enumeration.

    An independent brute-force oracle for the estimators; refuses to run when
    |G|^rank exceeds the budget.
    """
    if w.is_empty():
        raise EmptyWordError("the empty word evaluates trivially everywhere")
    chain = perm.build_bsgs(G)
    order = perm.group_order(chain)
    if order**w.rank > budget:
        raise BudgetError(f"|G|^{w.rank} = {order ** w.rank} exceeds budget {budget}")
    els = perm.elements(chain)
    ident = perm.identity_perm(G.degree)
    hits = 0
    total = 0
    for tup in itertools.product(els, repeat=w.rank):
        total += 1
        if words.evaluate(w, tup, perm.compose, perm.inverse, ident) != ident:
            hits += 1
    return Fraction(hits, total)


# --------------------------------------------------------------------------
# experiment tables


@dataclass
class Row:
    params: dict
    estimate: Estimate | None
    bound: Fraction | None
    verdict: str


@dataclass
class ExperimentTable:
    name: str
    rows: list[Row]
    metadata: dict = field(default_factory=dict)

    def has_failure(self) -> bool:
        return any(r.verdict == "fail" for r in self.rows)

    def to_csv(self) -> str:
        param_keys: list[str] = []
        for r in self.rows:
            for k in r.params:
                if k not in param_keys:
                    param_keys.append(k)
        header = [f"param_{k}" for k in param_keys] + [
            "samples",
            "successes",
            "point",
            "ci_low",
            "ci_high",
            "bound",
            "verdict",
            "seed",
        ]
        lines = [",".join(header)]
        for r in self.rows:
            cells = [str(r.params.get(k, "")) for k in param_keys]
            if r.estimate is None:
                cells += ["0", "0", "", "", ""]
            else:
                e = r.estimate
                cells += [str(e.samples), str(e.successes), repr(float(e.point)), repr(e.ci_low), repr(e.ci_high)]
            cells.append("" if r.bound is None else str(r.bound))
            cells.append(r.verdict)
            cells.append("" if r.estimate is None else str(r.estimate.seed))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "metadata": dict(self.metadata),
            "rows": [
                {
                    "params": dict(r.params),
                    "estimate": None
                    if r.estimate is None
                    else {
                        "samples": r.estimate.samples,
                        "successes": r.estimate.successes,
                        "point": str(r.estimate.point),
                        "ci_low": r.estimate.ci_low,
                        "ci_high": r.estimate.ci_high,
                        "confidence": r.estimate.confidence,
                        "seed": r.estimate.seed,
                    },
                    "bound": None if r.bound is None else str(r.bound),
                    "verdict": r.verdict,
                }
                for r in self.rows
            ],
        }


def alter_sweep(
    w: ReducedWord,
    degrees: Sequence[int],
    samples: int,
    seed: int,
    confidence: float = 0.99,
    workers: int = 1,
) -> ExperimentTable:
    """Estimate P(w != 1) over natural alternating groups of growing degree.

    Each row carries the exact survival bound (1 - n/(k-n))^n from the
    separation order (n, k-n) of the natural action; the bounds climb toward
    one along the sweep.  Rows with k <= n+1 are marked skipped because the
    separation order argument needs n < k-1.
    """
    n = len(w.letters)
    if n < 1:
        raise EmptyWordError("the empty word evaluates trivially everywhere")
    rows = []
    for r_idx, k in enumerate(degrees):
        rseed = row_seed(seed, r_idx)
        if k <= n + 1:
            rows.append(Row({"degree": k}, None, None, f"skipped: need degree > {n + 1}"))
            continue
        chain = perm.build_bsgs(perm.standard_group("alternating", k))
        sampler = ChainSampler(chain)
        est = estimate_nontrivial_prob(sampler, w, samples, confidence, rseed, workers)
        bound = finperm_bound(n, k - n)
        rows.append(Row({"degree": k}, est, bound, check_bound(est, bound).verdict))
    return ExperimentTable(
        name="alter-sweep",
        rows=rows,
        metadata={
            "word": words.word_to_str(w),
            "seed": seed,
            "samples": samples,
            "confidence": confidence,
            "interval": "hoeffding",
        },
    )


def _haar_leaf_action(arity: int, depth: int, rng) -> np.ndarray:
    """Leaf permutation of a Haar portrait, drawing labels level by level.

    Vertices are visited shallowest first, lexicographically within a level,
    with one Fisher-Yates shuffle each: the identical draw order used by
    trees.haar_sample, so the two representations sample the same element
    for the same stream.
    """
    level_labels = []
    for j in range(depth):
        count = arity**j
        labels = np.empty((count, arity), dtype=np.int64)
        for v in range(count):
            images = list(range(arity))
            rng.shuffle(images)
            labels[v] = images
        level_labels.append(labels)
    x = np.arange(arity**depth, dtype=np.int64)
    img = np.zeros_like(x)
    for j in range(depth):
        prefix = x // (arity ** (depth - j))
        letter = (x // (arity ** (depth - 1 - j))) % arity
        img = img * arity + level_labels[j][prefix, letter]
    return img


def _leaf_compose(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Right-action product on leaf arrays: x^(fg) = (x^f)^g."""
    return g[f]


def _leaf_inverse(f: np.ndarray) -> np.ndarray:
    inv = np.empty_like(f)
    inv[f] = np.arange(len(f), dtype=f.dtype)
    return inv


def _some_word_trivial(leafs: list[np.ndarray], max_len: int) -> bool:
    """Whether some reduced word of length <= max_len in the tuple is trivial.

    Depth-first walk of the reduced-word tree, sharing prefix products; one
    leaf-array compose per visited word.
    """
    n = len(leafs)
    size = len(leafs[0])
    ident = np.arange(size, dtype=np.int64)
    letters = []
    for i in range(n):
        letters.append((2 * i, leafs[i]))
        letters.append((2 * i + 1, _leaf_inverse(leafs[i])))
    stack = [(None, ident, 0)]
    while stack:
        last, prod, length = stack.pop()
        if length > 0 and np.array_equal(prod, ident):
            return True
        if length == max_len:
            continue
        for code, arr in letters:
            if last is not None and (code ^ 1) == last:
                continue
            stack.append((code, _leaf_compose(prod, arr), length + 1))
    return False


def freeness_experiment(
    arity: int,
    depths: Sequence[int],
    n: int,
    max_len: int,
    samples: int,
    seed: int,
    confidence: float = 0.95,
    workers: int = 1,
) -> ExperimentTable:
    """Fraction of Haar tuples admitting a visible relation, per depth.

    A tuple of n Haar-random depth-D automorphisms "admits a relation" when
    some nontrivial reduced word of length <= max_len over the tuple acts as
    the identity on every vertex down to depth D.  The identity check at
    finite depth under-counts nontriviality of the untruncated elements, so
    these fractions are conservative (large); the informative signal is their
    decay as D grows.
    """
    if n < 1 or max_len < 1:
        raise RangeError("need n >= 1 and max_len >= 1")
    rows = []
    for r_idx, depth in enumerate(depths):
        rseed = row_seed(seed, r_idx)

        def run(lo: int, hi: int, depth=depth, rseed=rseed) -> int:
            hits = 0
            for i in range(lo, hi):
                rng = substream(rseed, i)
                leafs = [_haar_leaf_action(arity, depth, rng) for _ in range(n)]
                if _some_word_trivial(leafs, max_len):
                    hits += 1
            return hits

        counts = _run_chunks(run, _chunks(samples, workers), workers)
        est = Estimate(sum(counts), samples, confidence, rseed)
        rows.append(Row({"depth": depth}, est, None, ""))
    return ExperimentTable(
        name="freeness",
        rows=rows,
        metadata={
            "arity": arity,
            "tuple_size": n,
            "max_word_length": max_len,
            "seed": seed,
            "samples": samples,
            "confidence": confidence,
            "interval": "hoeffding",
        },
    )


def bound_check_table(
    kind: str,
    k: int,
    w: ReducedWord,
    samples: int,
    seed: int,
    confidence: float = 0.99,
    workers: int = 1,
) -> ExperimentTable:
    """One-row table: estimate for w over the natural action, bound, verdict."""
    n = len(w.letters)
    if n < 1:
        raise EmptyWordError("the empty word evaluates trivially everywhere")
    if k <= n + 1:
        raise RangeError(f"the separation order (n, k-n) needs degree > {n + 1}, got {k}")
    chain = perm.build_bsgs(perm.standard_group(kind, k))
    sampler = ChainSampler(chain)
    rseed = row_seed(seed, 0)
    est = estimate_nontrivial_prob(sampler, w, samples, confidence, rseed, workers)
    bound = finperm_bound(n, k - n)
    short = {"alternating": "alt", "symmetric": "sym"}[kind]
    return ExperimentTable(
        name="bound-check",
        rows=[Row({"group": f"{short}:{k}", "word": words.word_to_str(w)}, est, bound, check_bound(est, bound).verdict)],
        metadata={"seed": seed, "samples": samples, "confidence": confidence, "interval": "hoeffding"},
    )

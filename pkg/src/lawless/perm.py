"""Finite permutation groups and stabilizer chains.

Permutations act on the right: x^(fg) = (x^f)^g.  Points are 1-based in all
public input and output ("2 3 1" maps 1 to 2); internally images are stored
0-based in tuples.

The stabilizer chain is built by a deterministic (non-randomized) variant of
the Schreier-Sims algorithm: generators are processed in list order, orbits
are closed breadth-first, and base points are chosen as the smallest point
moved.  The same generator list therefore always yields bit-identical chains,
which the sampling and certificate machinery relies on.  Degrees stay small
here (a few dozen points), so no effort is spent on the asymptotically
clever variants.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .errors import BudgetError, DegreeError, ParseError, RangeError


class Permutation:
    """An immutable permutation given by its image tuple (0-based internally)."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ParseError(f"not a permutation of 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({format_permutation(self)!r})"

    def __setattr__(self, *_):
        raise AttributeError("Permutation is immutable")


def identity_perm(degree: int) -> Permutation:
    return Permutation(range(degree))


def from_images(images_1based: Sequence[int]) -> Permutation:
    return Permutation([x - 1 for x in images_1based])


def from_cycles(cycles: Iterable[Iterable[int]], degree: int) -> Permutation:
    """Build a permutation from 1-based cycles, e.g. [(1, 2, 3), (4, 5)]."""
    images = list(range(degree))
    for cyc in cycles:
        cyc = [x - 1 for x in cyc]
        for x in cyc:
            if not 0 <= x < degree:
                raise RangeError(f"point {x + 1} outside degree {degree}")
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a] = b
    return Permutation(images)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, degree: int | None = None) -> Permutation:
    """Parse "2 3 1" (image list) or "(1 2 3)(4 5)" (cycles), 1-based."""
    text = text.strip()
    if text.startswith("("):
        body = _CYCLE_RE.sub("", text).strip()
        if body:
            raise ParseError(f"stray characters in cycle form: {text!r}")
        cycles = []
        maxpt = 0
        for m in _CYCLE_RE.finditer(text):
            pts = [int(tok) for tok in m.group(1).replace(",", " ").split()]
            if any(p < 1 for p in pts):
                raise ParseError("points are 1-based")
            maxpt = max(maxpt, *pts) if pts else maxpt
            cycles.append(pts)
        deg = degree if degree is not None else maxpt
        return from_cycles(cycles, deg)
    try:
        images = [int(tok) for tok in text.split()]
    except ValueError:
        raise ParseError(f"cannot parse permutation {text!r}") from None
    if degree is not None and len(images) != degree:
        raise DegreeError(f"expected degree {degree}, got {len(images)}")
    return from_images(images)


def format_permutation(f: Permutation) -> str:
    """Space-separated 1-based image list, the inverse of parse_permutation."""
    return " ".join(str(x + 1) for x in f.images)


def cycle_form(f: Permutation) -> str:
    """Disjoint-cycle rendering, fixed points omitted; "()" for the identity."""
    seen = [False] * f.degree
    parts = []
    for i in range(f.degree):
        if seen[i] or f.images[i] == i:
            continue
        cyc = [i]
        seen[i] = True
        j = f.images[i]
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = f.images[j]
        parts.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(parts) or "()"


def compose(f: Permutation, g: Permutation) -> Permutation:
    """The product fg: x^(fg) = (x^f)^g."""
    if f.degree != g.degree:
        raise DegreeError(f"degree mismatch: {f.degree} vs {g.degree}")
    gi = g.images
    return Permutation(tuple(gi[x] for x in f.images))


def inverse(f: Permutation) -> Permutation:
    inv = [0] * f.degree
    for i, j in enumerate(f.images):
        inv[j] = i
    return Permutation(inv)


def act(x: int, f: Permutation) -> int:
    """Image of the 1-based point x under f."""
    if not 1 <= x <= f.degree:
        raise RangeError(f"point {x} outside 1..{f.degree}")
    return f.images[x - 1] + 1


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Permutation, ...]

    def __post_init__(self):
        if not self.generators:
            raise RangeError("a group needs at least one generator (use the identity)")
        for g in self.generators:
            if g.degree != self.degree:
                raise DegreeError(f"generator degree {g.degree} != group degree {self.degree}")


def group(generators: Iterable[Permutation], degree: int | None = None) -> PermGroup:
    gens = tuple(generators)
    if degree is None:
        if not gens:
            raise RangeError("cannot infer degree from an empty generator list")
        degree = gens[0].degree
    if not gens:
        gens = (identity_perm(degree),)
    return PermGroup(degree, gens)


def standard_group(kind: str, k: int) -> PermGroup:
    """Natural alternating or symmetric group on k points, canonical generators."""
    if kind == "symmetric":
        if k < 2:
            raise RangeError(f"symmetric group needs degree >= 2, got {k}")
        gens = [from_cycles([(1, 2)], k), from_cycles([tuple(range(1, k + 1))], k)]
    elif kind == "alternating":
        if k < 3:
            raise RangeError(f"alternating group needs degree >= 3, got {k}")
        gens = [from_cycles([(1, 2, 3)], k)]
        if k >= 4:
            if k % 2 == 1:
                gens.append(from_cycles([tuple(range(1, k + 1))], k))
            else:
                gens.append(from_cycles([tuple(range(2, k + 1))], k))
    else:
        raise RangeError(f"unknown group kind {kind!r}")
    return PermGroup(k, tuple(gens))


def orbit(G: PermGroup, x: int) -> set[int]:
    """The G-orbit of the 1-based point x, by breadth-first closure."""
    if not 1 <= x <= G.degree:
        raise RangeError(f"point {x} outside 1..{G.degree}")
    seen = {x - 1}
    queue = [x - 1]
    while queue:
        p = queue.pop(0)
        for g in G.generators:
            q = g.images[p]
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return {p + 1 for p in seen}


class _Level:
    """One level of a stabilizer chain: a base point, its orbit transversal."""

    __slots__ = ("point", "gens", "transversal", "order_list")

    def __init__(self, point: int):
        self.point = point  # 0-based
        self.gens: list[Permutation] = []
        self.transversal: dict[int, Permutation] = {}
        self.order_list: list[int] = []

    def rebuild(self, degree: int):
        """Breadth-first orbit of the base point, generators in list order."""
        ident = identity_perm(degree)
        self.transversal = {self.point: ident}
        self.order_list = [self.point]
        queue = [self.point]
        while queue:
            p = queue.pop(0)
            rep = self.transversal[p]
            for g in self.gens:
                q = g.images[p]
                if q not in self.transversal:
                    self.transversal[q] = compose(rep, g)
                    self.order_list.append(q)
                    queue.append(q)


class BSGS:
    """Base and strong generating set for a permutation group.

    levels[i] stabilizes the first i base points; the product of transversal
    sizes is the group order.
    """

    __slots__ = ("degree", "levels", "strong_generators")

    def __init__(self, degree: int, levels: list[_Level], strong_generators: list[Permutation]):
        self.degree = degree
        self.levels = levels
        self.strong_generators = strong_generators

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(lv.point + 1 for lv in self.levels)

    @property
    def transversals(self) -> list[dict[int, Permutation]]:
        return [{p + 1: rep for p, rep in lv.transversal.items()} for lv in self.levels]

    def generators(self) -> tuple[Permutation, ...]:
        if not self.strong_generators:
            return (identity_perm(self.degree),)
        return tuple(self.strong_generators)


def _sift(chain_levels: list[_Level], g: Permutation, start: int = 0):
    """Strip transversal factors; return (residue, level index it stuck at)."""
    for i in range(start, len(chain_levels)):
        lv = chain_levels[i]
        delta = g.images[lv.point]
        if delta not in lv.transversal:
            return g, i
        g = compose(g, inverse(lv.transversal[delta]))
    return g, len(chain_levels)


def build_bsgs(
    G: PermGroup,
    base_prefix: Sequence[int] = (),
    known_order: int | None = None,
) -> BSGS:
    """Deterministic Schreier-Sims.

    base_prefix (1-based points) is installed verbatim as the first base
    points, even where orbits are trivial; the chain below position
    len(base_prefix) is then a chain for the pointwise stabilizer of the
    prefix.  known_order, when supplied, allows an early exit as soon as the
    transversal product reaches it.
    """
    degree = G.degree
    levels: list[_Level] = []
    for p in base_prefix:
        if not 1 <= p <= degree:
            raise RangeError(f"base point {p} outside 1..{degree}")
        levels.append(_Level(p - 1))
    strong: list[Permutation] = []

    def current_order() -> int:
        n = 1
        for lv in levels:
            n *= max(1, len(lv.transversal))
        return n

    def refresh(lo: int, hi: int | None = None):
        hi = len(levels) if hi is None else min(hi, len(levels))
        for i in range(lo, hi):
            lv = levels[i]
            lv.gens = [
                s for s in strong if all(s.images[levels[j].point] == levels[j].point for j in range(i))
            ]
            lv.rebuild(degree)

    def add_gen(g: Permutation) -> None:
        strong.append(g)
        moved_levels = [i for i, lv in enumerate(levels) if g.images[lv.point] != lv.point]
        if not moved_levels:
            moved = min(i for i in range(degree) if g.images[i] != i)
            levels.append(_Level(moved))
            refresh(0)
        else:
            refresh(0, moved_levels[0] + 1)

    for g in G.generators:
        if not g.is_identity() and g not in strong:
            add_gen(g)
    if not strong:
        refresh(0)

    done = known_order is not None and current_order() == known_order
    i = len(levels) - 1
    while i >= 0 and not done:
        restart = False
        lv = levels[i]
        for delta in lv.order_list:
            rep = lv.transversal[delta]
            for s in lv.gens:
                gamma = s.images[delta]
                schreier = compose(compose(rep, s), inverse(lv.transversal[gamma]))
                if schreier.is_identity():
                    continue
                residue, stuck = _sift(levels, schreier, i + 1)
                if residue.is_identity():
                    continue
                add_gen(residue)
                if known_order is not None and current_order() == known_order:
                    done = True
                else:
                    i = min(stuck, len(levels) - 1)
                restart = True
                break
            if restart:
                break
        if done:
            break
        if not restart:
            i -= 1

    if known_order is not None and current_order() != known_order:
        raise RangeError(f"chain order {current_order()} does not match known order {known_order}")
    return BSGS(degree, levels, strong)


def group_order(chain: BSGS) -> int:
    n = 1
    for lv in chain.levels:
        n *= max(1, len(lv.transversal))
    return n


def contains(chain: BSGS, f: Permutation) -> bool:
    """Membership by sifting through the transversals."""
    if f.degree != chain.degree:
        raise DegreeError(f"degree mismatch: {f.degree} vs {chain.degree}")
    residue, _ = _sift(chain.levels, f)
    return residue.is_identity()


def pointwise_stabilizer(chain: BSGS, Y: Sequence[int]) -> BSGS:
    """Chain for the subgroup fixing every point of Y (1-based, order kept).

    Rebuilds the chain with the base forced to begin with Y, then strips the
    first len(Y) levels; every strong generator of the result fixes Y.
    """
    Y = list(Y)
    if not Y:
        return chain
    G = group(chain.generators(), chain.degree)
    full = build_bsgs(G, base_prefix=Y, known_order=group_order(chain))
    tail = full.levels[len(Y) :]
    fixed = set(p - 1 for p in Y)
    gens = [s for s in full.strong_generators if all(s.images[p] == p for p in fixed)]
    return BSGS(chain.degree, tail, gens)


def uniform_element(chain: BSGS, rng) -> Permutation:
    """Exactly uniform element: one uniform representative per transversal.

    Every group element factors uniquely as t_k ... t_1 with t_i in the i-th
    transversal, so independent uniform picks give the uniform distribution.
    """
    result = identity_perm(chain.degree)
    for lv in reversed(chain.levels):
        pick = lv.order_list[rng.randrange(len(lv.order_list))]
        result = compose(result, lv.transversal[pick])
    return result


def _min_orbit_size(stab: BSGS, excluded: set[int], degree: int) -> int:
    """Smallest orbit size of the stabilizer on the points outside excluded."""
    gens = stab.generators()
    remaining = [p for p in range(degree) if p not in excluded]
    seen: set[int] = set()
    best = degree + 1
    for start in remaining:
        if start in seen:
            continue
        comp = {start}
        queue = [start]
        while queue:
            p = queue.pop(0)
            for g in gens:
                q = g.images[p]
                if q not in comp:
                    comp.add(q)
                    queue.append(q)
        seen |= comp
        best = min(best, len(comp))
        if best == 1:
            return 1
    return best if remaining else 0


def separation_order(
    chain: BSGS,
    n: int,
    mode: str = "exact",
    trials: int = 1000,
    rng=None,
    budget: int = 200_000,
) -> int:
    """Minimum orbit size of any n-point stabilizer on the remaining points.

    exact mode scans every n-subset (BudgetError beyond the candidate-set
    budget); sampled mode scans `trials` random subsets and therefore reports
    an upper bound on the true value.
    """
    degree = chain.degree
    if not 0 <= n < degree:
        raise RangeError(f"n must satisfy 0 <= n < {degree}, got {n}")
    if mode == "exact":
        if comb(degree, n) > budget:
            raise BudgetError(
                f"binomial({degree}, {n}) = {comb(degree, n)} exceeds budget {budget}; use sampled mode"
            )
        subsets = itertools.combinations(range(1, degree + 1), n)
    elif mode == "sampled":
        if rng is None:
            raise RangeError("sampled mode needs an rng")
        points = list(range(1, degree + 1))
        subsets = (tuple(sorted(rng.sample(points, n))) for _ in range(trials))
    else:
        raise RangeError(f"unknown mode {mode!r}")

    best = degree + 1
    for Y in subsets:
        stab = pointwise_stabilizer(chain, list(Y))
        size = _min_orbit_size(stab, {p - 1 for p in Y}, degree)
        best = min(best, size)
        if best <= 1 and n > 0:
            return best
    return best


def elements(chain: BSGS) -> list[Permutation]:
    """All group elements, by transversal products in deterministic order."""
    out = [identity_perm(chain.degree)]
    for lv in reversed(chain.levels):
        reps = [lv.transversal[p] for p in lv.order_list]
        out = [compose(partial, t) for partial in out for t in reps]
    return out

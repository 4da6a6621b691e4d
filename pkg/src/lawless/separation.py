"""Separating actions, witness traces and per-word certificates.

A separating action lets every pointwise stabilizer of a finite set move
every point outside that set.  For such an action, no nontrivial reduced
word is a law: given a word of length n, one can build a substitution tuple
whose partial products drag a start point through n+1 pairwise distinct
points, so the full word moves the start point.

The construction is inductive.  Extend the tuple found for the length-(n-1)
prefix; if the new trajectory point collides with an earlier one, splice a
stabilizer element into the generator used by the last letter.  The splice
fixes the points whose steps reuse that generator (the collision index
provably is not among them), so the old trajectory survives and the new
point lands clear of it.  Each repair consumes one stabilizer_mover call, so
a witness costs at most len(word) mover calls.

A WitnessTrace records the tuple, the trajectory and every repair; verify
recomputes everything from scratch and accepts no shortcuts, so traces are
audit-grade certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import perm, thompson, trees, words
from .errors import (
    CapError,
    EmptyWordError,
    LawlessError,
    MoverExhausted,
    RangeError,
    SpaceError,
)
from .words import ReducedWord


class SeparatingAction:
    """Interface contract: group elements acting on points, on the right.

    Concrete adapters supply multiply/invert/identity/apply plus
    stabilizer_mover(Y, x, forbidden), which returns an element fixing Y
    pointwise and sending x outside forbidden and off itself, or raises
    MoverExhausted.  Serialization hooks make traces portable.
    """

    name = "abstract"

    def identity(self):
        raise NotImplementedError

    def multiply(self, f, g):
        raise NotImplementedError

    def invert(self, f):
        raise NotImplementedError

    def apply(self, f, x):
        raise NotImplementedError

    def is_identity(self, f) -> bool:
        raise NotImplementedError

    def stabilizer_mover(self, Y, x, forbidden):
        raise NotImplementedError

    def space_check(self, n: int) -> None:
        """Raise SpaceError when n+1 distinct trajectory points cannot exist."""

    def format_element(self, f):
        raise NotImplementedError

    def parse_element(self, blob):
        raise NotImplementedError

    def format_point(self, x) -> str:
        raise NotImplementedError

    def parse_point(self, s: str):
        raise NotImplementedError


@dataclass
class Modification:
    """Audit record of one splice: step j collided, indices I, set Y, mover c."""

    step: int
    collided_with: int
    index_set: tuple[int, ...]
    fixed_points: tuple
    mover: object


@dataclass
class WitnessTrace:
    word: ReducedWord
    tuple_: list
    trajectory: list
    modifications: list[Modification] = field(default_factory=list)


def _word_value(w: ReducedWord, tup: Sequence, action: SeparatingAction):
    return words.evaluate(w, tup, action.multiply, action.invert, action.identity())


def _letter_value(letter: words.Letter, tup: Sequence, action: SeparatingAction):
    g = tup[letter.generator_index - 1]
    return action.invert(g) if letter.sign < 0 else g


def witness(
    w: ReducedWord,
    action: SeparatingAction,
    x0,
    budget: int | None = None,
) -> WitnessTrace:
    """Build a verified trace showing w is not a law for this action.

    The trace substitutes concrete elements for the generators of w so that
    the n+1 partial-product images of x0 are pairwise distinct.  Raises
    SpaceError when the action cannot hold that many distinct points and
    MoverExhausted when a repair step finds every admissible image blocked.
    """
    if w.is_empty():
        raise EmptyWordError("the empty word is a law in every group")
    n = len(w.letters)
    action.space_check(n)
    budget = n if budget is None else budget

    tup = [action.identity() for _ in range(w.rank)]
    traj = [x0]
    mods: list[Modification] = []
    mover_calls = 0

    for step in range(1, n + 1):
        letter = w.letters[step - 1]
        x_new = action.apply(_letter_value(letter, tup, action), traj[-1])
        if x_new not in traj:
            traj.append(x_new)
            continue

        j = traj.index(x_new)
        collide = set()
        for i in range(step):
            if i >= 1 and w.letters[i - 1] == letter:
                collide.add(i)
            if i + 1 <= step - 1 and w.letters[i] == letter.inverse():
                collide.add(i)
        if j in collide:
            raise LawlessError(
                f"internal invariant violated: collision index {j} lies in the reuse set {sorted(collide)}"
            )
        Y = [traj[i] for i in sorted(collide)]
        forbidden = set(traj)
        if mover_calls >= budget:
            raise CapError(f"witness exceeded its mover budget of {budget}")
        c = action.stabilizer_mover(Y, traj[j], forbidden)
        mover_calls += 1

        m = letter.generator_index - 1
        if letter.sign > 0:
            tup[m] = action.multiply(tup[m], c)
        else:
            tup[m] = action.multiply(action.invert(c), tup[m])

        for i in range(step - 1):
            recomputed = action.apply(_letter_value(w.letters[i], tup, action), traj[i])
            if recomputed != traj[i + 1]:
                raise LawlessError(
                    f"internal invariant violated: splice at step {step} disturbed trajectory point {i + 1}"
                )
        x_new = action.apply(_letter_value(letter, tup, action), traj[-1])
        if x_new in traj:
            raise LawlessError("internal invariant violated: mover image still collides")
        traj.append(x_new)
        mods.append(
            Modification(
                step=step,
                collided_with=j,
                index_set=tuple(sorted(collide)),
                fixed_points=tuple(Y),
                mover=c,
            )
        )

    return WitnessTrace(word=w, tuple_=tup, trajectory=traj, modifications=mods)


def trace_violation(t: WitnessTrace, action: SeparatingAction) -> str | None:
    """First failing condition of a trace, or None if it verifies."""
    n = len(t.word.letters)
    if len(t.trajectory) != n + 1:
        return f"trajectory has {len(t.trajectory)} points, expected {n + 1}"
    if len(t.tuple_) < t.word.rank:
        return f"tuple has {len(t.tuple_)} entries, word needs {t.word.rank}"
    for i in range(n):
        expected = action.apply(_letter_value(t.word.letters[i], t.tuple_, action), t.trajectory[i])
        if expected != t.trajectory[i + 1]:
            return f"recomputed point {i + 1} differs from the recorded trajectory"
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            if t.trajectory[i] == t.trajectory[j]:
                return f"trajectory points {i} and {j} coincide"
    return None


def verify_trace(t: WitnessTrace, action: SeparatingAction) -> bool:
    """Recompute the trajectory from the tuple and check pairwise distinctness."""
    return trace_violation(t, action) is None


@dataclass
class Certificate:
    """A witness trace plus the explicit final moved-point check."""

    action_name: str
    trace: WitnessTrace
    x0: object
    x_final: object

    def to_json(self, action: SeparatingAction) -> dict:
        return {
            "action": self.action_name,
            "word": words.word_to_str(self.trace.word),
            "tuple": [action.format_element(g) for g in self.trace.tuple_],
            "trajectory": [action.format_point(x) for x in self.trace.trajectory],
            "modifications": [
                {
                    "step": m.step,
                    "collided_with": m.collided_with,
                    "index_set": list(m.index_set),
                    "fixed_points": [action.format_point(y) for y in m.fixed_points],
                    "mover": action.format_element(m.mover),
                }
                for m in self.trace.modifications
            ],
            "start_point": action.format_point(self.x0),
            "final_point": action.format_point(self.x_final),
        }


def certificate_from_json(blob: dict, action: SeparatingAction) -> Certificate:
    w = words.parse_word(blob["word"])
    trace = WitnessTrace(
        word=w,
        tuple_=[action.parse_element(e) for e in blob["tuple"]],
        trajectory=[action.parse_point(p) for p in blob["trajectory"]],
        modifications=[
            Modification(
                step=m["step"],
                collided_with=m["collided_with"],
                index_set=tuple(m["index_set"]),
                fixed_points=tuple(action.parse_point(y) for y in m["fixed_points"]),
                mover=action.parse_element(m["mover"]),
            )
            for m in blob.get("modifications", [])
        ],
    )
    return Certificate(
        action_name=blob["action"],
        trace=trace,
        x0=action.parse_point(blob["start_point"]),
        x_final=action.parse_point(blob["final_point"]),
    )


def certify_not_law(w: ReducedWord, action: SeparatingAction, x0) -> Certificate:
    """Run witness and package the trace with the final moved-point check."""
    if w.is_empty():
        raise EmptyWordError("the empty word is a law in every group")
    trace = witness(w, action, x0)
    value = _word_value(w, trace.tuple_, action)
    x_final = action.apply(value, x0)
    if x_final != trace.trajectory[-1] or x_final == x0:
        raise LawlessError("internal invariant violated: final point check failed")
    return Certificate(action_name=action.name, trace=trace, x0=x0, x_final=x_final)


def check_certificate(cert: Certificate, action: SeparatingAction) -> str | None:
    """Re-verify a certificate from scratch; returns the violation or None."""
    reason = trace_violation(cert.trace, action)
    if reason is not None:
        return reason
    if cert.x0 != cert.trace.trajectory[0]:
        return "start point does not match the trajectory"
    value = _word_value(cert.trace.word, cert.trace.tuple_, action)
    x_final = action.apply(value, cert.x0)
    if x_final != cert.x_final:
        return "final point does not match the word value applied to the start point"
    if x_final == cert.x0:
        return "the word value fixes the start point"
    return None


# --------------------------------------------------------------------------
# adapters


class PermAction(SeparatingAction):
    """Natural action of a finite permutation group held as a stabilizer chain.

    The mover computes the orbit of x under the pointwise stabilizer of Y
    (built by base change, cached per Y) and returns the transversal element
    to the smallest admissible image point.
    """

    def __init__(self, chain: perm.BSGS, name: str = "perm"):
        self.chain = chain
        self.name = name
        self._stab_cache: dict[tuple[int, ...], perm.BSGS] = {}

    def identity(self):
        return perm.identity_perm(self.chain.degree)

    def multiply(self, f, g):
        return perm.compose(f, g)

    def invert(self, f):
        return perm.inverse(f)

    def apply(self, f, x):
        return perm.act(x, f)

    def is_identity(self, f) -> bool:
        return f.is_identity()

    def space_check(self, n: int) -> None:
        if self.chain.degree < n + 1:
            raise SpaceError(
                f"{n + 1} distinct trajectory points cannot exist on {self.chain.degree} points"
            )

    def _stabilizer(self, Y: tuple[int, ...]) -> perm.BSGS:
        if not Y:
            return self.chain
        cached = self._stab_cache.get(Y)
        if cached is None:
            cached = perm.pointwise_stabilizer(self.chain, list(Y))
            self._stab_cache[Y] = cached
        return cached

    def stabilizer_mover(self, Y, x, forbidden):
        Y = tuple(sorted(Y))
        stab = self._stabilizer(Y)
        gens = stab.generators()
        transversal = {x: self.identity()}
        queue = [x]
        while queue:
            p = queue.pop(0)
            for g in gens:
                q = perm.act(p, g)
                if q not in transversal:
                    transversal[q] = perm.compose(transversal[p], g)
                    queue.append(q)
        blocked = set(forbidden) | {x}
        admissible = sorted(p for p in transversal if p not in blocked)
        if not admissible:
            raise MoverExhausted(
                f"the stabilizer orbit of {x} is contained in the forbidden set",
                fixed=Y,
                point=x,
                forbidden=sorted(blocked),
            )
        return transversal[admissible[0]]

    def format_element(self, f):
        return perm.format_permutation(f)

    def parse_element(self, blob):
        return perm.parse_permutation(blob, degree=self.chain.degree)

    def format_point(self, x) -> str:
        return str(x)

    def parse_point(self, s: str):
        return int(s)


def perm_action(chain: perm.BSGS, name: str = "perm") -> PermAction:
    return PermAction(chain, name)


class TreeAction(SeparatingAction):
    """The full depth-D truncated automorphism group on depth-D strings.

    The mover attaches a child-slot swap at the shallowest strict prefix of x
    whose subtree contains no fixed point, descending further while every
    candidate image is forbidden.
    """

    def __init__(self, arity: int, depth: int, name: str | None = None):
        if arity < 2 or depth < 1:
            raise RangeError("need arity >= 2 and depth >= 1")
        self.arity = arity
        self.depth = depth
        self.name = name or f"tree:{arity},{depth}"

    def identity(self):
        return trees.identity_portrait(self.arity, self.depth)

    def multiply(self, f, g):
        return trees.compose_aut(f, g)

    def invert(self, f):
        return trees.inverse_aut(f)

    def apply(self, f, x):
        return trees.act_on_string(f, x)

    def is_identity(self, f) -> bool:
        return f.is_identity()

    def space_check(self, n: int) -> None:
        if self.arity**self.depth < n + 1:
            raise SpaceError(
                f"{n + 1} distinct trajectory points cannot exist on {self.arity ** self.depth} strings"
            )

    def _swap_at(self, v: str, c1: int, c2: int) -> trees.Portrait:
        labels = {u: perm.identity_perm(self.arity) for u in trees.vertices_above_depth(self.arity, self.depth)}
        images = list(range(self.arity))
        images[c1], images[c2] = images[c2], images[c1]
        labels[v] = perm.Permutation(images)
        return trees.Portrait(self.arity, self.depth, labels)

    def stabilizer_mover(self, Y, x, forbidden):
        if len(x) != self.depth:
            raise RangeError(f"points are depth-{self.depth} strings, got {x!r}")
        Y = set(Y)
        blocked = set(forbidden) | {x}
        for cut in range(self.depth):
            v = x[:cut]
            if any(y.startswith(v) for y in Y):
                continue  # a swap here would move a fixed point's branch
            c_x = int(x[cut])
            tail = x[cut + 1 :]
            for c in range(self.arity):
                if c == c_x:
                    continue
                image = v + str(c) + tail
                if image not in blocked:
                    return self._swap_at(v, c_x, c)
        raise MoverExhausted(
            f"every sibling slot of {x!r} down to depth {self.depth} is blocked",
            fixed=tuple(sorted(Y)),
            point=x,
            forbidden=tuple(sorted(blocked)),
        )

    def format_element(self, f):
        return trees.portrait_to_json(f)

    def parse_element(self, blob):
        return trees.portrait_from_json(blob)

    def format_point(self, x) -> str:
        return x

    def parse_point(self, s: str):
        return s


def tree_action(arity: int, depth: int) -> TreeAction:
    return TreeAction(arity, depth)


class ThompsonAction(SeparatingAction):
    """Thompson's F on the dyadic rationals strictly inside (0, 1).

    The mover centers the smallest grid-aligned dyadic interval
    [x - 2^-l, x + 2^-l] around x that avoids the fixed set and stays inside
    (0, 1), then delegates to interval_mover.
    """

    name = "thompson"

    def identity(self):
        return thompson.identity_map()

    def multiply(self, f, g):
        return thompson.compose_pl(f, g)

    def invert(self, f):
        return thompson.inverse_pl(f)

    def apply(self, f, x):
        if not (thompson.ZERO < x < thompson.ONE):
            raise RangeError(f"points are interior dyadics, got {x}")
        return thompson.eval_dyadic(f, x)

    def is_identity(self, f) -> bool:
        return f.is_identity()

    def stabilizer_mover(self, Y, x, forbidden):
        level = max(x.exponent, 1)
        while True:
            radius = thompson.Dyadic(1, level)
            d1 = x - radius
            d2 = x + radius
            if thompson.ZERO < d1 and d2 < thompson.ONE:
                if not any(d1 < y < d2 for y in Y):
                    break
            level += 1
        return thompson.interval_mover(d1, d2, x, forbidden=set(forbidden))

    def format_element(self, f):
        return thompson.plmap_to_json(f)

    def parse_element(self, blob):
        return thompson.plmap_from_json(blob)

    def format_point(self, x) -> str:
        return str(x)

    def parse_point(self, s: str):
        return thompson.parse_dyadic(s)


def thompson_action() -> ThompsonAction:
    return ThompsonAction()

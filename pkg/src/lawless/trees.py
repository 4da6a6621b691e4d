"""Automorphisms of rooted d-ary trees, truncated at a finite depth.

Vertices are strings over the digits 0..d-1; the empty string is the root.
A depth-D portrait assigns one permutation of the child slots to every
vertex of depth < D and represents an element of the level-D truncation of
the full automorphism group (the D-fold iterated wreath product).  A wreath
recursion (finite-state automaton) represents an honest infinite-tree
automorphism; the Grigorchuk generators live here.

"Identity" always means identity to a stated depth.  The truncation at
level D is a genuine quotient group, so all finite-depth statements are
exact statements about that quotient.

Composition follows the right-action convention used across the package:
act_on_string(compose_aut(f, g), s) == act_on_string(g, act_on_string(f, s)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import perm
from .errors import DepthError, RangeError, ShapeError, UnknownGeneratorError
from .perm import Permutation


def _check_vertex(s: str, arity: int) -> None:
    for ch in s:
        if not ch.isdigit() or int(ch) >= arity:
            raise RangeError(f"vertex string {s!r} is not over 0..{arity - 1}")


def vertices_above_depth(arity: int, depth: int) -> list[str]:
    """All vertex strings of length < depth, shallowest first, lexicographic."""
    out = [""]
    layer = [""]
    for _ in range(depth - 1):
        layer = [v + str(c) for v in layer for c in range(arity)]
        out.extend(layer)
    return out


def strings_at_depth(arity: int, depth: int) -> list[str]:
    layer = [""]
    for _ in range(depth):
        layer = [v + str(c) for v in layer for c in range(arity)]
    return layer


@dataclass(frozen=True)
class Portrait:
    """A depth-D tree automorphism: one child-slot permutation per vertex."""

    arity: int
    depth: int
    labels: Mapping[str, Permutation]

    def __post_init__(self):
        if self.arity < 2:
            raise RangeError(f"arity must be >= 2, got {self.arity}")
        if self.depth < 0:
            raise RangeError(f"depth must be >= 0, got {self.depth}")
        expected = (self.arity**self.depth - 1) // (self.arity - 1)
        if len(self.labels) != expected:
            raise ShapeError(f"expected {expected} labels for depth {self.depth}, got {len(self.labels)}")
        for v, p in self.labels.items():
            _check_vertex(v, self.arity)
            if len(v) >= self.depth:
                raise DepthError(f"label at {v!r} is at depth >= {self.depth}")
            if p.degree != self.arity:
                raise ShapeError(f"label at {v!r} has degree {p.degree}, arity is {self.arity}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Portrait)
            and self.arity == other.arity
            and self.depth == other.depth
            and dict(self.labels) == dict(other.labels)
        )

    def is_identity(self) -> bool:
        return all(p.is_identity() for p in self.labels.values())


def identity_portrait(arity: int, depth: int) -> Portrait:
    ident = perm.identity_perm(arity)
    return Portrait(arity, depth, {v: ident for v in vertices_above_depth(arity, depth)})


@dataclass(frozen=True)
class FiniteStateAut:
    """A wreath recursion: per state, a root permutation and d child states."""

    arity: int
    states: Mapping[str, tuple[Permutation, tuple[str, ...]]]
    root_state: str

    def __post_init__(self):
        if self.root_state not in self.states:
            raise UnknownGeneratorError(f"root state {self.root_state!r} not defined")
        for name, (p, children) in self.states.items():
            if p.degree != self.arity:
                raise ShapeError(f"state {name!r} has root permutation of degree {p.degree}")
            if len(children) != self.arity:
                raise ShapeError(f"state {name!r} needs {self.arity} child states")
            for c in children:
                if c not in self.states:
                    raise UnknownGeneratorError(f"state {name!r} references unknown child {c!r}")

    def with_root(self, state: str) -> "FiniteStateAut":
        return FiniteStateAut(self.arity, self.states, state)


def act_on_string(a: Portrait | FiniteStateAut, s: str) -> str:
    """Image of a vertex string; the label at each vertex maps its next letter."""
    if isinstance(a, Portrait):
        _check_vertex(s, a.arity)
        if len(s) > a.depth:
            raise DepthError(f"string of length {len(s)} exceeds portrait depth {a.depth}")
        path = ""
        out = []
        for ch in s:
            out.append(str(perm.act(int(ch) + 1, a.labels[path]) - 1))
            path += ch
        return "".join(out)
    _check_vertex(s, a.arity)
    state = a.root_state
    out = []
    for ch in s:
        p, children = a.states[state]
        out.append(str(perm.act(int(ch) + 1, p) - 1))
        state = children[int(ch)]
    return "".join(out)


def compose_aut(f: Portrait, g: Portrait) -> Portrait:
    """Product portrait: apply f, then g."""
    if f.arity != g.arity or f.depth != g.depth:
        raise ShapeError("portraits must share arity and depth")
    labels = {}
    for v in vertices_above_depth(f.arity, f.depth):
        labels[v] = perm.compose(f.labels[v], g.labels[act_on_string(f, v)])
    return Portrait(f.arity, f.depth, labels)


def inverse_aut(f: Portrait) -> Portrait:
    labels = {}
    for v in vertices_above_depth(f.arity, f.depth):
        labels[act_on_string(f, v)] = perm.inverse(f.labels[v])
    return Portrait(f.arity, f.depth, labels)


def haar_sample(arity: int, depth: int, rng, label_group: Sequence[Permutation] | None = None) -> Portrait:
    """Independent uniform label at every vertex: Haar measure on the truncation.

    By default labels range over the full symmetric group on the child slots
    (via a Fisher-Yates shuffle, exactly uniform).  Passing label_group
    restricts every vertex to a uniform pick from that list, which is Haar on
    the corresponding iterated wreath product whenever the list is a group.
    """
    if arity < 2:
        raise RangeError(f"arity must be >= 2, got {arity}")
    if depth < 1:
        raise RangeError(f"depth must be >= 1, got {depth}")
    labels = {}
    for v in vertices_above_depth(arity, depth):
        if label_group is not None:
            labels[v] = label_group[rng.randrange(len(label_group))]
        else:
            images = list(range(arity))
            rng.shuffle(images)
            labels[v] = Permutation(images)
    return Portrait(arity, depth, labels)


_GRIGORCHUK_NAMES = ("a", "b", "c", "d")


def grigorchuk_generators() -> dict[str, FiniteStateAut]:
    """The four involutive generators a = swap, b = (a,c), c = (a,d), d = (1,b)."""
    swap = Permutation((1, 0))
    ident = perm.identity_perm(2)
    states = {
        "e": (ident, ("e", "e")),
        "a": (swap, ("e", "e")),
        "b": (ident, ("a", "c")),
        "c": (ident, ("a", "d")),
        "d": (ident, ("e", "b")),
    }
    return {name: FiniteStateAut(2, states, name) for name in _GRIGORCHUK_NAMES}


def grigorchuk_generator(name: str) -> FiniteStateAut:
    if name not in _GRIGORCHUK_NAMES:
        raise UnknownGeneratorError(f"unknown Grigorchuk generator {name!r}; use one of a, b, c, d")
    return grigorchuk_generators()[name]


def section(a: FiniteStateAut, v: str) -> FiniteStateAut:
    """The automaton induced on the subtree at v: follow v through the recursion."""
    _check_vertex(v, a.arity)
    state = a.root_state
    for ch in v:
        state = a.states[state][1][int(ch)]
    return a.with_root(state)


def to_portrait(a: FiniteStateAut, depth: int) -> Portrait:
    """Truncate a wreath recursion to a depth-D portrait."""
    labels = {}
    for v in vertices_above_depth(a.arity, depth):
        state = a.root_state
        for ch in v:
            state = a.states[state][1][int(ch)]
        labels[v] = a.states[state][0]
    return Portrait(a.arity, depth, labels)


class TreeWord:
    """A word in wreath-recursion generators, evaluated lazily with memoization.

    A configuration is a tuple of (state, sign) pairs across one merged state
    table; the induced automorphism is the product of the states (inverted
    where sign < 0).  Sections of a configuration are again configurations,
    so identity checks to a given depth memoize on (configuration, depth) and
    collapse the exponential tree walk for self-similar generators.
    """

    def __init__(self, gens: Mapping[str, FiniteStateAut]):
        if not gens:
            raise RangeError("need at least one generator")
        arities = {g.arity for g in gens.values()}
        if len(arities) != 1:
            raise ShapeError("generators must share one arity")
        self.arity = arities.pop()
        self.states: dict[tuple[str, str], tuple[Permutation, tuple[tuple[str, str], ...]]] = {}
        self.roots: dict[str, tuple[str, str]] = {}
        for name, aut in gens.items():
            for st, (p, children) in aut.states.items():
                self.states[(name, st)] = (p, tuple((name, c) for c in children))
            self.roots[name] = (name, aut.root_state)
        self._trivial_memo: dict[tuple, bool] = {}

    def config(self, letters: Iterable[tuple[str, int]]) -> tuple:
        """Configuration for a word given as (generator name, sign) letters."""
        return tuple((self.roots[name], sign) for name, sign in letters)

    def root_perm(self, config: tuple) -> Permutation:
        p = perm.identity_perm(self.arity)
        for state, sign in config:
            q = self.states[state][0]
            p = perm.compose(p, q if sign > 0 else perm.inverse(q))
        return p

    def child(self, config: tuple, letter: int) -> tuple:
        """Section of the configuration at a child slot, tracking letter images."""
        x = letter
        out = []
        for state, sign in config:
            p, children = self.states[state]
            if sign > 0:
                out.append((children[x], sign))
                x = p.images[x]
            else:
                x = p.images.index(x)
                out.append((children[x], sign))
        return tuple(out)

    def act(self, config: tuple, s: str) -> str:
        out = []
        for ch in s:
            x = int(ch)
            out.append(str(perm.act(x + 1, self.root_perm(config)) - 1))
            config = self.child(config, x)
        return "".join(out)

    def trivial_to_depth(self, config: tuple, depth: int) -> bool:
        if depth <= 0:
            return True
        key = (config, depth)
        cached = self._trivial_memo.get(key)
        if cached is not None:
            return cached
        ok = self.root_perm(config).is_identity() and all(
            self.trivial_to_depth(self.child(config, x), depth - 1) for x in range(self.arity)
        )
        self._trivial_memo[key] = ok
        return ok


def is_identity_to_depth(
    a: Portrait | FiniteStateAut | str,
    depth: int,
    gens: Mapping[str, FiniteStateAut] | None = None,
) -> bool:
    """Whether the element fixes every vertex string of length <= depth.

    Accepts a portrait, a wreath recursion, or a word over named generators
    (lowercase letter = generator, uppercase = its inverse; gens required).
    """
    if depth < 0:
        raise RangeError(f"depth must be >= 0, got {depth}")
    if isinstance(a, Portrait):
        if depth > a.depth:
            raise DepthError(f"portrait of depth {a.depth} cannot certify depth {depth}")
        return all(p.is_identity() for v, p in a.labels.items() if len(v) < depth)
    if isinstance(a, FiniteStateAut):
        tw = TreeWord({"g": a})
        return tw.trivial_to_depth(tw.config([("g", 1)]), depth)
    if isinstance(a, str):
        if gens is None:
            raise RangeError("a word needs its generator set")
        tw = TreeWord(gens)
        return tw.trivial_to_depth(tw.config(_word_letters(a, gens)), depth)
    raise RangeError(f"cannot check {type(a).__name__}")


def _word_letters(word: str, gens: Mapping[str, FiniteStateAut]) -> list[tuple[str, int]]:
    letters = []
    for ch in word:
        if ch.lower() not in gens:
            raise UnknownGeneratorError(f"unknown generator {ch!r}")
        letters.append((ch.lower(), 1 if ch.islower() else -1))
    return letters


def rigid_mover(v: str, arity: int, depth: int, rng) -> Portrait:
    """A nontrivial portrait supported on the subtree at v.

    All labels are trivial except at v itself, which gets a uniformly random
    non-identity permutation; every vertex string not descending through v is
    fixed.
    """
    _check_vertex(v, arity)
    if len(v) >= depth:
        raise DepthError(f"vertex {v!r} is too deep for depth {depth}")
    while True:
        images = list(range(arity))
        rng.shuffle(images)
        if any(images[i] != i for i in range(arity)):
            break
    labels = {u: perm.identity_perm(arity) for u in vertices_above_depth(arity, depth)}
    labels[v] = Permutation(images)
    return Portrait(arity, depth, labels)


def _free_reduced_words(names: Sequence[str], max_len: int) -> list[list[tuple[str, int]]]:
    """Words over named generators, freely reduced, length-lex order."""
    alphabet = [(n, s) for n in names for s in (1, -1)]
    out: list[list[tuple[str, int]]] = []
    layer: list[list[tuple[str, int]]] = [[]]
    for _ in range(max_len):
        nxt = []
        for seq in layer:
            for a in alphabet:
                if seq and seq[-1] == (a[0], -a[1]):
                    continue
                nxt.append(seq + [a])
        out.extend(nxt)
        layer = nxt
    return out


def _word_str(letters: Sequence[tuple[str, int]]) -> str:
    return "".join(n if s > 0 else n.upper() for n, s in letters)


def rist_search(
    gens: Mapping[str, FiniteStateAut],
    v: str,
    max_len: int,
    depth: int,
) -> list[str]:
    """Words acting trivially outside the subtree at v and nontrivially inside.

    Enumerates freely reduced words of length <= max_len over the named
    generators (no relation pruning) and keeps those whose action to the
    given depth is supported exactly inside the subtree at v.  An empty
    result is a valid outcome.
    """
    if v == "":
        raise RangeError("the root subtree is the whole tree; pick a proper vertex")
    if max_len < 1:
        raise RangeError(f"max_len must be >= 1, got {max_len}")
    if depth <= len(v):
        raise RangeError(f"depth {depth} must exceed the vertex depth {len(v)}")
    tw = TreeWord(dict(gens))
    _check_vertex(v, tw.arity)
    names = sorted(gens)
    leaves = strings_at_depth(tw.arity, depth)
    outside = [s for s in leaves if not s.startswith(v)]
    inside = [s for s in leaves if s.startswith(v)]
    found = []
    for letters in _free_reduced_words(names, max_len):
        config = tw.config(letters)
        if any(tw.act(config, s) != s for s in outside):
            continue
        if all(tw.act(config, s) == s for s in inside):
            continue
        found.append(_word_str(letters))
    return found


def portrait_to_json(p: Portrait) -> dict:
    return {
        "arity": p.arity,
        "depth": p.depth,
        "labels": {v: perm.format_permutation(q) for v, q in sorted(p.labels.items())},
    }


def portrait_from_json(blob: Mapping) -> Portrait:
    labels = {v: perm.from_images([int(t) for t in s.split()]) for v, s in blob["labels"].items()}
    return Portrait(int(blob["arity"]), int(blob["depth"]), labels)


def aut_to_json(a: FiniteStateAut) -> dict:
    return {
        "arity": a.arity,
        "root": a.root_state,
        "states": {
            name: {"perm": perm.format_permutation(p), "children": list(children)}
            for name, (p, children) in sorted(a.states.items())
        },
    }


def aut_from_json(blob: Mapping) -> FiniteStateAut:
    states = {
        name: (
            perm.from_images([int(t) for t in st["perm"].split()]),
            tuple(st["children"]),
        )
        for name, st in blob["states"].items()
    }
    return FiniteStateAut(int(blob["arity"]), states, blob["root"])

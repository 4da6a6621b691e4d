import random

import pytest

from lawless import perm, words
from lawless.errors import ArityError, ParseError, RangeError
from lawless.words import Letter


def w(text):
    return words.parse_word(text)


def test_parse_basic():
    assert len(w("abAB")) == 4
    assert w("abAB").rank == 2
    assert w("aA").is_empty()
    assert w("").is_empty()


def test_parse_rejects_bad_characters():
    with pytest.raises(ParseError, match="position 3"):
        words.parse_word("ab7")
    with pytest.raises(ParseError):
        words.parse_word("a b")


def test_parse_int_form():
    assert words.parse_int_word("1 -2 1") == words.reduce(
        [Letter(1, 1), Letter(2, -1), Letter(1, 1)]
    )
    with pytest.raises(ParseError):
        words.parse_int_word("1 0 2")


def test_reduce_examples():
    assert words.reduce([Letter(1, 1), Letter(2, 1), Letter(2, -1)]).letters == (Letter(1, 1),)
    assert words.reduce([Letter(1, 1), Letter(1, -1), Letter(2, 1), Letter(2, -1)]).is_empty()
    assert len(words.reduce(w("abAB").letters)) == 4


def test_reduce_idempotent_on_random_sequences():
    rng = random.Random(100)
    for _ in range(300):
        seq = [Letter(rng.randint(1, 3), rng.choice((1, -1))) for _ in range(rng.randint(0, 12))]
        once = words.reduce(seq)
        assert words.reduce(once.letters) == once


def test_concat_examples():
    assert words.concat(w("ab"), w("BA")).is_empty()
    assert words.concat(w("a"), w("")) == w("a")
    assert str(words.concat(w("ab"), w("b"))) == "abb"


def test_concat_group_axioms():
    rng = random.Random(7)
    pool = [w(s) for s in ["", "a", "B", "ab", "abAB", "bba", "AAb", "aBa"]]
    for _ in range(200):
        u, v, t = (rng.choice(pool) for _ in range(3))
        assert words.concat(words.concat(u, v), t) == words.concat(u, words.concat(v, t))
        assert words.concat(u, words.empty_word()) == u
        assert words.concat(words.empty_word(), u) == u
        assert words.concat(u, words.inverse(u)).is_empty()
        assert words.inverse(words.inverse(u)) == u


def test_inverse_examples():
    assert str(words.inverse(w("abAB"))) == "baBA"
    assert words.inverse(w("")).is_empty()
    assert str(words.inverse(w("a"))) == "A"


def test_prefix():
    word = w("abAB")
    assert str(words.prefix(word, 2)) == "ab"
    assert words.prefix(word, 0).is_empty()
    assert words.prefix(word, 4) == word
    with pytest.raises(RangeError):
        words.prefix(word, 5)
    with pytest.raises(RangeError):
        words.prefix(word, -1)


def test_enumerate_counts_and_order():
    first = words.enumerate_reduced(2, 1)
    assert [str(x) for x in first] == ["a", "A", "b", "B"]
    upto2 = words.enumerate_reduced(2, 2)
    assert len(upto2) == 16
    rank1 = words.enumerate_reduced(1, 3)
    assert [str(x) for x in rank1] == ["a", "A", "aa", "AA", "aaa", "AAA"]


@pytest.mark.parametrize("k,L", [(1, 4), (2, 4), (3, 3)])
def test_enumerate_formula(k, L):
    out = words.enumerate_reduced(k, L)
    expected = sum(2 * k * (2 * k - 1) ** (l - 1) for l in range(1, L + 1))
    assert len(out) == expected
    assert len({str(x) for x in out}) == expected
    for word in out:
        assert word.rank == k
        assert words.reduce(word.letters).letters == word.letters


def test_evaluate_empty_word_gives_identity():
    ident = perm.identity_perm(3)
    assert words.evaluate(w(""), [], perm.compose, perm.inverse, ident) == ident


def test_evaluate_against_hand_composition():
    # g1 = (1 2 3), g2 = (1 2); ab sends 1->1, 2->3, 3->2
    g1 = perm.from_cycles([(1, 2, 3)], 3)
    g2 = perm.from_cycles([(1, 2)], 3)
    ident = perm.identity_perm(3)
    value = words.evaluate(w("ab"), [g1, g2], perm.compose, perm.inverse, ident)
    assert value == perm.from_images([1, 3, 2])


def test_evaluate_arity_error():
    g1 = perm.from_cycles([(1, 2, 3)], 3)
    with pytest.raises(ArityError):
        words.evaluate(w("ab"), [g1], perm.compose, perm.inverse, perm.identity_perm(3))


def test_evaluate_is_homomorphism():
    rng = random.Random(5)
    chain = perm.build_bsgs(perm.standard_group("symmetric", 4))
    ident = perm.identity_perm(4)
    pool = [w(s) for s in ["a", "ab", "Ba", "abA", "bb", "aBaB"]]
    for _ in range(150):
        u, v = rng.choice(pool), rng.choice(pool)
        tup = [perm.uniform_element(chain, rng) for _ in range(2)]
        lhs = words.evaluate(words.concat(u, v), tup, perm.compose, perm.inverse, ident)
        rhs = perm.compose(
            words.evaluate(u, tup, perm.compose, perm.inverse, ident),
            words.evaluate(v, tup, perm.compose, perm.inverse, ident),
        )
        assert lhs == rhs

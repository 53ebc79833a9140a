import json
import math
import os

import numpy as np
import pytest
from conftest import DATA, random_graph, undirected_from_pairs
from hypothesis import given
from hypothesis import strategies as st

from semdis.compare import (
    NeighborList,
    compare_lists,
    compare_networks,
    error_score,
    match_rate,
    neighbor_list,
    read_ranked_lists,
)
from semdis.core import Vocabulary, build_network
from semdis.errors import LengthMismatch, UnknownToken, VocabularyMismatch


def nl(tokens, l=None, owner="x"):
    return NeighborList(owner, tuple((t, None) for t in tokens), len(tokens) if l is None else l)


@pytest.fixture(scope="module")
def lists():
    return read_ranked_lists(os.path.join(DATA, "neighbor_lists_l10.tsv"))


def score(lists, word, model):
    return error_score(nl(lists["FP"][word], 10), nl(lists[model][word], 10))


def test_fixture_shape(lists):
    assert set(lists) == {"FP", "LSA", "WAS", "RIM"}
    for src in lists.values():
        assert set(src) == {"tuba", "rooster"}
        assert all(len(v) == 10 for v in src.values())


def test_tuba_scores(lists):
    rim = score(lists, "tuba", "RIM")
    assert (rim.e_m, rim.e_o, rim.e) == (2, 4, 2.5)
    lsa = score(lists, "tuba", "LSA")
    assert (lsa.e_m, lsa.e_o) == (4, 5)
    assert lsa.e == pytest.approx(4 + 5 / 6, abs=1e-15)
    was = score(lists, "tuba", "WAS")
    assert was.complete_mismatch and was.e == 11.0


def test_rooster_scores(lists):
    rim = score(lists, "rooster", "RIM")
    assert (rim.e_m, rim.e_o, rim.e) == (2, 7, 2.875)
    was = score(lists, "rooster", "WAS")
    assert (was.e_m, was.e_o, was.e) == (8, 1, 8.5)
    assert score(lists, "rooster", "LSA").e == 11.0


def test_match_rates(lists):
    assert match_rate(nl(lists["FP"]["tuba"], 10), nl(lists["RIM"]["tuba"], 10)) == 0.8
    assert match_rate(nl(lists["FP"]["rooster"], 10), nl(lists["LSA"]["rooster"], 10)) == 0.0
    assert match_rate(nl(list("abc")), nl(list("abc"))) == 1.0


def test_identical_lists_score_zero():
    s = error_score(nl(list("abcd")), nl(list("abcd")))
    assert (s.e_m, s.e_o, s.e, s.complete_mismatch) == (0, 0, 0.0, False)


def test_single_misplaced_match_scores_l():
    # one shared word at the wrong rank is the worst case short of no overlap
    s = error_score(nl(["a", "b", "c"]), nl(["x", "a", "y"]))
    assert s.e == 3.0


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        error_score(nl(list("ab"), 2), nl(list("abc"), 3))
    with pytest.raises(LengthMismatch):
        match_rate(nl(list("ab"), 2), nl(list("ab"), 2), l=3)


def test_short_candidate_counts_missing_positions():
    s = error_score(nl(list("abcd"), 4), nl(list("ab"), 4))
    assert (s.e_m, s.e_o) == (2, 0)
    assert s.e == 2.0


def test_both_empty_lists_are_identical():
    s = error_score(nl([], 3), nl([], 3))
    assert s.e == 0.0 and not s.complete_mismatch


words = st.lists(st.sampled_from("abcdefghijkl"), unique=True)


@given(words, words, st.integers(1, 12))
def test_error_score_properties(a, b, l):
    a, b = a[:l], b[:l]
    ref, cand = nl(a, l), nl(b, l)
    s, t = error_score(ref, cand), error_score(cand, ref)
    assert s == error_score(ref, cand)
    if len(a) == len(b):
        assert s.e_m == t.e_m
    assert 0 <= s.e <= l + 1
    common = set(a) & set(b)
    if not common and (a or b):
        assert s.e == l + 1
    else:
        assert s.e < l + 1
    assert (s.e == 0) == (a == b)


@pytest.fixture
def weighted():
    v = Vocabulary(["a", "b", "c", "d"])
    return build_network(v, [("d", "b", 0.9), ("d", "c", 0.9), ("d", "a", 0.5)], directed=False)


def test_neighbor_list_ties_alphabetical(weighted):
    got = neighbor_list(weighted, "d", 2)
    assert got.tokens == ["b", "c"]
    assert got.l == 2


def test_neighbor_list_short_and_isolated(weighted):
    assert neighbor_list(weighted, "d", 10).tokens == ["b", "c", "a"]
    assert neighbor_list(weighted, "a", 10).tokens == ["d"]
    v = Vocabulary(["a", "b", "lonely"])
    net = build_network(v, [("a", "b", 1.0)], directed=False)
    assert neighbor_list(net, "lonely", 5).tokens == []
    with pytest.raises(UnknownToken):
        neighbor_list(net, "zebra", 5)


def test_compare_self():
    rng = np.random.default_rng(0)
    pairs = random_graph(rng, 20, 0.3)
    net = undirected_from_pairs(20, pairs, weights=list(rng.random(len(pairs)) + 0.1))
    rep = compare_networks(net, net, l_max=15)
    assert all(e == 0.0 for e in rep.mean_error)
    for w in rep.words:
        assert all(s.e == 0.0 for s in w.scores)
        # a word with k < l neighbours can fill only k of the l positions
        k = len(w.reference)
        assert w.match_fraction == tuple(min(k, l) / l for l in range(1, 16))


def test_compare_aggregates_are_means():
    rng = np.random.default_rng(1)
    a = undirected_from_pairs(25, random_graph(rng, 25, 0.4), None)
    pairs = random_graph(rng, 25, 0.4)
    b = undirected_from_pairs(25, pairs, weights=list(rng.random(len(pairs)) + 0.01))
    rep = compare_networks(a, b, l_max=15)
    for l in range(15):
        em = math.fsum(w.scores[l].e for w in rep.words) / len(rep.words)
        mm = 100 * math.fsum(w.match_fraction[l] for w in rep.words) / len(rep.words)
        assert abs(rep.mean_error[l] - em) <= 1e-12
        assert abs(rep.mean_match_pct[l] - mm) <= 1e-12
    csv_lines = rep.to_csv().splitlines()
    assert csv_lines[0] == "l,mean_match_pct,mean_error" and len(csv_lines) == 16
    detail = json.loads(rep.to_json())
    assert len(detail["words"]) == 25 and len(detail["per_l"]) == 15


def test_compare_vocabulary_mismatch():
    a = undirected_from_pairs(3, [(0, 1)])
    b = undirected_from_pairs(4, [(0, 1)])
    with pytest.raises(VocabularyMismatch):
        compare_networks(a, b)


def test_compare_lists_from_fixture(lists):
    rep = compare_lists(lists["FP"], lists["RIM"], l_max=10)
    by_word = {w.word: w for w in rep.words}
    assert by_word["tuba"].scores[9].e == 2.5
    assert by_word["rooster"].scores[9].e == 2.875
    assert rep.mean_error[9] == (2.5 + 2.875) / 2

import itertools
import random

import pytest

from conftest import GRAPH_3X4, GRAPH_4X5, random_instance
from stablecount import (
    BipartiteGraph,
    Instance,
    ParseError,
    Poset,
    Side,
    SizeLimitError,
    brute_force_independent_sets,
    brute_force_stable_matchings,
    count_downsets,
    count_independent_sets,
    count_stable_matchings,
    enumerate_downsets,
    enumerate_stable_matchings,
    format_bipartite,
    matching_from_downset,
    parse_bipartite,
    poset_from_bipartite,
    propose_optimal,
    rotation_poset,
)


def chain(k):
    below = tuple((1 << i) - 1 for i in range(k))
    return Poset.from_below(below)


def antichain(k):
    return Poset.from_below((0,) * k)


def random_poset(rng, k):
    below = [0] * k
    for j in range(k):
        for i in range(j):
            if rng.random() < 0.4:
                below[j] |= 1 << i | below[i]  # keep transitively closed
    return Poset.from_below(tuple(below))


def oracle_downsets(poset):
    # filter all subsets for downward closure
    out = []
    for bits in range(1 << poset.size):
        if all(
            poset.below[x] & bits == poset.below[x]
            for x in range(poset.size)
            if bits >> x & 1
        ):
            out.append(frozenset(i for i in range(poset.size) if bits >> i & 1))
    return out


def test_count_empty_poset():
    assert count_downsets(Poset(0, (), ())) == 1


def test_count_chain_and_antichain():
    for k in range(1, 8):
        assert count_downsets(chain(k)) == k + 1
        assert count_downsets(antichain(k)) == 2**k


def test_count_rejects_oversized():
    with pytest.raises(SizeLimitError):
        count_downsets(antichain(65))


def test_enumerate_chain():
    got = list(enumerate_downsets(chain(2)))
    assert sorted(got, key=len) == [frozenset(), {0}, {0, 1}]


def test_enumerate_respects_limit():
    assert len(list(enumerate_downsets(antichain(5), limit=3))) == 3


def test_enumerate_matches_count_on_random_posets():
    rng = random.Random(41)
    for _ in range(100):
        poset = random_poset(rng, rng.randint(0, 12))
        got = list(enumerate_downsets(poset))
        assert len(got) == count_downsets(poset)
        assert len(set(got)) == len(got)
        assert sorted(got, key=sorted) == sorted(oracle_downsets(poset), key=sorted)


def test_known_downset_of_height_one_poset():
    # GRAPH_4X5: left vertices are poset elements 0..3, right 4..8; taking
    # right elements f=4, g=5 forces left a=0 and b=1 below them, and d=3
    # joins freely
    poset = poset_from_bipartite(GRAPH_4X5)
    assert frozenset({0, 1, 3, 4, 5}) in set(enumerate_downsets(poset))


def test_count_stable_trivial():
    assert count_stable_matchings(Instance(1, ((1,),), ((1,),))) == 1


def test_count_stable_two_by_two():
    inst = Instance(2, ((1, 2), (2, 1)), ((2, 1), (1, 2)))
    assert count_stable_matchings(inst) == 2


def test_count_matches_brute_force():
    rng = random.Random(43)
    for _ in range(60):
        inst = random_instance(rng, rng.randint(1, 7))
        assert count_stable_matchings(inst) == len(brute_force_stable_matchings(inst))


def test_downset_extremes_map_to_optima():
    rng = random.Random(47)
    for _ in range(25):
        inst = random_instance(rng, rng.randint(1, 6))
        rposet = rotation_poset(inst)
        full = frozenset(range(len(rposet)))
        assert matching_from_downset(inst, rposet, frozenset()) == propose_optimal(
            inst, Side.MAN
        )
        assert matching_from_downset(inst, rposet, full) == propose_optimal(
            inst, Side.WOMAN
        )


def test_enumerate_stable_equals_brute_force():
    rng = random.Random(53)
    for _ in range(40):
        inst = random_instance(rng, rng.randint(1, 6))
        got = set(enumerate_stable_matchings(inst))
        assert got == set(brute_force_stable_matchings(inst))
        assert propose_optimal(inst, Side.MAN) in got
        assert propose_optimal(inst, Side.WOMAN) in got


def test_brute_force_rejects_large_n():
    inst = random_instance(random.Random(0), 9)
    with pytest.raises(SizeLimitError):
        brute_force_stable_matchings(inst)


def test_graph_rejects_isolated_vertex():
    with pytest.raises(ValueError, match="isolated"):
        BipartiteGraph(2, 1, ((1, 1),))


def test_graph_rejects_duplicate_edge():
    with pytest.raises(ValueError, match="duplicate"):
        BipartiteGraph(1, 1, ((1, 1), (1, 1)))


def test_independent_sets_single_edge():
    assert count_independent_sets(BipartiteGraph(1, 1, ((1, 1),))) == 3


def test_independent_sets_star():
    for k in range(1, 7):
        star = BipartiteGraph(1, k, tuple((1, j) for j in range(1, k + 1)))
        assert count_independent_sets(star) == 2**k + 1


def test_independent_sets_fixed_graphs():
    assert count_independent_sets(GRAPH_3X4) == 29
    assert count_independent_sets(GRAPH_4X5) == brute_force_independent_sets(
        GRAPH_4X5
    )


def test_independent_sets_match_subset_oracle():
    rng = random.Random(59)
    for _ in range(40):
        n1 = rng.randint(1, 4)
        n2 = rng.randint(1, 4)
        pool = list(itertools.product(range(1, n1 + 1), range(1, n2 + 1)))
        edges = tuple(rng.sample(pool, rng.randint(1, len(pool))))
        try:
            g = BipartiteGraph(n1, n2, edges)
        except ValueError:
            continue
        assert count_independent_sets(g, check=False) == brute_force_independent_sets(g)


def test_bipartite_text_round_trip():
    assert parse_bipartite(format_bipartite(GRAPH_3X4)) == GRAPH_3X4


def test_bipartite_parse_errors():
    with pytest.raises(ParseError):
        parse_bipartite("bis 1\ne 1 1\n")
    with pytest.raises(ParseError):
        parse_bipartite("bis 1 1\nedge 1 1\n")

"""Shared helpers: random generators and structural invariant checks."""

import random
from fractions import Fraction

from stablecount import (
    BipartiteGraph,
    Instance,
    Matching,
    OneAttributeSpec,
    Side,
    apply_rotation,
    eliminated_pairs,
    enumerate_stable_matchings,
    find_all_rotations,
    is_stable,
    lattice_meet_join,
    propose_optimal,
    rotation_poset,
)


def random_instance(rng: random.Random, n: int) -> Instance:
    def perm():
        return tuple(rng.sample(range(1, n + 1), n))

    return Instance(
        n, tuple(perm() for _ in range(n)), tuple(perm() for _ in range(n))
    )


def random_bipartite(
    rng: random.Random, max_edges: int, min_edges: int = 1
) -> BipartiteGraph:
    """A random simple bipartite graph with no isolated vertices: sample
    edges on a grid, then compact the labels of the vertices actually hit."""
    while True:
        m = rng.randint(min_edges, max_edges)
        n1 = rng.randint(1, m)
        n2 = rng.randint(1, m)
        pool = [(u, v) for u in range(1, n1 + 1) for v in range(1, n2 + 1)]
        edges = rng.sample(pool, min(m, len(pool)))
        if len(edges) >= min_edges:
            break
    left = {u: i for i, u in enumerate(sorted({u for u, _ in edges}), 1)}
    right = {v: j for j, v in enumerate(sorted({v for _, v in edges}), 1)}
    return BipartiteGraph(
        len(left), len(right), tuple((left[u], right[v]) for u, v in edges)
    )


def random_1attribute(rng: random.Random, n: int) -> OneAttributeSpec:
    def side():
        attrs = rng.sample(range(-10 * n, 10 * n + 1), n)
        return tuple(
            (Fraction(a), Fraction(rng.choice([-1, 1]) * rng.randint(1, 9)))
            for a in attrs
        )

    return OneAttributeSpec(n, side(), side())


def all_small_bipartite(max_edges: int):
    """Every labelled simple bipartite graph with no isolated vertices and
    1..max_edges edges, with the vertex labels of each side compacted to
    1..n1 / 1..n2 (a superset of one representative per isomorphism class)."""
    import itertools

    out = []
    for m in range(1, max_edges + 1):
        for n1 in range(1, m + 1):
            for n2 in range(1, m + 1):
                pool = [
                    (u, v)
                    for u in range(1, n1 + 1)
                    for v in range(1, n2 + 1)
                ]
                if len(pool) < m:
                    continue
                for edges in itertools.combinations(pool, m):
                    if {u for u, _ in edges} != set(range(1, n1 + 1)):
                        continue
                    if {v for _, v in edges} != set(range(1, n2 + 1)):
                        continue
                    out.append(BipartiteGraph(n1, n2, edges))
    return out


# Two fixed 8-edge graphs reused throughout the suite.  The 3x4 one has
# independent-set count 29; its left-vertex cycles partition the edge
# labels into (1,2,3)(4,5,6)(7,8) and the right-vertex cycles into
# (1,7)(2,4)(5)(3,6,8).
GRAPH_3X4 = BipartiteGraph(
    3, 4, ((1, 1), (1, 2), (1, 4), (2, 2), (2, 3), (2, 4), (3, 1), (3, 4))
)
GRAPH_4X5 = BipartiteGraph(
    4, 5, ((1, 1), (1, 3), (1, 4), (2, 1), (2, 2), (3, 3), (4, 4), (4, 5))
)


def check_structure(inst: Instance, rng: random.Random, pair_budget: int = 50):
    """Structural invariants every instance must satisfy:

    * the rotation walk visits each rotation exactly once, starts at the
      man-optimal matching, ends at the woman-optimal one, and each step
      applies the corresponding rotation to a stable matching;
    * the rotation order is irreflexive, antisymmetric, and transitive;
    * the lattice meet and join of stable matchings are stable;
    * no (man, woman) pair is eliminated by more than one rotation.
    """
    rotations, path = find_all_rotations(inst)
    mopt = propose_optimal(inst, Side.MAN)
    wopt = propose_optimal(inst, Side.WOMAN)

    assert len(path) == len(rotations) + 1
    assert path[0] == mopt
    assert path[-1] == wopt
    assert len(set(rotations)) == len(rotations)
    for t, rot in enumerate(rotations):
        assert is_stable(inst, path[t])
        assert apply_rotation(path[t], rot) == path[t + 1]
    assert is_stable(inst, path[-1])

    rposet = rotation_poset(inst)
    k = len(rposet)
    below = rposet.below
    for i in range(k):
        assert not below[i] >> i & 1  # irreflexive
        for j in range(k):
            if below[j] >> i & 1:
                assert not below[i] >> j & 1  # antisymmetric
                assert below[i] & ~below[j] == 0  # transitive
    seen: set[tuple[int, int]] = set()
    for rot in rotations:
        for pair in eliminated_pairs(inst, rot):
            assert pair not in seen, f"pair {pair} eliminated twice"
            seen.add(pair)

    sample = list(enumerate_stable_matchings(inst, limit=12))
    pairs = [(a, b) for i, a in enumerate(sample) for b in sample[i + 1:]]
    if len(pairs) > pair_budget:
        pairs = rng.sample(pairs, pair_budget)
    for a, b in pairs:
        hi, lo = lattice_meet_join(inst, a, b)
        assert is_stable(inst, hi)
        assert is_stable(inst, lo)

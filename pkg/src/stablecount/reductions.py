"""From bipartite graphs to stable marriage instances, count-preservingly.

Given a simple bipartite graph G with n edges and no isolated vertices,
three generators build a 3n-by-3n instance whose stable matchings are in
bijection with the independent sets of G:

* ``gen_partial_lists`` writes the preference lists directly;
* ``gen_3attribute`` realizes them with 3-dimensional dot products;
* ``gen_2euclidean`` realizes them with 2-dimensional Euclidean distances.

The edges are labelled 1..n; walking each left vertex's incident labels
gives a permutation rho whose cycles are intervals of consecutive
integers, and each right vertex's labels give a permutation sigma.  The
instance has men A_x, B_x, C_x and women a_x, b_x, c_x per edge x; its
rotation poset has height at most one and is isomorphic to G, with one
minimal rotation per left vertex and one maximal rotation per right
vertex.  ``verify_reduction`` re-derives all of this from scratch on a
concrete graph and reports which structural claims hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, Matching
from .counting import (
    BipartiteGraph,
    Poset,
    count_downsets,
    count_independent_sets,
)
from .gale_shapley import propose_optimal
from .core import Side
from .geometry import AttributeSpec, EuclideanSpec, Value, induced_instance
from .rotations import (
    Rotation,
    RotationPoset,
    hasse_diagram,
    rotation_poset,
    truncated_lists,
)


@dataclass(frozen=True)
class CyclePair:
    """Edge labelling of a bipartite graph as two permutations.

    ``edges[x-1]`` is the edge with label x (labels follow the
    lexicographic (left, right) order).  ``rho`` cycles the labels around
    each left vertex, ``sigma`` around each right vertex; cycles are
    listed in vertex order, each starting at its smallest label.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    rho: tuple[int, ...]
    sigma: tuple[int, ...]
    rho_cycles: tuple[tuple[int, ...], ...]
    sigma_cycles: tuple[tuple[int, ...], ...]
    rho_vertices: tuple[int, ...]  # left vertex owning each rho-cycle
    sigma_vertices: tuple[int, ...]


def edge_cycles(graph: BipartiteGraph) -> CyclePair:
    edges = graph.edges  # already sorted lexicographically
    n = len(edges)
    rho_cycles, rho_vertices = [], []
    sigma_cycles, sigma_vertices = [], []
    for u in range(1, graph.n1 + 1):
        cycle = tuple(x for x, (a, _) in enumerate(edges, start=1) if a == u)
        rho_cycles.append(cycle)
        rho_vertices.append(u)
    for v in range(1, graph.n2 + 1):
        cycle = tuple(x for x, (_, b) in enumerate(edges, start=1) if b == v)
        sigma_cycles.append(cycle)
        sigma_vertices.append(v)
    rho, sigma = [0] * n, [0] * n
    for cycle in rho_cycles:
        for i, x in enumerate(cycle):
            rho[x - 1] = cycle[(i + 1) % len(cycle)]
    for cycle in sigma_cycles:
        for i, x in enumerate(cycle):
            sigma[x - 1] = cycle[(i + 1) % len(cycle)]
    return CyclePair(
        n,
        edges,
        tuple(rho),
        tuple(sigma),
        tuple(rho_cycles),
        tuple(sigma_cycles),
        tuple(rho_vertices),
        tuple(sigma_vertices),
    )


# Person numbering in the generated 3n-by-3n instances, per edge label x:
# men A_x = x, B_x = n+x, C_x = 2n+x; women a_x = x, b_x = n+x, c_x = 2n+x.


def _complete(prefix: list[int], total: int) -> tuple[int, ...]:
    seen = set(prefix)
    return tuple(prefix) + tuple(p for p in range(1, total + 1) if p not in seen)


def gen_partial_lists(
    graph: BipartiteGraph, tau: tuple[int, ...] | None = None
) -> Instance:
    """The direct list construction for G, as a complete instance.

    ``tau`` permutes the block of b-women that every B-man ranks first
    (identity by default); the stable structure is independent of it.
    Prefixes beyond each person's stable partners are completed with the
    remaining people in ascending index order.
    """
    cp = edge_cycles(graph)
    n = cp.n
    if tau is None:
        tau = tuple(range(1, n + 1))
    if sorted(tau) != list(range(1, n + 1)):
        raise ValueError("tau must be a permutation of 1..n")

    def a(x): return x
    def b(x): return n + x
    def c(x): return 2 * n + x
    A, B, C = a, b, c  # same numbering on the men's side

    men = [None] * (3 * n)
    women = [None] * (3 * n)
    bblock = [b(tau[j]) for j in range(n - 1, -1, -1)]  # b_tau(n) .. b_tau(1)
    cblock = [C(j) for j in range(n, 0, -1)]  # C_n .. C_1

    for x in range(1, n + 1):
        men[A(x) - 1] = _complete([a(x), b(cp.rho[x - 1])], 3 * n)
        men[C(x) - 1] = _complete([c(x), a(cp.sigma[x - 1])], 3 * n)
        women[b(x) - 1] = _complete(
            [A(cp.rho.index(x) + 1), B(x)], 3 * n
        )
        women[c(x) - 1] = _complete([B(x), C(x)], 3 * n)
    for cyc in cp.sigma_cycles:
        p = len(cyc)
        for m in range(p - 1):
            x = cyc[m]
            men[B(x) - 1] = _complete(bblock + [a(x), c(x)], 3 * n)
        x = cyc[p - 1]
        tail = [a(x)]
        for m in range(p - 2, -1, -1):
            tail += [c(cyc[m]), a(cyc[m])]
        tail.append(c(x))
        men[B(x) - 1] = _complete(bblock + tail, 3 * n)
    for cyc in cp.rho_cycles:
        q = len(cyc)
        for m in range(q - 1):
            y = cyc[m]
            women[a(y) - 1] = _complete(cblock + [B(y), A(y)], 3 * n)
        y = cyc[q - 1]
        tail = [B(y)]
        for m in range(q - 2, -1, -1):
            tail += [A(cyc[m]), B(cyc[m])]
        tail.append(A(y))
        women[a(y) - 1] = _complete(cblock + tail, 3 * n)
    return Instance(3 * n, tuple(men), tuple(women))


def gen_3attribute(graph: BipartiteGraph) -> AttributeSpec:
    """Realize the construction with 3-dimensional dot products.

    People sit on or near the unit circle in the x-y plane, spread in
    per-vertex angular groups of width eps = (a full turn)/n^2; b-women
    and C-men carry huge z-coordinates 4^x that only the (mostly-z)
    preference vectors of B-men and a-women respond to.  Requires n >= 2:
    with a single edge the group spacing degenerates.

    The tilted preference vectors get an extra angular nudge of theta/1009:
    placed exactly over their owner's partner they would see the two
    neighbouring a-women (or B-men) of the same cycle as exact mirror
    images with identical scores, and no strict list would exist.  The
    nudge is orders of magnitude below every angular gap the construction
    relies on, so the stable structure is untouched; it only decides
    comparisons that lie strictly below everyone's worst stable partner.
    """
    cp = edge_cycles(graph)
    n = cp.n
    if n < 2:
        raise ValueError("the 3-attribute construction needs at least 2 edges")
    nudge = Fraction(1, 1009)  # prime denominator: cannot recreate a mirror
    phi = Fraction(1, 100)  # tilt of the z-heavy preference vectors, in turns
    sin_phi = Value.trig("sin", phi)
    cos_phi = Value.trig("cos", phi)
    zero = Value.ZERO

    def circle(turns: Fraction, z: Value) -> tuple[Value, Value, Value]:
        return (Value.trig("cos", turns), Value.trig("sin", turns), z)

    def tilted(turns: Fraction) -> tuple[Value, Value, Value]:
        return (
            sin_phi * Value.trig("cos", turns),
            sin_phi * Value.trig("sin", turns),
            cos_phi,
        )

    size = 3 * n
    wpos = [None] * size
    mpref = [None] * size
    mpos = [None] * size
    wpref = [None] * size

    l = len(cp.sigma_cycles)
    for i, cyc in enumerate(cp.sigma_cycles, start=1):
        p = len(cyc)
        theta = Fraction(1, n * n * (7 * p - 1))
        base = Fraction(i - 1, l)
        for m, x in enumerate(cyc):
            prev = cyc[m - 1]  # sigma^(m-1) of the representative
            wpos[x - 1] = circle(base + (7 * m + 4) * theta, zero)  # a_x
            wpos[n + cp.rho[x - 1] - 1] = circle(  # b_{rho x}
                base + (7 * m + 6) * theta,
                Value.rational(Fraction(4) ** cp.rho[x - 1]),
            )
            wpos[2 * n + prev - 1] = circle(base + 7 * m * theta, zero)  # c_prev
            mpref[x - 1] = circle(base + (7 * m + Fraction(14, 3)) * theta, zero)
            mpref[n + x - 1] = tilted(base + (7 * m + 4 + nudge) * theta)  # B_x
            mpref[2 * n + prev - 1] = circle(
                base + (7 * m + Fraction(8, 5)) * theta, zero
            )
    k = len(cp.rho_cycles)
    for i, cyc in enumerate(cp.rho_cycles, start=1):
        q = len(cyc)
        omega = Fraction(1, n * n * (7 * q - 1))
        base = Fraction(i - 1, k)
        for m, x in enumerate(cyc):
            prev = cyc[m - 1]
            mpos[prev - 1] = circle(base + 7 * m * omega, zero)  # A_prev
            mpos[n + x - 1] = circle(base + (7 * m + 4) * omega, zero)  # B_x
            mpos[2 * n + x - 1] = circle(  # C_x
                base + (7 * m + 6) * omega,
                Value.rational(Fraction(4) ** x),
            )
            wpref[x - 1] = tilted(base + (7 * m + 4 + nudge) * omega)  # a_x
            wpref[n + x - 1] = circle(base + (7 * m + Fraction(8, 5)) * omega, zero)
            wpref[2 * n + x - 1] = circle(
                base + (7 * m + Fraction(14, 3)) * omega, zero
            )
    return AttributeSpec(3, size, tuple(mpos), tuple(mpref), tuple(wpos), tuple(wpref))


def gen_2euclidean(graph: BipartiteGraph) -> EuclideanSpec:
    """Realize the construction with 2-dimensional Euclidean distances.

    All coordinates are rational: the a/c women and their suitors sit on
    the x-axis in per-vertex runs, b-women mirror the runs on the y-axis,
    B-men's ideal points sit 1000^n up so their ranking of b-women is by
    y-coordinate, and A-men's ideal points drop by eps = 1/100^n to break
    the a-versus-b symmetry the right way.

    Every ideal point lying on the x-axis additionally moves right by
    eps/7.  Those landing exactly on a grid point (A, B, a and c) would
    otherwise be equidistant from their two grid neighbours, and the
    off-grid ones (C and b) can hit a Pythagorean coincidence where an
    axis candidate at distance d and a y-axis candidate at height u
    satisfy (X - d)^2 = X^2 + u^2 exactly.  The shift is smaller than
    eps, far below every squared-distance margin in the analysis, and
    its denominator (7 against a base-10 grid and powers of 100) cannot
    produce a new exact tie: clearing denominators in any tie equation
    leaves a multiple of (7/5) * 100^n equal to a number bounded by 6n.
    """
    cp = edge_cycles(graph)
    n = cp.n
    eps = Fraction(1, 100**n)
    nudge = eps / 7
    big = Fraction(1000**n)
    zero = Fraction(0)
    size = 3 * n
    wpos = [None] * size
    mpref = [None] * size
    mpos = [None] * size
    wpref = [None] * size

    offset = 0
    for cyc in cp.sigma_cycles:
        p = len(cyc)
        for h, x in enumerate(cyc):
            prev = cyc[h - 1]
            s = offset + h + 1
            wpos[x - 1] = (Fraction(s), zero)  # a_x
            wpos[n + cp.rho[x - 1] - 1] = (zero, Fraction(s))  # b_{rho x}
            wpos[2 * n + prev - 1] = (s - Fraction(7, 10), zero)  # c_prev
            mpref[x - 1] = (s + nudge, s - eps)  # A_x
            mpref[n + x - 1] = (s + nudge, big)  # B_x
            mpref[2 * n + prev - 1] = (s - Fraction(4, 10) + nudge, zero)  # C_prev
        offset += 2 * p
    offset = 0
    for cyc in cp.rho_cycles:
        q = len(cyc)
        for h, x in enumerate(cyc):
            prev = cyc[h - 1]
            t = offset + h + 1
            mpos[prev - 1] = (t - Fraction(7, 10), zero)  # A_prev
            mpos[n + x - 1] = (Fraction(t), zero)  # B_x
            mpos[2 * n + x - 1] = (zero, Fraction(t))  # C_x
            wpref[x - 1] = (t + nudge, big)  # a_x
            wpref[n + x - 1] = (t - Fraction(4, 10) + nudge, zero)  # b_x
            wpref[2 * n + x - 1] = (t + nudge, t - eps)  # c_x
        offset += 2 * q
    return EuclideanSpec(2, size, tuple(mpos), tuple(mpref), tuple(wpos), tuple(wpref))


def read_tau(inst: Instance) -> tuple[int, ...]:
    """Recover the b-block permutation from a generated instance: any
    B-man ranks the n b-women first, as b_tau(n) .. b_tau(1)."""
    n = inst.n // 3
    first = inst.men_prefs[n]  # man B_1
    block = [w - n for w in first[:n]]
    if sorted(block) != list(range(1, n + 1)):
        raise ValueError("instance does not start with a b-block")
    return tuple(reversed(block))


# -- the verifier ------------------------------------------------------


@dataclass(frozen=True)
class ReductionReport:
    male_optimal_ok: bool
    female_optimal_ok: bool
    rotation_forms_ok: bool
    poset_isomorphic_ok: bool
    counts_equal: bool
    is_count: int
    sm_count: int
    details: str

    @property
    def all_ok(self) -> bool:
        return (
            self.male_optimal_ok
            and self.female_optimal_ok
            and self.rotation_forms_ok
            and self.poset_isomorphic_ok
            and self.counts_equal
        )

    def __str__(self) -> str:
        def mark(ok: bool) -> str:
            return "pass" if ok else "FAIL"

        lines = [
            f"male_optimal:     {mark(self.male_optimal_ok)}",
            f"female_optimal:   {mark(self.female_optimal_ok)}",
            f"rotation_forms:   {mark(self.rotation_forms_ok)}",
            f"poset_isomorphic: {mark(self.poset_isomorphic_ok)}",
            f"counts_equal:     {mark(self.counts_equal)}",
            f"independent_sets: {self.is_count}",
            f"stable_matchings: {self.sm_count}",
        ]
        if self.details:
            lines.append(self.details)
        return "\n".join(lines)


def _classify_rotation(rot: Rotation, n: int, cp: CyclePair):
    """Identify a rotation of a generated instance.

    Returns ("rho", cycle index) for {(A_x,a_x),(B_x,b_x): x in a
    rho-cycle}, ("sigma", cycle index) for {(B_x,a_x),(C_x,c_x): x in a
    sigma-cycle}, or None.
    """
    pairs = set(rot.pairs)
    for idx, cyc in enumerate(cp.rho_cycles):
        want = set()
        for x in cyc:
            want.add((x, x))  # (A_x, a_x)
            want.add((n + x, n + x))  # (B_x, b_x)
        if pairs == want:
            return ("rho", idx)
    for idx, cyc in enumerate(cp.sigma_cycles):
        want = set()
        for x in cyc:
            want.add((n + x, x))  # (B_x, a_x)
            want.add((2 * n + x, 2 * n + x))  # (C_x, c_x)
        if pairs == want:
            return ("sigma", idx)
    return None


def build_instance(graph: BipartiteGraph, model: str, tau=None) -> Instance:
    """Build the instance for G via the chosen route: "lists", "attr3",
    or "euclid2"."""
    if model == "lists":
        return gen_partial_lists(graph, tau)
    if model == "attr3":
        return induced_instance(gen_3attribute(graph))
    if model == "euclid2":
        return induced_instance(gen_2euclidean(graph))
    raise ValueError(f"unknown model {model!r}")


def verify_reduction(graph: BipartiteGraph, model: str = "lists") -> ReductionReport:
    """Check every structural claim of the reduction on a concrete graph."""
    cp = edge_cycles(graph)
    n = cp.n
    inst = build_instance(graph, model)
    problems = []

    mopt = propose_optimal(inst, Side.MAN)
    expect_m = Matching(tuple(range(1, 3 * n + 1)))  # everyone with their namesake
    male_ok = mopt == expect_m
    if not male_ok:
        problems.append(f"male-optimal differs: {mopt.pairs()}")

    wopt = propose_optimal(inst, Side.WOMAN)
    wives = [0] * (3 * n)
    for x in range(1, n + 1):
        wives[x - 1] = n + cp.rho[x - 1]  # A_x with b_{rho x}
        wives[n + x - 1] = 2 * n + x  # B_x with c_x
        wives[2 * n + x - 1] = cp.sigma[x - 1]  # C_x with a_{sigma x}
    female_ok = wopt == Matching(tuple(wives))
    if not female_ok:
        problems.append(f"female-optimal differs: {wopt.pairs()}")

    rposet = rotation_poset(inst)
    kinds = {}
    forms_ok = True
    for i, rot in enumerate(rposet.rotations):
        kind = _classify_rotation(rot, n, cp)
        if kind is None:
            forms_ok = False
            problems.append(f"unrecognized rotation {rot.pairs}")
        else:
            kinds[i] = kind
    expected = {("rho", i) for i in range(len(cp.rho_cycles))}
    expected |= {("sigma", i) for i in range(len(cp.sigma_cycles))}
    if forms_ok and set(kinds.values()) != expected:
        forms_ok = False
        problems.append("rotation multiset does not cover every vertex exactly once")

    iso_ok = forms_ok
    if forms_ok:
        got_edges = set()
        for i, j in hasse_diagram(rposet):
            ki, kj = kinds[i], kinds[j]
            if ki[0] == "rho" and kj[0] == "sigma":
                got_edges.add((cp.rho_vertices[ki[1]], cp.sigma_vertices[kj[1]]))
            else:
                iso_ok = False
                problems.append(f"cover edge {ki}->{kj} is not rho->sigma")
        if got_edges != set(graph.edges):
            iso_ok = False
            problems.append(f"Hasse edges {sorted(got_edges)} != graph edges")

    is_count = count_independent_sets(graph)
    sm_count = count_downsets(Poset.from_rotations(rposet))
    counts_ok = is_count == sm_count
    if not counts_ok:
        problems.append(f"counts differ: #IS={is_count} #SM={sm_count}")

    return ReductionReport(
        male_ok, female_ok, forms_ok, iso_ok, counts_ok,
        is_count, sm_count, "\n".join(problems),
    )

"""Deferred acceptance, stability checks, and the matching lattice."""

from __future__ import annotations

from collections import deque

from .core import Instance, Matching, Side


def propose_optimal(inst: Instance, side: Side = Side.MAN) -> Matching:
    """Run deferred acceptance with `side` proposing.

    Returns the matching that is optimal for the proposing side (and
    pessimal for the other).  The result is always indexed man -> woman.
    """
    if side is Side.WOMAN:
        return propose_optimal(inst.transposed(), Side.MAN).transposed()

    n = inst.n
    next_choice = [0] * (n + 1)  # next position on each man's list to try
    fiance = [0] * (n + 1)  # fiance[w] = current partner of woman w, 0 if free
    free = deque(range(1, n + 1))
    while free:
        m = free.popleft()
        w = inst.men_prefs[m - 1][next_choice[m]]
        next_choice[m] += 1
        current = fiance[w]
        if current == 0:
            fiance[w] = m
        elif inst.woman_rank(w, m) < inst.woman_rank(w, current):
            fiance[w] = m
            free.append(current)
        else:
            free.append(m)
    wives = [0] * n
    for w in range(1, n + 1):
        wives[fiance[w] - 1] = w
    return Matching(tuple(wives))


def blocking_pairs(inst: Instance, matching: Matching) -> list[tuple[int, int]]:
    """All pairs (m, w) where both prefer each other to their partners."""
    husbands = matching.husbands()
    out = []
    for m in range(1, inst.n + 1):
        spouse_rank = inst.man_rank(m, matching.wife(m))
        for w in inst.men_prefs[m - 1]:
            if inst.man_rank(m, w) >= spouse_rank:
                break
            if inst.woman_rank(w, m) < inst.woman_rank(w, husbands[w - 1]):
                out.append((m, w))
    return out


def is_stable(inst: Instance, matching: Matching) -> bool:
    return not blocking_pairs(inst, matching)


def lattice_meet_join(
    inst: Instance, a: Matching, b: Matching
) -> tuple[Matching, Matching]:
    """The (max, min) of two stable matchings in the matching lattice.

    Stable matchings form a distributive lattice whose minimum is the
    man-optimal matching.  The max pairs every man with the wife he likes
    less of his two (equivalently, every woman with the husband she
    prefers); the min pairs him with the other one.  Both outputs are
    stable; the inputs must be, and are checked.
    """
    if blocking_pairs(inst, a) or blocking_pairs(inst, b):
        raise ValueError("lattice operations require stable matchings")
    max_wives = []
    min_wives = []
    for m in range(1, inst.n + 1):
        wa, wb = a.wife(m), b.wife(m)
        if inst.man_rank(m, wa) <= inst.man_rank(m, wb):
            min_wives.append(wa)
            max_wives.append(wb)
        else:
            min_wives.append(wb)
            max_wives.append(wa)
    return Matching(tuple(max_wives)), Matching(tuple(min_wives))

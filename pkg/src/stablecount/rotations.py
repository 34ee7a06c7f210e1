"""Rotations of stable matchings and the rotation poset.

A rotation is a cyclic list of (man, woman) pairs exposed in some stable
matching: shifting every man to the next woman in the cycle gives another
stable matching in which the women are happier and the men worse off.
Repeatedly eliminating exposed rotations walks from the man-optimal
matching to the woman-optimal one, discovering every rotation exactly once
regardless of the order choices made along the way.  The rotations ordered
by "must be eliminated earlier" form a poset whose downsets correspond
one-to-one with the stable matchings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Instance, Matching, ParseError, _content_lines
from .gale_shapley import propose_optimal
from .core import Side


@dataclass(frozen=True)
class Rotation:
    """A cyclic sequence of matched pairs, stored with the smallest man first."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if len(self.pairs) < 2:
            raise ValueError("a rotation involves at least two pairs")
        men = [m for m, _ in self.pairs]
        if len(set(men)) != len(men):
            raise ValueError("rotation repeats a man")
        start = men.index(min(men))
        canon = self.pairs[start:] + self.pairs[:start]
        object.__setattr__(self, "pairs", tuple(canon))

    def __len__(self) -> int:
        return len(self.pairs)

    def men(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self.pairs)

    def women(self) -> tuple[int, ...]:
        return tuple(w for _, w in self.pairs)

    def next_woman(self, m: int) -> int:
        """The woman m moves to when this rotation is applied."""
        for idx, (mi, _) in enumerate(self.pairs):
            if mi == m:
                return self.pairs[(idx + 1) % len(self.pairs)][1]
        raise ValueError(f"man {m} not in rotation")


def suitor(inst: Instance, matching: Matching, m: int) -> int | None:
    """The first woman below m's spouse on his list who prefers m to her
    current husband, or None if no such woman exists.

    The scan skips women who rank m above their best stable partner: no
    rotation can ever form such a pair, and ignoring them guarantees that
    a man already holding his worst stable partner has no suitor (in
    particular nobody has one in the woman-optimal matching) and that a
    suitor's current husband has a suitor of his own.
    """
    final = propose_optimal(inst, Side.WOMAN)
    if matching.wife(m) == final.wife(m):
        return None
    husbands = matching.husbands()
    best = final.husbands()
    prefs = inst.men_prefs[m - 1]
    wrank = inst._women_rank
    start = inst.man_rank(m, matching.wife(m))  # spouse is at position start
    for w in prefs[start:]:
        r = wrank[w - 1][m - 1]
        if r < wrank[w - 1][husbands[w - 1] - 1] and r >= wrank[w - 1][best[w - 1] - 1]:
            return w
    return None


def exposed_rotation_from(inst: Instance, matching: Matching, m: int) -> Rotation:
    """Trace the rotation exposed in `matching` reachable from man m.

    Starting from (m, wife(m)), repeatedly step to the current man's suitor
    and her husband until a woman repeats; the pairs from her first
    occurrence onward form the rotation.
    """
    husbands = matching.husbands()
    seq: list[tuple[int, int]] = [(m, matching.wife(m))]
    seen = {matching.wife(m): 0}
    while True:
        w = suitor(inst, matching, seq[-1][0])
        if w is None:
            raise ValueError(f"man {seq[-1][0]} has no suitor; chain broke")
        if w in seen:
            return Rotation(tuple(seq[seen[w]:]))
        seen[w] = len(seq)
        seq.append((husbands[w - 1], w))


def apply_rotation(matching: Matching, rotation: Rotation) -> Matching:
    """Shift every man in the rotation to the next woman in the cycle."""
    wives = list(matching.wives)
    k = len(rotation.pairs)
    for idx, (m, w) in enumerate(rotation.pairs):
        if matching.wife(m) != w:
            raise ValueError(f"rotation pair ({m},{w}) not matched")
        wives[m - 1] = rotation.pairs[(idx + 1) % k][1]
    return Matching(tuple(wives))


def find_all_rotations(
    inst: Instance, man_order: tuple[int, ...] | None = None
) -> tuple[list[Rotation], list[Matching]]:
    """Discover every rotation of the instance, in elimination order.

    Walks from the man-optimal to the woman-optimal matching, each step
    eliminating the rotation reachable from the first man (in `man_order`,
    default ascending) who currently has a suitor.  Returns the rotations
    plus the matchings along the walk (one more than the rotations,
    starting man-optimal and ending woman-optimal).  The discovery order
    is a linear extension of the rotation poset.
    """
    n = inst.n
    order = man_order if man_order is not None else tuple(range(1, n + 1))
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError("man_order must be a permutation of 1..n")
    wives = list(propose_optimal(inst, Side.MAN).wives)
    final = propose_optimal(inst, Side.WOMAN).wives
    husbands = [0] * (n + 1)
    for m, w in enumerate(wives, start=1):
        husbands[w] = m
    best = [0] * (n + 1)  # best[w] = w's partner in the woman-optimal matching
    for m, w in enumerate(final, start=1):
        best[w] = m
    men_prefs = inst.men_prefs
    mrank = inst._men_rank
    wrank = inst._women_rank

    def find_suitor(m: int) -> int | None:
        if wives[m - 1] == final[m - 1]:
            return None
        prefs = men_prefs[m - 1]
        row = wrank
        for w in prefs[mrank[m - 1][wives[m - 1] - 1]:]:
            r = row[w - 1]
            if r[m - 1] < r[husbands[w] - 1] and r[m - 1] >= r[best[w] - 1]:
                return w
        return None

    rotations: list[Rotation] = []
    matchings = [Matching(tuple(wives))]
    while True:
        progressed = False
        for m in order:
            if wives[m - 1] == final[m - 1]:
                continue  # already at his final partner; never moves again
            w0 = find_suitor(m)
            if w0 is None:
                continue
            # trace the rotation from m
            seq = [(m, wives[m - 1])]
            seen = {wives[m - 1]: 0}
            w = w0
            while w not in seen:
                seen[w] = len(seq)
                seq.append((husbands[w], w))
                w = find_suitor(husbands[w])
                assert w is not None
            rot = Rotation(tuple(seq[seen[w]:]))
            k = len(rot.pairs)
            for idx, (mi, wi) in enumerate(rot.pairs):
                nw = rot.pairs[(idx + 1) % k][1]
                wives[mi - 1] = nw
                husbands[nw] = mi
            rotations.append(rot)
            matchings.append(Matching(tuple(wives)))
            progressed = True
            break
        if not progressed:
            break
    if wives != list(final):
        raise AssertionError("rotation elimination did not reach woman-optimal")
    return rotations, matchings


def eliminated_pairs(inst: Instance, rotation: Rotation) -> list[tuple[int, int]]:
    """Pairs (m, w) ruled out of all later stable matchings by this rotation.

    Each woman w in the rotation trades her partner for one she prefers;
    every man she ranks between the two (new partner excluded, old partner
    included) loses any stable pair with her.
    """
    out = []
    k = len(rotation.pairs)
    for idx, (m_old, w) in enumerate(rotation.pairs):
        m_new = rotation.pairs[(idx - 1) % k][0]
        r_new = inst.woman_rank(w, m_new)
        r_old = inst.woman_rank(w, m_old)
        for m in inst.women_prefs[w - 1][r_new : r_old]:
            out.append((m, w))
    return out


def explicitly_precedes(inst: Instance, first: Rotation, second: Rotation) -> bool:
    """True if `first` eliminates a pair (m, w) and `second` moves m to a
    woman he likes less than w, forcing first before second in every
    elimination order."""
    if first == second:
        return False
    second_men = set(second.men())
    for m, w in eliminated_pairs(inst, first):
        if m in second_men:
            if inst.man_rank(m, second.next_woman(m)) > inst.man_rank(m, w):
                return True
    return False


@dataclass(frozen=True)
class RotationPoset:
    """Rotations in a fixed linear extension plus their partial order.

    ``below[i]`` is a bitmask over rotation indices j that must be
    eliminated before rotation i (the strict down-set of i, transitively
    closed).
    """

    rotations: tuple[Rotation, ...]
    below: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.rotations)

    def precedes(self, i: int, j: int) -> bool:
        return bool(self.below[j] >> i & 1)

    def relation_pairs(self) -> list[tuple[int, int]]:
        out = []
        for j, mask in enumerate(self.below):
            for i in range(len(self.rotations)):
                if mask >> i & 1:
                    out.append((i, j))
        return out


def rotation_poset(
    inst: Instance, man_order: tuple[int, ...] | None = None
) -> RotationPoset:
    rots, _ = find_all_rotations(inst, man_order)
    k = len(rots)
    direct = [0] * k  # direct[j]: mask of i explicitly preceding j
    men_sets = [set(r.men()) for r in rots]
    for i in range(k):
        elim = eliminated_pairs(inst, rots[i])
        for j in range(i + 1, k):  # discovery order is a linear extension
            mj = men_sets[j]
            for m, w in elim:
                if m in mj and inst.man_rank(m, rots[j].next_woman(m)) > inst.man_rank(m, w):
                    direct[j] |= 1 << i
                    break
    below = [0] * k
    for j in range(k):
        mask = direct[j]
        acc = mask
        for i in range(j):
            if mask >> i & 1:
                acc |= below[i]
        below[j] = acc
    return RotationPoset(tuple(rots), tuple(below))


def hasse_diagram(poset: RotationPoset) -> list[tuple[int, int]]:
    """Covering pairs (i, j) of the rotation order: i precedes j with no
    rotation strictly between."""
    k = len(poset)
    edges = []
    for j in range(k):
        mask = poset.below[j]
        for i in range(k):
            if not (mask >> i & 1):
                continue
            # i < j is a cover unless some c has i < c < j
            if not any(
                mask >> c & 1 and poset.below[c] >> i & 1 for c in range(k)
            ):
                edges.append((i, j))
    return edges


def hasse_dot(poset: RotationPoset) -> str:
    """The Hasse diagram in DOT format, nodes labelled by their pairs."""
    lines = ["digraph rotations {"]
    for i, rot in enumerate(poset.rotations):
        label = " ".join(f"({m},{w})" for m, w in rot.pairs)
        lines.append(f'  r{i} [label="{label}"];')
    for i, j in hasse_diagram(poset):
        lines.append(f"  r{i} -> r{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def truncated_lists(
    inst: Instance,
) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """Each person's preference list cut down to the span between their
    best and worst stable partners (inclusive).

    Returns (men_lists, women_lists).  Every stable pair lies inside these
    spans, so the truncation preserves the whole set of stable matchings.
    """
    mopt = propose_optimal(inst, Side.MAN)
    wopt = propose_optimal(inst, Side.WOMAN)
    men = []
    for m in range(1, inst.n + 1):
        lo = inst.man_rank(m, mopt.wife(m))
        hi = inst.man_rank(m, wopt.wife(m))
        men.append(inst.men_prefs[m - 1][lo - 1 : hi])
    women = []
    m_husb, w_husb = mopt.husbands(), wopt.husbands()
    for w in range(1, inst.n + 1):
        lo = inst.woman_rank(w, w_husb[w - 1])
        hi = inst.woman_rank(w, m_husb[w - 1])
        women.append(inst.women_prefs[w - 1][lo - 1 : hi])
    return tuple(men), tuple(women)


# -- textual format ----------------------------------------------------


def parse_rotation(text: str) -> list[Rotation]:
    """Parse ``rot k: (m1,w1) (m2,w2) ...`` lines."""
    out = []
    for lineno, line in _content_lines(text):
        head, sep, rest = line.partition(":")
        if not sep or not head.startswith("rot"):
            raise ParseError("expected 'rot k: (m,w) ...'", lineno)
        pairs = []
        for tok in rest.split():
            if not (tok.startswith("(") and tok.endswith(")")):
                raise ParseError(f"bad pair token {tok!r}", lineno)
            try:
                m, w = (int(x) for x in tok[1:-1].split(","))
            except ValueError:
                raise ParseError(f"bad pair token {tok!r}", lineno) from None
            pairs.append((m, w))
        try:
            out.append(Rotation(tuple(pairs)))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return out


def format_rotations(rots: list[Rotation]) -> str:
    lines = []
    for idx, rot in enumerate(rots, start=1):
        body = " ".join(f"({m},{w})" for m, w in rot.pairs)
        lines.append(f"rot {idx}: {body}")
    return "\n".join(lines) + "\n" if lines else ""

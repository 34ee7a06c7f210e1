import pytest

from stablecount import (
    Instance,
    Matching,
    ParseError,
    format_instance,
    format_matching,
    man,
    parse_instance,
    parse_matching,
    woman,
)


SMALL = """\
n 2
m 1: 1 2
m 2: 2 1
w 1: 2 1
w 2: 1 2
"""


def test_parse_smallest():
    inst = parse_instance("n 1\nm 1: 1\nw 1: 1\n")
    assert inst.n == 1
    assert inst.men_prefs == ((1,),)
    assert inst.women_prefs == ((1,),)


def test_parse_two_by_two():
    inst = parse_instance(SMALL)
    assert inst.n == 2
    assert inst.men_prefs == ((1, 2), (2, 1))
    assert inst.women_prefs == ((2, 1), (1, 2))


def test_parse_rejects_duplicate_entry():
    with pytest.raises(ParseError, match="permutation"):
        parse_instance("n 2\nm 1: 1 1\nm 2: 2 1\nw 1: 2 1\nw 2: 1 2\n")


def test_parse_rejects_missing_line():
    with pytest.raises(ParseError):
        parse_instance("n 2\nm 1: 1 2\nw 1: 2 1\nw 2: 1 2\n")


def test_parse_rejects_out_of_range():
    with pytest.raises(ParseError):
        parse_instance("n 1\nm 1: 2\nw 1: 1\n")


def test_parse_ignores_comments_and_blanks():
    text = "# a comment\n\nn 1\nm 1: 1  # trailing\nw 1: 1\n"
    assert parse_instance(text).n == 1


def test_format_round_trip():
    inst = parse_instance(SMALL)
    assert parse_instance(format_instance(inst)) == inst


def test_rank_reads_off_list():
    inst = Instance(2, ((1, 2), (2, 1)), ((2, 1), (1, 2)))
    assert inst.man_rank(1, 2) == 2
    assert inst.man_rank(1, 1) == 1
    assert inst.woman_rank(1, 2) == 1
    assert inst.rank(man(2), 2) == 1
    assert inst.rank(woman(2), 1) == 1


def test_prefers_follows_list_order():
    inst = Instance(3, ((3, 1, 2),) * 3, ((1, 2, 3),) * 3)
    assert inst.prefers(man(1), 3, 1)
    assert not inst.prefers(man(1), 2, 3)


def test_prefers_antisymmetry():
    inst = Instance(3, ((3, 1, 2),) * 3, ((2, 3, 1),) * 3)
    for p in inst.people():
        for a in range(1, 4):
            for b in range(1, 4):
                if a != b:
                    assert inst.prefers(p, a, b) != inst.prefers(p, b, a)


def test_transposed_swaps_sides():
    inst = parse_instance(SMALL)
    t = inst.transposed()
    assert t.men_prefs == inst.women_prefs
    assert t.transposed() == inst


def test_matching_accessors():
    m = Matching((2, 1))
    assert m.wife(1) == 2
    assert m.husband(1) == 2
    assert m.husbands() == (2, 1)
    assert m.pairs() == ((1, 2), (2, 1))
    assert m.transposed() == Matching((2, 1))
    assert Matching.from_pairs(2, [(2, 1), (1, 2)]) == m


def test_matching_rejects_non_bijection():
    with pytest.raises(ValueError):
        Matching((1, 1))


def test_matching_parse_format():
    m = parse_matching("pair 1 2\npair 2 1\n", n=2)
    assert m == Matching((2, 1))
    assert parse_matching(format_matching(m)) == m


def test_matching_parse_rejects_incomplete():
    with pytest.raises(ParseError):
        parse_matching("pair 1 2\n", n=2)

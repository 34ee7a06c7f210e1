"""Core types for stable marriage instances.

An instance has n men and n women, identified by 1-based indices.  Every
person ranks the whole opposite side; preference lists are permutations of
1..n with the most preferred partner first.  Rank tables are precomputed so
"does m prefer w to w'?" is O(1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence


class ParseError(ValueError):
    """Malformed textual input; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Side(enum.Enum):
    MAN = "m"
    WOMAN = "w"

    @property
    def other(self) -> "Side":
        return Side.WOMAN if self is Side.MAN else Side.MAN


class PersonId(NamedTuple):
    side: Side
    index: int  # 1-based

    def __str__(self) -> str:
        return f"{self.side.value}{self.index}"


def man(i: int) -> PersonId:
    return PersonId(Side.MAN, i)


def woman(j: int) -> PersonId:
    return PersonId(Side.WOMAN, j)


def _check_prefs(prefs: tuple[tuple[int, ...], ...], n: int, label: str) -> None:
    if len(prefs) != n:
        raise ValueError(f"expected {n} {label} preference lists, got {len(prefs)}")
    full = frozenset(range(1, n + 1))
    for i, lst in enumerate(prefs, start=1):
        if len(lst) != n or set(lst) != full:
            raise ValueError(
                f"{label} {i}: preference list must be a permutation of 1..{n}"
            )


def _rank_tables(prefs: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    # rank[i-1][j-1] = 1-based position of person j on i's list
    tables = []
    for lst in prefs:
        row = [0] * len(lst)
        for pos, j in enumerate(lst, start=1):
            row[j - 1] = pos
        tables.append(tuple(row))
    return tuple(tables)


@dataclass(frozen=True)
class Instance:
    """An n-by-n stable marriage instance with complete preference lists."""

    n: int
    men_prefs: tuple[tuple[int, ...], ...]
    women_prefs: tuple[tuple[int, ...], ...]
    _men_rank: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _women_rank: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("instance needs at least one person per side")
        men = tuple(tuple(p) for p in self.men_prefs)
        women = tuple(tuple(p) for p in self.women_prefs)
        _check_prefs(men, self.n, "man")
        _check_prefs(women, self.n, "woman")
        object.__setattr__(self, "men_prefs", men)
        object.__setattr__(self, "women_prefs", women)
        object.__setattr__(self, "_men_rank", _rank_tables(men))
        object.__setattr__(self, "_women_rank", _rank_tables(women))

    # -- rank / preference queries ------------------------------------

    def man_rank(self, m: int, w: int) -> int:
        """1-based position of woman w on man m's list."""
        return self._men_rank[m - 1][w - 1]

    def woman_rank(self, w: int, m: int) -> int:
        return self._women_rank[w - 1][m - 1]

    def rank(self, person: PersonId, candidate: int) -> int:
        if person.side is Side.MAN:
            return self.man_rank(person.index, candidate)
        return self.woman_rank(person.index, candidate)

    def prefers(self, person: PersonId, a: int, b: int) -> bool:
        """True if `person` ranks candidate a strictly above candidate b."""
        return self.rank(person, a) < self.rank(person, b)

    def transposed(self) -> "Instance":
        """The same market with the roles of men and women swapped."""
        return Instance(self.n, self.women_prefs, self.men_prefs)

    def people(self) -> Iterator[PersonId]:
        for i in range(1, self.n + 1):
            yield man(i)
        for j in range(1, self.n + 1):
            yield woman(j)


@dataclass(frozen=True, order=True)
class Matching:
    """A perfect matching, stored as the wife of each man (1-based)."""

    wives: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.wives)
        if sorted(self.wives) != list(range(1, n + 1)):
            raise ValueError("matching must pair every man with a distinct woman")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Matching":
        wives = [0] * n
        for m, w in pairs:
            if not (1 <= m <= n and 1 <= w <= n):
                raise ValueError(f"pair ({m},{w}) out of range 1..{n}")
            if wives[m - 1]:
                raise ValueError(f"man {m} matched twice")
            wives[m - 1] = w
        return cls(tuple(wives))

    @property
    def n(self) -> int:
        return len(self.wives)

    def wife(self, m: int) -> int:
        return self.wives[m - 1]

    def husband(self, w: int) -> int:
        return self.wives.index(w) + 1

    def husbands(self) -> tuple[int, ...]:
        out = [0] * self.n
        for m, w in enumerate(self.wives, start=1):
            out[w - 1] = m
        return tuple(out)

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((m, w) for m, w in enumerate(self.wives, start=1))

    def transposed(self) -> "Matching":
        return Matching(self.husbands())


# -- textual formats ---------------------------------------------------


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_instance(text: str) -> Instance:
    """Parse an instance.

    Format: a header line ``n N``, then one line per person,
    ``m i: w1 w2 ... wN`` / ``w j: m1 m2 ... mN``.  ``#`` starts a comment;
    blank lines are ignored.
    """
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty input") from None
    parts = header.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
        raise ParseError("expected header 'n N'", lineno)
    n = int(parts[1])
    if n < 1:
        raise ParseError("n must be positive", lineno)

    men: dict[int, tuple[int, ...]] = {}
    women: dict[int, tuple[int, ...]] = {}
    for lineno, line in lines:
        head, sep, rest = line.partition(":")
        fields = head.split()
        if not sep or len(fields) != 2 or fields[0] not in ("m", "w"):
            raise ParseError("expected 'm i: ...' or 'w j: ...'", lineno)
        try:
            idx = int(fields[1])
            prefs = tuple(int(tok) for tok in rest.split())
        except ValueError:
            raise ParseError("indices must be integers", lineno) from None
        if not 1 <= idx <= n:
            raise ParseError(f"person index {idx} out of range 1..{n}", lineno)
        target = men if fields[0] == "m" else women
        if idx in target:
            raise ParseError(f"duplicate list for {fields[0]} {idx}", lineno)
        if sorted(prefs) != list(range(1, n + 1)):
            raise ParseError(
                f"preference list must be a permutation of 1..{n}", lineno
            )
        target[idx] = prefs

    missing = [f"m {i}" for i in range(1, n + 1) if i not in men]
    missing += [f"w {j}" for j in range(1, n + 1) if j not in women]
    if missing:
        raise ParseError(f"missing preference lists: {', '.join(missing)}")
    return Instance(
        n,
        tuple(men[i] for i in range(1, n + 1)),
        tuple(women[j] for j in range(1, n + 1)),
    )


def format_instance(inst: Instance) -> str:
    out = [f"n {inst.n}"]
    for i, lst in enumerate(inst.men_prefs, start=1):
        out.append(f"m {i}: " + " ".join(map(str, lst)))
    for j, lst in enumerate(inst.women_prefs, start=1):
        out.append(f"w {j}: " + " ".join(map(str, lst)))
    return "\n".join(out) + "\n"


def parse_matching(text: str, n: int | None = None) -> Matching:
    """Parse a matching given as ``pair m w`` lines."""
    pairs = []
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 3 or parts[0] != "pair":
            raise ParseError("expected 'pair m w'", lineno)
        try:
            pairs.append((int(parts[1]), int(parts[2])))
        except ValueError:
            raise ParseError("indices must be integers", lineno) from None
    size = n if n is not None else len(pairs)
    try:
        return Matching.from_pairs(size, pairs)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_matching(matching: Matching) -> str:
    return "".join(f"pair {m} {w}\n" for m, w in matching.pairs())

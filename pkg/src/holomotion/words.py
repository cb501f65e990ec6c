"""Free-group word algebra over loop generators around finite punctures.

Words live in the free group F_{n+2} on generators g0, ..., g_{n+1}, where
g_j is the counterclockwise loop around the j-th finite puncture of a sphere
configuration.  The loop around infinity is the inverse of the ordered
product g0 g1 ... g_{n+1}; filling the puncture at infinity therefore
imposes that product as a relation.

All values are immutable and all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence


class Letter(NamedTuple):
    """A single generator occurrence: generator index and sign (+1 or -1)."""

    index: int
    sign: int


@dataclass(frozen=True)
class Word:
    """Element of the free group of the given rank, as a letter sequence.

    The empty sequence is the identity.  Words are not required to be
    reduced; use :func:`reduce_word` for the normal form.
    """

    rank: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        for let in self.letters:
            if not 0 <= let.index < self.rank:
                raise ValueError(
                    f"letter index {let.index} outside rank {self.rank}"
                )
            if let.sign not in (-1, 1):
                raise ValueError(f"letter sign must be +-1, got {let.sign}")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        _check_ranks(self, other)
        return Word(self.rank, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(
            self.rank,
            tuple(Letter(l.index, -l.sign) for l in reversed(self.letters)),
        )

    def is_identity(self) -> bool:
        return not reduce_word(self).letters

    def __str__(self) -> str:
        return format_word(self)


def identity(rank: int) -> Word:
    return Word(rank)


def generator(rank: int, index: int, sign: int = 1) -> Word:
    return Word(rank, (Letter(index, sign),))


def _check_ranks(a: Word, b: Word) -> None:
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} != {b.rank}")


def reduce_word(w: Word) -> Word:
    """Free reduction: cancel adjacent inverse pairs until none remain.

    Single stack pass, linear time.  Idempotent, never increases length.
    """
    stack: list[Letter] = []
    for let in w.letters:
        if stack and stack[-1].index == let.index and stack[-1].sign == -let.sign:
            stack.pop()
        else:
            stack.append(let)
    return Word(w.rank, tuple(stack))


def is_trivial(w: Word) -> bool:
    """True iff the reduced form of w is the empty word."""
    return not reduce_word(w).letters


def commutator(a: Word, b: Word) -> Word:
    """reduce(a b a^-1 b^-1); ranks must agree."""
    _check_ranks(a, b)
    return reduce_word(a * b * a.inverse() * b.inverse())


def delete_generator(w: Word, index: int) -> Word:
    """Remove every occurrence of the given generator, then reduce.

    Models filling the finite puncture encircled by that generator: its
    loop becomes null-homotopic, so the induced map on words erases it.
    """
    if not 0 <= index < w.rank:
        raise ValueError(f"generator index {index} outside rank {w.rank}")
    kept = tuple(l for l in w.letters if l.index != index)
    return reduce_word(Word(w.rank, kept))


def substitute_relation(w: Word, alive: Sequence[int]) -> Word:
    """Impose (ordered product of alive generators) = identity on w.

    Solves the relation for the largest alive index m, substituting
    g_m := (product of the remaining alive generators, in index order)^-1,
    then reduces.  The result uses only alive indices below m, so it lives
    in the free group on those generators (embedded at the original rank).
    """
    alive_sorted = sorted(set(alive))
    if not alive_sorted:
        raise ValueError("alive generator set is empty")
    target = alive_sorted[-1]
    rest = alive_sorted[:-1]
    replacement_pos = tuple(Letter(j, -1) for j in reversed(rest))
    replacement_neg = tuple(Letter(j, 1) for j in rest)
    out: list[Letter] = []
    for let in w.letters:
        if let.index == target:
            out.extend(replacement_pos if let.sign > 0 else replacement_neg)
        else:
            out.append(let)
    return reduce_word(Word(w.rank, tuple(out)))


def fill_infinity(w: Word) -> Word:
    """Fill the puncture at infinity: impose g0 g1 ... g_{rank-1} = identity.

    Substitutes the top generator g_{rank-1} by the inverse of the product
    of the others and reduces; the result lives in the free group of rank
    one less (returned with rank reduced accordingly).
    """
    if w.rank == 1:
        # relation g0 = identity: everything collapses
        return Word(1)
    filled = substitute_relation(w, range(w.rank))
    return Word(w.rank - 1, filled.letters)


def exponent_sums(w: Word) -> tuple[int, ...]:
    """Abelianization: signed occurrence count per generator index."""
    sums = [0] * w.rank
    for let in w.letters:
        sums[let.index] += let.sign
    return tuple(sums)


def parse_word(text: str, rank: int) -> Word:
    """Parse whitespace-separated tokens `g<j>` / `g<j>^-1` into a Word."""
    letters: list[Letter] = []
    for token in text.split():
        body, sep, power = token.partition("^")
        if not body.startswith("g"):
            raise ValueError(f"bad token {token!r}: expected g<j> or g<j>^-1")
        try:
            index = int(body[1:])
        except ValueError:
            raise ValueError(f"bad token {token!r}: generator index not an integer")
        if sep and power != "-1":
            raise ValueError(f"bad token {token!r}: only ^-1 is supported")
        if not 0 <= index < rank:
            raise ValueError(f"token {token!r} outside rank {rank}")
        letters.append(Letter(index, -1 if sep else 1))
    return Word(rank, tuple(letters))


def format_word(w: Word) -> str:
    """Inverse of :func:`parse_word`; the identity prints as ''."""
    return " ".join(
        f"g{l.index}" if l.sign > 0 else f"g{l.index}^-1" for l in w.letters
    )


def build_chirka_word(n: int = 0) -> Word:
    """The commutator g1 g0 g1^-1 g0^-1 at rank n+2.

    Nontrivial, with zero exponent sums: its trace loop winds zero net
    turns around every puncture yet is not null-homotopic.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    rank = n + 2
    return commutator(generator(rank, 1), generator(rank, 0))


def build_trace_word(n: int) -> Word:
    """The nested-commutator word whose every single-generator deletion
    and whose infinity-filling are trivial, while the word itself is not.

    Construction: t_1 = [g0, g1], t_j = [g_j, t_{j-1}] for j = 2..n+1,
    b = g0 g1 ... g_{n+1}, and the result is [b, t_{n+1}].  Requires n >= 1;
    for n = 0 the commutator word from :func:`build_chirka_word` plays
    this role instead.
    """
    if n < 1:
        raise ValueError("n must be >= 1; use build_chirka_word for n = 0")
    rank = n + 2
    t = commutator(generator(rank, 0), generator(rank, 1))
    for j in range(2, n + 2):
        t = commutator(generator(rank, j), t)
    b = identity(rank)
    for j in range(rank):
        b = b * generator(rank, j)
    return commutator(b, t)


def words_from_letters(rank: int, pairs: Iterable[tuple[int, int]]) -> Word:
    """Convenience constructor from (index, sign) pairs."""
    return Word(rank, tuple(Letter(i, s) for i, s in pairs))

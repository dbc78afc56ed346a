"""Free words and the wreath-tower realisation of free solvable groups.

A free word is a tuple of nonzero signed letters (``+i`` for the i-th
generator, ``-i`` for its inverse), always freely reduced.  The level-``m``
image of a word is computed by a prefix scan over generator images:

* level 1 is abelianisation to the integer lattice;
* at level ``m >= 2`` the generator ``x_i`` maps to the wreath element with
  a single lamp ``e_i`` at the identity site and position equal to the
  level ``m - 1`` image of ``x_i``.

The scan realises the classical embedding of the rank-``d``, derived
length-``m`` free solvable group into  Z^d wr (level m-1); its kernel at
level ``m`` is the m-th derived subgroup.  A matrix-shaped implementation
(2x2 upper-triangular over the group ring) is provided as an independent
cross-check of the scan and is used by the tests.
"""

from __future__ import annotations

import re
from random import Random

from . import groups
from .groups import FreeSolvable, GroupElement, GroupError, IntegerLattice

FreeWord = tuple[int, ...]


class WordError(ValueError):
    """Malformed word text or out-of-range letters."""


# ---------------------------------------------------------------------------
# word utilities


def reduce_word(letters) -> FreeWord:
    return groups.reduce_letters(letters)


def invert_word(w: FreeWord) -> FreeWord:
    return tuple(-letter for letter in reversed(w))


def concat_words(u: FreeWord, v: FreeWord) -> FreeWord:
    i = len(u)
    j = 0
    while i > 0 and j < len(v) and u[i - 1] == -v[j]:
        i -= 1
        j += 1
    return u[:i] + v[j:]


_concat = concat_words


def commutator(u: FreeWord, v: FreeWord) -> FreeWord:
    return _concat(_concat(u, v), _concat(invert_word(u), invert_word(v)))


_TOKEN = re.compile(r"\s*(?:([xX])(\d+)(?:\^(-?\d+))?|(\[)|(\])|(,)|(\*)|(e))")
_POWER = re.compile(r"\s*\^(-?\d+)")


def parse_word(text: str, rank: int | None = None) -> FreeWord:
    """Parse word syntax: letters ``x1..xd``, inverses ``X1`` or ``x1^-1``,
    powers ``x2^3``, commutator brackets ``[u,v]`` (which may also carry a
    power, as in ``[x1,x2]^-1``), optional ``*`` and whitespace, and ``e``
    for the empty word."""

    pos = 0
    n = len(text)

    def parse_seq(depth: int) -> tuple[FreeWord, str | None]:
        nonlocal pos
        acc: FreeWord = ()
        while pos < n:
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if m is None:
                raise WordError(f"unexpected input at {text[pos:]!r}")
            pos = m.end()
            if m.group(1):
                index = int(m.group(2))
                if index < 1 or (rank is not None and index > rank):
                    raise WordError(f"letter index {index} out of range")
                letter = index if m.group(1) == "x" else -index
                power = int(m.group(3)) if m.group(3) else 1
                if m.group(1) == "X" and m.group(3):
                    raise WordError("write either X1 or x1^-1, not both")
                if power < 0:
                    letter, power = -letter, -power
                acc = _concat(acc, (letter,) * power)
            elif m.group(4):  # [
                u, stop = parse_inner()
                power_match = _POWER.match(text, pos)
                if power_match:
                    pos = power_match.end()
                    power = int(power_match.group(1))
                    if power < 0:
                        u, power = invert_word(u), -power
                    repeated: FreeWord = ()
                    for _ in range(power):
                        repeated = _concat(repeated, u)
                    u = repeated
                acc = _concat(acc, u)
            elif m.group(5):  # ]
                if depth == 0:
                    raise WordError("unbalanced ']'")
                return acc, "]"
            elif m.group(6):  # ,
                if depth == 0:
                    raise WordError("unexpected ','")
                return acc, ","
            elif m.group(7) or m.group(8):  # '*' or 'e'
                continue
        return acc, None

    def parse_inner() -> tuple[FreeWord, None]:
        nonlocal pos
        u, stop = parse_seq(1)
        if stop != ",":
            raise WordError("commutator needs two parts: [u,v]")
        v, stop = parse_seq(1)
        if stop != "]":
            raise WordError("unbalanced '['")
        return commutator(u, v), None

    word, stop = parse_seq(0)
    if stop is not None:
        raise WordError(f"unbalanced {stop!r}")
    if pos < n and text[pos:].strip():
        raise WordError(f"trailing input {text[pos:]!r}")
    return word


def word_to_text(w: FreeWord) -> str:
    if not w:
        return "e"
    return " ".join(f"x{letter}" if letter > 0 else f"X{-letter}" for letter in w)


# ---------------------------------------------------------------------------
# the level embedding


def sdm_spec(rank: int, length: int) -> FreeSolvable:
    return FreeSolvable(rank, length)


def abelianize_word(w: FreeWord, rank: int) -> tuple[int, ...]:
    vec = [0] * rank
    for letter in w:
        if abs(letter) > rank:
            raise WordError(f"letter {letter} out of range for rank {rank}")
        vec[abs(letter) - 1] += 1 if letter > 0 else -1
    return tuple(vec)


def generator_image(rank: int, length: int, letter: int) -> GroupElement:
    """Image of the single letter ``+-i`` at the given level."""
    if letter == 0 or abs(letter) > rank:
        raise WordError(f"letter {letter} out of range for rank {rank}")
    spec = sdm_spec(rank, length)
    i = abs(letter)
    if length == 1:
        vec = [0] * rank
        vec[i - 1] = 1 if letter > 0 else -1
        return tuple(vec)
    below = sdm_spec(rank, length - 1)
    e_i = tuple(1 if j == i - 1 else 0 for j in range(rank))
    positive = (((groups.identity(below), e_i),), generator_image(rank, length - 1, i))
    if letter > 0:
        return positive
    return groups.inverse(spec, positive)


def magnus_embed(w: FreeWord, rank: int, length: int) -> GroupElement:
    """Prefix-scan image of a reduced word at the given level."""
    spec = sdm_spec(rank, length)
    acc = groups.identity(spec)
    for letter in w:
        acc = groups.multiply(spec, acc, generator_image(rank, length, letter))
    return acc


def is_identity(w: FreeWord, rank: int, length: int) -> bool:
    """Whether the word maps to the identity at the given level."""
    return magnus_embed(w, rank, length) == groups.identity(sdm_spec(rank, length))


def sdm_multiply(rank: int, length: int, g: GroupElement,
                 h: GroupElement) -> GroupElement:
    return groups.multiply(sdm_spec(rank, length), g, h)


def sdm_inverse(rank: int, length: int, g: GroupElement) -> GroupElement:
    return groups.inverse(sdm_spec(rank, length), g)


# ---------------------------------------------------------------------------
# random words in the derived series


def random_reduced_word(rank: int, length: int, rng: Random) -> FreeWord:
    """A random nonempty reduced word of exactly ``length`` letters."""
    if length < 1:
        raise WordError("length must be >= 1")
    letters: list[int] = []
    alphabet = [i for i in range(-rank, rank + 1) if i]
    while len(letters) < length:
        letter = rng.choice(alphabet)
        if letters and letters[-1] == -letter:
            continue
        letters.append(letter)
    return tuple(letters)


def random_derived_series_word(rank: int, level: int, budget: int,
                               rng: Random, _attempts: int = 64) -> FreeWord:
    """A random nontrivial word in the ``level``-th derived subgroup.

    Level 0 is a plain reduced word of ``budget`` letters; level ``r`` is a
    commutator of two independent level ``r - 1`` words.  Such a word maps to
    the identity at embedding level ``r`` and generically survives at level
    ``r + 1``.
    """
    if level < 0:
        raise WordError("level must be >= 0")
    if budget < 2:
        raise WordError("budget must be >= 2 to build nontrivial commutators")
    if level == 0:
        return random_reduced_word(rank, budget, rng)
    for _ in range(_attempts):
        u = random_derived_series_word(rank, level - 1, budget, rng)
        v = random_derived_series_word(rank, level - 1, budget, rng)
        w = commutator(u, v)
        if w:
            return w
    raise WordError(f"could not build a nontrivial level-{level} word "
                    f"within {_attempts} attempts (budget {budget})")


# ---------------------------------------------------------------------------
# matrix-shaped cross-check
#
# The embedding can equally be written with 2x2 upper-triangular matrices
#     [[ pi(w), t ], [0, 1]]
# over the integral group ring of the level below, with the module T free on
# t_1 .. t_d.  The classes below implement that shape directly (group-ring
# vectors with explicit left translation) and are used in tests to
# cross-check the prefix scan.


class MagnusMatrix:
    """Upper-triangular matrix [[g, t], [0, 1]] over the level-below ring."""

    __slots__ = ("rank", "length", "g", "t")

    def __init__(self, rank: int, length: int, g: GroupElement,
                 t: dict[GroupElement, tuple[int, ...]]):
        self.rank = rank
        self.length = length
        self.g = g          # element of the level length-1 group
        self.t = t          # site -> integer coefficient vector (module element)

    @classmethod
    def identity(cls, rank: int, length: int) -> "MagnusMatrix":
        below = sdm_spec(rank, length - 1)
        return cls(rank, length, groups.identity(below), {})

    @classmethod
    def generator(cls, rank: int, length: int, letter: int) -> "MagnusMatrix":
        if letter == 0 or abs(letter) > rank:
            raise WordError(f"letter {letter} out of range for rank {rank}")
        below = sdm_spec(rank, length - 1)
        i = abs(letter)
        e_i = tuple(1 if j == i - 1 else 0 for j in range(rank))
        pi = magnus_embed((i,), rank, length - 1)
        if letter > 0:
            return cls(rank, length, pi, {groups.identity(below): e_i})
        # inverse matrix: [[g, t],[0,1]]^-1 = [[g^-1, -(g^-1 . t)],[0,1]]
        pi_inv = groups.inverse(below, pi)
        neg = tuple(-c for c in e_i)
        return cls(rank, length, pi_inv, {pi_inv: neg})

    def __matmul__(self, other: "MagnusMatrix") -> "MagnusMatrix":
        below = sdm_spec(self.rank, self.length - 1)
        # t_new = t + g . t'   (left translation of the module element)
        t_new = dict(self.t)
        for site, vec in other.t.items():
            moved = groups.multiply(below, self.g, site)
            cur = t_new.get(moved)
            if cur is None:
                t_new[moved] = vec
            else:
                summed = tuple(a + b for a, b in zip(cur, vec))
                if any(summed):
                    t_new[moved] = summed
                else:
                    del t_new[moved]
        return MagnusMatrix(self.rank, self.length,
                            groups.multiply(below, self.g, other.g), t_new)

    def as_wreath(self) -> GroupElement:
        """Reshape to the wreath normal form used by the prefix scan."""
        lamps = tuple(sorted(self.t.items()))
        return (lamps, self.g)


def matrix_embed(w: FreeWord, rank: int, length: int) -> MagnusMatrix:
    """Matrix-form image of a word (length >= 2)."""
    if length < 2:
        raise WordError("matrix form applies to levels >= 2")
    acc = MagnusMatrix.identity(rank, length)
    for letter in w:
        acc = acc @ MagnusMatrix.generator(rank, length, letter)
    return acc

"""Exact arithmetic and canonical normal forms for the lab's groups.

Every group is described by a small immutable spec value; elements are plain
hashable Python values (ints and nested tuples), so equality of elements is
structural equality of canonical forms.  All operations are pure functions
dispatching on the spec.

Conventions the rest of the package relies on:

* ``IntegerLattice(d)`` elements are length-``d`` int tuples.
* ``Cyclic(q)`` elements are residues in ``range(q)``.
* ``FreeGroup(r)`` elements are freely reduced words: tuples of nonzero
  letters ``+-1 .. +-r``.
* ``Dihedral`` elements are pairs ``(t, f)`` in the semidirect form
  ``Z x| Z/2``; the involution generator is ``a = (0, 1)`` and the reflection
  ``b = (1, 1)``, so ``(t, f)(u, g) = (t + (-1)**f * u, f ^ g)`` and the
  product ``a*b`` is the translation ``(-1, 0)``.
* ``BaumslagSolitar`` (the (1, -1) case) elements are pairs ``(m, n)``
  meaning ``a^m b^n`` with defining relation ``b a b^-1 = a^-1``, hence
  ``(m, n)(m', n') = (m + (-1)**n * m', n + n')``.
* ``Wreath(lamp, base)`` elements are ``(lamps, pos)``: ``lamps`` is a tuple
  of ``(site, value)`` pairs sorted by site, identity values never stored,
  sites are base elements and ``pos`` is a base element.
* ``FreeSolvable(r, 1)`` behaves exactly like ``IntegerLattice(r)``; for
  derived length ``m >= 2`` elements are wreath values with integer-vector
  lamps over level ``m - 1``.  Membership in the embedded subgroup is not a
  local property of the tuple, so ``validate`` only checks structure; the
  arithmetic never leaves the subgroup when inputs come from the embedding
  in :mod:`walklab.magnus`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from random import Random
from typing import Any, Iterable, Sequence, Union

GroupElement = Any


class GroupError(ValueError):
    """Invalid element for a spec, mismatched specs, or unsupported operation."""


class ClosureCapError(RuntimeError):
    """Bounded semigroup closure exceeded its configured size cap."""


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class IntegerLattice:
    """Z^dim under coordinatewise addition."""

    dim: int

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise GroupError(f"lattice dimension must be >= 1, got {self.dim}")


@dataclass(frozen=True)
class Cyclic:
    """Z/modulus under addition."""

    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise GroupError(f"cyclic modulus must be >= 2, got {self.modulus}")


@dataclass(frozen=True)
class FreeGroup:
    """Free group on ``rank`` generators; elements are reduced words."""

    rank: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise GroupError(f"free rank must be >= 1, got {self.rank}")


@dataclass(frozen=True)
class Dihedral:
    """The infinite dihedral group, generated by two involutions a, b."""


@dataclass(frozen=True)
class BaumslagSolitar:
    """The soluble Baumslag-Solitar group with relation b a b^-1 = a^-1."""


@dataclass(frozen=True)
class DirectProduct:
    left: "GroupSpec"
    right: "GroupSpec"


@dataclass(frozen=True)
class Wreath:
    """Restricted wreath product lamp wr base."""

    lamp: "GroupSpec"
    base: "GroupSpec"


@dataclass(frozen=True)
class FreeSolvable:
    """Free solvable group of given rank and derived length (level)."""

    rank: int
    length: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise GroupError(f"free solvable rank must be >= 1, got {self.rank}")
        if self.length < 1:
            raise GroupError(f"derived length must be >= 1, got {self.length}")


GroupSpec = Union[
    IntegerLattice,
    Cyclic,
    FreeGroup,
    Dihedral,
    BaumslagSolitar,
    DirectProduct,
    Wreath,
    FreeSolvable,
]

DINF = Dihedral()
BS11 = BaumslagSolitar()

#: Generators in the conventions documented above.
DINF_A = (0, 1)
DINF_B = (1, 1)
BS_A = (1, 0)
BS_B = (0, 1)


def wreath_tower(lamps: Sequence[GroupSpec], base: GroupSpec) -> GroupSpec:
    """Iterated wreath product; ``lamps`` are applied inner-to-outer.

    ``wreath_tower([], B)`` is ``B`` itself and ``wreath_tower([A], B)`` is
    ``Wreath(A, B)``; each further lamp wraps the tower built so far.
    """
    spec = base
    for lamp in lamps:
        spec = Wreath(lamp, spec)
    return spec


def wreath_parts(spec: GroupSpec) -> tuple[GroupSpec, GroupSpec]:
    """Lamp and base specs of a wreath-shaped spec (wreath or level >= 2)."""
    if isinstance(spec, Wreath):
        return spec.lamp, spec.base
    if isinstance(spec, FreeSolvable) and spec.length >= 2:
        return IntegerLattice(spec.rank), FreeSolvable(spec.rank, spec.length - 1)
    raise GroupError(f"{spec!r} is not wreath-shaped")


def tower_height(spec: GroupSpec) -> int:
    """Number of levels when the spec is read as an iterated wreath tower."""
    if isinstance(spec, Wreath):
        return 1 + tower_height(spec.base)
    if isinstance(spec, FreeSolvable):
        return spec.length
    return 1


def _base_spec(spec: GroupSpec) -> GroupSpec:
    if isinstance(spec, Wreath):
        return spec.base
    if isinstance(spec, FreeSolvable) and spec.length >= 2:
        return FreeSolvable(spec.rank, spec.length - 1)
    raise GroupError(f"{spec!r} has no base level")


# ---------------------------------------------------------------------------
# elementary operations


@lru_cache(maxsize=None)
def identity(spec: GroupSpec) -> GroupElement:
    t = type(spec)
    if t is IntegerLattice:
        return (0,) * spec.dim
    if t is Cyclic:
        return 0
    if t is FreeGroup:
        return ()
    if t is Dihedral:
        return (0, 0)
    if t is BaumslagSolitar:
        return (0, 0)
    if t is DirectProduct:
        return (identity(spec.left), identity(spec.right))
    if t is Wreath:
        return ((), identity(spec.base))
    if t is FreeSolvable:
        if spec.length == 1:
            return (0,) * spec.rank
        return ((), identity(_base_spec(spec)))
    raise GroupError(f"unknown spec {spec!r}")


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    """Freely reduce a sequence of nonzero signed letters."""
    out: list[int] = []
    for letter in letters:
        if letter == 0:
            raise GroupError("free-word letters must be nonzero")
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def _concat_reduced(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    i = len(u)
    j = 0
    while i > 0 and j < len(v) and u[i - 1] == -v[j]:
        i -= 1
        j += 1
    return u[:i] + v[j:]


def _wreath_multiply(lamp_spec: GroupSpec, base_spec: GroupSpec,
                     g: GroupElement, h: GroupElement) -> GroupElement:
    lamps_g, x = g
    lamps_h, y = h
    if lamps_h:
        lamp_id = identity(lamp_spec)
        merged = dict(lamps_g)
        for site, val in lamps_h:
            moved = multiply(base_spec, x, site)
            cur = merged.get(moved)
            if cur is None:
                merged[moved] = val
            else:
                prod = multiply(lamp_spec, cur, val)
                if prod == lamp_id:
                    del merged[moved]
                else:
                    merged[moved] = prod
        lamps = tuple(sorted(merged.items()))
    else:
        lamps = lamps_g
    return (lamps, multiply(base_spec, x, y))


def multiply(spec: GroupSpec, g: GroupElement, h: GroupElement) -> GroupElement:
    t = type(spec)
    if t is IntegerLattice:
        return tuple(a + b for a, b in zip(g, h))
    if t is Cyclic:
        return (g + h) % spec.modulus
    if t is FreeGroup:
        return _concat_reduced(g, h)
    if t is Dihedral:
        tg, fg = g
        th, fh = h
        return (tg - th if fg else tg + th, fg ^ fh)
    if t is BaumslagSolitar:
        mg, ng = g
        mh, nh = h
        return (mg - mh if ng & 1 else mg + mh, ng + nh)
    if t is DirectProduct:
        return (multiply(spec.left, g[0], h[0]), multiply(spec.right, g[1], h[1]))
    if t is Wreath:
        return _wreath_multiply(spec.lamp, spec.base, g, h)
    if t is FreeSolvable:
        if spec.length == 1:
            return tuple(a + b for a, b in zip(g, h))
        return _wreath_multiply(IntegerLattice(spec.rank),
                                FreeSolvable(spec.rank, spec.length - 1), g, h)
    raise GroupError(f"unknown spec {spec!r}")


def inverse(spec: GroupSpec, g: GroupElement) -> GroupElement:
    t = type(spec)
    if t is IntegerLattice:
        return tuple(-a for a in g)
    if t is Cyclic:
        return (-g) % spec.modulus
    if t is FreeGroup:
        return tuple(-letter for letter in reversed(g))
    if t is Dihedral:
        tg, fg = g
        return (tg, 1) if fg else (-tg, 0)
    if t is BaumslagSolitar:
        mg, ng = g
        return (mg if ng & 1 else -mg, -ng)
    if t is DirectProduct:
        return (inverse(spec.left, g[0]), inverse(spec.right, g[1]))
    if t is Wreath:
        lamp_spec, base_spec = spec.lamp, spec.base
    elif t is FreeSolvable:
        if spec.length == 1:
            return tuple(-a for a in g)
        lamp_spec, base_spec = wreath_parts(spec)
    else:
        raise GroupError(f"unknown spec {spec!r}")
    lamps, x = g
    xi = inverse(base_spec, x)
    moved = [(multiply(base_spec, xi, site), inverse(lamp_spec, val))
             for site, val in lamps]
    return (tuple(sorted(moved)), xi)


def act_on_lamps(spec: GroupSpec, x: GroupElement, lamps: tuple) -> tuple:
    """Left translation action of a base element on a lamp configuration."""
    _, base_spec = wreath_parts(spec)
    return tuple(sorted((multiply(base_spec, x, site), val) for site, val in lamps))


def conjugate(spec: GroupSpec, g: GroupElement, h: GroupElement) -> GroupElement:
    """g h g^-1."""
    return multiply(spec, multiply(spec, g, h), inverse(spec, g))


def commutator_of(spec: GroupSpec, g: GroupElement, h: GroupElement) -> GroupElement:
    """g h g^-1 h^-1."""
    return multiply(spec, multiply(spec, g, h),
                    multiply(spec, inverse(spec, g), inverse(spec, h)))


# ---------------------------------------------------------------------------
# canonical keys

_TAG_VECTOR = 0x56  # 'V'
_TAG_CYCLIC = 0x43  # 'C'
_TAG_WORD = 0x57    # 'W'
_TAG_DIHEDRAL = 0x44  # 'D'
_TAG_BS = 0x42      # 'B'
_TAG_PAIR = 0x50    # 'P'
_TAG_WREATH = 0x4C  # 'L'


def _enc_uint(out: bytearray, n: int) -> None:
    if n < 0:
        raise GroupError("negative count")
    while True:
        b = n & 0x7F
        n >>= 7
        if n:
            out.append(b | 0x80)
        else:
            out.append(b)
            return


def _enc_int(out: bytearray, n: int) -> None:
    # zigzag then little-endian base-128
    _enc_uint(out, n << 1 if n >= 0 else (-n << 1) - 1)


def _encode(spec: GroupSpec, g: GroupElement, out: bytearray) -> None:
    t = type(spec)
    if t is IntegerLattice or (t is FreeSolvable and spec.length == 1):
        out.append(_TAG_VECTOR)
        _enc_uint(out, len(g))
        for a in g:
            _enc_int(out, a)
        return
    if t is Cyclic:
        out.append(_TAG_CYCLIC)
        _enc_uint(out, g)
        return
    if t is FreeGroup:
        out.append(_TAG_WORD)
        _enc_uint(out, len(g))
        for letter in g:
            _enc_int(out, letter)
        return
    if t is Dihedral:
        out.append(_TAG_DIHEDRAL)
        _enc_int(out, g[0])
        _enc_uint(out, g[1])
        return
    if t is BaumslagSolitar:
        out.append(_TAG_BS)
        _enc_int(out, g[0])
        _enc_int(out, g[1])
        return
    if t is DirectProduct:
        out.append(_TAG_PAIR)
        _encode(spec.left, g[0], out)
        _encode(spec.right, g[1], out)
        return
    if t is Wreath or t is FreeSolvable:
        lamp_spec, base_spec = wreath_parts(spec)
        lamps, pos = g
        out.append(_TAG_WREATH)
        _enc_uint(out, len(lamps))
        for site, val in lamps:
            _encode(base_spec, site, out)
            _encode(lamp_spec, val, out)
        _encode(base_spec, pos, out)
        return
    raise GroupError(f"unknown spec {spec!r}")


def canonical_key(spec: GroupSpec, g: GroupElement) -> bytes:
    """Injective deterministic byte encoding of a canonical form.

    Each variant is tagged and every integer is self-delimiting (zigzag,
    little-endian base-128), so nested encodings concatenate without
    ambiguity and ``canonical_key(spec, g) == canonical_key(spec, h)``
    exactly when ``g == h``.
    """
    out = bytearray()
    _encode(spec, g, out)
    return bytes(out)


# ---------------------------------------------------------------------------
# validation


def validate(spec: GroupSpec, g: GroupElement) -> None:
    """Raise :class:`GroupError` unless ``g`` is a canonical element of ``spec``."""
    t = type(spec)
    if t is IntegerLattice or (t is FreeSolvable and spec.length == 1):
        dim = spec.dim if t is IntegerLattice else spec.rank
        if not (isinstance(g, tuple) and len(g) == dim
                and all(isinstance(a, int) for a in g)):
            raise GroupError(f"expected {dim}-tuple of ints for {spec!r}, got {g!r}")
        return
    if t is Cyclic:
        if not (isinstance(g, int) and 0 <= g < spec.modulus):
            raise GroupError(f"expected residue in range({spec.modulus}), got {g!r}")
        return
    if t is FreeGroup:
        if not (isinstance(g, tuple) and all(isinstance(a, int) for a in g)):
            raise GroupError(f"expected letter tuple for {spec!r}, got {g!r}")
        for letter in g:
            if letter == 0 or abs(letter) > spec.rank:
                raise GroupError(f"letter {letter} out of range for rank {spec.rank}")
        if g != reduce_letters(g):
            raise GroupError(f"word {g!r} is not freely reduced")
        return
    if t is Dihedral:
        if not (isinstance(g, tuple) and len(g) == 2 and isinstance(g[0], int)
                and g[1] in (0, 1)):
            raise GroupError(f"expected (translation, flip) pair, got {g!r}")
        return
    if t is BaumslagSolitar:
        if not (isinstance(g, tuple) and len(g) == 2
                and all(isinstance(a, int) for a in g)):
            raise GroupError(f"expected (m, n) int pair, got {g!r}")
        return
    if t is DirectProduct:
        if not (isinstance(g, tuple) and len(g) == 2):
            raise GroupError(f"expected element pair, got {g!r}")
        validate(spec.left, g[0])
        validate(spec.right, g[1])
        return
    if t is Wreath or t is FreeSolvable:
        lamp_spec, base_spec = wreath_parts(spec)
        if not (isinstance(g, tuple) and len(g) == 2 and isinstance(g[0], tuple)):
            raise GroupError(f"expected (lamps, position) pair, got {g!r}")
        lamps, pos = g
        lamp_id = identity(lamp_spec)
        sites = []
        for entry in lamps:
            if not (isinstance(entry, tuple) and len(entry) == 2):
                raise GroupError(f"bad lamp entry {entry!r}")
            site, val = entry
            validate(base_spec, site)
            validate(lamp_spec, val)
            if val == lamp_id:
                raise GroupError("identity lamp values must not be stored")
            sites.append(site)
        if sorted(lamps) != list(lamps):
            raise GroupError("lamp entries must be sorted by site")
        if len(set(sites)) != len(sites):
            raise GroupError("duplicate lamp sites")
        validate(base_spec, pos)
        return
    raise GroupError(f"unknown spec {spec!r}")


# ---------------------------------------------------------------------------
# projections


_PROJ_KINDS = (
    "wreath-to-base",
    "tower-to-level",
    "product-left",
    "product-right",
    "free-solvable-to-level",
    "abelianization",
)


@dataclass(frozen=True)
class Projection:
    """A homomorphic coordinate/quotient map between two specs."""

    source: GroupSpec
    target: GroupSpec
    kind: str
    level: int | None = None


def wreath_to_base(spec: GroupSpec) -> Projection:
    _, base = wreath_parts(spec)
    return Projection(spec, base, "wreath-to-base")


def tower_to_level(spec: GroupSpec, level: int) -> Projection:
    height = tower_height(spec)
    if not 1 <= level <= height:
        raise GroupError(f"level {level} out of range for height {height}")
    target = spec
    for _ in range(height - level):
        target = _base_spec(target)
    kind = "free-solvable-to-level" if isinstance(spec, FreeSolvable) else "tower-to-level"
    return Projection(spec, target, kind, level)


def product_factor(spec: DirectProduct, side: str) -> Projection:
    if not isinstance(spec, DirectProduct):
        raise GroupError(f"{spec!r} is not a direct product")
    if side == "left":
        return Projection(spec, spec.left, "product-left")
    if side == "right":
        return Projection(spec, spec.right, "product-right")
    raise GroupError(f"side must be 'left' or 'right', got {side!r}")


def abelianization_target(spec: GroupSpec) -> GroupSpec:
    t = type(spec)
    if t is IntegerLattice or t is Cyclic:
        return spec
    if t is FreeGroup:
        return IntegerLattice(spec.rank)
    if t is Dihedral:
        # coordinates: (flip bit, translation parity)
        return DirectProduct(Cyclic(2), Cyclic(2))
    if t is BaumslagSolitar:
        # coordinates: (a-exponent parity, b-exponent)
        return DirectProduct(Cyclic(2), IntegerLattice(1))
    if t is DirectProduct:
        return DirectProduct(abelianization_target(spec.left),
                             abelianization_target(spec.right))
    if t is Wreath:
        return DirectProduct(abelianization_target(spec.lamp),
                             abelianization_target(spec.base))
    if t is FreeSolvable:
        return IntegerLattice(spec.rank)
    raise GroupError(f"unknown spec {spec!r}")


def abelianization(spec: GroupSpec) -> Projection:
    return Projection(spec, abelianization_target(spec), "abelianization")


def _abelianize(spec: GroupSpec, g: GroupElement) -> GroupElement:
    t = type(spec)
    if t is IntegerLattice or t is Cyclic:
        return g
    if t is FreeGroup:
        vec = [0] * spec.rank
        for letter in g:
            vec[abs(letter) - 1] += 1 if letter > 0 else -1
        return tuple(vec)
    if t is Dihedral:
        return (g[1], g[0] & 1)
    if t is BaumslagSolitar:
        return (g[0] & 1, (g[1],))
    if t is DirectProduct:
        return (_abelianize(spec.left, g[0]), _abelianize(spec.right, g[1]))
    if t is Wreath:
        lamp_ab = abelianization_target(spec.lamp)
        total = identity(lamp_ab)
        for _, val in g[0]:
            total = multiply(lamp_ab, total, _abelianize(spec.lamp, val))
        return (total, _abelianize(spec.base, g[1]))
    if t is FreeSolvable:
        while spec.length > 1:
            g = g[1]
            spec = FreeSolvable(spec.rank, spec.length - 1)
        return g
    raise GroupError(f"unknown spec {spec!r}")


def project(p: Projection, g: GroupElement) -> GroupElement:
    kind = p.kind
    if kind == "wreath-to-base":
        return g[1]
    if kind in ("tower-to-level", "free-solvable-to-level"):
        steps = tower_height(p.source) - p.level
        for _ in range(steps):
            g = g[1]
        return g
    if kind == "product-left":
        return g[0]
    if kind == "product-right":
        return g[1]
    if kind == "abelianization":
        return _abelianize(p.source, g)
    raise GroupError(f"unknown projection kind {kind!r}")


# ---------------------------------------------------------------------------
# bounded symmetry heuristic


@dataclass(frozen=True)
class SymmetryReport:
    """Outcome of the bounded semigroup symmetry check (a heuristic)."""

    symmetric_within_radius: bool
    witness: GroupElement | None
    radius: int
    closure_size: int


def semigroup_symmetric_bounded(spec: GroupSpec, support: Sequence[GroupElement],
                                radius: int, cap: int = 250_000) -> SymmetryReport:
    """Check whether every product of at most ``radius`` support elements has
    its inverse reachable within the same radius.

    This is a bounded heuristic, not a decision procedure: a ``True`` answer
    only certifies symmetry of the ball explored.
    """
    if radius < 1:
        raise GroupError("radius must be >= 1")
    if not support:
        raise GroupError("support must be nonempty")
    reached: set[GroupElement] = set(support)
    frontier = list(support)
    for _ in range(radius - 1):
        new: list[GroupElement] = []
        for g in frontier:
            for s in support:
                h = multiply(spec, g, s)
                if h not in reached:
                    reached.add(h)
                    new.append(h)
                    if len(reached) > cap:
                        raise ClosureCapError(
                            f"closure exceeded cap {cap} at radius {radius}")
        if not new:
            break
        frontier = new
    for g in sorted(reached, key=lambda e: canonical_key(spec, e)):
        if inverse(spec, g) not in reached:
            return SymmetryReport(False, g, radius, len(reached))
    return SymmetryReport(True, None, radius, len(reached))


# ---------------------------------------------------------------------------
# random elements (test/experiment plumbing)


def random_element(spec: GroupSpec, rng: Random, size: int = 5) -> GroupElement:
    """A random canonical element with coordinates bounded by ``size``.

    Free solvable specs are not supported here: their elements live in an
    embedded subgroup, so sample those through the level embedding instead.
    """
    t = type(spec)
    if t is IntegerLattice:
        return tuple(rng.randint(-size, size) for _ in range(spec.dim))
    if t is Cyclic:
        return rng.randrange(spec.modulus)
    if t is FreeGroup:
        letters: list[int] = []
        for _ in range(rng.randint(0, size)):
            letter = rng.choice([i for i in range(-spec.rank, spec.rank + 1) if i])
            if letters and letters[-1] == -letter:
                letters.pop()
            else:
                letters.append(letter)
        return tuple(letters)
    if t is Dihedral:
        return (rng.randint(-size, size), rng.randint(0, 1))
    if t is BaumslagSolitar:
        return (rng.randint(-size, size), rng.randint(-size, size))
    if t is DirectProduct:
        return (random_element(spec.left, rng, size),
                random_element(spec.right, rng, size))
    if t is Wreath:
        lamp_id = identity(spec.lamp)
        sites: dict[GroupElement, GroupElement] = {}
        for _ in range(rng.randint(0, max(1, size // 2))):
            site = random_element(spec.base, rng, size)
            val = random_element(spec.lamp, rng, size)
            if val != lamp_id:
                sites[site] = val
        return (tuple(sorted(sites.items())), random_element(spec.base, rng, size))
    if t is FreeSolvable:
        raise GroupError("sample free solvable elements via the level embedding")
    raise GroupError(f"unknown spec {spec!r}")

"""Finitely supported probability measures on group specs.

A :class:`FiniteMeasure` is a sparse map from canonical elements to weights,
in one of two weight modes: exact rationals (:class:`fractions.Fraction`,
the default) or binary64 floats for large-support work.  Convolution walks
the support product and enforces a hard support cap.

The family constructors at the bottom build the perturbation families used
throughout the experiments; their atoms are merged on construction, so e.g.
the drifted-lattice family at its first parameter collapses cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import log
from typing import Any, Callable, Iterable, Iterator, Mapping

from . import groups
from .exact_entropy import LogLinear, entropy_form
from .groups import (
    BS11,
    BS_A,
    BS_B,
    DINF,
    DINF_A,
    DINF_B,
    Cyclic,
    GroupElement,
    GroupSpec,
    IntegerLattice,
    Projection,
    Wreath,
)

DEFAULT_SUPPORT_CAP = 5_000_000


class MeasureError(ValueError):
    """Invalid weights, mismatched specs, or malformed atoms."""


class SupportCapError(RuntimeError):
    """Convolution support grew past the configured cap."""

    def __init__(self, message: str, completed: int | None = None):
        super().__init__(message)
        self.completed = completed


Weight = Any  # Fraction in exact mode, float otherwise


class FiniteMeasure:
    """Finitely supported probability measure on a group spec."""

    __slots__ = ("spec", "_atoms", "exact", "_keyed")

    def __init__(self, spec: GroupSpec, atoms: dict[GroupElement, Weight],
                 exact: bool):
        self.spec = spec
        self._atoms = atoms
        self.exact = exact
        self._keyed: tuple[dict, dict] | None = None

    # -- construction -------------------------------------------------------

    @classmethod
    def from_pairs(cls, spec: GroupSpec,
                   pairs: Iterable[tuple[GroupElement, Any]],
                   exact: bool = True) -> "FiniteMeasure":
        """Build a measure, merging duplicate atoms and validating weights."""
        atoms: dict[GroupElement, Weight] = {}
        for elem, w in pairs:
            groups.validate(spec, elem)
            w = Fraction(w) if exact else float(w)
            if w < 0:
                raise MeasureError(f"negative weight {w} at {elem!r}")
            if w == 0:
                continue
            if elem in atoms:
                atoms[elem] += w
            else:
                atoms[elem] = w
        if not atoms:
            raise MeasureError("measure must have nonempty support")
        total = sum(atoms.values())
        if exact:
            if total != 1:
                raise MeasureError(f"weights must sum to 1 exactly, got {total}")
        elif abs(total - 1.0) > 1e-12:
            raise MeasureError(f"weights must sum to 1 within 1e-12, got {total}")
        return cls(spec, atoms, exact)

    @classmethod
    def _raw(cls, spec: GroupSpec, atoms: dict[GroupElement, Weight],
             exact: bool) -> "FiniteMeasure":
        return cls(spec, atoms, exact)

    # -- views --------------------------------------------------------------

    def atoms(self) -> Iterator[tuple[GroupElement, Weight]]:
        return iter(self._atoms.items())

    def support(self) -> list[GroupElement]:
        return list(self._atoms)

    def weight_of(self, elem: GroupElement) -> Weight:
        zero = Fraction(0) if self.exact else 0.0
        return self._atoms.get(elem, zero)

    def __len__(self) -> int:
        return len(self._atoms)

    def _ensure_keyed(self) -> tuple[dict, dict]:
        if self._keyed is None:
            weights: dict[bytes, Weight] = {}
            elements: dict[bytes, GroupElement] = {}
            for elem, w in self._atoms.items():
                key = groups.canonical_key(self.spec, elem)
                weights[key] = w
                elements[key] = elem
            self._keyed = (weights, elements)
        return self._keyed

    @property
    def weights(self) -> dict[bytes, Weight]:
        """Sparse map from canonical key to probability."""
        return self._ensure_keyed()[0]

    @property
    def elements(self) -> dict[bytes, GroupElement]:
        """Decoding table from canonical key back to the element."""
        return self._ensure_keyed()[1]

    def as_float(self) -> "FiniteMeasure":
        if not self.exact:
            return self
        return FiniteMeasure(self.spec,
                             {g: float(w) for g, w in self._atoms.items()},
                             exact=False)

    def __repr__(self) -> str:
        mode = "exact" if self.exact else "float"
        return f"<FiniteMeasure on {self.spec!r}, {len(self)} atoms, {mode}>"


def point_mass(spec: GroupSpec, elem: GroupElement,
               exact: bool = True) -> FiniteMeasure:
    return FiniteMeasure.from_pairs(spec, [(elem, 1)], exact=exact)


def uniform_measure(spec: GroupSpec, elems: Iterable[GroupElement],
                    exact: bool = True) -> FiniteMeasure:
    elems = list(elems)
    w = Fraction(1, len(elems)) if exact else 1.0 / len(elems)
    return FiniteMeasure.from_pairs(spec, [(g, w) for g in elems], exact=exact)


# ---------------------------------------------------------------------------
# entropy


def entropy(mu: FiniteMeasure) -> float:
    """Shannon entropy in nats."""
    return -sum(float(w) * log(float(w)) for _, w in mu.atoms() if w > 0)


def exact_entropy(mu: FiniteMeasure) -> LogLinear:
    """Entropy as an exact log-linear form (rational mode only)."""
    if not mu.exact:
        raise MeasureError("exact entropy requires the rational weight mode")
    return entropy_form(w for _, w in mu.atoms())


# ---------------------------------------------------------------------------
# convolution and friends


def _check_same(mu: FiniteMeasure, nu: FiniteMeasure) -> None:
    if mu.spec != nu.spec:
        raise MeasureError(f"spec mismatch: {mu.spec!r} vs {nu.spec!r}")
    if mu.exact != nu.exact:
        raise MeasureError("weight-mode mismatch between operands")


def convolve(mu: FiniteMeasure, nu: FiniteMeasure,
             cap: int = DEFAULT_SUPPORT_CAP) -> FiniteMeasure:
    """Convolution: the law of g*h with g ~ mu and h ~ nu independently."""
    _check_same(mu, nu)
    spec = mu.spec
    multiply = groups.multiply
    out: dict[GroupElement, Weight] = {}
    for g, wg in mu._atoms.items():
        for h, wh in nu._atoms.items():
            prod = multiply(spec, g, h)
            w = wg * wh
            if prod in out:
                out[prod] += w
            else:
                out[prod] = w
                if len(out) > cap:
                    raise SupportCapError(
                        f"convolution support exceeded cap {cap}")
    return FiniteMeasure._raw(spec, out, mu.exact)


def convolution_power(mu: FiniteMeasure, n: int,
                      cap: int = DEFAULT_SUPPORT_CAP) -> FiniteMeasure:
    """n-fold convolution power (square-and-multiply above small n)."""
    if n < 0:
        raise MeasureError("convolution power needs n >= 0")
    if n == 0:
        return point_mass(mu.spec, groups.identity(mu.spec), exact=mu.exact)
    if n <= 16:
        acc = mu
        for _ in range(n - 1):
            acc = convolve(acc, mu, cap)
        return acc
    half = convolution_power(mu, n // 2, cap)
    acc = convolve(half, half, cap)
    if n % 2:
        acc = convolve(acc, mu, cap)
    return acc


def pushforward(mu: FiniteMeasure, p: Projection) -> FiniteMeasure:
    """Image measure under a projection; colliding atoms merge."""
    if p.source != mu.spec:
        raise MeasureError(f"projection source {p.source!r} != {mu.spec!r}")
    out: dict[GroupElement, Weight] = {}
    for g, w in mu.atoms():
        img = groups.project(p, g)
        out[img] = out.get(img) + w if img in out else w
    return FiniteMeasure._raw(p.target, out, mu.exact)


def product_measure(mu: FiniteMeasure, nu: FiniteMeasure) -> FiniteMeasure:
    """Independent product on the direct product of the two specs."""
    if mu.exact != nu.exact:
        raise MeasureError("weight-mode mismatch between operands")
    spec = groups.DirectProduct(mu.spec, nu.spec)
    out: dict[GroupElement, Weight] = {}
    for g, wg in mu.atoms():
        for h, wh in nu.atoms():
            out[(g, h)] = wg * wh
    return FiniteMeasure._raw(spec, out, mu.exact)


def mix(mu: FiniteMeasure, nu: FiniteMeasure, weight_nu: Any) -> FiniteMeasure:
    """Convex combination (1 - t) mu + t nu of step laws on one spec."""
    _check_same(mu, nu)
    t = Fraction(weight_nu) if mu.exact else float(weight_nu)
    if not 0 <= t <= 1:
        raise MeasureError(f"mixture weight must lie in [0, 1], got {t}")
    zero = Fraction(0) if mu.exact else 0.0
    out: dict[GroupElement, Weight] = {}
    for g in set(mu._atoms) | set(nu._atoms):
        w = (1 - t) * mu._atoms.get(g, zero) + t * nu._atoms.get(g, zero)
        if w > 0:
            out[g] = w
    return FiniteMeasure._raw(mu.spec, out, mu.exact)


def total_variation(mu: FiniteMeasure, nu: FiniteMeasure) -> Weight:
    """(1/2) sum |mu - nu| over the union support."""
    _check_same(mu, nu)
    zero = Fraction(0) if mu.exact else 0.0
    keys = set(mu._atoms) | set(nu._atoms)
    total = zero
    for g in keys:
        total += abs(mu._atoms.get(g, zero) - nu._atoms.get(g, zero))
    return total / 2


def pointwise_sup_diff(mu: FiniteMeasure, nu: FiniteMeasure) -> Weight:
    """sup_g |mu(g) - nu(g)|."""
    _check_same(mu, nu)
    zero = Fraction(0) if mu.exact else 0.0
    keys = set(mu._atoms) | set(nu._atoms)
    return max(abs(mu._atoms.get(g, zero) - nu._atoms.get(g, zero)) for g in keys)


# ---------------------------------------------------------------------------
# named elements used by the families

DINF_AB = groups.multiply(DINF, DINF_A, DINF_B)   # translation (-1, 0)
DINF_BA = groups.multiply(DINF, DINF_B, DINF_A)   # translation (+1, 0)
_BS_B2 = groups.multiply(BS11, BS_B, BS_B)
_BS_B2I = groups.inverse(BS11, _BS_B2)
_BS_BI = groups.inverse(BS11, BS_B)
_BS_AI = groups.inverse(BS11, BS_A)


def _as_fraction(p: Any) -> Fraction:
    return p if isinstance(p, Fraction) else Fraction(p)


def dinf_family(p: Any, k: int) -> FiniteMeasure:
    """Step law (1-1/k)(p ab + (1-p) ba) + (1/k) a on the infinite dihedral group.

    The limit (``dinf_limit``) is supported on the translation subgroup; each
    member leaks 1/k of its mass onto the involution ``a``.  ``k = 1`` is the
    point mass at ``a``.
    """
    p = _as_fraction(p)
    if not 0 <= p <= 1:
        raise MeasureError(f"p must lie in [0, 1], got {p}")
    if k < 1:
        raise MeasureError(f"k must be >= 1, got {k}")
    bulk = 1 - Fraction(1, k)
    return FiniteMeasure.from_pairs(DINF, [
        (DINF_AB, bulk * p),
        (DINF_BA, bulk * (1 - p)),
        (DINF_A, Fraction(1, k)),
    ])


def dinf_limit(p: Any) -> FiniteMeasure:
    p = _as_fraction(p)
    return FiniteMeasure.from_pairs(DINF, [
        (DINF_AB, p),
        (DINF_BA, 1 - p),
    ])


def bs11_family(p: Any, k: int) -> FiniteMeasure:
    """Step law mixing b^{+-2} and a^{+-1} with 1/(2k) mass on b^{+-1}."""
    p = _as_fraction(p)
    if not 0 <= p <= 1:
        raise MeasureError(f"p must lie in [0, 1], got {p}")
    if k < 1:
        raise MeasureError(f"k must be >= 1, got {k}")
    bulk = Fraction(1, 3) * (1 - Fraction(1, k))
    return FiniteMeasure.from_pairs(BS11, [
        (_BS_B2, bulk),
        (_BS_B2I, bulk),
        (BS_A, bulk * p),
        (_BS_AI, bulk * (1 - p)),
        (BS_B, Fraction(1, 2 * k)),
        (_BS_BI, Fraction(1, 2 * k)),
    ])


def bs11_limit(p: Any) -> FiniteMeasure:
    p = _as_fraction(p)
    third = Fraction(1, 3)
    return FiniteMeasure.from_pairs(BS11, [
        (_BS_B2, third),
        (_BS_B2I, third),
        (BS_A, third * p),
        (_BS_AI, third * (1 - p)),
    ])


_Z1 = IntegerLattice(1)


def z_drift_family(k: int) -> FiniteMeasure:
    """Mean-zero lattice walk whose mass escapes to a far-away atom -k.

    Each member has mean exactly zero; the weak limit is the drifted
    (3/4, 1/4) walk.  At ``k = 1`` the far atom merges with -1, giving the
    symmetric simple walk.
    """
    if k < 1:
        raise MeasureError(f"k must be >= 1, got {k}")
    scale = Fraction(2 * k, 1 + 2 * k)
    return FiniteMeasure.from_pairs(_Z1, [
        ((1,), Fraction(3, 4) * scale),
        ((-1,), Fraction(1, 4) * scale),
        ((-k,), Fraction(1, 1 + 2 * k)),
    ])


def z_drift_limit() -> FiniteMeasure:
    return FiniteMeasure.from_pairs(_Z1, [
        ((1,), Fraction(3, 4)),
        ((-1,), Fraction(1, 4)),
    ])


def lamplighter_mix(eta: FiniteMeasure, mu: FiniteMeasure) -> FiniteMeasure:
    """Lamp/base mixture (1/2) eta-hat + (1/2) mu-hat on  lamp wr base.

    ``eta`` lives on the lamp group and is planted at the base identity;
    ``mu`` lives on the base group and moves the walker.
    """
    if eta.exact != mu.exact:
        raise MeasureError("weight-mode mismatch between operands")
    spec = Wreath(eta.spec, mu.spec)
    base_id = groups.identity(mu.spec)
    lamp_id = groups.identity(eta.spec)
    half = Fraction(1, 2) if eta.exact else 0.5
    zero = Fraction(0) if eta.exact else 0.0
    out: dict[GroupElement, Weight] = {}
    for a, w in eta.atoms():
        lamps = () if a == lamp_id else ((base_id, a),)
        elem = (lamps, base_id)
        out[elem] = out.get(elem, zero) + half * w
    for b, w in mu.atoms():
        elem = ((), b)
        out[elem] = out.get(elem, zero) + half * w
    return FiniteMeasure._raw(spec, out, eta.exact)


# ---------------------------------------------------------------------------
# family wrapper used by the experiment layer


@dataclass(frozen=True)
class MeasureFamily:
    """A parametrised family of measures with a fixed-support limit."""

    name: str
    spec: GroupSpec
    member: Callable[[int], FiniteMeasure] = field(compare=False)
    limit: FiniteMeasure = field(compare=False)
    params: tuple[tuple[str, Any], ...] = ()

    def label(self, k: int | None = None) -> str:
        inner = ", ".join(f"{key}={val}" for key, val in self.params)
        if k is not None:
            inner = f"{inner}, k={k}" if inner else f"k={k}"
        return f"{self.name}({inner})"

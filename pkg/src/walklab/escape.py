"""Escape-probability estimators for walks driven by finite step laws.

Three estimator families:

* ``exact_escape_drifted_z`` / ``exact_escape_drifted_z2``: truncate the
  expected-visits series ``sum_n mu^{*n}(e) = 1 / p_escape`` and close the
  tail with the exponential concentration bound
  ``mu^{*n}(e) <= 2 exp(-2 n mean^2 / (b - a)^2)`` for a drifted walk whose
  (projected) support lies in ``[a, b]``.  The result is a bracketing
  interval, not a point guess.
* ``mc_escape``: Monte Carlo first-return sampling with per-sample
  counter-based streams; nested horizon checkpoints are evaluated on the
  same paths, so the reported estimates are nonincreasing by construction.
* ``range_rate``: sample mean of (distinct sites visited)/n.  The finite-n
  range overestimates the escape probability; for drifted lattice walks a
  rigorous upper bound for that bias is computed from the visit series and
  widens the low side of the interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import exp, log, sqrt
from typing import Any, Callable, Iterable

import numpy as np

from . import groups, measures
from .groups import BaumslagSolitar, Cyclic, Dihedral, GroupElement, IntegerLattice
from .measures import FiniteMeasure, MeasureError
from .rng import chunk_schedule, sample_stream

_Z1 = IntegerLattice(1)
_Z2 = IntegerLattice(2)
_FLOAT_SLACK = 1e-12


class EscapeError(ValueError):
    """Estimator preconditions not met (wrong spec, zero drift, ...)."""


class TailMassError(RuntimeError):
    """Stopping-time tail mass above the configured tolerance."""

    def __init__(self, message: str, tail_mass: Fraction):
        super().__init__(message)
        self.tail_mass = tail_mass


@dataclass
class DriftBound:
    """Support bounds and mean of an integer-valued step projection."""

    lo: Fraction
    hi: Fraction
    mean: Fraction

    def __post_init__(self) -> None:
        if not self.lo <= self.mean <= self.hi:
            raise EscapeError(
                f"mean {self.mean} outside support [{self.lo}, {self.hi}]")


@dataclass
class EscapeEstimate:
    """Point estimate with an interval; method-specific details ride along."""

    method: str
    value: float
    lo: float
    hi: float
    horizon: int | None = None
    n: int | None = None
    samples: int | None = None
    seed: int | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.lo <= self.value <= self.hi:
            raise EscapeError(
                f"estimate {self.value} outside interval [{self.lo}, {self.hi}]")

    def to_record(self, group: str = "", measure: str = "") -> dict[str, Any]:
        return {
            "method": self.method,
            "value": self.value,
            "lo": self.lo,
            "hi": self.hi,
            "horizon": self.horizon,
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "group": group,
            "measure": measure,
            **{f"detail_{k}": v for k, v in sorted(self.details.items())
               if isinstance(v, (int, float, str, bool))},
        }


# ---------------------------------------------------------------------------
# drift bounds and the concentration inequality


def _z1_values_weights(mu: FiniteMeasure) -> tuple[list[int], list[Fraction]]:
    if mu.spec != _Z1:
        raise EscapeError(f"expected a measure on the 1-d lattice, got {mu.spec!r}")
    if not mu.exact:
        raise EscapeError("exact estimators require the rational weight mode")
    values = []
    weights = []
    for (x,), w in mu.atoms():
        values.append(x)
        weights.append(w)
    return values, weights


def drift_bound_z(mu: FiniteMeasure) -> DriftBound:
    values, weights = _z1_values_weights(mu)
    mean = sum(Fraction(x) * w for x, w in zip(values, weights))
    return DriftBound(Fraction(min(values)), Fraction(max(values)), mean)


def hoeffding_return_bound(bound: DriftBound, n: int) -> float:
    """Upper bound 2 exp(-2 n mean^2 / (hi - lo)^2) for the mass at zero."""
    width = bound.hi - bound.lo
    if width == 0:
        return 0.0 if bound.mean != 0 else 2.0
    rate = 2 * bound.mean ** 2 / width ** 2
    return 2.0 * exp(-float(rate) * n)


def return_mass_series_z(mu: FiniteMeasure, n_terms: int) -> list[Fraction]:
    """Exact masses ``mu^{*n}(0)`` for n = 0 .. n_terms on the 1-d lattice."""
    values, weights = _z1_values_weights(mu)
    dist: dict[int, Fraction] = {0: Fraction(1)}
    out = [Fraction(1)]
    for _ in range(n_terms):
        nxt: dict[int, Fraction] = {}
        for pos, w in dist.items():
            for x, wx in zip(values, weights):
                key = pos + x
                if key in nxt:
                    nxt[key] += w * wx
                else:
                    nxt[key] = w * wx
        dist = nxt
        out.append(dist.get(0, Fraction(0)))
    return out


# ---------------------------------------------------------------------------
# exact series estimators


def exact_escape_drifted_z(mu: FiniteMeasure, tol: float = 1e-6,
                           max_terms: int = 100_000) -> EscapeEstimate:
    """Bracket the escape probability of a drifted 1-d lattice walk.

    Sums the visit series exactly and closes it with the geometric tail from
    the concentration bound; the interval has width at most ``tol``.
    """
    values, weights = _z1_values_weights(mu)
    bound = drift_bound_z(mu)
    if bound.mean == 0:
        raise EscapeError("drifted walk required; the mean is exactly zero")
    if bound.lo > 0 or bound.hi < 0:
        # zero is never revisited: every step moves strictly one way
        return EscapeEstimate("exact-series", 1.0, 1.0, 1.0, n=0,
                              details={"series_lo": 1.0, "series_hi": 1.0,
                                       "tail_bound": 0.0,
                                       "mean": float(bound.mean)})
    width = bound.hi - bound.lo
    rate = float(2 * bound.mean ** 2 / width ** 2)
    q = exp(-rate) * (1 + 1e-12)
    if q >= 1.0:
        raise EscapeError("degenerate concentration rate")
    dist: dict[int, Fraction] = {0: Fraction(1)}
    series = Fraction(1)
    n = 0
    while True:
        n += 1
        if n > max_terms:
            raise EscapeError(f"series did not converge within {max_terms} terms")
        nxt: dict[int, Fraction] = {}
        for pos, w in dist.items():
            for x, wx in zip(values, weights):
                key = pos + x
                if key in nxt:
                    nxt[key] += w * wx
                else:
                    nxt[key] = w * wx
        dist = nxt
        series += dist.get(0, Fraction(0))
        tail = 2.0 * q ** (n + 1) / (1.0 - q)
        s_lo = float(series)
        s_hi = s_lo + tail
        lo = 1.0 / s_hi - _FLOAT_SLACK
        hi = 1.0 / s_lo + _FLOAT_SLACK
        if hi - lo <= tol:
            break
    return EscapeEstimate(
        "exact-series", (lo + hi) / 2, lo, hi, n=n,
        details={"series_lo": s_lo, "series_hi": s_hi, "tail_bound": tail,
                 "mean": float(bound.mean), "support_lo": min(values),
                 "support_hi": max(values)})


def _axis_split(mu: FiniteMeasure):
    """Split a 2-d lattice measure into axis-conditional walks."""
    if mu.spec != _Z2:
        raise EscapeError(f"expected a measure on the 2-d lattice, got {mu.spec!r}")
    x_atoms: list[tuple[int, float]] = []
    y_atoms: list[tuple[int, float]] = []
    for (x, y), w in mu.as_float().atoms():
        if x and y:
            raise EscapeError("measure is not axis-aligned")
        if not x and not y:
            raise EscapeError("identity atom not supported by the 2-d series")
        if y == 0:
            x_atoms.append((x, w))
        else:
            y_atoms.append((y, w))
    if not x_atoms or not y_atoms:
        raise EscapeError("need atoms on both axes; use the 1-d estimator")
    return x_atoms, y_atoms


def _marginal_return_series(values: list[int], probs: list[float],
                            n_terms: int) -> np.ndarray:
    """P(1-d walk back at 0 after j steps), j = 0 .. n_terms (float)."""
    lo = min(values)
    hi = max(values)
    size = n_terms * (hi - lo) + 1
    offset = -n_terms * lo
    cur = np.zeros(size)
    cur[offset] = 1.0
    out = np.empty(n_terms + 1)
    out[0] = 1.0
    for j in range(1, n_terms + 1):
        nxt = np.zeros_like(cur)
        for v, p in zip(values, probs):
            if v >= 0:
                nxt[v:] += p * cur[:size - v] if v else p * cur
            else:
                nxt[:v] += p * cur[-v:]
        cur = nxt
        out[j] = cur[offset]
    return out


def exact_escape_drifted_z2(mu: FiniteMeasure, tol: float = 1e-4,
                            max_terms: int = 20_000) -> EscapeEstimate:
    """Bracket the escape probability of a drifted axis-aligned 2-d walk.

    Conditions on the number of steps along each axis reduce the visit
    series to binomial mixtures of two 1-d return sequences; the tail uses
    the concentration bound for the projection onto the drifted axis.  The
    series is evaluated in binary64 with a small documented slack.
    """
    x_atoms, y_atoms = _axis_split(mu)
    alpha = sum(w for _, w in x_atoms)
    beta = sum(w for _, w in y_atoms)
    x_mean = sum(v * w for v, w in x_atoms)
    y_mean = sum(v * w for v, w in y_atoms)
    if x_mean == 0 and y_mean == 0:
        raise EscapeError("drifted walk required; both axis means vanish")
    # project onto the drifted axis; the projection support includes 0
    # because steps along the other axis project to 0.
    if abs(x_mean) >= abs(y_mean) and x_mean != 0:
        proj_vals = [v for v, _ in x_atoms] + [0]
        proj_mean = x_mean
    else:
        proj_vals = [v for v, _ in y_atoms] + [0]
        proj_mean = y_mean
    lo_s, hi_s = min(proj_vals), max(proj_vals)
    rate = 2.0 * proj_mean ** 2 / (hi_s - lo_s) ** 2
    q = exp(-rate) * (1 + 1e-12)
    n_terms = int(min(max_terms, np.ceil(log(8.0 / (tol * (1 - q))) / rate) + 8))
    x_vals = [v for v, _ in x_atoms]
    x_probs = [w / alpha for _, w in x_atoms]
    y_vals = [v for v, _ in y_atoms]
    y_probs = [w / beta for _, w in y_atoms]
    u = _marginal_return_series(x_vals, x_probs, n_terms)
    v = _marginal_return_series(y_vals, y_probs, n_terms)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, n_terms + 1)))))
    with np.errstate(divide="ignore"):
        log_u = np.log(u)
        log_v = np.log(v)
    log_alpha = log(alpha)
    log_beta = log(beta)
    series = 1.0
    for n in range(1, n_terms + 1):
        j = np.arange(n + 1)
        terms = (log_fact[n] - log_fact[j] - log_fact[n - j]
                 + j * log_alpha + (n - j) * log_beta
                 + log_u[j] + log_v[n - j])
        finite = terms[np.isfinite(terms)]
        if finite.size:
            series += float(np.exp(finite).sum())
    tail = 2.0 * q ** (n_terms + 1) / (1.0 - q)
    slack = 1e-9 * series
    s_lo = series - slack
    s_hi = series + tail + slack
    lo = 1.0 / s_hi
    hi = 1.0 / s_lo
    return EscapeEstimate(
        "exact-series", (lo + hi) / 2, lo, hi, n=n_terms,
        details={"series_lo": s_lo, "series_hi": s_hi, "tail_bound": tail,
                 "projected_mean": proj_mean, "float_slack": slack})


def recurrence_zero(mu: FiniteMeasure, reason: str) -> EscapeEstimate:
    """Escape probability 0 certified by a recurrence criterion."""
    return EscapeEstimate("recurrence-zero", 0.0, 0.0, 0.0,
                          details={"justification": reason})


# ---------------------------------------------------------------------------
# samplers


def _make_stepper(spec, elems: list[GroupElement]):
    """State machine for one walk: (initial state, step fn, identity state)."""
    t = type(spec)
    if t is Dihedral:
        def step(state, i, atoms=tuple(elems)):
            st, sf = state
            dt, df = atoms[i]
            return (st - dt if sf else st + dt, sf ^ df)
        return (0, 0), step
    if t is BaumslagSolitar:
        def step(state, i, atoms=tuple(elems)):
            sm, sn = state
            dm, dn = atoms[i]
            return (sm - dm if sn & 1 else sm + dm, sn + dn)
        return (0, 0), step
    if t is Cyclic:
        def step(state, i, atoms=tuple(elems), q=spec.modulus):
            return (state + atoms[i]) % q
        return 0, step
    if t is IntegerLattice:
        def step(state, i, atoms=tuple(elems)):
            return tuple(a + b for a, b in zip(state, atoms[i]))
        return groups.identity(spec), step

    def step(state, i, atoms=tuple(elems), mul=groups.multiply, sp=spec):
        return mul(sp, state, atoms[i])
    return groups.identity(spec), step


def _cumulative(mu: FiniteMeasure) -> tuple[list[GroupElement], np.ndarray]:
    fm = mu.as_float()
    elems = []
    cum = []
    acc = 0.0
    for g, w in fm.atoms():
        elems.append(g)
        acc += w
        cum.append(acc)
    arr = np.array(cum)
    arr[-1] = 1.0
    return elems, arr


def first_return_times(mu: FiniteMeasure, horizon: int, samples: int,
                       seed: int) -> np.ndarray:
    """First return time to the identity per sample; horizon+1 if none seen.

    Sample ``i`` consumes only its own (seed, i) stream, with a fixed chunk
    schedule, so results do not depend on batching.
    """
    if horizon < 1 or samples < 1:
        raise EscapeError("horizon and samples must be >= 1")
    elems, cum = _cumulative(mu)
    n_atoms = len(elems)
    out = np.full(samples, horizon + 1, dtype=np.int64)
    spec = mu.spec
    if isinstance(spec, IntegerLattice) and spec.dim == 1:
        vals = np.array([g[0] for g in elems], dtype=np.int64)
        for i in range(samples):
            gen = sample_stream(seed, i)
            pos = 0
            done = 0
            for chunk in chunk_schedule(horizon):
                u = gen.random(chunk)
                idx = np.minimum(np.searchsorted(cum, u, side="right"),
                                 n_atoms - 1)
                path = pos + np.cumsum(vals[idx])
                hits = np.flatnonzero(path == 0)
                if hits.size:
                    out[i] = done + int(hits[0]) + 1
                    break
                pos = int(path[-1])
                done += chunk
        return out
    ident, step = _make_stepper(spec, elems)
    for i in range(samples):
        gen = sample_stream(seed, i)
        state = ident
        done = 0
        found = False
        for chunk in chunk_schedule(horizon):
            u = gen.random(chunk)
            idx = np.minimum(np.searchsorted(cum, u, side="right"), n_atoms - 1)
            for j, ix in enumerate(idx.tolist()):
                state = step(state, ix)
                if state == ident:
                    out[i] = done + j + 1
                    found = True
                    break
            if found:
                break
            done += chunk
    return out


def _binomial_ci(p_hat: float, n: int) -> tuple[float, float]:
    se = sqrt(max(p_hat * (1.0 - p_hat), 0.0) / n)
    return max(0.0, p_hat - 1.96 * se), min(1.0, p_hat + 1.96 * se)


def mc_escape(mu: FiniteMeasure, horizon: int, samples: int, seed: int,
              checkpoints: Iterable[int] | None = None) -> EscapeEstimate:
    """Monte Carlo estimate of P(no return by the horizon), with 95% CI.

    Checkpoints are evaluated on the same sampled paths, so the sequence of
    estimates over nested horizons is nonincreasing by construction.
    """
    taus = first_return_times(mu, horizon, samples, seed)
    points = sorted(set(list(checkpoints or [])) | {horizon})
    if any(h < 1 or h > horizon for h in points):
        raise EscapeError("checkpoints must lie in [1, horizon]")
    ladder = []
    for h in points:
        p_hat = float(np.mean(taus > h))
        lo, hi = _binomial_ci(p_hat, samples)
        ladder.append({"horizon": h, "value": p_hat, "lo": lo, "hi": hi})
    final = ladder[-1]
    return EscapeEstimate(
        "monte-carlo", final["value"], final["lo"], final["hi"],
        horizon=horizon, samples=samples, seed=seed,
        details={"checkpoints": ladder})


def _range_bias_bound_z(mu: FiniteMeasure, n: int) -> float | None:
    """Rigorous upper bound for E[range]/n - p_escape on a drifted 1-d walk."""
    try:
        bound = drift_bound_z(mu)
    except EscapeError:
        return None
    if bound.mean == 0:
        return None
    if bound.lo > 0 or bound.hi < 0:
        return 1.0 / n  # only the origin is ever recounted
    width = bound.hi - bound.lo
    rate = float(2 * bound.mean ** 2 / width ** 2)
    q = exp(-rate)
    # sum_i (i-1) mu^{*i}(0): exact terms while they matter, then geometric
    cut = max(8, int(np.ceil(24.0 / rate)))
    masses = return_mass_series_z(mu, cut)
    series = sum((i - 1) * float(masses[i]) for i in range(2, cut + 1))
    i = cut + 1
    term = (i - 1) * 2.0 * q ** i
    while term > 1e-15 and i < 100_000:
        series += term
        i += 1
        term = (i - 1) * 2.0 * q ** i
    return (1.0 + series) / n


def range_rate(mu: FiniteMeasure, n: int, samples: int, seed: int,
               bias: str = "auto") -> EscapeEstimate:
    """Sample mean of (distinct sites)/n over n-step paths, with 95% CI.

    The finite-n range is biased upward as an estimator of the escape
    probability; when a rigorous bias bound is available (drifted 1-d
    lattice walks) it extends the interval's low side and is reported.
    """
    if n < 1 or samples < 1:
        raise EscapeError("n and samples must be >= 1")
    elems, cum = _cumulative(mu)
    n_atoms = len(elems)
    rates = np.empty(samples)
    spec = mu.spec
    if isinstance(spec, IntegerLattice) and spec.dim == 1:
        vals = np.array([g[0] for g in elems], dtype=np.int64)
        for i in range(samples):
            gen = sample_stream(seed, i)
            u = gen.random(n)
            idx = np.minimum(np.searchsorted(cum, u, side="right"), n_atoms - 1)
            path = np.cumsum(vals[idx])
            sites = np.unique(np.concatenate(([0], path)))
            rates[i] = sites.size / n
    else:
        ident, step = _make_stepper(spec, elems)
        for i in range(samples):
            gen = sample_stream(seed, i)
            u = gen.random(n)
            idx = np.minimum(np.searchsorted(cum, u, side="right"), n_atoms - 1)
            seen = {ident}
            state = ident
            for ix in idx.tolist():
                state = step(state, ix)
                seen.add(state)
            rates[i] = len(seen) / n
    mean = float(rates.mean())
    sd = float(rates.std(ddof=1)) if samples > 1 else 0.0
    half = 1.96 * sd / sqrt(samples)
    bias_bound = _range_bias_bound_z(mu, n) if bias == "auto" else None
    lo = mean - half - (bias_bound or 0.0)
    hi = mean + half
    details: dict[str, Any] = {
        "bias_note": "finite-n range overestimates the escape probability"}
    if bias_bound is not None:
        details["bias_bound"] = bias_bound
    return EscapeEstimate("range-rate", mean, lo, hi, n=n, samples=samples,
                          seed=seed, details=details)


# ---------------------------------------------------------------------------
# induced (first-entry) measure on a subgroup


@dataclass
class InducedMeasure:
    """Exact law of the walk at its first entry into a subgroup."""

    spec: Any
    atoms: dict[GroupElement, Fraction]
    tail_mass: Fraction
    horizon: int

    def conditional(self) -> FiniteMeasure:
        total = sum(self.atoms.values())
        return FiniteMeasure.from_pairs(
            self.spec, [(g, w / total) for g, w in self.atoms.items()])

    def as_measure(self) -> FiniteMeasure:
        if self.tail_mass != 0:
            raise TailMassError(
                f"tail mass {self.tail_mass} prevents an exact law",
                self.tail_mass)
        return FiniteMeasure.from_pairs(self.spec, list(self.atoms.items()))


def induced_measure_on_subgroup(mu: FiniteMeasure,
                                member: Callable[[GroupElement], bool],
                                horizon: int,
                                mass_tol: Fraction = Fraction(1, 1000),
                                ) -> InducedMeasure:
    """Law of the walk at the first step it lands in the subgroup.

    Exact (rational mode).  The walk is stopped on entry; mass still outside
    after ``horizon`` steps is the tail, which must not exceed ``mass_tol``.
    """
    if not mu.exact:
        raise MeasureError("induced measures require the rational weight mode")
    spec = mu.spec
    ident = groups.identity(spec)
    if not member(ident):
        raise MeasureError("the membership predicate must accept the identity")
    captured: dict[GroupElement, Fraction] = {}
    outside: dict[GroupElement, Fraction] = {ident: Fraction(1)}
    for _ in range(horizon):
        stepped: dict[GroupElement, Fraction] = {}
        for g, w in outside.items():
            for h, wh in mu.atoms():
                prod = groups.multiply(spec, g, h)
                if prod in stepped:
                    stepped[prod] += w * wh
                else:
                    stepped[prod] = w * wh
        outside = {}
        for g, w in stepped.items():
            if member(g):
                captured[g] = captured.get(g, Fraction(0)) + w
            else:
                outside[g] = w
        if not outside:
            break
    tail = sum(outside.values(), Fraction(0))
    if tail > mass_tol:
        raise TailMassError(
            f"tail mass {tail} exceeds tolerance {mass_tol} "
            f"at horizon {horizon}", tail)
    return InducedMeasure(spec, captured, tail, horizon)


# ---------------------------------------------------------------------------
# subgroup reductions for limit measures


def reduce_dinf_translations(mu: FiniteMeasure) -> FiniteMeasure:
    """Rewrite a dihedral measure supported on translations as a 1-d walk."""
    if mu.spec != groups.DINF:
        raise EscapeError("expected a measure on the infinite dihedral group")
    pairs = []
    for (t, f), w in mu.atoms():
        if f:
            raise EscapeError(f"atom ({t},{f}) is not a translation")
        pairs.append(((t,), w))
    return FiniteMeasure.from_pairs(_Z1, pairs, exact=mu.exact)


def reduce_bs_even(mu: FiniteMeasure) -> FiniteMeasure:
    """Rewrite a Baumslag-Solitar measure with even b-exponents as a 2-d walk.

    The subgroup of even b-exponents is free abelian on a and b^2; the
    coordinates used are (a-exponent, half the b-exponent).
    """
    if mu.spec != groups.BS11:
        raise EscapeError("expected a Baumslag-Solitar measure")
    pairs = []
    for (m, nn), w in mu.atoms():
        if nn % 2:
            raise EscapeError(f"atom ({m},{nn}) has odd b-exponent")
        pairs.append(((m, nn // 2), w))
    return FiniteMeasure.from_pairs(_Z2, pairs, exact=mu.exact)


def auto_escape(mu: FiniteMeasure, tol: float = 1e-6,
                horizon: int = 100_000, samples: int = 2000,
                seed: int = 0) -> EscapeEstimate:
    """Best available estimator for a step law: exact series on (reduced)
    lattices, recurrence certificates for mean-zero low-dimension walks,
    Monte Carlo otherwise."""
    spec = mu.spec
    if spec == groups.DINF:
        try:
            return auto_escape(reduce_dinf_translations(mu), tol, horizon,
                               samples, seed)
        except EscapeError:
            return mc_escape(mu, horizon, samples, seed)
    if spec == groups.BS11:
        try:
            return auto_escape(reduce_bs_even(mu), tol, horizon, samples, seed)
        except EscapeError:
            return mc_escape(mu, horizon, samples, seed)
    if spec == _Z1:
        if drift_bound_z(mu).mean == 0:
            return recurrence_zero(
                mu, "mean-zero finite-support walk on the line is recurrent")
        return exact_escape_drifted_z(mu, tol)
    if spec == _Z2:
        fm = mu.as_float()
        mean = [0.0, 0.0]
        for (x, y), w in fm.atoms():
            mean[0] += x * w
            mean[1] += y * w
        exact_mean_zero = False
        if mu.exact:
            ex = sum(Fraction(x) * w for (x, y), w in mu.atoms())
            ey = sum(Fraction(y) * w for (x, y), w in mu.atoms())
            exact_mean_zero = ex == 0 and ey == 0
        if exact_mean_zero:
            return recurrence_zero(
                mu, "mean-zero finite-support walk in the plane is recurrent")
        try:
            return exact_escape_drifted_z2(mu, max(tol, 1e-4))
        except EscapeError:
            return mc_escape(mu, horizon, samples, seed)
    return mc_escape(mu, horizon, samples, seed)

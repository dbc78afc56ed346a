"""Entropy ladders, trajectory enumerations, and partition views.

The entropy ladder of a step law is the sequence ``H(mu^{*n})`` together
with the ratios ``H_n / n`` and increments ``d_n = H_{n+1} - H_n``.  In
rational mode every ladder value is carried as an exact log-linear form, so
the ladder invariants (subadditivity, nonincreasing increments, and
``d_n <= H_n / n``) are decided exactly; in float mode they are checked to a
small documented slack.

Trajectory enumerations list every length-``n`` increment sequence with its
exact weight; partition views label trajectories, and view entropies give
conditional-entropy identities something concrete to hold on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from math import log
from typing import Any, Callable, Hashable, Iterable, Sequence

from . import groups, measures
from .exact_entropy import LogLinear, entropy_form
from .measures import FiniteMeasure, MeasureError, SupportCapError
from .rng import sample_stream

FLOAT_SLACK = 1e-9
DEFAULT_ENUM_CAP = 10_000_000


# ---------------------------------------------------------------------------
# entropy ladders


@dataclass
class LadderCheck:
    name: str
    index: tuple[int, ...]
    ok: bool
    detail: str = ""


class EntropyLadder:
    """Values ``H_0 .. H_n`` of a walk's entropy along convolution powers."""

    def __init__(self, label: str, values: list[float],
                 forms: list[LogLinear] | None = None,
                 truncated: bool = False):
        self.label = label
        self.values = values
        self.forms = forms
        self.truncated = truncated

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    @property
    def exact(self) -> bool:
        return self.forms is not None

    def ratios(self) -> list[float]:
        return [self.values[n] / n for n in range(1, len(self.values))]

    def diffs(self) -> list[float]:
        return [self.values[n + 1] - self.values[n]
                for n in range(len(self.values) - 1)]

    def diff_form(self, n: int) -> LogLinear:
        return self.forms[n + 1] - self.forms[n]

    def to_rows(self) -> list[dict[str, Any]]:
        rows = []
        for n, h in enumerate(self.values):
            rows.append({
                "n": n,
                "H": h,
                "ratio": h / n if n else float("nan"),
                "diff": self.values[n + 1] - h if n + 1 < len(self.values) else float("nan"),
            })
        return rows

    @staticmethod
    def sum_of(a: "EntropyLadder", b: "EntropyLadder", label: str) -> "EntropyLadder":
        """Ladder of an independent product, by additivity of entropy."""
        n = min(a.n_max, b.n_max)
        values = [a.values[i] + b.values[i] for i in range(n + 1)]
        forms = None
        if a.forms is not None and b.forms is not None:
            forms = [a.forms[i] + b.forms[i] for i in range(n + 1)]
        return EntropyLadder(label, values, forms)

    # -- invariants ---------------------------------------------------------

    def verify(self, float_tol: float = FLOAT_SLACK) -> list[LadderCheck]:
        """Check subadditivity, nonincreasing diffs, and d_n <= H_n/n.

        Exact ladders are decided exactly through the log-linear sign
        machinery; float ladders allow ``float_tol`` slack.
        """
        checks: list[LadderCheck] = []
        n_max = self.n_max

        def nonneg(form: LogLinear | None, value: float, name: str,
                   index: tuple[int, ...]) -> None:
            if form is not None:
                ok = form.sign() >= 0
                detail = "" if ok else f"exact sign {form.sign()}"
            else:
                ok = value >= -float_tol
                detail = "" if ok else f"value {value:.3e}"
            checks.append(LadderCheck(name, index, ok, detail))

        vals = self.values
        forms = self.forms
        for n in range(1, n_max + 1):
            for m in range(1, n_max + 1 - n):
                form = (forms[n] + forms[m] - forms[n + m]) if forms else None
                nonneg(form, vals[n] + vals[m] - vals[n + m],
                       "subadditivity", (n, m))
        for n in range(n_max - 1):
            # d_n - d_{n+1} >= 0
            form = None
            if forms:
                form = (forms[n + 1] - forms[n]) - (forms[n + 2] - forms[n + 1])
            val = (vals[n + 1] - vals[n]) - (vals[n + 2] - vals[n + 1])
            nonneg(form, val, "diff-nonincreasing", (n,))
        for n in range(1, n_max):
            # H_n/n - d_n >= 0
            form = None
            if forms:
                form = forms[n].scale(Fraction(1, n)) - (forms[n + 1] - forms[n])
            val = vals[n] / n - (vals[n + 1] - vals[n])
            nonneg(form, val, "diff-below-average", (n,))
        return checks


def entropy_ladder(mu: FiniteMeasure, n_max: int,
                   cap: int = measures.DEFAULT_SUPPORT_CAP,
                   label: str | None = None,
                   allow_truncation: bool = False) -> EntropyLadder:
    """Ladder of ``mu`` up to ``n_max`` convolution powers.

    If the support cap is hit and truncation is allowed, the ladder returned
    is marked truncated at the largest completed power; otherwise the cap
    error propagates annotated with that power.
    """
    if n_max < 1:
        raise MeasureError("n_max must be >= 1")
    label = label or f"ladder({len(mu)} atoms)"
    values = [0.0]
    forms: list[LogLinear] | None = [LogLinear.zero()] if mu.exact else None
    cur = mu
    truncated = False
    for n in range(1, n_max + 1):
        if n > 1:
            try:
                cur = measures.convolve(cur, mu, cap)
            except SupportCapError as exc:
                if allow_truncation:
                    truncated = True
                    break
                raise SupportCapError(f"{exc} (largest completed power {n - 1})",
                                      completed=n - 1) from exc
        values.append(measures.entropy(cur))
        if forms is not None:
            forms.append(measures.exact_entropy(cur))
    return EntropyLadder(label, values, forms, truncated)


# ---------------------------------------------------------------------------
# the radial ladder of the simple walk on a free group


def free_group_distance_distribution(rank: int, n: int,
                                     exact: bool = False) -> list[Any]:
    """Law of the word-length after ``n`` steps of the simple walk.

    The distance process is the birth-death chain on 0, 1, 2, ... stepping
    0 -> 1 surely and k -> k+1 with probability (2d-1)/2d, k -> k-1 with
    probability 1/2d for k >= 1.
    """
    if rank < 1:
        raise MeasureError("rank must be >= 1")
    two_d = 2 * rank
    if exact:
        up = Fraction(two_d - 1, two_d)
        down = Fraction(1, two_d)
        zero: Any = Fraction(0)
    else:
        up = (two_d - 1) / two_d
        down = 1 / two_d
        zero = 0.0
    dist = [zero] * (n + 1)
    dist[0] = zero + 1
    for _ in range(n):
        nxt = [zero] * (n + 1)
        for k, mass in enumerate(dist):
            if not mass:
                continue
            if k == 0:
                nxt[1] += mass
            else:
                if k + 1 <= n:
                    nxt[k + 1] += mass * up
                nxt[k - 1] += mass * down
        dist = nxt
    return dist


def sphere_size(rank: int, k: int) -> int:
    if k == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (k - 1)


def free_group_srw_ladder(rank: int, n_max: int,
                          exact: bool = False) -> EntropyLadder:
    """Entropy ladder of the uniform-generator walk via the radial chain.

    Conditioned on its distance the walk is uniform on the sphere, so
    ``H_n = H(distance law) + sum_k P(dist = k) log(sphere size k)``.
    """
    two_d = 2 * rank
    if exact:
        up = Fraction(two_d - 1, two_d)
        down = Fraction(1, two_d)
        dist: list[Fraction] = [Fraction(1)]
        values = [0.0]
        forms: list[LogLinear] | None = [LogLinear.zero()]
    else:
        up = (two_d - 1) / two_d
        down = 1 / two_d
        dist = [1.0]
        values = [0.0]
        forms = None
    for n in range(1, n_max + 1):
        nxt = [dist[0] * 0] * (n + 1)
        for k, mass in enumerate(dist):
            if not mass:
                continue
            if k == 0:
                nxt[1] += mass
            else:
                nxt[k + 1] += mass * up
                nxt[k - 1] += mass * down
        dist = nxt
        if exact:
            form = entropy_form(q for q in dist if q)
            for k, q in enumerate(dist):
                if q and k:
                    form = form + LogLinear.of_log(sphere_size(rank, k), q)
            forms.append(form)
            values.append(form.to_float())
        else:
            h = 0.0
            for k, q in enumerate(dist):
                if q > 0:
                    h += -q * log(q) + q * log(sphere_size(rank, k))
            values.append(h)
    return EntropyLadder(f"free({rank}) srw radial", values, forms)


# ---------------------------------------------------------------------------
# trajectories


@dataclass
class Trajectory:
    """One walk path: the increments and the partial products."""

    spec: groups.GroupSpec
    increments: list[Any]
    positions: list[Any]  # length n + 1, starting at the identity

    def __post_init__(self) -> None:
        if len(self.positions) != len(self.increments) + 1:
            raise MeasureError("positions must be one longer than increments")


@dataclass
class CoarseTrajectory:
    """Positions observed every ``t0`` steps (multiples up to n)."""

    t0: int
    n: int
    positions: tuple[Any, ...]


def coarse_trajectory(traj: Trajectory, t0: int) -> CoarseTrajectory:
    if t0 < 1:
        raise MeasureError("t0 must be >= 1")
    n = len(traj.increments)
    picks = tuple(traj.positions[t] for t in range(t0, n + 1, t0))
    return CoarseTrajectory(t0, n, picks)


def sample_walk(mu: FiniteMeasure, n: int, seed: int, index: int = 0) -> Trajectory:
    """Sample one n-step trajectory from the (seed, index) stream."""
    fm = mu.as_float()
    atoms = list(fm.atoms())
    elems = [g for g, _ in atoms]
    cum = []
    acc = 0.0
    for _, w in atoms:
        acc += w
        cum.append(acc)
    cum[-1] = 1.0
    gen = sample_stream(seed, index)
    us = gen.random(n)
    spec = mu.spec
    pos = groups.identity(spec)
    increments = []
    positions = [pos]
    for u in us:
        i = 0
        while cum[i] < u:
            i += 1
        g = elems[i]
        increments.append(g)
        pos = groups.multiply(spec, pos, g)
        positions.append(pos)
    return Trajectory(spec, increments, positions)


class TrajectoryEnumeration:
    """All length-n increment sequences of a step law with exact weights."""

    def __init__(self, mu: FiniteMeasure, n: int,
                 cap: int = DEFAULT_ENUM_CAP):
        if n < 0:
            raise MeasureError("n must be >= 0")
        size = len(mu) ** n
        if size > cap:
            raise SupportCapError(
                f"enumeration of {size} trajectories exceeds cap {cap}")
        self.mu = mu
        self.n = n
        self.atom_elems = [g for g, _ in mu.atoms()]
        self.atom_weights = [w for _, w in mu.atoms()]
        self.spec = mu.spec
        seqs = list(iter_product(range(len(self.atom_elems)), repeat=n))
        self.seqs = seqs
        weights = []
        positions = []
        spec = mu.spec
        ident = groups.identity(spec)
        one = Fraction(1) if mu.exact else 1.0
        for seq in seqs:
            w = one
            pos = ident
            poss = []
            for idx in seq:
                w = w * self.atom_weights[idx]
                pos = groups.multiply(spec, pos, self.atom_elems[idx])
                poss.append(pos)
            weights.append(w)
            positions.append(tuple(poss))
        self.weights = weights          # weight of each trajectory
        self.positions = positions      # (w_1, .., w_n) per trajectory
        self.identity = ident

    def total(self):
        return sum(self.weights)


# ---------------------------------------------------------------------------
# partition views


@dataclass(frozen=True)
class PartitionView:
    """A labelling of trajectories; equal labels mean same partition class."""

    name: str
    fn: Callable[[TrajectoryEnumeration, int], Hashable]

    def label(self, enum: TrajectoryEnumeration, idx: int) -> Hashable:
        return self.fn(enum, idx)


def position_view(i: int) -> PartitionView:
    """The walk position after step i (i >= 1)."""
    if i < 1:
        raise MeasureError("position index must be >= 1")
    return PartitionView(f"w{i}", lambda enum, t: enum.positions[t][i - 1])


def increment_view(i: int) -> PartitionView:
    """The i-th increment (i >= 1)."""
    if i < 1:
        raise MeasureError("increment index must be >= 1")
    return PartitionView(f"g{i}", lambda enum, t: enum.seqs[t][i - 1])


def endpoint_view() -> PartitionView:
    return PartitionView("end", lambda enum, t: enum.positions[t][-1])


def coarse_view(t0: int) -> PartitionView:
    """Positions at multiples of t0."""
    if t0 < 1:
        raise MeasureError("t0 must be >= 1")

    def fn(enum: TrajectoryEnumeration, t: int) -> Hashable:
        return tuple(enum.positions[t][i - 1]
                     for i in range(t0, enum.n + 1, t0))

    return PartitionView(f"coarse{t0}", fn)


def joint_view(*views: PartitionView) -> PartitionView:
    name = "&".join(v.name for v in views)
    return PartitionView(
        name, lambda enum, t: tuple(v.label(enum, t) for v in views))


def _label_weights(enum: TrajectoryEnumeration, view: PartitionView) -> dict:
    out: dict[Hashable, Any] = {}
    for idx, w in enumerate(enum.weights):
        lab = view.label(enum, idx)
        out[lab] = out.get(lab, 0) + w
    return out


def view_entropy(enum: TrajectoryEnumeration, view: PartitionView) -> float:
    ws = _label_weights(enum, view)
    return -sum(float(w) * log(float(w)) for w in ws.values() if w > 0)


def view_entropy_form(enum: TrajectoryEnumeration,
                      view: PartitionView) -> LogLinear:
    if not enum.mu.exact:
        raise MeasureError("exact view entropy requires rational mode")
    return entropy_form(Fraction(w) for w in _label_weights(enum, view).values())


def conditional_entropy(enum: TrajectoryEnumeration, a: PartitionView,
                        b: PartitionView) -> float:
    """H(a | b) = H(a v b) - H(b)."""
    return view_entropy(enum, joint_view(a, b)) - view_entropy(enum, b)


def conditional_entropy_form(enum: TrajectoryEnumeration, a: PartitionView,
                             b: PartitionView) -> LogLinear:
    return view_entropy_form(enum, joint_view(a, b)) - view_entropy_form(enum, b)


# ---------------------------------------------------------------------------
# coarse entropy


def coarse_entropy(mu: FiniteMeasure, n: int, t0: int,
                   cap: int = measures.DEFAULT_SUPPORT_CAP) -> float:
    """Entropy of the coarse record: floor(n/t0) * H(mu^{*t0})."""
    if t0 < 1 or n < t0:
        raise MeasureError("need 1 <= t0 <= n")
    block = measures.convolution_power(mu, t0, cap)
    return (n // t0) * measures.entropy(block)


def coarse_entropy_form(mu: FiniteMeasure, n: int, t0: int,
                        cap: int = measures.DEFAULT_SUPPORT_CAP) -> LogLinear:
    if t0 < 1 or n < t0:
        raise MeasureError("need 1 <= t0 <= n")
    block = measures.convolution_power(mu, t0, cap)
    return measures.exact_entropy(block).scale(n // t0)

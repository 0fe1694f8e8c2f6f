"""Optical model: phase-randomized pulses on threshold detectors.

Each pulse carries a Poisson(mu0) photon number and is, with probability
p_mix, drawn from the maximally mixed qubit state instead of the pure |+>
state.  The basis choice routes the pulse to one of three measurement
arms (X with probability q, Y with q, Z with 1 - 2q); each photon reaches
a detector with efficiency eta, so only mu = eta * mu0 is observable.  In
the X arm a pure pulse sends every photon to detector 0, while a mixed
pulse, and any pulse in the Y or Z arm, routes each photon independently
50/50.  A threshold detector clicks when at least one photon arrives.

Expected click counts then have closed forms; writing E = exp(-mu) and
Eh = exp(-mu / 2), the per-pulse rates are

    X:  n0 = 1 - p - E + p Eh     n1 = p (Eh - E)    nd = p (1 + E - 2 Eh)
    Y,Z: n0 = n1 = Eh - E                            nd = 1 + E - 2 Eh

scaled by N q (X, Y) or N (1 - 2q) (Z).  The Monte Carlo sampler below is
an independent per-pulse implementation of the same model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .acquisition import (
    BasisCounts,
    ClickRecord,
    EpsilonBudget,
    fluctuation_adjust,
    hoeffding_theta,
    squash_bounds,
    worst_case_prob,
)

_MC_BLOCK = 1_000_000


@dataclass(frozen=True)
class ExperimentConfig:
    """Source, channel and sampling parameters of one run."""

    n_pulses: float
    q: float
    mu0: float
    eta: float
    p_mix: float

    def __post_init__(self) -> None:
        if self.n_pulses < 1:
            raise ValueError(f"n_pulses must be at least 1: {self.n_pulses!r}")
        if not 0.0 < self.q < 0.5:
            raise ValueError(f"q must lie strictly in (0, 1/2): {self.q!r}")
        if self.mu0 <= 0.0:
            raise ValueError(f"mu0 must be positive: {self.mu0!r}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta outside [0, 1]: {self.eta!r}")
        if not 0.0 <= self.p_mix <= 1.0:
            raise ValueError(f"p_mix outside [0, 1]: {self.p_mix!r}")

    @property
    def mu(self) -> float:
        """Detected mean photon number eta * mu0."""
        return self.eta * self.mu0


@dataclass(frozen=True)
class ClickStats:
    """Click counts per basis together with the pulse counts that produced them."""

    x: BasisCounts
    y: BasisCounts
    z: BasisCounts
    pulses_x: float
    pulses_y: float
    pulses_z: float

    def record(self) -> ClickRecord:
        return ClickRecord(x=self.x, y=self.y, z=self.z)

    def basis(self, name: str) -> BasisCounts:
        try:
            return getattr(self, name.lower())
        except AttributeError:
            raise ValueError(f"unknown basis {name!r}") from None


def analytic_click_stats(config: ExperimentConfig) -> ClickStats:
    """Expected click counts of the model, as real numbers."""
    n, q, p = config.n_pulses, config.q, config.p_mix
    e_full = math.exp(-config.mu)
    e_half = math.exp(-config.mu / 2.0)
    singles = e_half - e_full
    doubles = 1.0 + e_full - 2.0 * e_half
    x = BasisCounts(
        n0=n * q * (1.0 - p - e_full + p * e_half),
        n1=n * q * p * singles,
        nd=n * q * p * doubles,
    )
    y = BasisCounts(n0=n * q * singles, n1=n * q * singles, nd=n * q * doubles)
    w = n * (1.0 - 2.0 * q)
    z = BasisCounts(n0=w * singles, n1=w * singles, nd=w * doubles)
    return ClickStats(x=x, y=y, z=z, pulses_x=n * q, pulses_y=n * q, pulses_z=w)


def double_click_prob(m: int, eta: float, basis: str, p_mix: float = 0.0) -> float:
    """Probability that an m-photon pulse fires both detectors.

    In the Y and Z arms every photon routes 50/50, giving
    1 + (1 - eta)^m - 2 (1 - eta/2)^m.  In the X arm only the mixed
    component routes, so the same expression is weighted by p_mix.
    """
    if m < 0 or int(m) != m:
        raise ValueError(f"photon number must be a nonnegative integer: {m!r}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta outside [0, 1]: {eta!r}")
    if not 0.0 <= p_mix <= 1.0:
        raise ValueError(f"p_mix outside [0, 1]: {p_mix!r}")
    routed = 1.0 + (1.0 - eta) ** m - 2.0 * (1.0 - eta / 2.0) ** m
    basis = basis.lower()
    if basis == "x":
        return p_mix * routed
    if basis in ("y", "z"):
        return routed
    raise ValueError(f"unknown basis {basis!r}")


def _accumulate_block(rng: np.random.Generator, size: int, config: ExperimentConfig, acc: dict) -> None:
    q, p = config.q, config.p_mix
    u = rng.random(size)
    basis = np.where(u < q, 0, np.where(u < 2.0 * q, 1, 2)).astype(np.int8)
    photons = rng.poisson(config.mu0, size)
    survivors = rng.binomial(photons, config.eta)
    mixed = rng.random(size) < p
    routed0 = rng.binomial(survivors, 0.5)
    pure_x = (basis == 0) & ~mixed
    k0 = np.where(pure_x, survivors, routed0)
    k1 = survivors - k0
    click0 = k0 > 0
    click1 = k1 > 0
    for code, name in ((0, "x"), (1, "y"), (2, "z")):
        sel = basis == code
        acc[name]["pulses"] += int(sel.sum())
        acc[name]["n0"] += int((sel & click0 & ~click1).sum())
        acc[name]["n1"] += int((sel & click1 & ~click0).sum())
        acc[name]["nd"] += int((sel & click0 & click1).sum())


def mc_sample(config: ExperimentConfig, seed: int, workers: int = 1) -> ClickStats:
    """Monte Carlo click counts; deterministic given (config, seed, workers).

    The pulse stream is partitioned into `workers` contiguous chunks, each
    driven by its own counter-based generator spawned from the seed, so the
    result does not depend on execution order.
    """
    if workers < 1:
        raise ValueError(f"workers must be at least 1: {workers!r}")
    n = int(config.n_pulses)
    if n != config.n_pulses:
        raise ValueError(f"Monte Carlo sampling needs an integer pulse count: {config.n_pulses!r}")
    acc = {name: {"pulses": 0, "n0": 0, "n1": 0, "nd": 0} for name in ("x", "y", "z")}
    chunk_sizes = [n // workers + (1 if i < n % workers else 0) for i in range(workers)]
    for child, chunk in zip(np.random.SeedSequence(seed).spawn(workers), chunk_sizes):
        rng = np.random.Generator(np.random.Philox(child))
        done = 0
        while done < chunk:
            block = min(_MC_BLOCK, chunk - done)
            _accumulate_block(rng, block, config, acc)
            done += block
    counts = {
        name: BasisCounts(n0=acc[name]["n0"], n1=acc[name]["n1"], nd=acc[name]["nd"])
        for name in ("x", "y", "z")
    }
    return ClickStats(
        x=counts["x"],
        y=counts["y"],
        z=counts["z"],
        pulses_x=acc["x"]["pulses"],
        pulses_y=acc["y"]["pulses"],
        pulses_z=acc["z"]["pulses"],
    )


@dataclass(frozen=True)
class WorstCaseProbs:
    """Certified worst-case probabilities for the analytic model.

    p_x, p_y, p_z are the values entering the coherence evaluation: interval
    worst case, fluctuation-adjusted, floored at 1/2 (the Y and Z intervals
    of this source are symmetric about 1/2, so their certified worst case is
    exactly 1/2).  raw_* keep the unfloored lower-bound-minus-theta values
    for diagnostics; raw values below 1/2 correspond to the flipped labeling
    1 - raw of the same statistics.
    """

    p_x: float
    p_y: float
    p_z: float
    raw_x: float
    raw_y: float
    raw_z: float
    theta_x: float
    theta_y: float
    theta_z: float
    stats: ClickStats


def simulated_worst_probs(
    config: ExperimentConfig, budget: EpsilonBudget | None = None
) -> WorstCaseProbs:
    """Worst-case probabilities from the analytic expected counts.

    With budget=None the fluctuation terms are zero (infinite-data limit),
    which is useful for inspecting the bare interval worst case.
    """
    stats = analytic_click_stats(config)
    bounds = squash_bounds(stats.record())
    certified: dict[str, float] = {}
    raw: dict[str, float] = {}
    thetas: dict[str, float] = {}
    for name in ("x", "y", "z"):
        counts = stats.basis(name)
        theta = 0.0 if budget is None else hoeffding_theta(counts.n, budget.for_basis(name))
        p_w, _ = worst_case_prob(bounds, name)
        certified[name] = fluctuation_adjust(p_w, theta)
        raw[name] = bounds.basis(name).lower - theta
        thetas[name] = theta
    return WorstCaseProbs(
        p_x=certified["x"],
        p_y=certified["y"],
        p_z=certified["z"],
        raw_x=raw["x"],
        raw_y=raw["y"],
        raw_z=raw["z"],
        theta_x=thetas["x"],
        theta_y=thetas["y"],
        theta_z=thetas["z"],
        stats=stats,
    )

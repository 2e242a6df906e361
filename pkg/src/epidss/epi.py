"""SIR trajectory ensembles and their discretization into table rows.

A deterministic SIR model integrated by forward Euler provides the
trajectories; parameter uncertainty enters through uniform priors over
(beta, gamma). Binning a summary statistic of the ensemble yields a
probability row ready to install in a causal network table.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

STATISTICS: tuple[str, ...] = ("peak_infected", "attack_rate", "peak_time")


@dataclass(frozen=True)
class SirParams:
    """Parameters for one SIR run. Rates are per day; dt in days."""

    beta: float
    gamma: float
    population: float
    initial_infected: float
    horizon: float
    dt: float = 0.1

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if not 0 < self.initial_infected <= self.population:
            raise ValueError(
                f"initial_infected must be in (0, population], got "
                f"{self.initial_infected} of {self.population}"
            )
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.horizon < self.dt:
            raise ValueError("horizon must cover at least one step")

    @property
    def r0(self) -> float:
        return self.beta / self.gamma

    def replace(self, **changes) -> "SirParams":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class Trajectory:
    """Compartment sizes over a regular time grid; S + I + R = N throughout."""

    times: np.ndarray
    susceptible: np.ndarray
    infected: np.ndarray
    recovered: np.ndarray
    params: SirParams

    @property
    def peak_infected(self) -> float:
        return float(self.infected.max())

    @property
    def peak_time(self) -> float:
        return float(self.times[int(self.infected.argmax())])

    @property
    def attack_rate(self) -> float:
        """Fraction of the population ever infected by the end of the run."""
        return float(
            (self.params.population - self.susceptible[-1]) / self.params.population
        )

    def statistic(self, name: str) -> float:
        if name not in STATISTICS:
            raise ValueError(f"unknown statistic {name!r}; expected one of {STATISTICS}")
        return getattr(self, name)


def simulate_sir(p: SirParams) -> Trajectory:
    """Forward-Euler integration of dS = -bSI/N, dI = bSI/N - gI, dR = gI.

    Raises when a step drives a compartment negative, which means dt is
    too large for the given rates.
    """
    n_steps = int(round(p.horizon / p.dt))
    times = np.arange(n_steps + 1) * p.dt
    infection_rate = p.beta * p.dt / p.population
    recovery_rate = p.gamma * p.dt
    s, i, r = p.population - p.initial_infected, p.initial_infected, 0.0
    S, I, R = [s], [i], [r]
    for k in range(n_steps):
        new_infections = infection_rate * s * i
        new_recoveries = recovery_rate * i
        s -= new_infections
        i += new_infections - new_recoveries
        r += new_recoveries
        if s < 0 or i < 0:
            raise ValueError(
                f"compartment went negative at t={times[k + 1]:g} "
                f"(beta={p.beta}, gamma={p.gamma}, dt={p.dt}); use a smaller dt"
            )
        S.append(s)
        I.append(i)
        R.append(r)
    return Trajectory(times, np.array(S), np.array(I), np.array(R), p)


@dataclass(frozen=True)
class ParamPrior:
    """Independent uniform priors over beta and gamma (point mass allowed)."""

    beta: tuple[float, float]
    gamma: tuple[float, float]

    def __post_init__(self):
        for name, (lo, hi) in (("beta", self.beta), ("gamma", self.gamma)):
            if lo > hi:
                raise ValueError(f"{name} range has lower > upper: ({lo}, {hi})")
        if self.beta[0] < 0:
            raise ValueError("beta must be >= 0")
        if self.gamma[0] <= 0:
            raise ValueError("gamma must be > 0")

    @classmethod
    def point(cls, beta: float, gamma: float) -> "ParamPrior":
        return cls((beta, beta), (gamma, gamma))

    def sample(self, rng: np.random.Generator) -> tuple[float, float]:
        beta = float(rng.uniform(*self.beta)) if self.beta[0] < self.beta[1] else self.beta[0]
        gamma = float(rng.uniform(*self.gamma)) if self.gamma[0] < self.gamma[1] else self.gamma[0]
        return beta, gamma


@dataclass(frozen=True)
class TrajectoryEnsemble:
    """Trajectories simulated under parameters drawn from a prior."""

    members: tuple[tuple[SirParams, Trajectory], ...]
    seed: int

    def __post_init__(self):
        if not self.members:
            raise ValueError("ensemble must not be empty")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[tuple[SirParams, Trajectory]]:
        return iter(self.members)

    def statistics(self, name: str) -> np.ndarray:
        return np.array([traj.statistic(name) for _, traj in self.members])


def sample_ensemble(
    prior: ParamPrior, base: SirParams, n: int, seed: int
) -> TrajectoryEnsemble:
    """n independent draws from the prior, each simulated from `base`.

    The same seed always yields the identical ensemble; draws use
    per-member child seeds so the ensemble can be regenerated in parallel
    in any order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    root = np.random.SeedSequence(seed)
    members = []
    for child in root.spawn(n):
        rng = np.random.default_rng(child)
        beta, gamma = prior.sample(rng)
        params = base.replace(beta=beta, gamma=gamma)
        members.append((params, simulate_sir(params)))
    return TrajectoryEnsemble(tuple(members), seed)


def discretize_to_cpt(
    ens: TrajectoryEnsemble, statistic: str, bins: Sequence[float]
) -> np.ndarray:
    """Bin-occupancy frequencies of a summary statistic: a table row.

    `bins` are strictly increasing thresholds; membership is left-closed /
    right-open, with everything below the first threshold in bin 0 and
    everything at or above the last threshold in the final bin. The row
    has len(bins) + 1 entries and sums to 1.
    """
    thresholds = np.asarray(list(bins), dtype=float)
    if thresholds.size == 0:
        raise ValueError("bins must contain at least one threshold")
    if np.any(np.diff(thresholds) <= 0):
        raise ValueError(f"bins must be strictly increasing, got {thresholds.tolist()}")
    values = ens.statistics(statistic)
    indices = np.searchsorted(thresholds, values, side="right")
    counts = np.bincount(indices, minlength=thresholds.size + 1).astype(float)
    return counts / counts.sum()


EXPORT_COLUMNS = ("beta", "gamma", "peak_infected", "attack_rate", "peak_time")


def export_ensemble(ens: TrajectoryEnsemble, path: str | Path) -> None:
    """Audit export: one CSV row per draw with parameters and statistics."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(EXPORT_COLUMNS)
        for params, traj in ens:
            writer.writerow(
                [
                    repr(params.beta),
                    repr(params.gamma),
                    repr(traj.peak_infected),
                    repr(traj.attack_rate),
                    repr(traj.peak_time),
                ]
            )


def read_ensemble_export(path: str | Path) -> dict[str, np.ndarray]:
    """Columns of an audit export, keyed by name."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        rows = list(reader)
    return {
        col: np.array([float(r[col]) for r in rows]) for col in EXPORT_COLUMNS
    }

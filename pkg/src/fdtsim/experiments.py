"""Experiment configuration, presets, sweeps, and CSV output."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .evolve import EvolveConfig, Trajectory, run_experiment
from .games import BeautyConfig, BeautyGame, NewcombConfig, NewcombGame, PdConfig, PdGame

GAME_IDS = ("pd", "newcomb", "beauty")


@dataclass(frozen=True)
class ExperimentConfig:
    """One evolutionary run: the game, its parameters, and the loop settings."""

    game: str
    population: int
    generations: int
    rounds: int
    initial_shares: tuple[float, ...]
    birth_rate: float = 0.01
    mutation_rate: float = 0.001
    seed: int = 0
    game_params: dict = field(default_factory=dict)
    snapshot_every: int = 1

    def __post_init__(self) -> None:
        if self.game not in GAME_IDS:
            raise ValueError(f"unknown game {self.game!r}; expected one of {GAME_IDS}")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be >= 1")
        object.__setattr__(self, "initial_shares", tuple(self.initial_shares))
        object.__setattr__(self, "game_params", dict(self.game_params))

    def to_dict(self) -> dict:
        return {
            "game": self.game,
            "population": self.population,
            "generations": self.generations,
            "rounds": self.rounds,
            "initial_shares": list(self.initial_shares),
            "birth_rate": self.birth_rate,
            "mutation_rate": self.mutation_rate,
            "seed": self.seed,
            "game_params": dict(self.game_params),
            "snapshot_every": self.snapshot_every,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        return cls(
            game=data["game"],
            population=data["population"],
            generations=data["generations"],
            rounds=data["rounds"],
            initial_shares=tuple(data["initial_shares"]),
            birth_rate=data.get("birth_rate", 0.01),
            mutation_rate=data.get("mutation_rate", 0.001),
            seed=data.get("seed", 0),
            game_params=dict(data.get("game_params", {})),
            snapshot_every=data.get("snapshot_every", 1),
        )

    def make_game(self):
        params = self.game_params
        if self.game == "pd":
            return PdGame(PdConfig(**params))
        if self.game == "newcomb":
            return NewcombGame(NewcombConfig(**params))
        return BeautyGame(BeautyConfig(**params))

    def evolve_config(self) -> EvolveConfig:
        return EvolveConfig(
            population_size=self.population,
            generations=self.generations,
            rounds=self.rounds,
            birth_rate=self.birth_rate,
            mutation_rate=self.mutation_rate,
            initial_shares=self.initial_shares,
            seed=self.seed,
        )


def run(config: ExperimentConfig) -> Trajectory:
    return run_experiment(config.evolve_config(), config.make_game())


THIRD = 1.0 / 3.0

PRESETS: dict[str, ExperimentConfig] = {
    "pd-baseline": ExperimentConfig(
        game="pd",
        population=10_000,
        generations=750,
        rounds=100,
        initial_shares=(THIRD, THIRD, THIRD),
        game_params={"cc": 7.0, "cd": 1.0, "dc": 10.0, "dd": 4.0, "signal_accuracy": 0.9},
    ),
    "pd-invasion": ExperimentConfig(
        game="pd",
        population=10_000,
        generations=1_500,
        rounds=100,
        initial_shares=(0.9, 0.0, 0.1),
        game_params={"cc": 7.0, "cd": 1.0, "dc": 10.0, "dd": 4.0, "signal_accuracy": 0.9},
    ),
    "newcomb-baseline": ExperimentConfig(
        game="newcomb",
        population=3_000,
        generations=100,
        rounds=100,
        initial_shares=(0.5, 0.5),
        game_params={"high": 10_000.0, "low": 1_000.0, "accuracy": 0.99},
    ),
    "beauty-baseline": ExperimentConfig(
        game="beauty",
        population=10_000,
        generations=750,
        rounds=100,
        initial_shares=(THIRD, THIRD, THIRD),
        game_params={},
    ),
    "beauty-cdt-heavy": ExperimentConfig(
        game="beauty",
        population=10_000,
        generations=750,
        rounds=100,
        initial_shares=(0.1, 0.8, 0.1),
        game_params={},
    ),
}

SIGNAL_SWEEP_ACCURACIES = (0.5, 0.6, 0.65, 0.7, 0.8, 0.9)


@dataclass(frozen=True)
class SweepSpec:
    """Randomized (or gridded) multi-run sweep settings."""

    runs: int
    payoff_low: int = 1
    payoff_high: int = 1000
    accuracy_low: float = 0.5
    accuracy_high: float = 1.0
    reward_low: float = 1.0
    reward_high: float = 1_000_000.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.runs < 0:
            raise ValueError("runs must be nonnegative")
        if self.payoff_high < self.payoff_low or self.accuracy_high < self.accuracy_low:
            raise ValueError("sweep ranges must be nonempty")


def _run_seed(spec: SweepSpec, index: int) -> int:
    return int(np.random.SeedSequence(entropy=spec.seed, spawn_key=(index,)).generate_state(1)[0])


def draw_pd_payoffs(rng, low: int = 1, high: int = 1000) -> dict[str, float]:
    """Rejection-sample integer payoffs with the dilemma ordering DC>CC>DD>CD."""
    while True:
        dc, cc, dd, cd = (int(v) for v in rng.integers(low, high + 1, size=4))
        if dc > cc > dd > cd:
            return {"cc": float(cc), "cd": float(cd), "dc": float(dc), "dd": float(dd)}


def sweep_configs(kind: str, base: ExperimentConfig, spec: SweepSpec) -> list[tuple[ExperimentConfig, dict]]:
    """Per-run configs and the drawn parameters for a sweep of ``kind``.

    Kinds: ``pd-payoffs`` (random integer payoffs, dilemma ordering kept),
    ``pd-signal`` (fixed grid of signal accuracies), ``newcomb`` (random
    rewards with high > low and random predictor accuracy).
    """
    out: list[tuple[ExperimentConfig, dict]] = []
    if kind == "pd-signal":
        accuracies = SIGNAL_SWEEP_ACCURACIES[: spec.runs] if spec.runs else SIGNAL_SWEEP_ACCURACIES
        for i, accuracy in enumerate(accuracies):
            params = dict(base.game_params, signal_accuracy=accuracy)
            cfg = replace(base, game_params=params, seed=_run_seed(spec, i))
            out.append((cfg, {"signal_accuracy": accuracy}))
        return out
    for i in range(spec.runs):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=spec.seed, spawn_key=(i, 1)))
        if kind == "pd-payoffs":
            payoffs = draw_pd_payoffs(rng, spec.payoff_low, spec.payoff_high)
            params = dict(base.game_params, **payoffs)
            info = dict(payoffs)
        elif kind == "newcomb":
            low = rng.uniform(spec.reward_low, spec.reward_high)
            high = rng.uniform(spec.reward_low, spec.reward_high)
            while not high > low:
                low = rng.uniform(spec.reward_low, spec.reward_high)
                high = rng.uniform(spec.reward_low, spec.reward_high)
            accuracy = rng.uniform(spec.accuracy_low, spec.accuracy_high)
            params = dict(base.game_params, high=high, low=low, accuracy=accuracy)
            info = {"high": high, "low": low, "accuracy": accuracy}
        else:
            raise ValueError(f"unknown sweep kind {kind!r}")
        out.append((replace(base, game_params=params, seed=_run_seed(spec, i)), info))
    return out


def _fmt(value) -> str:
    return repr(float(value)) if isinstance(value, float) else str(value)


def trajectory_csv(trajectory: Trajectory, config: ExperimentConfig) -> str:
    """Render a trajectory as CSV with config metadata in comment lines.

    One row per snapshot: every ``snapshot_every`` generations plus the
    final generation. Output is byte-stable for a given config and seed.
    """
    lines = [
        "# config: " + json.dumps(config.to_dict(), sort_keys=True),
        f"# seed: {config.seed}",
        f"# fdtsim-version: {__version__}",
    ]
    names = trajectory.type_names
    header = ["generation"]
    for name in names:
        header += [f"{name}_count", f"{name}_share", f"{name}_mean_score"]
    lines.append(",".join(header))
    last = config.generations
    for record in trajectory.records:
        if record.generation % config.snapshot_every and record.generation != last:
            continue
        cells = [str(record.generation)]
        for count, share, mean in zip(record.counts, record.shares, record.mean_scores):
            cells += [str(count), _fmt(share), _fmt(mean)]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_trajectory(path, trajectory: Trajectory, config: ExperimentConfig) -> None:
    Path(path).write_text(trajectory_csv(trajectory, config))

"""Population container and the generation loop.

Each generation: play the configured number of rounds, then replace a fixed
fraction of the population (births weighted by score, deaths inversely
weighted by score, both sampled from the pre-update snapshot), then mutate a
smaller fraction to uniformly random types. All randomness flows from a
master seed through per-generation streams, so a run is reproducible
bit-for-bit regardless of how rounds are scheduled.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np


class NonPositiveScoreError(ValueError):
    """Reproduction weights need strictly positive scores."""


class GameAdapter(Protocol):
    type_names: tuple[str, ...]

    def play_generation(self, types: np.ndarray, rounds: int, rng) -> np.ndarray: ...


@dataclass
class Agent:
    type_tag: str
    score: float = 0.0


class Population:
    """Fixed-size collection of typed agents with accumulated scores."""

    def __init__(self, type_names: Sequence[str], types: np.ndarray, scores=None):
        self.type_names = tuple(type_names)
        self.types = np.asarray(types, dtype=np.int64)
        self.scores = (
            np.zeros(self.types.size) if scores is None else np.asarray(scores, dtype=float)
        )
        if self.scores.shape != self.types.shape:
            raise ValueError("scores and types must have the same length")

    @classmethod
    def from_shares(cls, type_names: Sequence[str], shares: Sequence[float], size: int):
        """Deterministic largest-remainder allocation of ``size`` agents."""
        shares = np.asarray(shares, dtype=float)
        if shares.shape != (len(type_names),):
            raise ValueError(f"expected {len(type_names)} shares, got {shares.shape}")
        if np.any(shares < 0.0) or abs(shares.sum() - 1.0) > 1e-9:
            raise ValueError(f"shares must be nonnegative and sum to 1, got {shares.tolist()}")
        exact = shares * size
        counts = np.floor(exact).astype(np.int64)
        remainder = exact - counts
        for i in np.argsort(-remainder, kind="stable")[: size - counts.sum()]:
            counts[i] += 1
        types = np.repeat(np.arange(len(type_names)), counts)
        return cls(type_names, types)

    @classmethod
    def from_agents(cls, type_names: Sequence[str], agents: Sequence[Agent]):
        index = {name: i for i, name in enumerate(type_names)}
        types = np.array([index[a.type_tag] for a in agents], dtype=np.int64)
        scores = np.array([a.score for a in agents])
        return cls(type_names, types, scores)

    @property
    def size(self) -> int:
        return self.types.size

    def counts(self) -> np.ndarray:
        return np.bincount(self.types, minlength=len(self.type_names))

    def shares(self) -> np.ndarray:
        return self.counts() / self.size

    def mean_scores(self) -> np.ndarray:
        """Per-type mean accumulated score; 0 for extinct types."""
        counts = self.counts()
        sums = np.bincount(self.types, weights=self.scores, minlength=len(self.type_names))
        return np.divide(sums, counts, out=np.zeros_like(sums), where=counts > 0)

    def agents(self) -> list[Agent]:
        return [Agent(self.type_names[t], s) for t, s in zip(self.types, self.scores)]


@dataclass(frozen=True)
class EvolveConfig:
    population_size: int
    generations: int
    rounds: int
    birth_rate: float = 0.01
    mutation_rate: float = 0.001
    initial_shares: tuple[float, ...] = ()
    seed: int = 0

    def __post_init__(self) -> None:
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.generations < 0 or self.rounds < 0:
            raise ValueError("generations and rounds must be nonnegative")
        for name in ("birth_rate", "mutation_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {rate}")
        if self.birth_rate > 0.0 and round(self.population_size * self.birth_rate) < 1:
            raise ValueError(
                "birth_rate is positive but rounds to zero replacements per generation"
            )
        object.__setattr__(self, "initial_shares", tuple(self.initial_shares))


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    counts: tuple[int, ...]
    shares: tuple[float, ...]
    mean_scores: tuple[float, ...]


@dataclass
class Trajectory:
    """Per-generation experiment record.

    ``counts``/``shares`` describe the population after that generation's
    reproduction step; ``mean_scores`` are per-type means from the rounds
    just played.
    """

    type_names: tuple[str, ...]
    records: list[GenerationRecord] = field(default_factory=list)

    def final_shares(self) -> dict[str, float]:
        last = self.records[-1]
        return dict(zip(self.type_names, last.shares))


def run_generation(pop: Population, game: GameAdapter, config: EvolveConfig, rng) -> Population:
    """Play one generation's rounds; returns the scored population."""
    scores = game.play_generation(pop.types, config.rounds, rng)
    return Population(pop.type_names, pop.types, scores)


def repopulate(pop: Population, config: EvolveConfig, rng) -> Population:
    """Score-weighted births, inverse-score-weighted deaths, then mutation.

    Births and deaths are both sampled from the pre-update snapshot and
    applied simultaneously, so a newborn cannot die in the generation it is
    born. Scores reset to zero.
    """
    n = pop.size
    types = pop.types.copy()
    replacements = round(n * config.birth_rate)
    if replacements:
        scores = pop.scores
        bad = np.flatnonzero(scores <= 0.0)
        if bad.size:
            raise NonPositiveScoreError(
                f"agent {bad[0]} has non-positive score {scores[bad[0]]}"
            )
        parents = rng.choice(n, size=replacements, replace=True, p=scores / scores.sum())
        inverse = 1.0 / scores
        victims = rng.choice(
            n, size=replacements, replace=False, p=inverse / inverse.sum()
        )
        types[victims] = pop.types[parents]
    mutants = round(n * config.mutation_rate)
    if mutants:
        chosen = rng.choice(n, size=mutants, replace=False)
        types[chosen] = rng.integers(0, len(pop.type_names), size=mutants)
    return Population(pop.type_names, types)


def _stream(seed: int, generation: int, phase: int):
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(generation, phase))
    )


def run_experiment(config: EvolveConfig, game: GameAdapter) -> Trajectory:
    """Run the full generation loop; deterministic given the master seed."""
    if len(config.initial_shares) != len(game.type_names):
        raise ValueError(
            f"initial_shares has {len(config.initial_shares)} entries, "
            f"game has {len(game.type_names)} types"
        )
    pop = Population.from_shares(game.type_names, config.initial_shares, config.population_size)
    trajectory = Trajectory(type_names=tuple(game.type_names))
    for generation in range(1, config.generations + 1):
        scored = run_generation(pop, game, config, _stream(config.seed, generation, 0))
        mean_scores = scored.mean_scores()
        pop = repopulate(scored, config, _stream(config.seed, generation, 1))
        trajectory.records.append(
            GenerationRecord(
                generation=generation,
                counts=tuple(int(c) for c in pop.counts()),
                shares=tuple(float(s) for s in pop.shares()),
                mean_scores=tuple(float(m) for m in mean_scores),
            )
        )
    return trajectory

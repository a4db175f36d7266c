"""Odds-form Bayesian inference of an opponent's type from a noisy signal.

A signal names one of k types and is correct with probability p; the
remaining mass splits evenly over the other k - 1 types.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class AllZeroPosteriorError(ValueError):
    """Prior and likelihood have disjoint support; posterior undefined."""


@dataclass(frozen=True)
class SignalModel:
    accuracy: float
    type_count: int = 3

    def __post_init__(self) -> None:
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError(f"accuracy must be in [0, 1], got {self.accuracy}")
        if self.type_count < 2:
            raise ValueError(f"type_count must be >= 2, got {self.type_count}")


def likelihood(signal_type: int, model: SignalModel) -> np.ndarray:
    """Odds over types for observing a signal naming ``signal_type``."""
    k = model.type_count
    if not 0 <= signal_type < k:
        raise IndexError(f"signal_type {signal_type} out of range for {k} types")
    odds = np.full(k, (1.0 - model.accuracy) / (k - 1))
    odds[signal_type] = model.accuracy
    return odds


def posterior(prior_shares, signal_type: int, model: SignalModel) -> np.ndarray:
    """Normalized entrywise product of prior odds and signal likelihood.

    The prior may be given as unnormalized odds; positive rescaling does not
    change the result.
    """
    prior = np.asarray(prior_shares, dtype=float)
    if prior.shape != (model.type_count,):
        raise ValueError(f"prior has shape {prior.shape}, expected ({model.type_count},)")
    if np.any(prior < 0.0):
        raise ValueError("prior odds must be nonnegative")
    product = prior * likelihood(signal_type, model)
    total = product.sum()
    if total <= 0.0:
        raise AllZeroPosteriorError(
            f"prior {prior.tolist()} and signal {signal_type} have disjoint support"
        )
    return product / total

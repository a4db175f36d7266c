"""Game logic for the three evolutionary games.

Signal Prisoner's Dilemma: three fixed types (Defector, Cooperator, FDT).
FDT agents read a noisy type signal, update by odds-form Bayes, and follow a
self-consistent signal -> action policy solved from the current population
shares. Transparent Newcomb: each agent faces a predictor alone. Beauty
contest: the whole population guesses at once and is scored by inverse error.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .beliefs import SignalModel, posterior

# Prisoner's Dilemma type codes; signal index i names type i.
PD_TYPES = ("defector", "cooperator", "fdt")
PD_DEFECTOR, PD_COOPERATOR, PD_FDT = 0, 1, 2

NEWCOMB_TYPES = ("cdt", "fdt")
NEWCOMB_CDT, NEWCOMB_FDT = 0, 1

BEAUTY_TYPES = ("random", "cdt", "fdt")
BEAUTY_RANDOM, BEAUTY_CDT, BEAUTY_FDT = 0, 1, 2

ONE_BOX, TWO_BOX = "one-box", "two-box"

PdPolicy = tuple[str, str, str]  # action ("C" or "D") per received signal


class NoFixedPointError(RuntimeError):
    """No self-consistent policy exists for the given parameters."""


@dataclass(frozen=True)
class PdConfig:
    cc: float = 7.0
    cd: float = 1.0
    dc: float = 10.0
    dd: float = 4.0
    signal_accuracy: float = 0.9

    def __post_init__(self) -> None:
        if not self.dc > self.cc > self.dd > self.cd:
            raise ValueError(
                "payoffs must satisfy DC > CC > DD > CD, got "
                f"DC={self.dc} CC={self.cc} DD={self.dd} CD={self.cd}"
            )
        if self.cd <= 0.0:
            raise ValueError("all payoffs must be positive")
        if not 0.0 <= self.signal_accuracy <= 1.0:
            raise ValueError(f"signal_accuracy must be in [0, 1], got {self.signal_accuracy}")

    def payoff(self, own: str, opp: str) -> float:
        """Row player's payoff for (own action, opponent action)."""
        if own == "C":
            return self.cc if opp == "C" else self.cd
        return self.dc if opp == "C" else self.dd

    def payoff_matrix(self) -> np.ndarray:
        """Indexed by (own cooperates, opponent cooperates) as 0/1."""
        return np.array([[self.dd, self.dc], [self.cd, self.cc]])


@dataclass(frozen=True)
class NewcombConfig:
    high: float = 10_000.0
    low: float = 1_000.0
    accuracy: float = 0.99

    def __post_init__(self) -> None:
        if not self.high > self.low > 0.0:
            raise ValueError(f"need high > low > 0, got high={self.high} low={self.low}")
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError(f"accuracy must be in [0, 1], got {self.accuracy}")


@dataclass(frozen=True)
class BeautyConfig:
    fraction: float = 2.0 / 3.0
    low: float = 0.0
    high: float = 100.0
    cap: float = 1000.0

    def __post_init__(self) -> None:
        if not 0.0 < self.fraction < 1.0:
            raise ValueError(f"fraction must be in (0, 1), got {self.fraction}")
        if self.cap <= 0.0:
            raise ValueError(f"cap must be positive, got {self.cap}")
        if not self.high > self.low:
            raise ValueError("guess range must be nonempty")


# ---------------------------------------------------------------------------
# Prisoner's Dilemma with type signals
# ---------------------------------------------------------------------------

def _signal_dist(true_type: int, p: float) -> np.ndarray:
    """Distribution of the signal an observer receives about ``true_type``."""
    dist = np.full(3, (1.0 - p) / 2.0)
    dist[true_type] = p
    return dist


def pd_component_eu(
    config: PdConfig,
    shares,
    policy: PdPolicy,
    signal: int,
    action: str,
) -> float:
    """Expected utility of answering ``signal`` with ``action``.

    The opponent's type is the Bayes posterior given the signal. An FDT
    opponent answers its own noisy signal about this agent using the same
    policy, with the component under consideration forced to ``action``
    (same function, same input, same output).
    """
    p = config.signal_accuracy
    post = posterior(shares, signal, SignalModel(p, 3))
    trial = list(policy)
    trial[signal] = action
    opp_signal = _signal_dist(PD_FDT, p)
    vs_fdt = sum(opp_signal[j] * config.payoff(action, trial[j]) for j in range(3))
    return (
        post[PD_DEFECTOR] * config.payoff(action, "D")
        + post[PD_COOPERATOR] * config.payoff(action, "C")
        + post[PD_FDT] * vs_fdt
    )


def _is_fixed_point(config: PdConfig, shares, policy: PdPolicy) -> bool:
    for s in range(3):
        eu_c = pd_component_eu(config, shares, policy, s, "C")
        eu_d = pd_component_eu(config, shares, policy, s, "D")
        held = eu_c if policy[s] == "C" else eu_d
        if held < max(eu_c, eu_d):
            return False
    return True


def solve_fdt_pd_policy(config: PdConfig, shares) -> PdPolicy:
    """Best self-consistent signal -> action policy for the FDT type.

    Enumerates all eight policies, keeps those where every component is a
    best response given the whole policy, and returns the fixed point with
    the highest expected round utility for the FDT type. Remaining ties
    break toward defection, signal by signal.
    """
    shares = np.asarray(shares, dtype=float)
    fixed = [
        pol
        for pol in itertools.product("DC", repeat=3)
        if _is_fixed_point(config, shares, pol)
    ]
    if not fixed:
        raise NoFixedPointError(
            f"no self-consistent policy for config={config} shares={shares.tolist()}"
        )

    def rank(pol: PdPolicy):
        fdt_eu = pd_expected_utilities(config, shares, pol)[PD_FDT]
        return (-fdt_eu, pol[0] == "C", pol[1] == "C", pol[2] == "C")

    return tuple(min(fixed, key=rank))


def pd_expected_utilities(config: PdConfig, shares, policy: PdPolicy) -> np.ndarray:
    """Analytic per-round expected utility for each type, in PD_TYPES order.

    Defectors and Cooperators ignore their signals; FDT agents follow the
    policy on an independent noisy signal of the opponent's true type.
    """
    shares = np.asarray(shares, dtype=float)
    p = config.signal_accuracy
    coop = np.array([a == "C" for a in policy], dtype=float)
    # Probability an FDT agent cooperates given the opponent's true type.
    fdt_coop = np.array([_signal_dist(t, p) @ coop for t in range(3)])

    def vs_mixture(own_coop: float, opp_coop: float) -> float:
        return (
            own_coop * opp_coop * config.cc
            + own_coop * (1.0 - opp_coop) * config.cd
            + (1.0 - own_coop) * opp_coop * config.dc
            + (1.0 - own_coop) * (1.0 - opp_coop) * config.dd
        )

    opp_coop_by_type = {
        PD_DEFECTOR: 0.0,
        PD_COOPERATOR: 1.0,
        PD_FDT: None,  # depends on the focal agent's own type
    }
    eus = np.zeros(3)
    for own in range(3):
        own_coop_by_opp = (
            fdt_coop if own == PD_FDT else np.full(3, 1.0 if own == PD_COOPERATOR else 0.0)
        )
        total = 0.0
        for opp in range(3):
            opp_coop = opp_coop_by_type[opp]
            if opp_coop is None:
                opp_coop = fdt_coop[own]
            total += shares[opp] * vs_mixture(own_coop_by_opp[opp], opp_coop)
        eus[own] = total
    return eus


def _fdt_round_action(opp_type: int, policy: PdPolicy, p: float, rng) -> str:
    if rng.random() < p:
        signal = opp_type
    else:
        signal = (opp_type + 1 + rng.integers(0, 2)) % 3
    return policy[signal]


def pd_play_round(
    type1: int, type2: int, policy: PdPolicy, config: PdConfig, rng
) -> tuple[float, float]:
    """Play one noisy-signal round; returns realized (utility1, utility2)."""

    def act(own: int, opp: int) -> str:
        if own == PD_DEFECTOR:
            return "D"
        if own == PD_COOPERATOR:
            return "C"
        return _fdt_round_action(opp, policy, config.signal_accuracy, rng)

    a1 = act(type1, type2)
    a2 = act(type2, type1)
    return config.payoff(a1, a2), config.payoff(a2, a1)


def pd_play_many(
    types1: np.ndarray, types2: np.ndarray, policy: PdPolicy, config: PdConfig, rng
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized pd_play_round over aligned arrays of type codes."""
    coop_given_signal = np.array([a == "C" for a in policy])
    p = config.signal_accuracy

    def actions(own: np.ndarray, opp: np.ndarray) -> np.ndarray:
        act = own == PD_COOPERATOR
        fdt = own == PD_FDT
        m = int(fdt.sum())
        if m:
            opp_fdt = opp[fdt]
            correct = rng.random(m) < p
            alt = rng.integers(0, 2, size=m)
            signal = np.where(correct, opp_fdt, (opp_fdt + 1 + alt) % 3)
            act[fdt] = coop_given_signal[signal]
        return act

    a1 = actions(types1, types2)
    a2 = actions(types2, types1)
    matrix = config.payoff_matrix()
    return matrix[a1.astype(int), a2.astype(int)], matrix[a2.astype(int), a1.astype(int)]


# ---------------------------------------------------------------------------
# Transparent Newcomb
# ---------------------------------------------------------------------------

def newcomb_decision(theory: str, config: NewcombConfig) -> str:
    """Would-be choice when both boxes are visibly full."""
    if theory not in NEWCOMB_TYPES:
        raise ValueError(f"unknown theory {theory!r}; expected one of {NEWCOMB_TYPES}")
    if theory == "cdt":
        return TWO_BOX
    p, high, low = config.accuracy, config.high, config.low
    one_box_eu = p * high + (1.0 - p) * low
    two_box_eu = (1.0 - p) * (high + low) + p * low
    return ONE_BOX if one_box_eu > two_box_eu else TWO_BOX


def newcomb_play_round(theory: str, config: NewcombConfig, rng) -> float:
    """One predictor encounter; returns the realized utility.

    The predictor reads the agent's would-be choice correctly with
    probability ``accuracy`` and fills the big box only on a one-box read.
    An agent facing a visibly empty big box settles for the low reward.
    """
    would_one_box = newcomb_decision(theory, config) == ONE_BOX
    correct = rng.random() < config.accuracy
    predicted_one_box = would_one_box if correct else not would_one_box
    if not predicted_one_box:
        return config.low
    return config.high if would_one_box else config.high + config.low


def newcomb_play_many(types: np.ndarray, config: NewcombConfig, rng) -> np.ndarray:
    """Vectorized newcomb_play_round over an array of type codes."""
    one_box_by_type = np.array(
        [newcomb_decision(name, config) == ONE_BOX for name in NEWCOMB_TYPES]
    )
    would_one_box = one_box_by_type[types]
    correct = rng.random(types.size) < config.accuracy
    predicted_one_box = would_one_box == correct
    return np.where(
        predicted_one_box,
        np.where(would_one_box, config.high, config.high + config.low),
        config.low,
    )


# ---------------------------------------------------------------------------
# Keynesian beauty contest
# ---------------------------------------------------------------------------

def beauty_guesses(shares, config: BeautyConfig) -> tuple[float, float]:
    """Simultaneous guesses for the CDT and FDT types given shares.

    CDT predicts the average from the Random and FDT types only (it treats
    other CDT guesses as independent of its own); FDT solves for the guess
    that is consistent with every FDT agent guessing the same. With Random
    and FDT both extinct the CDT guess falls back to 0.
    """
    r_rand, r_cdt, r_fdt = np.asarray(shares, dtype=float)
    f = config.fraction
    mean_random = (config.low + config.high) / 2.0
    observed = r_rand + r_fdt
    if observed > 0.0:
        alpha = f * r_rand * mean_random / observed
        beta = f * r_fdt / observed
    else:
        alpha = beta = 0.0
    # cdt = alpha + beta * fdt; substitute into the FDT consistency equation.
    denominator = 1.0 - f * r_cdt * beta - f * r_fdt
    fdt = (f * r_rand * mean_random + f * r_cdt * alpha) / denominator
    cdt = alpha + beta * fdt
    clamp = lambda g: min(max(g, config.low), config.high)
    return clamp(cdt), clamp(fdt)


def beauty_play_round(types: np.ndarray, config: BeautyConfig, rng) -> np.ndarray:
    """One whole-population guessing round; returns per-agent utilities.

    Utility is the inverse distance to ``fraction`` times the realized
    average, capped, so errors of 1/cap or less score exactly the cap.
    """
    types = np.asarray(types)
    if types.size == 0:
        raise ValueError("population is empty")
    counts = np.bincount(types, minlength=3)
    cdt_guess, fdt_guess = beauty_guesses(counts / types.size, config)
    guesses = np.empty(types.size)
    random_mask = types == BEAUTY_RANDOM
    guesses[random_mask] = rng.uniform(config.low, config.high, int(random_mask.sum()))
    guesses[types == BEAUTY_CDT] = cdt_guess
    guesses[types == BEAUTY_FDT] = fdt_guess
    target = config.fraction * guesses.mean()
    error = np.abs(target - guesses)
    return np.minimum(config.cap, 1.0 / np.maximum(error, 1.0 / config.cap))


# ---------------------------------------------------------------------------
# Adapters consumed by the generation loop
# ---------------------------------------------------------------------------

class PdGame:
    """Pairwise play: every round draws a fresh random perfect matching."""

    type_names = PD_TYPES
    pairwise = True

    def __init__(self, config: PdConfig):
        self.config = config

    def play_generation(self, types: np.ndarray, rounds: int, rng) -> np.ndarray:
        n = types.size
        shares = np.bincount(types, minlength=3) / n
        policy = solve_fdt_pd_policy(self.config, shares)
        # All matchings at once: one independent permutation per round.
        perms = np.tile(np.arange(n), (rounds, 1))
        rng.permuted(perms, axis=1, out=perms)
        if n % 2:
            perms = perms[:, :-1]  # one agent sits out each round
        left, right = perms[:, 0::2].ravel(), perms[:, 1::2].ravel()
        u_left, u_right = pd_play_many(
            types[left], types[right], policy, self.config, rng
        )
        scores = np.bincount(left, weights=u_left, minlength=n)
        scores += np.bincount(right, weights=u_right, minlength=n)
        return scores


class NewcombGame:
    """Each agent plays one independent predictor round per round."""

    type_names = NEWCOMB_TYPES
    pairwise = False

    def __init__(self, config: NewcombConfig):
        self.config = config

    def play_generation(self, types: np.ndarray, rounds: int, rng) -> np.ndarray:
        correct = rng.random((rounds, types.size)) < self.config.accuracy
        one_box_by_type = np.array(
            [newcomb_decision(name, self.config) == ONE_BOX for name in NEWCOMB_TYPES]
        )
        would_one_box = one_box_by_type[types]
        predicted_one_box = would_one_box[None, :] == correct
        utilities = np.where(
            predicted_one_box,
            np.where(would_one_box[None, :], self.config.high, self.config.high + self.config.low),
            self.config.low,
        )
        return utilities.sum(axis=0)


class BeautyGame:
    """One whole-population guessing round per round."""

    type_names = BEAUTY_TYPES
    pairwise = False

    def __init__(self, config: BeautyConfig):
        self.config = config

    def play_generation(self, types: np.ndarray, rounds: int, rng) -> np.ndarray:
        scores = np.zeros(types.size)
        for _ in range(rounds):
            scores += beauty_play_round(types, self.config, rng)
        return scores

"""Stochastic generators: Polya urns, birth-death dynamics, stick breaking."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import FrequencyTable
from .dist import _check_seed
from .errors import DomainError

__all__ = [
    "UrnConfig",
    "BirthDeathConfig",
    "simulate_preferential_attachment",
    "simulate_birth_death",
    "simulate_stick_breaking",
]


def _labels(n):
    width = len(str(n))
    return [f"s{i:0{width}d}" for i in range(1, n + 1)]


def _count(name, value, low):
    if isinstance(value, bool) or int(value) != value or value < low:
        raise DomainError(f"{name} must be an integer >= {low}, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class UrnConfig:
    n_urns: int
    n_balls: int
    seed: int = 0

    def __post_init__(self):
        _count("n_urns", self.n_urns, 1)
        if _count("n_balls", self.n_balls, 1) < self.n_urns:
            raise DomainError("n_balls must be at least n_urns (one seed ball per urn)")
        _check_seed(self.seed)


@dataclass(frozen=True)
class BirthDeathConfig:
    birth_rate: float
    death_rate: float
    n_types: int
    steps: int
    seed: int = 0

    def __post_init__(self):
        if not np.isfinite(self.birth_rate) or self.birth_rate <= 0:
            raise DomainError("birth_rate must be finite and positive")
        if not np.isfinite(self.death_rate) or self.death_rate < 0:
            raise DomainError("death_rate must be finite and nonnegative")
        _count("n_types", self.n_types, 1)
        _count("steps", self.steps, 0)
        _check_seed(self.seed)


def simulate_preferential_attachment(config: UrnConfig, language_id="urn"):
    """Polya urn: each new ball joins an urn with probability proportional to its size.

    Picking a uniformly random existing ball and copying its urn is the same
    as choosing an urn in proportion to its contents.
    """
    rng = np.random.default_rng(config.seed)
    owner = np.empty(config.n_balls, dtype=np.int64)
    owner[: config.n_urns] = np.arange(config.n_urns)
    u = rng.random(config.n_balls - config.n_urns)
    for step, t in enumerate(range(config.n_urns, config.n_balls)):
        owner[t] = owner[int(u[step] * t)]
    counts = np.bincount(owner, minlength=config.n_urns)
    return FrequencyTable(language_id, dict(zip(_labels(config.n_urns), counts.tolist())))


def simulate_birth_death(config: BirthDeathConfig, language_id="birth_death"):
    """Event-driven birth-death process over a fixed set of types.

    Each event is a birth with probability birth/(birth + death): one token is
    added to a uniformly chosen type. Otherwise one token is removed from a
    type chosen in proportion to its count, unless that type is down to its
    last token.
    """
    rng = np.random.default_rng(config.seed)
    n_types = config.n_types
    p_birth = config.birth_rate / (config.birth_rate + config.death_rate)
    births = rng.random(config.steps) < p_birth
    picks = rng.random(config.steps)

    counts = np.ones(n_types, dtype=np.int64)
    tokens = list(range(n_types))  # one entry per token, holding its type
    for is_birth, u in zip(births.tolist(), picks.tolist()):
        if is_birth:
            kind = int(u * n_types)
            counts[kind] += 1
            tokens.append(kind)
        else:
            j = int(u * len(tokens))
            kind = tokens[j]
            if counts[kind] > 1:
                counts[kind] -= 1
                tokens[j] = tokens[-1]
                tokens.pop()
    return FrequencyTable(language_id, dict(zip(_labels(n_types), counts.tolist())))


def simulate_stick_breaking(n, runs, seed=0):
    """Break [0, 1] at n-1 uniform points, ``runs`` times.

    Returns a ``(runs, n)`` array; each row holds the part lengths sorted in
    descending order.
    """
    n = _count("n", n, 1)
    runs = _count("runs", runs, 1)
    rng = np.random.default_rng(_check_seed(seed))
    cuts = np.sort(rng.random((runs, n - 1)), axis=1)
    edges = np.concatenate([np.zeros((runs, 1)), cuts, np.ones((runs, 1))], axis=1)
    parts = np.diff(edges, axis=1)
    return -np.sort(-parts, axis=1)

"""Seeded generators for datasets with known Simpson's paradoxes and known nulls.

Every generator is a pure function of its parameters and seed. Randomness comes
from ``numpy.random.default_rng`` (PCG64); the algorithm name is recorded in the
dataset metadata.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .dataset import Dataset

RNG_ALGORITHM = "numpy.default_rng/PCG64"


def _rng(seed):
    return np.random.default_rng(seed)


def _meta(kind: str, seed, **params) -> dict:
    return {"generator": kind, "seed": seed, "rng": RNG_ALGORITHM, **params}


@dataclass(frozen=True)
class SessionGenParams:
    """Answer sessions whose later answers are less likely to be accepted.

    Session length is truncated-geometric: a session grows by one answer with
    probability ``p_continue``, up to ``max_len``. The acceptance log-odds of the
    answer at position ``k`` in a session of length ``L`` is
    ``logit(base_accept) + within_slope * (k - 1) + between_offset * (L - 1)``.
    """

    n_sessions: int = 100_000
    p_continue: float = 0.5
    max_len: int = 8
    base_accept: float = 0.2
    within_slope: float = -0.3
    between_offset: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n_sessions < 1:
            raise ValueError("n_sessions must be positive")
        if not 0.0 < self.p_continue < 1.0:
            raise ValueError(f"p_continue must lie in (0, 1), got {self.p_continue}")
        if self.max_len < 1:
            raise ValueError("max_len must be positive")
        if not 0.0 < self.base_accept < 1.0:
            raise ValueError(f"base_accept must lie in (0, 1), got {self.base_accept}")
        probs = self.cell_probabilities()
        reachable = probs[np.triu_indices(self.max_len)]
        if not np.all((reachable > 0.0) & (reachable < 1.0)):
            raise ValueError("parameters push a (position, length) cell probability to 0 or 1")

    def cell_log_odds(self) -> np.ndarray:
        """``[k-1, L-1]`` log-odds table; only ``k <= L`` cells are reachable."""
        k = np.arange(self.max_len)[:, None]
        length = np.arange(self.max_len)[None, :]
        base = np.log(self.base_accept / (1.0 - self.base_accept))
        return base + self.within_slope * k + self.between_offset * length

    def cell_probabilities(self) -> np.ndarray:
        return special.expit(self.cell_log_odds())

    def length_distribution(self) -> np.ndarray:
        """``P(L = l)`` for ``l = 1..max_len``; the cap absorbs the geometric tail."""
        q = self.p_continue
        probs = (1.0 - q) * q ** np.arange(self.max_len)
        probs[-1] = q ** (self.max_len - 1)
        return probs

    def expected_acceptance_by_position(self) -> np.ndarray:
        """Exact ``E[accepted | position = k]`` pooled over session lengths."""
        p_len = self.length_distribution()
        cells = self.cell_probabilities()
        out = np.empty(self.max_len)
        for k in range(self.max_len):
            w = p_len[k:]
            out[k] = np.dot(w, cells[k, k:]) / w.sum()
        return out


def gen_sessions(p: SessionGenParams) -> Dataset:
    rng = _rng(p.seed)
    lengths = np.minimum(rng.geometric(1.0 - p.p_continue, size=p.n_sessions), p.max_len)
    session_length = np.repeat(lengths, lengths)
    starts = np.cumsum(lengths) - lengths
    position = np.arange(len(session_length)) - np.repeat(starts, lengths) + 1
    prob = p.cell_probabilities()[position - 1, session_length - 1]
    accepted = (rng.random(len(prob)) < prob).astype(np.float64)
    return Dataset(
        {"position": position, "session_length": session_length, "accepted": accepted},
        "accepted",
        kinds={"position": "integer", "session_length": "integer"},
        metadata=_meta("sessions", p.seed, n_sessions=p.n_sessions, p_continue=p.p_continue,
                       max_len=p.max_len, base_accept=p.base_accept,
                       within_slope=p.within_slope, between_offset=p.between_offset),
    )


@dataclass(frozen=True)
class ReversalGenParams:
    n_per_group: int = 50_000
    group_centers: tuple = (0.0, 3.0)
    group_offsets: tuple = (2.0, -2.0)
    within_slope: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n_per_group < 1:
            raise ValueError("n_per_group must be positive")
        if len(self.group_centers) != len(self.group_offsets) or not self.group_centers:
            raise ValueError("group_centers and group_offsets must be non-empty and equally long")
        values = list(self.group_centers) + list(self.group_offsets) + [self.within_slope]
        if not np.all(np.isfinite(values)):
            raise ValueError("generator parameters must be finite")


def gen_reversal(p: ReversalGenParams) -> Dataset:
    """Groups with shifted predictor means and outcome offsets sharing one slope.

    Columns ``x_p``, ``group`` (1-based integer) and ``outcome``.
    """
    rng = _rng(p.seed)
    xs, groups, ys = [], [], []
    for g, (center, offset) in enumerate(zip(p.group_centers, p.group_offsets), start=1):
        x = rng.normal(center, 1.0, size=p.n_per_group)
        prob = special.expit(offset + p.within_slope * x)
        xs.append(x)
        groups.append(np.full(p.n_per_group, g, dtype=np.float64))
        ys.append((rng.random(p.n_per_group) < prob).astype(np.float64))
    return Dataset(
        {"x_p": np.concatenate(xs), "group": np.concatenate(groups), "outcome": np.concatenate(ys)},
        "outcome",
        kinds={"group": "categorical"},
        metadata=_meta("reversal", p.seed, n_per_group=p.n_per_group,
                       group_centers=list(p.group_centers),
                       group_offsets=list(p.group_offsets), within_slope=p.within_slope),
    )


def gen_null(n: int, m_vars: int, seed=0) -> Dataset:
    """Independent Uniform(0, 1) columns ``x1..xm`` and a fair-coin outcome."""
    if n < 1:
        raise ValueError("n must be positive")
    if m_vars < 2:
        raise ValueError("m_vars must be at least 2")
    rng = _rng(seed)
    cols = {f"x{j + 1}": rng.random(n) for j in range(m_vars)}
    cols["outcome"] = (rng.random(n) < 0.5).astype(np.float64)
    return Dataset(cols, "outcome", metadata=_meta("null", seed, n=n, m_vars=m_vars))


@dataclass(frozen=True)
class MajorityMaskParams:
    """A majority subgroup whose trend dominates a pooled multivariate fit.

    ``position`` takes 1 with probability ``p_major`` and 2 or 3 otherwise.
    ``time_gap`` is Uniform(0, 2), shifted up by ``major_shift`` in group 1.
    The log-odds are ``intercept + group_step * (c - 1) + slope_c * time_gap``,
    where ``slope_c`` is ``slope_major`` for group 1 and ``slope_minor``
    for the other groups. Every cell probability must stay within [0.1, 0.9].
    """

    n: int = 100_000
    p_major: float = 0.65
    slope_major: float = -0.6
    slope_minor: float = 0.6
    intercept: float = 0.5
    group_step: float = -0.3
    major_shift: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if not 0.0 < self.p_major < 1.0:
            raise ValueError("p_major must lie in (0, 1)")
        lo = special.expit(self._log_odds(np.array([1.0, 2.0, 3.0]), self._x_low()))
        hi = special.expit(self._log_odds(np.array([1.0, 2.0, 3.0]), self._x_low() + 2.0))
        if np.any(np.minimum(lo, hi) < 0.1) or np.any(np.maximum(lo, hi) > 0.9):
            raise ValueError("cell probabilities must stay within [0.1, 0.9]")

    def _x_low(self):
        return np.array([self.major_shift, 0.0, 0.0])

    def _log_odds(self, group, x):
        slope = np.where(group == 1.0, self.slope_major, self.slope_minor)
        return self.intercept + self.group_step * (group - 1.0) + slope * x


def gen_majority_mask(seed=0, **overrides) -> Dataset:
    p = MajorityMaskParams(seed=seed, **overrides)
    rng = _rng(seed)
    minor = (1.0 - p.p_major) / 2.0
    group = rng.choice(np.array([1.0, 2.0, 3.0]), size=p.n, p=[p.p_major, minor, minor])
    time_gap = rng.uniform(0.0, 2.0, size=p.n) + np.where(group == 1.0, p.major_shift, 0.0)
    prob = special.expit(p._log_odds(group, time_gap))
    accepted = (rng.random(p.n) < prob).astype(np.float64)
    return Dataset(
        {"time_gap": time_gap, "position": group, "accepted": accepted},
        "accepted",
        kinds={"position": "categorical"},
        metadata=_meta("majority-mask", seed, n=p.n, p_major=p.p_major,
                       slope_major=p.slope_major, slope_minor=p.slope_minor,
                       intercept=p.intercept, group_step=p.group_step,
                       major_shift=p.major_shift),
    )

"""Discrete-time TASEP with parallel update, step initial data, tagged particle.

Particles hop one site to the right. At every time step, each particle draws a
stay indicator (probability q_i) and advances iff the indicator is 0 and its
right neighbor's site was empty at the start of the step; the update is fully
synchronous. Labels count from the front: particle 1 is rightmost, the tagged
particle M starts at the origin, and L(t, M) is the distance it has travelled.

The module also carries the deterministic mean-position law: the limit of
L(uM, M)/M is 0 up to u = 1/(1-q), follows a square-root curve A2(u) in the
bulk, and for a slow front particle (qbar > q) switches at u_c to the linear
branch A_G(u) dragged by the defect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_CHUNK_SIZE = 64


@dataclass(frozen=True)
class SystemSpec:
    """Particle count, per-particle stay rates q_1..q_M, and a time horizon."""

    m: int
    rates: tuple
    horizon: int

    def __post_init__(self):
        object.__setattr__(self, "rates", tuple(float(q) for q in self.rates))
        if self.m < 1:
            raise ValueError("need at least one particle")
        if len(self.rates) != self.m:
            raise ValueError(f"need {self.m} rates, got {len(self.rates)}")
        if any(not (0.0 <= q < 1.0) for q in self.rates):
            raise ValueError("stay rates must lie in [0, 1)")
        if self.horizon < 0:
            raise ValueError("horizon must be non-negative")

    def rate_array(self):
        return np.asarray(self.rates, dtype=float)


def uniform_rates(m, q):
    return (float(q),) * m


def defect_rates(m, q, defects):
    """Rate vector equal to q except at the 1-based labels in `defects`.

    `defects` maps particle label -> stay rate of that defect particle.
    """
    rates = [float(q)] * m
    for label, rate in defects.items():
        if not 1 <= label <= m:
            raise ValueError(f"defect label {label} outside 1..{m}")
        rates[label - 1] = float(rate)
    return tuple(rates)


@dataclass
class Configuration:
    """positions[j] is the site of particle j+1; strictly decreasing."""

    positions: np.ndarray
    time: int = 0


def make_step_initial(spec):
    """Particle j at site M - j; the tagged particle M sits at the origin."""
    return Configuration(np.arange(spec.m - 1, -1, -1, dtype=np.int64), 0)


def step(config, spec, rng):
    """One synchronous update. Blocking uses the pre-step configuration."""
    stay = rng.random(spec.m) < spec.rate_array()
    move = ~stay
    pos = config.positions
    move[1:] &= (pos[:-1] - pos[1:]) > 1
    return Configuration(pos + move, config.time + 1)


def trajectory_from_uniforms(rates, uniforms, tagged=None):
    """Distances travelled by a tagged particle, driven by given uniforms.

    uniforms has shape (T, m); row t drives the step from time t to t+1
    (particle i stays when uniforms[t, i-1] < q_i). This is the single
    reference implementation of the dynamics; the ensemble sampler is its
    vectorization and is tested to agree with it.

    Returns an integer array of length T+1 starting at 0.
    """
    rates = np.asarray(rates, dtype=float)
    uniforms = np.asarray(uniforms, dtype=float)
    m = rates.size
    if uniforms.ndim != 2 or uniforms.shape[1] != m:
        raise ValueError("uniform block must have one column per particle")
    tagged = m if tagged is None else tagged
    pos = np.arange(m - 1, -1, -1, dtype=np.int64)
    start = pos[tagged - 1]
    out = np.zeros(uniforms.shape[0] + 1, dtype=np.int64)
    for t in range(uniforms.shape[0]):
        move = uniforms[t] >= rates
        move[1:] &= (pos[:-1] - pos[1:]) > 1
        pos += move
        out[t + 1] = pos[tagged - 1] - start
    return out


def _sample_uniforms(m, horizon, master_seed, index):
    """The uniform block of sample `index`: an independent counter-based
    substream keyed by (master_seed, index), so results do not depend on
    how samples are grouped into chunks."""
    gen = np.random.Generator(np.random.Philox(key=[master_seed, index]))
    return gen.random((horizon, m))


def positions_trajectory(spec, seed):
    """Sites of every particle at times 0..horizon, one trajectory.

    Row t is the configuration after t synchronous steps, column j the
    site of particle j+1. Uses the substream of sample index 0, so the
    tagged column agrees with simulate_tagged at every time.
    """
    uniforms = _sample_uniforms(spec.m, spec.horizon, seed, 0)
    rates = spec.rate_array()
    pos = np.arange(spec.m - 1, -1, -1, dtype=np.int64)
    out = np.empty((spec.horizon + 1, spec.m), dtype=np.int64)
    out[0] = pos
    for t in range(spec.horizon):
        move = uniforms[t] >= rates
        move[1:] &= (pos[:-1] - pos[1:]) > 1
        pos = pos + move
        out[t + 1] = pos
    return out


def simulate_tagged(spec, times, seed):
    """L(t, M) at the requested times for a single trajectory.

    Identical to row 0 of sample_ensemble with master_seed = seed.
    """
    times = [int(t) for t in times]
    _check_times(spec, times)
    horizon = max(times, default=0)
    path = trajectory_from_uniforms(
        spec.rates, _sample_uniforms(spec.m, horizon, seed, 0)
    )
    return np.array([path[t] for t in times], dtype=np.int64)


def _check_times(spec, times):
    for t in times:
        if t < 0:
            raise ValueError("times must be non-negative")
        if t > spec.horizon:
            raise ValueError(f"time {t} exceeds horizon {spec.horizon}")


def sample_ensemble(spec, times, n_samples, master_seed, chunk_size=DEFAULT_CHUNK_SIZE):
    """n_samples independent trajectories, reported at the requested times.

    Returns an (n_samples, len(times)) integer array. Sample k is driven by
    the substream keyed (master_seed, k); reruns and different chunk sizes
    give bit-identical output.
    """
    times = [int(t) for t in times]
    _check_times(spec, times)
    if n_samples < 1:
        raise ValueError("need at least one sample")
    horizon = max(times, default=0)
    rates = spec.rate_array()
    m = spec.m
    start0 = np.arange(m - 1, -1, -1, dtype=np.int64)

    by_time = {}
    for col, t in enumerate(times):
        by_time.setdefault(t, []).append(col)

    out = np.zeros((n_samples, len(times)), dtype=np.int64)
    for lo in range(0, n_samples, chunk_size):
        hi = min(lo + chunk_size, n_samples)
        stay = np.stack(
            [_sample_uniforms(m, horizon, master_seed, k) for k in range(lo, hi)]
        ) < rates
        pos = np.tile(start0, (hi - lo, 1))
        for cols in by_time.get(0, []):
            out[lo:hi, cols] = 0
        for t in range(horizon):
            move = ~stay[:, t, :]
            move[:, 1:] &= (pos[:, :-1] - pos[:, 1:]) > 1
            pos += move
            for cols in by_time.get(t + 1, []):
                out[lo:hi, cols] = pos[:, m - 1] - start0[m - 1]
    return out


# ---------------------------------------------------------------------------
# Deterministic mean-position law
# ---------------------------------------------------------------------------

def mean_bulk(u, q):
    """Square-root mean-position branch, valid for u >= 1/(1-q)."""
    u = np.asarray(u, dtype=float)
    return (1 - q) * u - (1 - 2 * q) - 2 * np.sqrt(q * (1 - q) * (u - 1))


def mean_defect(u, q, qbar):
    """Linear branch when a slow front particle drags the tagged one."""
    if qbar <= q:
        raise ValueError("linear branch requires qbar > q")
    u = np.asarray(u, dtype=float)
    return (1 - qbar) * u - (1 - qbar) * qbar / (qbar - q)


def critical_scaled_time(q, qbar):
    """Scaled time u_c where the mean law switches from the square-root
    branch to the defect-dragged linear branch."""
    if qbar == q:
        raise ValueError("u_c undefined when qbar equals q")
    return (qbar**2 - 2 * q * qbar + q) / (qbar - q) ** 2


def mean_position_theory(u, q, qbar=None):
    """Deterministic limit A(u) of L(uM, M)/M.

    With no defect (qbar is None or qbar <= q) the law is 0 until the tagged
    particle starts moving at u = 1/(1-q) and the square-root branch after.
    With qbar > q the square-root branch holds only up to u_c(q, qbar) and
    the linear branch takes over beyond it. Accepts scalar or array u.
    """
    u = np.asarray(u, dtype=float)
    onset = 1.0 / (1.0 - q)
    bulk = np.where(u > onset, mean_bulk(np.maximum(u, onset), q), 0.0)
    if qbar is None or qbar <= q:
        return bulk if bulk.ndim else float(bulk)
    uc = critical_scaled_time(q, qbar)
    value = np.where(u > uc, mean_defect(np.maximum(u, onset), q, qbar), bulk)
    return value if value.ndim else float(value)

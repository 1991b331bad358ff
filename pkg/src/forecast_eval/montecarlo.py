"""Monte Carlo tools: simulated fixed-b quantiles and DM size experiments.

Replications are split into fixed-size blocks, each drawing from its own
child of ``numpy.random.SeedSequence(seed)``. Block boundaries do not depend
on ``n_jobs``, so results are identical for any thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .inference import MIN_DM_OBS, bandwidth_rule, critical_values

__all__ = ["simulate_fixed_b_cv", "SizeResult", "dm_size_experiment", "batch_dm_statistics"]

BLOCK = 2000


def _blocks(n_reps, seed):
    sizes = [BLOCK] * (n_reps // BLOCK)
    if n_reps % BLOCK:
        sizes.append(n_reps % BLOCK)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    return list(zip(sizes, children))


def _run(fn, blocks, n_jobs):
    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            return list(pool.map(lambda blk: fn(*blk), blocks))
    return [fn(*blk) for blk in blocks]


def batch_dm_statistics(d: np.ndarray, bandwidth: int) -> np.ndarray:
    """DM t-statistics for each row of ``d`` (shape ``(reps, n)``).

    Autocovariances come from a zero-padded FFT of each demeaned row, so this
    does not share code with :func:`forecast_eval.inference.bartlett_lrv`.
    """
    reps, n = d.shape
    c = d - d.mean(axis=1, keepdims=True)
    nfft = 1 << (2 * n - 1).bit_length()
    F = np.fft.rfft(c, nfft, axis=1)
    acov = np.fft.irfft(F * np.conj(F), nfft, axis=1)[:, :bandwidth] / n
    j = np.arange(bandwidth)
    w = np.where(j == 0, 1.0, 2.0 * (1.0 - j / bandwidth))
    lrv = acov @ w
    return d.mean(axis=1) / np.sqrt(lrv / n)


def simulate_fixed_b_cv(b, levels=(0.10, 0.05), n_steps=1000, n_reps=50_000, seed=0, n_jobs=None):
    """Two-sided fixed-b critical values by simulation.

    Gaussian increments on a grid of ``n_steps`` approximate Brownian motion;
    the bandwidth is ``round(b * n_steps)``. Returns ``{level: cv}`` from the
    empirical quantiles of ``|t|``.
    """
    M = max(1, int(round(b * n_steps)))

    def block(size, ss):
        rng = np.random.default_rng(ss)
        return np.abs(batch_dm_statistics(rng.standard_normal((size, n_steps)), M))

    stats = np.concatenate(_run(block, _blocks(n_reps, seed), n_jobs))
    return {lv: float(np.quantile(stats, 1.0 - lv)) for lv in levels}


@dataclass(frozen=True)
class SizeResult:
    n: int
    bandwidth: int
    n_reps: int
    reject_fixed_b: dict
    reject_normal: dict


def dm_size_experiment(n=20, n_reps=20_000, seed=0, bandwidth=None, n_jobs=None) -> SizeResult:
    """Empirical rejection rates of the DM test under the null.

    Loss differentials are iid standard normal, so every rejection is a
    false positive. Rates are reported at 10% and 5% for fixed-b and
    standard normal critical values.
    """
    if n < MIN_DM_OBS:
        raise ValueError(f"n must be at least {MIN_DM_OBS}")
    M = bandwidth_rule(n) if bandwidth is None else bandwidth

    def block(size, ss):
        rng = np.random.default_rng(ss)
        return batch_dm_statistics(rng.standard_normal((size, n)), M)

    stats = np.abs(np.concatenate(_run(block, _blocks(n_reps, seed), n_jobs)))
    fb = critical_values(M / n, "fixed_b")
    sn = critical_values(M / n, "standard_normal")
    return SizeResult(
        n=n,
        bandwidth=M,
        n_reps=n_reps,
        reject_fixed_b={0.10: float(np.mean(stats > fb[0])), 0.05: float(np.mean(stats > fb[1]))},
        reject_normal={0.10: float(np.mean(stats > sn[0])), 0.05: float(np.mean(stats > sn[1]))},
    )

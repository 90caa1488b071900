"""Seeded Monte Carlo estimates of the eight crossing probabilities.

Trial ``i`` draws its configuration with :func:`random_config` seeded by
``splitmix64(seed + i * golden_gamma)``, so every trial is reproducible on
its own and results do not depend on how trials are split across workers.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .crossings import ALL_SPECS, LR_PLUS_OCC, LR_STAR_OCC, Rect, crossing_exists
from .oracle import random_config

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
BLOCK = 4096


def splitmix64(x: int) -> int:
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(seed: int, index: int) -> int:
    return splitmix64((seed + index * GOLDEN_GAMMA) & MASK64)


def _count_block(job) -> list[int]:
    m, n, p, seed, lo, hi = job
    counts = [0] * len(ALL_SPECS)
    r = Rect(m, n)
    for i in range(lo, hi):
        cfg = random_config(m, n, p, trial_seed(seed, i))
        for k, spec in enumerate(ALL_SPECS):
            counts[k] += crossing_exists(cfg, r, spec)
    return counts


@dataclass(frozen=True)
class McResult:
    m: int
    n: int
    p: float
    trials: int
    seed: int
    counts: dict  # CrossingSpec -> int

    def estimate(self, spec) -> float:
        return self.counts[spec] / self.trials

    def pair_sum(self, a, b) -> float:
        # One division, so a count sum equal to ``trials`` gives exactly 1.0.
        return (self.counts[a] + self.counts[b]) / self.trials

    def to_json(self) -> dict:
        pairs, seen = [], set()
        for s in ALL_SPECS:
            if s in seen:
                continue
            d = s.dual()
            seen.update((s, d))
            total = self.counts[s] + self.counts[d]
            pairs.append({
                "events": [s.key, d.key],
                "count_sum": total,
                "estimate_sum": self.pair_sum(s, d),
                "identity_exact": total == self.trials,
            })
        return {
            "rect": [self.m, self.n],
            "p": self.p,
            "trials": self.trials,
            "seed": self.seed,
            "generator": "mt19937 per trial, seeded by splitmix64(seed + i*0x9E3779B97F4A7C15)",
            "counts": {s.key: self.counts[s] for s in ALL_SPECS},
            "estimates": {s.key: self.estimate(s) for s in ALL_SPECS},
            "dual_pairs": pairs,
            "lr_plus_plus_lr_star_occupied": self.pair_sum(LR_PLUS_OCC, LR_STAR_OCC),
        }


def run_monte_carlo(m: int, n: int, p: float, trials: int, seed: int, workers: int = 1) -> McResult:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    jobs = [(m, n, p, seed, lo, min(trials, lo + BLOCK)) for lo in range(0, trials, BLOCK)]
    if workers == 1 or len(jobs) == 1:
        parts = map(_count_block, jobs)
        totals = _sum(parts)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            totals = _sum(pool.map(_count_block, jobs))
    return McResult(m, n, p, trials, seed, dict(zip(ALL_SPECS, totals)))


def _sum(parts) -> list[int]:
    totals = [0] * len(ALL_SPECS)
    for part in parts:
        for k, v in enumerate(part):
            totals[k] += v
    return totals

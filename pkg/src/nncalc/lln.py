"""Hierarchical binomial distributions and the two-level Bernoulli bound.

A coin with success probability p at level k, observed by an agent computing
in the level-l arithmetic, has outcome probabilities

    p(n) = g^l[ C(N,n) * g^{k-l}(q)^{N-n} * g^{k-l}(p)^n ],

with mean g^l[N g^{k-l}(p)] and variance g^l[N g^{k-l}(p) g^{k-l}(q)].
Deviation probabilities obey a Chebyshev-type bound whose level-l form is
g^l(pq_eff / (N eps^2)); for a symmetric coin the bound reduces to
g^l(1/(4 N eps^2)) at every k.  Monte Carlo verification samples the
effective level-0 probability g^{k-l}(p), which is how the level structure
collapses before the classical Bernoulli argument applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ApplicabilityError, DomainError
from .generator import ExtendedGenerator, eval_iterate, sine_extended

#: switch binomial coefficients to log-space above this trial count
_EXACT_COMB_MAX = 50


def _default(egen: ExtendedGenerator | None) -> ExtendedGenerator:
    return sine_extended() if egen is None else egen


@dataclass(frozen=True)
class LevelBinomial:
    """N trials with success probability p at level k, observed at level l."""

    N: int
    p: float
    k: int = 0
    l: int = 0
    egen: ExtendedGenerator | None = None

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("trial count must be a positive integer")
        if not (0.0 <= self.p <= 1.0):
            raise DomainError(f"success probability must lie in [0,1], got {self.p!r}")

    def _egen(self) -> ExtendedGenerator:
        return _default(self.egen)

    def effective_p(self) -> float:
        """g^{k-l}(p): the success probability seen after collapsing levels."""
        return eval_iterate(self._egen(), self.k - self.l, self.p)

    def effective_q(self) -> float:
        return eval_iterate(self._egen(), self.k - self.l, 1.0 - self.p)


def _comb(N: int, n: int) -> float:
    if N <= _EXACT_COMB_MAX:
        return float(math.comb(N, n))
    return math.exp(math.lgamma(N + 1) - math.lgamma(n + 1) - math.lgamma(N - n + 1))


def pmf(dist: LevelBinomial, n: int) -> float:
    """Probability of n successes, pushed to the observer level l."""
    if not (0 <= n <= dist.N):
        raise DomainError(f"n must lie in 0..{dist.N}, got {n}")
    p_eff = dist.effective_p()
    q_eff = dist.effective_q()
    base = _comb(dist.N, n) * q_eff ** (dist.N - n) * p_eff ** n
    return eval_iterate(dist._egen(), dist.l, base)


def pmf_base_vector(dist: LevelBinomial) -> np.ndarray:
    """All N+1 outcome probabilities before the level-l push (the pullbacks)."""
    p_eff = dist.effective_p()
    q_eff = dist.effective_q()
    ns = np.arange(dist.N + 1)
    combs = np.array([_comb(dist.N, int(n)) for n in ns])
    return combs * q_eff ** (dist.N - ns) * p_eff ** ns


def moments(dist: LevelBinomial) -> tuple[float, float]:
    """(mean, variance) of the success count in the observer arithmetic."""
    egen = dist._egen()
    p_eff = dist.effective_p()
    q_eff = dist.effective_q()
    mean = eval_iterate(egen, dist.l, dist.N * p_eff)
    var = eval_iterate(egen, dist.l, dist.N * p_eff * q_eff)
    return mean, var


def chebyshev_bound(dist: LevelBinomial, eps: float) -> float:
    """Level-l bound on the probability of an eps-deviation of the frequency.

    Valid only when N >= p_eff q_eff / eps^2 (otherwise the bound exceeds 1);
    violating that raises ApplicabilityError naming the minimal N.
    """
    if eps <= 0.0:
        raise DomainError("eps must be positive")
    p_eff = dist.effective_p()
    q_eff = dist.effective_q()
    min_n = p_eff * q_eff / eps ** 2
    if dist.N < min_n:
        raise ApplicabilityError(
            f"bound applies only for N >= {min_n:.6g} (got N={dist.N})",
            min_trials=math.ceil(min_n))
    return eval_iterate(dist._egen(), dist.l, p_eff * q_eff / (dist.N * eps ** 2))


@dataclass(frozen=True)
class SimulationReport:
    empirical_exceed_rate: float
    bound: float

    def to_json_dict(self) -> dict:
        return {"empirical_exceed_rate": self.empirical_exceed_rate, "bound": self.bound}


def simulate(dist: LevelBinomial, eps: float, trials: int, seed: int) -> SimulationReport:
    """Monte Carlo estimate of the deviation probability against the level-0 bound.

    Samples are binomial draws at the effective level-0 probability from a
    counter-based Philox stream keyed by ``seed``; results are
    bit-reproducible for a given (seed, trials, N) and the exceedance count
    is order independent.
    """
    if trials < 1:
        raise DomainError("trials must be a positive integer")
    if eps <= 0.0:
        raise DomainError("eps must be positive")
    p_eff = dist.effective_p()
    q_eff = dist.effective_q()
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    counts = rng.binomial(dist.N, p_eff, size=trials)
    exceed = np.abs(p_eff - counts / dist.N) >= eps
    rate = float(np.count_nonzero(exceed)) / trials
    bound = p_eff * q_eff / (dist.N * eps ** 2)
    return SimulationReport(empirical_exceed_rate=rate, bound=float(bound))


def fig3_table(l_values: Iterable[int], n_range: Sequence[int], eps: float,
               egen: ExtendedGenerator | None = None) -> list[tuple[int, int, float]]:
    """Rows (l, N, g^l(1/(4 N eps^2))) for a symmetric coin.

    For p = 1/2 the effective probability is 1/2 at every k, so the bound
    depends on k only through l.  Rows are strictly decreasing in N for
    fixed l because g^l is strictly increasing.
    """
    if eps <= 0.0:
        raise DomainError("eps must be positive")
    egen = _default(egen)
    rows = []
    for l in l_values:
        for N in n_range:
            if N < 1:
                raise DomainError("trial counts must be positive")
            bound = egen.iterate(1.0 / (4.0 * N * eps ** 2), l)
            rows.append((int(l), int(N), float(bound)))
    return rows

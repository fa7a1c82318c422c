"""Random generation of telegraph paths and Monte Carlo estimation.

Paths are sampled either unconditionally (Poisson switch count) or
conditionally on the number of switches, in which case the switch times
are uniform order statistics on (0, t).  Batch helpers evaluate path
functionals (position, running maximum, first-passage and return times,
and the exact singular events M = 0 and M = T(t)) over many paths at once
with numpy; the scalar samplers return :class:`TelegraphPath` objects.

Randomness follows a stream contract: a 64-bit seed plus a stream id
select a reproducible, statistically independent generator, so estimates
partitioned across workers are deterministic regardless of scheduling.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .params import MotionParams, VelocitySign
from .path import TelegraphPath

__all__ = [
    "RngStream",
    "McReport",
    "HistogramBin",
    "sample_unconditional",
    "sample_conditional",
    "sample_switches_batch",
    "vertices_batch",
    "position_batch",
    "running_max_batch",
    "first_passage_batch",
    "first_return_batch",
    "max_is_zero_batch",
    "max_equals_position_batch",
    "mc_probability",
    "mc_density_histogram",
]


@dataclass(frozen=True)
class RngStream:
    """Seed plus stream id identifying a reproducible generator.

    Distinct (seed, stream_id) pairs give statistically independent
    sequences; identical pairs reproduce identical draws.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.default_rng(ss)


@dataclass(frozen=True)
class McReport:
    """Point estimate with binomial standard error and optional reference."""

    estimate: float
    std_error: float
    replications: int
    analytic: Optional[float] = None
    z_score: Optional[float] = None

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.std_error < 0.0:
            raise ValueError("std_error must be >= 0")


@dataclass(frozen=True)
class HistogramBin:
    """One histogram bin of a Monte Carlo density estimate."""

    lo: float
    hi: float
    report: McReport


def _resolve_v0(v0_policy, rng: np.random.Generator) -> VelocitySign:
    if v0_policy == "uniform" or v0_policy is None:
        return VelocitySign.PLUS if rng.random() < 0.5 else VelocitySign.MINUS
    if isinstance(v0_policy, VelocitySign):
        return v0_policy
    return VelocitySign.from_str(v0_policy)


def sample_unconditional(
    params: MotionParams, t: float, v0_policy, rng: np.random.Generator
) -> TelegraphPath:
    """Path with Poisson(lambda*t) switches at uniform order statistics.

    ``v0_policy`` is a :class:`VelocitySign`, one of the strings
    ``"+"/"-"``, or ``"uniform"`` for a fair coin on the initial velocity.
    """
    if t <= 0.0:
        raise ValueError("t must be positive")
    v0 = _resolve_v0(v0_policy, rng)
    n = int(rng.poisson(params.lam * t))
    times = np.sort(rng.uniform(0.0, t, size=n))
    return TelegraphPath(v0, t, tuple(times.tolist()))


def sample_conditional(
    n: int, t: float, v0: VelocitySign, rng: np.random.Generator
) -> TelegraphPath:
    """Path with exactly n switches, i.i.d. uniform on (0, t), sorted."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if t <= 0.0:
        raise ValueError("t must be positive")
    times = np.sort(rng.uniform(0.0, t, size=n))
    return TelegraphPath(v0, t, tuple(times.tolist()))


# ---------------------------------------------------------------------------
# Vectorized batch functionals


def sample_switches_batch(
    n: int, t: float, reps: int, rng: np.random.Generator
) -> np.ndarray:
    """(reps, n) array of sorted switch times conditional on n switches."""
    return np.sort(rng.uniform(0.0, t, size=(reps, n)), axis=1)


def vertices_batch(
    v0: VelocitySign, switches: np.ndarray, t: float, c: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Vertex times and positions for a batch of equal-count paths."""
    sw = np.atleast_2d(np.asarray(switches, dtype=float))
    m, n = sw.shape
    times = np.empty((m, n + 2))
    times[:, 0] = 0.0
    times[:, 1 : n + 1] = sw
    times[:, n + 1] = t
    vel = v0.value_sign * c * (-1.0) ** np.arange(n + 1)
    pos = np.empty((m, n + 2))
    pos[:, 0] = 0.0
    np.cumsum(vel * np.diff(times, axis=1), axis=1, out=pos[:, 1:])
    return times, pos


def position_batch(
    v0: VelocitySign, switches: np.ndarray, t: float, c: float
) -> np.ndarray:
    """Positions at the horizon."""
    _, pos = vertices_batch(v0, switches, t, c)
    return pos[:, -1]


def running_max_batch(
    v0: VelocitySign, switches: np.ndarray, t: float, c: float
) -> np.ndarray:
    """Running maxima; the maximum of a piecewise-linear path is a vertex."""
    _, pos = vertices_batch(v0, switches, t, c)
    return pos.max(axis=1)


def first_passage_batch(
    v0: VelocitySign, switches: np.ndarray, t: float, c: float, beta: float
) -> np.ndarray:
    """First times the paths reach level beta > 0; NaN where never reached."""
    times, pos = vertices_batch(v0, switches, t, c)
    hit = pos >= beta
    reached = hit.any(axis=1)
    idx = np.argmax(hit, axis=1)
    rows = np.arange(pos.shape[0])
    idx = np.maximum(idx, 1)  # idx 0 only occurs for unreached rows
    # the crossing segment rises from below beta, so its slope is +c
    out = times[rows, idx - 1] + (beta - pos[rows, idx - 1]) / c
    out[~reached] = np.nan
    return out


def first_return_batch(
    v0: VelocitySign, switches: np.ndarray, t: float, c: float
) -> np.ndarray:
    """First strictly positive zero of each path; NaN where none exists."""
    times, pos = vertices_batch(v0, switches, t, c)
    sgn = float(v0.value_sign)
    # a Plus path returns when a vertex position drops to <= 0, and
    # symmetrically for Minus; the first vertex is excluded
    back = sgn * pos[:, 1:] <= 0.0
    returned = back.any(axis=1)
    idx = np.argmax(back, axis=1) + 1
    rows = np.arange(pos.shape[0])
    out = times[rows, idx - 1] + sgn * pos[rows, idx - 1] / c
    out[~returned] = np.nan
    return out


def max_is_zero_batch(
    v0: VelocitySign, switches: np.ndarray, t: float, c: float
) -> np.ndarray:
    """Exact indicator of the event M(t) = 0 (the path never goes positive)."""
    _, pos = vertices_batch(v0, switches, t, c)
    return pos.max(axis=1) <= 0.0


def max_equals_position_batch(
    v0: VelocitySign, switches: np.ndarray, t: float, c: float
) -> np.ndarray:
    """Exact indicator of M(t) = T(t) (the endpoint attains the maximum)."""
    _, pos = vertices_batch(v0, switches, t, c)
    return pos.max(axis=1) <= pos[:, -1]


# ---------------------------------------------------------------------------
# Monte Carlo estimators


def _partition(reps: int, parts: int) -> List[int]:
    base, extra = divmod(reps, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def mc_probability(
    event: Callable[[TelegraphPath, MotionParams], bool],
    params: MotionParams,
    t: float,
    reps: int,
    v0=VelocitySign.PLUS,
    n: Optional[int] = None,
    seed: int = 0,
    threads: int = 1,
    analytic: Optional[float] = None,
) -> McReport:
    """Binomial estimate of P{event} over sampled paths.

    ``n=None`` samples unconditionally (Poisson switch count), otherwise
    conditionally on n switches.  Work is split into one stream per
    thread; the result depends only on (seed, threads, reps), not on
    scheduling.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    threads = max(1, threads)

    def run(part: int, count: int) -> int:
        rng = RngStream(seed, part).generator()
        hits = 0
        for _ in range(count):
            if n is None:
                p = sample_unconditional(params, t, v0, rng)
            else:
                p = sample_conditional(n, t, _resolve_v0(v0, rng), rng)
            hits += bool(event(p, params))
        return hits

    counts = _partition(reps, threads)
    if threads == 1:
        total = run(0, counts[0])
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            total = sum(pool.map(run, range(threads), counts))
    p_hat = total / reps
    se = float(np.sqrt(p_hat * (1.0 - p_hat) / reps))
    z = None
    if analytic is not None and se > 0.0:
        z = (p_hat - analytic) / se
    return McReport(p_hat, se, reps, analytic, z)


_FUNCTIONALS = {
    "position": position_batch,
    "max": running_max_batch,
    "return": first_return_batch,
}


def _functional_samples(
    functional: str,
    v0: VelocitySign,
    n: Optional[int],
    params: MotionParams,
    t: float,
    reps: int,
    rng: np.random.Generator,
    beta: Optional[float] = None,
) -> np.ndarray:
    """Draw one batch of functional values; NaN marks undefined values."""
    if n is None:
        counts = rng.poisson(params.lam * t, size=reps)
        out = np.empty(reps)
        for k in np.unique(counts):
            sel = counts == k
            sw = sample_switches_batch(int(k), t, int(sel.sum()), rng)
            out[sel] = _eval_functional(functional, v0, sw, t, params.c, beta)
        return out
    sw = sample_switches_batch(n, t, reps, rng)
    return _eval_functional(functional, v0, sw, t, params.c, beta)


def _eval_functional(functional, v0, sw, t, c, beta):
    if functional == "fpt":
        if beta is None:
            raise ValueError("functional 'fpt' needs a level beta")
        return first_passage_batch(v0, sw, t, c, beta)
    try:
        fn = _FUNCTIONALS[functional]
    except KeyError:
        raise ValueError(f"unknown functional {functional!r}") from None
    return fn(v0, sw, t, c)


def mc_density_histogram(
    functional: str,
    v0: VelocitySign,
    n: Optional[int],
    params: MotionParams,
    t: float,
    bins: int,
    value_range: Tuple[float, float],
    reps: int,
    seed: int = 0,
    threads: int = 1,
    beta: Optional[float] = None,
    analytic: Optional[Callable[[float], float]] = None,
) -> List[HistogramBin]:
    """Histogram density estimate of a path functional with bin-wise errors.

    ``functional`` is one of ``position``, ``max``, ``fpt`` (needs
    ``beta``), ``return``.  Per bin, the density estimate is
    frequency/width with standard error sqrt(p(1-p)/reps)/width, where an
    empty bin falls back to p = 1/reps so the error is never zero.  When
    ``analytic`` (a density callable) is given, each bin carries a z-score
    against the bin-averaged analytic value.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    lo, hi = value_range
    if not lo < hi:
        raise ValueError("empty value range")
    threads = max(1, threads)

    def run(part: int, count: int) -> np.ndarray:
        rng = RngStream(seed, part).generator()
        vals = _functional_samples(functional, v0, n, params, t, count, rng, beta)
        vals = vals[~np.isnan(vals)]
        counts, _ = np.histogram(vals, bins=bins, range=(lo, hi))
        return counts

    parts = _partition(reps, threads)
    if threads == 1:
        counts = run(0, parts[0])
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = sum(pool.map(run, range(threads), parts))

    edges = np.linspace(lo, hi, bins + 1)
    width = (hi - lo) / bins
    out = []
    for i in range(bins):
        p_hat = float(counts[i]) / reps
        estimate = p_hat / width
        se = float(np.sqrt(max(p_hat, 1.0 / reps) * (1.0 - p_hat) / reps)) / width
        ref = z = None
        if analytic is not None:
            # compare against the bin average of the analytic density
            grid = np.linspace(edges[i], edges[i + 1], 9)[1:-1]
            ref = float(np.mean([analytic(float(g)) for g in grid]))
            z = (estimate - ref) / se
        report = McReport(estimate, se, reps, ref, z)
        out.append(HistogramBin(float(edges[i]), float(edges[i + 1]), report))
    return out

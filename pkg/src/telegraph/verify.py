"""Numerical cross-checks for the telegraph law implementations.

Four independent instruments: a hand-rolled adaptive Simpson integrator
(so normalization audits do not depend on the code under test), a suite
of pointwise identities between the implemented laws, a diffusion-limit
comparison of the first-passage law against the Brownian one, and an
exhaustive discrete enumeration that replays the reflection argument on
simple random walks with exact integer counts.
"""

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from . import laws
from .params import MotionParams, VelocitySign
from .path import TelegraphPath, running_max, running_min
from .sampler import sample_switches_batch, RngStream

__all__ = [
    "CheckResult",
    "QuadratureError",
    "quadrature",
    "run_identity_suite",
    "normalization_suite",
    "return_printed_suite",
    "mc_cross_suite",
    "kac_limit_check",
    "random_walk_enumeration",
    "results_to_json",
    "results_to_table",
]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one numeric check."""

    name: str
    passed: bool
    observed: float
    expected: float
    tolerance: float
    detail: str = ""


class QuadratureError(RuntimeError):
    """Adaptive subdivision hit the depth limit before converging."""

    def __init__(self, message: str, partial: float):
        super().__init__(message)
        self.partial = partial


_MAX_DEPTH = 40


def _simpson(f, a, fa, b, fb, m, fm):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(f, a, fa, m, fm, lm, flm)
    right = _simpson(f, m, fm, b, fb, rm, frm)
    err = left + right - whole
    if abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    if depth >= _MAX_DEPTH:
        raise QuadratureError(
            f"no convergence on [{a}, {b}] after depth {_MAX_DEPTH}",
            left + right,
        )
    return _adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) + _adaptive(
        f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1
    )


def quadrature(
    f: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float = 1e-10,
    edges: Sequence[float] = (),
) -> float:
    """Adaptive Simpson integral of f over (a, b).

    ``edges`` lists interior points where the integrand changes analytic
    form (support boundaries, kinks); the interval is split there first so
    each Simpson recursion sees a smooth piece.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    pts = [a] + sorted(p for p in edges if a < p < b) + [b]
    total = 0.0
    tol_per = abs_tol / (len(pts) - 1)
    for lo, hi in zip(pts[:-1], pts[1:]):
        m = 0.5 * (lo + hi)
        flo, fhi, fm = f(lo), f(hi), f(m)
        whole = _simpson(f, lo, flo, hi, fhi, m, fm)
        total += _adaptive(f, lo, flo, hi, fhi, m, fm, whole, tol_per, 0)
    return total


# ---------------------------------------------------------------------------
# Identity suite


def _grid(lo: float, hi: float, k: int) -> np.ndarray:
    """k interior points of (lo, hi), endpoints excluded."""
    return np.linspace(lo, hi, k + 2)[1:-1]


def run_identity_suite(
    n_max: int = 8,
    grid_points: int = 20,
    t: float = 1.0,
    c: float = 1.0,
    seed: int = 0,
) -> List[CheckResult]:
    """Pointwise identities between the implemented laws on dense grids.

    Each identity contributes one result summarizing the worst grid point.
    The path-level min/max flip is checked on pseudorandomly drawn paths
    with a fixed seed, so the suite is reproducible.
    """
    ct = c * t
    params = MotionParams(c, 1.0)
    results: List[CheckResult] = []

    def add(name, worst, tol, detail=""):
        results.append(CheckResult(name, worst <= tol, worst, 0.0, tol, detail))

    # running-max law versus reflected position densities
    worst = 0.0
    for n in range(1, n_max + 1):
        for beta in _grid(0.0, ct, grid_points):
            for x in _grid(2.0 * beta - ct, beta, grid_points):
                lhs = laws.position_pdf(
                    1, n, x, t, c
                ) - laws.joint_cdf_in_max_pdf(VelocitySign.PLUS, n, beta, x, t, c)
                rhs = laws.position_pdf(-1, n, 2.0 * beta - x, t, c)
                worst = max(worst, abs(lhs - rhs))
    add("negative-reflection-pointwise", worst, 1e-12, f"n <= {n_max}")

    # maximum density doubles the position density at the level
    worst = 0.0
    for n in range(1, n_max + 1):
        for beta in _grid(0.0, ct, grid_points):
            lhs = laws.max_pdf(VelocitySign.PLUS, n, beta, t, c)
            rhs = 2.0 * laws.position_pdf_unsigned(n, beta, t, c)
            worst = max(worst, abs(lhs - rhs))
    add("max-density-doubles-position", worst, 1e-12)

    # classical reflection for the even downward-start case
    worst = 0.0
    for k in range(1, n_max // 2 + 1):
        for beta in _grid(0.0, ct, grid_points):
            lhs = laws.max_pdf(VelocitySign.MINUS, 2 * k, beta, t, c)
            rhs = 2.0 * laws.position_pdf(-1, 2 * k, beta, t, c)
            worst = max(worst, abs(lhs - rhs))
    add("classical-reflection-even-minus", worst, 1e-12)

    # time derivative of the max CDF equals -(beta/t) times the density
    worst = 0.0
    h = 1e-5 * t
    for v0 in (VelocitySign.PLUS, VelocitySign.MINUS):
        for n in range(1, 7):
            for beta in _grid(0.0, ct * (1.0 - 2.0 * h / t), 9):
                fd = -(
                    laws.max_cdf_value(v0, n, beta, t + h, c)
                    - laws.max_cdf_value(v0, n, beta, t - h, c)
                ) / (2.0 * h)
                ref = beta / t * laws.max_pdf(v0, n, beta, t, c)
                scale = max(1.0, abs(ref))
                worst = max(worst, abs(fd - ref) / scale)
    add("max-cdf-time-derivative", worst, 1e-5, "central difference, step 1e-5*t")

    # first-passage density at the horizon: closed form, then max-density link
    worst = 0.0
    for n in range(1, n_max + 1):
        for v0 in (VelocitySign.PLUS, VelocitySign.MINUS):
            for beta in _grid(0.0, ct, grid_points):
                worst = max(
                    worst,
                    abs(
                        laws.fpt_pdf(v0, n, beta, t, t, c)
                        - laws.fpt_endpoint_pdf(v0, n, beta, t, c)
                    ),
                )
    add("fpt-at-horizon-closed-form", worst, 1e-12)

    # for an even count and upward start, that value is (beta/t) * max density
    worst = 0.0
    for k in range(1, n_max // 2 + 1):
        for beta in _grid(0.0, ct, grid_points):
            worst = max(
                worst,
                abs(
                    laws.fpt_pdf(VelocitySign.PLUS, 2 * k, beta, t, t, c)
                    - beta / t * laws.max_pdf(VelocitySign.PLUS, 2 * k, beta, t, c)
                ),
            )
    add("fpt-at-horizon-vs-max-density", worst, 1e-12, "upward start, even count")

    # the M = T(t) atom mirrors the M = 0 atom across the origin
    worst = 0.0
    for n in range(1, n_max + 1, 2):
        for beta in _grid(0.0, ct, grid_points):
            lhs = laws.joint_atom_max_equals_position_pdf(
                VelocitySign.MINUS, n, beta, t, c
            )
            rhs = laws.joint_atom_max_zero_pdf(VelocitySign.MINUS, n, -beta, t, c)
            worst = max(worst, abs(lhs - rhs))
    add("max-equals-position-mirrors-max-zero", worst, 1e-12)

    # pathwise min/max sign flip: negating the initial velocity negates paths
    rng = RngStream(seed, 900).generator()
    worst = 0.0
    pm = MotionParams(c, 1.0)
    for n in range(0, n_max + 1):
        sw = sample_switches_batch(n, t, 50, rng)
        for row in sw:
            plus = TelegraphPath(VelocitySign.PLUS, t, tuple(row.tolist()))
            minus = TelegraphPath(VelocitySign.MINUS, t, tuple(row.tolist()))
            worst = max(worst, abs(running_min(plus, pm) + running_max(minus, pm)))
            worst = max(worst, abs(running_min(minus, pm) + running_max(plus, pm)))
    add("min-max-sign-flip", worst, 1e-12, "pathwise, 50 paths per n")

    # negating the initial velocity mirrors the position law across zero
    worst = 0.0
    for n in range(1, n_max + 1):
        for x in _grid(-ct, ct, grid_points):
            worst = max(
                worst,
                abs(laws.position_pdf(1, n, x, t, c) - laws.position_pdf(-1, n, -x, t, c)),
            )
    add("position-law-velocity-mirror", worst, 1e-12)

    return results


# ---------------------------------------------------------------------------
# Normalization audits


def normalization_suite(
    n_max: int = 8, t: float = 1.0, c: float = 1.0, abs_tol: float = 1e-9
) -> List[CheckResult]:
    """Total-mass audits of every conditional law, by adaptive quadrature.

    For each (v0, n <= n_max): the position density integrates to 1; the
    maximum's density plus its atom at zero sums to 1; the continuous
    joint density plus every singular piece (maximum attained at the
    endpoint, the diagonal line for one switch, maximum stuck at zero)
    sums to 1; and the first-passage density plus its atom accounts for
    the crossing probability 1 - P{M <= beta}.
    """
    ct = c * t
    results: List[CheckResult] = []

    def add(name, total, expected, detail=""):
        err = abs(total - expected)
        results.append(CheckResult(name, err <= abs_tol, total, expected, abs_tol, detail))

    for v0 in (VelocitySign.PLUS, VelocitySign.MINUS):
        sgn = v0.value_sign
        for n in range(1, n_max + 1):
            mass = quadrature(
                lambda x: laws.position_pdf(sgn, n, x, t, c), -ct, ct, 1e-12, edges=(0.0,)
            )
            add(f"position-total-{v0.value}-n={n}", mass, 1.0)

            mass = quadrature(lambda b: laws.max_pdf(v0, n, b, t, c), 0.0, ct, 1e-12)
            atom = laws.max_atom_zero(laws.Conditioning(v0, n)).value
            add(f"max-total-{v0.value}-n={n}", mass + atom, 1.0, f"atom at 0: {atom:g}")

            def inner(b):
                lo = 2.0 * b - ct
                if not lo < b:
                    return 0.0
                return quadrature(
                    lambda x: laws.joint_pdf(v0, n, b, x, t, c), lo, b, 1e-12
                )

            joint = quadrature(inner, 0.0, ct, 3e-10)
            joint += quadrature(
                lambda b: laws.joint_atom_max_equals_position_pdf(v0, n, b, t, c),
                0.0,
                ct,
                1e-12,
            )
            if v0 is VelocitySign.PLUS and n == 1:
                joint += quadrature(
                    lambda b: laws.joint_atom_diagonal_pdf(v0, n, b, t, c), 0.0, ct, 1e-12
                )
            if v0 is VelocitySign.MINUS:
                joint += quadrature(
                    lambda x: laws.joint_atom_max_zero_pdf(v0, n, x, t, c), -ct, 0.0, 1e-12
                )
            add(f"joint-total-{v0.value}-n={n}", joint, 1.0)

            beta = 0.4 * ct
            mass = quadrature(
                lambda s: laws.fpt_pdf(v0, n, beta, s, t, c), beta / c, t, 1e-12
            )
            if v0 is VelocitySign.PLUS:
                mass += (1.0 - beta / ct) ** n
            add(
                f"fpt-vs-max-cdf-{v0.value}-n={n}",
                mass,
                1.0 - laws.max_cdf_value(v0, n, beta, t, c),
                f"beta = {beta:g}",
            )
    return results


# ---------------------------------------------------------------------------
# Printed-return dossier


def return_printed_suite(t: float = 1.0, n_max: int = 5) -> List[CheckResult]:
    """Compare the two variants of the conditional return-time density.

    The order-statistics oracle gives the exact density for n = 2,
    ``1/t - s/t**2``; the corrected variant reproduces it, while the
    as-printed variant is identically zero there.  The zero-vs-oracle gap
    is asserted as a pinned, documented discrepancy: those entries carry
    ``known-discrepancy`` in their detail and count as expected failures
    rather than build failures.
    """
    results: List[CheckResult] = []
    ss = np.linspace(0.1 * t, 0.9 * t, 9)

    worst = max(
        abs(laws.return_pdf_corrected(2, float(s), t) - (1.0 / t - s / t**2)) for s in ss
    )
    results.append(
        CheckResult("return-corrected-n=2-oracle", worst <= 1e-12, worst, 0.0, 1e-12)
    )

    gap = min(1.0 / t - s / t**2 for s in ss)
    printed_max = max(abs(laws.return_pdf_printed(2, float(s), t)) for s in ss)
    results.append(
        CheckResult(
            "return-printed-n=2-is-zero",
            printed_max == 0.0 and gap > 0.0,
            printed_max,
            gap,
            0.0,
            "known-discrepancy: printed density vanishes where the oracle is positive",
        )
    )

    worst = max(
        abs(laws.return_pdf_corrected(1, float(s), t) - 0.5 / t) for s in ss
    )
    results.append(
        CheckResult("return-corrected-n=1-constant", worst <= 1e-12, worst, 0.0, 1e-12)
    )

    # the corrected and printed variants differ by exactly the inner-atom
    # term for n >= 2; for n = 1 the printed value already is that term
    worst = 0.0
    for n in range(2, n_max + 1):
        for s in ss:
            diff = laws.return_pdf_corrected(n, float(s), t) - laws.return_pdf_printed(
                n, float(s), t
            )
            term = n * (t - s) ** (n - 1) / (2.0 * t**n)
            worst = max(worst, abs(diff - term))
    results.append(
        CheckResult(
            "return-corrected-minus-printed-term",
            worst <= 1e-12,
            worst,
            0.0,
            1e-12,
            f"n <= {n_max}",
        )
    )
    return results


# ---------------------------------------------------------------------------
# Monte Carlo cross-checks


def mc_cross_suite(reps: int = 200_000, seed: int = 0) -> List[CheckResult]:
    """Simulation estimates of the singular-event masses versus theory.

    Estimates P{M = 0} for downward starts and P{M = T(t)} for upward
    starts, n <= 6, against the cyclic masses C(2k, k)/4**k; passes within
    3 binomial standard errors.  Deterministic for a fixed seed.
    """
    from .sampler import max_is_zero_batch, max_equals_position_batch

    t = c = 1.0
    results: List[CheckResult] = []
    rng = RngStream(seed, 901).generator()
    for n in range(1, 7):
        sw = sample_switches_batch(n, t, reps, rng)
        expected = laws.max_atom_zero(laws.Conditioning(VelocitySign.MINUS, n)).value
        est = float(max_is_zero_batch(VelocitySign.MINUS, sw, t, c).mean())
        se = math.sqrt(expected * (1.0 - expected) / reps)
        results.append(
            CheckResult(
                f"mc-max-zero-mass-n={n}", abs(est - expected) <= 3 * se, est, expected,
                3 * se, f"{reps} reps",
            )
        )
        # M = T(t) carries mass only when the final velocity is +c
        v0 = VelocitySign.PLUS if n % 2 == 0 else VelocitySign.MINUS
        expected = quadrature(
            lambda b: laws.joint_atom_max_equals_position_pdf(v0, n, b, t, c),
            0.0,
            c * t,
            1e-12,
        )
        est = float(max_equals_position_batch(v0, sw, t, c).mean())
        se = math.sqrt(expected * (1.0 - expected) / reps)
        results.append(
            CheckResult(
                f"mc-max-equals-position-mass-{v0.value}-n={n}",
                abs(est - expected) <= 3 * se,
                est, expected, 3 * se, f"{reps} reps",
            )
        )
    return results


# ---------------------------------------------------------------------------
# Diffusion limit


def kac_limit_check(
    beta: float = 1.0,
    t_values: Sequence[float] = (0.5, 1.0, 2.0),
    c_values: Sequence[float] = (20.0, 50.0),
    rel_tol: float = 0.05,
) -> List[CheckResult]:
    """Compare the unconditional first-passage law with its Brownian limit.

    Under the scaling ``lambda = c**2`` the telegraph process converges to
    standard Brownian motion, whose first-passage density through beta is
    ``beta * exp(-beta**2 / (2 t)) / sqrt(2 pi t**3)``.  Checks the
    relative error at the largest c and that the error shrinks as c grows.
    """
    results: List[CheckResult] = []
    cs = sorted(c_values)
    for t in t_values:
        brown = beta * math.exp(-(beta**2) / (2.0 * t)) / math.sqrt(2.0 * math.pi * t**3)
        errs = []
        for c in cs:
            params = MotionParams(c, c * c)
            val = laws.fpt_pdf_unconditional(VelocitySign.PLUS, beta, t, params)
            errs.append(abs(val - brown) / brown)
        results.append(
            CheckResult(
                f"kac-relative-error-t={t:g}-c={cs[-1]:g}",
                errs[-1] <= rel_tol,
                errs[-1],
                0.0,
                rel_tol,
                f"density vs Brownian {brown:.6g}",
            )
        )
        results.append(
            CheckResult(
                f"kac-error-decreases-t={t:g}",
                all(a > b for a, b in zip(errs[:-1], errs[1:])),
                errs[-1],
                errs[0],
                math.inf,
                f"errors along c={cs}: {['%.3g' % e for e in errs]}",
            )
        )
    return results


# ---------------------------------------------------------------------------
# Discrete enumeration


def _walks(n: int, first_step: int) -> np.ndarray:
    """All 2**(n-1) simple-walk paths of n steps with the first step fixed.

    Returns the (2**(n-1), n+1) array of partial sums, starting at 0.
    """
    m = 1 << (n - 1)
    tail = ((np.arange(m)[:, None] >> np.arange(n - 1)) & 1) * 2 - 1
    steps = np.concatenate([np.full((m, 1), first_step), tail], axis=1)
    walks = np.zeros((m, n + 1), dtype=np.int64)
    np.cumsum(steps, axis=1, out=walks[:, 1:])
    return walks


def random_walk_enumeration(n_max: int = 14) -> List[CheckResult]:
    """Replay the reflection bijection on simple symmetric random walks.

    For each walk length n, level beta and admissible endpoint x, the
    number of walks with first step +1 that exceed beta and end at x must
    exactly equal the number of walks with first step -1 that end at
    2*beta - x.  Counts are exact integers over all 2**(n-1) walks per
    starting step.
    """
    if n_max > 20:
        raise ValueError("n_max > 20 would enumerate more than 2**19 walks")
    results: List[CheckResult] = []
    for n in range(2, n_max + 1):
        up = _walks(n, 1)
        down = _walks(n, -1)
        worst = 0
        cases = 0
        detail = ""
        for beta in range(0, n - 1):
            for x in range(2 * (beta + 1) - n, beta + 1):
                a = int(np.sum((up[:, -1] == x) & (up.max(axis=1) > beta)))
                b = int(np.sum(down[:, -1] == 2 * beta - x))
                cases += 1
                if abs(a - b) > worst:
                    worst = abs(a - b)
                    detail = f"beta={beta}, x={x}: {a} vs {b}"
        results.append(
            CheckResult(
                f"random-walk-counts-n={n}",
                worst == 0,
                float(worst),
                0.0,
                0.0,
                detail or f"{cases} (beta, x) cases, all counts equal",
            )
        )
    return results


# ---------------------------------------------------------------------------
# Reports


def results_to_json(results: Iterable[CheckResult]) -> str:
    rows = []
    for r in results:
        row = asdict(r)
        row["passed"] = bool(row["passed"])
        row["observed"] = float(row["observed"])
        row["expected"] = float(row["expected"])
        row["tolerance"] = float(row["tolerance"])
        rows.append(row)
    return json.dumps(rows, indent=2)


def results_to_table(results: Iterable[CheckResult]) -> str:
    """Aligned text table, one row per check."""
    rows = [
        (
            r.name,
            "pass" if r.passed else "FAIL",
            f"{r.observed:.3e}",
            f"{r.tolerance:.3e}" if math.isfinite(r.tolerance) else "-",
            r.detail,
        )
        for r in results
    ]
    headers = ("check", "status", "observed", "tolerance", "detail")
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in rows)) if rows else len(headers[i])
        for i in range(5)
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    return "\n".join(lines)

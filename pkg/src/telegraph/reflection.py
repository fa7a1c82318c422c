"""Executable negative reflection transform on telegraph paths.

A path that starts with velocity +c, exceeds a level ``beta`` at some
point, and ends at ``x <= beta`` can be cut at its first two crossings of
``beta`` and reassembled into a path that starts with velocity -c and ends
at ``2*beta - x``.  The rearrangement is a bijection between the two sets
of paths: it permutes the three pieces of the trajectory and reflects two
of them, so it preserves the switch count and the joint law of the switch
times.  This module implements the forward transform, its inverse, the
classification of crossing displacements, and the equivalent affine map on
position vectors.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .params import MotionParams, VelocitySign
from .path import TelegraphPath, _vertices, position_at, running_max

__all__ = [
    "ReflectionContext",
    "CrossingPair",
    "ReflectionDomainError",
    "DegeneratePathError",
    "in_P_plus",
    "in_P_minus",
    "classify_crossings",
    "negative_reflect",
    "negative_reflect_inverse",
    "affine_map_vector_form",
    "crossings_batch",
    "zero_return_crossings_batch",
    "reflect_batch",
    "reflect_inverse_batch",
]

#: Absolute tolerance for matching a path's endpoint against the target x.
ENDPOINT_TOL = 1e-9

#: Relative tolerance (times the horizon) below which a crossing time is
#: considered to coincide with a switch time and the path is rejected.
DEGENERATE_REL_TOL = 1e-12


class ReflectionDomainError(ValueError):
    """The path is outside the domain of the requested transform."""


class DegeneratePathError(ReflectionDomainError):
    """A level crossing coincides with a switch time.

    Such paths form a null set; they are rejected rather than perturbed so
    that measure-preservation checks stay exact.
    """


@dataclass(frozen=True)
class ReflectionContext:
    """Level, target endpoint, and motion parameters of the transform.

    The admissible window is ``0 <= beta < c*t`` and
    ``2*beta - c*t < x <= beta``; outside it both path sets are null.
    """

    beta: float
    x: float
    params: MotionParams
    horizon: float

    def __post_init__(self):
        ct = self.params.c * self.horizon
        if self.horizon <= 0.0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if not 0.0 <= self.beta < ct:
            raise ValueError(f"beta={self.beta} outside [0, ct) with ct={ct}")
        if not 2.0 * self.beta - ct < self.x <= self.beta:
            raise ValueError(
                f"x={self.x} outside (2*beta - ct, beta] with "
                f"beta={self.beta}, ct={ct}"
            )


@dataclass(frozen=True)
class CrossingPair:
    """Displacement indices of the first up- and down-crossing of the level.

    Displacement ``i`` is the open time interval between switch ``i-1`` and
    switch ``i`` (with switch 0 at time 0 and switch ``n+1`` at the
    horizon).  For an upward-start path the up-crossing lies in
    displacement ``h`` and the first later down-crossing in displacement
    ``l``; a switch is needed in between, so ``1 <= h < l <= n+1``.  The
    down-crossing may fall in the final displacement (``l = n+1``), which
    happens with positive probability whenever the last displacement moves
    downward.  The image pair of a transform may have ``h = l`` (the
    reflected path can return to zero and cross the level within one
    upward displacement), so equality is allowed here.
    """

    h: int
    l: int

    def __post_init__(self):
        if not 1 <= self.h <= self.l:
            raise ValueError(f"need 1 <= h <= l, got ({self.h}, {self.l})")

    def image(self) -> "CrossingPair":
        """Crossing pair of the negatively reflected path.

        The image path first returns to zero in displacement ``l - h + 1``
        and first crosses the level in displacement ``l``; the map
        ``(h, l) -> (l - h + 1, l)`` is an automorphism of the index set.
        """
        return CrossingPair(self.l - self.h + 1, self.l)


def _check_horizon(path: TelegraphPath, ctx: ReflectionContext) -> None:
    if abs(path.horizon - ctx.horizon) > ENDPOINT_TOL:
        raise ReflectionDomainError(
            f"path horizon {path.horizon} != context horizon {ctx.horizon}"
        )


def in_P_plus(path: TelegraphPath, ctx: ReflectionContext) -> bool:
    """Whether the path starts upward, exceeds beta, and ends at x."""
    _check_horizon(path, ctx)
    if path.v0 is not VelocitySign.PLUS:
        return False
    if running_max(path, ctx.params) <= ctx.beta:
        return False
    return abs(position_at(path, path.horizon, ctx.params) - ctx.x) <= ENDPOINT_TOL


def in_P_minus(path: TelegraphPath, ctx: ReflectionContext) -> bool:
    """Whether the path starts downward and ends at 2*beta - x."""
    _check_horizon(path, ctx)
    if path.v0 is not VelocitySign.MINUS:
        return False
    end = position_at(path, path.horizon, ctx.params)
    return abs(end - (2.0 * ctx.beta - ctx.x)) <= ENDPOINT_TOL


def _crossing_times(
    path: TelegraphPath, ctx: ReflectionContext
) -> Tuple[float, float, int, int]:
    """First up-crossing and first later down-crossing of beta.

    Returns ``(t1, t2, h, l)`` where the crossings happen at times t1 < t2
    inside displacements h and l.  Raises if either crossing sits within
    ``DEGENERATE_REL_TOL * horizon`` of a vertex.
    """
    beta = ctx.beta
    tol = DEGENERATE_REL_TOL * ctx.horizon
    times, pos = _vertices(path, ctx.params.c)
    t1 = t2 = None
    h = l = 0
    for i in range(1, len(times)):
        a, b = pos[i - 1], pos[i]
        if t1 is None:
            if a < beta < b:
                t1 = times[i - 1] + (beta - a) / (b - a) * (times[i] - times[i - 1])
                h = i
                if min(t1 - times[i - 1], times[i] - t1) < tol:
                    raise DegeneratePathError(
                        f"up-crossing at {t1} coincides with a switch time"
                    )
        elif a > beta > b:
            t2 = times[i - 1] + (beta - a) / (b - a) * (times[i] - times[i - 1])
            l = i
            if min(t2 - times[i - 1], times[i] - t2) < tol:
                raise DegeneratePathError(
                    f"down-crossing at {t2} coincides with a switch time"
                )
            return t1, t2, h, l
        if abs(a - beta) <= tol and i > 1:
            raise DegeneratePathError(
                f"path touches the level at switch time {times[i - 1]}"
            )
    raise DegeneratePathError("level crossings not found strictly inside segments")


def classify_crossings(path: TelegraphPath, ctx: ReflectionContext) -> CrossingPair:
    """Displacement indices (h, l) of the path's first two beta crossings."""
    if not in_P_plus(path, ctx):
        raise ReflectionDomainError(
            "path is not an upward-start path exceeding beta and ending at x"
        )
    _, _, h, l = _crossing_times(path, ctx)
    return CrossingPair(h, l)


def _remap_times(switch_times, lo: float, hi: float) -> Tuple[float, ...]:
    """Cut-and-swap time map used by both transform directions.

    Times before ``lo`` shift forward by ``hi - lo``; times inside
    ``(lo, hi)`` shift back to start at zero; later times are fixed.  The
    three groups land in disjoint intervals, so sorting restores switch
    order on the rearranged path.
    """
    shift = hi - lo
    out = []
    for tau in switch_times:
        if tau < lo:
            out.append(tau + shift)
        elif tau < hi:
            out.append(tau - lo)
        else:
            out.append(tau)
    return tuple(sorted(out))


def negative_reflect(path: TelegraphPath, ctx: ReflectionContext) -> TelegraphPath:
    """Map an upward-start path exceeding beta to its downward-start image.

    The segment between the two beta crossings is reflected across the
    level and moved to the start; the original initial piece follows it;
    the tail after the second crossing is reflected across the level in
    place.  The result starts with velocity -c, keeps the switch count,
    and ends at ``2*beta - x``.
    """
    if not in_P_plus(path, ctx):
        raise ReflectionDomainError(
            "path is not an upward-start path exceeding beta and ending at x"
        )
    t1, t2, _, _ = _crossing_times(path, ctx)
    out = TelegraphPath(
        VelocitySign.MINUS, path.horizon, _remap_times(path.switch_times, t1, t2)
    )
    if not in_P_minus(out, ctx):  # pragma: no cover - internal consistency
        raise ReflectionDomainError("surgery produced a path outside the codomain")
    return out


def _inverse_cut_points(
    path: TelegraphPath, ctx: ReflectionContext
) -> Tuple[float, float]:
    """First zero-return and first beta-crossing times of a downward path."""
    tol = DEGENERATE_REL_TOL * ctx.horizon
    times, pos = _vertices(path, ctx.params.c)
    u1 = u2 = None
    for i in range(1, len(times)):
        a, b = pos[i - 1], pos[i]
        if u1 is None:
            if i > 1 and a < 0.0 <= b:
                u1 = times[i - 1] + (0.0 - a) / (b - a) * (times[i] - times[i - 1])
                if min(u1 - times[i - 1], times[i] - u1) < tol:
                    raise DegeneratePathError(
                        f"zero return at {u1} coincides with a switch time"
                    )
            else:
                continue
        # the beta crossing may lie in the zero-return displacement itself
        if a < ctx.beta < b:
            u2 = times[i - 1] + (ctx.beta - a) / (b - a) * (times[i] - times[i - 1])
            if min(u2 - times[i - 1], times[i] - u2) < tol:
                raise DegeneratePathError(
                    f"beta crossing at {u2} coincides with a switch time"
                )
            return u1, u2
    raise ReflectionDomainError(
        "path has no zero return followed by a beta crossing; no preimage exists"
    )


def negative_reflect_inverse(
    path: TelegraphPath, ctx: ReflectionContext
) -> TelegraphPath:
    """Inverse surgery: rebuild the upward-start preimage of a downward path.

    The cut points are the path's first return to zero and its first
    crossing of beta; the same cut-and-swap of the time axis, applied with
    those points, undoes the forward transform.
    """
    if not in_P_minus(path, ctx):
        raise ReflectionDomainError(
            "path is not a downward-start path ending at 2*beta - x"
        )
    u1, u2 = _inverse_cut_points(path, ctx)
    out = TelegraphPath(
        VelocitySign.PLUS, path.horizon, _remap_times(path.switch_times, u1, u2)
    )
    if not in_P_plus(out, ctx):  # pragma: no cover - internal consistency
        raise ReflectionDomainError("inverse surgery left the stated preimage set")
    return out


def affine_map_vector_form(
    v_plus: np.ndarray, pair: CrossingPair, beta: float
) -> np.ndarray:
    """Affine image of the vector of positions at switch times and horizon.

    ``v_plus`` lists the upward-start path's positions at its n switch
    times and at the horizon.  The transform acts by blocks: the l-h
    entries spanning the excursion above the level map to ``beta - x_i``
    (reflected and moved to the front), the first h-1 entries shift behind
    them unchanged, and the last n-l+2 entries map to ``2*beta - x_i``.
    The matrix is a signed permutation, so the map has unit Jacobian.
    """
    v = np.asarray(v_plus, dtype=float)
    h, l = pair.h, pair.l
    n = v.shape[0] - 1
    if not l <= n + 1:
        raise ReflectionDomainError(f"pair ({h}, {l}) incompatible with n={n}")
    if np.any(v[: h - 1] >= beta) or np.any(v[h - 1 : l - 1] <= beta) or v[l - 1] >= beta:
        raise ReflectionDomainError(
            "position vector sign pattern inconsistent with crossing pair"
        )
    return np.concatenate(
        [beta - v[h - 1 : l - 1], v[: h - 1], 2.0 * beta - v[l - 1 :]]
    )


# ---------------------------------------------------------------------------
# Vectorized batch forms, used for large simulation-based checks


def crossings_batch(switches: np.ndarray, horizon: float, c: float, beta: float):
    """Crossing data for a batch of upward-start paths with equal switch count.

    ``switches`` has one sorted row of switch times per path.  Returns
    ``(t1, t2, h, l, ok)`` where ``ok`` flags rows that exceed beta and
    cross back down before the horizon; entries of non-ok rows are
    unspecified.  Crossings within ``DEGENERATE_REL_TOL * horizon`` of a
    vertex are marked not ok.
    """
    sw = np.asarray(switches, dtype=float)
    m, n = sw.shape
    times = np.empty((m, n + 2))
    times[:, 0] = 0.0
    times[:, 1 : n + 1] = sw
    times[:, n + 1] = horizon
    vel = c * (-1.0) ** np.arange(n + 1)
    pos = np.empty((m, n + 2))
    pos[:, 0] = 0.0
    np.cumsum(vel * np.diff(times, axis=1), axis=1, out=pos[:, 1:])

    tol = DEGENERATE_REL_TOL * horizon
    up = (pos[:, :-1] < beta) & (pos[:, 1:] > beta) & (vel > 0)
    has_up = up.any(axis=1)
    h = np.argmax(up, axis=1) + 1  # displacement index, 1-based
    down = (pos[:, :-1] > beta) & (pos[:, 1:] < beta) & (vel < 0)
    down &= np.arange(1, n + 2) > h[:, None]
    has_down = down.any(axis=1)
    l = np.argmax(down, axis=1) + 1

    rows = np.arange(m)
    t1 = times[rows, h - 1] + (beta - pos[rows, h - 1]) / c
    t2 = times[rows, l - 1] + (pos[rows, l - 1] - beta) / c
    ok = has_up & has_down & (pos[:, -1] < beta)
    ok &= np.minimum(t1 - times[rows, h - 1], times[rows, h] - t1) > tol
    ok &= np.minimum(t2 - times[rows, l - 1], times[rows, l] - t2) > tol
    ok &= np.abs(pos - beta).min(axis=1) > tol
    return t1, t2, h, l, ok


def reflect_batch(switches: np.ndarray, t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    """Row-wise cut-and-swap of switch times between the two crossings.

    Vectorized counterpart of the forward surgery: rows are switch times of
    upward-start paths, ``t1``/``t2`` their beta-crossing times.  The same
    map also performs the inverse surgery when given a downward-start
    path's zero-return and beta-crossing times.
    """
    sw = np.asarray(switches, dtype=float)
    t1 = np.asarray(t1, dtype=float)[:, None]
    t2 = np.asarray(t2, dtype=float)[:, None]
    out = np.where(sw < t1, sw + (t2 - t1), np.where(sw < t2, sw - t1, sw))
    out.sort(axis=1)
    return out


def zero_return_crossings_batch(
    switches: np.ndarray, horizon: float, c: float, beta: float
):
    """First zero-return and beta-crossing data for downward-start paths.

    Batch counterpart of the inverse transform's cut points.  Returns
    ``(u1, u2, j1, j2, ok)`` with the cut times, their displacement
    indices, and a validity mask.
    """
    sw = np.asarray(switches, dtype=float)
    m, n = sw.shape
    times = np.empty((m, n + 2))
    times[:, 0] = 0.0
    times[:, 1 : n + 1] = sw
    times[:, n + 1] = horizon
    vel = -c * (-1.0) ** np.arange(n + 1)
    pos = np.empty((m, n + 2))
    pos[:, 0] = 0.0
    np.cumsum(vel * np.diff(times, axis=1), axis=1, out=pos[:, 1:])

    tol = DEGENERATE_REL_TOL * horizon
    back = (pos[:, :-1] < 0.0) & (pos[:, 1:] > 0.0) & (vel > 0)
    has_back = back.any(axis=1)
    j1 = np.argmax(back, axis=1) + 1
    up = (pos[:, :-1] < beta) & (pos[:, 1:] > beta) & (vel > 0)
    up &= np.arange(1, n + 2) >= j1[:, None]
    has_up = up.any(axis=1)
    j2 = np.argmax(up, axis=1) + 1

    rows = np.arange(m)
    u1 = times[rows, j1 - 1] + (0.0 - pos[rows, j1 - 1]) / c
    u2 = times[rows, j2 - 1] + (beta - pos[rows, j2 - 1]) / c
    ok = has_back & has_up
    ok &= np.minimum(u1 - times[rows, j1 - 1], times[rows, j1] - u1) > tol
    ok &= np.minimum(u2 - times[rows, j2 - 1], times[rows, j2] - u2) > tol
    return u1, u2, j1, j2, ok


reflect_inverse_batch = reflect_batch

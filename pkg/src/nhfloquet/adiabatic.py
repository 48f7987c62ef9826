"""Eigenpath tracking, state projection and hop detection.

A propagated state in the stable regime follows one instantaneous eigenpath
until amplification makes the other component take over; the takeover happens
in a narrow window (a "hop").  This module extracts eigenpaths, expands
trajectories in them, and locates hop instants with the convention that the
timing is the zero of Im(b/a) nearest the dominance switch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DegenerateBasis,
    DegenerateMatrix,
    DegeneracyOnPath,
    DiscontinuousPath,
    PoleCrossing,
)
from .numerics import Trajectory, eig2

__all__ = [
    "EigenPath",
    "ProjectionSeries",
    "HopEvent",
    "eigen_track",
    "project",
    "ratio_series",
    "component_ratio",
    "detect_hops",
]

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class EigenPath:
    """One continuously tracked eigenvalue/eigenvector branch over a closed loop.

    vectors holds unit eigenvectors, phase-aligned so consecutive overlaps are
    real positive.  closure_defect is the projective mismatch between the last
    and first sample; near zero it certifies that the branch returned to its
    starting ray after one loop.
    """

    grid: np.ndarray
    values: np.ndarray
    vectors: np.ndarray
    label: str
    closure_defect: float = 0.0

    def __post_init__(self) -> None:
        n = self.grid.shape[0]
        if self.values.shape[0] != n or self.vectors.shape[0] != n:
            raise ValueError("grid, values and vectors must have matching lengths")

    def ratios(self) -> np.ndarray:
        """Component ratio b/a per sample; infinite where a vanishes."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.vectors[:, 1] / self.vectors[:, 0]


@dataclass(frozen=True)
class ProjectionSeries:
    """Expansion coefficients of a trajectory in an eigenpath pair.

    ratio holds a_other / a_own relative to reference_label: values well below
    1 mean the state is following its reference eigenpath, values well above 1
    mean it has switched to the other one.
    """

    grid: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray
    reference_label: str
    ratio: np.ndarray


@dataclass(frozen=True)
class HopEvent:
    """A single detected following switch.

    t_star is the interpolated instant where Im(b/a) crosses zero inside the
    switch window, relative is t_star over the period, and direction is the
    (from, to) pair of eigenpath labels.
    """

    t_star: float
    relative: float
    direction: tuple[str, str]
    crossing_kind: str = "im-ratio-zero"


def eigen_track(
    H: Callable[[float], np.ndarray],
    T: float,
    samples: int,
    *,
    min_overlap: float = 0.99,
    tol: float = 1e-9,
) -> tuple[EigenPath, EigenPath]:
    """Track both instantaneous eigenbranches of H(t) over one period.

    The grid has samples + 1 points including both endpoints.  Branches are
    continued by maximal overlap with the previous sample and phase-aligned so
    each consecutive overlap is real positive.  Labels '+'/'-' order the
    branches by Re (then Im) of the eigenvalue at t = 0 and are bookkeeping
    only.  DegeneracyOnPath is raised if the spectrum degenerates on the grid
    and DiscontinuousPath if the best continuation overlap drops below
    min_overlap.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    ts = np.linspace(0.0, T, samples + 1)
    values = np.empty((2, samples + 1), dtype=complex)
    vectors = np.empty((2, samples + 1, 2), dtype=complex)

    for j, t in enumerate(ts):
        try:
            (l1, v1), (l2, v2) = eig2(H(float(t)), tol)
        except DegenerateMatrix as exc:
            raise DegeneracyOnPath(f"spectrum degenerates at t = {t:.6g}") from exc
        if j == 0:
            if (l1.real, l1.imag) < (l2.real, l2.imag):
                l1, l2, v1, v2 = l2, l1, v2, v1
            values[0, 0], values[1, 0] = l1, l2
            vectors[0, 0], vectors[1, 0] = v1, v2
            continue
        p0, p1 = vectors[0, j - 1], vectors[1, j - 1]
        keep = abs(np.vdot(p0, v1)) + abs(np.vdot(p1, v2))
        swap = abs(np.vdot(p0, v2)) + abs(np.vdot(p1, v1))
        if swap > keep:
            l1, l2, v1, v2 = l2, l1, v2, v1
        for row, (lam, v) in enumerate(((l1, v1), (l2, v2))):
            ov = np.vdot(vectors[row, j - 1], v)
            if abs(ov) < min_overlap:
                raise DiscontinuousPath(
                    f"continuation overlap {abs(ov):.4f} < {min_overlap} at t = {t:.6g}"
                )
            values[row, j] = lam
            vectors[row, j] = v * np.exp(-1j * np.angle(ov))

    paths = []
    for row, label in ((0, "+"), (1, "-")):
        defect = 1.0 - abs(np.vdot(vectors[row, 0], vectors[row, -1]))
        paths.append(
            EigenPath(
                grid=ts,
                values=values[row].copy(),
                vectors=vectors[row].copy(),
                label=label,
                closure_defect=float(defect),
            )
        )
    return paths[0], paths[1]


def project(
    state: np.ndarray,
    basis: tuple[np.ndarray, np.ndarray],
    tol: float = 1e-12,
) -> tuple[complex, complex]:
    """Coefficients (a_plus, a_minus) with state = a_plus v_plus + a_minus v_minus.

    Solved by Cramer's rule; the basis vectors need not be normalized, and the
    coefficients transform accordingly.  DegenerateBasis when the pair is
    numerically dependent.
    """
    vp = np.asarray(basis[0], dtype=complex).reshape(2)
    vm = np.asarray(basis[1], dtype=complex).reshape(2)
    s = np.asarray(state, dtype=complex).reshape(2)
    det = vp[0] * vm[1] - vm[0] * vp[1]
    scale = np.linalg.norm(vp) * np.linalg.norm(vm)
    if abs(det) <= tol * max(scale, np.finfo(float).tiny):
        raise DegenerateBasis(f"basis determinant {abs(det):.3e} below tol * scale")
    a_plus = (s[0] * vm[1] - s[1] * vm[0]) / det
    a_minus = (vp[0] * s[1] - vp[1] * s[0]) / det
    return complex(a_plus), complex(a_minus)


def component_ratio(state: np.ndarray, pole_tol: float = 1e-12) -> complex:
    """Ratio b/a of a two-component state; PoleCrossing where a vanishes."""
    s = np.asarray(state, dtype=complex).reshape(2)
    n = np.linalg.norm(s)
    if abs(s[0]) <= pole_tol * max(n, np.finfo(float).tiny):
        raise PoleCrossing(f"|a| = {abs(s[0]):.3e} is at the pole of b/a")
    return complex(s[1] / s[0])


def _check_alignment(traj: Trajectory, path: EigenPath) -> None:
    if path.grid.shape[0] != traj.times.shape[0]:
        raise ValueError("trajectory and eigenpath grids have different lengths")
    t = traj.times
    if np.allclose(path.grid, t, atol=1e-12 * max(1.0, traj.period)):
        return
    if np.allclose(path.grid, _TWO_PI * t / traj.period, atol=1e-12):
        return
    raise ValueError("eigenpath grid does not match the trajectory grid (in t or in theta)")


def ratio_series(
    traj: Trajectory,
    paths: tuple[EigenPath, EigenPath],
    reference_label: str,
    tol: float = 1e-12,
) -> ProjectionSeries:
    """Expand a trajectory in an eigenpath pair and form the takeover ratio.

    The ratio is a_other / a_own per sample with "own" named by
    reference_label.  Both eigenpaths must be sampled on the trajectory grid
    (in time, or equivalently in loop angle).
    """
    by_label = {p.label: p for p in paths}
    if reference_label not in by_label or len(by_label) != 2:
        raise ValueError(f"need one '+' and one '-' path; reference {reference_label!r}")
    for p in paths:
        _check_alignment(traj, p)
    vp = by_label["+"].vectors
    vm = by_label["-"].vectors
    s = traj.states
    det = vp[:, 0] * vm[:, 1] - vm[:, 0] * vp[:, 1]
    scale = np.linalg.norm(vp, axis=1) * np.linalg.norm(vm, axis=1)
    bad = np.abs(det) <= tol * np.maximum(scale, np.finfo(float).tiny)
    if np.any(bad):
        raise DegenerateBasis(f"basis degenerates at {int(np.count_nonzero(bad))} samples")
    a_plus = (s[:, 0] * vm[:, 1] - s[:, 1] * vm[:, 0]) / det
    a_minus = (vp[:, 0] * s[:, 1] - vp[:, 1] * s[:, 0]) / det
    own, other = (a_plus, a_minus) if reference_label == "+" else (a_minus, a_plus)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = other / own
    return ProjectionSeries(
        grid=traj.times,
        a_plus=a_plus,
        a_minus=a_minus,
        reference_label=reference_label,
        ratio=ratio,
    )


def detect_hops(
    traj: Trajectory,
    paths: tuple[EigenPath, EigenPath],
    *,
    window_frac: float = 0.02,
    pole_tol: float = 1e-12,
) -> list[HopEvent]:
    """Locate following switches along a trajectory.

    Per sample the state's ratio b/a is assigned to the nearest eigenpath
    ratio in the complex plane.  An event is emitted where that assignment
    switches between consecutive valid samples and Im(b/a) crosses zero within
    +/- window_frac of the period around the switch; the event time is the
    linearly interpolated zero crossing.  Samples at the b/a pole are skipped,
    with single-sample gaps bridged by their neighbours.  Switches that share
    one crossing are merged and cancel if they lead back to the same branch.
    """
    by_label = {p.label: p for p in paths}
    if len(by_label) != 2 or "+" not in by_label or "-" not in by_label:
        raise ValueError("need one '+' and one '-' path")
    for p in paths:
        _check_alignment(traj, p)

    t = traj.times
    n = t.shape[0]
    a = traj.states[:, 0]
    b = traj.states[:, 1]
    norms = np.linalg.norm(traj.states, axis=1)
    valid = np.abs(a) > pole_tol * np.maximum(norms, np.finfo(float).tiny)

    psi = np.full(n, np.nan + 1j * np.nan, dtype=complex)
    psi[valid] = b[valid] / a[valid]
    # Bridge isolated pole samples so a single bad point does not split runs.
    for k in range(1, n - 1):
        if not valid[k] and valid[k - 1] and valid[k + 1]:
            psi[k] = 0.5 * (psi[k - 1] + psi[k + 1])
            valid[k] = True

    rp = by_label["+"].ratios()
    rm = by_label["-"].ratios()
    d_plus = np.abs(psi - rp)
    d_minus = np.abs(psi - rm)
    assign = np.where(d_plus <= d_minus, 1, -1)
    assign[~valid] = 0

    idx = np.flatnonzero(valid)
    if idx.size < 2:
        return []

    # Edges between consecutive valid samples.
    lo, hi = idx[:-1], idx[1:]
    switch_edges = [
        (int(i), int(j)) for i, j in zip(lo, hi) if assign[i] != assign[j]
    ]
    if not switch_edges:
        return []

    im = psi.imag
    crossings: list[tuple[float, float]] = []  # (edge midpoint index, t_star)
    for i, j in zip(lo, hi):
        yi, yj = im[i], im[j]
        if yi == 0.0:
            crossings.append((float(i), float(t[i])))
        elif yi * yj < 0.0:
            frac = yi / (yi - yj)
            crossings.append((0.5 * (i + j), float(t[i] + frac * (t[j] - t[i]))))
    if not crossings:
        return []
    cross_pos = np.array([c[0] for c in crossings])

    window = max(1, int(round(window_frac * (n - 1))))
    label_of = {1: "+", -1: "-"}
    candidates: list[tuple[int, float, str, str]] = []
    for i, j in switch_edges:
        mid = 0.5 * (i + j)
        k = int(np.argmin(np.abs(cross_pos - mid)))
        if abs(cross_pos[k] - mid) <= window:
            candidates.append((k, crossings[k][1], label_of[assign[i]], label_of[assign[j]]))

    events: list[HopEvent] = []
    for k in sorted(set(c[0] for c in candidates)):
        group = [c for c in candidates if c[0] == k]
        frm, to = group[0][2], group[-1][3]
        if frm == to:
            continue
        t_star = group[0][1]
        events.append(
            HopEvent(t_star=t_star, relative=t_star / traj.period, direction=(frm, to))
        )
    events.sort(key=lambda e: e.t_star)
    return events

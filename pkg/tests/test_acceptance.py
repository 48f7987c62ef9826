"""Acceptance gate: twelve end-to-end checks, one summary line each.

Every test evaluates its full set of sub-checks, records a PASS/FAIL line for
the terminal summary, and only then asserts, so a red line still reports the
measured numbers.
"""
from __future__ import annotations

import time

import numpy as np

from conftest import (
    TWO_PI,
    bu_hops,
    bu_run,
    circle_gap,
    h1_cyclic_pair,
    loop_paths,
    record_criterion,
)
from nhfloquet.adiabatic import eigen_track, ratio_series
from nhfloquet.asymptotics import bessel_series, critical_ratio, r_plus_asymptotic
from nhfloquet.geophase import aa_phase, solid_angle_phase
from nhfloquet.models import (
    BUParams,
    Model1Params,
    Model2Params,
    h1,
    h1_aa_exact,
    h1_aa_slow_limit,
    h1_closed_form,
    h2,
    hbu,
)
from nhfloquet.numerics import Trajectory, cyclic_states, floquet_operator, propagate

TABLE_PERIODS = (20.0, 50.0, 100.0, 150.0, 200.0, 250.0)
TABLE_F_MINUS = (0.376, 0.262, 0.297, 0.298, 0.299, 0.302)
# Large periods need this many steps for the integrator's spurious admixture
# to stay below the exponentially small physical one; 2^14 misplaces the
# T = 250 hop by 0.015 of a period.
TABLE_STEPS = 1 << 16


def test_critical_loop_ratio():
    t0 = time.perf_counter()
    sol = critical_ratio()
    ms = 1e3 * (time.perf_counter() - t0)
    gap = abs(sol.c - 0.439229)
    ok = gap <= 1e-6 and ms < 250.0
    record_criterion(1, ok, f"c = {sol.c:.6f}, gap {gap:.2e}, {ms:.2f} ms")
    assert ok


def test_cyclic_state_first_hop_timings():
    t0 = time.perf_counter()
    got = [
        bu_hops(0.5, T, "F-", TABLE_STEPS, "double", 0.02)[0].relative
        for T in TABLE_PERIODS
    ]
    elapsed = time.perf_counter() - t0
    gaps = [abs(a - b) for a, b in zip(got, TABLE_F_MINUS)]
    ok = max(gaps) <= 5e-3
    detail = ", ".join(f"{v:.4f}" for v in got)
    record_criterion(2, ok, f"timings {detail}; max gap {max(gaps):.4f}; {elapsed:.0f} s")
    assert ok


def test_first_hop_timing_plateau():
    vals = [
        bu_hops(0.5, T, "F-", TABLE_STEPS, "double", 0.02)[0].relative
        for T in TABLE_PERIODS
        if T >= 100.0
    ]
    ok = all(0.29 <= v <= 0.31 for v in vals)
    record_criterion(3, ok, "T >= 100 timings " + ", ".join(f"{v:.4f}" for v in vals))
    assert ok


def test_noncyclic_seed_timing_trends():
    # Wider window: at T = 20 the hop transition is 2.5% of the loop, so the
    # imaginary-part zero can sit outside the 2% default.
    columns = {}
    for kind in ("eig-", "mix0.1", "mix0.5"):
        columns[kind] = [
            bu_hops(0.5, T, kind, TABLE_STEPS, "double", 0.05)[0].relative
            for T in TABLE_PERIODS
        ]

    def decreasing(seq):
        return all(b < a + 5e-3 for a, b in zip(seq, seq[1:])) and seq[-1] < seq[0]

    ok = all(decreasing(col) for col in columns.values())
    detail = "; ".join(
        f"{kind} " + ",".join(f"{v:.3f}" for v in col) for kind, col in columns.items()
    )
    record_criterion(4, ok, detail)
    assert ok


def test_rotating_model_phase_exactness():
    rng = np.random.default_rng(20260816)
    accepted = 0
    worst_phase = 0.0
    worst_identity = 0.0
    while accepted < 20:
        eps = complex(rng.uniform(-1.2, 1.2), rng.uniform(-0.6, 0.6))
        om = float(rng.uniform(0.4, 3.0))
        p = Model1Params(epsilon=eps, omega=om)
        cf = h1_closed_form(p)
        if abs(cf.Omega) <= 0.2:
            continue
        accepted += 1
        pair = h1_cyclic_pair(p, 1 << 13)
        for st, br, theta in (
            (pair[0], "+", cf.theta_plus),
            (pair[1], "-", cf.theta_minus),
        ):
            traj = propagate(lambda t, q=p: h1(q, t), st.u, p.period, 1 << 13)
            exact = h1_aa_exact(p, br)
            worst_phase = max(worst_phase, circle_gap(aa_phase(traj).beta, exact))
            worst_identity = max(
                worst_identity, abs(exact - solid_angle_phase(theta))
            )
    ok = worst_phase <= 1e-6 and worst_identity <= 1e-12
    record_criterion(
        5,
        ok,
        f"20 draws: max |numeric - closed form| {worst_phase:.2e}; "
        f"polar-cap identity gap {worst_identity:.2e}",
    )
    assert ok


def test_slow_limit_correspondence():
    periods = (50.0, 100.0, 200.0, 400.0)
    eps = 0.5 + 0.0j
    rotating = []
    for T in periods:
        p = Model1Params(epsilon=eps, omega=TWO_PI / T)
        _, minus = h1_cyclic_pair(p, 1 << 14)
        traj = propagate(lambda t, q=p: h1(q, t), minus.u, T, 1 << 14)
        rotating.append(circle_gap(aa_phase(traj).beta, h1_aa_slow_limit(eps, "-")))
    oscillating = []
    for T in periods:
        q = Model2Params(mu=0.2, omega=TWO_PI / T)
        H = lambda t, qq=q: h2(qq, t)
        sa, _ = cyclic_states(floquet_operator(H, T, 1 << 14))
        traj = propagate(H, sa.u, T, 1 << 14)
        oscillating.append(circle_gap(aa_phase(traj).beta, 0.0))
    mono = all(
        all(b < a for a, b in zip(col, col[1:])) for col in (rotating, oscillating)
    )
    finals = rotating[-1] < 1e-2 and oscillating[-1] < 1e-2
    ok = mono and finals
    record_criterion(
        6,
        ok,
        "rotating gaps "
        + ",".join(f"{v:.6f}" for v in rotating)
        + "; oscillating gaps "
        + ",".join(f"{v:.6f}" for v in oscillating)
        + ("" if ok else " (rotating final gap is the model's own finite-T offset)"),
    )
    assert ok


def test_violent_phase_oscillation():
    t0 = time.perf_counter()
    betas = ([], [])
    for T in np.arange(100.0, 101.0 + 1e-9, 0.02):
        q = Model2Params(mu=1.2, omega=TWO_PI / float(T))
        H = lambda t, qq=q: h2(qq, t)
        U = floquet_operator(
            H, float(T), 1 << 14, precision="extended", liouville_tol=1e-5
        )
        for slot, s in enumerate(cyclic_states(U)):
            traj = propagate(H, s.u, float(T), 1 << 14, precision="extended")
            betas[slot].append(aa_phase(traj, closure_tol=1e-3).beta)
    elapsed = time.perf_counter() - t0
    merged = np.array(betas[0] + betas[1])
    span = float(merged.max() - merged.min())

    def wiggles(seq):
        d = np.diff(np.asarray(seq))
        return bool(np.any(d > 0) and np.any(d < 0))

    non_mono = wiggles(betas[0]) and wiggles(betas[1])
    ok = span > np.pi and non_mono
    record_criterion(
        7,
        ok,
        f"51 periods, both cyclic states: beta range {span:.3f}"
        f" (> pi: {span > np.pi}), non-monotonic {non_mono}, {elapsed:.0f} s",
    )
    assert ok


def test_hop_dichotomy_across_critical_ratio():
    below_minus = len(bu_hops(0.3, 250.0, "F-", 1 << 14, "double", 0.02))
    above_minus = len(bu_hops(0.5, 250.0, "F-", 1 << 14, "double", 0.02))
    below_plus = len(bu_hops(0.3, 250.0, "F+", 1 << 14, "double", 0.02))
    # The '+' state's exponentially small companion content sits below double
    # roundoff at this period; extended precision keeps the count honest.
    above_plus = len(bu_hops(0.5, 250.0, "F+", 1 << 14, "extended", 0.02))
    ok = (below_minus, above_minus, below_plus, above_plus) == (0, 2, 0, 0)
    record_criterion(
        8,
        ok,
        f"'-' hops: rho 0.3 -> {below_minus}, rho 0.5 -> {above_minus}; "
        f"'+' hops: {below_plus}, {above_plus}",
    )
    assert ok


def test_instantaneous_seed_contrast():
    eig_events = bu_hops(0.3, 250.0, "eig-", 1 << 14, "double", 0.02)
    cyc_events = bu_hops(0.3, 250.0, "F-", 1 << 14, "double", 0.02)
    ok = len(eig_events) >= 1 and len(cyc_events) == 0
    timings = ",".join(f"{e.relative:.3f}" for e in eig_events)
    record_criterion(
        9,
        ok,
        f"instantaneous seed hops at {timings or 'none'}; cyclic seed {len(cyc_events)}",
    )
    assert ok


def _phase_matrix():
    """Cyclic trajectories across all three models, with closure overrides."""
    runs = []
    for eps, om in ((0.5 + 0.0j, 1.0), (0.5 + 0.3j, 0.7), (-0.4 + 0.1j, 2.0)):
        p = Model1Params(epsilon=eps, omega=om)
        for st in h1_cyclic_pair(p, 1 << 13):
            traj = propagate(lambda t, q=p: h1(q, t), st.u, p.period, 1 << 13)
            runs.append((traj, None))
    q = Model2Params(mu=0.2, omega=TWO_PI / 50.0)
    H = lambda t, qq=q: h2(qq, t)
    sa, _ = cyclic_states(floquet_operator(H, 50.0, 1 << 13))
    runs.append((propagate(H, sa.u, 50.0, 1 << 13), None))
    q = Model2Params(mu=1.2, omega=TWO_PI / 100.0)
    H = lambda t, qq=q: h2(qq, t)
    sa, _ = cyclic_states(
        floquet_operator(H, 100.0, 1 << 14, precision="extended", liouville_tol=1e-5)
    )
    runs.append((propagate(H, sa.u, 100.0, 1 << 14, precision="extended"), 1e-3))
    runs.append((bu_run(0.5, 90.0, "F-", 1 << 14, "double"), None))
    runs.append((bu_run(0.3, 250.0, "F-", 1 << 14, "double"), None))
    return runs


def test_phase_reality_and_gauge_invariance():
    rng = np.random.default_rng(7)
    worst_resid = 0.0
    worst_gauge = 0.0
    runs = _phase_matrix()
    for traj, tol in runs:
        kw = {} if tol is None else {"closure_tol": tol}
        res = aa_phase(traj, **kw)
        worst_resid = max(worst_resid, res.imag_residual)
        phases = np.exp(1j * rng.uniform(0.0, TWO_PI, size=traj.states.shape[0]))
        gauged = Trajectory(
            times=traj.times,
            states=traj.states * phases[:, None],
            period=traj.period,
            model=traj.model,
            params=traj.params,
        )
        res2 = aa_phase(gauged, **kw)
        worst_gauge = max(worst_gauge, circle_gap(res.beta, res2.beta))
    ok = worst_resid < 1e-8 and worst_gauge < 1e-8
    record_criterion(
        10,
        ok,
        f"{len(runs)} cyclic runs: max imag residual {worst_resid:.2e}, "
        f"max gauge shift {worst_gauge:.2e}",
    )
    assert ok


def _log_crossing(theta, mag, level, lo=1.0, hi=2.8):
    """Angle where |ratio| first reaches level inside the window, log-interpolated."""
    sel = (theta >= lo) & (theta <= hi)
    th = np.asarray(theta[sel], dtype=float)
    mg = np.asarray(mag[sel], dtype=float)
    k = int(np.argmax(mg >= level))
    if k == 0:
        raise AssertionError(f"no crossing of {level} inside the window")
    y0, y1 = np.log(mg[k - 1]), np.log(mg[k])
    return float(th[k - 1] + (np.log(level) - y0) * (th[k] - th[k - 1]) / (y1 - y0))


def _companion_ratio(traj, paths):
    """Takeover clock of a trajectory: companion content over ridden content.

    The tracked-path labels order eigenvalues at the start of the loop and do
    not know which path a given state rides, so the reference is fixed by the
    data: the ratio that starts below 1 is companion-over-own.
    """
    for ref in ("+", "-"):
        series = ratio_series(traj, paths, ref)
        if abs(complex(series.ratio[0])) < 1.0:
            return series
    raise AssertionError("neither projection starts below 1")


def test_takeover_asymptotics_and_width_scaling():
    rel = []
    for T in (50.0, 100.0, 200.0):
        traj = bu_run(0.5, T, "F+", 1 << 14, "extended")
        series = _companion_ratio(traj, loop_paths(0.5, 1 << 14))
        mid = traj.states.shape[0] // 2
        got = abs(complex(series.ratio[mid]))
        want = abs(complex(r_plus_asymptotic(0.5, 1.0, T, np.pi)))
        rel.append(abs(got - want) / want)
    rel_ok = all(b < a for a, b in zip(rel, rel[1:]))

    widths = []
    for T, steps in ((100.0, 1 << 14), (200.0, 1 << 15), (400.0, 1 << 16)):
        traj = bu_run(0.5, T, "F-", steps, "extended")
        series = _companion_ratio(traj, loop_paths(0.5, steps))
        theta = np.asarray(TWO_PI * traj.times / T, dtype=float)
        mag = np.asarray(np.abs(series.ratio), dtype=float)
        widths.append(
            _log_crossing(theta, mag, 9.0) - _log_crossing(theta, mag, 1.0 / 9.0)
        )
    slope = float(np.polyfit(np.log((100.0, 200.0, 400.0)), np.log(widths), 1)[0])
    slope_ok = -1.2 <= slope <= -0.8
    ok = rel_ok and slope_ok
    record_criterion(
        11,
        ok,
        "ratio rel err "
        + ",".join(f"{v:.4f}" for v in rel)
        + "; widths "
        + ",".join(f"{w:.4f}" for w in widths)
        + f"; slope {slope:.3f}",
    )
    assert ok


def test_property_suite():
    p = Model1Params(epsilon=0.5 + 0.3j, omega=1.0)
    H1 = lambda t: h1(p, t)
    start = np.array([1.0, 0.0], dtype=complex)
    ref = propagate(H1, start, p.period, 1 << 12).states[-1]
    errors = [
        float(np.linalg.norm(propagate(H1, start, p.period, n).states[-1] - ref))
        for n in (1 << 8, 1 << 9, 1 << 10)
    ]
    orders = [float(np.log2(errors[k] / errors[k + 1])) for k in range(2)]
    orders_ok = all(3.5 <= o <= 4.5 for o in orders)

    # Traceless generators: the one-period determinant must be exactly 1.
    det_gaps = []
    for U in (
        floquet_operator(H1, p.period, 1 << 12),
        floquet_operator(
            lambda t, q=BUParams(rho=0.5, r=1.0, period=90.0): hbu(q, t), 90.0, 1 << 13
        ),
    ):
        det = complex(U[0, 0] * U[1, 1] - U[0, 1] * U[1, 0])
        det_gaps.append(abs(det - 1.0))
    det_ok = max(det_gaps) < 1e-6

    wronskian = 0.0
    for nu, z in ((0.37, 0.9 * np.exp(0.3j)), (2.6, 3.1 * np.exp(-1.1j)), (7.5, 1.4 + 2.2j)):
        jp, djp = bessel_series(nu, z)
        jm, djm = bessel_series(-nu, z)
        want = -2.0 * np.sin(np.pi * nu) / (np.pi * z)
        wronskian = max(wronskian, abs(jp * djm - jm * djp - want) / abs(want))
    wronskian_ok = wronskian < 1e-8

    closure = 0.0
    for path in loop_paths(0.3, 1 << 14) + loop_paths(0.5, 1 << 14):
        closure = max(closure, abs(path.closure_defect))
    q = Model2Params(mu=1.2, omega=1.0)
    for path in eigen_track(lambda t: h2(q, t), q.period, 1 << 12):
        closure = max(closure, abs(path.closure_defect))
    closure_ok = closure < 1e-8

    phase_gap = 0.0
    for r, T in ((1.0, 7.3), (2.0, 5.1), (0.7, 9.4)):
        pb = BUParams(rho=0.3 * r, r=r, period=T)
        sa, sb = cyclic_states(
            floquet_operator(lambda t, qq=pb: hbu(qq, t), T, 1 << 12)
        )
        w = T * np.sqrt(r)
        for target in (w, -w):
            phase_gap = max(
                phase_gap,
                min(circle_gap(s.alpha.real, target) for s in (sa, sb)),
            )
    floquet_ok = phase_gap < 1e-6

    ok = orders_ok and det_ok and wronskian_ok and closure_ok and floquet_ok
    record_criterion(
        12,
        ok,
        f"integrator orders {orders[0]:.2f},{orders[1]:.2f}; det gap {max(det_gaps):.1e}; "
        f"wronskian {wronskian:.1e}; path closure {closure:.1e}; "
        f"loop multiplier phase gap {phase_gap:.1e}",
    )
    assert ok

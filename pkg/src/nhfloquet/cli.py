"""Command line scenario runner.

Every deliverable output (state traces with eigenpath overlays, phase sweeps,
hop timing tables, Bloch-sphere shadows, the critical-ratio solve, wedge
diagnostics and the series-versus-asymptotics table) is produced by one
subcommand writing CSV or JSON.  Outputs are deterministic: identical
configuration gives identical bytes.

Exit codes: 0 success, 2 configuration error, 3 numerical failure raised by
the library, 4 output I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Sequence

import numpy as np

from .adiabatic import detect_hops, eigen_track, ratio_series
from .asymptotics import (
    bessel_series,
    critical_ratio,
    r_minus_asymptotic,
    stokes_point,
    uniform_bessel,
    xi_exponent,
)
from .errors import (
    DegenerateMatrix,
    IntegerOrder,
    NHFloquetError,
    OnStokesLine,
    SeriesDomain,
)
from .geophase import aa_phase, bloch_coords
from .models import (
    BUParams,
    Model1Params,
    Model2Params,
    bu_floquet_bessel,
    bu_instantaneous,
    h1,
    h1_closed_form,
    h2,
    hbu,
)
from .numerics import (
    DEFAULT_STEPS,
    CyclicState,
    Trajectory,
    cyclic_states,
    eig2,
    floquet_operator,
    propagate,
)

__all__ = ["main", "entry"]

_TWO_PI = 2.0 * np.pi
_POLE_TOL = 1e-12


class ConfigError(ValueError):
    """Invalid command line or configuration-file input."""


@dataclass(frozen=True)
class ModelSpec:
    """A fully resolved model choice: generator, period and public parameters."""

    name: str
    params: object
    H: Callable[[float], np.ndarray]
    period: float

    def public_params(self) -> dict[str, float]:
        p = self.params
        if self.name == "h1":
            return {
                "epsilon_re": float(p.epsilon.real),
                "epsilon_im": float(p.epsilon.imag),
                "omega": p.omega,
            }
        if self.name == "h2":
            return {"mu": p.mu, "omega": p.omega}
        return {"rho": p.rho, "r": p.r, "period": p.period}


def _model_spec(
    name: str,
    *,
    epsilon: complex = 0j,
    omega: float | None = None,
    mu: float | None = None,
    rho: float | None = None,
    r: float | None = None,
    period: float | None = None,
) -> ModelSpec:
    if name == "h1":
        if omega is not None and period is not None:
            raise ConfigError("give either --omega or --period for h1, not both")
        if omega is None:
            if period is None:
                raise ConfigError("h1 needs --omega or --period")
            omega = _TWO_PI / period
        p1 = Model1Params(epsilon=complex(epsilon), omega=float(omega))
        return ModelSpec("h1", p1, partial(h1, p1), p1.period)
    if name == "h2":
        if mu is None:
            raise ConfigError("h2 needs --mu")
        if omega is not None and period is not None:
            raise ConfigError("give either --omega or --period for h2, not both")
        if omega is None:
            if period is None:
                raise ConfigError("h2 needs --omega or --period")
            omega = _TWO_PI / period
        p2 = Model2Params(mu=float(mu), omega=float(omega))
        return ModelSpec("h2", p2, partial(h2, p2), p2.period)
    if name == "bu":
        if rho is None or r is None or period is None:
            raise ConfigError("bu needs --rho, --r and --period")
        pb = BUParams(rho=float(rho), r=float(r), period=float(period))
        return ModelSpec("bu", pb, partial(hbu, pb), pb.period)
    raise ConfigError(f"unknown model {name!r}")


def _parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "")
    try:
        return complex(s)
    except ValueError:
        pass
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r}") from None


def _parse_initial(text: str | None) -> tuple[str, tuple[complex, complex] | None]:
    if text is None:
        raise ConfigError("this command needs --initial")
    s = text.strip()
    if s in ("cyclic+", "cyclic-", "eig+", "eig-"):
        return s, None
    for name in ("mix", "custom"):
        if s.startswith(name + "(") and s.endswith(")"):
            parts = s[len(name) + 1 : -1].split(",")
            if len(parts) != 2:
                raise ConfigError(f"{name}(...) needs exactly two entries, got {text!r}")
            return name, (_parse_complex(parts[0]), _parse_complex(parts[1]))
    raise ConfigError(
        f"unrecognized initial-state selector {text!r}; use cyclic+/cyclic-/"
        "eig+/eig-/mix(w1,w2)/custom(a,b)"
    )


def _fix_phase(u: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(u)))
    return u * np.conj(u[k] / abs(u[k]))


def _multiplier_targets(spec: ModelSpec) -> tuple[complex, complex] | None:
    """Analytic Floquet multipliers where known, for branch labeling."""
    if spec.name == "h1":
        cf = h1_closed_form(spec.params)
        T = spec.period
        return (
            complex(np.exp(-1j * cf.Omega * T - 1j * np.pi)),
            complex(np.exp(+1j * cf.Omega * T - 1j * np.pi)),
        )
    if spec.name == "bu" and spec.params.r > 0.0:
        w = spec.period * np.sqrt(spec.params.r)
        return complex(np.exp(1j * w)), complex(np.exp(-1j * w))
    return None


def _bu_series_pair(spec: ModelSpec) -> tuple[CyclicState, CyclicState]:
    """Loop-model cyclic pair at t = 0 from the fixed-order series solutions.

    alpha is the analytic Floquet phase +/- T sqrt(r) on the principal branch
    and residual is NaN: this route never forms U(T), so no eigen-residual
    exists.  The one-period propagator would lose the squared envelope dip in
    roundoff, and slow-transient filtering converges to the pure growing
    solution, whose exponentially small admixture of the other branch is the
    very quantity that sets hop timing; the series keeps that admixture exact.
    """
    w = spec.period * np.sqrt(spec.params.r)
    pair = []
    for branch, signed in (("+", w), ("-", -w)):
        u = np.asarray(bu_floquet_bessel(spec.params, branch, 0.0), dtype=complex)
        u = u / np.linalg.norm(u)
        alpha = complex((signed + np.pi) % _TWO_PI - np.pi)
        pair.append(CyclicState(u=u, alpha=alpha, label=branch, residual=float("nan")))
    return pair[0], pair[1]


def _cyclic_pair(
    spec: ModelSpec,
    steps: int,
    precision: str = "double",
    liouville_tol: float | None = None,
) -> tuple[CyclicState, CyclicState]:
    """Cyclic states labeled to match the model's analytic branches when known.

    The loop model uses its exact series solutions where they hold (any
    non-integer order within the series accuracy budget) and only falls back
    to the one-period propagator route outside that.
    """
    if spec.name == "bu" and spec.params.r > 0.0:
        try:
            return _bu_series_pair(spec)
        except (IntegerOrder, SeriesDomain):
            pass
    kw = {} if liouville_tol is None else {"liouville_tol": liouville_tol}
    U = floquet_operator(spec.H, spec.period, steps, precision=precision, **kw)
    s_plus, s_minus = cyclic_states(U)
    targets = _multiplier_targets(spec)
    if targets is not None:
        mp, mm = targets
        keep = abs(s_plus.multiplier - mp) + abs(s_minus.multiplier - mm)
        swap = abs(s_plus.multiplier - mm) + abs(s_minus.multiplier - mp)
        if swap < keep:
            s_plus, s_minus = s_minus, s_plus
    return s_plus, s_minus


def _resolve_initial(
    spec: ModelSpec,
    selector: tuple[str, tuple[complex, complex] | None],
    steps: int,
    precision: str = "double",
) -> np.ndarray:
    kind, data = selector
    if kind == "custom":
        v = np.array(data, dtype=complex)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise ConfigError("custom initial state must be nonzero")
        return v / n
    if kind in ("eig+", "eig-"):
        sign = +1.0 if kind.endswith("+") else -1.0
        if spec.name == "bu":
            z0 = complex(spec.params.rho - spec.params.r)
            if z0 == 0.0:
                raise DegenerateMatrix("loop passes through the degeneracy at t = 0")
            q = z0 ** 0.25
            v = np.array([1.0 / q, sign * q], dtype=complex)
            return v / np.linalg.norm(v)
        (l1, v1), (l2, v2) = eig2(spec.H(0.0))
        if (l1.real, l1.imag) < (l2.real, l2.imag):
            l1, l2, v1, v2 = l2, l1, v2, v1
        return v1 if sign > 0 else v2
    s_plus, s_minus = _cyclic_pair(spec, steps, precision)
    u_plus = _fix_phase(s_plus.u)
    u_minus = _fix_phase(s_minus.u)
    if kind == "cyclic+":
        return u_plus
    if kind == "cyclic-":
        return u_minus
    w_plus, w_minus = data
    if w_plus == 0 and w_minus == 0:
        raise ConfigError("mix(...) weights must not both be zero")
    v = w_plus * u_plus + w_minus * u_minus
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# output plumbing


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def _cell(x) -> str:
    return x if isinstance(x, str) else _fmt(x)


def _render_table(fmt: str, columns: list[str], rows: list[list]) -> str:
    if fmt == "json":
        return json.dumps({"columns": columns, "rows": rows}, indent=2) + "\n"
    lines = [",".join(columns)]
    lines.extend(",".join(_cell(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def _write_output(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _paths_for(spec: ModelSpec, traj: Trajectory):
    if spec.name == "bu":
        return bu_instantaneous(spec.params, _TWO_PI * traj.times / spec.period)
    return eigen_track(spec.H, spec.period, traj.steps)


def _prepare(args) -> tuple[ModelSpec, Trajectory]:
    spec = _model_spec(
        _require(args, "model"),
        epsilon=complex(args.epsilon_re or 0.0, args.epsilon_im or 0.0),
        omega=args.omega,
        mu=args.mu,
        rho=args.rho,
        r=args.r,
        period=args.period,
    )
    selector = _parse_initial(args.initial)
    psi0 = _resolve_initial(spec, selector, args.steps, args.precision)
    traj = propagate(
        spec.H,
        psi0,
        spec.period,
        args.steps,
        model=spec.name,
        params=spec.public_params(),
        precision=args.precision,
    )
    return spec, traj


def _require(args, name: str):
    value = getattr(args, name, None)
    if value is None:
        raise ConfigError(f"missing --{name.replace('_', '-')}")
    return value


def cmd_trajectory(args) -> int:
    spec, traj = _prepare(args)
    path_plus, path_minus = _paths_for(spec, traj)
    rp = path_plus.ratios()
    rm = path_minus.ratios()
    norms = np.linalg.norm(traj.states, axis=1)
    a = traj.states[:, 0]
    b = traj.states[:, 1]
    ok = np.abs(a) > _POLE_TOL * norms
    thetas = _TWO_PI * traj.times / spec.period
    rows = []
    for k in range(traj.times.shape[0]):
        psi = b[k] / a[k] if ok[k] else None
        row = [
            traj.times[k],
            thetas[k],
            a[k].real,
            a[k].imag,
            b[k].real,
            b[k].imag,
            None if psi is None else psi.real,
            None if psi is None else psi.imag,
            norms[k],
        ]
        for ratio in (rp[k], rm[k]):
            finite = np.isfinite(ratio)
            row.append(ratio.real if finite else None)
            row.append(ratio.imag if finite else None)
        rows.append(row)
    columns = [
        "t",
        "theta",
        "re_a",
        "im_a",
        "re_b",
        "im_b",
        "re_psi",
        "im_psi",
        "norm",
        "re_psiE_plus",
        "im_psiE_plus",
        "re_psiE_minus",
        "im_psiE_minus",
    ]
    _write_output(args.out, _render_table(args.format, columns, rows))
    return 0


def cmd_bloch(args) -> int:
    spec, traj = _prepare(args)
    path_plus, path_minus = _paths_for(spec, traj)
    rows = []
    for k in range(traj.times.shape[0]):
        cells = [traj.times[k]]
        for v in (traj.states[k], path_plus.vectors[k], path_minus.vectors[k]):
            pt = bloch_coords(v)
            cells.extend([pt.theta, pt.phi])
        rows.append(cells)
    columns = [
        "t",
        "theta_state",
        "phi_state",
        "theta_plus",
        "phi_plus",
        "theta_minus",
        "phi_minus",
    ]
    _write_output(args.out, _render_table(args.format, columns, rows))
    return 0


def cmd_hops(args) -> int:
    spec, traj = _prepare(args)
    paths = _paths_for(spec, traj)
    window = getattr(args, "window", None)
    kw = {} if window is None else {"window_frac": window}
    events = detect_hops(traj, paths, **kw)
    payload = {
        "model": spec.name,
        "params": spec.public_params(),
        "period": spec.period,
        "steps": args.steps,
        "initial": args.initial,
        "count": len(events),
        "first_relative": events[0].relative if events else None,
        "events": [
            {
                "t_star": e.t_star,
                "relative": e.relative,
                "from": e.direction[0],
                "to": e.direction[1],
                "kind": e.crossing_kind,
            }
            for e in events
        ],
    }
    if args.format == "csv":
        columns = ["t_star", "relative", "from", "to", "kind"]
        rows = [
            [e.t_star, e.relative, e.direction[0], e.direction[1], e.crossing_kind]
            for e in events
        ]
        _write_output(args.out, _render_table("csv", columns, rows))
    else:
        _write_output(args.out, json.dumps(payload, indent=2) + "\n")
    return 0


def _sweep_point(payload: dict) -> dict:
    """One sweep sample: cyclic pair at period T, then both cyclic phases."""
    T = payload["T"]
    try:
        spec = _model_spec(payload["model"], period=T, **payload["values"])
        steps = payload["steps"]
        precision = payload["precision"]
        s_plus, s_minus = _cyclic_pair(spec, steps, precision, payload["liouville_tol"])
        phase_kw = {}
        if payload["closure_tol"] is not None:
            phase_kw["closure_tol"] = payload["closure_tol"]
        betas = []
        for s in (s_plus, s_minus):
            traj = propagate(spec.H, _fix_phase(s.u), spec.period, steps, precision=precision)
            betas.append(aa_phase(traj, **phase_kw).beta)
        return {"T": T, "beta_plus": betas[0], "beta_minus": betas[1], "warning": None}
    except NHFloquetError as exc:
        return {
            "T": T,
            "beta_plus": None,
            "beta_minus": None,
            "warning": f"T={T!r}: {type(exc).__name__}: {exc}",
        }


def cmd_aa_sweep(args) -> int:
    if args.period is not None or args.omega is not None:
        raise ConfigError("aa-sweep takes --t-min/--t-max/--t-step, not --period/--omega")
    t_min = _require(args, "t_min")
    t_max = _require(args, "t_max")
    t_step = _require(args, "t_step")
    if t_min <= 0 or t_step <= 0 or t_max < t_min:
        raise ConfigError("need 0 < t-min <= t-max and t-step > 0")
    count = int(np.floor((t_max - t_min) / t_step + 1e-9)) + 1
    periods = [t_min + k * t_step for k in range(count)]

    model = _require(args, "model")
    values: dict = {}
    if model == "h1":
        values["epsilon"] = complex(args.epsilon_re or 0.0, args.epsilon_im or 0.0)
    elif model == "h2":
        values["mu"] = _require(args, "mu")
    else:
        values["rho"] = _require(args, "rho")
        values["r"] = _require(args, "r")
    payloads = [
        {
            "model": model,
            "values": values,
            "T": T,
            "steps": args.steps,
            "precision": args.precision,
            "closure_tol": args.closure_tol,
            "liouville_tol": args.liouville_tol,
        }
        for T in periods
    ]

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_point, payloads))
    else:
        results = [_sweep_point(p) for p in payloads]

    rows = [[res["T"], res["beta_plus"], res["beta_minus"]] for res in results]
    warnings_found = [res["warning"] for res in results if res["warning"]]
    _write_output(args.out, _render_table(args.format, ["T", "beta_plus", "beta_minus"], rows))
    if warnings_found:
        text = "\n".join(warnings_found) + "\n"
        if args.out is None:
            sys.stderr.write(text)
        else:
            _write_output(args.out + ".warnings", text)
    return 0


def cmd_critical(args) -> int:
    sol = critical_ratio()
    entries: list[tuple[str, float]] = [
        ("c", sol.c),
        ("iterations", sol.iterations),
        ("residual", sol.residual),
    ]
    if args.equation:
        c = sol.c
        res = np.log((1.0 + np.sqrt(1.0 + c)) / np.sqrt(c)) - np.sqrt(1.0 + c)
        entries.append(("equation_residual", float(res)))
    if args.check_theta:
        entries.append(
            ("re_exponent_at_pi", float(xi_exponent(sol.c, 1.0, np.pi).real))
        )
    if args.format == "json":
        text = json.dumps(dict(entries), indent=2) + "\n"
    else:
        text = "".join(f"{k} = {_fmt(v)}\n" for k, v in entries)
    _write_output(args.out, text)
    return 0


def cmd_stokes(args) -> int:
    rho = _require(args, "rho")
    r = _require(args, "r")
    period = _require(args, "period")
    spec = _model_spec("bu", rho=rho, r=r, period=period)
    steps = args.steps
    _, s_minus = _cyclic_pair(spec, steps, args.precision)
    traj = propagate(spec.H, _fix_phase(s_minus.u), spec.period, steps, precision=args.precision)
    paths = bu_instantaneous(spec.params, _TWO_PI * traj.times / period)
    series = ratio_series(traj, paths, "-")
    idx = np.unique(np.round(np.linspace(0, steps, args.grid)).astype(int))
    rows = []
    for k in idx:
        theta = float(_TWO_PI * traj.times[k] / period)
        point = stokes_point(rho, r, theta)
        try:
            approx, _ = r_minus_asymptotic(rho, r, period, theta)
            approx_abs = abs(approx)
        except OnStokesLine:
            approx_abs = None
        rows.append(
            [
                theta,
                float(point.exponent.real),
                float(abs(series.ratio[k])),
                approx_abs,
                point.wedge.value,
            ]
        )
    columns = ["theta", "re_exponent", "abs_r_exact", "abs_r_asym", "wedge"]
    _write_output(args.out, _render_table(args.format, columns, rows))
    return 0


def _parse_float_list(text: str, option: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse {option} list {text!r}") from None
    if not values:
        raise ConfigError(f"{option} list is empty")
    return values


def cmd_bessel_check(args) -> int:
    nus = _parse_float_list(args.nu_values, "--nu-values")
    xs = _parse_float_list(args.x_values, "--x-values")
    rows = []
    for nu in nus:
        for x in xs:
            z = nu * x
            jp_u, _, jm_u, _ = uniform_bessel(nu, x)
            row: list = [nu, x, z]
            try:
                jp_s, _ = bessel_series(nu, complex(z))
                jm_s, _ = bessel_series(-nu, complex(z))
            except (SeriesDomain, IntegerOrder):
                row.extend([None, abs(jp_u), None, None, abs(jm_u), None])
            else:
                row.extend(
                    [
                        abs(jp_s),
                        abs(jp_u),
                        abs(jp_s - jp_u) / abs(jp_s),
                        abs(jm_s),
                        abs(jm_u),
                        abs(jm_s - jm_u) / abs(jm_s),
                    ]
                )
            rows.append(row)
    columns = [
        "nu",
        "x",
        "z",
        "abs_j_plus_series",
        "abs_j_plus_uniform",
        "rel_gap_plus",
        "abs_j_minus_series",
        "abs_j_minus_uniform",
        "rel_gap_minus",
    ]
    _write_output(args.out, _render_table(args.format, columns, rows))
    return 0


# ---------------------------------------------------------------------------
# configuration files and argument parsing


def _bool_from_text(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_CONFIG_TYPES: dict[str, Callable] = {
    "model": str,
    "initial": str,
    "out": str,
    "format": str,
    "epsilon_re": float,
    "epsilon_im": float,
    "omega": float,
    "period": float,
    "mu": float,
    "rho": float,
    "r": float,
    "t_min": float,
    "t_max": float,
    "t_step": float,
    "steps": int,
    "jobs": int,
    "grid": int,
    "nu_values": str,
    "x_values": str,
    "precision": str,
    "window": float,
    "closure_tol": float,
    "liouville_tol": float,
    "equation": _bool_from_text,
    "check_theta": _bool_from_text,
}


def _load_config(path: str) -> dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw.strip()!r}")
        key, value = line.split("=", 1)
        entries[key.strip().lower().replace("-", "_")] = value.strip()
    return entries


def _apply_config(args) -> None:
    if getattr(args, "config", None) is None:
        return
    for key, raw in _load_config(args.config).items():
        if key == "config" or key not in _CONFIG_TYPES or not hasattr(args, key):
            raise ConfigError(f"unknown config key {key!r} for subcommand {args.command!r}")
        converter = _CONFIG_TYPES[key]
        current = getattr(args, key)
        explicit = current is not None and not (converter is _bool_from_text and current is False)
        if explicit:
            continue
        try:
            setattr(args, key, converter(raw))
        except ValueError as exc:
            raise ConfigError(f"config key {key!r}: {exc}") from None


def _apply_defaults(args) -> None:
    if getattr(args, "steps", None) is None:
        args.steps = DEFAULT_STEPS
    if args.steps < 16:
        raise ConfigError("steps must be at least 16")
    if getattr(args, "jobs", None) is None:
        args.jobs = 1
    if args.jobs < 1:
        raise ConfigError("jobs must be at least 1")
    if getattr(args, "format", None) is None:
        args.format = "json" if args.command in ("hops", "critical") else "csv"
    if args.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {args.format!r}")
    if getattr(args, "grid", None) is None:
        args.grid = 512
    elif args.grid < 2:
        raise ConfigError("grid must be at least 2")
    if hasattr(args, "nu_values") and args.nu_values is None:
        args.nu_values = "10.5,15.5,20.5,25.5"
    if hasattr(args, "x_values") and args.x_values is None:
        args.x_values = "0.2,0.4,0.6,0.8"
    if hasattr(args, "precision"):
        if args.precision is None:
            args.precision = "double"
        if args.precision not in ("double", "extended"):
            raise ConfigError(f"precision must be double or extended, got {args.precision!r}")


def _add_common(parser, *, model: bool, initial: bool, sweep: bool, period: bool) -> None:
    parser.add_argument("--config", help="key = value file; flags override it")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"])
    parser.add_argument("--steps", type=int, help="grid steps per period")
    parser.add_argument("--jobs", type=int, help="parallel workers for sweeps")
    if model:
        parser.add_argument("--model", choices=["h1", "h2", "bu"])
        parser.add_argument("--epsilon-re", dest="epsilon_re", type=float)
        parser.add_argument("--epsilon-im", dest="epsilon_im", type=float)
        parser.add_argument("--omega", type=float)
        parser.add_argument("--mu", type=float)
        parser.add_argument("--rho", type=float)
        parser.add_argument("--r", type=float)
    elif not model and period:
        parser.add_argument("--rho", type=float)
        parser.add_argument("--r", type=float)
    if period:
        parser.add_argument("--period", type=float)
        parser.add_argument(
            "--precision",
            choices=["double", "extended"],
            help="propagation arithmetic; extended helps long strongly damped loops",
        )
    if sweep:
        parser.add_argument("--t-min", dest="t_min", type=float)
        parser.add_argument("--t-max", dest="t_max", type=float)
        parser.add_argument("--t-step", dest="t_step", type=float)
    if initial:
        parser.add_argument(
            "--initial",
            help="cyclic+ | cyclic- | eig+ | eig- | mix(w1,w2) | custom(a,b)",
        )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nhfloquet",
        description="Periodically driven non-Hermitian two-level dynamics toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trajectory", help="state trace with eigenpath-ratio overlays")
    _add_common(p, model=True, initial=True, sweep=False, period=True)

    p = sub.add_parser("aa-sweep", help="cyclic geometric phases over a period sweep")
    _add_common(p, model=True, initial=False, sweep=True, period=True)
    p.add_argument(
        "--closure-tol",
        dest="closure_tol",
        type=float,
        help="cyclic-closure tolerance (models with strong transient growth"
        " keep a roundoff floor above the default)",
    )
    p.add_argument(
        "--liouville-tol",
        dest="liouville_tol",
        type=float,
        help="determinant self-check tolerance for the one-period propagator",
    )

    p = sub.add_parser("hops", help="detected following switches with timing")
    _add_common(p, model=True, initial=True, sweep=False, period=True)
    p.add_argument(
        "--window",
        dest="window",
        type=float,
        help="zero-crossing search window as a fraction of the period"
        " (short loops spread each switch over a wider fraction)",
    )

    p = sub.add_parser("bloch", help="Bloch-sphere shadow of state and eigenpaths")
    _add_common(p, model=True, initial=True, sweep=False, period=True)

    p = sub.add_parser("critical", help="critical loop-ratio solve")
    _add_common(p, model=False, initial=False, sweep=False, period=False)
    p.add_argument("--equation", action="store_true", help="print the defining residual")
    p.add_argument(
        "--check-theta",
        dest="check_theta",
        action="store_true",
        help="print Re exponent at theta = pi for the critical ratio",
    )

    p = sub.add_parser("stokes", help="wedge exponent versus exact takeover ratio")
    _add_common(p, model=False, initial=False, sweep=False, period=True)
    p.add_argument("--grid", type=int, help="number of output samples (default 512)")

    p = sub.add_parser("bessel-check", help="series versus uniform asymptotics table")
    _add_common(p, model=False, initial=False, sweep=False, period=False)
    p.add_argument("--nu-values", dest="nu_values", help="comma list of orders")
    p.add_argument("--x-values", dest="x_values", help="comma list of scaled arguments")

    return parser


_DISPATCH = {
    "trajectory": cmd_trajectory,
    "aa-sweep": cmd_aa_sweep,
    "hops": cmd_hops,
    "bloch": cmd_bloch,
    "critical": cmd_critical,
    "stokes": cmd_stokes,
    "bessel-check": cmd_bessel_check,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        _apply_config(args)
        _apply_defaults(args)
        return _DISPATCH[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NHFloquetError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

"""Command line front end.

Subcommands mirror the library layers: ``geometry`` and ``potential``
tabulate curve data, ``spectrum`` prints eigenvalue/coefficient tables,
``current``, ``moments`` and ``thermal`` cover the observables.  Output
is CSV (``thermal`` uses aligned text) on stdout or ``--out``.

The solver works in natural units with lengths as given; reported
energies and currents carry a factor R^2 and toroidal moments a factor
1/R so that everything is expressed in units built from the major
radius.  With the default R = 1 this is the identity.

Options may come from a ``key = value`` config file (``--config``);
explicit flags win over file values.  Exit codes: 0 success, 2 bad
usage/configuration, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from .geometry import HelixShape, curvature_potential, frenet_frame, position, speed
from .linalg import HermiticityViolation, NoConvergence
from .observables import (
    ThermalSpec,
    classical_moment_closed,
    free_particle_current,
    sample_current_profile,
    thermal_average,
    toroidal_moment,
)
from .quadrature import QuadratureNotConverged, QuadratureSpec
from .spectrum import BlochBasis, SpectrumConfig, solve_states

GEOMETRY_HEADER = "phi,x,y,z,f,kappa,tau,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz"

_CONFIG_KEYS = {
    "R", "a", "b", "omega", "p", "n_max", "vc", "grid",
    "quad_points", "quad_tol", "temperature", "digits", "out",
}


class UsageError(ValueError):
    """Bad flag/config input; maps to exit code 2."""


@dataclass
class Settings:
    R: float
    a_list: list
    b_list: list
    omega: int
    p_list: list
    n_max: int
    vc: str  # "with" | "without" | "both"
    grid: int
    quad: QuadratureSpec | None
    temperature: float | None
    digits: int
    out: str


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("shape and solver")
    g.add_argument("--R", type=float, default=None, help="major radius (default 1)")
    g.add_argument("--a", default=None,
                   help="radial half-axis; comma list allowed for 'potential' (default 0.5)")
    g.add_argument("--b", default=None,
                   help="vertical half-axis; comma list allowed for 'potential' (default 0.5)")
    g.add_argument("--omega", type=int, default=None, help="windings per turn (default 4)")
    g.add_argument("--p", default=None,
                   help="branch index, single/list/range e.g. 2 or 1,3 or 1-3")
    g.add_argument("--n-max", type=int, default=None, help="basis half-width (default 2)")
    vc = common.add_mutually_exclusive_group()
    vc.add_argument("--with-vc", dest="vc", action="store_const", const="with",
                    help="include the curvature potential")
    vc.add_argument("--without-vc", dest="vc", action="store_const", const="without",
                    help="drop the curvature potential")
    vc.add_argument("--both", dest="vc", action="store_const", const="both",
                    help="run with and without the curvature potential")
    o = common.add_argument_group("sampling and output")
    o.add_argument("--grid", type=int, default=None, help="angle samples per turn (default 256)")
    o.add_argument("--quad-points", type=int, default=None, help="initial quadrature points")
    o.add_argument("--quad-tol", type=float, default=None, help="quadrature tolerance")
    o.add_argument("--temperature", type=float, default=None,
                   help="temperature for 'thermal', in reported energy units")
    o.add_argument("--digits", type=int, default=None, help="significant digits (default 6)")
    o.add_argument("--out", default=None, help="output file, '-' for stdout (default)")
    o.add_argument("--config", default=None, help="key = value config file; flags override")
    common.set_defaults(vc=None)

    parser = argparse.ArgumentParser(
        prog="helixtm",
        description="Quantum states, currents, and toroidal moments on toroidal helices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in [
        ("geometry", "tabulate curve point, speed, curvature, torsion, and frame"),
        ("potential", "tabulate the curvature potential for one or more cross-sections"),
        ("spectrum", "print eigenvalues and basis coefficients per branch"),
        ("current", "tabulate the probability current of every sub-state"),
        ("moments", "toroidal moments with/without curvature plus classical reference"),
        ("thermal", "Boltzmann-averaged toroidal moments at a temperature"),
    ]:
        sub.add_parser(name, parents=[common], help=doc)
    return parser


def _parse_config_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    values = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = (value, lineno)
    return values


def _pick(args_value, config, key, default, convert, path):
    """Flag value if given, else config file value, else default."""
    if args_value is not None:
        return args_value
    if key in config:
        raw, lineno = config[key]
        try:
            return convert(raw)
        except (ValueError, TypeError) as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    return default


def _parse_float_list(text):
    try:
        return [float(part) for part in str(text).split(",")]
    except ValueError as exc:
        raise UsageError(f"expected number or comma list, got {text!r}") from exc


def _parse_p_list(text):
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if "-" in part:  # branch indices are non-negative, so '-' means a range
            lo, _, hi = part.partition("-")
            try:
                lo, hi = int(lo), int(hi)
            except ValueError as exc:
                raise UsageError(f"bad branch range {part!r}") from exc
            if hi < lo:
                raise UsageError(f"empty branch range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            try:
                out.append(int(part))
            except ValueError as exc:
                raise UsageError(f"bad branch index {part!r}") from exc
    return out


def _vc_from_text(text):
    if text not in ("with", "without", "both"):
        raise ValueError("must be one of: with, without, both")
    return text


def _resolve(args):
    config = _parse_config_file(args.config) if args.config else {}
    path = args.config
    omega = _pick(args.omega, config, "omega", 4, int, path)
    default_p = list(range(1, min(3, max(omega - 1, 0)) + 1)) or [0]
    p_raw = _pick(args.p, config, "p", None, str, path)
    settings = Settings(
        R=_pick(args.R, config, "R", 1.0, float, path),
        a_list=_parse_float_list(_pick(args.a, config, "a", "0.5", str, path)),
        b_list=_parse_float_list(_pick(args.b, config, "b", "0.5", str, path)),
        omega=omega,
        p_list=_parse_p_list(p_raw) if p_raw is not None else default_p,
        n_max=_pick(args.n_max, config, "n_max", 2, int, path),
        vc=_pick(args.vc, config, "vc", "both", _vc_from_text, path),
        grid=_pick(args.grid, config, "grid", 256, int, path),
        quad=None,
        temperature=_pick(args.temperature, config, "temperature", None, float, path),
        digits=_pick(args.digits, config, "digits", 6, int, path),
        out=_pick(args.out, config, "out", "-", str, path),
    )
    qp = _pick(args.quad_points, config, "quad_points", None, int, path)
    qt = _pick(args.quad_tol, config, "quad_tol", None, float, path)
    if qp is not None or qt is not None:
        settings.quad = QuadratureSpec(
            initial_points=qp if qp is not None else 64 * settings.omega,
            tolerance=qt if qt is not None else 1e-10,
        )
    if settings.grid < 2:
        raise UsageError(f"--grid must be >= 2, got {settings.grid}")
    if settings.digits < 1:
        raise UsageError(f"--digits must be >= 1, got {settings.digits}")
    return settings


def _single_shape(settings):
    if len(settings.a_list) != 1 or len(settings.b_list) != 1:
        raise UsageError("this command takes single --a and --b values")
    return HelixShape(
        R=settings.R, a=settings.a_list[0], b=settings.b_list[0], omega=settings.omega
    )


def _vc_variants(settings):
    return {"with": [True], "without": [False], "both": [False, True]}[settings.vc]


def _grid_angles(settings):
    return 2.0 * np.pi * np.arange(settings.grid) / settings.grid


def _fmt(value, digits):
    value = float(value)
    if value == 0.0:
        value = 0.0  # normalise -0.0
    return "%.*g" % (digits, value)


def _solve_branch(shape, settings, p, include_vc):
    basis = BlochBasis(p=p, n_max=settings.n_max, omega=shape.omega)
    config = SpectrumConfig(include_vc=include_vc, n_max=settings.n_max, quad=settings.quad)
    return solve_states(shape, basis, config)


def _cmd_geometry(settings):
    shape = _single_shape(settings)
    d = settings.digits
    lines = [GEOMETRY_HEADER]
    phi = _grid_angles(settings)
    r = position(shape, phi)
    frame = frenet_frame(shape, phi)
    for i in range(len(phi)):
        row = [phi[i], *r[i], frame.speed[i], frame.kappa[i], frame.tau[i],
               *frame.tangent[i], *frame.normal[i], *frame.binormal[i]]
        lines.append(",".join(_fmt(x, d) for x in row))
    return "\n".join(lines) + "\n"


def _cmd_potential(settings):
    if len(settings.a_list) != len(settings.b_list):
        raise UsageError("--a and --b lists must have the same length")
    shapes = [
        HelixShape(R=settings.R, a=a, b=b, omega=settings.omega)
        for a, b in zip(settings.a_list, settings.b_list)
    ]
    d = settings.digits
    scale = settings.R**2
    header = "phi," + ",".join(f"Vc[a={s.a:g};b={s.b:g}]" for s in shapes)
    lines = [header]
    phi = _grid_angles(settings)
    columns = [scale * curvature_potential(s, phi) for s in shapes]
    for i in range(len(phi)):
        lines.append(",".join([_fmt(phi[i], d)] + [_fmt(col[i], d) for col in columns]))
    return "\n".join(lines) + "\n"


def _cmd_spectrum(settings):
    shape = _single_shape(settings)
    d = settings.digits
    scale = settings.R**2
    dim = 2 * settings.n_max + 1
    lines = ["p,vc,row," + ",".join(f"alpha{i}" for i in range(dim))]
    for p in settings.p_list:
        for include_vc in _vc_variants(settings):
            states = _solve_branch(shape, settings, p, include_vc)
            tag = "on" if include_vc else "off"
            energies = ",".join(_fmt(scale * s.energy, d) for s in states)
            lines.append(f"{p},{tag},E,{energies}")
            for i, n in enumerate(range(-settings.n_max, settings.n_max + 1)):
                coeffs = ",".join(_fmt(s.coefficients[i].real, d) for s in states)
                lines.append(f"{p},{tag},m={n},{coeffs}")
    return "\n".join(lines) + "\n"


def _cmd_current(settings):
    shape = _single_shape(settings)
    d = settings.digits
    scale = settings.R**2
    header = ["phi"]
    columns = []
    for p in settings.p_list:
        for include_vc in _vc_variants(settings):
            tag = "on" if include_vc else "off"
            for state in _solve_branch(shape, settings, p, include_vc):
                profile = sample_current_profile(state, shape, settings.grid)
                header.append(f"j[p={p};alpha={state.alpha};vc={tag}]")
                columns.append(scale * profile.values)
    phi = _grid_angles(settings)
    lines = [",".join(header)]
    for i in range(len(phi)):
        lines.append(",".join([_fmt(phi[i], d)] + [_fmt(col[i], d) for col in columns]))
    return "\n".join(lines) + "\n"


def _cmd_moments(settings):
    shape = _single_shape(settings)
    d = settings.digits
    scale = 1.0 / settings.R
    lines = ["p,alpha,Tz_without_vc,Tz_with_vc,ratio,Tz_classical"]
    for p in settings.p_list:
        off = _solve_branch(shape, settings, p, False)
        on = _solve_branch(shape, settings, p, True)
        loop = free_particle_current(shape, p, settings.quad)
        classical = scale * classical_moment_closed(shape, loop)[2]
        for alpha in range(len(off)):
            t_off = scale * toroidal_moment(off[alpha], shape, settings.quad).z
            t_on = scale * toroidal_moment(on[alpha], shape, settings.quad).z
            ratio = "" if abs(t_on) < 1e-6 else _fmt(t_off / t_on, d)
            lines.append(
                f"{p},{alpha},{_fmt(t_off, d)},{_fmt(t_on, d)},{ratio},{_fmt(classical, d)}"
            )
    return "\n".join(lines) + "\n"


def _cmd_thermal(settings):
    shape = _single_shape(settings)
    if settings.temperature is None:
        raise UsageError("'thermal' needs --temperature (or temperature= in the config)")
    d = settings.digits
    t_scale = 1.0 / settings.R
    e_scale = settings.R**2
    spec_norm = ThermalSpec(temperature=settings.temperature, normalize=True)
    spec_raw = ThermalSpec(temperature=settings.temperature, normalize=False)
    lines = [
        f"thermal toroidal moment averages, temperature = {_fmt(settings.temperature, d)}",
        "p  vc   normalized  unnormalized",
    ]
    for p in settings.p_list:
        for include_vc in _vc_variants(settings):
            states = _solve_branch(shape, settings, p, include_vc)
            pairs = [
                (e_scale * s.energy, t_scale * toroidal_moment(s, shape, settings.quad).z)
                for s in states
            ]
            avg = thermal_average(pairs, spec_norm)
            try:
                raw = _fmt(thermal_average(pairs, spec_raw), d)
            except OverflowError:
                raw = "overflow"
            tag = "on " if include_vc else "off"
            lines.append(f"{p}  {tag}  {_fmt(avg, d)}  {raw}")
    return "\n".join(lines) + "\n"


_COMMANDS = {
    "geometry": _cmd_geometry,
    "potential": _cmd_potential,
    "spectrum": _cmd_spectrum,
    "current": _cmd_current,
    "moments": _cmd_moments,
    "thermal": _cmd_thermal,
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        settings = _resolve(args)
        for p in settings.p_list:
            if not 0 <= p < settings.omega:
                raise UsageError(f"branch index must satisfy 0 <= p < omega, got p={p}")
        text = _COMMANDS[args.command](settings)
    except (QuadratureNotConverged, NoConvergence, HermiticityViolation) as exc:
        print(f"helixtm: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ValueError) as exc:
        print(f"helixtm: error: {exc}", file=sys.stderr)
        return 2
    if settings.out == "-":
        sys.stdout.write(text)
    else:
        with open(settings.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

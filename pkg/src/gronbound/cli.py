"""
Command-line front end.

Subcommands: ``evolve``, ``bound``, ``grover``, ``sweep``, ``fig1``, ``fuzz``.
Output is CSV (default) or JSON with identical field names, written to
``--out`` or stdout. Exit codes: 0 success, 1 usage or parameter error,
2 I/O error, 3 certificate or bound violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from .bounds import (EnvelopeNorm, bound_constant, bound_curve, bound_general,
                     bound_general_closed, bound_linear, bound_sinusoidal)
from .dynamics import PerturbationSpec, evolve_pair
from .grover import build_grover, default_perturbation, robustness_sweep
from .linalg import (HermitianOperator, basis_state, embed_pauli_y,
                     random_hermitian, random_state)
from .svg import Series, line_chart

DEFAULT_SEED = 20251016
FIG1_GAMMA = 0.15
FUZZ_TOL = 1e-6

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_VIOLATION = 0, 1, 2, 3

EVOLVE_FIELDS = ["t", "dev_actual", "bound_linear", "bound_gronwall", "bound_closed_form"]
BOUND_FIELDS = ["t", "bound_linear", "bound_gronwall", "bound_quadrature", "bound_closed_form"]
FIG1_FIELDS = ["t", "bound_timedep", "bound_timeindep"]
REPORT_FIELDS = ["gamma", "envelope", "T", "dev_bound", "psucc_sim", "psucc_lower", "certified",
                 "ideal_residual"]
FUZZ_FIELDS = ["index", "dim", "envelope", "gamma", "omega", "h_norm", "T", "steps",
               "dev_actual", "bound_linear", "bound_gronwall", "bound_closed_form",
               "margin_linear", "margin_gronwall", "margin_closed_form", "passed"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- formatting

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "" if math.isnan(v) else repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return None if math.isnan(v) else v
    return v


def render(rows, fields, fmt="csv") -> str:
    """Serialise ``rows`` (dicts) as CSV with a fixed header, or as a JSON array."""
    if fmt == "json":
        data = [{f: _json_value(r.get(f)) for f in fields} for r in rows]
        return json.dumps(data, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(r.get(f)) for f in fields])
    return buf.getvalue()


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)


def _finite(name, v):
    if v is not None and not math.isfinite(v):
        raise UsageError(f"--{name} must be finite")
    return v


# ---------------------------------------------------------------- subcommands

def _closed_form(gamma, omega, t):
    if omega is None:
        return bound_constant(gamma, t)
    if t == 0:
        return 0.0
    try:
        return bound_sinusoidal(gamma, omega, t)
    except ValueError:
        return None


def cmd_evolve(args):
    gamma = args.gamma if args.gamma is not None else 0.2
    T = args.time if args.time is not None else math.pi
    if gamma < 0 or T <= 0:
        raise UsageError("need --gamma >= 0 and --time > 0")
    if args.n is not None:
        model = build_grover(args.model, args.n, args.target)
        H, psi0 = model.hamiltonian, model.initial
        K = default_perturbation(model, gamma, args.omega, args.error_qubit)
    else:
        dim = 2 ** args.qubits
        H = HermitianOperator(np.zeros((dim, dim)))
        psi0 = basis_state(dim, 0)
        gen = gamma * embed_pauli_y(args.qubits, args.error_qubit)
        K = (PerturbationSpec.constant(gen) if args.omega is None
             else PerturbationSpec.sinusoidal(gen, args.omega))
    trace = evolve_pair(H, K, psi0, T, args.steps)
    env = K.envelope_norm()
    curve = bound_curve(env, trace.times)
    rows = [{"t": t, "dev_actual": d, "bound_linear": lin, "bound_gronwall": gr,
             "bound_closed_form": _closed_form(env.gamma, args.omega, t)}
            for t, d, lin, gr in zip(trace.times, trace.deviation, curve.linear, curve.gronwall)]
    _emit(render(rows, EVOLVE_FIELDS, args.format), args.out)
    violated = any(r["dev_actual"] > r["bound_linear"] + FUZZ_TOL for r in rows)
    if args.svg:
        _write_svg(args.svg, [
            Series(trace.times, trace.deviation, "actual deviation", "black"),
            Series(trace.times, curve.linear, "linear bound", "green", "6,3"),
            Series(trace.times, curve.gronwall, "Gronwall bound", "red"),
        ], f"Deviation, {env.label()}", "t", "||psi - phi||")
    return EXIT_VIOLATION if (violated and args.strict) else EXIT_OK


def cmd_bound(args):
    gamma = args.gamma if args.gamma is not None else FIG1_GAMMA
    T = args.time if args.time is not None else 10.0
    steps = args.steps if args.steps is not None else 100
    if gamma < 0 or T <= 0 or steps < 1:
        raise UsageError("need --gamma >= 0, --time > 0 and --steps >= 1")
    env = (EnvelopeNorm.constant(gamma) if args.omega is None
           else EnvelopeNorm.sinusoidal(gamma, args.omega))
    t = np.linspace(0.0, T, steps + 1)
    curve = bound_curve(env, t)
    rows = [{"t": x, "bound_linear": lin, "bound_gronwall": gr,
             "bound_quadrature": bound_general(env, x),
             "bound_closed_form": _closed_form(gamma, args.omega, x)}
            for x, lin, gr in zip(t, curve.linear, curve.gronwall)]
    _emit(render(rows, BOUND_FIELDS, args.format), args.out)
    if args.svg:
        _write_svg(args.svg, [
            Series(t, curve.linear, "linear", "green", "6,3"),
            Series(t, curve.gronwall, "Gronwall", "red"),
        ], env.label(), "t", "deviation bound")
    return EXIT_OK


def fig1_panel(gamma, omega, t_max):
    """Rows ``t, bound_timedep, bound_timeindep`` at ``t = k pi / omega``, k >= 1."""
    step = math.pi / omega
    rows = []
    for k in range(1, int(math.floor(t_max / step + 1e-9)) + 1):
        t = k * step
        rows.append({"t": t, "bound_timedep": bound_sinusoidal(gamma, omega, t),
                     "bound_timeindep": bound_constant(gamma, t)})
    return rows


def cmd_fig1(args):
    gamma = args.gamma if args.gamma is not None else FIG1_GAMMA
    t_max = args.time if args.time is not None else 20.0
    if gamma < 0 or t_max <= 0:
        raise UsageError("need --gamma >= 0 and --time > 0")
    outdir = args.out or "."
    os.makedirs(outdir, exist_ok=True)
    ext = "json" if args.format == "json" else "csv"
    for panel, omega in (("a", math.pi), ("b", math.pi / 4)):
        rows = fig1_panel(gamma, omega, t_max)
        _emit(render(rows, FIG1_FIELDS, args.format), os.path.join(outdir, f"fig1{panel}.{ext}"))
        if args.svg:
            os.makedirs(args.svg, exist_ok=True)
            t = [r["t"] for r in rows]
            _write_svg(os.path.join(args.svg, f"fig1{panel}.svg"), [
                Series(t, [r["bound_timedep"] for r in rows], "time-dependent", "red"),
                Series(t, [r["bound_timeindep"] for r in rows], "time-independent", "blue", "2,4"),
            ], f"gamma = {gamma:g}, omega = {omega:.6g}", "T", "deviation bound")
    return EXIT_OK


def _report_rows(report):
    return [{"gamma": r.gamma, "envelope": r.envelope, "T": r.T, "dev_bound": r.dev_bound,
             "psucc_sim": r.psucc_sim, "psucc_lower": r.psucc_lower, "certified": r.certified,
             "ideal_residual": r.ideal_residual} for r in report.rows]


def _grover_common(args, gammas, T):
    n = args.n if args.n is not None else 1024
    model = build_grover(args.model, n, args.target)
    envelopes = ["constant"] if args.omega is None else ["constant", ("sinusoidal", args.omega)]
    if args.time is not None:
        T = args.time
    elif T == "exact":
        T = model.T_exact
    report = robustness_sweep(model, gammas, envelopes, steps=args.steps, T=T,
                              error_qubit=args.error_qubit, epsilon=args.epsilon)
    _emit(render(_report_rows(report), REPORT_FIELDS, args.format), args.out)
    if args.strict and not report.all_certified:
        print("certificate violated", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_grover(args):
    if args.gamma is None and args.epsilon is not None:
        # tolerance row alone, at the runtime the tolerance law assumes
        return _grover_common(args, [], None)
    return _grover_common(args, args.gamma if args.gamma is not None else [0.0], "exact")


def cmd_sweep(args):
    gammas = args.gamma if args.gamma is not None else [0.001, 0.005, 0.01, 0.02]
    return _grover_common(args, gammas, None)


def fuzz_instances(count, seed):
    """Random dominance-chain instances, deterministic in ``seed``.

    Each instance draws dim in {2, 4, 8, 16}, a Hermitian H with
    ``||H|| <= 2``, a generator with ``||K|| <= 0.5``, a unit start state and
    ``T <= 5``. Half the instances use a constant envelope; the rest use
    ``sin(omega t)`` with ``T`` a whole number of half-periods.
    """
    if count < 1:
        raise UsageError("--count must be >= 1")
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(count):
        dim = int(rng.choice([2, 4, 8, 16]))
        h_norm = float(rng.uniform(0.0, 2.0))
        gamma = float(rng.uniform(0.01, 0.5))
        H = random_hermitian(dim, h_norm, rng)
        G = random_hermitian(dim, gamma, rng)
        psi0 = random_state(dim, rng)
        T = float(rng.uniform(0.2, 5.0))
        if i % 2 == 0:
            K, omega = PerturbationSpec.constant(G), None
            env = EnvelopeNorm.constant(gamma)
        else:
            omega = int(rng.integers(1, 5)) * math.pi / T
            K = PerturbationSpec.sinusoidal(G, omega)
            env = EnvelopeNorm.sinusoidal(gamma, omega)
        trace = evolve_pair(H, K, psi0, T)
        lin_t = env.integral(trace.times)
        dev = float(trace.deviation[-1])
        lin = bound_linear(env, T)
        gron = bound_general_closed(env, T)
        closed = bound_constant(gamma, T) if omega is None else bound_sinusoidal(gamma, omega, T)
        m_lin = float(np.min(lin_t - trace.deviation))
        m_gron = gron - lin
        m_closed = closed - gron
        rows.append({
            "index": i, "dim": dim, "envelope": "constant" if omega is None else "sinusoidal",
            "gamma": gamma, "omega": omega, "h_norm": h_norm, "T": T,
            "steps": trace.times.size - 1, "dev_actual": dev, "bound_linear": lin,
            "bound_gronwall": gron, "bound_closed_form": closed,
            "margin_linear": m_lin, "margin_gronwall": m_gron, "margin_closed_form": m_closed,
            "passed": min(m_lin, m_gron, m_closed) >= -FUZZ_TOL,
        })
    return rows


def cmd_fuzz(args):
    count = args.count if args.count is not None else 200
    rows = fuzz_instances(count, args.seed)
    _emit(render(rows, FUZZ_FIELDS, args.format), args.out)
    passed = sum(r["passed"] for r in rows)
    print(f"fuzz: {passed}/{len(rows)} pass (seed {args.seed})", file=sys.stderr)
    return EXIT_OK if passed == len(rows) else EXIT_VIOLATION


def _write_svg(path, series, title, xlabel, ylabel):
    _emit(line_chart(series, title, xlabel, ylabel), path)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gronbound", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="output file (directory for fig1); stdout if omitted")
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--strict", action="store_true",
                        help="exit 3 on any certificate or bound violation")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    def model_opts(sp):
        sp.add_argument("--n", type=int, help="database size N")
        sp.add_argument("--model", choices=["effective", "full"], default="effective")
        sp.add_argument("--target", type=int, default=0, help="marked item w")
        sp.add_argument("--error-qubit", type=int, default=1, dest="error_qubit")

    sp = sub.add_parser("evolve", help="paired evolution with per-step deviation and bounds")
    common(sp)
    model_opts(sp)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--omega", type=float)
    sp.add_argument("--time", type=float)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--qubits", type=int, default=1, help="qubits for the H = 0 scenario")
    sp.add_argument("--svg")
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("bound", help="analytic bounds on a time grid")
    common(sp)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--omega", type=float)
    sp.add_argument("--time", type=float)
    sp.add_argument("--steps", type=int, help="grid intervals")
    sp.add_argument("--svg")
    sp.set_defaults(func=cmd_bound)

    for name, func, hlp in (("grover", cmd_grover, "single perturbed Grover run"),
                            ("sweep", cmd_sweep, "Grover robustness sweep over gamma")):
        sp = sub.add_parser(name, help=hlp)
        common(sp)
        model_opts(sp)
        sp.add_argument("--gamma", type=float, nargs="+")
        sp.add_argument("--omega", type=float, help="also run sin(omega t) envelopes")
        sp.add_argument("--time", type=float)
        sp.add_argument("--steps", type=int)
        sp.add_argument("--epsilon", type=float)
        sp.set_defaults(func=func)

    sp = sub.add_parser("fig1", help="time-dependent vs constant bound curves")
    common(sp)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--time", type=float, help="largest time on the grid")
    sp.add_argument("--svg", help="directory for fig1a.svg / fig1b.svg")
    sp.set_defaults(func=cmd_fig1)

    sp = sub.add_parser("fuzz", help="randomised dominance-chain check")
    common(sp)
    sp.add_argument("--count", type=int)
    sp.set_defaults(func=cmd_fuzz)
    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        for name in ("gamma", "omega", "time", "epsilon"):
            v = getattr(args, name, None)
            for x in (v if isinstance(v, list) else [v]):
                _finite(name, x)
        return args.func(args)
    except UsageError as e:
        print(f"gronbound: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"gronbound: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"gronbound: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: ``phi`` (coefficient tables), ``dk`` (chain polynomials),
``verify`` (built-in check suites), ``trajectory`` (RK4 on the reduced
system), ``eval`` (solution values on a grid), ``burgers`` (Cole-Hopf
image values).  Exit codes: 0 success, 1 domain error (pole, grading
violation, bad parameters), 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .ansatz import AnsatzSpec, general_phi_table, jet_phi_remainders, jet_phi_table, phi_table_for
from .dynsys import (
    DynState,
    IntegrationError,
    MobiusParam,
    PoleError,
    RationalH,
    rational_top,
    reduced_field,
    reduced_initial_state,
    rk4_integrate,
)
from .grpoly import GradedPoly, VariableFamily
from .operators import derivative_chain
from .solution import assemble_psi, closed_form_0ansatz, cole_hopf
from .verify import run_suite


def fmt(value) -> str:
    """Format one CSV cell; floats carry 17 significant digits."""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def emit_csv(rows, header) -> str:
    """Rows of cells to CSV text with LF line endings."""
    width = len(header)
    lines = [",".join(header)]
    for row in rows:
        if len(row) != width:
            raise ValueError("ragged CSV row")
        lines.append(",".join(fmt(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _parse_poles(text: str) -> tuple[MobiusParam, ...]:
    return tuple(MobiusParam.parse(part) for part in text.split(","))


def _basis_names(position: int) -> str:
    return "y1" if position == 0 else f"Z{position + 1}"


def _print_table(labels, polys, as_json: bool, names=None) -> None:
    for label, poly in zip(labels, polys):
        if as_json:
            print(poly.to_json())
        else:
            print(f"{label} = {poly.to_text(names=names)}")


def cmd_phi(args) -> int:
    if args.table == "y":
        table = jet_phi_table(args.delta, args.qmax)
        _print_table([f"Y_{k}" for k in range(args.qmax + 1)], table.entries, args.json)
        return 0
    if args.table == "q":
        tails = jet_phi_remainders(args.delta, max(args.qmax, 2))
        labels = [f"Q_{k}" for k in range(2, args.qmax + 1)]
        _print_table(labels, tails[2 : args.qmax + 1], args.json, names=_basis_names)
        return 0
    spec = AnsatzSpec.chain(args.n, args.delta)
    if args.mode == "general" and args.n >= 1:
        x = VariableFamily.X
        ring = args.n + 1
        ps = [GradedPoly.variable(x, ring, q) for q in range(2, args.n + 3)]
        spec = AnsatzSpec.general(args.n, args.delta, ps)
    table = phi_table_for(spec, args.qmax)
    _print_table([f"Phi_{k}" for k in range(args.qmax + 1)], table.entries, args.json)
    return 0


def cmd_dk(args) -> int:
    chain = derivative_chain(args.k)
    _print_table([f"D_{i + 1}" for i in range(args.k)], chain, args.json)
    return 0


def cmd_verify(args) -> int:
    results = run_suite(args.suite)
    failed = 0
    for name, ok in results:
        print(f"{'ok  ' if ok else 'FAIL'} {name}")
        failed += 0 if ok else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if not failed else 1


def cmd_trajectory(args) -> int:
    poles = _parse_poles(args.poles)
    if len(poles) != args.n + 1:
        raise ValueError(f"n = {args.n} needs {args.n + 1} pole parameters")
    if args.n < 1:
        raise ValueError("the reduced system needs n >= 1")
    h = RationalH(args.n, poles)
    t0 = Fraction(args.t0)
    state = reduced_initial_state(h, args.n, t0)
    start = DynState(float(t0), tuple(float(v) for v in state))
    field = reduced_field(args.n, rational_top(args.n))
    trajectory = rk4_integrate(field, start, float(Fraction(args.t1)), args.step)
    header = ["t"] + [f"x{i + 1}" for i in range(args.n + 1)]
    rows = [(s.t, *s.x) for s in trajectory]
    sys.stdout.write(emit_csv(rows, header))
    return 0


def _grid_times(args) -> list[Fraction]:
    if args.t is not None:
        return [Fraction(part) for part in args.t.split(",")]
    if args.t1 is None or args.tnum is None:
        raise ValueError("give either --t or all of --t0/--t1/--tnum")
    t0, t1 = Fraction(args.t0), Fraction(args.t1)
    if args.tnum == 1:
        return [t0]
    span = (t1 - t0) / (args.tnum - 1)
    return [t0 + i * span for i in range(args.tnum)]


def _family_setup(args):
    if args.poles is not None:
        poles = _parse_poles(args.poles)
    else:
        poles = (MobiusParam(Fraction(args.alpha), Fraction(args.beta)),)
        if args.family == "1ansatz":
            poles = poles + (MobiusParam(Fraction(args.alpha2), Fraction(args.beta2)),)
    expected = {"0ansatz": 1, "1ansatz": 2}.get(args.family, len(poles))
    if len(poles) != expected:
        raise ValueError(f"{args.family} needs {expected} pole parameter(s)")
    n = len(poles) - 1
    return RationalH(n, poles), n


def _z_points(args) -> list[float]:
    if args.znum == 1:
        return [args.z0]
    span = (args.z1 - args.z0) / (args.znum - 1)
    return [args.z0 + i * span for i in range(args.znum)]


def _family_spec(n: int, delta: int) -> AnsatzSpec:
    if n < 2:
        return AnsatzSpec.chain(n, delta)
    return AnsatzSpec.reduced(n, delta, rational_top(n))


def cmd_eval(args) -> int:
    h, n = _family_setup(args)
    r0 = float(args.r0)
    if args.family == "0ansatz":
        psi = closed_form_0ansatz(args.delta, h.poles[0], r0)
        fn = psi
    else:
        sol = assemble_psi(_family_spec(n, args.delta), h, r0, args.kmax)
        fn = sol.psi
    rows = []
    for t in _grid_times(args):
        for z in _z_points(args):
            rows.append((float(t), z, fn(z, float(t))))
    sys.stdout.write(emit_csv(rows, ["t", "z", "value"]))
    return 0


def cmd_burgers(args) -> int:
    h, n = _family_setup(args)
    image = cole_hopf(assemble_psi(_family_spec(n, args.delta), h, 0.0, args.kmax))
    mu = float(args.mu)
    rows = []
    for t in _grid_times(args):
        for z in _z_points(args):
            if z == 0 and args.delta:
                raise ValueError("odd-parity Burgers image has a pole at z = 0")
            # the mu-Burgers image of the same family: 2 mu * v(z, 2 mu t)
            value = 2 * mu * image.v(z, 2 * mu * float(t))
            rows.append((float(t), z, value))
    sys.stdout.write(emit_csv(rows, ["t", "z", "value"]))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heatansatz", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phi", help="print coefficient tables")
    p.add_argument("--table", choices=["phi", "y", "q"], default="phi")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--delta", type=int, choices=[0, 1], default=0)
    p.add_argument("--qmax", type=int, default=6)
    p.add_argument("--mode", choices=["general", "reduced"], default="reduced")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_phi)

    p = sub.add_parser("dk", help="print the chain polynomials")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_dk)

    p = sub.add_parser("verify", help="run the built-in check suites")
    p.add_argument("--suite", choices=["operators", "ansatz", "dynsys", "solution", "all"], default="all")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("trajectory", help="integrate the reduced system of the pole family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--poles", required=True, help="comma-separated alpha:beta pairs")
    p.add_argument("--t0", required=True)
    p.add_argument("--t1", required=True)
    p.add_argument("--step", type=float, default=1e-3)
    p.set_defaults(fn=cmd_trajectory)

    for name, fn in (("eval", cmd_eval), ("burgers", cmd_burgers)):
        p = sub.add_parser(name, help=f"emit {'solution' if name == 'eval' else 'Burgers image'} values on a grid")
        p.add_argument("--family", choices=["0ansatz", "1ansatz", "nansatz"], default="0ansatz")
        p.add_argument("--delta", type=int, choices=[0, 1], default=0)
        p.add_argument("--alpha", default="1")
        p.add_argument("--beta", default="0")
        p.add_argument("--alpha2", default="1")
        p.add_argument("--beta2", default="1")
        p.add_argument("--poles", default=None, help="comma-separated alpha:beta pairs (overrides --alpha/--beta)")
        p.add_argument("--r0", default="0")
        p.add_argument("--kmax", type=int, default=10)
        p.add_argument("--z0", type=float, default=-1.0)
        p.add_argument("--z1", type=float, default=1.0)
        p.add_argument("--znum", type=int, default=21)
        p.add_argument("--t", default=None, help="comma-separated sample times")
        p.add_argument("--t0", default="1")
        p.add_argument("--t1", default=None)
        p.add_argument("--tnum", type=int, default=None)
        if name == "burgers":
            p.add_argument("--mu", default="0.5")
        p.set_defaults(fn=fn)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (PoleError, IntegrationError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

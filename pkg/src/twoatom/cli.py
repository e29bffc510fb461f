"""Command-line interface: evolution, classification, figure data and verification.

State descriptors use a small textual grammar, one constructor per prefix::

    product:psi=<c0>,<c1>,phi=<c0>,<c1>   separable pure state
    maxent:a=<r>,t1=<r>,t2=<r>            maximally entangled family
    werner:p=<r>,anchor=<a|s|plus|minus>  Werner state
    bell:<p1>,<p2>,<p3>,<p4>              Bell-diagonal mixture
    xstate:<r22>,<r33>,<r23>              real X-state
    phi:<angle>                           pure cos(phi)|01> + sin(phi)|10>
    matrix:<16 complex entries>           explicit row-major matrix

Complex entries use Python literal syntax (e.g. ``0.5-0.5j``); angles are in
radians.  All emitted numbers carry 17 significant digits so golden files
round-trip exactly.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import closed_form, qstate
from .closed_form import as_x_init, asymptotic_state, classify_asymptotic, x_state_concurrence
from .dynamics import (
    IntegratorConfig,
    evolve_many,
    evolve_numeric,
    verify_unital,
    write_trajectory_csv,
)
from .entanglement import concurrence, concurrence_sqrt_form, fidelity_singlet
from .errors import OutOfRange, ParseError, ValidationError
from .qstate import (
    DensityMatrix,
    Qubit,
    SystemParams,
    density_to_pairs,
    make_density,
    random_density,
    to_collective,
)

_TRACE_AGREEMENT_TOL = 1e-8


@dataclass(frozen=True)
class RunSpec:
    """Parsed command invocation for the evolve subcommand."""

    command: str
    state_spec: str
    params: SystemParams
    cfg: IntegratorConfig
    output_path: str
    format: str = "csv"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _split_tokens(body: str, offset: int):
    tokens = []
    pos = offset
    for tok in body.split(","):
        tokens.append((tok, pos))
        pos += len(tok) + 1
    return tokens


def _parse_complex(tok: str, pos: int) -> complex:
    try:
        return complex(tok)
    except ValueError:
        raise ParseError(f"invalid complex number {tok!r}", pos) from None


def _parse_float(tok: str, pos: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"invalid number {tok!r}", pos) from None


def _strip_key(tok: str, pos: int, key: str) -> tuple[str, int]:
    prefix = key + "="
    if not tok.startswith(prefix):
        raise ParseError(f"expected '{key}=<value>', got {tok!r}", pos)
    return tok[len(prefix):], pos + len(prefix)


def parse_state_spec(text: str) -> DensityMatrix:
    """Parse a state descriptor into a validated density matrix."""
    head, sep, body = text.partition(":")
    if not sep:
        raise ParseError("missing ':' after constructor name", len(text))
    offset = len(head) + 1
    toks = _split_tokens(body, offset)

    if head == "product":
        if len(toks) != 4:
            raise ParseError("product needs psi=<c0>,<c1>,phi=<c0>,<c1>", offset)
        p0, p0pos = _strip_key(*toks[0], key="psi")
        f0, f0pos = _strip_key(*toks[2], key="phi")
        psi = Qubit(c0=_parse_complex(p0, p0pos), c1=_parse_complex(*toks[1]))
        phi = Qubit(c0=_parse_complex(f0, f0pos), c1=_parse_complex(*toks[3]))
        return qstate.product_state(psi, phi)
    if head == "maxent":
        if len(toks) != 3:
            raise ParseError("maxent needs a=<r>,t1=<r>,t2=<r>", offset)
        a, apos = _strip_key(*toks[0], key="a")
        t1, t1pos = _strip_key(*toks[1], key="t1")
        t2, t2pos = _strip_key(*toks[2], key="t2")
        return qstate.max_entangled(
            _parse_float(a, apos), _parse_float(t1, t1pos), _parse_float(t2, t2pos)
        )
    if head == "werner":
        if len(toks) != 2:
            raise ParseError("werner needs p=<r>,anchor=<a|s|plus|minus>", offset)
        p, ppos = _strip_key(*toks[0], key="p")
        anchor, _ = _strip_key(*toks[1], key="anchor")
        return qstate.werner_state(_parse_float(p, ppos), anchor)
    if head == "bell":
        if len(toks) != 4:
            raise ParseError("bell needs four probabilities", offset)
        return qstate.bell_diagonal(*(_parse_float(*t) for t in toks))
    if head == "xstate":
        if len(toks) != 3:
            raise ParseError("xstate needs r22,r33,r23", offset)
        return qstate.x_initial(*(_parse_float(*t) for t in toks))
    if head == "phi":
        if len(toks) != 1:
            raise ParseError("phi takes a single angle", offset)
        return qstate.pure_phi(_parse_float(*toks[0]))
    if head == "matrix":
        if len(toks) != 16:
            raise ParseError(f"matrix needs 16 complex entries, got {len(toks)}", offset)
        entries = [_parse_complex(*t) for t in toks]
        return make_density(np.array(entries, dtype=complex).reshape(4, 4))
    raise ParseError(f"unknown constructor {head!r}", 0)


def format_matrix_spec(rho: DensityMatrix) -> str:
    """Render a state in ``matrix:`` form; reparsing reproduces it exactly."""
    return "matrix:" + ",".join(_fmt_complex(z) for z in rho.matrix.reshape(16))


def _write_trajectory_json(traj, fp):
    obj = {
        "params": {
            "omega0": traj.params.omega0,
            "omega": traj.params.omega,
            "gamma0": traj.params.gamma0,
            "gamma": traj.params.gamma,
        },
        "samples": [
            {
                "t": s.t,
                "concurrence": s.concurrence,
                "fidelity": s.fidelity,
                "purity": s.purity,
                "rho": density_to_pairs(s.rho),
            }
            for s in traj.samples
        ],
    }
    json.dump(obj, fp)
    fp.write("\n")


def cmd_evolve(spec: RunSpec) -> int:
    """Integrate one trajectory, write it out, and summarize the final state."""
    rho0 = parse_state_spec(spec.state_spec)
    traj = evolve_numeric(rho0, spec.params, spec.cfg)
    with open(spec.output_path, "w") as fp:
        if spec.format == "json":
            _write_trajectory_json(traj, fp)
        else:
            write_trajectory_csv(traj, fp)
    final = traj.final
    summary = {
        "F": final.fidelity,
        "concurrence": final.concurrence,
        "purity": final.purity,
        "class": classify_asymptotic(final.fidelity).kind,
    }
    print(json.dumps(summary))
    return 0


def cmd_classify(state_spec: str) -> int:
    """Print the asymptotic classification of a state as a JSON object."""
    rho = parse_state_spec(state_spec)
    fid = fidelity_singlet(rho)
    cls = classify_asymptotic(fid)
    obj = {
        "F": fid,
        "class": cls.kind,
        "p": cls.p,
        "asymptotic_concurrence": cls.concurrence,
        "rho_infinity": density_to_pairs(asymptotic_state(fid)),
    }
    print(json.dumps(obj))
    return 0


def cmd_surface(grid_a: int, grid_theta: int, out: str) -> int:
    """Tabulate the fidelity surface of the maximally entangled family.

    Writes (a, theta, F, in_region_E, on_quarter_curve) over the full
    [0,1] x [0,2*pi] grid; membership is decided by the fidelity itself so
    the degenerate corner a = 1 poses no problem.
    """
    if grid_a < 2 or grid_theta < 2:
        raise OutOfRange("grid sizes must be at least 2")
    a_vals = np.linspace(0.0, 1.0, grid_a)
    th_vals = np.linspace(0.0, 2.0 * np.pi, grid_theta)
    with open(out, "w") as fp:
        fp.write("a,theta,F,in_region_E,on_quarter_curve\n")
        for a in a_vals:
            for th in th_vals:
                fid = closed_form.fidelity_max_entangled(a, th)
                in_e = fid > 0.5
                on_curve = abs(fid - 0.25) <= 1e-12
                fp.write(
                    f"{_fmt(a)},{_fmt(th)},{_fmt(fid)},"
                    f"{str(in_e).lower()},{str(on_curve).lower()}\n"
                )
    return 0


def cmd_trace(state_spec: str, omegas, t_end: float, out: str, dt: float = 0.001) -> int:
    """Concurrence vs time for an X-state, closed form next to the integrator.

    One CSV row per (omega, t); the two concurrence columns must agree to
    1e-8, otherwise the command reports the discrepancy and fails.
    """
    rho0 = parse_state_spec(state_spec)
    init = as_x_init(rho0)
    n_steps = max(1, int(round(t_end / dt)))
    cfg = IntegratorConfig(dt=dt, t_end=t_end, sample_every=max(1, n_steps // 2000))
    worst = 0.0
    with open(out, "w") as fp:
        fp.write("omega,t,concurrence_closed,concurrence_numeric\n")
        for omega in omegas:
            params = SystemParams(omega0=0.0, omega=omega, gamma0=1.0, gamma=1.0)
            traj = evolve_numeric(rho0, params, cfg)
            times = traj.times()
            c_num = traj.concurrences()
            c_closed = x_state_concurrence(init, omega, times)
            worst = max(worst, float(np.abs(c_num - c_closed).max()))
            for t, cc, cn in zip(times, c_closed, c_num):
                fp.write(f"{_fmt(omega)},{_fmt(t)},{_fmt(cc)},{_fmt(cn)}\n")
    if worst > _TRACE_AGREEMENT_TOL:
        print(
            f"closed-form and numeric concurrence disagree by {worst:.3e}",
            file=sys.stderr,
        )
        return 1
    return 0


def _random_params(rng) -> SystemParams:
    g0 = rng.uniform(0.5, 2.0)
    return SystemParams(
        omega0=rng.uniform(0.0, 3.0),
        omega=rng.uniform(-3.0, 3.0),
        gamma0=g0,
        gamma=rng.uniform(0.0, g0),
    )


def cmd_verify(seed: int, n_cases: int, perturb: bool = False) -> int:
    """Run the cross-check suites and report per-suite maximum residuals.

    Exits 0 only if every suite is within tolerance.  ``perturb`` injects an
    artificial error into the concurrence comparison so the harness itself
    can be tested.
    """
    if n_cases < 1:
        raise OutOfRange("n_cases must be positive")
    rng = np.random.default_rng(seed)
    suites = []

    residual = max(verify_unital(_random_params(rng)) for _ in range(n_cases))
    suites.append(("unitality", residual, 1e-14))

    residual = 0.0
    for _ in range(n_cases):
        rho = random_density(rng)
        residual = max(residual, abs(concurrence(rho) - concurrence_sqrt_form(rho)))
    if perturb:
        residual += 2e-9
    suites.append(("concurrence_formulas", residual, 1e-9))

    n_states = min(n_cases, 50)
    rhos = [random_density(rng) for _ in range(n_states)]
    inits = [to_collective(r) for r in rhos]
    params = SystemParams(omega0=0.0, omega=1.0, gamma0=1.0, gamma=1.0)
    cfg = IntegratorConfig(dt=0.002, t_end=5.0, sample_every=50)
    times, mats = evolve_many(np.stack([r.matrix for r in rhos]), params, cfg)
    ket_s = qstate.KET_S
    ket_a = qstate.KET_A
    pops_num = {
        "aa": np.einsum("i,snij,j->sn", ket_a.conj(), mats, ket_a).real,
        "ss": np.einsum("i,snij,j->sn", ket_s.conj(), mats, ket_s).real,
        "ee": mats[:, :, 0, 0].real,
        "gg": mats[:, :, 3, 3].real,
    }
    residual = 0.0
    for n, init in enumerate(inits):
        closed = closed_form.populations_closed(init, times)
        residual = max(
            residual,
            float(np.abs(pops_num["aa"][:, n] - closed.aa).max()),
            float(np.abs(pops_num["ss"][:, n] - closed.ss).max()),
            float(np.abs(pops_num["ee"][:, n] - closed.ee).max()),
            float(np.abs(pops_num["gg"][:, n] - closed.gg).max()),
        )
    suites.append(("closed_form_vs_numeric", residual, 1e-8))

    fids0 = np.array([fidelity_singlet(r) for r in rhos])
    fids_t = 0.5 * (mats[:, :, 1, 1] + mats[:, :, 2, 2]).real - mats[:, :, 1, 2].real
    residual = float(np.abs(fids_t - fids0[None, :]).max())
    suites.append(("fidelity_conservation", residual, 1e-9))

    cfg_long = IntegratorConfig(dt=0.002, t_end=20.0, sample_every=10000)
    _, mats_long = evolve_many(np.stack([r.matrix for r in rhos]), params, cfg_long)
    residual = 0.0
    for n, f0 in enumerate(fids0):
        target = asymptotic_state(f0).matrix
        residual = max(residual, float(np.abs(mats_long[-1, n] - target).max()))
    suites.append(("asymptotic_convergence", residual, 1e-6))

    failed = None
    for name, res, tol in suites:
        ok = res <= tol
        print(f"{name}: max residual {res:.3e} (tol {tol:.0e}): {'PASS' if ok else 'FAIL'}")
        if not ok and failed is None:
            failed = name
    if failed is not None:
        print(f"verification failed: {failed}", file=sys.stderr)
        return 1
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twoatom",
        description="Dissipative dynamics of two atoms in a maximally noisy environment",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("evolve", help="integrate a trajectory and write it to CSV/JSON")
    pe.add_argument("--state", required=True, help="initial-state descriptor")
    pe.add_argument("--gamma", type=float, default=1.0, help="collective damping (units of gamma0)")
    pe.add_argument("--omega", type=float, default=0.0, help="dipole-dipole coupling (units of gamma0)")
    pe.add_argument("--omega0", type=float, default=0.0, help="transition frequency (units of gamma0)")
    pe.add_argument("--dt", type=float, default=0.001, help="integration step (units of 1/gamma0)")
    pe.add_argument("--t-end", type=float, default=20.0, help="final time (units of 1/gamma0)")
    pe.add_argument("--out", required=True, help="output file path")
    pe.add_argument("--format", choices=("csv", "json"), default="csv")

    pc = sub.add_parser("classify", help="print the asymptotic classification as JSON")
    pc.add_argument("--state", required=True, help="initial-state descriptor")

    ps = sub.add_parser("surface", help="tabulate the fidelity surface of the maximally entangled family")
    ps.add_argument("--grid-a", type=int, default=201, help="number of a grid points on [0, 1]")
    ps.add_argument("--grid-theta", type=int, default=201, help="number of theta grid points on [0, 2*pi]")
    ps.add_argument("--out", required=True, help="output CSV path")

    pt = sub.add_parser("trace", help="closed-form vs numeric concurrence for an X-state")
    pt.add_argument("--state", required=True, help="initial X-state descriptor")
    pt.add_argument("--omega", default="1", help="comma-separated dipole couplings, e.g. 1,3")
    pt.add_argument("--dt", type=float, default=0.001)
    pt.add_argument("--t-end", type=float, default=4.0)
    pt.add_argument("--out", required=True, help="output CSV path")

    pv = sub.add_parser("verify", help="run the oracle cross-check suites")
    pv.add_argument("--seed", type=int, default=42)
    pv.add_argument("--n-cases", type=int, default=100)
    pv.add_argument("--perturb", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "evolve":
            spec = RunSpec(
                command="evolve",
                state_spec=args.state,
                params=SystemParams(
                    omega0=args.omega0, omega=args.omega, gamma0=1.0, gamma=args.gamma
                ),
                cfg=IntegratorConfig(
                    dt=args.dt,
                    t_end=args.t_end,
                    sample_every=max(1, int(round(args.t_end / args.dt)) // 2000),
                ),
                output_path=args.out,
                format=args.format,
            )
            return cmd_evolve(spec)
        if args.command == "classify":
            return cmd_classify(args.state)
        if args.command == "surface":
            return cmd_surface(args.grid_a, args.grid_theta, args.out)
        if args.command == "trace":
            omegas = [
                _parse_float(tok, pos) for tok, pos in _split_tokens(args.omega, 0)
            ]
            return cmd_trace(args.state, omegas, args.t_end, args.out, dt=args.dt)
        if args.command == "verify":
            return cmd_verify(args.seed, args.n_cases, perturb=args.perturb)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Five subcommand groups: `special eval` (torus function values), `state
build`/`state reference` (wavefunction files), `ed ground` (exact
diagonalization), `scan radius`/`scan phase` (variational scans), and
`check suite`/`check limits` (consistency checks). Every file-writing run
drops a manifest next to its outputs echoing the fully resolved
configuration; feeding that manifest back through --config reproduces the
outputs bit-identically (explicit flags still win). Exit codes: 0 success,
1 bad input, 2 numerical failure, 3 a consistency check failed.
"""
import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__, blocks, hamiltonians, refstates
from .blocks import BlockSpec
from .errors import ConsistencyError, DomainError, Error, InputError
from .experiments import (identity_suite, j1j2_family, limit_convergence,
                          qbq_family, scan_radius, sweep_csv,
                          sweep_phase_diagram)
from .hamiltonians import HamiltonianSpec
from .hilbert import apply_site_unitary, total_spin_quantum
from .special import ModularParam, prime_form, theta_nu, weierstrass_nu

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_CHECK = 0, 1, 2, 3

SPECIAL_FNS = ("theta1", "theta2", "theta3", "theta4",
               "prime", "wp2", "wp3", "wp4")
REFERENCES = ("mg+", "mg-", "aklt", "aklt-circ", "dimer0", "dimer1",
              "s1dimer+", "s1dimer-", "hs", "hs-exc")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports bad flags as exit-1 usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _fmt(x):
    return f"{float(x):.17g}"


def _dump_json(obj):
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _parse_floats(text, what, n=None):
    try:
        vals = [float(p) for p in str(text).split(",")]
    except ValueError:
        raise InputError(f"{what} must be comma-separated numbers, "
                         f"got {text!r}")
    if n is not None and len(vals) != n:
        raise InputError(f"{what} needs {n} comma-separated values, "
                         f"got {text!r}")
    return vals


def _parse_sizes(text):
    try:
        return tuple(int(p) for p in str(text).split(","))
    except ValueError:
        raise InputError(f"--N must be comma-separated integers, got {text!r}")


def _parse_z(text):
    parts = _parse_floats(text, "--z")
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise InputError(f"--z takes re or re,im, got {text!r}")


def _parse_label(text):
    return int(text) if text in ("2", "3", "4") else text


def _parse_grid(text):
    if text is None:
        return None
    lo, hi, count = _parse_floats(text, "--grid", n=3)
    if count != int(count) or int(count) < 2:
        raise InputError(f"--grid count must be an integer >= 2, got {count}")
    return np.geomspace(lo, hi, int(count))


def _ham_spec(args):
    kw = {}
    if args.J1 is not None:
        kw["J1"] = args.J1
    if args.J2 is not None:
        kw["J2"] = args.J2
    if args.theta is not None:
        kw["theta"] = args.theta
    return HamiltonianSpec(args.ham, args.N, **kw)


def _write_text(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def _write_manifest(args, dests, outputs, t0, anchor=None):
    """One manifest per run: resolved config, artifact version, wall time."""
    cfg = {}
    for key in dests:
        if key == "config":
            continue
        val = getattr(args, key, None)
        cfg[key] = val
    doc = {"artifact": "idmps", "version": __version__,
           "command": [args.group, args.verb],
           "resolved_config": cfg,
           "outputs": [os.path.basename(p) for p in outputs],
           "wall_time_s": time.perf_counter() - t0}
    if anchor is None:
        path = os.path.join(args.out_dir, "manifest.json")
    else:
        path = anchor + ".manifest.json"
    _write_text(path, _dump_json(doc))
    return path


def _load_config(path):
    with open(path) as fh:
        doc = json.load(fh)
    return doc.get("resolved_config", doc)


# ---------------------------------------------------------------- subcommands

def _cmd_special_eval(args, dests):
    t0 = time.perf_counter()
    z = _parse_z(args.z)
    tau = ModularParam(args.R).tau
    fn = args.fn
    if fn.startswith("theta"):
        val = theta_nu(int(fn[-1]), z, tau)
    elif fn == "prime":
        val = prime_form(z, tau)
    else:
        val = weierstrass_nu(int(fn[-1]), z, tau)
    doc = {"fn": fn, "z": [z.real, z.imag], "R": args.R,
           "value_re": val.real, "value_im": val.imag}
    text = _dump_json(doc)
    sys.stdout.write(text)
    if args.out:
        _write_text(args.out, text)
        _write_manifest(args, dests, [args.out], t0, anchor=args.out)
    return EXIT_OK


def _state_doc(state, meta):
    doc = dict(meta)
    doc.update(json.loads(state.to_json()))
    return doc


def _physical_total_spin(state, circular):
    if circular:
        state = apply_site_unitary(state, refstates.U_CIRC_TO_SPIN)
    s, sz = total_spin_quantum(state)
    return [s, sz]


def _write_state_files(out, state, meta, args, dests, t0):
    with open(out, "wb") as fh:
        fh.write(state.to_bytes())
    _write_text(out + ".json", _dump_json(_state_doc(state, meta)))
    _write_manifest(args, dests, [out, out + ".json"], t0, anchor=out)


def _cmd_state_build(args, dests):
    t0 = time.perf_counter()
    spec = BlockSpec(args.model, _parse_label(args.label), args.N)
    if args.cylinder:
        state, scale, pairing, radius = (blocks.build_cylinder_state(spec),
                                         None, None, None)
    else:
        if args.R is None:
            raise InputError("state build needs --R (or --cylinder)")
        rec = blocks.build_record(spec, args.R)
        state, scale, pairing, radius = (rec.state, rec.log_scale,
                                         rec.pairing, args.R)
    mom = blocks.momentum_eigenvalue(spec)
    meta = {"spec": {"model": spec.model, "label": spec.label,
                     "name": spec.name, "N": spec.N},
            "R": radius, "cylinder": bool(args.cylinder),
            "basis": "circular" if spec.d == 3 else "spin",
            "momentum_eigenvalue": [mom.real, mom.imag],
            "total_spin": _physical_total_spin(state, spec.d == 3),
            "global_log_scale": scale, "pairing": pairing}
    _write_state_files(args.out, state, meta, args, dests, t0)
    return EXIT_OK


def _reference_state(which, N):
    if which in ("mg+", "mg-"):
        return refstates.mg_combination(N, +1 if which == "mg+" else -1)
    if which == "aklt":
        return refstates.aklt_state(N)
    if which == "aklt-circ":
        return refstates.aklt_state(N, basis="circular")
    if which in ("dimer0", "dimer1"):
        return refstates.dimer_state(N, offset=int(which[-1]))
    if which in ("s1dimer+", "s1dimer-"):
        return refstates.spin1_dimer_combinations(
            N, +1 if which == "s1dimer+" else -1)
    label = 0 if which == "hs" else "half"
    return blocks.build_cylinder_state(BlockSpec("su2_1", label, N))


def _cmd_state_reference(args, dests):
    t0 = time.perf_counter()
    state = _reference_state(args.which, args.N)
    circ = args.which in ("aklt-circ", "s1dimer+", "s1dimer-")
    meta = {"which": args.which, "N": args.N,
            "basis": "circular" if circ else "spin",
            "total_spin": _physical_total_spin(state, circ)}
    _write_state_files(args.out, state, meta, args, dests, t0)
    return EXIT_OK


def _cmd_ed_ground(args, dests):
    t0 = time.perf_counter()
    spec = _ham_spec(args)
    levels = hamiltonians.ground_subspace(spec, k=args.k)
    doc = {"ham": spec.kind, "N": spec.N, "d": spec.d, "k": args.k,
           "J1": spec.J1, "J2": spec.J2, "theta": spec.theta,
           "energies": [e for e, _ in levels]}
    _write_text(args.out, _dump_json(doc))
    outputs = [args.out]
    if args.vectors:
        stem = os.path.splitext(args.out)[0]
        for i, (energy, vec) in enumerate(levels):
            path = f"{stem}_vec{i}.state"
            with open(path, "wb") as fh:
                fh.write(vec.to_bytes())
            meta = {"ham": spec.kind, "N": spec.N, "index": i,
                    "energy": energy}
            _write_text(path + ".json", _dump_json(_state_doc(vec, meta)))
            outputs += [path, path + ".json"]
    _write_manifest(args, dests, outputs, t0, anchor=args.out)
    return EXIT_OK


def _cmd_scan_radius(args, dests):
    t0 = time.perf_counter()
    spec = BlockSpec(args.model, _parse_label(args.label), args.N)
    res = scan_radius(spec, _ham_spec(args), R_grid=_parse_grid(args.grid),
                      objective=args.objective, workers=args.threads)
    lines = ["R,energy,fidelity_per_site"]
    lines += [",".join(_fmt(x) for x in row) for row in res.rows]
    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, "radius_scan.csv")
    json_path = os.path.join(args.out_dir, "radius_scan.json")
    _write_text(csv_path, "\n".join(lines) + "\n")
    _write_text(json_path, _dump_json(res.to_dict()))
    _write_manifest(args, dests, [csv_path, json_path], t0)
    return EXIT_OK


def _cmd_scan_phase(args, dests):
    t0 = time.perf_counter()
    spec = BlockSpec(args.model, _parse_label(args.label), args.N)
    values = _parse_floats(args.param_grid, "--param-grid")
    if args.ham == "j1j2":
        family = j1j2_family(args.N, values)
    elif args.ham == "qbq":
        family = qbq_family(args.N, values)
    else:
        raise InputError(f"scan phase supports j1j2 or qbq, got {args.ham!r}")
    points = sweep_phase_diagram(spec, family, R_grid=_parse_grid(args.grid),
                                 objective=args.objective,
                                 workers=args.threads)
    doc = [{"param": p["param"], "error": p["error"],
            "scan": None if p["scan"] is None else p["scan"].to_dict()}
           for p in points]
    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, "phase_sweep.csv")
    json_path = os.path.join(args.out_dir, "phase_sweep.json")
    _write_text(csv_path, sweep_csv(points))
    _write_text(json_path, _dump_json(doc))
    _write_manifest(args, dests, [csv_path, json_path], t0)
    return EXIT_OK


def _cmd_check_suite(args, dests):
    t0 = time.perf_counter()
    report = identity_suite(sizes=_parse_sizes(args.N),
                            radii=tuple(_parse_floats(args.radii, "--radii")))
    text = _dump_json(report)
    sys.stdout.write(text)
    if args.out_dir is not None:
        os.makedirs(args.out_dir, exist_ok=True)
        path = os.path.join(args.out_dir, "suite.json")
        _write_text(path, text)
        _write_manifest(args, dests, [path], t0)
    return EXIT_OK if report["pass"] else EXIT_CHECK


def _limit_target(args):
    if args.target == "mg":
        return [refstates.mg_combination(args.N, +1),
                refstates.mg_combination(args.N, -1)]
    if args.target == "s1dimer":
        return [refstates.spin1_dimer_combinations(args.N, +1),
                refstates.spin1_dimer_combinations(args.N, -1)]
    if args.target == "aklt-circ":
        return refstates.aklt_state(args.N, basis="circular")
    _, ground = hamiltonians.ground_states(HamiltonianSpec("hs", args.N))
    return ground


def _cmd_check_limits(args, dests):
    t0 = time.perf_counter()
    spec = BlockSpec(args.model, _parse_label(args.label), args.N)
    radii = _parse_floats(args.radii, "--radii")
    try:
        rows = limit_convergence(spec, _limit_target(args), radii)
        failure = None
    except ConsistencyError as exc:
        rows, failure = [], str(exc)
    doc = {"model": spec.model, "label": spec.name, "N": spec.N,
           "target": args.target, "rows": rows,
           "pass": failure is None, "failure": failure}
    text = _dump_json(doc)
    sys.stdout.write(text)
    if args.out_dir is not None:
        os.makedirs(args.out_dir, exist_ok=True)
        json_path = os.path.join(args.out_dir, "limits.json")
        csv_path = os.path.join(args.out_dir, "limits.csv")
        lines = ["R,infidelity_per_site"]
        lines += [f"{_fmt(r)},{_fmt(e)}" for r, e in rows]
        _write_text(csv_path, "\n".join(lines) + "\n")
        _write_text(json_path, text)
        _write_manifest(args, dests, [csv_path, json_path], t0)
    return EXIT_OK if failure is None else EXIT_CHECK


# --------------------------------------------------------------------- parser

def _build_parser():
    parser = _Parser(prog="idmps", description=__doc__.splitlines()[0])
    parser.set_defaults(group=None, verb=None)
    groups = parser.add_subparsers(dest="group", parser_class=_Parser)
    registry = {}

    def verb(group_sub, group, name):
        p = group_sub.add_parser(name)
        p.set_defaults(group=group, verb=name)
        dests, required = [], []
        registry[(group, name)] = (p, dests, required)

        def opt(*flags, **okw):
            # required flags are checked after the config merge, so a
            # manifest replay can supply them without repeating each flag
            if okw.pop("required", False):
                required.append(flags[0].lstrip("-").replace("-", "_"))
            action = p.add_argument(*flags, **okw)
            dests.append(action.dest)

        opt("--config", help="JSON config or manifest; explicit flags win")
        return opt

    special = groups.add_parser("special").add_subparsers(
        dest="verb", parser_class=_Parser)
    opt = verb(special, "special", "eval")
    opt("--fn", required=True, choices=SPECIAL_FNS)
    opt("--z", required=True, help="re,im")
    opt("--R", type=float, required=True)
    opt("--out")

    state = groups.add_parser("state").add_subparsers(
        dest="verb", parser_class=_Parser)
    opt = verb(state, "state", "build")
    opt("--model", required=True, choices=("su2_1", "su2_2"))
    opt("--label", required=True)
    opt("--N", type=int, required=True)
    opt("--R", type=float)
    opt("--cylinder", action="store_true")
    opt("--out", required=True)
    opt = verb(state, "state", "reference")
    opt("--which", required=True, choices=REFERENCES)
    opt("--N", type=int, required=True)
    opt("--out", required=True)

    ed = groups.add_parser("ed").add_subparsers(
        dest="verb", parser_class=_Parser)
    opt = verb(ed, "ed", "ground")
    opt("--ham", required=True, choices=("hs", "j1j2", "qbq", "parent"))
    opt("--N", type=int, required=True)
    opt("--J1", type=float)
    opt("--J2", type=float)
    opt("--theta", type=float)
    opt("--k", type=int, default=1)
    opt("--vectors", action="store_true")
    opt("--out", required=True)

    scan = groups.add_parser("scan").add_subparsers(
        dest="verb", parser_class=_Parser)
    for name in ("radius", "phase"):
        opt = verb(scan, "scan", name)
        opt("--model", required=True, choices=("su2_1", "su2_2"))
        opt("--label", required=True)
        opt("--N", type=int, required=True)
        opt("--ham", required=True, choices=("hs", "j1j2", "qbq", "parent"))
        opt("--J1", type=float)
        opt("--J2", type=float)
        opt("--theta", type=float)
        opt("--grid", help="lo,hi,count geometric radius grid")
        opt("--objective", default="energy", choices=("energy", "fidelity"))
        opt("--threads", type=int)
        opt("--out-dir", default=".")
        if name == "phase":
            opt("--param-grid", required=True,
                help="comma-separated J2 or theta values")

    check = groups.add_parser("check").add_subparsers(
        dest="verb", parser_class=_Parser)
    opt = verb(check, "check", "suite")
    opt("--N", default="4,6", help="comma-separated sizes")
    opt("--radii", default="0.1,1,10")
    opt("--out-dir")
    opt = verb(check, "check", "limits")
    opt("--model", required=True, choices=("su2_1", "su2_2"))
    opt("--label", required=True)
    opt("--N", type=int, required=True)
    opt("--target", required=True,
        choices=("mg", "s1dimer", "aklt-circ", "hs"))
    opt("--radii", required=True, help="monotone comma-separated schedule")
    opt("--out-dir")

    return parser, registry


_HANDLERS = {("special", "eval"): _cmd_special_eval,
             ("state", "build"): _cmd_state_build,
             ("state", "reference"): _cmd_state_reference,
             ("ed", "ground"): _cmd_ed_ground,
             ("scan", "radius"): _cmd_scan_radius,
             ("scan", "phase"): _cmd_scan_phase,
             ("check", "suite"): _cmd_check_suite,
             ("check", "limits"): _cmd_check_limits}


def run(argv=None):
    """Parse argv and execute; returns the process exit code."""
    if argv is None:
        argv = sys.argv[1:]
    parser, registry = _build_parser()
    try:
        args = parser.parse_args(argv)
        key = (args.group, args.verb)
        if key not in _HANDLERS:
            parser.print_usage(sys.stderr)
            return EXIT_INPUT
        sub, dests, required = registry[key]
        if args.config:
            cfg = _load_config(args.config)
            sub.set_defaults(**{k: v for k, v in cfg.items() if k in dests})
            args = parser.parse_args(argv)
        missing = [k for k in required if getattr(args, k) is None]
        if missing:
            raise InputError("missing required flags: "
                             + ", ".join("--" + k.replace("_", "-")
                                         for k in missing))
        return _HANDLERS[key](args, dests)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:
        return int(exc.code or 0)
    except (InputError, DomainError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Error as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front end.

Every subcommand other than ``check`` assembles a one-off scenario and runs it
through the same machinery as ``run <file>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .checks import BATTERY_SEARCH, check_suite
from .errors import QmutualError
from .scenario import RunReport, parse_scenario, run, scenario_from_dict


def _json_arg(text: str):
    """JSON literal, or ``@path`` to read it from a file."""
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise argparse.ArgumentTypeError(f"cannot read {text[1:]}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text  # channel shorthand such as "depolarizing:0.5"


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmutual", description="Quantum mutual entropy and channel capacities.")
    p.add_argument("--seed", type=int, default=None, help="search seed (overrides the scenario seed)")
    p.add_argument("--units", choices=("nats", "bits"), default="nats", help="units for displayed values")
    p.add_argument("--tol-profile", choices=("default", "strict"), default="default")
    p.add_argument("--report", type=Path, default=None, help="write the machine report (JSON lines) here")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help, *fields):
        sp = sub.add_parser(name, help=help)
        for f in fields:
            sp.add_argument(f"--{f}", type=_json_arg, required=f != "ensemble" or name == "holevo")
        return sp

    add("entropy", "von Neumann entropy of a state", "state")
    add("relent", "Umegaki relative entropy S(state, reference)", "state", "reference")
    add("mutual", "mutual entropy I(state; channel)", "state", "channel").add_argument(
        "--verify", action="store_true", help="cross-check against the compound-state form")
    add("pseudo", "pseudo-mutual entropy", "state", "channel")
    cp = add("capacity", "C(S0) and, with --pseudo, Cp(S0)", "channel")
    cp.add_argument("--states", choices=("full", "diagonal"), default="full")
    cp.add_argument("--pseudo", action="store_true")
    cq = add("cqc", "C-Q-C mutual information (with --ensemble) and capacity C(P0)", "coding", "channel", "decoding", "ensemble")
    cq.add_argument("--families", action="store_true", help="also compute Cc(P0) and Ccd(P0)")
    add("holevo", "Holevo bound of a coded ensemble", "coding", "channel", "ensemble")
    ck = sub.add_parser("check", help="run the invariant battery")
    ck.add_argument("--dims", type=_int_list, default=[2, 3])
    ck.add_argument("--seeds", type=_int_list, default=list(range(1, 11)))
    rn = sub.add_parser("run", help="run a scenario file")
    rn.add_argument("file", type=Path)
    return p


def _scenario_for(args) -> dict:
    cmd = args.command
    sc: dict = {"id": cmd}
    for key in ("state", "reference", "channel", "coding", "decoding", "ensemble"):
        val = getattr(args, key, None)
        if val is not None:
            sc[key] = val
    if cmd == "entropy":
        comps = ["von_neumann"]
    elif cmd == "relent":
        comps = ["umegaki_relative"]
    elif cmd == "mutual":
        comps = [{"name": "mutual_entropy", "verify": args.verify}]
    elif cmd == "pseudo":
        comps = ["pseudo_mutual_entropy"]
    elif cmd == "capacity":
        opts = {"states": {"kind": args.states}}
        comps = [{"name": "quantum_capacity", **opts}]
        if args.pseudo:
            comps.append({"name": "pseudo_capacity", **opts})
    elif cmd == "cqc":
        comps = (["cqc_mutual"] if args.ensemble is not None else []) + ["cqc_capacity"]
        if args.families:
            comps += ["coding_capacity", "coding_decoding_capacity"]
    else:
        comps = ["holevo_bound"]
    sc["computations"] = comps
    return sc


def _emit(report: RunReport, args) -> int:
    sys.stdout.write(report.table(args.units))
    if args.report is not None:
        args.report.write_text(report.machine())
    return report.exit_code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    strict = args.tol_profile == "strict"
    try:
        if args.command == "check":
            return _emit(check_suite(args.dims, args.seeds, BATTERY_SEARCH), args)
        if args.command == "run":
            sc = parse_scenario(args.file.read_bytes())
        else:
            sc = scenario_from_dict(_scenario_for(args))
    except (QmutualError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return _emit(run(sc, seed=args.seed, strict=strict), args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

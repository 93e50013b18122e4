"""Command-line reports: ``qultimatum {classical,mw,ewl,tree,verify}``.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import qstate
from .classical_game import Bimatrix, GameParams, build_gamma1, mixed_family_bound, normal_representation
from .equilibrium import DEFAULT_P1_STEP, grid_deviation_search, pure_nash
from .ewl_scheme import EWLGame, EWLProfile, payoff_report, sample_subset1, sample_subset2
from .mw_scheme import MWGame, load_state, mw_matrix
from .sequential import OutcomeOperator, build_tree
from .verify import SuiteConfig, run_all

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _fmt(v) -> str:
    return f"({v[0]:.6f}, {v[1]:.6f})"


def format_bimatrix(bm: Bimatrix) -> str:
    width = 22
    lines = [" " * 6 + "".join(c.rjust(width) for c in bm.cols)]
    for i, r in enumerate(bm.rows):
        lines.append(r.ljust(6) + "".join(_fmt(bm.cells[i, j]).rjust(width) for j in range(len(bm.cols))))
    return "\n".join(lines)


def _params(args) -> GameParams:
    try:
        return GameParams(args.delta, args.money)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _base(args) -> dict:
    return {"delta": args.delta, "money": args.money, "seed": args.seed}


def _equilibrium_text(report) -> list[str]:
    lines = ["pure Nash equilibria:"]
    for ne in report.pure_ne:
        lines.append(f"  {ne[0]}, {ne[1]}  payoff {_fmt(report.payoffs[ne])}")
    lines.append(f"weakly dominant column: {report.dominant_column or 'none'}")
    sp = report.subgame_perfect
    lines.append(f"subgame-perfect imitation: {', '.join(sp) if sp else 'none'}")
    pb = report.pareto_best
    lines.append(f"pareto-best equilibrium: {', '.join(pb) if pb else 'none'}")
    return lines


def cmd_classical(args) -> tuple[int, str]:
    params = _params(args)
    bm = normal_representation(build_gamma1(params))
    rep = pure_nash(bm)
    bound = mixed_family_bound(params)
    if args.format == "json":
        out = _base(args) | {"bimatrix": bm.to_dict(), "equilibria": rep.to_dict(), "mixed_bound": bound}
        return EXIT_OK, json.dumps(out, indent=2)
    lines = [format_bimatrix(bm), *_equilibrium_text(rep), f"mixed family (c0 vs p d0e0 + (1-p) d0e1): p <= {bound:.6f}"]
    return EXIT_OK, "\n".join(lines)


def _state(args, default: str):
    try:
        return load_state(args.state or default, _params(args), args.delta_prime)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_mw(args) -> tuple[int, str]:
    params = _params(args)
    st = _state(args, "psi_in1")
    bm = mw_matrix(MWGame(params, st.amplitudes))
    rep = pure_nash(bm)
    n_distinct = len(bm.distinct_payoffs())
    if args.format == "json":
        out = _base(args) | {
            "state": st.name,
            "bimatrix": bm.to_dict(),
            "equilibria": rep.to_dict(),
            "distinct_outcomes": n_distinct,
        }
        return EXIT_OK, json.dumps(out, indent=2)
    lines = [f"initial state: {st.name}", format_bimatrix(bm), *_equilibrium_text(rep), f"distinct outcomes: {n_distinct}"]
    return EXIT_OK, "\n".join(lines)


def _profile(args) -> tuple[str, EWLProfile]:
    if args.profile and args.family:
        raise InputError("give either --profile or --family, not both")
    if args.family:
        rng = np.random.default_rng(args.seed)
        sampler = {"subset1": sample_subset1, "subset2": sample_subset2}[args.family]
        return args.family, sampler(rng)
    if args.profile:
        try:
            return args.profile, EWLProfile.from_dict(json.loads(Path(args.profile).read_text()))
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad profile file {args.profile!r}: {exc}") from exc
    return "example", EWLProfile(math.pi, math.pi / 4, math.pi, math.pi / 4, math.pi / 2, 0.0)


def cmd_ewl(args) -> tuple[int, str]:
    game = EWLGame(_params(args))
    source, prof = _profile(args)
    if args.grid_step <= 0:
        raise InputError("--grid-step must be positive")
    payoff = payoff_report(game, prof)
    dev = grid_deviation_search(game, prof, step=args.grid_step)
    if args.format == "json":
        out = _base(args) | {"source": source, "profile": prof.to_dict(), "payoff": payoff, "deviation": dev.to_dict()}
        return EXIT_OK, json.dumps(out, indent=2)
    lines = [
        f"profile ({source}): theta={[round(t, 6) for t in prof.to_dict()['theta']]} "
        f"beta={[round(b, 6) for b in prof.to_dict()['beta']]}",
        f"payoff: ({payoff['E1']:.6f}, {payoff['E2']:.6f})  fair weight {payoff['fair_weight']:.6f}, "
        f"unfair weight {payoff['unfair_weight']:.6f}",
        f"grid deviation (step {dev.step:.6f}, player-2 step {dev.p2_step:.6f}):",
        f"  player 1 max gain {dev.max_gain_p1:.6f} at {[round(v, 6) for v in dev.witness_p1]}",
        f"  player 2 max gain {dev.max_gain_p2:.6f} at {[round(v, 6) for v in dev.witness_p2]}",
        f"grid Nash equilibrium: {'yes' if dev.is_nash else 'no'}",
    ]
    return EXIT_OK, "\n".join(lines)


def cmd_tree(args) -> tuple[int, str]:
    params = _params(args)
    st = _state(args, "basis:000")
    tree = build_tree(qstate.to_density(st.amplitudes), OutcomeOperator.ultimatum(params))
    if args.format == "dot":
        return EXIT_OK, tree.to_dot().rstrip("\n")
    if args.format == "json":
        return EXIT_OK, json.dumps(_base(args) | {"state": st.name, "tree": tree.to_dict()}, indent=2)
    lines = [f"initial state: {st.name}"]
    for k1 in (0, 1):
        for iota in (0, 1):
            p = tree.chance[k1][iota]
            lines.append(f"c{k1} -> outcome {iota} with probability {p:.6f}")
            for k in (0, 1):
                leaf = tree.leaves.get((iota, k1, k))
                if leaf is not None:
                    lines.append(f"    {'de'[iota]}{k}: {_fmt(leaf)}")
    if tree.pruned:
        lines.append(f"pruned: {', '.join(tree.pruned)}")
    return EXIT_OK, "\n".join(lines)


def cmd_verify(args) -> tuple[int, str]:
    _params(args)
    if not (args.delta < args.delta_prime < 1):
        raise InputError("need delta < delta-prime < 1")
    cfg = SuiteConfig(args.delta, args.delta_prime, args.money, args.seed)
    results = run_all(cfg)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    if args.format == "json":
        out = _base(args) | {"delta_prime": args.delta_prime, "passed": code == EXIT_OK, "checks": [r.to_dict() for r in results]}
        return code, json.dumps(out, indent=2)
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed (seed {args.seed})")
    return code, "\n".join(lines)


COMMANDS = {"classical": cmd_classical, "mw": cmd_mw, "ewl": cmd_ewl, "tree": cmd_tree, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--delta", type=float, default=0.7, help="division factor, 1/2 < delta < 1")
    common.add_argument("--delta-prime", type=float, default=0.8, help="parameter of psi_in2, delta < delta' < 1")
    common.add_argument("--money", type=float, default=1.0, help="amount to divide")
    common.add_argument("--state", help="preset (psi_in1, psi_in2, plus_plus_plus, basis:xyz) or JSON file")
    common.add_argument("--profile", help="EWL profile JSON file {theta: [...], beta: [...]}")
    common.add_argument("--family", choices=["subset1", "subset2"], help="sample an EWL profile from a family")
    common.add_argument("--format", choices=["table", "json", "dot"], default="table")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--grid-step", type=float, default=DEFAULT_P1_STEP, help="player-1 grid spacing (radians)")

    parser = argparse.ArgumentParser(prog="qultimatum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.format == "dot" and args.command != "tree":
        print("error: --format dot is only available for 'tree'", file=sys.stderr)
        return EXIT_INPUT
    try:
        code, text = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

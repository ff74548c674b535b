"""Command-line surface: build, evaluate, transform, audit, optimize, export.

Every command is deterministic given its inputs; stochastic commands
require an explicit --seed.  Exit codes: 0 success, 1 validation failure
(with a message on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import ncpo as ncpo_mod
from . import rigidity as rg
from . import serialize as sz
from . import transform as tr
from .cooklevin import (
    brute_force_sat,
    clause_access,
    compile_cnf,
    witness_to_assignment,
)
from .games import sampled_value, value
from .optimize import SeesawConfig, classical_value, seesaw

__all__ = ["main", "run"]


class CliError(Exception):
    pass


def _read_json(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(
            f"malformed JSON in {path}: {exc.msg} at line {exc.lineno} column {exc.colno}"
        )


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _load_game(path: str):
    return sz.game_from_doc(_read_json(path))


def _load_strategy(spec: str, game, honest):
    if spec == "honest":
        if honest is None:
            raise CliError("no honest strategy is attached to this game")
        return honest
    return sz.strategy_from_doc(_read_json(spec), game)


def _cmd_game(args) -> int:
    doc = {"builtin": {"kind": args.builtin}}
    if args.n is not None:
        doc["builtin"]["n"] = args.n
    if args.l is not None:
        doc["builtin"]["l"] = args.l
    game, honest = sz.game_from_doc(doc)
    _write(sz.dumps(doc), args.out)
    if args.strategy_out:
        if honest is None:
            raise CliError(f"builtin {args.builtin!r} has no honest strategy")
        questions = list(game.questions)
        _write(sz.dumps(sz.strategy_to_doc(honest, questions)), args.strategy_out)
    return 0


def _cmd_eval(args) -> int:
    game, honest = _load_game(args.game)
    strategy = _load_strategy(args.strategy, game, honest)
    if args.sample is not None:
        if args.seed is None:
            raise CliError("--sample requires an explicit --seed")
        est, err = sampled_value(game, strategy, args.sample, args.seed)
        doc = {"estimate": est, "stderr": err, "samples": args.sample, "seed": args.seed}
    else:
        report = value(game, strategy)
        doc = sz.report_to_doc(report)
    _write(sz.dumps(doc), args.out)
    return 0


def _cmd_rigidity(args) -> int:
    if args.kind == "ms":
        from .builtins import magic_square

        game, honest = magic_square()
        strategy = _load_strategy(args.strategy, game, honest)
        report = rg.ms_residuals(strategy)
    elif args.kind == "two_of_n":
        from .builtins import two_of_n_ms

        game, honest = two_of_n_ms(args.n)
        strategy = _load_strategy(args.strategy, game, honest)
        report = rg.two_of_n_residuals(strategy, args.n)
    elif args.kind == "qs":
        from .builtins import question_sampling

        game, honest = question_sampling(args.n)
        strategy = _load_strategy(args.strategy, game, honest)
        report = rg.qs_residuals(strategy, args.n)
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown rigidity kind {args.kind}")
    _write(sz.dumps(sz.residuals_to_doc(report)), args.out)
    return 0


def _cmd_transform(args) -> int:
    base_doc = _read_json(args.base)
    doc = {"transform": args.transform, "params": {}, "base": base_doc}
    if args.transform in ("answer_reduce", "gapless_compress"):
        if args.T is None:
            raise CliError(f"{args.transform} requires --T")
        doc["params"]["T"] = args.T
    game, _ = sz.game_from_doc(doc)  # validates the transformation
    _write(sz.dumps(doc), args.out)
    if args.lift:
        base_game, base_honest = sz.game_from_doc(base_doc)
        strategy = _load_strategy(args.lift, base_game, base_honest)
        if args.transform == "oracularize":
            lifted = tr.lift_oracularize(base_game, strategy)
        elif args.transform == "introspect":
            lifted = tr.lift_introspection(base_game, strategy)
        else:
            raise CliError(
                "lifted strategies over proof-indexed question spaces are too"
                " large to serialize; --lift supports oracularize/introspect"
            )
        if not args.lift_out:
            raise CliError("--lift requires --lift-out")
        _write(
            sz.dumps(sz.strategy_to_doc(lifted, list(game.questions))),
            args.lift_out,
        )
    return 0


def _cmd_cooklevin(args) -> int:
    machine = sz.machine_from_doc(_read_json(args.machine))
    if args.action == "compile":
        cnf = compile_cnf(machine, args.T, args.R)
        _write(sz.cnf_to_dimacs(cnf), args.out)
        return 0
    if args.action == "clause":
        found = clause_access(machine, args.T, args.R, args.i, args.j, args.k)
        if found is None:
            _write("null\n", args.out)
        else:
            _write(
                "\n".join(" ".join(str(l) for l in c) for c in found) + "\n",
                args.out,
            )
        return 0
    if args.action == "witness":
        bits = [int(ch) for ch in args.w]
        assignment = witness_to_assignment(machine, args.T, bits)
        _write(sz.dumps(sz.assignment_to_doc(assignment)), args.out)
        return 0
    raise CliError(f"unknown cooklevin action {args.action}")  # pragma: no cover


def _cmd_seesaw(args) -> int:
    game, _ = _load_game(args.game)
    cfg = SeesawConfig(
        dim=args.dim, restarts=args.restarts, max_iters=args.iters, seed=args.seed
    )
    strategy, best, trace = seesaw(game, cfg)
    doc = sz.strategy_to_doc(strategy, list(game.questions))
    doc["value"] = best
    _write(sz.dumps(doc), args.out)
    if args.trace:
        lines = ["restart,iteration,value"]
        lines += [f"{r},{i},{format(v, '.17g')}" for r, i, v in trace]
        _write("\n".join(lines) + "\n", args.trace)
    return 0


def _cmd_classical(args) -> int:
    game, _ = _load_game(args.game)
    val, assignment = classical_value(game, cap=args.cap)
    doc = {
        "value": val,
        "assignment": {sz.label_key(x): sz.label_key(a) for x, a in assignment.items()},
    }
    _write(sz.dumps(doc), args.out)
    return 0


def _cmd_ncpo(args) -> int:
    game, _ = _load_game(args.game)
    _write(ncpo_mod.game_to_ncpo(game), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syncgames",
        description="workbench for synchronous nonlocal games",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("game", help="emit game documents")
    psub = p.add_subparsers(dest="action", required=True)
    show = psub.add_parser("show", help="emit a builtin game document")
    show.add_argument("--builtin", required=True, choices=sorted(sz.BUILTIN_GAMES))
    show.add_argument("--n", type=int)
    show.add_argument("--l", type=int)
    show.add_argument("--out")
    show.add_argument("--strategy-out")
    show.set_defaults(func=_cmd_game)

    p = sub.add_parser("eval", help="evaluate a strategy on a game")
    p.add_argument("--game", required=True)
    p.add_argument("--strategy", required=True, help="strategy JSON path or 'honest'")
    p.add_argument("--sample", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("rigidity", help="residual audit of a strategy")
    p.add_argument("--kind", required=True, choices=("ms", "two_of_n", "qs"))
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--strategy", default="honest")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_rigidity)

    p = sub.add_parser("transform", help="transform a game document")
    p.add_argument(
        "--transform",
        required=True,
        choices=("oracularize", "introspect", "answer_reduce", "gapless_compress"),
    )
    p.add_argument("--base", required=True)
    p.add_argument("--T", type=int)
    p.add_argument("--lift", help="base strategy JSON path or 'honest'")
    p.add_argument("--lift-out")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("cooklevin", help="tableau formula tooling")
    csub = p.add_subparsers(dest="action", required=True)
    comp = csub.add_parser("compile", help="emit the DIMACS formula")
    comp.add_argument("--machine", required=True)
    comp.add_argument("--T", type=int, required=True)
    comp.add_argument("--R", type=int, required=True)
    comp.add_argument("--out")
    comp.set_defaults(func=_cmd_cooklevin)
    cl = csub.add_parser("clause", help="clauses over a variable triple")
    cl.add_argument("--machine", required=True)
    cl.add_argument("--T", type=int, required=True)
    cl.add_argument("--R", type=int, required=True)
    cl.add_argument("--i", type=int, required=True)
    cl.add_argument("--j", type=int, required=True)
    cl.add_argument("--k", type=int, required=True)
    cl.add_argument("--out")
    cl.set_defaults(func=_cmd_cooklevin)
    wit = csub.add_parser("witness", help="assignment for an accepting witness")
    wit.add_argument("--machine", required=True)
    wit.add_argument("--T", type=int, required=True)
    wit.add_argument("--w", required=True, help="witness bits, e.g. 0110")
    wit.add_argument("--out")
    wit.set_defaults(func=_cmd_cooklevin)

    p = sub.add_parser("seesaw", help="variational lower bound")
    p.add_argument("--game", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trace", help="CSV iteration trace path")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_seesaw)

    p = sub.add_parser("classical", help="exact deterministic optimum")
    p.add_argument("--game", required=True)
    p.add_argument("--cap", type=int, default=10**8)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_classical)

    p = sub.add_parser("ncpo", help="emit the polynomial-optimization program")
    p.add_argument("--game", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_ncpo)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits with 2 on usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CliError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:  # console entry point
    sys.exit(run())

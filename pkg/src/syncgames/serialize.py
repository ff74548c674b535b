"""JSON wire formats and DIMACS export.

All floats are rendered with 17 significant digits so dump/load round
trips are lossless and repeated invocations are byte-identical.  Matrix
documents carry real and imaginary parts separately; labels serialize as
compact JSON with tuples as arrays, and dictionary-like keys use that
compact form as the key string.
"""

from __future__ import annotations

import json

import numpy as np

from .algebra import Measurement
from .builtins import (
    consistency_game,
    forbidden_pair_game,
    magic_square,
    question_sampling,
    trivial_game,
    two_of_n_ms,
)
from .cooklevin import CNF, Assignment, TuringMachine
from .games import EvaluationReport, Game, SynchronousStrategy, table_game
from .rigidity import ResidualReport

__all__ = [
    "dumps",
    "label_key",
    "matrix_to_doc",
    "matrix_from_doc",
    "measurement_to_doc",
    "measurement_from_doc",
    "strategy_to_doc",
    "strategy_from_doc",
    "game_from_doc",
    "report_to_doc",
    "residuals_to_doc",
    "assignment_to_doc",
    "cnf_to_dimacs",
    "machine_to_doc",
    "machine_from_doc",
]

BUILTIN_GAMES = {
    "magic_square": lambda doc: magic_square(),
    "two_of_n_ms": lambda doc: two_of_n_ms(int(doc["n"])),
    "question_sampling": lambda doc: question_sampling(int(doc["n"])),
    "trivial": lambda doc: trivial_game(int(doc.get("l", 2))),
    "consistency": lambda doc: consistency_game(int(doc.get("l", 2))),
    "forbidden_pair": lambda doc: forbidden_pair_game(int(doc.get("l", 2))),
}


def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError("cannot serialize non-finite numbers")
    return format(float(x), ".17g")


def dumps(doc, indent: int = 0) -> str:
    """Deterministic JSON text with 17-significant-digit floats."""

    def render(node) -> str:
        if isinstance(node, dict):
            items = [f"{json.dumps(str(k))}: {render(v)}" for k, v in node.items()]
            return "{" + ", ".join(items) + "}"
        if isinstance(node, (list, tuple)):
            return "[" + ", ".join(render(v) for v in node) + "]"
        if isinstance(node, bool):
            return "true" if node else "false"
        if isinstance(node, (int, np.integer)):
            return str(int(node))
        if isinstance(node, (float, np.floating)):
            return _fmt_float(float(node))
        if node is None:
            return "null"
        return json.dumps(str(node))

    return render(doc) + "\n"


def _canon(label):
    if isinstance(label, tuple):
        return [_canon(x) for x in label]
    return label


def _uncanon(doc):
    if isinstance(doc, list):
        return tuple(_uncanon(x) for x in doc)
    return doc


def label_key(label) -> str:
    """Canonical string key for a question or answer label."""
    return json.dumps(_canon(label), separators=(",", ":"))


def matrix_to_doc(op: np.ndarray) -> dict:
    op = np.asarray(op, dtype=complex)
    return {
        "dim": op.shape[0],
        "re": [[float(v) for v in row] for row in op.real],
        "im": [[float(v) for v in row] for row in op.imag],
    }


def matrix_from_doc(doc: dict) -> np.ndarray:
    d = int(doc["dim"])
    re = np.array(doc["re"], dtype=float)
    im = np.array(doc["im"], dtype=float)
    if re.shape != (d, d) or im.shape != (d, d):
        raise ValueError("matrix document shape mismatch")
    return re + 1j * im


def measurement_to_doc(m: Measurement) -> dict:
    return {
        "labels": [_canon(lab) for lab in m.labels],
        "kind": m.kind,
        "elements": [matrix_to_doc(e) for e in m.elements],
    }


def measurement_from_doc(doc: dict) -> Measurement:
    return Measurement(
        tuple(_uncanon(lab) for lab in doc["labels"]),
        [matrix_from_doc(e) for e in doc["elements"]],
        kind=doc["kind"],
    )


def strategy_to_doc(strategy: SynchronousStrategy, questions=None) -> dict:
    if questions is None:
        questions = strategy.question_labels()
    meas = {}
    for q in questions:
        m = strategy.measurement(q)
        meas[label_key(q)] = [matrix_to_doc(e) for e in m.elements]
    return {"dim": strategy.dim, "measurements": meas}


def strategy_from_doc(doc: dict, game: Game) -> SynchronousStrategy:
    """Rebind serialized measurements to the game's question labels."""
    table = {}
    raw = doc["measurements"]
    for x in game.questions:
        key = label_key(x)
        if key not in raw:
            raise ValueError(f"strategy document misses question {key}")
        table[x] = Measurement(
            game.answers(x),
            [matrix_from_doc(e) for e in raw[key]],
            kind="projective",
        )
    return SynchronousStrategy(int(doc["dim"]), table)


def game_from_doc(doc: dict):
    """Build (game, honest strategy or None) from a game document.

    Documents are {"builtin": {...}}, {"table": {...}}, or a transform
    descriptor {"transform": name, "params": {...}, "base": doc} applied
    recursively.
    """
    if "builtin" in doc:
        spec = doc["builtin"]
        kind = spec["kind"]
        if kind not in BUILTIN_GAMES:
            raise ValueError(f"unknown builtin game kind {kind!r}")
        return BUILTIN_GAMES[kind](spec)
    if "table" in doc:
        spec = doc["table"]
        questions = [_uncanon(q) for q in spec["questions"]]
        answers = {
            _uncanon(json.loads(k)): tuple(_uncanon(a) for a in v)
            for k, v in spec["answers"].items()
        }
        pairs = [tuple(_uncanon(q) for q in pair) for pair in spec["nontrivial_pairs"]]
        accept = {}
        for key, pairs_doc in spec["accept"].items():
            x, y = (_uncanon(part) for part in json.loads(key))
            accept[(x, y)] = [
                (_uncanon(a), _uncanon(b)) for a, b in pairs_doc
            ]
        return table_game(spec.get("name", "table"), questions, answers, pairs, accept), None
    if "transform" in doc:
        from . import transform as tr

        base, base_strategy = game_from_doc(doc["base"])
        params = doc.get("params", {})
        name = doc["transform"]
        if name == "oracularize":
            return tr.oracularize(base), None
        if name == "introspect":
            return tr.introspect(base), None
        if name == "answer_reduce":
            return tr.answer_reduce(base, int(params["T"])), None
        if name == "gapless_compress":
            return tr.gapless_compress(base, int(params["T"])), None
        raise ValueError(f"unknown transform {name!r}")
    raise ValueError("game document needs 'builtin', 'table' or 'transform'")


def report_to_doc(report: EvaluationReport) -> dict:
    per_pair = {
        label_key(x) + "|" + label_key(y): p
        for (x, y), p in report.per_pair.items()
    }
    return {
        "value": report.value,
        "trivial_mass": report.trivial_mass,
        "question_count": report.question_count,
        "per_pair": per_pair,
    }


def residuals_to_doc(report: ResidualReport) -> dict:
    return {
        "relations": dict(report.relations),
        "max_residual": report.max_residual,
        "value_deficit": report.value_deficit,
    }


def assignment_to_doc(assignment: Assignment) -> dict:
    return {"bits": list(assignment.bits)}


def cnf_to_dimacs(cnf: CNF) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    for clause in cnf.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def machine_to_doc(machine: TuringMachine) -> dict:
    return json.loads(machine.encode())


def machine_from_doc(doc) -> TuringMachine:
    return TuringMachine.decode(doc if isinstance(doc, str) else json.dumps(doc))

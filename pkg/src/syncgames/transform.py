"""Game transformations: oracularization, introspection, answer reduction,
and their composition into gapless compression, with honest-strategy lifts.

Oracularization sends one player a question pair and cross-checks against
a single-question player.  Introspection replaces an exponential question
set {0,1}^l by the Question Sampling game plus seven special questions
that force the players to sample their own questions honestly.  Answer
reduction replaces full answers by locally queried bits of a Cook-Levin
proof that the decider accepts; its question space is indexed lazily and
evaluated by sampling only.

Desk-scale Turing deciders: the proof layout fixes answer bits of the
first player at witness cells 1..T and of the second at T+1..2T, and the
tableau time budget equals T, so a single-tape machine can never reach
the second answer within its budget.  Synthesized deciders therefore
check the strongest prefix-readable predicate, the projection
exists-b D(x, y, a, b); the dropped cross-player comparisons are exactly
the ones the answer-reduced game re-imposes through its consistency rows.
"""

from __future__ import annotations

import itertools
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .algebra import Measurement, bitstrings
from .builtins import question_sampling
from .cooklevin import (
    TableauLayout,
    TuringMachine,
    always_accept_machine,
    clause_access,
    pad_states,
    prefix_predicate_machine,
    simulate,
    tableau_assignment,
)
from .games import Game, SynchronousStrategy, is_oracularizable, is_synchronous

__all__ = [
    "BudgetError",
    "IndexMaps",
    "TmDecider",
    "oracularize",
    "lift_oracularize",
    "introspect",
    "lift_introspection",
    "synthesize_tm_decider",
    "answer_reduce",
    "lift_answer_reduce",
    "gapless_compress",
    "lift_gapless_compress",
    "sample_nontrivial_pairs",
    "INTRO_SPECIALS",
]

EXACT_EVAL_BUDGET = 10_000_000


class BudgetError(ValueError):
    """Raised when exact evaluation of a transformed game is out of reach."""


# ---------------------------------------------------------------------------
# oracularization


def oracularize(game: Game) -> Game:
    """Question set X + X^2: oracle players answer both questions.

    Nontrivial pairs are equal questions and (oracle, matching isolated);
    an oracle player with a pair nontrivial for the base game must win it
    and agree with the isolated player on the shared question.
    """
    if not is_synchronous(game, max_questions=512):
        raise ValueError("oracularization requires a synchronous game")
    base = list(game.questions)
    questions = [("iso", x) for x in base] + [
        ("ora", x, y) for x in base for y in base
    ]

    def answers(q):
        if q[0] == "iso":
            return game.answers(q[1])
        return tuple(itertools.product(game.answers(q[1]), game.answers(q[2])))

    def check(qa, qb, a, b):
        """Oracle question qa against isolated qb, answers (a, b)."""
        x, y = qa[1], qa[2]
        z = qb[1]
        if not game.nontrivial(x, y) or z not in (x, y):
            return None
        ok = game.decide(x, y, a[0], a[1])
        if z == x:
            ok = ok and b == a[0]
        if z == y:
            ok = ok and b == a[1]
        return ok

    def decide(q, r, a, b):
        if q == r:
            return a == b
        if q[0] == "ora" and r[0] == "iso":
            res = check(q, r, a, b)
            return True if res is None else res
        if q[0] == "iso" and r[0] == "ora":
            res = check(r, q, b, a)
            return True if res is None else res
        return True

    def nontrivial(q, r):
        if q == r:
            return True
        if q[0] == "ora" and r[0] == "iso":
            return game.nontrivial(q[1], q[2]) and r[1] in (q[1], q[2])
        if q[0] == "iso" and r[0] == "ora":
            return game.nontrivial(r[1], r[2]) and q[1] in (r[1], r[2])
        return False

    def pairs():
        for q in questions:
            yield (q, q)
        for x, y in game.nontrivial_pairs():
            ora = ("ora", x, y)
            for z in dict.fromkeys((x, y)):
                yield (ora, ("iso", z))
                yield (("iso", z), ora)

    return Game(
        f"{game.name}.orac",
        questions,
        answers,
        decide,
        nontrivial,
        nontrivial_pairs=pairs,
    )


def _designated(game: Game, x, y):
    return game.answers(x)[0], game.answers(y)[0]


def lift_oracularize(game: Game, strategy: SynchronousStrategy) -> SynchronousStrategy:
    """Simultaneous-measurement lift: oracle pairs measure M^x then M^y.

    Requires an oracularizable strategy; on base-trivial pairs the oracle
    player deterministically reports a designated answer.
    """

    def build(q):
        if q[0] == "iso":
            return strategy.measurement(q[1])
        x, y = q[1], q[2]
        mx = strategy.measurement(x)
        my = strategy.measurement(y)
        labels = tuple(itertools.product(mx.labels, my.labels))
        if game.nontrivial(x, y):
            elements = [
                mx.element(a) @ my.element(b) for a, b in labels
            ]
        else:
            a0, b0 = _designated(game, x, y)
            eye = np.eye(strategy.dim, dtype=complex)
            zero = np.zeros((strategy.dim, strategy.dim), dtype=complex)
            elements = [eye if (a, b) == (a0, b0) else zero for a, b in labels]
        return Measurement(labels, elements, kind="projective")

    return SynchronousStrategy(strategy.dim, build)


# ---------------------------------------------------------------------------
# introspection

INTRO_I = "I"
_INTRO_IW = {"A": "I_A", "B": "I_B"}
_INTRO_IWS = {"A": "I_A.S_B", "B": "I_B.S_A"}
_INTRO_IWE = {"A": "I_A.E_B", "B": "I_B.E_A"}
_SW = {"A": "S_A", "B": "S_B"}
_EW = {"A": "E_A", "B": "E_B"}
_OTHER = {"A": "B", "B": "A"}
INTRO_SPECIALS = (
    INTRO_I,
    _INTRO_IW["A"],
    _INTRO_IW["B"],
    _INTRO_IWS["A"],
    _INTRO_IWE["A"],
    _INTRO_IWS["B"],
    _INTRO_IWE["B"],
)


def _intro_edges():
    """The nontrivial special-question adjacency (12 ordered patterns)."""
    edges = []
    for w in ("A", "B"):
        edges.append((INTRO_I, _INTRO_IW[w]))
        edges.append((_INTRO_IW[w], _INTRO_IWS[w]))
        edges.append((_INTRO_IW[w], _SW[w]))
        edges.append((_INTRO_IW[w], _INTRO_IWE[w]))
        edges.append((_INTRO_IWE[w], _EW[_OTHER[w]]))
        edges.append((_INTRO_IWS[w], _SW[_OTHER[w]]))
    return edges


def introspect(game: Game) -> Game:
    """Introspection game over the Question Sampling game QS_l.

    Requires the base question set to be exactly {0,1}^l for even l >= 2.
    Questions are those of QS_l plus seven specials; the introspect
    question I expects a full transcript (x, a, y, b) and is cross-checked
    so that honest players sample (x, y) uniformly.
    """
    base = list(game.questions)
    l = len(base[0]) if base and isinstance(base[0], tuple) else 0
    if sorted(base) != bitstrings(l) or l < 2 or l % 2:
        raise ValueError("introspection requires questions {0,1}^l, even l >= 2")
    if not is_synchronous(game, max_questions=512):
        raise ValueError("introspection requires a synchronous game")

    qs_game, _ = question_sampling(l)
    qs_questions = list(qs_game.questions)
    qs_set = set(qs_questions)
    questions = qs_questions + list(INTRO_SPECIALS)
    xs = bitstrings(l)

    ans_i = tuple(
        (x, a, y, b)
        for x in xs
        for a in game.answers(x)
        for y in xs
        for b in game.answers(y)
    )
    ans_iw = tuple((x, a) for x in xs for a in game.answers(x))
    ans_iwq = tuple((x, a, y) for x in xs for a in game.answers(x) for y in xs)

    def answers(q):
        if q in qs_set:
            return qs_game.answers(q)
        if q == INTRO_I:
            return ans_i
        if q in (_INTRO_IW["A"], _INTRO_IW["B"]):
            return ans_iw
        return ans_iwq

    edges = set(_intro_edges())

    def nontrivial(q, r):
        if q == r:
            return True
        if q in qs_set and r in qs_set:
            return qs_game.nontrivial(q, r)
        return (q, r) in edges or (r, q) in edges

    def row_check(q, r, a, b):
        """Winning condition for an ordered special edge (q, r), else None."""
        for w in ("A", "B"):
            if q == INTRO_I and r == _INTRO_IW[w]:
                xa, aa, xb, ab = a
                z, c = b
                if not game.nontrivial(xa, xb):
                    return True
                xw, aw = (xa, aa) if w == "A" else (xb, ab)
                return z == xw and c == aw and bool(game.decide(xa, xb, aa, ab))
            if q == _INTRO_IW[w] and r in (_INTRO_IWS[w], _INTRO_IWE[w]):
                x, aw = a
                z, c, _ = b
                return z == x and c == aw
            if q == _INTRO_IW[w] and r == _SW[w]:
                return b == a[0]
            if q in (_INTRO_IWS[w], _INTRO_IWE[w]) and r in (
                _SW[_OTHER[w]],
                _EW[_OTHER[w]],
            ):
                return b == a[2]
        return None

    def decide(q, r, a, b):
        if q == r:
            return a == b
        if q in qs_set and r in qs_set:
            return qs_game.decide(q, r, a, b)
        if (q, r) in edges:
            res = row_check(q, r, a, b)
            return True if res is None else res
        if (r, q) in edges:
            res = row_check(r, q, b, a)
            return True if res is None else res
        return True

    def accept_mask(q, r):
        if q in qs_set and r in qs_set:
            return qs_game.accept_mask(q, r)
        return None

    def pairs():
        yield from qs_game.nontrivial_pairs()
        for s in INTRO_SPECIALS:
            yield (s, s)
        for q, r in _intro_edges():
            yield (q, r)
            yield (r, q)

    return Game(
        f"{game.name}.intro",
        questions,
        answers,
        decide,
        nontrivial,
        accept_mask=accept_mask,
        nontrivial_pairs=pairs,
    )


def lift_introspection(
    game: Game, strategy: SynchronousStrategy, *, check_oracularizable: bool = True
) -> SynchronousStrategy:
    """Honest introspection lift over QS_l honest tensor the base strategy.

    QS questions act on the sampling register alone; I_W measures S^W to
    introspect x and then the base measurement for x; the transcript
    question I measures both sampling registers and, on base-nontrivial
    pairs, both base measurements (commuting by oracularizability).
    """
    base = list(game.questions)
    l = len(base[0])
    if check_oracularizable:
        ok, worst = is_oracularizable(game, strategy)
        if not ok:
            raise ValueError(
                f"strategy is not oracularizable (worst commutator {worst:.3e})"
            )
    _, qs_honest = question_sampling(l)
    dim_qs = 4**l
    dim = dim_qs * strategy.dim
    eye_s = np.eye(strategy.dim, dtype=complex)
    zero = np.zeros((dim, dim), dtype=complex)
    xs = bitstrings(l)
    sw = {w: qs_honest.measurement(_SW[w]) for w in ("A", "B")}
    ew = {w: qs_honest.measurement(_EW[w]) for w in ("A", "B")}

    def kron(a, b):
        return np.kron(a, b)

    def build(q):
        for w in ("A", "B"):
            if q == _INTRO_IW[w]:
                labels, elements = [], []
                for x in xs:
                    mx = strategy.measurement(x)
                    for a in mx.labels:
                        labels.append((x, a))
                        elements.append(kron(sw[w].element(x), mx.element(a)))
                return Measurement(tuple(labels), elements, kind="projective")
            if q in (_INTRO_IWS[w], _INTRO_IWE[w]):
                second = sw[_OTHER[w]] if q == _INTRO_IWS[w] else ew[_OTHER[w]]
                labels, elements = [], []
                for x in xs:
                    mx = strategy.measurement(x)
                    for a in mx.labels:
                        for y in xs:
                            labels.append((x, a, y))
                            elements.append(
                                kron(
                                    sw[w].element(x) @ second.element(y),
                                    mx.element(a),
                                )
                            )
                return Measurement(tuple(labels), elements, kind="projective")
        if q == INTRO_I:
            labels, elements = [], []
            for x in xs:
                mx = strategy.measurement(x)
                for a in mx.labels:
                    for y in xs:
                        my = strategy.measurement(y)
                        sample = kron(
                            sw["A"].element(x) @ sw["B"].element(y), eye_s
                        )
                        for b in my.labels:
                            labels.append((x, a, y, b))
                            if game.nontrivial(x, y):
                                elements.append(
                                    kron(
                                        sw["A"].element(x) @ sw["B"].element(y),
                                        mx.element(a) @ my.element(b),
                                    )
                                )
                            elif (a, b) == _designated(game, x, y):
                                elements.append(sample)
                            else:
                                elements.append(zero)
            return Measurement(tuple(labels), elements, kind="projective")
        # Question Sampling question: act on the sampling register alone
        return Measurement(
            qs_honest.measurement(q).labels,
            [kron(e, eye_s) for e in qs_honest.measurement(q).elements],
            kind="projective",
        )

    return SynchronousStrategy(dim, build, cache_size=64)


# ---------------------------------------------------------------------------
# answer reduction


@dataclass(frozen=True)
class IndexMaps:
    """Proof indexing: answer bit i of player one sits at witness index
    eta(i) = i, of player two at lambda(i) = T + i."""

    T: int

    def eta(self, i: int) -> int:
        if not 1 <= i <= self.T:
            raise ValueError(f"eta index {i} outside 1..{self.T}")
        return i

    def lam(self, i: int) -> int:
        if not 1 <= i <= self.T:
            raise ValueError(f"lambda index {i} outside 1..{self.T}")
        return self.T + i

    def eta_inv(self, v: int) -> int | None:
        return v if 1 <= v <= self.T else None

    def lam_inv(self, v: int) -> int | None:
        return v - self.T if self.T < v <= 2 * self.T else None


@dataclass
class TmDecider:
    """Uniform family of hardwired deciders D_{x,y} with one state count."""

    machine_for: object
    state_count: int


def synthesize_tm_decider(game: Game) -> TmDecider:
    """Prefix-readable deciders for every question pair of a tiny game.

    For a nontrivial ordered pair (x, y) the machine decides the
    projection exists-b D(x, y, a, b) of the winning predicate on the
    encoded bits of the first answer; trivial pairs get the always-accept
    machine.  All machines are padded to one common state count so the
    Cook-Levin variable count is pair-independent.
    """
    machines: dict = {}
    by_table: dict = {}
    for x, y in game.nontrivial_pairs():
        if x == y:
            continue  # diagonal consistency is enforced by the reduced game
        mask = game.accept_mask(x, y)
        exists_b = mask.any(axis=1)
        width = game.answer_bit_width(x)
        table = {}
        for bits in itertools.product((0, 1), repeat=width):
            table[bits] = False
        for idx, a in enumerate(game.answers(x)):
            table[tuple(game.answer_bits(x, a))] = bool(exists_b[idx])
        key = (width, tuple(sorted((k, v) for k, v in table.items())))
        if key not in by_table:
            by_table[key] = prefix_predicate_machine(table, width)
        machines[(x, y)] = by_table[key]
    accept = always_accept_machine()
    state_count = max(
        [len(accept.states)] + [len(m.states) for m in by_table.values()]
    )
    padded = {pair: pad_states(m, state_count) for pair, m in machines.items()}
    padded_accept = pad_states(accept, state_count)

    def machine_for(x, y) -> TuringMachine:
        return padded.get((x, y), padded_accept)

    return TmDecider(machine_for=machine_for, state_count=state_count)


class _ARContext:
    """Shared data for an answer-reduced game and its honest lift."""

    def __init__(self, game: Game, T: int, decider: TmDecider):
        self.game = game
        self.T = T
        self.decider = decider
        self.maps = IndexMaps(T)
        base = list(game.questions)
        self.base_questions = base
        self.n_base = len(base)
        rep = decider.machine_for(base[0], base[0])
        layout = TableauLayout(rep, T, 2 * T)
        self.L = layout.num_vars
        self._machines: dict = {}
        self._pi: OrderedDict = OrderedDict()

    def machine(self, x, y) -> TuringMachine:
        key = (x, y)
        if key not in self._machines:
            self._machines[key] = self.decider.machine_for(x, y)
        return self._machines[key]

    def padded_bits(self, x, a) -> tuple[int, ...]:
        bits = tuple(self.game.answer_bits(x, a))
        if len(bits) > self.T:
            raise ValueError("encoded answer longer than the padding length")
        return bits + (0,) * (self.T - len(bits))

    def witness(self, x, y, a, b) -> tuple[int, ...]:
        return self.padded_bits(x, a) + self.padded_bits(y, b)

    def proof_table(self, x, y) -> dict:
        """(a, b) -> (outcome, proof bit tuple) for the run on its witness."""
        key = (x, y)
        try:
            val = self._pi.pop(key)
            self._pi[key] = val
            return val
        except KeyError:
            pass
        mach = self.machine(x, y)
        table = {}
        if self.game.nontrivial(x, y):
            pairs = itertools.product(self.game.answers(x), self.game.answers(y))
        else:
            pairs = [_designated(self.game, x, y)]
        for a, b in pairs:
            outcome, asg = tableau_assignment(mach, self.T, self.witness(x, y, a, b))
            table[(a, b)] = (outcome, asg.bits)
        self._pi[key] = table
        if len(self._pi) > 512:
            self._pi.popitem(last=False)
        return table

    def clauses(self, x, y, j, k, l):
        return clause_access(self.machine(x, y), self.T, 2 * self.T, j, k, l)


class _ARQuestions:
    """Lazy indexed question space X^orac x ([L] + [L]^2 + [L]^3)."""

    def __init__(self, ctx: _ARContext):
        self.ctx = ctx
        n, L = ctx.n_base, ctx.L
        self.n_game = n + n * n
        self.n_proof = L + L * L + L**3
        self._len = self.n_game * self.n_proof

    def __len__(self):
        return self._len

    def __getitem__(self, idx):
        if not 0 <= idx < self._len:
            raise IndexError(idx)
        g_idx, p_idx = divmod(idx, self.n_proof)
        n, L = self.ctx.n_base, self.ctx.L
        base = self.ctx.base_questions
        if g_idx < n:
            g = ("iso", base[g_idx])
        else:
            k = g_idx - n
            g = ("ora", base[k // n], base[k % n])
        if p_idx < L:
            p = p_idx + 1
        elif p_idx < L + L * L:
            j, k = divmod(p_idx - L, L)
            p = (j + 1, k + 1)
        else:
            rest = p_idx - L - L * L
            j, kl = divmod(rest, L * L)
            k, l = divmod(kl, L)
            p = (j + 1, k + 1, l + 1)
        return (g, p)

    def __iter__(self):
        for i in range(self._len):
            yield self[i]


_AR_ANS1 = (0, 1)
_AR_ANS2 = tuple(itertools.product((0, 1), repeat=2))
_AR_ANS3 = tuple(itertools.product((0, 1), repeat=3))


def _ar_answers(q):
    p = q[1]
    if isinstance(p, int):
        return _AR_ANS1
    return _AR_ANS2 if len(p) == 2 else _AR_ANS3


def answer_reduce(
    game: Game,
    T: int,
    *,
    decider: TmDecider | None = None,
    validate: bool = True,
) -> Game:
    """Answer-reduced game: proofs queried at one to three indices.

    Questions pair an oracularized game question with proof indices from
    [L] + [L]^2 + [L]^3 where L is the Cook-Levin variable count of the
    pair decider at time budget T and witness length 2T; answers are one
    to three bits.  Exact evaluation is refused (the proof-question space
    is the one genuinely huge object); use sampled_value.
    """
    if T < 1:
        raise ValueError("time budget must be positive")
    if not is_synchronous(game, max_questions=256):
        raise ValueError("answer reduction requires a synchronous game")
    if decider is None:
        decider = game.tm_decider
    if decider is None:
        decider = synthesize_tm_decider(game)
    ctx = _ARContext(game, T, decider)
    if validate:
        _validate_time_budget(ctx)
    questions = _ARQuestions(ctx)
    maps = ctx.maps
    nontrivial_base = game.nontrivial

    def iso_checks(i, p2):
        """Engaged (position, answer-slot) checks of rows three and four."""
        out = []
        for slot, j in enumerate(p2):
            if maps.eta_inv(i) == j:
                out.append(slot)
        return out

    def iso_checks_second(i, p2):
        out = []
        for slot, j in enumerate(p2):
            if maps.lam_inv(i) == j:
                out.append(slot)
        return out

    def row234(q1, q2, a1, a2):
        """Ordered match: q1 = (ora pair, single index), q2 per rows 2-4."""
        g1, i = q1
        g2, p2 = q2
        if g1[0] != "ora" or not isinstance(i, int):
            return None
        x, y = g1[1], g1[2]
        if not nontrivial_base(x, y):
            return None
        if g2 == g1 and isinstance(p2, tuple) and len(p2) == 3:
            if i not in p2:
                return None
            assign = {}
            for var, bit in zip(p2, a2):
                if assign.setdefault(var, bit) != bit:
                    return False
            if assign[i] != a1:
                return False
            found = ctx.clauses(x, y, *p2)
            for clause in found or ():
                if not any(
                    (assign[abs(lit)] == 1) == (lit > 0) for lit in clause
                ):
                    return False
            return True
        if g2[0] == "iso" and isinstance(p2, tuple) and len(p2) == 2:
            if g2[1] == x:
                slots = iso_checks(i, p2)
                if g2[1] == y:
                    slots = slots + iso_checks_second(i, p2)
            elif g2[1] == y:
                slots = iso_checks_second(i, p2)
            else:
                return None
            if not slots:
                return None
            return all(a2[s] == a1 for s in slots)
        return None

    def decide(q1, q2, a1, a2):
        if q1 == q2:
            return a1 == a2
        res = row234(q1, q2, a1, a2)
        if res is None:
            res = row234(q2, q1, a2, a1)
        return True if res is None else res

    def nontrivial(q1, q2):
        if q1 == q2:
            return True

        def match(qa, qb):
            g1, i = qa
            g2, p2 = qb
            if g1[0] != "ora" or not isinstance(i, int):
                return False
            x, y = g1[1], g1[2]
            if not nontrivial_base(x, y):
                return False
            if g2 == g1 and isinstance(p2, tuple) and len(p2) == 3:
                return i in p2
            if g2[0] == "iso" and isinstance(p2, tuple) and len(p2) == 2:
                slots = []
                if g2[1] == x:
                    slots += iso_checks(i, p2)
                if g2[1] == y:
                    slots += iso_checks_second(i, p2)
                return bool(slots)
            return False

        return match(q1, q2) or match(q2, q1)

    def refuse_pairs():
        cost = ctx.L**3 * (ctx.n_base + ctx.n_base**2) ** 2
        raise BudgetError(
            f"exact evaluation needs ~{cost:.2e} pair visits"
            f" (budget {EXACT_EVAL_BUDGET:.0e}); use sampled_value"
        )

    out = Game(
        f"{game.name}.ans",
        questions,
        _ar_answers,
        decide,
        nontrivial,
        nontrivial_pairs=refuse_pairs,
    )
    out.ar_context = ctx
    return out


def _validate_time_budget(ctx: _ARContext, pair_cap: int = 64) -> None:
    """Check T against encoded answer widths and sampled decider runtimes."""
    game, T = ctx.game, ctx.T
    for x in ctx.base_questions:
        width = game.answer_bit_width(x)
        if width > T:
            raise ValueError(
                f"answers of {x!r} need {width} bits, above the budget T={T}"
            )
    count = 0
    for x, y in game.nontrivial_pairs():
        if x == y:
            continue
        count += 1
        if count > pair_cap:
            break
        mach = ctx.machine(x, y)
        answer_pairs = list(
            itertools.product(game.answers(x), game.answers(y))
        )
        if len(answer_pairs) > 64:
            answer_pairs = answer_pairs[:: max(1, len(answer_pairs) // 64)]
        for a, b in answer_pairs:
            outcome, _ = simulate(mach, ctx.witness(x, y, a, b), T)
            if outcome == "timeout":
                raise ValueError(
                    f"decider for pair ({x!r}, {y!r}) exceeds the budget T={T}"
                )


def lift_answer_reduce(
    game: Game,
    strategy: SynchronousStrategy,
    T: int,
    *,
    reduced: Game | None = None,
    check_oracularizable: bool = True,
) -> SynchronousStrategy:
    """Honest lift onto the answer-reduced game, same dimension.

    Oracle questions measure M^x M^y jointly (base-trivial pairs report a
    designated answer) and read the queried bits off the Cook-Levin proof
    of their run; isolated questions report bits of their own padded
    encoded answer.  Pass the already-built reduced game to share its
    decider context.
    """
    if check_oracularizable:
        ok, worst = is_oracularizable(game, strategy)
        if not ok:
            raise ValueError(
                f"strategy is not oracularizable (worst commutator {worst:.3e})"
            )
    if reduced is None:
        reduced = answer_reduce(game, T)
    ctx: _ARContext = reduced.ar_context
    dim = strategy.dim

    def bits_for_iso(x, a, p) -> tuple:
        padded = ctx.padded_bits(x, a)

        def bit(i):
            return padded[i - 1] if i <= ctx.T else 0

        if isinstance(p, int):
            return bit(p)
        return tuple(bit(i) for i in p)

    def bits_for_proof(proof_bits, p):
        if isinstance(p, int):
            return proof_bits[p - 1]
        return tuple(proof_bits[i - 1] for i in p)

    def processed(m: Measurement, mapping, out_labels) -> Measurement:
        sums = {lab: None for lab in out_labels}
        for lab, e in zip(m.labels, m.elements):
            target = mapping(lab)
            sums[target] = e if sums[target] is None else sums[target] + e
        zero = np.zeros((dim, dim), dtype=complex)
        return Measurement(
            tuple(out_labels),
            [zero if sums[lab] is None else sums[lab] for lab in out_labels],
            kind="projective",
        )

    def build(q):
        g, p = q
        out_labels = _ar_answers(q)
        if g[0] == "iso":
            x = g[1]
            base = strategy.measurement(x)
            return processed(base, lambda a: bits_for_iso(x, a, p), out_labels)
        x, y = g[1], g[2]
        proofs = ctx.proof_table(x, y)
        if ctx.game.nontrivial(x, y):
            mx = strategy.measurement(x)
            my = strategy.measurement(y)
            labels = tuple(itertools.product(mx.labels, my.labels))
            joint = Measurement(
                labels,
                [mx.element(a) @ my.element(b) for a, b in labels],
                kind="projective",
            )
        else:
            a0b0 = _designated(ctx.game, x, y)
            joint = Measurement(
                (a0b0,), [np.eye(dim, dtype=complex)], kind="projective"
            )
        return processed(
            joint,
            lambda ab: bits_for_proof(proofs[ab][1], p),
            out_labels,
        )

    return SynchronousStrategy(dim, build, cache_size=1024)


# ---------------------------------------------------------------------------
# gapless compression


def gapless_compress(game: Game, T: int) -> Game:
    """Introspection followed by answer reduction.

    The compressed game keeps references to the intermediate introspection
    game (attribute intro_game) so honest lifts can share its context.
    """
    intro = introspect(game)
    reduced = answer_reduce(intro, T)
    reduced.intro_game = intro
    return reduced


def lift_gapless_compress(
    game: Game,
    strategy: SynchronousStrategy,
    T: int,
    *,
    compressed: Game | None = None,
) -> SynchronousStrategy:
    """Compose the introspection and answer-reduction lifts."""
    if compressed is None:
        compressed = gapless_compress(game, T)
    intro = compressed.intro_game
    lifted_intro = lift_introspection(game, strategy)
    return lift_answer_reduce(
        intro,
        lifted_intro,
        T,
        reduced=compressed,
        check_oracularizable=False,
    )


def sample_nontrivial_pairs(game: Game, count: int, seed: int):
    """Deterministic sample of nontrivial pairs of a lazily indexed game.

    Draws uniform question pairs and keeps the nontrivial ones; also
    steers samples onto the structured rows by pairing a drawn question
    with itself occasionally.  Intended for spot checks of games whose
    pair set cannot be enumerated.
    """
    rng = np.random.default_rng(seed)
    n = len(game.questions)
    out = []
    tries = 0
    while len(out) < count and tries < 200 * count:
        tries += 1
        q = game.questions[int(rng.integers(0, n))]
        if rng.random() < 0.25:
            r = q
        else:
            r = game.questions[int(rng.integers(0, n))]
        if game.nontrivial(q, r):
            out.append((q, r))
    return out

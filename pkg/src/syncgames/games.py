"""Synchronous nonlocal games and their tracial-strategy evaluation.

A game is a question set, per-question answer labels, a decision predicate
and a nontrivial-pair classifier; the question distribution is always
uniform.  A synchronous strategy assigns one projective measurement per
question on a common dimension; correlations are tr(M^x_a M^y_b)/dim.
Exact evaluation walks only the nontrivial question pairs (trivial pairs
contribute winning mass analytically) and works in a per-question
eigenbasis so each pair costs one d x d unitary product.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover - always present in the test env
    import contextlib

    def threadpool_limits(*args, **kwargs):
        return contextlib.nullcontext()

from .algebra import DEFAULT_TOL, Measurement, Tolerance

__all__ = [
    "Game",
    "SynchronousStrategy",
    "EvaluationReport",
    "value",
    "sampled_value",
    "is_synchronous",
    "is_oracularizable",
    "tensor_extend",
    "table_game",
    "index_answer_bits",
]

THREADS_ENV = "SYNCGAMES_THREADS"


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def index_answer_bits(num_answers: int):
    """Fixed-width big-endian index encoding for an answer list."""
    width = max(1, (num_answers - 1).bit_length()) if num_answers > 1 else 0

    def encode(idx: int) -> tuple[int, ...]:
        return tuple((idx >> (width - 1 - k)) & 1 for k in range(width))

    return width, encode


class Game:
    """Synchronous game with uniform question distribution.

    questions is any indexable sequence (lazily indexed for transformed
    games whose question space is too large to materialize).  answers,
    decide and nontrivial are callables; optional hooks provide vectorized
    accept masks, direct nontrivial-pair enumeration, a Turing-machine
    decider family (needed by answer reduction), and a per-question binary
    answer encoding.
    """

    def __init__(
        self,
        name: str,
        questions,
        answers,
        decide,
        nontrivial,
        *,
        accept_mask=None,
        nontrivial_pairs=None,
        tm_decider=None,
        answer_bits=None,
    ):
        self.name = name
        self.questions = questions
        self._answers = answers
        self.decide = decide
        self.nontrivial = nontrivial
        self._accept_mask = accept_mask
        self._nontrivial_pairs = nontrivial_pairs
        self.tm_decider = tm_decider
        self._answer_bits = answer_bits
        self._answer_cache: dict = {}

    def __repr__(self):
        return f"Game({self.name!r}, {self.question_count()} questions)"

    def question_count(self) -> int:
        return len(self.questions)

    def answers(self, x) -> tuple:
        try:
            return self._answer_cache[x]
        except KeyError:
            out = tuple(self._answers(x))
            if not out:
                raise ValueError(f"question {x!r} has an empty answer set")
            if len(self._answer_cache) < 4096:
                self._answer_cache[x] = out
            return out
        except TypeError:  # unhashable question label
            return tuple(self._answers(x))

    def accept_mask(self, x, y) -> np.ndarray:
        """Boolean matrix of decide over answers(x) x answers(y)."""
        if self._accept_mask is not None:
            mask = self._accept_mask(x, y)
            if mask is not None:
                return mask
        a_labels = self.answers(x)
        b_labels = self.answers(y)
        mask = np.empty((len(a_labels), len(b_labels)), dtype=bool)
        for i, a in enumerate(a_labels):
            for j, b in enumerate(b_labels):
                mask[i, j] = bool(self.decide(x, y, a, b))
        return mask

    def nontrivial_pairs(self):
        """Ordered nontrivial question pairs, deterministic order."""
        if self._nontrivial_pairs is not None:
            yield from self._nontrivial_pairs()
            return
        qs = list(self.questions)
        for x in qs:
            for y in qs:
                if self.nontrivial(x, y):
                    yield (x, y)

    def answer_bits(self, x, a) -> tuple[int, ...]:
        """Binary encoding of answer a to question x (index-based default)."""
        if self._answer_bits is not None:
            return tuple(self._answer_bits(x, a))
        labels = self.answers(x)
        _, encode = index_answer_bits(len(labels))
        return encode(labels.index(a))

    def answer_bit_width(self, x) -> int:
        labels = self.answers(x)
        if self._answer_bits is not None:
            return len(self._answer_bits(x, labels[0]))
        width, _ = index_answer_bits(len(labels))
        return width


class SynchronousStrategy:
    """One projective measurement per question on a common dimension.

    measurements is either a dict {question: Measurement} or a callable
    building measurements on demand (used by lifted strategies over
    question spaces too large to materialize); lazily built measurements
    are kept in a bounded cache.
    """

    def __init__(self, dim: int, measurements, *, cache_size: int = 512):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = int(dim)
        if isinstance(measurements, dict):
            self._table = dict(measurements)
            self._builder = None
        else:
            self._table = None
            self._builder = measurements
        self._cache: OrderedDict = OrderedDict()
        self._cache_size = cache_size

    def measurement(self, x) -> Measurement:
        if self._table is not None:
            try:
                return self._table[x]
            except KeyError:
                raise KeyError(f"strategy has no measurement for question {x!r}")
        try:
            m = self._cache.pop(x)
            self._cache[x] = m
            return m
        except (KeyError, TypeError):
            pass
        m = self._builder(x)
        if m.dim != self.dim:
            raise ValueError(
                f"measurement for {x!r} has dim {m.dim}, strategy dim {self.dim}"
            )
        try:
            self._cache[x] = m
            if len(self._cache) > self._cache_size:
                self._cache.popitem(last=False)
        except TypeError:
            pass
        return m

    def question_labels(self):
        if self._table is None:
            raise ValueError("lazy strategy does not enumerate its questions")
        return list(self._table)

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        if self._table is None:
            return
        for x, m in self._table.items():
            if m.dim != self.dim:
                raise ValueError(f"measurement for {x!r} has wrong dimension")
            m.validate(tol)

    def conjugated(self, u: np.ndarray) -> "SynchronousStrategy":
        """Conjugate every measurement by one fixed unitary."""
        if self._table is None:
            raise ValueError("conjugation requires a materialized strategy")
        uh = u.conj().T
        table = {
            x: Measurement(m.labels, [u @ e @ uh for e in m.elements], kind=m.kind)
            for x, m in self._table.items()
        }
        return SynchronousStrategy(self.dim, table)


@dataclass
class EvaluationReport:
    """Exact value split into trivial mass and per-nontrivial-pair terms."""

    value: float
    per_pair: dict = field(repr=False)
    trivial_mass: float
    question_count: int

    def check_consistency(self, atol: float = 1e-12) -> None:
        n2 = self.question_count**2
        recomputed = self.trivial_mass + math.fsum(self.per_pair.values()) / n2
        if abs(recomputed - self.value) > atol:
            raise AssertionError(
                f"report inconsistent: {recomputed} vs {self.value}"
            )


class _EigenForm:
    """Joint eigenbasis of a projective measurement.

    Columns of u are grouped by outcome; group a spans the range of the
    projection for answer a.  Built with a single Hermitian
    eigendecomposition of sum_a (a_index + 1) M_a.
    """

    __slots__ = ("u", "uh", "starts", "counts")

    def __init__(self, m: Measurement, labels_expected, tol: Tolerance):
        if m.labels != tuple(labels_expected):
            raise ValueError(
                f"measurement labels {m.labels!r} do not match game answers"
            )
        d = m.dim
        h = np.zeros((d, d), dtype=complex)
        for k, e in enumerate(m.elements):
            h += (k + 1) * e
        w, v = np.linalg.eigh(h)
        idx = np.rint(w).astype(int)
        if np.abs(w - idx).max() > 1e-6:
            raise ValueError("measurement is not projective within tolerance")
        if idx.min() < 0 or idx.max() > len(m.elements):
            raise ValueError("measurement is not a complete projective family")
        counts = np.bincount(idx, minlength=len(m.elements) + 1)
        if counts[0] != 0:
            raise ValueError("measurement does not sum to the identity")
        order = np.argsort(idx, kind="stable")
        self.u = np.ascontiguousarray(v[:, order])
        self.uh = np.ascontiguousarray(self.u.conj().T)
        self.counts = counts[1:]
        self.starts = np.concatenate(([0], np.cumsum(self.counts)))


def _group_matrix(counts: np.ndarray, dim: int) -> np.ndarray:
    s = np.zeros((len(counts), dim))
    pos = 0
    for i, c in enumerate(counts):
        s[i, pos : pos + c] = 1.0
        pos += c
    return s


class StrategyEvaluator:
    """Cached eigenbasis forms plus pairwise winning probabilities."""

    def __init__(self, game: Game, strategy: SynchronousStrategy, tol: Tolerance):
        self.game = game
        self.strategy = strategy
        self.tol = tol
        self._forms: dict = {}
        self._groups: dict = {}

    def form(self, x) -> _EigenForm:
        try:
            return self._forms[x]
        except KeyError:
            f = _EigenForm(self.strategy.measurement(x), self.game.answers(x), self.tol)
            self._forms[x] = f
            return f

    def _group(self, x) -> np.ndarray:
        try:
            return self._groups[x]
        except KeyError:
            g = _group_matrix(self.form(x).counts, self.strategy.dim)
            self._groups[x] = g
            return g

    def cross_gram(self, x, y) -> np.ndarray:
        """Matrix of tr(M^x_a M^y_b)/dim over answer pairs."""
        fx, fy = self.form(x), self.form(y)
        w = fx.uh @ fy.u
        e = (w.real**2 + w.imag**2)
        return (self._group(x) @ e @ self._group(y).T) / self.strategy.dim

    def win_probability(self, x, y) -> float:
        mask = self.game.accept_mask(x, y)
        gram = self.cross_gram(x, y)
        return float((gram * mask).sum())

    def worst_commutator(self, x, y) -> float:
        """max over (a,b) of ||[M^x_a, M^y_b]||_tau.

        In the x eigenbasis M^x_a is a 0/1 block selector S_a and the
        commutator with K_b = basis-changed M^y_b keeps exactly the
        off-block entries of K_b, so the residual is an entrywise sum
        and stays accurate near zero.
        """
        fx, fy = self.form(x), self.form(y)
        w = fx.uh @ fy.u
        d = self.strategy.dim
        gx = self._group(x)
        worst = 0.0
        for j in range(len(fy.counts)):
            if fy.counts[j] == 0:
                continue
            wb = w[:, fy.starts[j] : fy.starts[j + 1]]
            e = np.abs(wb @ wb.conj().T) ** 2
            re = gx @ e @ gx.T
            rows = re.sum(axis=1)
            cols = re.sum(axis=0)
            diag = np.diag(re)
            val = (rows + cols - 2 * diag).max() / d
            if val > worst:
                worst = val
        return math.sqrt(max(worst, 0.0))


def value(game: Game, strategy: SynchronousStrategy, tol: Tolerance = DEFAULT_TOL) -> EvaluationReport:
    """Exact value of a synchronous strategy.

    Iterates nontrivial pairs only; trivial pairs contribute winning mass
    analytically.  Pair contributions are accumulated with compensated
    summation in a fixed order, so results are bit-stable for any thread
    count (threads set via the SYNCGAMES_THREADS environment variable).
    """
    n = game.question_count()
    ev = StrategyEvaluator(game, strategy, tol)
    pairs = list(game.nontrivial_pairs())

    def chunk_probs(chunk):
        return [ev.win_probability(x, y) for x, y in chunk]

    threads = _thread_count()
    # one BLAS thread per worker: the per-pair matrices are small enough
    # that BLAS-internal threading only adds synchronization cost
    with threadpool_limits(limits=1, user_api="blas"):
        if threads > 1 and len(pairs) > 4 * threads:
            # warm the per-question caches serially; builds are not thread-safe
            for q in game.questions:
                ev.form(q)
            size = max(1, (len(pairs) + 4 * threads - 1) // (4 * threads))
            chunks = [pairs[i : i + size] for i in range(0, len(pairs), size)]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(chunk_probs, chunks))
            probs = [p for sub in results for p in sub]
        else:
            probs = chunk_probs(pairs)

    per_pair = dict(zip(pairs, probs))
    trivial_count = n * n - len(pairs)
    total = (trivial_count + math.fsum(probs)) / (n * n)
    if not -1e-10 <= total <= 1 + 1e-10:
        raise AssertionError(f"value {total} outside [0, 1] window")
    total = min(max(total, 0.0), 1.0)
    return EvaluationReport(
        value=total,
        per_pair=per_pair,
        trivial_mass=trivial_count / (n * n),
        question_count=n,
    )


def sampled_value(
    game: Game,
    strategy: SynchronousStrategy,
    samples: int,
    seed: int,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[float, float]:
    """Monte Carlo estimate of the value with binomial standard error.

    Draws (x, y) uniformly, then samples an answer pair from the strategy
    correlation tr(M^x_a M^y_b)/dim and scores the decider.  Deterministic
    given the seed.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    n = game.question_count()
    xi = rng.integers(0, n, size=samples)
    yi = rng.integers(0, n, size=samples)
    unif = rng.random(size=samples)
    gram_cache: OrderedDict = OrderedDict()

    def gram_for(x, y):
        key = (x, y)
        try:
            g = gram_cache.pop(key)
            gram_cache[key] = g
            return g
        except KeyError:
            pass
        mx = strategy.measurement(x)
        my = strategy.measurement(y)
        a = np.stack([e.ravel() for e in mx.elements])
        b = np.stack([e.T.ravel() for e in my.elements])
        g = (a @ b.T).real / strategy.dim
        g = np.clip(g, 0.0, None)
        gram_cache[key] = g
        if len(gram_cache) > 4096:
            gram_cache.popitem(last=False)
        return g

    wins = 0
    for k in range(samples):
        x = game.questions[int(xi[k])]
        y = game.questions[int(yi[k])]
        if not game.nontrivial(x, y):
            wins += 1
            continue
        g = gram_for(x, y)
        flat = g.ravel()
        total = flat.sum()
        if not 0.999999 <= total <= 1.000001:
            raise AssertionError(f"correlation mass {total} not normalized")
        cdf = np.cumsum(flat) / total
        pick = int(np.searchsorted(cdf, unif[k], side="right"))
        pick = min(pick, flat.size - 1)
        ia, ib = divmod(pick, g.shape[1])
        a = game.answers(x)[ia]
        b = game.answers(y)[ib]
        if game.decide(x, y, a, b):
            wins += 1
    est = wins / samples
    stderr = math.sqrt(est * (1.0 - est) / samples)
    return est, stderr


def is_synchronous(game: Game, *, max_questions: int | None = None) -> bool:
    """Check decide(x,x,a,b) = 1 iff a = b, exhaustively at desk scale.

    For games with more questions than max_questions, a deterministic
    evenly-spaced subsample of questions is checked instead.
    """
    n = game.question_count()
    if max_questions is not None and n > max_questions:
        idxs = np.linspace(0, n - 1, max_questions).astype(int)
    else:
        idxs = range(n)
    for i in idxs:
        x = game.questions[int(i)]
        labels = game.answers(x)
        for a in labels:
            for b in labels:
                if bool(game.decide(x, x, a, b)) != (a == b):
                    return False
    return True


def is_oracularizable(
    game: Game,
    strategy: SynchronousStrategy,
    tol: Tolerance = DEFAULT_TOL,
    *,
    max_pairs: int | None = None,
) -> tuple[bool, float]:
    """Worst commutator residual over nontrivial pairs, compared to tol.

    Returns (all residuals <= tol.eps, worst residual).  max_pairs caps the
    number of nontrivial pairs examined (deterministic evenly spaced
    subsample) for games whose pair set is too large to exhaust.
    """
    ev = StrategyEvaluator(game, strategy, tol)
    pairs = list(game.nontrivial_pairs())
    if max_pairs is not None and len(pairs) > max_pairs:
        idxs = np.linspace(0, len(pairs) - 1, max_pairs).astype(int)
        pairs = [pairs[int(i)] for i in idxs]
    worst = 0.0
    with threadpool_limits(limits=1, user_api="blas"):
        for x, y in pairs:
            worst = max(worst, ev.worst_commutator(x, y))
    return worst <= tol.eps, worst


def tensor_extend(s1: SynchronousStrategy, s2: SynchronousStrategy, combine) -> SynchronousStrategy:
    """Build a product strategy with measurements kron(M1, M2) per the map.

    combine(question) returns (q1, q2) or (q1, q2, merge) where merge maps
    an outcome pair (a1, a2) to the output label (default: the tuple
    itself).  The resulting dimension is the product of the inputs'.
    """
    dim = s1.dim * s2.dim

    def build(q):
        spec = combine(q)
        if len(spec) == 2:
            q1, q2 = spec
            merge = lambda a1, a2: (a1, a2)
        else:
            q1, q2, merge = spec
        m1 = s1.measurement(q1)
        m2 = s2.measurement(q2)
        labels = []
        elements = []
        for a1, e1 in zip(m1.labels, m1.elements):
            for a2, e2 in zip(m2.labels, m2.elements):
                labels.append(merge(a1, a2))
                elements.append(np.kron(e1, e2))
        return Measurement(tuple(labels), elements, kind="projective")

    return SynchronousStrategy(dim, build)


def table_game(
    name: str,
    questions,
    answers: dict,
    nontrivial_pairs: list,
    accept: dict,
    *,
    check: bool = True,
) -> Game:
    """Tiny explicit game: listed nontrivial pairs with accept-sets.

    accept maps each listed ordered pair (x, y) to the accepted answer
    pairs (a, b); unlisted pairs are trivial.  Diagonal pairs may be
    omitted; they default to the synchronous condition a = b.
    """
    questions = list(questions)
    answers = {x: tuple(answers[x]) for x in questions}
    listed = set()
    for x, y in nontrivial_pairs:
        listed.add((x, y))
        listed.add((y, x))
    accept_sets = {}
    for (x, y), pairs in accept.items():
        accept_sets[(x, y)] = frozenset(pairs)
        accept_sets.setdefault((y, x), frozenset((b, a) for a, b in pairs))

    def decide(x, y, a, b):
        if x == y:
            return a == b
        if (x, y) in accept_sets:
            return (a, b) in accept_sets[(x, y)]
        if (x, y) in listed:
            raise ValueError(f"nontrivial pair {(x, y)!r} has no accept set")
        return True

    def nontrivial(x, y):
        if x == y:
            return True
        return (x, y) in listed

    game = Game(
        name,
        questions,
        lambda x: answers[x],
        decide,
        nontrivial,
    )
    if check and not is_synchronous(game):
        raise ValueError("table game is not synchronous")
    return game

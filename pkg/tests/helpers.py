"""Shared random-instance generators for the test suite (all seeded)."""

from __future__ import annotations

import zlib

import numpy as np

from syncgames.algebra import Measurement
from syncgames.optimize import haar_unitary


def rng_for(*key) -> np.random.Generator:
    ints = [
        zlib.crc32(part.encode()) if isinstance(part, str) else int(part)
        for part in key
    ]
    return np.random.default_rng(ints)


def random_povm(dim: int, outcomes: int, rng) -> Measurement:
    """POVM via normalization of random PSD operators."""
    mats = []
    for _ in range(outcomes):
        z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        mats.append(z @ z.conj().T + 1e-6 * np.eye(dim))
    total = np.sum(mats, axis=0)
    w, v = np.linalg.eigh(total)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    elements = [inv_sqrt @ m @ inv_sqrt for m in mats]
    return Measurement(tuple(range(outcomes)), elements, kind="povm")


def random_projective(dim: int, outcomes: int, rng) -> Measurement:
    """Projective measurement from a Haar basis with balanced ranks."""
    u = haar_unitary(dim, rng)
    base, extra = divmod(dim, outcomes)
    elements = []
    col = 0
    for i in range(outcomes):
        r = base + (1 if i < extra else 0)
        block = u[:, col : col + r]
        elements.append(block @ block.conj().T)
        col += r
    return Measurement(tuple(range(outcomes)), elements, kind="projective")


def random_operator_set(dim: int, outcomes: int, rng, scale: float = 1.0) -> Measurement:
    elements = [
        scale
        * (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
        / np.sqrt(dim)
        for _ in range(outcomes)
    ]
    return Measurement(tuple(range(outcomes)), elements, kind="general")


def random_contraction_set(dim: int, outcomes: int, rng) -> Measurement:
    """Operator set R with sum_b R_b* R_b <= identity (Kraus-like)."""
    povm = random_povm(dim, outcomes, rng)
    elements = []
    for e in povm.elements:
        w, v = np.linalg.eigh(e)
        w = np.clip(w, 0, None)
        u = haar_unitary(dim, rng)
        elements.append(u @ ((v * np.sqrt(w)) @ v.conj().T))
    return Measurement(povm.labels, elements, kind="general")

"""Seeded random generation of polynomial fields, tensors and connections.

All generators take an explicit ``random.Random`` so that every sweep is
reproducible from a recorded seed.  Sub-seeds for independent tasks are
derived with :func:`derive_rng`, which hashes a label string; the result does
not depend on scheduling order.
"""

from __future__ import annotations

import itertools
import random

from .algebra import ScalarField, TensorField
from .connection import ConnectionField

DEFAULT_DEGREE = 2
DEFAULT_COEFF_BOUND = 3


def derive_rng(seed: int, label: str) -> random.Random:
    """Independent generator for a named subtask of a seeded run."""
    return random.Random(f"{seed}:{label}")


def _monomials(dim: int, degree: int):
    """Exponent tuples of total degree <= degree, in a fixed order."""
    out = []
    for total in range(degree + 1):
        for cuts in itertools.combinations_with_replacement(range(dim), total):
            exps = [0] * dim
            for c in cuts:
                exps[c] += 1
            out.append(tuple(exps))
    return out


def random_scalar_field(
    rng: random.Random,
    dim: int,
    degree: int = DEFAULT_DEGREE,
    bound: int = DEFAULT_COEFF_BOUND,
) -> ScalarField:
    """Random polynomial with integer coefficients in [-bound, bound]."""
    terms = {}
    for exps in _monomials(dim, degree):
        c = rng.randint(-bound, bound)
        if c:
            terms[exps] = c
    return ScalarField.from_terms(terms, dim)


def random_tensor_field(
    rng: random.Random,
    dim: int,
    valence: tuple,
    degree: int = DEFAULT_DEGREE,
    bound: int = DEFAULT_COEFF_BOUND,
) -> TensorField:
    count = dim ** (valence[0] + valence[1])
    entries = [random_scalar_field(rng, dim, degree, bound) for _ in range(count)]
    return TensorField(dim, valence, entries)


def random_connection(
    rng: random.Random,
    dim: int,
    degree: int = DEFAULT_DEGREE,
    bound: int = DEFAULT_COEFF_BOUND,
) -> ConnectionField:
    return ConnectionField(random_tensor_field(rng, dim, (1, 2), degree, bound))


def random_symmetric_connection(
    rng: random.Random,
    dim: int,
    degree: int = DEFAULT_DEGREE,
    bound: int = DEFAULT_COEFF_BOUND,
) -> ConnectionField:
    """Torsion-free connection: random coefficients symmetrised in (j, k)."""
    raw = random_tensor_field(rng, dim, (1, 2), degree, bound)
    sym = (raw + raw.swap_last_lower())  # even coefficients, stays integral
    return ConnectionField(sym)


def random_even_connection(
    rng: random.Random,
    dim: int,
    degree: int = DEFAULT_DEGREE,
    bound: int = DEFAULT_COEFF_BOUND,
) -> ConnectionField:
    """Connection with even integer coefficients (doubled draws), so its
    symmetric and antisymmetric parts are integral; the verification sweeps
    prefer this purely for arithmetic speed."""
    L = random_connection(rng, dim, degree, bound)
    return ConnectionField(L.coeffs.scale(2))


def random_metric_field(
    rng: random.Random,
    dim: int,
    degree: int = 1,
    bound: int = 2,
    antisym_degree: int | None = 1,
) -> TensorField:
    """Random metric whose symmetric part has an exact polynomial inverse.

    Built as U^T D U with U unipotent upper-triangular (polynomial entries)
    and D a constant nonsingular diagonal, so the determinant is constant.
    ``antisym_degree=None`` gives a symmetric metric; otherwise a random
    antisymmetric polynomial part is added on top.
    """
    zero = ScalarField(dim)
    one = ScalarField.constant(1, dim)
    u = [[one if i == j else zero for j in range(dim)] for i in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            u[i][j] = random_scalar_field(rng, dim, degree, bound)
    d = [rng.choice([x for x in range(-bound, bound + 1) if x]) for _ in range(dim)]

    def sym_entry(i, j):
        total = ScalarField(dim)
        for k in range(dim):
            total = total + u[k][i].scale(d[k]) * u[k][j]
        return total

    entries = [[sym_entry(i, j) for j in range(dim)] for i in range(dim)]
    if antisym_degree is not None:
        for i in range(dim):
            for j in range(i + 1, dim):
                h = random_scalar_field(rng, dim, antisym_degree, bound)
                entries[i][j] = entries[i][j] + h
                entries[j][i] = entries[j][i] - h
    return TensorField(dim, (0, 2), [entries[i][j] for i in range(dim) for j in range(dim)])

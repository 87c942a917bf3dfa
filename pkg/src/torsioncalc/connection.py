"""Non-symmetric connection fields and their covariant derivatives.

A connection with coefficients L^i_{jk} that are not symmetric in (j, k)
admits, besides the familiar symmetric-part derivative, four distinct
covariant-derivative rules that differ only in which lower slot of L the
differentiation index occupies.  Internally every rule is normalised to a
signature (sigma_up, sigma_lo) giving the sign with which the antisymmetric
part of the connection enters the upper-index and lower-index terms; the
five rules are then one code path.
"""

from __future__ import annotations

import enum
from fractions import Fraction

from .algebra import (
    Rational,
    RationalMatrix,
    ScalarField,
    TensorField,
    _add_terms,
    _fma_terms,
    _flat_to_indices,
    _strip_zeros,
    matrix_rank,
)

HALF = Fraction(1, 2)


class DerivKind(enum.Enum):
    """The five covariant-derivative rules.

    The signature (sigma_up, sigma_lo) fixes the sign of the torsion-half
    contribution: the upper-index coefficient is sym + sigma_up * tor and the
    lower-index coefficient is sym - sigma_lo * tor, so that sigma = +1 keeps
    the raw connection and sigma = -1 swaps its lower slots.
    """

    SYM = ("sym", 0, 0)
    K1 = ("1", 1, -1)
    K2 = ("2", -1, 1)
    K3 = ("3", 1, 1)
    K4 = ("4", -1, -1)

    def __init__(self, tag, sigma_up, sigma_lo):
        self.tag = tag
        self.sigma_up = sigma_up
        self.sigma_lo = sigma_lo

    @property
    def signature(self):
        return (self.sigma_up, self.sigma_lo)


KIND_BY_NUMBER = {1: DerivKind.K1, 2: DerivKind.K2, 3: DerivKind.K3, 4: DerivKind.K4}
ALL_KINDS = (DerivKind.SYM, DerivKind.K1, DerivKind.K2, DerivKind.K3, DerivKind.K4)


class ConnectionField:
    """Connection coefficients L^i_{jk}(x) with no symmetry assumed."""

    __slots__ = ("coeffs", "dim", "_sym", "_tor")

    def __init__(self, coeffs: TensorField):
        if coeffs.valence != (1, 2):
            raise ValueError("connection coefficients must have valence (1, 2)")
        self.coeffs = coeffs
        self.dim = coeffs.dim
        self._sym = None
        self._tor = None

    @classmethod
    def zero(cls, dim: int) -> "ConnectionField":
        return cls(TensorField.zero(dim, (1, 2)))

    def is_symmetric(self) -> bool:
        return self.coeffs == self.coeffs.swap_last_lower()

    def symmetric_part(self) -> "ConnectionField":
        if self._sym is None:
            swapped = self.coeffs.swap_last_lower()
            self._sym = ConnectionField((self.coeffs + swapped).scale(HALF))
        return self._sym

    def torsion_half(self) -> TensorField:
        """Antisymmetric part; the torsion tensor is twice this field."""
        if self._tor is None:
            swapped = self.coeffs.swap_last_lower()
            self._tor = (self.coeffs - swapped).scale(HALF)
        return self._tor

    def torsion(self) -> TensorField:
        return self.torsion_half().scale(2)

    def __eq__(self, other):
        if not isinstance(other, ConnectionField):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        return f"ConnectionField(dim={self.dim})"


def decompose_connection(L: ConnectionField):
    """Split into the symmetric part and the torsion half; they reassemble
    the input exactly."""
    return L.symmetric_part(), L.torsion_half()


def _coeff_entries(L: ConnectionField, sigma: int, transpose_when: int):
    """Raw term dicts of the coefficient tensor selected by one signature
    component: sigma == transpose_when swaps the two lower slots of L and
    sigma == 0 takes the symmetric part.  Slot order is [x][y][z] with z the
    differentiation index."""
    if sigma == 0:
        tensor = L.symmetric_part().coeffs
    elif sigma == transpose_when:
        tensor = L.coeffs.swap_last_lower()
    else:
        tensor = L.coeffs
    return [e._terms for e in tensor.entries]


def covariant_derivative(kind: DerivKind, a: TensorField, L: ConnectionField) -> TensorField:
    """Covariant derivative of ``a`` for one of the five rules.

    The result appends the differentiation index as a final lower index.  For
    each upper index the connection enters with coefficient sym + sigma_up*tor
    and for each lower index with -(sym - sigma_lo*tor); the symmetric rule is
    the sigma = (0, 0) case.
    """
    if a.dim != L.dim:
        raise ValueError(f"dimension mismatch: tensor {a.dim} vs connection {L.dim}")
    dim = a.dim
    r, s = a.valence
    rank = r + s

    up = _coeff_entries(L, kind.sigma_up, -1) if r else None
    lo = _coeff_entries(L, kind.sigma_lo, 1) if s else None

    a_terms = [e._terms for e in a.entries]
    dim2 = dim * dim
    # stride of index slot p within a's flat layout
    strides = [dim ** (rank - 1 - p) for p in range(rank)]

    out = []
    for base in range(dim**rank):
        idx = _flat_to_indices(base, dim, rank)
        base_terms = a_terms[base]
        for k in range(dim):
            acc = {}
            # partial-derivative term
            shift = 8 * k
            for key, coeff in base_terms.items():
                e = (key >> shift) & 0xFF
                if e:
                    acc[key - (1 << shift)] = coeff * e
            # one connection term per upper index
            for u in range(r):
                stride = strides[u]
                root = base - idx[u] * stride
                xu = idx[u]
                for alpha in range(dim):
                    coeff_terms = up[(xu * dim + alpha) * dim + k]
                    if coeff_terms:
                        _fma_terms(acc, coeff_terms, a_terms[root + alpha * stride], 1)
            # minus one connection term per lower index
            for l in range(r, rank):
                stride = strides[l]
                root = base - idx[l] * stride
                jl = idx[l]
                for alpha in range(dim):
                    coeff_terms = lo[(alpha * dim + jl) * dim + k]
                    if coeff_terms:
                        _fma_terms(acc, coeff_terms, a_terms[root + alpha * stride], -1)
            out.append(ScalarField(dim, _strip_zeros(acc)))
    return TensorField(dim, (r, s + 1), out)


def _as_kind(which) -> DerivKind:
    if isinstance(which, DerivKind):
        return which
    return KIND_BY_NUMBER[which]


def double_covariant_derivative(p, q, a: TensorField, L: ConnectionField) -> TensorField:
    """Second covariant derivative by composition: rule ``p`` first, then
    rule ``q`` applied to the valence-(r, s+1) result.  Rules may be given
    as DerivKind members or as the numbers 1..4."""
    return covariant_derivative(
        _as_kind(q), covariant_derivative(_as_kind(p), a, L), L
    )


# ---------------------------------------------------------------------------
# Linear relations among the five rules
# ---------------------------------------------------------------------------

# (check tag, left side, [(weight, kind), ...]); each holds entrywise for any
# tensor and any connection.
DERIVATIVE_RELATIONS = (
    ("eq:8", DerivKind.SYM, ((HALF, DerivKind.K1), (HALF, DerivKind.K2))),
    ("eq:9", DerivKind.SYM, ((HALF, DerivKind.K3), (HALF, DerivKind.K4))),
    ("eq:10", DerivKind.K1, ((2, DerivKind.SYM), (-1, DerivKind.K2))),
    ("eq:11", DerivKind.K1, ((-1, DerivKind.K2), (1, DerivKind.K3), (1, DerivKind.K4))),
    ("eq:12", DerivKind.K2, ((2, DerivKind.SYM), (-1, DerivKind.K1))),
    ("eq:13", DerivKind.K2, ((-1, DerivKind.K1), (1, DerivKind.K3), (1, DerivKind.K4))),
    ("eq:14", DerivKind.K3, ((2, DerivKind.SYM), (-1, DerivKind.K4))),
    ("eq:15", DerivKind.K3, ((1, DerivKind.K1), (1, DerivKind.K2), (-1, DerivKind.K4))),
    ("eq:16", DerivKind.K4, ((2, DerivKind.SYM), (-1, DerivKind.K3))),
    ("eq:17", DerivKind.K4, ((1, DerivKind.K1), (1, DerivKind.K2), (-1, DerivKind.K3))),
)


def verify_derivative_relations(L: ConnectionField, a: TensorField):
    """Residual of each linear relation among the five derivative rules.

    Returns a list of (tag, residual tensor); every residual is exactly zero
    for any connection and tensor field.
    """
    derivs = {kind: covariant_derivative(kind, a, L) for kind in ALL_KINDS}
    report = []
    for tag, lhs, combo in DERIVATIVE_RELATIONS:
        residual = derivs[lhs]
        for weight, kind in combo:
            residual = residual - derivs[kind].scale(weight)
        report.append((tag, residual))
    return report


def derivative_kind_rank(kinds) -> int:
    """Number of linearly independent rules among ``kinds``.

    Each rule is the component vector (1, sigma_up, sigma_lo): the partial
    and symmetric-connection summands are common to all rules, so
    independence is decided by the torsion-term signs alone.
    """
    kinds = list(kinds)
    if not kinds:
        raise ValueError("need at least one kind")
    if len(set(kinds)) != len(kinds):
        raise ValueError("duplicate kinds")
    rows = [[1, k.sigma_up, k.sigma_lo] for k in kinds]
    return matrix_rank(RationalMatrix(rows))


# The eight independent triples of rules, and the two dependent ones.
INDEPENDENT_TRIPLES = (
    ("b1", (DerivKind.K1, DerivKind.K2, DerivKind.K3)),
    ("b2", (DerivKind.K1, DerivKind.K2, DerivKind.K4)),
    ("b3", (DerivKind.K1, DerivKind.K3, DerivKind.K4)),
    ("b4", (DerivKind.K2, DerivKind.K3, DerivKind.K4)),
    ("b5", (DerivKind.SYM, DerivKind.K1, DerivKind.K3)),
    ("b6", (DerivKind.SYM, DerivKind.K1, DerivKind.K4)),
    ("b7", (DerivKind.SYM, DerivKind.K2, DerivKind.K3)),
    ("b8", (DerivKind.SYM, DerivKind.K2, DerivKind.K4)),
)
DEPENDENT_TRIPLES = (
    ("sym12", (DerivKind.SYM, DerivKind.K1, DerivKind.K2)),
    ("sym34", (DerivKind.SYM, DerivKind.K3, DerivKind.K4)),
)


# ---------------------------------------------------------------------------
# Explicit second-derivative formulas for rules 1..3
# ---------------------------------------------------------------------------
#
# Literal transcriptions, used as an oracle against the composition path.
# Each formula gives a^i_{j p|m q|n} for a valence-(1,1) tensor as
#     a^i_{j,mn}
#   + five single-connection terms against first partials of a
#   + a^A_j * (L..._,n + LL - LL)        three-term bracket
#   - a^i_A * (L..._,n - LL - LL)        three-term bracket
#   - a^A_B * (LL + LL)                  two-term bracket
# Connection slots are written with the symbols i j m n A B; A and B are
# summed.  A trailing symbol in a partial-term is the derivative coordinate.

_DD = {}

_DD[(1, 1)] = {
    "partials": (
        (-1, ("A", "j", "n"), ("i", "A"), "m"),
        (-1, ("A", "j", "m"), ("i", "A"), "n"),
        (-1, ("A", "m", "n"), ("i", "j"), "A"),
        (+1, ("i", "A", "n"), ("A", "j"), "m"),
        (+1, ("i", "A", "m"), ("A", "j"), "n"),
    ),
    "bracket_aj": (
        (+1, ("i", "A", "m"), None, "n"),
        (+1, ("B", "A", "m"), ("i", "B", "n"), None),
        (-1, ("i", "A", "B"), ("B", "m", "n"), None),
    ),
    "bracket_ai": (
        (+1, ("A", "j", "m"), None, "n"),
        (-1, ("A", "B", "m"), ("B", "j", "n"), None),
        (-1, ("A", "j", "B"), ("B", "m", "n"), None),
    ),
    "bracket_ab": (
        (+1, ("i", "A", "m"), ("B", "j", "n"), None),
        (+1, ("i", "A", "n"), ("B", "j", "m"), None),
    ),
}

_DD[(1, 2)] = {
    "partials": (
        (-1, ("A", "n", "j"), ("i", "A"), "m"),
        (-1, ("A", "j", "m"), ("i", "A"), "n"),
        (-1, ("A", "n", "m"), ("i", "j"), "A"),
        (+1, ("i", "n", "A"), ("A", "j"), "m"),
        (+1, ("i", "A", "m"), ("A", "j"), "n"),
    ),
    "bracket_aj": (
        (+1, ("i", "A", "m"), None, "n"),
        (+1, ("B", "A", "m"), ("i", "n", "B"), None),
        (-1, ("i", "A", "B"), ("B", "n", "m"), None),
    ),
    "bracket_ai": (
        (+1, ("A", "j", "m"), None, "n"),
        (-1, ("A", "B", "m"), ("B", "n", "j"), None),
        (-1, ("A", "j", "B"), ("B", "n", "m"), None),
    ),
    "bracket_ab": (
        (+1, ("i", "A", "m"), ("B", "n", "j"), None),
        (+1, ("i", "n", "A"), ("B", "j", "m"), None),
    ),
}

_DD[(1, 3)] = {
    "partials": (
        (-1, ("A", "n", "j"), ("i", "A"), "m"),
        (-1, ("A", "j", "m"), ("i", "A"), "n"),
        (-1, ("A", "n", "m"), ("i", "j"), "A"),
        (+1, ("i", "A", "n"), ("A", "j"), "m"),
        (+1, ("i", "A", "m"), ("A", "j"), "n"),
    ),
    "bracket_aj": (
        (+1, ("i", "A", "m"), None, "n"),
        (+1, ("B", "A", "m"), ("i", "B", "n"), None),
        (-1, ("i", "A", "B"), ("B", "n", "m"), None),
    ),
    "bracket_ai": (
        (+1, ("A", "j", "m"), None, "n"),
        (-1, ("A", "B", "m"), ("B", "n", "j"), None),
        (-1, ("A", "j", "B"), ("B", "n", "m"), None),
    ),
    "bracket_ab": (
        (+1, ("i", "A", "m"), ("B", "n", "j"), None),
        (+1, ("i", "A", "n"), ("B", "j", "m"), None),
    ),
}

_DD[(2, 1)] = {
    "partials": (
        (-1, ("A", "j", "n"), ("i", "A"), "m"),
        (-1, ("A", "m", "j"), ("i", "A"), "n"),
        (-1, ("A", "m", "n"), ("i", "j"), "A"),
        (+1, ("i", "A", "n"), ("A", "j"), "m"),
        (+1, ("i", "m", "A"), ("A", "j"), "n"),
    ),
    "bracket_aj": (
        (+1, ("i", "m", "A"), None, "n"),
        (+1, ("B", "m", "A"), ("i", "B", "n"), None),
        (-1, ("i", "B", "A"), ("B", "m", "n"), None),
    ),
    "bracket_ai": (
        (+1, ("A", "m", "j"), None, "n"),
        (-1, ("A", "m", "B"), ("B", "j", "n"), None),
        (-1, ("A", "B", "j"), ("B", "m", "n"), None),
    ),
    "bracket_ab": (
        (+1, ("i", "m", "A"), ("B", "j", "n"), None),
        (+1, ("i", "A", "n"), ("B", "m", "j"), None),
    ),
}

_DD[(2, 2)] = {
    "partials": (
        (-1, ("A", "n", "j"), ("i", "A"), "m"),
        (-1, ("A", "m", "j"), ("i", "A"), "n"),
        (-1, ("A", "n", "m"), ("i", "j"), "A"),
        (+1, ("i", "n", "A"), ("A", "j"), "m"),
        (+1, ("i", "m", "A"), ("A", "j"), "n"),
    ),
    "bracket_aj": (
        (+1, ("i", "m", "A"), None, "n"),
        (+1, ("B", "m", "A"), ("i", "n", "B"), None),
        (-1, ("i", "B", "A"), ("B", "n", "m"), None),
    ),
    "bracket_ai": (
        (+1, ("A", "m", "j"), None, "n"),
        (-1, ("A", "m", "B"), ("B", "n", "j"), None),
        (-1, ("A", "B", "j"), ("B", "n", "m"), None),
    ),
    "bracket_ab": (
        (+1, ("i", "m", "A"), ("B", "n", "j"), None),
        (+1, ("i", "n", "A"), ("B", "m", "j"), None),
    ),
}

_DD[(2, 3)] = {
    "partials": (
        (-1, ("A", "n", "j"), ("i", "A"), "m"),
        (-1, ("A", "m", "j"), ("i", "A"), "n"),
        (-1, ("A", "n", "m"), ("i", "j"), "A"),
        (+1, ("i", "A", "n"), ("A", "j"), "m"),
        (+1, ("i", "m", "A"), ("A", "j"), "n"),
    ),
    "bracket_aj": (
        (+1, ("i", "m", "A"), None, "n"),
        (+1, ("B", "m", "A"), ("i", "B", "n"), None),
        (-1, ("i", "B", "A"), ("B", "n", "m"), None),
    ),
    "bracket_ai": (
        (+1, ("A", "m", "j"), None, "n"),
        (-1, ("A", "m", "B"), ("B", "n", "j"), None),
        (-1, ("A", "B", "j"), ("B", "n", "m"), None),
    ),
    "bracket_ab": (
        (+1, ("i", "m", "A"), ("B", "n", "j"), None),
        (+1, ("i", "A", "n"), ("B", "m", "j"), None),
    ),
}

_DD[(3, 1)] = {
    "partials": (
        (-1, ("A", "j", "n"), ("i", "A"), "m"),
        (-1, ("A", "m", "j"), ("i", "A"), "n"),
        (-1, ("A", "m", "n"), ("i", "j"), "A"),
        (+1, ("i", "A", "n"), ("A", "j"), "m"),
        (+1, ("i", "A", "m"), ("A", "j"), "n"),
    ),
    "bracket_aj": (
        (+1, ("i", "A", "m"), None, "n"),
        (+1, ("B", "A", "m"), ("i", "B", "n"), None),
        (-1, ("i", "A", "B"), ("B", "m", "n"), None),
    ),
    "bracket_ai": (
        (+1, ("A", "m", "j"), None, "n"),
        (-1, ("A", "m", "B"), ("B", "j", "n"), None),
        (-1, ("A", "B", "j"), ("B", "m", "n"), None),
    ),
    "bracket_ab": (
        (+1, ("i", "A", "m"), ("B", "j", "n"), None),
        (+1, ("i", "A", "n"), ("B", "m", "j"), None),
    ),
}

_DD[(3, 2)] = {
    "partials": (
        (-1, ("A", "n", "j"), ("i", "A"), "m"),
        (-1, ("A", "m", "j"), ("i", "A"), "n"),
        (-1, ("A", "n", "m"), ("i", "j"), "A"),
        (+1, ("i", "n", "A"), ("A", "j"), "m"),
        (+1, ("i", "A", "m"), ("A", "j"), "n"),
    ),
    "bracket_aj": (
        (+1, ("i", "A", "m"), None, "n"),
        (+1, ("B", "A", "m"), ("i", "n", "B"), None),
        (-1, ("i", "A", "B"), ("B", "n", "m"), None),
    ),
    "bracket_ai": (
        (+1, ("A", "m", "j"), None, "n"),
        (-1, ("A", "m", "B"), ("B", "n", "j"), None),
        (-1, ("A", "B", "j"), ("B", "n", "m"), None),
    ),
    "bracket_ab": (
        (+1, ("i", "A", "m"), ("B", "n", "j"), None),
        (+1, ("i", "n", "A"), ("B", "m", "j"), None),
    ),
}

_DD[(3, 3)] = {
    "partials": (
        (-1, ("A", "n", "j"), ("i", "A"), "m"),
        (-1, ("A", "m", "j"), ("i", "A"), "n"),
        (-1, ("A", "n", "m"), ("i", "j"), "A"),
        (+1, ("i", "A", "n"), ("A", "j"), "m"),
        (+1, ("i", "A", "m"), ("A", "j"), "n"),
    ),
    "bracket_aj": (
        (+1, ("i", "A", "m"), None, "n"),
        (+1, ("B", "A", "m"), ("i", "B", "n"), None),
        (-1, ("i", "A", "B"), ("B", "n", "m"), None),
    ),
    "bracket_ai": (
        (+1, ("A", "m", "j"), None, "n"),
        (-1, ("A", "m", "B"), ("B", "n", "j"), None),
        (-1, ("A", "B", "j"), ("B", "n", "m"), None),
    ),
    "bracket_ab": (
        (+1, ("i", "A", "m"), ("B", "n", "j"), None),
        (+1, ("i", "A", "n"), ("B", "m", "j"), None),
    ),
}


def _l_entry(L_entries, dim, slots, env):
    x, y, z = (env[s] for s in slots)
    return L_entries[(x * dim + y) * dim + z]


def _bracket_tensor(L: ConnectionField, terms, sum_b: bool):
    """Pre-evaluate one bracket for all values of its free index symbols.

    For the a^A_j and a^i_A brackets the symbol B is an internal summation;
    for the a^A_B bracket both A and B are bound outside, so every symbol is
    free.  Returns (ordered free symbols, {flat index: merged term dict}).
    """
    dim = L.dim
    entries = [e._terms for e in L.coeffs.entries]
    free_syms = []
    for sign, l1, l2, deriv in terms:
        for s in l1 + (l2 or ()) + ((deriv,) if deriv else ()):
            if (s != "B" or not sum_b) and s not in free_syms:
                free_syms.append(s)
    free_syms = tuple(sorted(free_syms))

    table = {}
    for flat in range(dim ** len(free_syms)):
        env = dict(zip(free_syms, _flat_to_indices(flat, dim, len(free_syms))))
        acc = {}
        for sign, l1, l2, deriv in terms:
            if l2 is None:
                # single connection factor, differentiated
                f = ScalarField(dim, _l_entry(entries, dim, l1, env)).partial(env[deriv])
                _add_terms(acc, f._terms, sign)
            elif sum_b:
                for beta in range(dim):
                    env["B"] = beta
                    t1 = _l_entry(entries, dim, l1, env)
                    t2 = _l_entry(entries, dim, l2, env)
                    _fma_terms(acc, t1, t2, sign)
                del env["B"]
            else:
                t1 = _l_entry(entries, dim, l1, env)
                t2 = _l_entry(entries, dim, l2, env)
                _fma_terms(acc, t1, t2, sign)
        table[flat] = _strip_zeros(acc)
    return free_syms, table


def double_covariant_derivative_explicit(
    p: int, q: int, a: TensorField, L: ConnectionField
) -> TensorField:
    """Second covariant derivative of a valence-(1,1) tensor for rules 1..3,
    evaluated from the written-out formula rather than by composition."""
    if isinstance(p, DerivKind) or isinstance(q, DerivKind):
        numbers = {v: k for k, v in KIND_BY_NUMBER.items()}
        p = numbers.get(p, p) if isinstance(p, DerivKind) else p
        q = numbers.get(q, q) if isinstance(q, DerivKind) else q
    if (p, q) not in _DD:
        raise ValueError("explicit formulas cover rules 1..3 only")
    if a.valence != (1, 1):
        raise ValueError("explicit formulas are for valence (1, 1) tensors")
    if a.dim != L.dim:
        raise ValueError("dimension mismatch")
    dim = a.dim
    table = _DD[(p, q)]
    L_entries = [e._terms for e in L.coeffs.entries]
    a_terms = [e._terms for e in a.entries]

    # hoist the bracket contractions out of the entry loop
    brackets = {
        name: _bracket_tensor(L, table[name], sum_b=(name != "bracket_ab"))
        for name in ("bracket_aj", "bracket_ai", "bracket_ab")
    }

    def bracket_value(name, env):
        free_syms, merged = brackets[name]
        flat = 0
        for s in free_syms:
            flat = flat * dim + env[s]
        return merged[flat]

    out = []
    for i in range(dim):
        for j in range(dim):
            for m in range(dim):
                for n in range(dim):
                    env = {"i": i, "j": j, "m": m, "n": n}
                    acc = {}
                    # a^i_{j,mn}
                    f = ScalarField(dim, a_terms[i * dim + j]).partial(m).partial(n)
                    _add_terms(acc, f._terms)
                    # single-connection terms against first partials of a
                    for sign, lslots, aslots, dsym in table["partials"]:
                        for alpha in range(dim):
                            env["A"] = alpha
                            lt = _l_entry(L_entries, dim, lslots, env)
                            if not lt:
                                continue
                            au, al = (env[s] for s in aslots)
                            da = ScalarField(dim, a_terms[au * dim + al]).partial(env[dsym])
                            _fma_terms(acc, lt, da._terms, sign)
                    # + a^A_j (...)
                    for alpha in range(dim):
                        env["A"] = alpha
                        _fma_terms(acc, bracket_value("bracket_aj", env), a_terms[alpha * dim + j], 1)
                    # - a^i_A (...)
                    for alpha in range(dim):
                        env["A"] = alpha
                        _fma_terms(acc, bracket_value("bracket_ai", env), a_terms[i * dim + alpha], -1)
                    # - a^A_B (...)
                    for alpha in range(dim):
                        for beta in range(dim):
                            env["A"] = alpha
                            env["B"] = beta
                            _fma_terms(
                                acc,
                                bracket_value("bracket_ab", env),
                                a_terms[alpha * dim + beta],
                                -1,
                            )
                    out.append(ScalarField(dim, _strip_zeros(acc)))
    return TensorField(dim, (1, 3), out)

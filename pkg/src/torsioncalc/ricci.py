"""The Ricci-type identity family for connections with torsion.

For a valence-(1,1) field the antisymmetrised second covariant derivatives
built from rules 1..3 satisfy

    a p|m q|n - a r|n s|m  =  R-commutator  +  sum_k c_k * B_k

where the seventeen basis terms B_k collect torsion against first
derivatives, torsion derivatives, and torsion-quadratic contractions, and
every coefficient c_k lies in {-1, 0, 1}.  This module carries the catalogue
of seventeen independent members, evaluates the right side for arbitrary
coefficients, recovers coefficients for any of the 81 (p,q,r,s) combinations
by exact linear solving, and checks the equivalent mixed-rule and
partial-derivative (pseudotensor-revealing) forms of the family.

The mixed and expanded forms are implemented from the substitution rules
relating the derivative kinds, with every bracket correction carried at the
weight the substitution actually produces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    LinearSystem,
    RationalMatrix,
    ScalarField,
    TensorField,
    _add_terms,
    _fma_terms,
    _strip_zeros,
    matrix_rank,
)
from .connection import (
    KIND_BY_NUMBER,
    ConnectionField,
    DerivKind,
    covariant_derivative,
)
from .curvature import curvature_R
from .sampling import derive_rng, random_even_connection, random_tensor_field


class IdentityAmbiguityError(RuntimeError):
    """The solver's design matrix never reached full column rank."""


class IdentityUnsolvableError(RuntimeError):
    """No coefficient vector in the family reproduces the left side."""


@dataclass(frozen=True)
class IdentityCoefficients:
    """One member of the identity family: the 17-entry coefficient vector
    and the (p, q, r, s) combination it encodes."""

    c: tuple
    pqrs: tuple
    tag: str | None = None

    def __post_init__(self):
        if len(self.c) != 17:
            raise ValueError("coefficient vector must have 17 entries")
        if any(v not in (-1, 0, 1) for v in self.c):
            raise ValueError("coefficients must lie in {-1, 0, 1}")
        if len(self.pqrs) != 4 or any(x not in (1, 2, 3) for x in self.pqrs):
            raise ValueError("combination must be a 4-tuple over {1, 2, 3}")


@dataclass(frozen=True)
class MixWeights:
    """Row-stochastic weights d^l_k (5 rows, l = 1..3) mixing the three
    derivative rules inside the five single-derivative terms."""

    rows: tuple

    def __post_init__(self):
        if len(self.rows) != 5 or any(len(r) != 3 for r in self.rows):
            raise ValueError("weights must be a 5x3 matrix")
        for r in self.rows:
            if sum(Fraction(x) for x in r) != 1:
                raise ValueError("each weight row must sum to 1")

    @classmethod
    def pure(cls, l: int) -> "MixWeights":
        if l not in (1, 2, 3):
            raise ValueError("rule index must be 1, 2 or 3")
        row = tuple(1 if i == l - 1 else 0 for i in range(3))
        return cls((row,) * 5)

    @classmethod
    def uniform(cls) -> "MixWeights":
        third = Fraction(1, 3)
        return cls(((third, third, third),) * 5)

    @classmethod
    def random(cls, rng) -> "MixWeights":
        rows = []
        for _ in range(5):
            d1 = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            d2 = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            rows.append((d1, d2, 1 - d1 - d2))
        return cls(tuple(rows))

    def split_signs(self, k: int):
        """(d1-d2+d3, d1-d2-d3) for row k in 1..5; these weight the upper-
        and lower-index leftovers of the substitution."""
        d1, d2, d3 = (Fraction(x) for x in self.rows[k - 1])
        return d1 - d2 + d3, d1 - d2 - d3


# ---------------------------------------------------------------------------
# Catalogue: seventeen independent members
# ---------------------------------------------------------------------------

_CATALOGUE_DATA = (
    ((1, 1, 1, 1), (0, 0, -1, 0, 0, 1, -1, 1, -1, -1, 1, -1, 1, -1, -1, 0, 0)),
    ((1, 2, 1, 1), (0, 1, 0, -1, 0, 1, -1, -1, -1, 0, 1, -1, 1, 1, 0, -1, -1)),
    ((1, 3, 1, 1), (0, 1, 0, 0, 0, 1, -1, 1, -1, 0, 1, -1, 1, 1, 0, -1, 0)),
    ((2, 1, 1, 1), (1, 0, -1, 0, -1, -1, -1, -1, -1, 0, -1, -1, 1, 1, 0, -1, -1)),
    ((2, 2, 1, 1), (1, 1, 0, -1, -1, -1, -1, 1, -1, -1, -1, -1, 1, -1, -1, 0, 0)),
    ((2, 3, 1, 1), (1, 1, 0, 0, -1, -1, -1, -1, -1, -1, -1, -1, 1, -1, -1, 0, -1)),
    ((3, 1, 1, 1), (1, 0, -1, 0, 0, 1, -1, 1, -1, -1, -1, -1, 1, 1, 0, 0, -1)),
    ((3, 2, 1, 1), (1, 1, 0, -1, 0, 1, -1, -1, -1, 0, -1, -1, 1, -1, -1, -1, 0)),
    ((3, 3, 1, 1), (1, 1, 0, 0, 0, 1, -1, 1, -1, 0, -1, -1, 1, -1, -1, -1, -1)),
    ((1, 2, 1, 2), (-1, 1, 1, -1, 1, 1, -1, -1, 1, 1, 1, -1, -1, 1, 1, 0, 0)),
    ((1, 3, 1, 2), (-1, 1, 1, 0, 1, 1, -1, 1, 1, 1, 1, -1, -1, 1, 1, 0, 1)),
    ((1, 3, 1, 3), (-1, 1, 1, 0, 0, 1, -1, 1, -1, 1, 1, -1, -1, 1, 1, -1, 1)),
    ((2, 1, 2, 1), (1, -1, -1, 1, -1, -1, 1, -1, 1, 1, -1, 1, -1, 1, 1, 0, 0)),
    ((2, 2, 2, 2), (0, 0, 1, 0, 0, -1, 1, 1, -1, -1, -1, 1, 1, -1, -1, 0, 0)),
    ((2, 3, 2, 3), (0, 0, 1, 1, -1, -1, 1, -1, 1, -1, -1, 1, 1, -1, -1, 1, -1)),
    ((3, 1, 3, 1), (1, -1, -1, 0, 0, 1, -1, 1, -1, -1, -1, 1, -1, 1, 1, 1, -1)),
    ((3, 3, 3, 3), (0, 0, 1, 0, 0, 1, -1, 1, -1, 1, -1, 1, 1, -1, -1, 0, 0)),
)


def _tag(pqrs) -> str:
    p, q, r, s = pqrs
    return f"ric{p}{q}-{r}{s}"


_CATALOGUE = tuple(
    IdentityCoefficients(c, pqrs, _tag(pqrs)) for pqrs, c in _CATALOGUE_DATA
)
CATALOGUE_BY_PQRS = {ic.pqrs: ic for ic in _CATALOGUE}

ALL_COMBINATIONS = tuple(itertools.product((1, 2, 3), repeat=4))


def identity_catalogue():
    """The seventeen catalogued identity members, fixed order."""
    return list(_CATALOGUE)


def identity_row(coeffs: IdentityCoefficients):
    """Structural vector of one identity, both sides included.

    The first 18 slots mark which second-derivative difference stands on the
    left (one slot per ordered rule pair, separately for the plain and the
    index-swapped occurrence); then the R-commutator weight (always 1) and
    c_1..c_17.  A set of identities is linearly dependent exactly when a
    combination cancels on both sides, and because the right side is a linear
    function of the left one, that is decided by these rows.
    """
    p, q, r, s = coeffs.pqrs
    lhs = [0] * 18
    lhs[(p - 1) * 3 + (q - 1)] = 1
    lhs[9 + (r - 1) * 3 + (s - 1)] = -1
    return [*lhs, 1, *coeffs.c]


def catalogue_independence_rank() -> int:
    """Rank of the seventeen catalogue members as identities.

    The value is 16: one catalogue member is an exact combination of three
    others (its left side cancels against theirs), so the catalogue spans a
    16-dimensional space while the full 81-member family spans 17.
    """
    return matrix_rank(RationalMatrix([identity_row(ic) for ic in _CATALOGUE]))


# ---------------------------------------------------------------------------
# Workspace: per-(a, L) caches shared across combinations
# ---------------------------------------------------------------------------


class IdentityWorkspace:
    """All derived tensors of one (tensor, connection) instance.

    The 81 combinations reuse the same torsion products, curvature tensor
    and basis terms, so sweeps construct one workspace per instance and ask
    it for everything.
    """

    def __init__(self, a: TensorField, L: ConnectionField):
        if a.valence != (1, 1):
            raise ValueError("identity family is stated for valence (1, 1)")
        if a.dim != L.dim:
            raise ValueError("dimension mismatch")
        self.a = a
        self.L = L
        self.dim = a.dim
        self._cache = {}

    def _get(self, key, build):
        try:
            return self._cache[key]
        except KeyError:
            value = build()
            self._cache[key] = value
            return value

    # raw term-dict views ---------------------------------------------------

    def _a_terms(self):
        return self._get("a_terms", lambda: [e._terms for e in self.a.entries])

    def _tor_terms(self):
        return self._get(
            "tor_terms", lambda: [e._terms for e in self.L.torsion_half().entries]
        )

    def _sym_terms(self):
        return self._get(
            "sym_terms",
            lambda: [e._terms for e in self.L.symmetric_part().coeffs.entries],
        )

    # first and second derivatives ------------------------------------------

    def first_derivative(self, which) -> TensorField:
        """Covariant derivative of ``a``: rule 1..3 or any DerivKind."""
        kind = KIND_BY_NUMBER[which] if isinstance(which, int) else which
        return self._get(
            ("d1", kind), lambda: covariant_derivative(kind, self.a, self.L)
        )

    def grad_a(self) -> TensorField:
        return self._get("grad_a", self.a.partial_gradient)

    def dd(self, p: int, q: int) -> TensorField:
        """a p|m q|n by composition, cached per ordered pair."""

        def build():
            kq = KIND_BY_NUMBER[q]
            return covariant_derivative(kq, self.first_derivative(p), self.L)

        return self._get(("dd", p, q), build)

    def lhs(self, pqrs) -> TensorField:
        """a p|m q|n - a r|n s|m (the second pair evaluated with m, n swapped)."""
        p, q, r, s = pqrs
        return self.dd(p, q) - self.dd(r, s).swap_last_lower()

    # curvature and torsion blocks -------------------------------------------

    def curvature(self) -> TensorField:
        return self._get("R", lambda: curvature_R(self.L.symmetric_part()))

    def dtor(self) -> TensorField:
        """Torsion half differentiated with the symmetric rule; (1,3)."""
        return self._get(
            "dtor",
            lambda: covariant_derivative(DerivKind.SYM, self.L.torsion_half(), self.L),
        )

    def _contract_upper(self, W: TensorField) -> TensorField:
        """Sum_alpha a^alpha_j W^i_{alpha m n} for a (1,3) block W."""
        dim = self.dim
        a_t = self._a_terms()
        w_t = [e._terms for e in W.entries]
        n3, n2 = dim**3, dim**2
        out = []
        for i in range(dim):
            for j in range(dim):
                for m in range(dim):
                    for n in range(dim):
                        acc = {}
                        base = i * n3 + m * dim + n
                        for alpha in range(dim):
                            _fma_terms(acc, a_t[alpha * dim + j], w_t[base + alpha * n2], 1)
                        out.append(ScalarField(dim, _strip_zeros(acc)))
        return TensorField(dim, (1, 3), out)

    def _contract_lower(self, V: TensorField) -> TensorField:
        """Sum_alpha a^i_alpha V^alpha_{j m n} for a (1,3) block V."""
        dim = self.dim
        a_t = self._a_terms()
        v_t = [e._terms for e in V.entries]
        n3 = dim**3
        out = []
        for i in range(dim):
            for j in range(dim):
                for m in range(dim):
                    for n in range(dim):
                        acc = {}
                        base = j * dim**2 + m * dim + n
                        for alpha in range(dim):
                            _fma_terms(acc, a_t[i * dim + alpha], v_t[alpha * n3 + base], 1)
                        out.append(ScalarField(dim, _strip_zeros(acc)))
        return TensorField(dim, (1, 3), out)

    def r_commutator(self) -> TensorField:
        """a^alpha_j R^i_{alpha mn} - a^i_alpha R^alpha_{jmn}."""

        def build():
            R = self.curvature()
            return self._contract_upper(R) - self._contract_lower(R)

        return self._get("rcomm", build)

    def _pair_tensor(self, key, f1, s1, f2, s2):
        """Sum_beta F1[slots1] * F2[slots2] as a (1,3)-shaped block; slots
        are 3-tuples over the symbols x y m n B with B summed."""

        def build():
            dim = self.dim
            out = []
            for x in range(dim):
                for y in range(dim):
                    for m in range(dim):
                        for n in range(dim):
                            env = {"x": x, "y": y, "m": m, "n": n}
                            acc = {}
                            for beta in range(dim):
                                env["B"] = beta
                                i1, j1, k1 = (env[s] for s in s1)
                                i2, j2, k2 = (env[s] for s in s2)
                                _fma_terms(
                                    acc,
                                    f1[(i1 * dim + j1) * dim + k1],
                                    f2[(i2 * dim + j2) * dim + k2],
                                    1,
                                )
                            out.append(ScalarField(dim, _strip_zeros(acc)))
            return TensorField(dim, (1, 3), out)

        return self._get(key, build)

    # torsion-quadratic and mixed blocks, all (1,3)-shaped with layout
    # [x][y][m][n]; x is the block's upper index, y the contracted-outside one
    def q1(self):
        tor = self._tor_terms()
        return self._pair_tensor("q1", tor, ("B", "y", "m"), tor, ("x", "B", "n"))

    def q2(self):
        tor = self._tor_terms()
        return self._pair_tensor("q2", tor, ("x", "y", "B"), tor, ("B", "m", "n"))

    def q3(self):
        tor = self._tor_terms()
        return self._pair_tensor("q3", tor, ("x", "B", "n"), tor, ("B", "y", "m"))

    def q4(self):
        # same contraction pattern as q2 up to index naming
        return self.q2()

    def g3(self):
        sym, tor = self._sym_terms(), self._tor_terms()
        return self._pair_tensor("g3", sym, ("x", "y", "B"), tor, ("B", "m", "n"))

    def g4(self):
        sym, tor = self._sym_terms(), self._tor_terms()
        return self._pair_tensor("g4", tor, ("x", "B", "n"), sym, ("B", "y", "m"))

    def h1(self):
        sym, tor = self._sym_terms(), self._tor_terms()
        return self._pair_tensor("h1", sym, ("x", "B", "n"), tor, ("B", "y", "m"))

    def h3(self):
        # same contraction pattern as g3 up to index naming
        return self.g3()

    def _double_contraction(self, key, f1, f2):
        """Sum_{alpha,beta} a^alpha_beta F1[i alpha m] F2[beta j n]."""

        def build():
            dim = self.dim
            a_t = self._a_terms()
            out = []
            for i in range(dim):
                for j in range(dim):
                    for m in range(dim):
                        for n in range(dim):
                            acc = {}
                            for alpha in range(dim):
                                t1 = f1[(i * dim + alpha) * dim + m]
                                if not t1:
                                    continue
                                for beta in range(dim):
                                    t2 = f2[(beta * dim + j) * dim + n]
                                    a_e = a_t[alpha * dim + beta]
                                    if not t2 or not a_e:
                                        continue
                                    prod = {}
                                    _fma_terms(prod, t1, t2, 1)
                                    _fma_terms(acc, prod, a_e, 1)
                            out.append(ScalarField(dim, _strip_zeros(acc)))
            return TensorField(dim, (1, 3), out)

        return self._get(key, build)

    def s_tor_tor(self):
        tor = self._tor_terms()
        return self._double_contraction("s_tt", tor, tor)

    def m_sym_tor(self):
        # sym[i][alpha][n] tor[beta][j][m]: realised as the (m,n) swap of the
        # slot-m/slot-n layout used by _double_contraction
        sym, tor = self._sym_terms(), self._tor_terms()
        return self._double_contraction("m_st", sym, tor).swap_last_lower()

    def m_tor_sym(self):
        sym, tor = self._sym_terms(), self._tor_terms()
        return self._double_contraction("m_ts", tor, sym).swap_last_lower()

    # single-derivative terms -------------------------------------------------

    def derivative_term(self, k: int, which) -> TensorField:
        """Torsion-against-derivative pattern k in 1..5 (no leading factor 2)
        applied to a derivative of ``a``: a rule number or DerivKind, or
        "partial" for the plain partial gradient."""
        key = ("dterm", k, which)

        def build():
            X = self.grad_a() if which == "partial" else self.first_derivative(which)
            return self._derivative_term_raw(k, X)

        return self._get(key, build)

    def _derivative_term_raw(self, k: int, X: TensorField) -> TensorField:
        dim = self.dim
        tor = self._tor_terms()
        x_t = [e._terms for e in X.entries]
        n2 = dim * dim
        out = []
        for i in range(dim):
            for j in range(dim):
                for m in range(dim):
                    for n in range(dim):
                        acc = {}
                        for al in range(dim):
                            if k == 1:
                                t = tor[(al * dim + j) * dim + m]
                                xe = x_t[i * n2 + al * dim + n]
                            elif k == 2:
                                t = tor[(al * dim + j) * dim + n]
                                xe = x_t[i * n2 + al * dim + m]
                            elif k == 3:
                                t = tor[(al * dim + m) * dim + n]
                                xe = x_t[i * n2 + j * dim + al]
                            elif k == 4:
                                t = tor[(i * dim + al) * dim + n]
                                xe = x_t[al * n2 + j * dim + m]
                            else:
                                t = tor[(i * dim + al) * dim + m]
                                xe = x_t[al * n2 + j * dim + n]
                            _fma_terms(acc, t, xe, 1)
                        out.append(ScalarField(dim, _strip_zeros(acc)))
        return TensorField(dim, (1, 3), out)

    # basis and right sides ----------------------------------------------------

    def basis(self, k: int) -> TensorField:
        """Basis term k in 1..17 (the R-commutator is not part of the basis)."""

        def build():
            if 1 <= k <= 5:
                return self.derivative_term(k, DerivKind.SYM).scale(2)
            if k == 6:
                return self._contract_upper(self.dtor())
            if k == 7:
                return self._contract_upper(self.dtor().swap_last_lower())
            if k == 8:
                return self._contract_upper(self.q1())
            if k == 9:
                return self._contract_upper(self.q1().swap_last_lower())
            if k == 10:
                return self._contract_upper(self.q2()).scale(2)
            if k == 11:
                return -self._contract_lower(self.dtor())
            if k == 12:
                return -self._contract_lower(self.dtor().swap_last_lower())
            if k == 13:
                return -self._contract_lower(self.q3())
            if k == 14:
                return -self._contract_lower(self.q3().swap_last_lower())
            if k == 15:
                return self._contract_lower(self.q4()).scale(-2)
            if k == 16:
                return self.s_tor_tor().scale(-2)
            if k == 17:
                return self.s_tor_tor().swap_last_lower().scale(-2)
            raise ValueError("basis index must lie in 1..17")

        return self._get(("basis", k), build)

    def rhs(self, coeffs: IdentityCoefficients) -> TensorField:
        """Right side of the family identity for one coefficient vector."""
        total = self.r_commutator()
        for k, ck in enumerate(coeffs.c, start=1):
            if ck == 1:
                total = total + self.basis(k)
            elif ck == -1:
                total = total - self.basis(k)
            elif ck:
                total = total + self.basis(k).scale(ck)
        return total

    def residual(self, coeffs: IdentityCoefficients) -> TensorField:
        return self.lhs(coeffs.pqrs) - self.rhs(coeffs)

    def _contracted(self, name: str) -> TensorField:
        """Cached a-contractions of the cross blocks used by the expanded
        form, oriented so each enters the right side with weight +1."""

        builders = {
            "g3": lambda: self._contract_upper(self.g3()),
            "g4": lambda: self._contract_upper(self.g4()),
            "g4s": lambda: self._contract_upper(self.g4().swap_last_lower()),
            "h1": lambda: -self._contract_lower(self.h1()),
            "h1s": lambda: -self._contract_lower(self.h1().swap_last_lower()),
            "h3": lambda: -self._contract_lower(self.h3()),
        }
        return self._get(("contracted", name), builders[name])

    def rhs_expanded(self, coeffs: IdentityCoefficients) -> TensorField:
        """The pseudotensor-revealing form: first derivatives replaced by
        plain partials, with the induced symmetric-part cross terms carried
        inside the brackets.  Agrees exactly with :meth:`rhs`."""
        c = (None,) + coeffs.c  # 1-based
        pieces = [(1, self.r_commutator())]
        for k in range(1, 6):
            pieces.append((2 * c[k], self.derivative_term(k, "partial")))
        for j in range(6, 18):
            pieces.append((c[j], self.basis(j)))
        pieces += [
            (2 * c[3], self._contracted("g3")),
            (2 * c[4], self._contracted("g4")),
            (2 * c[5], self._contracted("g4s")),
            (2 * c[1], self._contracted("h1")),
            (2 * c[2], self._contracted("h1s")),
            (2 * c[3], self._contracted("h3")),
            (2 * c[1], self.m_sym_tor()),
            (2 * c[2], self.m_sym_tor().swap_last_lower()),
            (-2 * c[4], self.m_tor_sym()),
            (-2 * c[5], self.m_tor_sym().swap_last_lower()),
        ]
        return _combine(self.dim, *pieces)

    def rhs_mixed(self, coeffs: IdentityCoefficients, weights: MixWeights) -> TensorField:
        """The family with the five derivative terms written as rule-1/2/3
        mixtures; bracket coefficients pick up the substitution leftovers.

        Expressed against the cached basis: pattern k of the torsion-quadratic
        brackets absorbs -2 c_k times the substitution sign combinations."""
        c = (None,) + coeffs.c
        xu = [None] + [weights.split_signs(k)[0] for k in range(1, 6)]
        xl = [None] + [weights.split_signs(k)[1] for k in range(1, 6)]

        pieces = [(1, self.r_commutator())]
        for k in range(1, 6):
            if not c[k]:
                continue
            for l in (1, 2, 3):
                w = Fraction(weights.rows[k - 1][l - 1])
                if w:
                    pieces.append((2 * c[k] * w, self.derivative_term(k, l)))
        pieces += [
            (c[6], self.basis(6)),
            (c[7], self.basis(7)),
            (c[8] - 2 * c[4] * xu[4], self.basis(8)),
            (c[9] - 2 * c[5] * xu[5], self.basis(9)),
            (c[10] - c[3] * xu[3], self.basis(10)),
            (c[11], self.basis(11)),
            (c[12], self.basis(12)),
            (c[13] - 2 * c[1] * xl[1], self.basis(13)),
            (c[14] - 2 * c[2] * xl[2], self.basis(14)),
            (c[15] - c[3] * xl[3], self.basis(15)),
            (c[16] + c[2] * xu[2] - c[5] * xl[5], self.basis(16)),
            (c[17] + c[1] * xu[1] - c[4] * xl[4], self.basis(17)),
        ]
        return _combine(self.dim, *pieces)


def _combine(dim, *weighted):
    """Linear combination of (1,3) tensors in one accumulation pass."""
    live = [(w, t) for w, t in weighted if w]
    count = dim**4
    out = []
    for e in range(count):
        acc = {}
        for weight, tensor in live:
            _add_terms(acc, tensor.entries[e]._terms, weight)
        out.append(ScalarField(dim, _strip_zeros(acc)))
    return TensorField(dim, (1, 3), out)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def evaluate_identity_rhs(
    coeffs: IdentityCoefficients, a: TensorField, L: ConnectionField
) -> TensorField:
    return IdentityWorkspace(a, L).rhs(coeffs)


def verify_identity(pqrs, a: TensorField, L: ConnectionField) -> TensorField:
    """Residual (left minus right side) for a catalogued combination."""
    pqrs = tuple(pqrs)
    if pqrs not in CATALOGUE_BY_PQRS:
        raise ValueError(
            f"{pqrs} is not catalogued; use solve_identity_coefficients for it"
        )
    return IdentityWorkspace(a, L).residual(CATALOGUE_BY_PQRS[pqrs])


def verify_mixed_family(
    pqrs, weights: MixWeights, a: TensorField, L: ConnectionField
) -> TensorField:
    """Residual of the mixed-rule form for a catalogued combination."""
    pqrs = tuple(pqrs)
    if pqrs not in CATALOGUE_BY_PQRS:
        raise ValueError("mixed-family verification covers catalogued combinations")
    ws = IdentityWorkspace(a, L)
    return ws.lhs(pqrs) - ws.rhs_mixed(CATALOGUE_BY_PQRS[pqrs], weights)


def verify_expanded_identity(pqrs, a: TensorField, L: ConnectionField) -> TensorField:
    """Difference between the partial-derivative (expanded) form and the
    covariant form of the right side; exactly zero when both are correct."""
    pqrs = tuple(pqrs)
    if pqrs not in CATALOGUE_BY_PQRS:
        raise ValueError("expanded-form verification covers catalogued combinations")
    ws = IdentityWorkspace(a, L)
    coeffs = CATALOGUE_BY_PQRS[pqrs]
    return ws.rhs_expanded(coeffs) - ws.rhs(coeffs)


# ---------------------------------------------------------------------------
# Coefficient solving
# ---------------------------------------------------------------------------


def _instance_workspace(seed: int, label: str, dim: int, degree: int) -> IdentityWorkspace:
    rng = derive_rng(seed, label)
    L = random_even_connection(rng, dim, degree)
    a = random_tensor_field(rng, dim, (1, 1), degree)
    return IdentityWorkspace(a, L)


def _feed_rows(system: LinearSystem, ws: IdentityWorkspace, combos) -> None:
    """Stack structural equations (one per tensor entry and monomial) until
    the design matrix has full column rank."""
    basis_terms = [[e._terms for e in ws.basis(k).entries] for k in range(1, 18)]
    targets = []
    for combo in combos:
        t = ws.lhs(combo) - ws.r_commutator()
        targets.append([e._terms for e in t.entries])
    n_entries = ws.dim ** 4
    for e in range(n_entries):
        keys = set()
        for bt in basis_terms:
            keys.update(bt[e])
        for tg in targets:
            keys.update(tg[e])
        for key in sorted(keys):
            row = [bt[e].get(key, 0) for bt in basis_terms]
            rhs = [tg[e].get(key, 0) for tg in targets]
            system.add_row(row, rhs)
        if system.rank == 17:
            return


def _solve_combos(combos, seed, dims, degree, verify_dims):
    system = LinearSystem(17, nrhs=len(combos))
    for t, dim in enumerate(dims):
        ws = _instance_workspace(seed, f"solve:{t}:{dim}", dim, degree)
        _feed_rows(system, ws, combos)
        if system.rank == 17:
            break
    if system.rank < 17:
        raise IdentityAmbiguityError(
            f"design matrix rank {system.rank} < 17 after {len(dims)} instances"
        )

    solutions = {}
    for idx, combo in enumerate(combos):
        try:
            vec = system.solve(idx)
        except ValueError as exc:
            raise IdentityUnsolvableError(f"{combo}: {exc}") from exc
        ints = []
        for v in vec:
            if v.denominator != 1 or v not in (-1, 0, 1):
                raise IdentityUnsolvableError(
                    f"{combo}: solved coefficient {v} falls outside {{-1, 0, 1}}"
                )
            ints.append(int(v))
        solutions[combo] = IdentityCoefficients(
            tuple(ints), combo, _tag(combo) if combo in CATALOGUE_BY_PQRS else None
        )

    for t, dim in enumerate(verify_dims):
        ws = _instance_workspace(seed, f"check:{t}:{dim}", dim, degree)
        for combo, ic in solutions.items():
            if ws.lhs(combo) != ws.rhs(ic):
                raise IdentityUnsolvableError(
                    f"{combo}: solved coefficients fail on a fresh instance"
                )
    return solutions


def solve_identity_coefficients(
    pqrs, seed: int = 20260809, dims=(3, 4), degree: int = 2, verify_dims=(3,)
) -> IdentityCoefficients:
    """Recover the coefficient vector of one (p, q, r, s) combination.

    Sets up the exact linear system whose unknowns are the seventeen basis
    weights and whose equations equate polynomial coefficients of the left
    side (minus the R-commutator) with the basis combination, instance by
    instance, then confirms the solution on fresh instances.
    """
    pqrs = tuple(pqrs)
    if any(x not in (1, 2, 3) for x in pqrs) or len(pqrs) != 4:
        raise ValueError("combination must be a 4-tuple over {1, 2, 3}")
    return _solve_combos([pqrs], seed, dims, degree, verify_dims)[pqrs]


def solve_all_identities(
    seed: int = 20260809, dims=(3, 4), degree: int = 2, verify_dims=(3, 4)
):
    """Solve every one of the 81 combinations; returns {pqrs: coefficients}."""
    return _solve_combos(list(ALL_COMBINATIONS), seed, dims, degree, verify_dims)


def solved_span_rank(solutions) -> int:
    """Dimension of the span of solved identities (17 for the full sweep)."""
    return matrix_rank(RationalMatrix([identity_row(ic) for ic in solutions.values()]))

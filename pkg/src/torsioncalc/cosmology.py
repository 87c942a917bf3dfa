"""The four-dimensional cosmology example: a block metric built from five
functions of time, its torsion, the scalar-curvature family, the matter
Lagrangian it induces, and the resulting energy-momentum tensors.

The metric is

        [ s1(t)   0      0      0   ]
        [   0   s2(t)   n(t)    0   ]
        [   0  -n(t)   s3(t)    0   ]
        [   0     0      0    s4(t) ]

with t the first coordinate.  The symmetric part is diagonal, so inverse
components are exact rational functions 1/s_i and the whole pipeline stays in
the rational-function field; the only floating-point step in the package is
the quadrature that recovers n from the matter Lagrangian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import ScalarField, TensorField
from .ratfunc import Poly, RationalFunction, RF_ZERO, RF_ONE

DIM = 4
HALF = Fraction(1, 2)


def _parse_rational(text) -> Fraction:
    if isinstance(text, str):
        return Fraction(text)
    return Fraction(text)


def _parse_poly(coeffs) -> Poly:
    return Poly(tuple(_parse_rational(c) for c in coeffs))


@dataclass(frozen=True)
class CosmologyMetric:
    """The five defining polynomials and the family parameter v' - w."""

    s: tuple
    n: Poly
    vprime_minus_w: Fraction

    def __post_init__(self):
        if len(self.s) != 4:
            raise ValueError("need exactly four diagonal polynomials")
        if any(p.is_zero() for p in self.s):
            raise ValueError("diagonal entries must not be identically zero")

    @classmethod
    def from_coefficients(cls, s_lists, n_list, vprime_minus_w) -> "CosmologyMetric":
        """Coefficient lists are ascending in t; entries may be 'p/q' strings."""
        if len(s_lists) != 4:
            raise ValueError("need exactly four diagonal coefficient lists")
        return cls(
            tuple(_parse_poly(c) for c in s_lists),
            _parse_poly(n_list),
            _parse_rational(vprime_minus_w),
        )

    def metric_rows(self):
        """The 4x4 matrix of polynomials."""
        z = Poly()
        s1, s2, s3, s4 = self.s
        return (
            (s1, z, z, z),
            (z, s2, self.n, z),
            (z, -self.n, s3, z),
            (z, z, z, s4),
        )

    def metric_field(self) -> TensorField:
        """The metric as a polynomial tensor field over 4 coordinates, every
        entry depending on the first coordinate only."""
        entries = [_poly_to_field(p) for row in self.metric_rows() for p in row]
        return TensorField(DIM, (0, 2), entries)


def _poly_to_field(p: Poly) -> ScalarField:
    return ScalarField.from_terms(
        {(k, 0, 0, 0): c for k, c in enumerate(p.coeffs)}, DIM
    )


def _rf(p) -> RationalFunction:
    return RationalFunction.from_value(p)


def inverse_diagonal(m: CosmologyMetric):
    """Exact inverse symmetric metric components 1/s_i."""
    return tuple(RF_ONE / _rf(p) for p in m.s)


def antisym_christoffel_table(m: CosmologyMetric) -> TensorField:
    """Lowered antisymmetric connection components as polynomial fields.

    Only six entries are nonzero, all equal to +-(1/2) n'(t): with 0-based
    indices (a, j, k), entry (1,2,0) carries -n'/2 and the pattern follows by
    the antisymmetries of the construction.
    """
    dn = _poly_to_field(m.n.derivative())
    z = ScalarField(DIM)
    half_dn = dn.scale(HALF)

    def entry(a, j, k):
        # 1/2 (h_{ja,k} - h_{jk,a} + h_{ak,j}) for h the antisymmetric part,
        # whose only nonzero entries are h_{12} = -h_{21} = n (0-based)
        sign = {
            (1, 2, 0): -1,
            (1, 0, 2): 1,
            (2, 0, 1): -1,
            (2, 1, 0): 1,
            (0, 1, 2): -1,
            (0, 2, 1): 1,
        }.get((a, j, k))
        if sign is None:
            return z
        return half_dn if sign > 0 else -half_dn

    # the closed form above matches the generic formula; tests cross-check it
    return TensorField.build(DIM, (0, 3), entry)


def antisym_christoffel_generic(m: CosmologyMetric) -> TensorField:
    """Same table computed from the generic lowered-derivative formula."""
    from .metrics import christoffel_first_kind_antisym

    return christoffel_first_kind_antisym(m.metric_field())


# ---------------------------------------------------------------------------
# Rational-function geometry of the symmetric (diagonal) part
# ---------------------------------------------------------------------------


def levi_civita_connection(m: CosmologyMetric):
    """G^i_{jk} of the diagonal symmetric part, as rational functions."""
    s = [_rf(p) for p in m.s]
    ds = [_rf(p.derivative()) for p in m.s]
    G = [[[RF_ZERO] * DIM for _ in range(DIM)] for _ in range(DIM)]
    # only t-derivatives exist: G^0_{jj} pattern plus mixed G^j_{0j}
    for i in range(DIM):
        # G^i_{i0} = G^i_{0i} = s_i' / (2 s_i)
        G[i][i][0] = G[i][0][i] = ds[i] / (2 * s[i])
    for j in range(1, DIM):
        # G^0_{jj} = -(-s_j)' ... = -? in signature-free form: + s_j'/ (2 s_0) with a minus from -g_{jj,0}
        G[0][j][j] = -ds[j] / (2 * s[0])
    G[0][0][0] = ds[0] / (2 * s[0])
    return G


def curvature_tensor_rf(m: CosmologyMetric):
    """R^i_{jmn} of the symmetric part: derivative-last convention
    R^i_{jmn} = d_n G^i_{jm} - d_m G^i_{jn} + G^a_{jm} G^i_{an} - G^a_{jn} G^i_{am}."""
    G = levi_civita_connection(m)

    def d(rf, coord):
        return rf.derivative() if coord == 0 else RF_ZERO

    R = [[[[RF_ZERO] * DIM for _ in range(DIM)] for _ in range(DIM)] for _ in range(DIM)]
    for i in range(DIM):
        for j in range(DIM):
            for mm in range(DIM):
                for nn in range(DIM):
                    total = d(G[i][j][mm], nn) - d(G[i][j][nn], mm)
                    for a in range(DIM):
                        total = total + G[a][j][mm] * G[i][a][nn] - G[a][j][nn] * G[i][a][mm]
                    R[i][j][mm][nn] = total
    return R


def scalar_curvature(m: CosmologyMetric) -> RationalFunction:
    """R = g^{ab} R^c_{abc} for the diagonal symmetric part."""
    R = curvature_tensor_rf(m)
    inv = inverse_diagonal(m)
    total = RF_ZERO
    for a in range(DIM):
        for c in range(DIM):
            total = total + inv[a] * R[c][a][a][c]
    return total


def torsion_scalar(m: CosmologyMetric) -> RationalFunction:
    """Triple inverse-metric contraction of two lowered antisymmetric
    connection components (the scalar multiplying v' - w)."""
    inv = inverse_diagonal(m)
    dn = _rf(m.n.derivative())
    half = Fraction(1, 2)
    total = RF_ZERO
    for (a, c, d_), sign in (
        ((1, 2, 0), -1), ((1, 0, 2), 1), ((2, 0, 1), -1),
        ((2, 1, 0), 1), ((0, 1, 2), -1), ((0, 2, 1), 1),
    ):
        v = dn * (half if sign > 0 else -half)
        # diagonal inverses force both factors onto the same index triple
        total = total + inv[a] * inv[c] * inv[d_] * v * v
    return total


def scalar_curvature_family(m: CosmologyMetric) -> RationalFunction:
    """R plus (v' - w) times the torsion scalar; one member per parameter."""
    return scalar_curvature(m) + torsion_scalar(m) * m.vprime_minus_w


def matter_lagrangian_paths(m: CosmologyMetric):
    """(contraction route, closed-form route); both are equal.

    Closed form: (3/2) (v'-w) n'(t)^2 / (s1 s2 s3).
    """
    via_contraction = torsion_scalar(m) * m.vprime_minus_w
    dn = _rf(m.n.derivative())
    s1, s2, s3 = (_rf(p) for p in m.s[:3])
    closed = (dn * dn / (s1 * s2 * s3)) * (Fraction(3, 2) * m.vprime_minus_w)
    return via_contraction, closed


def matter_lagrangian(m: CosmologyMetric) -> RationalFunction:
    via_contraction, closed = matter_lagrangian_paths(m)
    if via_contraction != closed:
        raise AssertionError("matter-Lagrangian routes disagree")
    return closed


# ---------------------------------------------------------------------------
# Energy-momentum family
# ---------------------------------------------------------------------------


def _lagrangian_in_inverse_components(m: CosmologyMetric) -> ScalarField:
    """The matter Lagrangian as a polynomial in (t, y1, y2, y3, y4) with
    y_i standing for the inverse diagonal components 1/s_i.

    L = (3/2)(v'-w) n'(t)^2 y1 y2 y3: polynomial once the inverses are formal
    variables, so the metric variation becomes an exact partial derivative.
    """
    dn_sq = m.n.derivative() * m.n.derivative()
    scale = Fraction(3, 2) * m.vprime_minus_w
    terms = {}
    for k, c in enumerate(dn_sq.coeffs):
        if c:
            terms[(k, 1, 1, 1, 0)] = scale * c
    return ScalarField.from_terms(terms, 5) if terms else ScalarField(5)


def _substitute_inverses(expr: ScalarField, m: CosmologyMetric) -> RationalFunction:
    """Evaluate a polynomial in (t, y1..y4) at y_i = 1/s_i(t)."""
    total = RF_ZERO
    for exps, coeff in expr.terms().items():
        t_power = Poly(tuple([0] * exps[0] + [1]))
        piece = RationalFunction.from_value(t_power) * coeff
        for i in range(4):
            for _ in range(exps[i + 1]):
                piece = piece / _rf(m.s[i])
        total = total + piece
    return total


def energy_momentum(m: CosmologyMetric):
    """T_ij = -2 dL/d(g^ij) + g_ij L against the symmetric metric part.

    The variation is the algebraic partial derivative in the inverse diagonal
    components (the Lagrangian contains no metric derivatives), evaluated
    back at y_i = 1/s_i.  Result: a diagonal 4x4 matrix of rational functions.
    """
    expr = _lagrangian_in_inverse_components(m)
    lm = _substitute_inverses(expr, m)
    out = [[RF_ZERO] * 4 for _ in range(4)]
    for i in range(4):
        d_expr = expr.partial(i + 1)  # derivative in y_{i+1}
        d_val = _substitute_inverses(d_expr, m)
        out[i][i] = d_val * (-2) + _rf(m.s[i]) * lm
    return out


# ---------------------------------------------------------------------------
# Recovering the off-diagonal function from the Lagrangian
# ---------------------------------------------------------------------------


def recover_n(m: CosmologyMetric, t0, t1, steps: int):
    """Quadrature inversion of the matter Lagrangian:

        n_{1,2}(t) = +- 2/(3(v'-w)) * integral sqrt(L * s1 s2 s3) dt

    Composite Simpson with ``steps`` panels on [t0, t1]; returns (ts, n1, n2)
    as float lists with n2 = -n1.  The radicand is evaluated exactly and must
    be non-negative on the grid; v' - w must be positive.
    """
    if steps <= 0:
        raise ValueError("steps must be positive")
    vw = Fraction(m.vprime_minus_w)
    if vw <= 0:
        raise ValueError("v' - w must be positive to recover n")
    t0, t1 = Fraction(t0), Fraction(t1)
    lm = matter_lagrangian(m)
    s1, s2, s3 = (_rf(p) for p in m.s[:3])
    radicand = lm * s1 * s2 * s3
    prefactor = 2 / (3 * float(vw))

    def integrand(t):
        value = radicand.evaluate(t)
        if value < 0:
            raise ValueError(f"negative radicand at t = {t}")
        return math.sqrt(float(value)) * prefactor

    h = (t1 - t0) / steps
    ts = [float(t0 + k * h) for k in range(steps + 1)]
    n1 = [0.0]
    acc = 0.0
    for k in range(steps):
        a = t0 + k * h
        b = a + h
        mid = (a + b) / 2
        acc += float(h) / 6.0 * (integrand(a) + 4.0 * integrand(mid) + integrand(b))
        n1.append(acc)
    n2 = [-x for x in n1]
    return ts, n1, n2


# ---------------------------------------------------------------------------
# Full generalized connection and the metric-compatibility residual
# ---------------------------------------------------------------------------


def christoffel_full_rf(m: CosmologyMetric):
    """Generalized connection of the full non-symmetric metric, as rational
    functions: G^i_{jk} = 1/2 g^{ia} (g_{ja,k} - g_{jk,a} + g_{ak,j})."""
    rows = [[_rf(p) for p in row] for row in m.metric_rows()]
    inv = inverse_diagonal(m)

    def d(rf, coord):
        return rf.derivative() if coord == 0 else RF_ZERO

    G = [[[RF_ZERO] * DIM for _ in range(DIM)] for _ in range(DIM)]
    for i in range(DIM):
        for j in range(DIM):
            for k in range(DIM):
                # diagonal inverse: a = i only
                combo = d(rows[j][i], k) - d(rows[j][k], i) + d(rows[i][k], j)
                G[i][j][k] = inv[i] * combo * HALF
    return G


def emc_residual_rf(m: CosmologyMetric):
    """g_{ij,k} - G^a_{ik} g_{aj} - G^a_{kj} g_{ia} with the generalized
    connection; reported as computed (it does not vanish in general)."""
    rows = [[_rf(p) for p in row] for row in m.metric_rows()]
    G = christoffel_full_rf(m)

    def d(rf, coord):
        return rf.derivative() if coord == 0 else RF_ZERO

    out = [[[RF_ZERO] * DIM for _ in range(DIM)] for _ in range(DIM)]
    for i in range(DIM):
        for j in range(DIM):
            for k in range(DIM):
                total = d(rows[i][j], k)
                for a in range(DIM):
                    total = total - G[a][i][k] * rows[a][j] - G[a][k][j] * rows[i][a]
                out[i][j][k] = total
    return out

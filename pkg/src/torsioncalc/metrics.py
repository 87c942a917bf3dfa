"""Generalized (non-symmetric) metric fields and their connection.

A non-symmetric metric determines its connection through the generalized
Christoffel symbols; the symmetric part must be invertible.  Polynomial
metrics have an exact polynomial inverse only when the determinant of the
symmetric part is a nonzero constant, so that is what this layer supports
(random test metrics are built that way); the diagonal cosmology family with
genuinely rational inverses lives in :mod:`torsioncalc.cosmology`.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import ScalarField, TensorField
from .connection import ConnectionField

HALF = Fraction(1, 2)


class SingularMetricError(ValueError):
    """Symmetric part is singular, or has no exact polynomial inverse."""


def poly_det(rows) -> ScalarField:
    """Determinant of a square matrix of scalar fields, by Laplace expansion."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    dim = rows[0][0].dim
    total = ScalarField(dim)
    for col in range(n):
        entry = rows[0][col]
        if entry.is_zero():
            continue
        minor = [[rows[i][c] for c in range(n) if c != col] for i in range(1, n)]
        cofactor = entry * poly_det(minor)
        total = total + (cofactor if col % 2 == 0 else -cofactor)
    return total


def poly_adjugate(rows):
    """Adjugate matrix (transpose of cofactors) of a matrix of scalar fields."""
    n = len(rows)
    dim = rows[0][0].dim
    if n == 1:
        return [[ScalarField.constant(1, dim)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            cof = poly_det(minor)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


class GeneralizedMetric:
    """Non-symmetric metric with an exact inverse of its symmetric part."""

    __slots__ = ("g", "g_sym", "g_antisym", "g_sym_inv", "dim")

    def __init__(self, g: TensorField, g_sym_inv: TensorField):
        if g.valence != (0, 2):
            raise ValueError("metric must have valence (0, 2)")
        if g_sym_inv.valence != (2, 0):
            raise ValueError("inverse must have valence (2, 0)")
        self.g = g
        self.dim = g.dim
        dim = g.dim
        sym_entries = []
        anti_entries = []
        for i in range(dim):
            for j in range(dim):
                gij, gji = g.get(i, j), g.get(j, i)
                sym_entries.append((gij + gji).scale(HALF))
                anti_entries.append((gij - gji).scale(HALF))
        self.g_sym = TensorField(dim, (0, 2), sym_entries)
        self.g_antisym = TensorField(dim, (0, 2), anti_entries)
        self.g_sym_inv = g_sym_inv
        self._check_inverse()

    def _check_inverse(self):
        dim = self.dim
        one = ScalarField.constant(1, dim)
        zero = ScalarField(dim)
        for i in range(dim):
            for j in range(dim):
                total = ScalarField(dim)
                for a in range(dim):
                    total = total + self.g_sym_inv.get(i, a) * self.g_sym.get(j, a)
                if total != (one if i == j else zero):
                    raise SingularMetricError(
                        "supplied inverse does not invert the symmetric part"
                    )

    @classmethod
    def from_field(cls, g: TensorField) -> "GeneralizedMetric":
        """Build with the exact polynomial inverse of the symmetric part.

        Requires det(symmetric part) to be a nonzero constant; otherwise the
        inverse is not polynomial and a SingularMetricError is raised.
        """
        dim = g.dim
        sym = [
            [
                (g.get(i, j) + g.get(j, i)).scale(HALF)
                for j in range(dim)
            ]
            for i in range(dim)
        ]
        det = poly_det(sym)
        if det.is_zero():
            raise SingularMetricError("symmetric part is singular")
        if det.degree() > 0:
            raise SingularMetricError(
                "symmetric part has non-constant determinant; no exact "
                "polynomial inverse exists (evaluate pointwise instead)"
            )
        inv_det = Fraction(1, 1) / det.constant_value()
        adj = poly_adjugate(sym)
        entries = [adj[i][j].scale(inv_det) for i in range(dim) for j in range(dim)]
        return cls(g, TensorField(dim, (2, 0), entries))

    def evaluate_inverse_at(self, point):
        """Numeric inverse of the symmetric part at one rational point.

        Exact Gauss-Jordan over the rationals; raises if singular there.
        Diagnostic helper for metrics without a polynomial inverse.
        """
        dim = self.dim
        m = [
            [Fraction(self.g_sym.get(i, j).evaluate(point)) for j in range(dim)]
            for i in range(dim)
        ]
        inv = [[Fraction(1) if i == j else Fraction(0) for j in range(dim)] for i in range(dim)]
        for col in range(dim):
            piv = next((r for r in range(col, dim) if m[r][col] != 0), None)
            if piv is None:
                raise SingularMetricError(f"symmetric part singular at {point}")
            m[col], m[piv] = m[piv], m[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            p = m[col][col]
            m[col] = [x / p for x in m[col]]
            inv[col] = [x / p for x in inv[col]]
            for r in range(dim):
                if r != col and m[r][col]:
                    f = m[r][col]
                    m[r] = [a - f * b for a, b in zip(m[r], m[col])]
                    inv[r] = [a - f * b for a, b in zip(inv[r], inv[col])]
        return inv


def christoffel_generalized(g: GeneralizedMetric) -> ConnectionField:
    """Connection of a non-symmetric metric:
    G^i_jk = 1/2 g^{ia} (g_{ja,k} - g_{jk,a} + g_{ak,j}).

    For a symmetric metric this is the Levi-Civita connection.
    """
    dim = g.dim
    grad = g.g.partial_gradient()  # g_{ij,k}

    def entry(i, j, k):
        total = ScalarField(dim)
        for a in range(dim):
            combo = grad.get(j, a, k) - grad.get(j, k, a) + grad.get(a, k, j)
            total = total + g.g_sym_inv.get(i, a) * combo
        return total.scale(HALF)

    return ConnectionField(TensorField.build(dim, (1, 2), entry))


def christoffel_first_kind_antisym(g) -> TensorField:
    """Lowered antisymmetric part of the connection, from the antisymmetric
    metric part alone:
    G_{a.jk} = 1/2 (h_{ja,k} - h_{jk,a} + h_{ak,j}),  h = antisymmetric part.

    No inverse metric involved, so this stays polynomial for any metric;
    accepts a GeneralizedMetric or a bare valence-(0, 2) field.
    """
    field = g.g if isinstance(g, GeneralizedMetric) else g
    if field.valence != (0, 2):
        raise ValueError("metric must have valence (0, 2)")
    dim = field.dim
    anti = TensorField.build(
        dim, (0, 2),
        lambda i, j: (field.get(i, j) - field.get(j, i)).scale(HALF),
    )
    grad = anti.partial_gradient()

    def entry(a, j, k):
        combo = grad.get(j, a, k) - grad.get(j, k, a) + grad.get(a, k, j)
        return combo.scale(HALF)

    return TensorField.build(dim, (0, 3), entry)


def einstein_metricity_residual(g: GeneralizedMetric, L: ConnectionField) -> TensorField:
    """g_{ij,k} - G^a_{ik} g_{aj} - G^a_{kj} g_{ia}, entrywise.

    Zero iff the connection satisfies the unified-field-theory compatibility
    condition with the non-symmetric metric.
    """
    if g.dim != L.dim:
        raise ValueError("dimension mismatch")
    dim = g.dim
    grad = g.g.partial_gradient()

    def entry(i, j, k):
        total = grad.get(i, j, k)
        for a in range(dim):
            total = total - L.coeffs.get(a, i, k) * g.g.get(a, j)
            total = total - L.coeffs.get(a, k, j) * g.g.get(i, a)
        return total

    return TensorField.build(dim, (0, 3), entry)

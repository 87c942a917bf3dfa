"""Exact arithmetic substrate: rationals, multivariate polynomials over the
rationals, dense multi-index tensor fields, and exact rational linear algebra.

Every value is immutable after construction and every operation is a pure
function, so instances can be shared freely between threads or processes.
There is deliberately no floating-point code path here: identities verified
downstream must produce residuals that are *exactly* zero.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

# A rational scalar.  ``int`` values are accepted everywhere a Rational is;
# they are exact and considerably faster, so integer-only pipelines never pay
# for Fraction normalisation.
Rational = Fraction

MAX_DIMENSION = 6

# Exponent multi-indices are packed into a single int, 8 bits per coordinate,
# so that monomial multiplication is a single integer addition.  Total degree
# stays far below 255 for every operation in this package.
_SHIFT = 8
_MASK = 0xFF


def _pack(exponents) -> int:
    key = 0
    for k, e in enumerate(exponents):
        if e < 0:
            raise ValueError("exponents must be non-negative")
        if e > _MASK:
            raise ValueError("exponent too large to pack")
        key |= e << (_SHIFT * k)
    return key


def _unpack(key: int, dim: int) -> tuple:
    return tuple((key >> (_SHIFT * k)) & _MASK for k in range(dim))


def _fma_terms(acc: dict, ta: dict, tb: dict, sign: int = 1) -> None:
    """acc += sign * (ta * tb), all operands raw term dicts.  Hot path."""
    if not ta or not tb:
        return
    get = acc.get
    if sign == 1:
        for ka, va in ta.items():
            for kb, vb in tb.items():
                k = ka + kb
                acc[k] = get(k, 0) + va * vb
    else:
        for ka, va in ta.items():
            for kb, vb in tb.items():
                k = ka + kb
                acc[k] = get(k, 0) - va * vb


def _add_terms(acc: dict, t: dict, scale=1) -> None:
    """acc += scale * t, raw term dicts."""
    if not t or scale == 0:
        return
    get = acc.get
    if scale == 1:
        for k, v in t.items():
            acc[k] = get(k, 0) + v
    else:
        for k, v in t.items():
            acc[k] = get(k, 0) + scale * v


def _strip_zeros(acc: dict) -> dict:
    """Drop zero coefficients and unbox integral Fractions to plain ints
    (integer arithmetic is several times faster on the hot paths)."""
    out = {}
    for k, v in acc.items():
        if v:
            if type(v) is Fraction and v.denominator == 1:
                v = v.numerator
            out[k] = v
    return out


class ScalarField:
    """Exact multivariate polynomial over the rationals in ``dim`` coordinates.

    Terms are stored as a map from packed exponent multi-index to a nonzero
    rational coefficient, which makes equality structural: two fields are equal
    iff they are the same polynomial.
    """

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, _terms: dict | None = None):
        if not 1 <= dim <= MAX_DIMENSION:
            raise ValueError(f"dimension must be in 1..{MAX_DIMENSION}, got {dim}")
        self.dim = dim
        self._terms = _terms if _terms is not None else {}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "ScalarField":
        return cls(dim)

    @classmethod
    def constant(cls, value, dim: int) -> "ScalarField":
        if value == 0:
            return cls(dim)
        return cls(dim, {0: value})

    @classmethod
    def variable(cls, k: int, dim: int) -> "ScalarField":
        if not 0 <= k < dim:
            raise IndexError(f"coordinate index {k} out of range for dimension {dim}")
        return cls(dim, {1 << (_SHIFT * k): 1})

    @classmethod
    def from_terms(cls, terms: dict, dim: int) -> "ScalarField":
        """Build from a map {exponent tuple: coefficient}."""
        packed = {}
        for exps, coeff in terms.items():
            if len(exps) != dim:
                raise ValueError("exponent tuple length must equal dimension")
            if coeff != 0:
                key = _pack(exps)
                packed[key] = packed.get(key, 0) + coeff
        return cls(dim, _strip_zeros(packed))

    # -- inspection ---------------------------------------------------------

    def terms(self) -> dict:
        """Terms as a map {exponent tuple: coefficient}, canonical order."""
        return {
            _unpack(k, self.dim): v for k, v in sorted(self._terms.items())
        }

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        best = 0
        for key in self._terms:
            total = 0
            while key:
                total += key & _MASK
                key >>= _SHIFT
            if total > best:
                best = total
        return best

    def constant_value(self):
        """The value of a degree-<=0 field; raises for non-constant fields."""
        if not self._terms:
            return 0
        if set(self._terms) == {0}:
            return self._terms[0]
        raise ValueError("field is not constant")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "ScalarField") -> "ScalarField":
        self._check_same_dim(other)
        acc = dict(self._terms)
        _add_terms(acc, other._terms)
        return ScalarField(self.dim, _strip_zeros(acc))

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        self._check_same_dim(other)
        acc = dict(self._terms)
        _add_terms(acc, other._terms, -1)
        return ScalarField(self.dim, _strip_zeros(acc))

    def __neg__(self) -> "ScalarField":
        return ScalarField(self.dim, {k: -v for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, ScalarField):
            self._check_same_dim(other)
            acc = {}
            _fma_terms(acc, self._terms, other._terms)
            return ScalarField(self.dim, _strip_zeros(acc))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, factor) -> "ScalarField":
        if factor == 0:
            return ScalarField(self.dim)
        return ScalarField(
            self.dim, _strip_zeros({k: factor * v for k, v in self._terms.items()})
        )

    def partial(self, k: int) -> "ScalarField":
        """Exact formal partial derivative with respect to coordinate ``k``."""
        if not 0 <= k < self.dim:
            raise IndexError(f"coordinate index {k} out of range for dimension {self.dim}")
        shift = _SHIFT * k
        out = {}
        for key, coeff in self._terms.items():
            e = (key >> shift) & _MASK
            if e:
                out[key - (1 << shift)] = coeff * e
        return ScalarField(self.dim, out)

    def evaluate(self, point):
        """Exact value at a point given as a sequence of rationals."""
        if len(point) != self.dim:
            raise ValueError("point length must equal dimension")
        total = 0
        for key, coeff in self._terms.items():
            value = coeff
            k = key
            i = 0
            while k:
                e = k & _MASK
                if e:
                    value = value * point[i] ** e
                k >>= _SHIFT
                i += 1
            total += value
        return total

    # -- comparisons / display ----------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarField):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, coeff in self.terms().items():
            factors = []
            for k, e in enumerate(exps):
                if e == 1:
                    factors.append(f"x{k}")
                elif e > 1:
                    factors.append(f"x{k}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def _check_same_dim(self, other: "ScalarField") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")


def poly_partial(f: ScalarField, k: int) -> ScalarField:
    """Functional form of :meth:`ScalarField.partial`."""
    return f.partial(k)


class TensorField:
    """Dense array of scalar fields with ``r`` upper and ``s`` lower indices.

    Entries are stored flat in row-major order, upper indices first.  Each
    index runs over ``0..dim-1``; the entry count is ``dim**(r+s)``.
    """

    __slots__ = ("dim", "valence", "entries")

    def __init__(self, dim: int, valence: tuple, entries: list):
        r, s = valence
        if r < 0 or s < 0:
            raise ValueError("valence components must be non-negative")
        if len(entries) != dim ** (r + s):
            raise ValueError("entry count must equal dim**(r+s)")
        self.dim = dim
        self.valence = (r, s)
        self.entries = entries

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, valence: tuple) -> "TensorField":
        count = dim ** (valence[0] + valence[1])
        z = ScalarField(dim)
        return cls(dim, valence, [z] * count)

    @classmethod
    def build(cls, dim: int, valence: tuple, fn) -> "TensorField":
        """Entry-wise constructor: ``fn(*indices) -> ScalarField``."""
        rank = valence[0] + valence[1]
        entries = []
        for flat in range(dim**rank):
            entries.append(fn(*_flat_to_indices(flat, dim, rank)))
        return cls(dim, valence, entries)

    @classmethod
    def kronecker(cls, dim: int) -> "TensorField":
        """The identity tensor of valence (1, 1)."""
        one = ScalarField.constant(1, dim)
        zero = ScalarField(dim)
        entries = [one if i == j else zero for i in range(dim) for j in range(dim)]
        return cls(dim, (1, 1), entries)

    # -- indexing -----------------------------------------------------------

    def rank(self) -> int:
        return self.valence[0] + self.valence[1]

    def get(self, *indices) -> ScalarField:
        if len(indices) != self.rank():
            raise ValueError("wrong number of indices")
        flat = 0
        for i in indices:
            if not 0 <= i < self.dim:
                raise IndexError("tensor index out of range")
            flat = flat * self.dim + i
        return self.entries[flat]

    # -- algebra -------------------------------------------------------------

    def __add__(self, other: "TensorField") -> "TensorField":
        self._check_compatible(other)
        return TensorField(
            self.dim, self.valence,
            [a + b for a, b in zip(self.entries, other.entries)],
        )

    def __sub__(self, other: "TensorField") -> "TensorField":
        self._check_compatible(other)
        return TensorField(
            self.dim, self.valence,
            [a - b for a, b in zip(self.entries, other.entries)],
        )

    def __neg__(self) -> "TensorField":
        return TensorField(self.dim, self.valence, [-a for a in self.entries])

    def scale(self, factor) -> "TensorField":
        return TensorField(self.dim, self.valence, [a.scale(factor) for a in self.entries])

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorField):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.valence == other.valence
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        r, s = self.valence
        return f"TensorField(dim={self.dim}, valence=({r},{s}))"

    def tensor_product(self, other: "TensorField") -> "TensorField":
        """Outer product; upper indices of both factors precede lower ones."""
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        r1, s1 = self.valence
        r2, s2 = other.valence
        dim = self.dim
        rank1, rank2 = r1 + s1, r2 + s2

        def entry(*idx):
            left = idx[:r1] + idx[r1 + r2 : r1 + r2 + s1]
            right = idx[r1 : r1 + r2] + idx[r1 + r2 + s1 :]
            return self.get(*left) * other.get(*right)

        return TensorField.build(dim, (r1 + r2, s1 + s2), entry)

    def contract(self, upper: int, lower: int) -> "TensorField":
        """Sum an upper index against a lower index.

        ``upper`` counts within the upper slots, ``lower`` within the lower
        slots; the result drops both.
        """
        r, s = self.valence
        if not 0 <= upper < r:
            raise ValueError(f"upper position {upper} out of range for valence {self.valence}")
        if not 0 <= lower < s:
            raise ValueError(f"lower position {lower} out of range for valence {self.valence}")
        dim = self.dim
        lower_abs = r + lower

        def entry(*idx):
            total = ScalarField(dim)
            for alpha in range(dim):
                full = list(idx)
                full.insert(upper, alpha)
                full.insert(lower_abs, alpha)
                total = total + self.get(*full)
            return total

        return TensorField.build(dim, (r - 1, s - 1), entry)

    def partial_gradient(self) -> "TensorField":
        """Entry-wise partial derivative, appended as a final lower index."""
        r, s = self.valence
        dim = self.dim
        out = []
        for e in self.entries:
            for k in range(dim):
                out.append(e.partial(k))
        return TensorField(dim, (r, s + 1), out)

    def transpose_lower(self, perm: tuple) -> "TensorField":
        """Permute lower indices: new entry at lower slots ``p`` is the old
        entry at slots ``(p[perm[0]], p[perm[1]], ...)``."""
        r, s = self.valence
        if sorted(perm) != list(range(s)):
            raise ValueError("perm must be a permutation of the lower slots")

        def entry(*idx):
            uppers = idx[:r]
            lowers = idx[r:]
            return self.get(*uppers, *(lowers[p] for p in perm))

        return TensorField.build(self.dim, self.valence, entry)

    def swap_last_lower(self) -> "TensorField":
        """Swap the final two lower indices (antisymmetry checks, LHS swaps)."""
        s = self.valence[1]
        perm = list(range(s))
        perm[-2], perm[-1] = perm[-1], perm[-2]
        return self.transpose_lower(tuple(perm))

    def _check_compatible(self, other: "TensorField") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.valence != other.valence:
            raise ValueError(f"valence mismatch: {self.valence} vs {other.valence}")


def _flat_to_indices(flat: int, dim: int, rank: int) -> tuple:
    idx = [0] * rank
    for pos in range(rank - 1, -1, -1):
        idx[pos] = flat % dim
        flat //= dim
    return tuple(idx)


def tensor_contract(t: TensorField, upper: int, lower: int) -> TensorField:
    """Functional form of :meth:`TensorField.contract`."""
    return t.contract(upper, lower)


# ---------------------------------------------------------------------------
# Exact linear algebra over the rationals
# ---------------------------------------------------------------------------


class RationalMatrix:
    """Dense matrix of rationals with an exact, fraction-free rank."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if not rows:
            raise ValueError("matrix needs at least one row")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        )

    def rank(self) -> int:
        return _bareiss_rank([list(r) for r in self.rows])


def matrix_rank(m) -> int:
    """Exact rank over the rationals of a RationalMatrix or list of rows."""
    if isinstance(m, RationalMatrix):
        return m.rank()
    return RationalMatrix(m).rank()


def _clear_denominators(row):
    """Scale a row of rationals to coprime integers (rank-preserving)."""
    denom = 1
    for v in row:
        if isinstance(v, Fraction):
            denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) if isinstance(v, Fraction) else v * denom for v in row]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return ints

def _bareiss_rank(rows) -> int:
    """Fraction-free Gaussian elimination (Bareiss) rank, exact."""
    m = [_clear_denominators(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev_pivot = 1
    col = 0
    while rank < nrows and col < ncols:
        pivot_row = None
        for i in range(rank, nrows):
            if m[i][col]:
                pivot_row = i
                break
        if pivot_row is None:
            col += 1
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        pivot = m[rank][col]
        for i in range(rank + 1, nrows):
            factor = m[i][col]
            row_i = m[i]
            row_p = m[rank]
            for j in range(col, ncols):
                row_i[j] = (pivot * row_i[j] - factor * row_p[j]) // prev_pivot
        prev_pivot = pivot
        rank += 1
        col += 1
    return rank


class LinearSystem:
    """Incremental exact Gaussian elimination with one or more right sides.

    Rows are reduced against the stored pivots as they arrive, so feeding a
    large redundant stream of equations is cheap once the rank saturates.
    """

    def __init__(self, ncols: int, nrhs: int = 1):
        self.ncols = ncols
        self.nrhs = nrhs
        self._pivot_rows = {}  # pivot column -> (coeff row, rhs row)
        self.inconsistent = [False] * nrhs

    @property
    def rank(self) -> int:
        return len(self._pivot_rows)

    def add_row(self, coeffs, rhs) -> None:
        if len(coeffs) != self.ncols or len(rhs) != self.nrhs:
            raise ValueError("row shape mismatch")
        coeffs = list(coeffs)
        rhs = list(rhs)
        for col, (prow, prhs) in self._pivot_rows.items():
            factor = coeffs[col]
            if factor:
                for j in range(self.ncols):
                    if prow[j]:
                        coeffs[j] -= factor * prow[j]
                for j in range(self.nrhs):
                    if prhs[j]:
                        rhs[j] -= factor * prhs[j]
        for col in range(self.ncols):
            if coeffs[col]:
                inv = Fraction(1) / coeffs[col]
                coeffs = [c * inv for c in coeffs]
                rhs = [v * inv for v in rhs]
                self._pivot_rows[col] = (coeffs, rhs)
                return
        for j in range(self.nrhs):
            if rhs[j] != 0:
                self.inconsistent[j] = True

    def solve(self, which: int = 0):
        """The unique solution for right side ``which``.

        Requires full column rank; raises ValueError otherwise.  Back
        substitution over the reduced pivot rows.
        """
        if self.rank < self.ncols:
            raise ValueError(
                f"system is underdetermined: rank {self.rank} < {self.ncols} unknowns"
            )
        if self.inconsistent[which]:
            raise ValueError("system is inconsistent for this right side")
        solution = [Fraction(0)] * self.ncols
        for col in sorted(self._pivot_rows, reverse=True):
            prow, prhs = self._pivot_rows[col]
            value = prhs[which]
            for j in range(col + 1, self.ncols):
                if prow[j]:
                    value -= prow[j] * solution[j]
            solution[col] = Fraction(value)
        return solution

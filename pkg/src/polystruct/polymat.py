"""Polynomial and rational matrices in coefficient form.

A polynomial matrix of grade ``k`` is stored as an array of shape
``(k + 1, rows, cols)`` whose slice ``i`` multiplies ``lam**i``.  A rational
matrix keeps one numerator and one denominator polynomial per entry, each as a
1-D array of ascending coefficients.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import GradeTooSmall, PoleAtEvaluationPoint, RaggedGrid

EPS = np.finfo(float).eps

# Returned by pm_degree for the zero matrix.
ZERO_DEGREE = -1


def _as_float_array(a) -> np.ndarray:
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return a.astype(complex)
    return a.astype(float)


class PolyMatrix:
    """Polynomial matrix ``P(lam) = sum_i lam**i * P[i]`` of a fixed grade.

    Parameters
    ----------
    coeffs : array_like
        Coefficients of shape ``(k + 1, m, n)``.  A 2-D array is taken as a
        constant (grade 0) matrix.
    grade : int, optional
        Formal grade.  A larger value pads with zero coefficients; a smaller
        value drops trailing coefficients, which must then be exactly zero.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs, grade: int | None = None):
        c = _as_float_array(coeffs)
        if c.ndim == 2:
            c = c[None, :, :]
        if c.ndim != 3 or c.shape[0] == 0:
            raise ValueError("coefficients must have shape (k+1, m, n)")
        if grade is not None:
            if grade < 0:
                raise ValueError("grade must be nonnegative")
            if grade + 1 < c.shape[0]:
                if np.any(c[grade + 1:] != 0):
                    raise GradeTooSmall(f"grade {grade} drops nonzero coefficients")
                c = c[: grade + 1]
            elif grade + 1 > c.shape[0]:
                pad = np.zeros((grade + 1 - c.shape[0],) + c.shape[1:], dtype=c.dtype)
                c = np.concatenate([c, pad])
        c = np.array(c)
        c.setflags(write=False)
        self._coeffs = c

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def grade(self) -> int:
        return self._coeffs.shape[0] - 1

    @property
    def shape(self) -> tuple[int, int]:
        return self._coeffs.shape[1], self._coeffs.shape[2]

    @property
    def rows(self) -> int:
        return self._coeffs.shape[1]

    @property
    def cols(self) -> int:
        return self._coeffs.shape[2]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self._coeffs)

    def __getitem__(self, i: int) -> np.ndarray:
        return self._coeffs[i]

    def __call__(self, lam) -> np.ndarray:
        return pm_eval(self, lam)

    def __repr__(self) -> str:
        m, n = self.shape
        return f"PolyMatrix({m}x{n}, grade={self.grade})"

    def with_grade(self, k: int) -> "PolyMatrix":
        """Return the same matrix viewed at grade ``k``."""
        return PolyMatrix(self._coeffs, grade=k)

    def trimmed(self, atol: float = 0.0, rtol: float | None = None) -> "PolyMatrix":
        """Return the matrix at grade ``max(degree, 0)``."""
        d = pm_degree(self, atol=atol, rtol=rtol)
        return PolyMatrix(self._coeffs[: max(d, 0) + 1])

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(np.transpose(self._coeffs, (0, 2, 1)))

    @property
    def T(self) -> "PolyMatrix":
        return self.transpose()

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix(-self._coeffs)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        k = max(self.grade, other.grade)
        return PolyMatrix(self.with_grade(k).coeffs + other.with_grade(k).coeffs)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + (-other)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        a, b = self._coeffs, other.coeffs
        out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1], b.shape[2]),
                       dtype=np.result_type(a, b))
        for i in range(a.shape[0]):
            for j in range(b.shape[0]):
                out[i + j] += a[i] @ b[j]
        return PolyMatrix(out)

    @classmethod
    def constant(cls, P0) -> "PolyMatrix":
        return cls(np.asarray(P0)[None])

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls(np.eye(n)[None])

    @classmethod
    def zeros(cls, m: int, n: int, grade: int = 0) -> "PolyMatrix":
        return cls(np.zeros((grade + 1, m, n)))


def block_polymatrix(blocks: Sequence[Sequence[PolyMatrix]]) -> PolyMatrix:
    """Assemble a block polynomial matrix from a 2-D list of blocks."""
    k = max(b.grade for row in blocks for b in row)
    c = [np.block([[b.with_grade(k).coeffs[i] for b in row] for row in blocks])
         for i in range(k + 1)]
    return PolyMatrix(np.array(c))


def _degree_tol(norms: np.ndarray, shape: tuple[int, int], atol: float,
                rtol: float | None) -> float:
    if rtol is None:
        rtol = shape[0] * shape[1] * EPS
    scale = norms.max() if norms.size else 0.0
    return max(atol, rtol * scale)


def pm_degree(P: PolyMatrix, atol: float = 0.0, rtol: float | None = None) -> int:
    """Degree of a polynomial matrix.

    Parameters
    ----------
    P : PolyMatrix
    atol : float
        Absolute threshold on the infinity norm of a coefficient matrix.
    rtol : float, optional
        Relative threshold, scaled by the largest coefficient norm.
        Defaults to ``m * n * eps``.

    Returns
    -------
    int
        Largest ``i`` with ``||P[i]|| > max(atol, rtol * max_j ||P[j]||)``,
        or ``ZERO_DEGREE`` (-1) for the zero matrix.
    """
    c = P.coeffs
    if c.shape[1] == 0 or c.shape[2] == 0:
        return ZERO_DEGREE
    norms = np.array([np.linalg.norm(ci, np.inf) for ci in c])
    tol = _degree_tol(norms, P.shape, atol, rtol)
    nz = np.nonzero(norms > tol)[0]
    return int(nz[-1]) if nz.size else ZERO_DEGREE


def pm_eval(P: PolyMatrix, lam) -> np.ndarray:
    """Evaluate ``P`` at a finite point by Horner's rule."""
    c = P.coeffs
    out = c[-1].astype(np.result_type(c, lam))
    for i in range(c.shape[0] - 2, -1, -1):
        out = out * lam + c[i]
    return out


def pm_reverse(P: PolyMatrix, j: int | None = None, atol: float = 0.0,
               rtol: float | None = None) -> PolyMatrix:
    """Reversal ``lam**j * P(1/lam)``.

    Parameters
    ----------
    P : PolyMatrix
    j : int, optional
        Reversal grade, default ``P.grade``.  Must not be smaller than the
        degree of ``P``.

    Returns
    -------
    PolyMatrix
        Grade ``j`` matrix with ``out[i] = P[j - i]``.
    """
    if j is None:
        j = P.grade
    d = pm_degree(P, atol=atol, rtol=rtol)
    if j < d:
        raise GradeTooSmall(f"reversal grade {j} is below the degree {d}")
    c = P.coeffs
    if c.shape[0] < j + 1:
        c = P.with_grade(j).coeffs
    else:
        c = c[: j + 1]
    return PolyMatrix(c[::-1])


# ---------------------------------------------------------------------------
# scalar polynomial helpers (ascending coefficients)

def poly_trim(c, atol: float = 0.0, rtol: float | None = None) -> np.ndarray:
    """Drop negligible trailing coefficients; the zero polynomial becomes ``[0]``."""
    c = _as_float_array(c).ravel()
    if c.size == 0:
        return np.zeros(1)
    if rtol is None:
        rtol = c.size * EPS
    tol = max(atol, rtol * np.abs(c).max())
    nz = np.nonzero(np.abs(c) > tol)[0]
    if nz.size == 0:
        return np.zeros(1, dtype=c.dtype)
    return c[: nz[-1] + 1]


def poly_degree(c, atol: float = 0.0, rtol: float | None = None) -> int:
    t = poly_trim(c, atol, rtol)
    if t.size == 1 and t[0] == 0:
        return ZERO_DEGREE
    return t.size - 1


def poly_divmod(num, den, atol: float = 0.0, rtol: float | None = None):
    """Euclidean division of ascending coefficient vectors.

    The leading coefficient of ``den`` is chosen after trimming with the
    given tolerances; the arithmetic itself is plain long division.

    Returns
    -------
    (q, r) : tuple of ndarray
        Quotient and remainder with ``len(r) == deg(den)`` (at least 1).
    """
    den = poly_trim(den, atol, rtol)
    if den.size == 1 and den[0] == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    num = _as_float_array(num).ravel()
    dt = np.result_type(num, den)
    nd = den.size - 1
    r = num.astype(dt).copy()
    if r.size <= nd:
        q = np.zeros(1, dtype=dt)
        rem = np.zeros(max(nd, 1), dtype=dt)
        rem[: r.size] = r
        return q, rem
    q = np.zeros(r.size - nd, dtype=dt)
    lead = den[-1]
    for i in range(r.size - 1, nd - 1, -1):
        coef = r[i] / lead
        q[i - nd] = coef
        r[i - nd: i + 1] -= coef * den
        r[i] = 0.0
    rem = r[: max(nd, 1)].copy()
    if nd == 0:
        rem[:] = 0.0
    return q, rem


def poly_eval(c, lam):
    """Evaluate an ascending coefficient vector at ``lam``."""
    out = 0.0 * lam
    for ci in np.asarray(c)[::-1]:
        out = out * lam + ci
    return out


def poly2pm(grid, grade: int | None = None) -> PolyMatrix:
    """Build a polynomial matrix from a grid of ascending coefficient lists.

    Parameters
    ----------
    grid : sequence of sequences
        ``grid[i][j]`` holds the coefficients of entry ``(i, j)``; a scalar is
        accepted as a constant entry.
    grade : int, optional
        Overrides the grade, which otherwise is the largest entry length minus 1.

    Raises
    ------
    RaggedGrid
        If the rows have different lengths.
    """
    rows = [list(r) for r in grid]
    m = len(rows)
    if m == 0:
        raise RaggedGrid("empty grid")
    n = len(rows[0])
    if any(len(r) != n for r in rows) or n == 0:
        raise RaggedGrid("grid rows have different lengths")
    entries = [[np.atleast_1d(_as_float_array(e)) for e in r] for r in rows]
    dt = np.result_type(*[e for r in entries for e in r])
    k = max(e.size for r in entries for e in r) - 1
    c = np.zeros((k + 1, m, n), dtype=dt)
    for i in range(m):
        for j in range(n):
            e = entries[i][j]
            c[: e.size, i, j] = e
    return PolyMatrix(c, grade=grade)


def pm2poly(P: PolyMatrix) -> list[list[np.ndarray]]:
    """Entry grid of ascending coefficient arrays (trailing exact zeros dropped)."""
    c = P.coeffs
    out = []
    for i in range(P.rows):
        row = []
        for j in range(P.cols):
            e = c[:, i, j]
            nz = np.nonzero(e)[0]
            row.append(e[: nz[-1] + 1].copy() if nz.size else np.zeros(1, dtype=e.dtype))
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# rational matrices

class RationalMatrix:
    """Rational matrix with one numerator/denominator pair per entry.

    Parameters
    ----------
    num, den : grid of array_like
        Ascending coefficient vectors, ``num[i][j] / den[i][j]`` is entry
        ``(i, j)``.  Denominators must be nonzero.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, num, den):
        numg = [[np.atleast_1d(_as_float_array(e)).copy() for e in r] for r in num]
        deng = [[np.atleast_1d(_as_float_array(e)).copy() for e in r] for r in den]
        if not numg or any(len(r) != len(numg[0]) for r in numg) or len(numg[0]) == 0:
            raise RaggedGrid("numerator grid is not rectangular")
        if len(deng) != len(numg) or any(len(r) != len(numg[0]) for r in deng):
            raise RaggedGrid("denominator grid does not match the numerator grid")
        for r in deng:
            for e in r:
                if not np.any(e != 0):
                    raise ZeroDivisionError("zero denominator")
        for g in (numg, deng):
            for r in g:
                for e in r:
                    e.setflags(write=False)
        self._num = numg
        self._den = deng

    @property
    def num(self) -> list[list[np.ndarray]]:
        return self._num

    @property
    def den(self) -> list[list[np.ndarray]]:
        return self._den

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._num), len(self._num[0])

    def __call__(self, lam) -> np.ndarray:
        return rm_eval(self, lam)

    def __repr__(self) -> str:
        m, n = self.shape
        return f"RationalMatrix({m}x{n})"

    def transpose(self) -> "RationalMatrix":
        m, n = self.shape
        return RationalMatrix([[self._num[i][j] for i in range(m)] for j in range(n)],
                              [[self._den[i][j] for i in range(m)] for j in range(n)])

    @classmethod
    def from_polymatrix(cls, P: PolyMatrix) -> "RationalMatrix":
        """Embed a polynomial matrix with unit denominators."""
        num = pm2poly(P)
        den = [[np.ones(1) for _ in range(P.cols)] for _ in range(P.rows)]
        return cls(num, den)


def rm_eval(R: RationalMatrix, lam, atol: float = 0.0,
            rtol: float | None = None) -> np.ndarray:
    """Evaluate a rational matrix entrywise at a finite point.

    Common factors ``(lam - lam0)`` of a numerator and its denominator are
    divided out before evaluation, so removable singularities are allowed.

    Raises
    ------
    PoleAtEvaluationPoint
        If a denominator vanishes at ``lam`` while the reduced numerator does not.
    """
    if rtol is None:
        rtol = 1e3 * EPS
    m, n = R.shape
    out = np.zeros((m, n), dtype=np.result_type(float, lam))
    for i in range(m):
        for j in range(n):
            a = np.asarray(R.num[i][j])
            b = poly_trim(R.den[i][j])
            for _ in range(b.size):
                bv = poly_eval(b, lam)
                if abs(bv) > max(atol, rtol * _abs_scale(b, lam)):
                    break
                av = poly_eval(a, lam)
                if abs(av) > max(atol, rtol * _abs_scale(a, lam)):
                    raise PoleAtEvaluationPoint(f"entry ({i},{j}) has a pole at {lam}")
                a = _deflate_root(a, lam)
                b = _deflate_root(b, lam)
            out[i, j] = poly_eval(a, lam) / poly_eval(b, lam)
    return out


def _abs_scale(c, lam) -> float:
    return float(poly_eval(np.abs(c), abs(lam))) if np.size(c) else 0.0


def _deflate_root(c, lam) -> np.ndarray:
    """Divide ``c`` by ``(x - lam)`` by synthetic division, dropping the remainder."""
    c = np.asarray(c)
    if c.size <= 1:
        return c.copy()
    q = np.zeros(c.size - 1, dtype=np.result_type(c, lam))
    acc = 0.0
    for i in range(c.size - 1, 0, -1):
        acc = acc * lam + c[i]
        q[i - 1] = acc
    return q


def pm_divrem(R: RationalMatrix, atol: float = 0.0,
              rtol: float | None = None) -> tuple[PolyMatrix, RationalMatrix]:
    """Split ``R`` into polynomial quotient and strictly proper remainder.

    Parameters
    ----------
    R : RationalMatrix
    atol, rtol : float
        Tolerances used to locate the leading coefficient of each denominator.

    Returns
    -------
    Q : PolyMatrix
        Entrywise quotients, at grade ``max(0, max quotient degree)``.
    Rem : RationalMatrix
        Entrywise remainders over the trimmed denominators.
    """
    m, n = R.shape
    quot = [[None] * n for _ in range(m)]
    rnum = [[None] * n for _ in range(m)]
    rden = [[None] * n for _ in range(m)]
    for i in range(m):
        for j in range(n):
            den = poly_trim(R.den[i][j], atol, rtol)
            q, r = poly_divmod(R.num[i][j], den, atol, rtol)
            quot[i][j] = q
            rnum[i][j] = r
            rden[i][j] = den
    Q = poly2pm(quot)
    Q = PolyMatrix(Q.coeffs[: max(pm_degree(Q), 0) + 1])
    return Q, RationalMatrix(rnum, rden)


def rm_is_strictly_proper(R: RationalMatrix, atol: float = 0.0,
                          rtol: float | None = None) -> bool:
    m, n = R.shape
    for i in range(m):
        for j in range(n):
            if poly_degree(R.num[i][j], atol, rtol) >= poly_degree(R.den[i][j], atol, rtol):
                return False
    return True

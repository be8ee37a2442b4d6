"""Exact rational-arithmetic reference computations for small polynomial matrices.

Everything here uses :class:`fractions.Fraction`; there are no tolerances.
Intended for cross-checking the floating-point routines on desk-size
instances.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = [
    "ExactPoly", "ExactPolyMatrix", "ExactSmithData", "exact_smith", "exact_mults_at",
    "exact_rank", "minimal_indices_bruteforce", "structure_consistency", "dressed_matrix",
]

INF = float("inf")


# ---------------------------------------------------------------------------
# scalar polynomials (ascending coefficient tuples, no trailing zeros)

def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _trim(c) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class ExactPoly:
    """Polynomial with exact rational coefficients (ascending powers)."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence = ()):
        self.c = _trim(_frac(x) for x in coeffs)

    @classmethod
    def const(cls, a) -> "ExactPoly":
        return cls((a,))

    @classmethod
    def x_minus(cls, a) -> "ExactPoly":
        return cls((-_frac(a), 1))

    @property
    def degree(self) -> int:
        """Degree, ``-1`` for the zero polynomial."""
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    @property
    def lead(self) -> Fraction:
        return self.c[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactPoly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self) -> str:
        return f"ExactPoly({[str(x) for x in self.c]})"

    def __add__(self, other: "ExactPoly") -> "ExactPoly":
        n = max(len(self.c), len(other.c))
        a = self.c + (Fraction(0),) * (n - len(self.c))
        b = other.c + (Fraction(0),) * (n - len(other.c))
        return ExactPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "ExactPoly":
        return ExactPoly(-x for x in self.c)

    def __sub__(self, other: "ExactPoly") -> "ExactPoly":
        return self + (-other)

    def __mul__(self, other: "ExactPoly") -> "ExactPoly":
        if not self.c or not other.c:
            return ExactPoly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return ExactPoly(out)

    def scale(self, a) -> "ExactPoly":
        a = _frac(a)
        return ExactPoly(a * x for x in self.c)

    def divmod(self, other: "ExactPoly") -> tuple["ExactPoly", "ExactPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.c)
        dq = len(rem) - len(other.c)
        if dq < 0:
            return ExactPoly(), self
        q = [Fraction(0)] * (dq + 1)
        for i in range(dq, -1, -1):
            f = rem[i + len(other.c) - 1] / other.lead
            q[i] = f
            if f:
                for j, y in enumerate(other.c):
                    rem[i + j] -= f * y
        return ExactPoly(q), ExactPoly(rem[: len(other.c) - 1])

    def monic(self) -> "ExactPoly":
        return self.scale(1 / self.lead) if self.c else self

    def __call__(self, x):
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc


def poly_gcd(a: ExactPoly, b: ExactPoly) -> ExactPoly:
    """Monic greatest common divisor (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def poly_lcm(a: ExactPoly, b: ExactPoly) -> ExactPoly:
    if a.is_zero() or b.is_zero():
        return ExactPoly()
    return (a * b).divmod(poly_gcd(a, b))[0].monic()


# ---------------------------------------------------------------------------
# polynomial matrices

class ExactPolyMatrix:
    """Grid of :class:`ExactPoly` entries with a formal grade."""

    def __init__(self, entries: Sequence[Sequence[ExactPoly]], grade: int | None = None):
        rows = [list(r) for r in entries]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("entries must form a nonempty rectangular grid")
        self.entries = rows
        deg = self.degree
        self.grade = max(deg, 0) if grade is None else grade
        if self.grade < deg:
            raise ValueError("grade smaller than the degree")

    @classmethod
    def from_coeffs(cls, coeffs, grade: int | None = None) -> "ExactPolyMatrix":
        """From nested ``coeffs[i][row][col]`` (power ``i`` of lambda)."""
        coeffs = [[[_frac(x) for x in row] for row in Ci] for Ci in coeffs]
        m, n = len(coeffs[0]), len(coeffs[0][0])
        entries = [[ExactPoly(coeffs[i][r][c] for i in range(len(coeffs)))
                    for c in range(n)] for r in range(m)]
        return cls(entries, len(coeffs) - 1 if grade is None else grade)

    @classmethod
    def from_polymatrix(cls, P, grade: int | None = None) -> "ExactPolyMatrix":
        """From a float :class:`~polystruct.polymat.PolyMatrix` (converted exactly)."""
        c = P.coeffs
        return cls.from_coeffs([[[float(x) for x in row] for row in Ci] for Ci in c],
                               P.grade if grade is None else grade)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    @property
    def degree(self) -> int:
        return max(e.degree for r in self.entries for e in r)

    def coeffs(self) -> list:
        """Nested ``[i][row][col]`` Fractions up to the grade."""
        m, n = self.shape
        out = []
        for i in range(self.grade + 1):
            out.append([[self.entries[r][c].c[i] if i < len(self.entries[r][c].c)
                         else Fraction(0) for c in range(n)] for r in range(m)])
        return out

    def transpose(self) -> "ExactPolyMatrix":
        m, n = self.shape
        return ExactPolyMatrix([[self.entries[r][c] for r in range(m)] for c in range(n)],
                               self.grade)

    def reverse(self, k: int | None = None) -> "ExactPolyMatrix":
        """``lam**k * P(1/lam)``."""
        k = self.grade if k is None else k
        if k < self.degree:
            raise ValueError("reversal grade smaller than the degree")
        m, n = self.shape
        out = []
        for r in range(m):
            row = []
            for c in range(n):
                e = self.entries[r][c].c
                e = e + (Fraction(0),) * (k + 1 - len(e))
                row.append(ExactPoly(reversed(e)))
            out.append(row)
        return ExactPolyMatrix(out, k)

    def __matmul__(self, other: "ExactPolyMatrix") -> "ExactPolyMatrix":
        m, n = self.shape
        n2, q = other.shape
        if n != n2:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(m):
            row = []
            for j in range(q):
                acc = ExactPoly()
                for t in range(n):
                    acc = acc + self.entries[i][t] * other.entries[t][j]
                row.append(acc)
            out.append(row)
        return ExactPolyMatrix(out)

    def to_float_coeffs(self) -> list:
        return [[[float(x) for x in row] for row in Ci] for Ci in self.coeffs()]


@dataclass(frozen=True)
class ExactSmithData:
    """Monic invariant polynomials ``d_1 | d_2 | ... | d_r`` and the rank."""

    invariant_polys: tuple
    rank: int


# ---------------------------------------------------------------------------
# Smith form

def _min_degree_pivot(a, t):
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[0])):
            e = a[i][j]
            if not e.is_zero() and (best is None or e.degree < best[0]):
                best = (e.degree, i, j)
    return best


def exact_smith(P: ExactPolyMatrix) -> ExactSmithData:
    """Smith form by elementary operations over exact rationals.

    Pivots on a nonzero entry of least degree (first in row-major order on
    ties), clears its row and column by Euclidean division, and finally
    enforces the divisibility chain with gcd/lcm exchanges.
    """
    a = [list(r) for r in P.entries]
    m, n = P.shape
    diag = []
    for t in range(min(m, n)):
        while True:
            piv = _min_degree_pivot(a, t)
            if piv is None:
                break
            _, i, j = piv
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
            p = a[t][t]
            for i in range(t + 1, m):
                if not a[i][t].is_zero():
                    q = a[i][t].divmod(p)[0]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            for j in range(t + 1, n):
                if not a[t][j].is_zero():
                    q = a[t][j].divmod(p)[0]
                    for row in a:
                        row[j] = row[j] - q * row[t]
            # Leftover remainders have lower degree than the pivot; repeat.
            if all(a[i][t].is_zero() for i in range(t + 1, m)) and \
                    all(a[t][j].is_zero() for j in range(t + 1, n)):
                break
        if a[t][t].is_zero():
            break
        diag.append(a[t][t].monic())
    # gcd/lcm exchanges until d_i | d_{i+1}
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                g = poly_gcd(diag[i], diag[j])
                if g != diag[i]:
                    diag[i], diag[j] = g, poly_lcm(diag[i], diag[j])
                    changed = True
    return ExactSmithData(tuple(diag), len(diag))


def exact_rank(P: ExactPolyMatrix) -> int:
    return exact_smith(P).rank


def _multiplicity(d: ExactPoly, lam0: Fraction) -> int:
    f = ExactPoly.x_minus(lam0)
    k = 0
    while True:
        q, r = d.divmod(f)
        if not r.is_zero():
            return k
        d = q
        k += 1


def exact_mults_at(P: ExactPolyMatrix, lam0, grade: int | None = None) -> list[int]:
    """All ``r`` partial multiplicities of ``P`` at ``lam0`` (``inf`` allowed).

    At infinity the multiplicities are those of ``rev_k P`` at zero, with
    ``k`` the grade.
    """
    if isinstance(lam0, float) and lam0 == INF:
        k = P.grade if grade is None else grade
        return exact_mults_at(P.reverse(k), Fraction(0))
    lam0 = _frac(lam0)
    sm = exact_smith(P)
    return sorted(_multiplicity(d, lam0) for d in sm.invariant_polys)


# ---------------------------------------------------------------------------
# minimal indices

def _frac_rank(rows: list[list[Fraction]]) -> int:
    a = [list(r) for r in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, m):
            if a[i][col] != 0:
                f = a[i][col] / a[rank][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def _convolution_nullity(P: ExactPolyMatrix, d: int) -> int:
    """Nullity of the map from degree <= d vectors ``v`` to the coefficients of ``P v``."""
    C = P.coeffs()
    k = P.grade
    m, n = P.shape
    rows = []
    for i in range(k + d + 1):
        for r in range(m):
            row = []
            for j in range(d + 1):
                blk = i - j
                row.extend(C[blk][r][c] if 0 <= blk <= k else Fraction(0) for c in range(n))
            rows.append(row)
    return n * (d + 1) - _frac_rank(rows)


def _right_indices(P: ExactPolyMatrix, r: int, dmax: int) -> list[int]:
    n = P.shape[1]
    need = n - r
    found: list[int] = []
    prev_null = 0
    prev_count = 0
    for d in range(dmax + 1):
        if len(found) == need:
            break
        null = _convolution_nullity(P, d)
        count = null - prev_null  # number of indices <= d
        found += [d] * (count - prev_count)
        prev_null, prev_count = null, count
    if len(found) < need:
        raise _bound_error(need, len(found), dmax)
    return found


def _bound_error(need, got, dmax):
    from .errors import BoundTooSmall
    return BoundTooSmall(f"found {got} of {need} minimal indices up to degree {dmax}")


def minimal_indices_bruteforce(P: ExactPolyMatrix,
                               dmax: int | None = None) -> tuple[list[int], list[int]]:
    """Right and left minimal indices from nullities of convolution matrices.

    Parameters
    ----------
    P : ExactPolyMatrix
    dmax : int, optional
        Largest degree tried; defaults to ``grade * min(m, n)``.

    Raises
    ------
    BoundTooSmall
        If not all indices are found up to ``dmax``.
    """
    m, n = P.shape
    r = exact_rank(P)
    if dmax is None:
        dmax = P.grade * min(m, n)
    return _right_indices(P, r, dmax), _right_indices(P.transpose(), r, dmax)


# ---------------------------------------------------------------------------
# identities

def structure_consistency(report, k: int | None, r: int) -> tuple[bool, str]:
    """Check the index sum identities on a structure report.

    Parameters
    ----------
    report : StructureReport-like
        Needs ``delta_fin``, ``mu``, ``inf_zeros``, ``inf_poles``,
        ``pole_degree``, ``zero_degree`` and, for polynomial matrices,
        ``inf_mults``.
    k : int or None
        Grade; ``None`` for a rational matrix (only the pole/zero identity
        is checked).
    r : int
        Normal rank.

    Returns
    -------
    ok : bool
    message : str
        Name of the first violated identity, or ``"ok"``.
    """
    if k is not None:
        alpha = list(report.inf_mults)
        if report.delta_fin + sum(alpha) + report.mu != k * r:
            return False, (f"index sum: {report.delta_fin} + {sum(alpha)} + {report.mu}"
                           f" != {k}*{r}")
    if report.pole_degree != report.zero_degree + report.mu:
        return False, (f"pole/zero degree: {report.pole_degree} != "
                       f"{report.zero_degree} + {report.mu}")
    if k is not None:
        poles, zeros = report.inf_poles, report.inf_zeros
        plain = r - len(poles) - len(zeros)
        if plain < 0:
            return False, "infinite multiplicities: more poles and zeros than the rank"
        rebuilt = sorted([k - s for s in poles] + [k] * plain + [k + s for s in zeros])
        if rebuilt != sorted(report.inf_mults):
            return False, f"infinite multiplicities: {rebuilt} != {list(report.inf_mults)}"
    return True, "ok"


# ---------------------------------------------------------------------------
# random instances with known Smith form

def _elementary_unimodular(rng: random.Random, n: int, steps: int) -> ExactPolyMatrix:
    one, zero = ExactPoly.const(1), ExactPoly()
    U = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        if rng.random() < 0.5:
            f = ExactPoly.const(rng.choice([-2, -1, 1, 2]))
        else:
            f = ExactPoly((0, rng.choice([-1, 1])))
        U[i] = [a + f * b for a, b in zip(U[i], U[j])]
    return ExactPolyMatrix(U)


def dressed_matrix(seed: int, max_size: int = 3, max_degree: int = 2,
                   roots: Sequence[int] = (-2, -1, 0, 1, 2), attempts: int = 200):
    """Random ``U diag(d_1, ..., d_r, 0) V`` with integer data.

    The invariant polynomials are products of linear factors with integer
    roots, so the finite eigenvalues and their partial multiplicities are
    known by construction.

    Returns
    -------
    P : ExactPolyMatrix
        At most ``max_size x max_size`` and of degree at most ``max_degree``.
    smith : ExactSmithData
        The Smith data used to build ``P``.
    """
    rng = random.Random(seed)
    for _ in range(attempts):
        m = rng.randint(1, max_size)
        n = rng.randint(1, max_size)
        r = 0 if rng.random() < 0.1 else rng.randint(1, min(m, n))
        invs = []
        cur = ExactPoly.const(1)
        for _ in range(r):
            if rng.random() < 0.6:
                cur = cur * ExactPoly.x_minus(rng.choice(roots))
            invs.append(cur)
        if any(d.degree > max_degree for d in invs):
            continue
        zero = ExactPoly()
        D = ExactPolyMatrix([[invs[i] if i == j and i < r else zero for j in range(n)]
                             for i in range(m)])
        U = _elementary_unimodular(rng, m, rng.randint(1, 4))
        V = _elementary_unimodular(rng, n, rng.randint(1, 4))
        P = U @ D @ V
        if P.degree > max_degree or P.degree < 0 and r > 0:
            continue
        P = ExactPolyMatrix(P.entries, max(P.degree, 0))
        return P, ExactSmithData(tuple(invs), r)
    raise RuntimeError("no instance within the degree bound")

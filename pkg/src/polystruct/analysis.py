"""Structural analysis of polynomial and rational matrices."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotRegular
from .linearize import build_companion, recover_structure, rm_linearize
from .realize import lpsminreal, lsminreal
from .system import PencilRealization
from .pencil import KroneckerStructure, numerical_rank, pkstruct, prank
from .polymat import PolyMatrix, RationalMatrix, block_polymatrix, pm_degree, pm_eval

__all__ = [
    "StructureReport", "pm_kstruct", "pm_eigvals", "pm_zeros", "pm_poles", "pm_roots",
    "pm_rank", "is_pm_regular", "is_pm_unimodular", "rm_analyze", "rm_kstruct",
    "rm_zeros", "rm_poles", "rm_rank", "realization_kstruct",
]

_VIA = {"cf1": "cf1", "cf2": "cf2", "ls": "ls", "lps": "lps",
        "companion": "cf1", "descriptor_lin": "ls", "pencil_lin": "lps",
        "descriptor": "ls", "pencil": "lps"}


@dataclass(frozen=True)
class StructureReport:
    """Complete structural data of a polynomial or rational matrix.

    Attributes
    ----------
    rank : int
        Normal rank ``r``.
    right_indices, left_indices : tuple of int
        Right and left minimal indices.
    finite_zeros : tuple of (value, tuple of int)
        Finite zeros with their nonzero multiplicities.  For a polynomial
        matrix these are the finite eigenvalues with partial multiplicities.
    finite_poles : tuple of (value, tuple of int)
        Finite poles with their multiplicities (empty for polynomials).
    inf_indices : tuple of int
        The ``r`` structural indices at infinity, nondecreasing.  Negative
        entries are infinite poles, positive ones infinite zeros.
    grade : int or None
        Grade used for a polynomial matrix, ``None`` for a rational one.
    method : str
        Linearization route: ``cf1``, ``cf2``, ``ls``, ``lps`` or ``constant``.
    """

    rank: int
    right_indices: tuple = ()
    left_indices: tuple = ()
    finite_zeros: tuple = ()
    finite_poles: tuple = ()
    inf_indices: tuple = ()
    grade: int | None = None
    method: str = ""
    order: int | None = field(default=None, compare=False)

    @property
    def finite_eigs(self) -> tuple:
        return self.finite_zeros

    @property
    def inf_mults(self) -> tuple | None:
        """Partial multiplicities of the infinite eigenvalue (full ``r`` list)."""
        if self.grade is None:
            return None
        return tuple(s + self.grade for s in self.inf_indices)

    @property
    def inf_degrees(self) -> tuple:
        """Nonzero infinite partial multiplicities."""
        a = self.inf_mults
        return tuple(x for x in a if x > 0) if a is not None else ()

    @property
    def inf_zeros(self) -> list[int]:
        return sorted(s for s in self.inf_indices if s > 0)

    @property
    def inf_poles(self) -> list[int]:
        return sorted(-s for s in self.inf_indices if s < 0)

    @property
    def delta_fin(self) -> int:
        return sum(sum(m) for _, m in self.finite_zeros)

    @property
    def delta_inf(self) -> int:
        return sum(self.inf_degrees)

    @property
    def mu(self) -> int:
        return sum(self.right_indices) + sum(self.left_indices)

    @property
    def zero_degree(self) -> int:
        return self.delta_fin + sum(self.inf_zeros)

    @property
    def pole_degree(self) -> int:
        """McMillan degree: finite plus infinite poles."""
        return sum(sum(m) for _, m in self.finite_poles) + sum(self.inf_poles)

    def finite_eigenvalue_list(self) -> list:
        """Finite eigenvalues repeated by algebraic multiplicity."""
        return [v for v, m in self.finite_zeros for _ in range(sum(m))]


# ---------------------------------------------------------------------------
# helpers

def _as_polymatrix(P) -> PolyMatrix:
    return P if isinstance(P, PolyMatrix) else PolyMatrix(P)


def _resolve_grade(P: PolyMatrix, grade: int | None, atol, rtol) -> PolyMatrix:
    if grade is None:
        d = pm_degree(P, atol, rtol)
        return PolyMatrix(P.coeffs[: max(d, 0) + 1])
    return P.with_grade(grade)


def _infinite_from_pencil(ks: KroneckerStructure) -> list[int]:
    return sorted(s - 1 for s in ks.inf_degrees if s > 1)


def _assemble_indices(poles: list[int], zeros: list[int], r: int) -> tuple:
    nz = r - len(poles) - len(zeros)
    if nz < 0:
        raise RuntimeError("inconsistent infinite pole/zero counts; adjust the tolerances")
    return tuple(sorted([-s for s in poles] + [0] * nz + list(zeros)))


def _constant_report(P0: np.ndarray, atol, rtol) -> StructureReport:
    p, m = P0.shape
    r = numerical_rank(P0, atol, rtol)
    return StructureReport(rank=r, right_indices=(0,) * (m - r), left_indices=(0,) * (p - r),
                           inf_indices=(0,) * r, grade=0, method="constant")


def _realization_report(L, kind: str, atol, rtol, cluster_tol,
                        grade: int | None) -> StructureReport:
    n = L.order
    ks = pkstruct(L.system_pencil(), atol, rtol, cluster_tol)
    r = ks.rank - n
    zeros_inf = _infinite_from_pencil(ks)
    pole_pencil = L.state_pencil() if kind == "descriptor" else L.reduced_pole_pencil()
    kp = pkstruct(pole_pencil, atol, rtol, cluster_tol)
    poles_inf = _infinite_from_pencil(kp)
    finite_poles = kp.finite_eigs
    if grade is not None:
        # Polynomial matrices have no finite poles.
        finite_poles = ()
    sigma = _assemble_indices(poles_inf, zeros_inf, r)
    return StructureReport(rank=r, right_indices=ks.right_indices,
                           left_indices=ks.left_indices, finite_zeros=ks.finite_eigs,
                           finite_poles=tuple(finite_poles), inf_indices=sigma,
                           grade=grade, method="ls" if kind == "descriptor" else "lps",
                           order=n)


def _linearization_report(R, kind: str, atol, rtol, cluster_tol,
                          grade: int | None) -> StructureReport:
    L = rm_linearize(R, kind, minimal=True, atol=atol, rtol=rtol)
    return _realization_report(L, kind, atol, rtol, cluster_tol, grade)


def realization_kstruct(L: PencilRealization, minimal: bool = True, atol: float = 0.0,
                        rtol: float | None = None,
                        cluster_tol: float | None = None) -> StructureReport:
    """Structure of the rational matrix represented by a realization.

    With ``minimal=True`` the realization is first reduced (irreducible for
    a descriptor realization, strongly minimal otherwise), which the
    structure read-out requires.
    """
    kind = "descriptor" if L.is_descriptor else "pencil"
    if minimal:
        L = lsminreal(L, atol=atol, rtol=rtol) if kind == "descriptor" else \
            lpsminreal(L, atol, rtol)
    return _realization_report(L, kind, atol, rtol, cluster_tol, grade=None)


# ---------------------------------------------------------------------------
# polynomial matrices

def pm_kstruct(P, grade: int | None = None, via: str = "cf1", atol: float = 0.0,
               rtol: float | None = None, cluster_tol: float | None = None) -> StructureReport:
    """Kronecker, eigenvalue and pole/zero structure of a polynomial matrix.

    Parameters
    ----------
    P : PolyMatrix or array_like
    grade : int, optional
        Grade ``k >= degree``; defaults to the degree.  Only the infinite
        partial multiplicities depend on it.
    via : {"cf1", "cf2", "ls", "lps"}
        First or second companion form, descriptor realization or
        strongly minimal pencil realization.
    atol, rtol : float
        Rank thresholds.
    cluster_tol : float, optional
        Fixed relative radius for grouping eigenvalues.

    Returns
    -------
    StructureReport
    """
    P = _resolve_grade(_as_polymatrix(P), grade, atol, rtol)
    route = _VIA.get(via.lower())
    if route is None:
        raise ValueError(f"unknown route {via!r}")
    k = P.grade
    p, m = P.shape
    if k == 0:
        return _constant_report(P.coeffs[0], atol, rtol)
    if route in ("cf1", "cf2"):
        C = build_companion(P, route.upper())
        ks = pkstruct(C, atol, rtol, cluster_tol)
        rec, sig = recover_structure(ks, route.upper(), p, m, k)
        return StructureReport(rank=rec.rank, right_indices=rec.right_indices,
                               left_indices=rec.left_indices, finite_zeros=rec.finite_eigs,
                               inf_indices=sig.indices, grade=k, method=route)
    kind = "descriptor" if route == "ls" else "pencil"
    return _linearization_report(P, kind, atol, rtol, cluster_tol, grade=k)


def pm_eigvals(P, grade: int | None = None, via: str = "cf1", atol: float = 0.0,
               rtol: float | None = None):
    """Finite eigenvalues, number of infinite eigenvalues and multiplicity data.

    Returns
    -------
    finite : list
        Finite eigenvalues repeated by algebraic multiplicity.
    delta_inf : int
        Number of infinite eigenvalues at the given grade.
    data : tuple
        ``(finite eigenvalues with partial multiplicities, infinite
        partial multiplicities)``.
    """
    rep = pm_kstruct(P, grade, via, atol, rtol)
    return rep.finite_eigenvalue_list(), rep.delta_inf, (list(rep.finite_zeros), rep.inf_mults)


def pm_zeros(P, method: str = "companion", atol: float = 0.0, rtol: float | None = None):
    """Finite zeros with multiplicities and infinite zero multiplicities."""
    rep = pm_kstruct(P, None, method, atol, rtol)
    return list(rep.finite_zeros), rep.inf_zeros


def pm_poles(P, method: str = "companion", atol: float = 0.0, rtol: float | None = None):
    """Finite poles (always empty) and infinite pole multiplicities.

    The companion method reads the poles of ``P`` from the infinite zeros of
    the regular matrix ``[[P, I], [I, 0]]``.
    """
    P = _as_polymatrix(P)
    route = _VIA.get(method.lower())
    if route is None:
        raise ValueError(f"unknown method {method!r}")
    if route in ("cf1", "cf2"):
        P = _resolve_grade(P, None, atol, rtol)
        if P.grade == 0:
            return [], []
        p, m = P.shape
        blocks = [[P, PolyMatrix.identity(p).with_grade(P.grade)],
                  [PolyMatrix.identity(m).with_grade(P.grade), PolyMatrix.zeros(m, p, P.grade)]]
        rep = pm_kstruct(block_polymatrix(blocks), P.grade, route, atol, rtol)
        return [], rep.inf_zeros
    rep = pm_kstruct(P, None, route, atol, rtol)
    return [], rep.inf_poles


def pm_rank(P, method: str = "linearization", atol: float = 0.0,
            rtol: float | None = None, seed: int = 0) -> int:
    """Normal rank of a polynomial matrix.

    ``linearization`` uses the first companion form; ``evaluation`` takes
    the numerical rank at random points (two, plus more if they disagree).
    """
    P = _as_polymatrix(P)
    if method == "evaluation":
        rng = np.random.default_rng(seed)
        ranks = []
        while len(ranks) < 2 or (len(set(ranks)) > 1 and len(ranks) < 8):
            z = complex(rng.standard_normal(), rng.standard_normal())
            ranks.append(numerical_rank(pm_eval(P, z), atol, rtol))
        return max(ranks)
    if method != "linearization":
        raise ValueError(f"unknown method {method!r}")
    P = _resolve_grade(P, None, atol, rtol)
    if P.grade == 0:
        return numerical_rank(P.coeffs[0], atol, rtol)
    return prank(build_companion(P, "CF1"), atol, rtol) - P.cols * (P.grade - 1)


def pm_roots(P, atol: float = 0.0, rtol: float | None = None) -> list:
    """Roots of ``det P`` with multiplicity.

    Raises
    ------
    NotRegular
        If ``P`` is not square with full normal rank.
    """
    if not is_pm_regular(P, atol, rtol):
        raise NotRegular("matrix is singular")
    return pm_kstruct(P, None, "cf1", atol, rtol).finite_eigenvalue_list()


def is_pm_regular(P, atol: float = 0.0, rtol: float | None = None) -> bool:
    P = _as_polymatrix(P)
    return P.rows == P.cols and pm_rank(P, atol=atol, rtol=rtol) == P.rows


def is_pm_unimodular(P, atol: float = 0.0, rtol: float | None = None) -> bool:
    """True if ``P`` is square with a nonzero constant determinant."""
    P = _as_polymatrix(P)
    if P.rows != P.cols:
        return False
    rep = pm_kstruct(P, None, "cf1", atol, rtol)
    return rep.rank == P.rows and rep.delta_fin == 0


# ---------------------------------------------------------------------------
# rational matrices

def _as_rational(R) -> RationalMatrix:
    if isinstance(R, RationalMatrix):
        return R
    return RationalMatrix.from_polymatrix(_as_polymatrix(R))


def rm_kstruct(R, method: str = "descriptor_lin", atol: float = 0.0,
               rtol: float | None = None, cluster_tol: float | None = None) -> StructureReport:
    """Zeros, poles, minimal indices and rank of a rational matrix.

    The matrix is realized minimally; zeros and minimal indices come from
    the system matrix and poles from the pole pencil.
    """
    route = _VIA.get(method.lower())
    if route not in ("ls", "lps"):
        raise ValueError(f"unknown method {method!r}")
    kind = "descriptor" if route == "ls" else "pencil"
    return _linearization_report(_as_rational(R), kind, atol, rtol, cluster_tol, grade=None)


def rm_zeros(R, method: str = "descriptor_lin", atol: float = 0.0, rtol: float | None = None):
    rep = rm_kstruct(R, method, atol, rtol)
    return list(rep.finite_zeros), rep.inf_zeros


def rm_poles(R, method: str = "descriptor_lin", atol: float = 0.0, rtol: float | None = None):
    rep = rm_kstruct(R, method, atol, rtol)
    return list(rep.finite_poles), rep.inf_poles


def rm_rank(R, method: str = "descriptor_lin", atol: float = 0.0,
            rtol: float | None = None) -> int:
    return rm_kstruct(R, method, atol, rtol).rank


def rm_analyze(R, what: str = "kstruct", method: str = "descriptor_lin",
               atol: float = 0.0, rtol: float | None = None):
    """Dispatch to :func:`rm_kstruct`, :func:`rm_zeros`, :func:`rm_poles` or :func:`rm_rank`."""
    funcs = {"kstruct": rm_kstruct, "zeros": rm_zeros, "poles": rm_poles, "rank": rm_rank}
    if what not in funcs:
        raise ValueError(f"unknown analysis {what!r}")
    return funcs[what](R, method, atol, rtol)

"""Kronecker-like reduction of linear pencils ``M - lam*N``.

The reduction uses only orthogonal (unitary) transformations and SVD-based
rank decisions.  A first staircase pass compresses the columns of ``N`` and
the rows of the exposed part of ``M``; this peels off the right singular and
the infinite structure.  The same pass applied to the pertransposed
remainder peels off the left singular structure and leaves a regular pencil
``Mf - lam*Nf`` with ``Nf`` invertible.

Transformed pencil layout (rows and columns of ``Mt``, ``Nt``)::

    [ right+infinite staircase      *            *       ]
    [        0                Mf - lam*Nf        *       ]
    [        0                      0       left block   ]
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .polymat import EPS

INF = float("inf")

# Rank threshold for the shifted pencil that isolates one eigenvalue, relative
# to the size of the finite part.  Computed multiple eigenvalues scatter, so
# this is much looser than the threshold used for the main reduction.
SHIFT_RTOL = float(np.sqrt(EPS))

# Relative cluster radii tried from coarse to fine when grouping computed
# eigenvalues into distinct ones.
CLUSTER_LEVELS = (1e-3, 1e-5, 1e-7, 1e-9, 100 * EPS)


@dataclass(frozen=True)
class Pencil:
    """Linear pencil ``M - lam*N``."""

    M: np.ndarray
    N: np.ndarray

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.M))
        N = np.atleast_2d(np.asarray(self.N))
        dt = complex if (np.iscomplexobj(M) or np.iscomplexobj(N)) else float
        M = M.astype(dt)
        N = N.astype(dt)
        if M.shape != N.shape:
            raise ValueError(f"M and N differ in shape: {M.shape} vs {N.shape}")
        M.setflags(write=False)
        N.setflags(write=False)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "N", N)

    @property
    def shape(self) -> tuple[int, int]:
        return self.M.shape

    def transpose(self) -> "Pencil":
        return Pencil(self.M.T, self.N.T)

    def __call__(self, lam) -> np.ndarray:
        return self.M - lam * self.N


@dataclass(frozen=True)
class KLFResult:
    """Output of :func:`klf_reduce`.

    Attributes
    ----------
    Mt, Nt : ndarray
        Transformed matrices ``U @ M @ V`` and ``U @ N @ V``.
    right_dims : list of (int, int)
        Staircase pairs ``(nu_i, mu_i)`` of the first pass: ``nu_i`` columns
        compressed out of ``N`` and the rank ``mu_i`` of ``M`` on them.
    left_dims : list of (int, int)
        The same pairs for the pass on the pertransposed remainder.
    right_indices, left_indices : list of int
        Kronecker indices read from the staircase pairs.
    inf_degrees : list of int
        Degrees of the infinite elementary divisors.
    nf : int
        Order of the regular finite part.
    Mf, Nf : ndarray
        Regular finite part, ``Nf`` invertible.
    offsets : tuple of int
        ``(row, col)`` position of ``Mf`` inside ``Mt``.
    U, V : ndarray or None
        Orthogonal/unitary factors when requested.
    """

    Mt: np.ndarray
    Nt: np.ndarray
    right_dims: list
    left_dims: list
    right_indices: list
    left_indices: list
    inf_degrees: list
    nf: int
    Mf: np.ndarray
    Nf: np.ndarray
    offsets: tuple
    U: np.ndarray | None = None
    V: np.ndarray | None = None


@dataclass(frozen=True)
class KroneckerStructure:
    """Complete structural data of a pencil.

    Attributes
    ----------
    rank : int
        Normal rank.
    right_indices, left_indices : tuple of int
        Right (column) and left (row) Kronecker indices, nondecreasing.
    finite_eigs : tuple of (value, tuple of int)
        Distinct finite eigenvalues with their nonzero partial multiplicities.
    inf_degrees : tuple of int
        Degrees of the infinite elementary divisors, nondecreasing.
    """

    rank: int
    right_indices: tuple = ()
    left_indices: tuple = ()
    finite_eigs: tuple = ()
    inf_degrees: tuple = ()

    @property
    def delta_fin(self) -> int:
        return sum(sum(mults) for _, mults in self.finite_eigs)

    @property
    def delta_inf(self) -> int:
        return sum(self.inf_degrees)

    @property
    def mu(self) -> int:
        return sum(self.right_indices) + sum(self.left_indices)

    def transpose(self) -> "KroneckerStructure":
        return KroneckerStructure(self.rank, self.left_indices, self.right_indices,
                                  self.finite_eigs, self.inf_degrees)


@dataclass(frozen=True)
class InfStructuralIndices:
    """Nondecreasing structural indices at infinity (negative = pole, positive = zero)."""

    indices: tuple = field(default_factory=tuple)

    @property
    def poles(self) -> list[int]:
        return sorted(-s for s in self.indices if s < 0)

    @property
    def zeros(self) -> list[int]:
        return sorted(s for s in self.indices if s > 0)


# ---------------------------------------------------------------------------
# tolerances

# Multiplier on max(m, n) * eps for the default relative rank threshold.
# Roundoff accumulated over a few staircase steps routinely exceeds
# max(m, n) * eps * ||M||, so the plain value misjudges ranks.
RTOL_FACTOR = 100


def default_rtol(shape: tuple[int, int]) -> float:
    return RTOL_FACTOR * max(max(shape), 1) * EPS


def _norm2(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


def _tolerances(M, N, atol: float, rtol: float | None) -> tuple[float, float]:
    if rtol is None:
        rtol = default_rtol(M.shape)
    # Both thresholds scale with the whole pencil: a block that is pure
    # roundoff relative to the other must count as zero.
    tol = max(atol, rtol * max(_norm2(M), _norm2(N)))
    return tol, tol


def numerical_rank(a: np.ndarray, atol: float = 0.0, rtol: float | None = None) -> int:
    """SVD rank with threshold ``max(atol, rtol * sigma_max)``."""
    if a.size == 0:
        return 0
    if rtol is None:
        rtol = default_rtol(a.shape)
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > max(atol, rtol * s[0])))


# ---------------------------------------------------------------------------
# staircase passes

def _pertranspose(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a[::-1, ::-1].T)


def _staircase(M, N, tolM, tolN, U, V):
    """Peel right singular and infinite structure off ``M - lam*N`` in place.

    Returns the staircase pairs and the offsets of the untouched remainder.
    """
    m, n = M.shape
    dims = []
    i0 = j0 = 0
    while j0 < n:
        nc = n - j0
        Ns = N[i0:, j0:]
        if Ns.shape[0] == 0:
            rho, W = 0, np.eye(nc, dtype=M.dtype)
        else:
            _, s, vh = np.linalg.svd(Ns)
            rho = int(np.sum(s > tolN))
            W = np.concatenate([vh[rho:], vh[:rho]]).conj().T
        nu = nc - rho
        if nu == 0:
            break
        M[:, j0:] = M[:, j0:] @ W
        N[:, j0:] = N[:, j0:] @ W
        V[:, j0:] = V[:, j0:] @ W
        N[i0:, j0:j0 + nu] = 0.0
        A1 = M[i0:, j0:j0 + nu]
        if A1.shape[0] == 0:
            mu = 0
        else:
            u, s, _ = np.linalg.svd(A1)
            mu = int(np.sum(s > tolM))
            Q = u.conj().T
            M[i0:, :] = Q @ M[i0:, :]
            N[i0:, :] = Q @ N[i0:, :]
            U[i0:, :] = Q @ U[i0:, :]
            M[i0 + mu:, j0:j0 + nu] = 0.0
            N[i0:, j0:j0 + nu] = 0.0
        dims.append((nu, mu))
        i0 += mu
        j0 += nu
    return dims, i0, j0


def _indices_from_dims(dims) -> tuple[list[int], list[int]]:
    """Kronecker indices and infinite divisor degrees from staircase pairs."""
    kron, inf = [], []
    for i, (nu, mu) in enumerate(dims):
        kron += [i] * (nu - mu)
        nu_next = dims[i + 1][0] if i + 1 < len(dims) else 0
        inf += [i + 1] * (mu - nu_next)
    return kron, inf


def klf_reduce(P: Pencil, atol: float = 0.0, rtol: float | None = None,
               with_transforms: bool = False) -> KLFResult:
    """Reduce a pencil to Kronecker-like form by orthogonal transformations.

    Parameters
    ----------
    P : Pencil
    atol : float
        Absolute rank threshold.
    rtol : float, optional
        Relative rank threshold, multiplied by the larger of the 2-norms of
        ``M`` and ``N``.  Defaults to ``100 * max(m, n) * eps``.
    with_transforms : bool
        Also return the accumulated factors ``U`` and ``V``.

    Returns
    -------
    KLFResult
    """
    dt = P.M.dtype
    M = np.array(P.M, dtype=dt)
    N = np.array(P.N, dtype=dt)
    m, n = M.shape
    tolM, tolN = _tolerances(M, N, atol, rtol)
    U = np.eye(m, dtype=dt)
    V = np.eye(n, dtype=dt)

    dims_a, i0, j0 = _staircase(M, N, tolM, tolN, U, V)

    # Second pass on the pertransposed remainder exposes the left structure.
    Xm = _pertranspose(M[i0:, j0:])
    Xn = _pertranspose(N[i0:, j0:])
    Ub = np.eye(Xm.shape[0], dtype=dt)
    Vb = np.eye(Xm.shape[1], dtype=dt)
    dims_b, a0, b0 = _staircase(Xm, Xn, tolM, tolN, Ub, Vb)
    L = _pertranspose(Vb)
    R = _pertranspose(Ub)
    M[i0:, j0:] = _pertranspose(Xm)
    N[i0:, j0:] = _pertranspose(Xn)
    M[:i0, j0:] = M[:i0, j0:] @ R
    N[:i0, j0:] = N[:i0, j0:] @ R
    U[i0:, :] = L @ U[i0:, :]
    V[:, j0:] = V[:, j0:] @ R

    right, inf_a = _indices_from_dims(dims_a)
    left, inf_b = _indices_from_dims(dims_b)
    nf_rows = (m - i0) - b0
    nf_cols = (n - j0) - a0
    if nf_rows != nf_cols:
        raise RuntimeError("inconsistent rank decisions in the staircase reduction")
    nf = nf_rows
    Mf = M[i0:i0 + nf, j0:j0 + nf].copy()
    Nf = N[i0:i0 + nf, j0:j0 + nf].copy()
    return KLFResult(
        Mt=M, Nt=N, right_dims=dims_a, left_dims=dims_b,
        right_indices=sorted(right), left_indices=sorted(left),
        inf_degrees=sorted(inf_a + inf_b), nf=nf, Mf=Mf, Nf=Nf, offsets=(i0, j0),
        U=U if with_transforms else None, V=V if with_transforms else None)


# ---------------------------------------------------------------------------
# eigenvalues and partial multiplicities

def _shifted_mults(Mf, Nf, lam0, atol: float = 0.0, rtol: float | None = None,
                   shift_rtol: float | None = None) -> list[int]:
    """Partial multiplicities of ``lam0`` for the regular pencil ``Mf - lam*Nf``.

    The shifted pencil ``Nf - mu*(Mf - lam0*Nf)`` has an infinite eigenvalue
    exactly where ``lam0`` is an eigenvalue of the original one, with the
    same partial multiplicities.
    """
    if Mf.shape[0] == 0:
        return []
    if shift_rtol is None:
        shift_rtol = SHIFT_RTOL
    dt = np.result_type(Mf, Nf, lam0)
    A = np.array(Nf, dtype=dt)
    B = np.array(Mf - lam0 * Nf, dtype=dt)
    if rtol is None:
        rtol = default_rtol(A.shape)
    scale = _norm2(Mf) + abs(lam0) * _norm2(Nf)
    tolA = max(atol, rtol * _norm2(A))
    tolB = max(atol, shift_rtol * scale)
    n = A.shape[0]
    dims, _, _ = _staircase(A, B, tolA, tolB, np.eye(n, dtype=dt), np.eye(n, dtype=dt))
    _, inf = _indices_from_dims(dims)
    return sorted(inf)


def _single_linkage(values: list, radius: float) -> list[list]:
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            a, b = values[i], values[j]
            if abs(a - b) <= radius * (1.0 + max(abs(a), abs(b))):
                parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(values[i])
    return list(groups.values())


def _sort_key(z) -> tuple[float, float]:
    z = complex(z)
    return (round(z.real, 10), round(z.imag, 10))


def _clean_value(z, is_real: bool):
    z = complex(z)
    if is_real and abs(z.imag) <= SHIFT_RTOL * (1.0 + abs(z)):
        return float(z.real)
    if z.imag == 0.0:
        return float(z.real)
    return z


def group_eigenvalues(eigs, Mf, Nf, atol: float = 0.0, rtol: float | None = None,
                      cluster_tol: float | None = None, is_real: bool = True):
    """Group computed eigenvalues of ``Mf - lam*Nf`` into distinct ones.

    A candidate group is accepted when the partial multiplicities found at
    its mean add up to the group size; otherwise the group is split with a
    smaller radius.

    Returns
    -------
    list of (value, tuple of int)
    """
    levels = (cluster_tol,) if cluster_tol is not None else CLUSTER_LEVELS
    out = []

    def process(group, level):
        for c in _single_linkage(group, levels[level]):
            center = np.mean(c) if len(c) > 1 else c[0]
            if is_real and abs(np.imag(center)) <= SHIFT_RTOL * (1 + abs(center)):
                center = float(np.real(center))
            mults = _shifted_mults(Mf, Nf, center, atol, rtol)
            if sum(mults) == len(c):
                out.append((center, tuple(mults)))
            elif level + 1 < len(levels):
                process(c, level + 1)
            else:
                out.append((center, tuple([1] * len(c))))

    finite = [complex(e) for e in eigs if np.isfinite(e)]
    if finite:
        process(sorted(finite, key=_sort_key), 0)
    out = [(_clean_value(v, is_real), mults) for v, mults in out]
    return sorted(out, key=lambda t: _sort_key(t[0]))


def pkstruct(P: Pencil, atol: float = 0.0, rtol: float | None = None,
             cluster_tol: float | None = None) -> KroneckerStructure:
    """Kronecker structure of a pencil.

    Parameters
    ----------
    P : Pencil
    atol, rtol : float
        Rank thresholds passed to :func:`klf_reduce`.
    cluster_tol : float, optional
        Fixed relative radius for grouping computed eigenvalues.  By default
        a coarse-to-fine search is used (see :func:`group_eigenvalues`).

    Returns
    -------
    KroneckerStructure
    """
    klf = klf_reduce(P, atol=atol, rtol=rtol)
    m, n = P.shape
    rank = n - len(klf.right_indices)
    eigs = _regular_eigvals(klf.Mf, klf.Nf)
    groups = group_eigenvalues(eigs, klf.Mf, klf.Nf, atol, rtol, cluster_tol,
                               is_real=not np.iscomplexobj(P.M))
    return KroneckerStructure(rank=rank, right_indices=tuple(klf.right_indices),
                              left_indices=tuple(klf.left_indices),
                              finite_eigs=tuple(groups),
                              inf_degrees=tuple(klf.inf_degrees))


def _regular_eigvals(Mf, Nf) -> np.ndarray:
    if Mf.shape[0] == 0:
        return np.zeros(0)
    return sla.eigvals(Mf, Nf)


def peigvals(P: Pencil, atol: float = 0.0, rtol: float | None = None,
             cluster_tol: float | None = None) -> tuple[list, int]:
    """Finite eigenvalues (repeated by algebraic multiplicity) and the infinite count."""
    ks = pkstruct(P, atol, rtol, cluster_tol)
    finite = [v for v, mults in ks.finite_eigs for _ in range(sum(mults))]
    return finite, ks.delta_inf


def pzeros(P: Pencil, atol: float = 0.0, rtol: float | None = None,
           cluster_tol: float | None = None) -> tuple[list, list[int]]:
    """Finite zeros with partial multiplicities and infinite zero multiplicities.

    Returns
    -------
    finite : list of (value, tuple of int)
    infinite : list of int
        ``s - 1`` for every infinite elementary divisor of degree ``s > 1``.
    """
    ks = pkstruct(P, atol, rtol, cluster_tol)
    return list(ks.finite_eigs), sorted(s - 1 for s in ks.inf_degrees if s > 1)


def prank(P: Pencil, atol: float = 0.0, rtol: float | None = None) -> int:
    """Normal rank of a pencil."""
    klf = klf_reduce(P, atol=atol, rtol=rtol)
    return P.shape[1] - len(klf.right_indices)


def partial_mults_at(P: Pencil, lam0, atol: float = 0.0, rtol: float | None = None,
                     shift_rtol: float | None = None) -> list[int]:
    """Nonzero partial multiplicities of a pencil at ``lam0`` (``inf`` allowed).

    Parameters
    ----------
    P : Pencil
    lam0 : scalar or float('inf')
    shift_rtol : float, optional
        Relative rank threshold for ``Mf - lam0*Nf``; defaults to
        ``sqrt(eps)`` so that a slightly inaccurate ``lam0`` still matches.

    Returns
    -------
    list of int
        Nondecreasing; empty when ``lam0`` is not an eigenvalue.
    """
    klf = klf_reduce(P, atol=atol, rtol=rtol)
    if np.isinf(lam0):
        return list(klf.inf_degrees)
    return _shifted_mults(klf.Mf, klf.Nf, lam0, atol, rtol, shift_rtol)


def pencil_inf_indices(P: Pencil, atol: float = 0.0,
                       rtol: float | None = None) -> InfStructuralIndices:
    """Structural indices at infinity of a pencil.

    ``rank N`` entries equal to -1 followed by ``s - 1`` for each infinite
    elementary divisor degree ``s``.
    """
    klf = klf_reduce(P, atol=atol, rtol=rtol)
    r = P.shape[1] - len(klf.right_indices)
    h = len(klf.inf_degrees)
    return InfStructuralIndices(tuple([-1] * (r - h) + [s - 1 for s in klf.inf_degrees]))

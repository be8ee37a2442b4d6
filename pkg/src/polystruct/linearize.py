"""Linearizations of polynomial and rational matrices.

Companion forms carry the structure of a polynomial matrix to a pencil;
realizations ``(A - lam*E, B - lam*F, C - lam*G, D - lam*H)`` carry the
structure of a rational matrix to its system matrix.
"""
from __future__ import annotations

import numpy as np

from .errors import GradeZero, InconsistentDims, NotStrictlyProper, SingularD, SingularT
from .pencil import InfStructuralIndices, KroneckerStructure, Pencil, numerical_rank
from .polymat import PolyMatrix, RationalMatrix, pm_eval, poly_trim, rm_is_strictly_proper
from .system import PencilRealization, PolySystemMatrix, block_diag_realizations

__all__ = [
    "PencilRealization", "PolySystemMatrix", "build_companion", "recover_structure",
    "sp_realize", "polypart_pencil_real", "polypart_descriptor_real", "rm_linearize",
    "spm_linearize", "fraction_linearize", "pencil_to_descriptor",
]


# ---------------------------------------------------------------------------
# companion forms

def build_companion(P: PolyMatrix, variant: str = "CF1") -> Pencil:
    """Frobenius companion pencil ``M - lam*N`` of a polynomial matrix.

    Parameters
    ----------
    P : PolyMatrix
        ``p x m`` matrix of grade ``k >= 1``.
    variant : {"CF1", "CF2"}
        First form, of size ``(p + (k-1)m) x km``, or second form, of size
        ``pk x (m + (k-1)p)``.

    Returns
    -------
    Pencil
        For ``k = 1`` the pencil ``(-P0, P1)``, i.e. ``-P(lam)``.

    Raises
    ------
    GradeZero
        If ``P`` has grade 0.
    """
    variant = variant.upper()
    if variant not in ("CF1", "CF2"):
        raise ValueError(f"unknown companion variant {variant!r}")
    k = P.grade
    if k == 0:
        raise GradeZero("a constant matrix has no companion linearization")
    c = P.coeffs
    p, m = P.shape
    if k == 1:
        return Pencil(-c[0], c[1].copy())
    if variant == "CF2":
        T = build_companion(P.T, "CF1")
        return Pencil(T.M.T.copy(), T.N.T.copy())
    dt = c.dtype
    M = np.zeros((p + (k - 1) * m, k * m), dtype=dt)
    N = np.zeros_like(M)
    for j in range(k):
        M[:p, j * m:(j + 1) * m] = -c[k - 1 - j]
    for i in range(k - 1):
        M[p + i * m:p + (i + 1) * m, i * m:(i + 1) * m] = np.eye(m)
        N[p + i * m:p + (i + 1) * m, (i + 1) * m:(i + 2) * m] = np.eye(m)
    N[:p, :m] = c[k]
    return Pencil(M, N)


def recover_structure(S: KroneckerStructure, variant: str, p: int, m: int,
                      k: int) -> tuple[KroneckerStructure, InfStructuralIndices]:
    """Structure of a polynomial matrix from that of its companion pencil.

    Parameters
    ----------
    S : KroneckerStructure
        Structure of ``build_companion(P, variant)``.
    variant : {"CF1", "CF2"}
    p, m : int
        Size of ``P``.
    k : int
        Grade used to build the companion pencil.

    Returns
    -------
    structure : KroneckerStructure
        ``inf_degrees`` holds the nonzero infinite partial multiplicities of
        ``P`` at grade ``k``.
    infinite : InfStructuralIndices
        The ``r`` structural indices at infinity.

    Raises
    ------
    InconsistentDims
        If the companion data cannot come from a ``p x m`` grade-``k`` matrix.
    """
    variant = variant.upper()
    if k < 1:
        raise GradeZero("grade must be at least 1")
    shift = k - 1
    right, left = list(S.right_indices), list(S.left_indices)
    if variant == "CF1":
        right = [e - shift for e in right]
        r = S.rank - m * shift
    elif variant == "CF2":
        left = [e - shift for e in left]
        r = S.rank - p * shift
    else:
        raise ValueError(f"unknown companion variant {variant!r}")
    if any(e < 0 for e in right + left):
        raise InconsistentDims("minimal index shifted below zero")
    if r < 0 or r > min(p, m) or len(right) != m - r or len(left) != p - r:
        raise InconsistentDims("rank and index counts do not match the matrix size")
    inf = sorted(S.inf_degrees)
    if len(inf) > r:
        raise InconsistentDims("more infinite elementary divisors than the rank allows")
    alpha = [0] * (r - len(inf)) + inf
    sigma = tuple(a - k for a in alpha)
    ks = KroneckerStructure(rank=r, right_indices=tuple(sorted(right)),
                            left_indices=tuple(sorted(left)),
                            finite_eigs=S.finite_eigs, inf_degrees=tuple(inf))
    return ks, InfStructuralIndices(sigma)


# ---------------------------------------------------------------------------
# strictly proper part

def _monic(c: np.ndarray) -> np.ndarray:
    c = poly_trim(c)
    return c / c[-1]


def _same_poly(a: np.ndarray, b: np.ndarray) -> bool:
    return a.size == b.size and np.allclose(a, b, rtol=1e-10, atol=1e-12)


def _companion_block(den: np.ndarray, nums: list[np.ndarray]):
    """Controllable companion of ``nums[i] / den`` with a single input.

    ``den`` is monic of degree ``q``; returns ``A`` (q x q), ``b`` (q,),
    ``C`` (len(nums) x q).
    """
    q = den.size - 1
    A = np.zeros((q, q), dtype=np.result_type(den, *nums))
    A[0, :] = -den[q - 1::-1]
    A[1:, :-1] = np.eye(q - 1)
    b = np.zeros(q, dtype=A.dtype)
    b[0] = 1.0
    C = np.zeros((len(nums), q), dtype=A.dtype)
    for i, nu in enumerate(nums):
        coef = np.zeros(q, dtype=A.dtype)
        coef[: min(nu.size, q)] = nu[:q]
        C[i] = coef[::-1]
    return A, b, C


def _poly_mul(a, b):
    return np.convolve(a, b)


def sp_realize(Rsp: RationalMatrix, mode: str = "columnwise") -> PencilRealization:
    """Realization ``(A - lam*I, B, C, 0)`` of a strictly proper rational matrix.

    Parameters
    ----------
    Rsp : RationalMatrix
    mode : {"entrywise", "columnwise", "rowwise"}
        ``entrywise`` stacks one companion block per nonzero entry.
        ``columnwise`` uses one block per column over a common denominator
        and is controllable; ``rowwise`` is its dual and is observable.

    Raises
    ------
    NotStrictlyProper
    """
    if not rm_is_strictly_proper(Rsp):
        raise NotStrictlyProper("the rational matrix has a nonzero polynomial part")
    if mode == "rowwise":
        return sp_realize(Rsp.transpose(), "columnwise").transpose()
    if mode not in ("entrywise", "columnwise"):
        raise ValueError(f"unknown mode {mode!r}")
    p, m = Rsp.shape
    blocks = []  # (A, b, C rows placed at output indices, input index)
    for j in range(m):
        entries = []
        for i in range(p):
            num = poly_trim(Rsp.num[i][j])
            if not np.any(num):
                continue
            den = poly_trim(Rsp.den[i][j])
            lead = den[-1]
            entries.append((i, num / lead, _monic(den)))
        if not entries:
            continue
        if mode == "entrywise":
            for i, num, den in entries:
                A, b, c = _companion_block(den, [num])
                Cfull = np.zeros((p, A.shape[0]), dtype=A.dtype)
                Cfull[i] = c[0]
                blocks.append((A, b, Cfull, j))
            continue
        distinct: list[np.ndarray] = []
        for _, _, den in entries:
            if not any(_same_poly(den, d) for d in distinct):
                distinct.append(den)
        common = np.ones(1)
        for d in distinct:
            common = _poly_mul(common, d)
        nums = [np.zeros(1)] * p
        for i, num, den in entries:
            cofactor = np.ones(1)
            skipped = False
            for d in distinct:
                if not skipped and _same_poly(den, d):
                    skipped = True
                    continue
                cofactor = _poly_mul(cofactor, d)
            nums[i] = _poly_mul(num, cofactor)
        A, b, Cfull = _companion_block(common, nums)
        blocks.append((A, b, Cfull, j))
    n = sum(blk[0].shape[0] for blk in blocks)
    dt = np.result_type(float, *[blk[0] for blk in blocks]) if blocks else float
    A = np.zeros((n, n), dtype=dt)
    B = np.zeros((n, m), dtype=dt)
    C = np.zeros((p, n), dtype=dt)
    off = 0
    for Ai, bi, Ci, j in blocks:
        q = Ai.shape[0]
        A[off:off + q, off:off + q] = Ai
        B[off:off + q, j] = bi
        C[:, off:off + q] = Ci
        off += q
    return PencilRealization.build(A=A, B=B, C=C, n=n, m=m, p=p)


# ---------------------------------------------------------------------------
# polynomial part

def _pick_mode(mode: str, p: int, m: int) -> str:
    if mode == "auto":
        return "controllable" if m <= p else "observable"
    if mode not in ("controllable", "observable"):
        raise ValueError(f"unknown mode {mode!r}")
    return mode


def polypart_pencil_real(Rpol: PolyMatrix, mode: str = "auto") -> PencilRealization:
    """Pencil realization of a polynomial matrix.

    ``controllable`` gives order ``m(k-1)``, ``observable`` gives ``p(k-1)``;
    ``auto`` picks the smaller one.  Grades 0 and 1 give order 0.
    """
    p, m = Rpol.shape
    c = Rpol.coeffs
    k = Rpol.grade
    if k == 0:
        return PencilRealization.build(D=c[0], n=0, m=m, p=p)
    if k == 1:
        return PencilRealization.build(D=c[0], H=-c[1], n=0, m=m, p=p)
    mode = _pick_mode(mode, p, m)
    if mode == "observable":
        return polypart_pencil_real(Rpol.T, "controllable").transpose()
    n = m * (k - 1)
    dt = c.dtype
    A = np.eye(n, dtype=dt)
    E = np.zeros((n, n), dtype=dt)
    for i in range(k - 2):
        E[i * m:(i + 1) * m, (i + 1) * m:(i + 2) * m] = np.eye(m)
    F = np.zeros((n, m), dtype=dt)
    F[n - m:] = np.eye(m)
    C = np.zeros((p, n), dtype=dt)
    G = np.zeros((p, n), dtype=dt)
    C[:, :m] = c[k - 1]
    G[:, :m] = -c[k]
    for j in range(1, k - 1):
        C[:, j * m:(j + 1) * m] = c[k - 1 - j]
    return PencilRealization.build(A=A, E=E, F=F, C=C, G=G, D=c[0], n=n, m=m, p=p)


def polypart_descriptor_real(Rpol: PolyMatrix, mode: str = "auto") -> PencilRealization:
    """Descriptor realization ``(I - lam*E, B, C, P0)`` with ``E`` nilpotent.

    ``controllable`` gives order ``m(k+1)``, ``observable`` gives ``p(k+1)``.
    A constant matrix gives order 0.
    """
    p, m = Rpol.shape
    c = Rpol.coeffs
    k = Rpol.grade
    if k == 0:
        return PencilRealization.build(D=c[0], n=0, m=m, p=p)
    mode = _pick_mode(mode, p, m)
    if mode == "observable":
        return polypart_descriptor_real(Rpol.T, "controllable").transpose()
    n = m * (k + 1)
    dt = c.dtype
    A = np.eye(n, dtype=dt)
    E = np.zeros((n, n), dtype=dt)
    for i in range(k):
        E[i * m:(i + 1) * m, (i + 1) * m:(i + 2) * m] = np.eye(m)
    B = np.zeros((n, m), dtype=dt)
    B[n - m:] = -np.eye(m)
    C = np.zeros((p, n), dtype=dt)
    for j in range(k):
        C[:, j * m:(j + 1) * m] = c[k - j]
    return PencilRealization.build(A=A, E=E, B=B, C=C, D=c[0], n=n, m=m, p=p)


# ---------------------------------------------------------------------------
# rational matrices

def rm_linearize(R: RationalMatrix | PolyMatrix, kind: str = "descriptor",
                 minimal: bool = True, atol: float = 0.0,
                 rtol: float | None = None) -> PencilRealization:
    """Realization of a rational matrix as strictly proper part plus polynomial part.

    Parameters
    ----------
    R : RationalMatrix or PolyMatrix
    kind : {"descriptor", "pencil"}
    minimal : bool
        Reduce the polynomial part to an irreducible descriptor realization
        or to a strongly minimal pencil realization.  The strictly proper
        part is always reduced to least order.

    Returns
    -------
    PencilRealization
        State ordered as (strictly proper part, polynomial part).
    """
    from .realize import lpsminreal, lsminreal, rm2lspm

    if isinstance(R, PolyMatrix):
        R = RationalMatrix.from_polymatrix(R)
    if kind not in ("descriptor", "pencil"):
        raise ValueError(f"unknown kind {kind!r}")
    sp, Rpol = rm2lspm(R, atol, rtol)
    p, m = R.shape
    if kind == "pencil":
        pol = polypart_pencil_real(Rpol)
        if minimal:
            pol = lpsminreal(pol, atol, rtol)
    else:
        pol = polypart_descriptor_real(Rpol)
        if minimal:
            pol = lsminreal(pol, atol=atol, rtol=rtol)
    return block_diag_realizations(sp, pol)


def _probe_points(count: int, seed: int = 2024) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal(count) + 1j * rng.standard_normal(count)


def _is_regular_by_probe(T: PolyMatrix, probes: int = 3) -> bool:
    n = T.rows
    if n == 0:
        return True
    return any(numerical_rank(pm_eval(T, z)) == n for z in _probe_points(probes))


def spm_linearize(S: PolySystemMatrix, kind: str = "descriptor", minimal: bool = True,
                  atol: float = 0.0, rtol: float | None = None) -> PencilRealization:
    """Realization of ``V T^{-1} U + W`` from a polynomial system matrix.

    The stacked matrix ``[[-T, U], [V, W]]`` is realized as one polynomial
    matrix; its first ``n`` inputs and outputs are then absorbed into the
    state so that ``-T`` becomes part of ``A - lam*E``.

    Raises
    ------
    SingularT
        If ``T`` is not regular.
    """
    from .realize import lpsminreal, lsminreal

    if kind not in ("descriptor", "pencil"):
        raise ValueError(f"unknown kind {kind!r}")
    if not _is_regular_by_probe(S.T):
        raise SingularT("T is singular")
    n = S.state_size
    stacked = S.stacked()
    if kind == "pencil":
        L = polypart_pencil_real(stacked)
    else:
        L = polypart_descriptor_real(stacked)
    A = np.block([[L.A, L.B[:, :n]], [L.C[:n], L.D[:n, :n]]])
    E = np.block([[L.E, L.F[:, :n]], [L.G[:n], L.H[:n, :n]]])
    B = np.vstack([L.B[:, n:], L.D[:n, n:]])
    F = np.vstack([L.F[:, n:], L.H[:n, n:]])
    C = np.hstack([L.C[n:], L.D[n:, :n]])
    G = np.hstack([L.G[n:], L.H[n:, :n]])
    out = PencilRealization(A, E, B, F, C, G, L.D[n:, n:], L.H[n:, n:])
    if not minimal:
        return out
    if kind == "pencil":
        return lpsminreal(out, atol, rtol)
    return lsminreal(out, atol=atol, rtol=rtol)


def fraction_linearize(N: PolyMatrix | None, D: PolyMatrix, kind: str = "lpmfd",
                       form: str = "descriptor", minimal: bool = True,
                       atol: float = 0.0, rtol: float | None = None) -> PencilRealization:
    """Realization of ``D^{-1} N``, ``N D^{-1}`` or ``D^{-1}``.

    Parameters
    ----------
    N : PolyMatrix or None
        Numerator; ignored for ``kind="pminv"``.
    D : PolyMatrix
        Square regular denominator.
    kind : {"lpmfd", "rpmfd", "pminv"}
    form : {"descriptor", "pencil"}

    Raises
    ------
    SingularD
    """
    if D.rows != D.cols:
        raise SingularD("the denominator must be square")
    if not _is_regular_by_probe(D):
        raise SingularD("the denominator is singular")
    n = D.rows
    if kind == "lpmfd":
        I = PolyMatrix.identity(n)
        S = PolySystemMatrix(D, N, I, PolyMatrix.zeros(n, N.cols))
    elif kind == "rpmfd":
        I = PolyMatrix.identity(n)
        S = PolySystemMatrix(D, I, N, PolyMatrix.zeros(N.rows, n))
    elif kind == "pminv":
        I = PolyMatrix.identity(n)
        S = PolySystemMatrix(D, I, I, PolyMatrix.zeros(n, n))
    else:
        raise ValueError(f"unknown fraction kind {kind!r}")
    return spm_linearize(S, form, minimal, atol, rtol)


def pencil_to_descriptor(R: PencilRealization) -> PencilRealization:
    """Descriptor realization of the matrix represented by a pencil realization.

    The input and output are appended to the state, which raises the order
    by ``m + p``.
    """
    n, m, p = R.order, R.inputs, R.outputs
    z = np.zeros
    dt = np.result_type(R.A, R.E, R.B, R.F, R.C, R.G, R.D, R.H)
    A = np.block([[R.A, R.B, z((n, p))],
                  [R.C, R.D, -np.eye(p)],
                  [z((m, n)), np.eye(m), z((m, p))]]).astype(dt)
    E = np.block([[R.E, R.F, z((n, p))],
                  [R.G, R.H, z((p, p))],
                  [z((m, n)), z((m, m)), z((m, p))]]).astype(dt)
    B = np.vstack([z((n, m)), z((p, m)), -np.eye(m)]).astype(dt)
    C = np.hstack([z((p, n)), z((p, m)), np.eye(p)]).astype(dt)
    return PencilRealization.build(A=A, E=E, B=B, C=C, D=z((p, m)),
                                   n=n + m + p, m=m, p=p)

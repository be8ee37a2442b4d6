"""Order reduction of realizations and reconstruction of the represented matrix."""
from __future__ import annotations

import numpy as np

from .errors import NotPolynomial, SingularPencil
from .pencil import default_rtol, klf_reduce, prank, _norm2
from .polymat import EPS, PolyMatrix, RationalMatrix, poly_trim
from .system import PencilRealization

__all__ = [
    "staircase_reduce", "lsminreal", "lpsminreal", "rm2lspm",
    "realization_to_matrix", "check_regular",
]


# ---------------------------------------------------------------------------
# standard state-space staircase

def _standard_tol(A, B, atol: float, rtol: float | None) -> float:
    if rtol is None:
        rtol = default_rtol((A.shape[0], A.shape[0] + B.shape[1]))
    return max(atol, rtol * max(_norm2(A), _norm2(B)))


def _controllable_part(A, B, C, atol: float = 0.0, rtol: float | None = None):
    """Orthogonal controllability staircase of ``(A, B)``.

    Returns ``(Ac, Bc, Cc)`` restricted to the controllable subspace.
    """
    n = A.shape[0]
    if n == 0:
        return A, B, C
    tol = _standard_tol(A, B, atol, rtol)
    A = A.copy()
    B = B.copy()
    C = C.copy()
    off = 0
    block = B
    while off < n:
        if block.shape[1] == 0:
            break
        u, s, _ = np.linalg.svd(block)
        rho = int(np.sum(s > tol))
        if rho == 0:
            break
        Q = u.conj().T
        A[off:, :] = Q @ A[off:, :]
        A[:, off:] = A[:, off:] @ u
        B[off:, :] = Q @ B[off:, :]
        C[:, off:] = C[:, off:] @ u
        prev = off
        off += rho
        block = A[off:, prev:off]
    return A[:off, :off], B[:off], C[:, :off]


def _standard_reduce(A, B, C, contr: bool, obs: bool, atol=0.0, rtol=None):
    if contr:
        A, B, C = _controllable_part(A, B, C, atol, rtol)
    if obs:
        At, Ct, Bt = _controllable_part(A.T.conj(), C.T.conj(), B.T.conj(), atol, rtol)
        A, B, C = At.T.conj(), Bt.T.conj(), Ct.T.conj()
    return A, B, C


# ---------------------------------------------------------------------------
# descriptor reductions

def check_regular(R: PencilRealization, atol: float = 0.0, rtol: float | None = None):
    """Raise :class:`SingularPencil` unless ``A - lam*E`` is regular."""
    n = R.order
    if n and prank(R.state_pencil(), atol, rtol) < n:
        raise SingularPencil("the state pencil A - lam*E is singular")


def _split_finite_infinite(R: PencilRealization, atol=0.0, rtol=None):
    """Decouple a descriptor realization into finite and infinite parts.

    Returns ``(Af, Bf, Cf)`` with identity descriptor matrix and
    ``(Nil, Bi, Ci)`` with ``I - lam*Nil``, ``Nil`` nilpotent.
    """
    klf = klf_reduce(R.state_pencil(), atol, rtol, with_transforms=True)
    n = R.order
    ni = klf.offsets[1]
    nf = klf.nf
    if ni + nf != n:
        raise SingularPencil("the state pencil A - lam*E is singular")
    At, Et, U, V = klf.Mt, klf.Nt, klf.U, klf.V
    Bt = U @ R.B
    Ct = R.C @ V
    Ai, A12, Af = At[:ni, :ni], At[:ni, ni:], At[ni:, ni:]
    Ei, E12, Ef = Et[:ni, :ni], Et[:ni, ni:], Et[ni:, ni:]
    if ni and nf:
        # Solve Ai Y + X Af = -A12, Ei Y + X Ef = -E12 for the decoupling.
        Ii, If = np.eye(ni), np.eye(nf)
        K = np.block([[np.kron(If, Ai), np.kron(Af.T, Ii)],
                      [np.kron(If, Ei), np.kron(Ef.T, Ii)]])
        rhs = -np.concatenate([A12.reshape(-1, order="F"), E12.reshape(-1, order="F")])
        sol = np.linalg.solve(K, rhs)
        Y = sol[: ni * nf].reshape((ni, nf), order="F")
        X = sol[ni * nf:].reshape((ni, nf), order="F")
        Bi = Bt[:ni] + X @ Bt[ni:]
        Cf = Ct[:, :ni] @ Y + Ct[:, ni:]
    else:
        Bi = Bt[:ni]
        Cf = Ct[:, ni:]
    Bf = Bt[ni:]
    Ci = Ct[:, :ni]
    finite = (np.linalg.solve(Ef, Af), np.linalg.solve(Ef, Bf), Cf)
    infinite = (np.linalg.solve(Ai, Ei), np.linalg.solve(Ai, Bi), Ci)
    return finite, infinite


def _is_identity(E) -> bool:
    return E.shape[0] == 0 or np.allclose(E, np.eye(E.shape[0]), rtol=0, atol=10 * EPS)


def _remove_nondynamic(A, E, B, C, D, atol=0.0, rtol=None):
    """Residualize first order infinite eigenvalues of ``A - lam*E``."""
    n = A.shape[0]
    if n == 0:
        return A, E, B, C, D
    if rtol is None:
        rtol = default_rtol((n, n))
    u, s, vh = np.linalg.svd(E)
    rho = int(np.sum(s > max(atol, rtol * (s[0] if s.size else 0.0))))
    Q, Z = u.conj().T, vh.conj().T
    A, E, B, C = Q @ A @ Z, Q @ E @ Z, Q @ B, C @ Z
    E[rho:, :] = 0.0
    E[:, rho:] = 0.0
    A22 = A[rho:, rho:]
    if A22.size == 0:
        return A, E, B, C, D
    u2, s2, vh2 = np.linalg.svd(A22)
    t = int(np.sum(s2 > max(atol, rtol * max(_norm2(A), 1.0))))
    if t == 0:
        return A, E, B, C, D
    Q2 = np.eye(n, dtype=A.dtype)
    Z2 = np.eye(n, dtype=A.dtype)
    Q2[rho:, rho:] = u2.conj().T
    Z2[rho:, rho:] = vh2.conj().T
    A, E, B, C = Q2 @ A @ Z2, Q2 @ E @ Z2, Q2 @ B, C @ Z2
    e = np.arange(rho, rho + t)
    k = np.concatenate([np.arange(rho), np.arange(rho + t, n)])
    Aee = A[np.ix_(e, e)]
    Ake = A[np.ix_(k, e)]
    Aek = A[np.ix_(e, k)]
    Ce = C[:, e]
    Ar = A[np.ix_(k, k)] - Ake @ np.linalg.solve(Aee, Aek)
    Br = B[k] - Ake @ np.linalg.solve(Aee, B[e])
    Cr = C[:, k] - Ce @ np.linalg.solve(Aee, Aek)
    Dr = D - Ce @ np.linalg.solve(Aee, B[e])
    return Ar, E[np.ix_(k, k)], Br, Cr, Dr


def staircase_reduce(R: PencilRealization, direction: str = "both", part: str = "both",
                     atol: float = 0.0, rtol: float | None = None):
    """Remove uncontrollable and/or unobservable eigenvalues of a descriptor realization.

    Parameters
    ----------
    R : PencilRealization
        Descriptor realization with regular ``A - lam*E``.
    direction : {"controllability", "observability", "both"}
    part : {"finite", "infinite", "both"}
        Which eigenvalues of ``A - lam*E`` may be deflated.
    atol, rtol : float
        Rank thresholds.

    Returns
    -------
    reduced : PencilRealization
        Realization of the same matrix.
    deflated : int
        Number of removed states.

    Notes
    -----
    Realizations with ``E = I`` are reduced by an orthogonal staircase.  In
    general the finite and infinite parts of ``A - lam*E`` are first
    decoupled (orthogonal reduction followed by a generalized Sylvester
    solve) and each part is reduced by an orthogonal staircase.
    """
    if direction not in ("controllability", "observability", "both"):
        raise ValueError(f"unknown direction {direction!r}")
    if part not in ("finite", "infinite", "both"):
        raise ValueError(f"unknown part {part!r}")
    if not R.is_descriptor:
        raise ValueError("staircase_reduce expects a descriptor realization")
    contr = direction in ("controllability", "both")
    obs = direction in ("observability", "both")
    n = R.order
    if n == 0:
        return R, 0
    if _is_identity(R.E):
        if part == "infinite":
            return R, 0
        A, B, C = _standard_reduce(R.A, R.B, R.C, contr, obs, atol, rtol)
        out = PencilRealization.descriptor(A, np.eye(A.shape[0]), B, C, R.D)
        return out, n - out.order
    check_regular(R, atol, rtol)
    (Af, Bf, Cf), (Nil, Bi, Ci) = _split_finite_infinite(R, atol, rtol)
    if part in ("finite", "both"):
        Af, Bf, Cf = _standard_reduce(Af, Bf, Cf, contr, obs, atol, rtol)
    if part in ("infinite", "both"):
        Nil, Bi, Ci = _standard_reduce(Nil, Bi, Ci, contr, obs, atol, rtol)
    out = _assemble_descriptor(Af, Bf, Cf, np.eye(Nil.shape[0]), Nil, Bi, Ci, R.D)
    return out, n - out.order


def _assemble_descriptor(Af, Bf, Cf, Ai, Ei, Bi, Ci, D) -> PencilRealization:
    nf, ni = Af.shape[0], Ai.shape[0]
    dt = np.result_type(Af, Ai, Bf, Bi, Cf, Ci, D)
    A = np.zeros((nf + ni, nf + ni), dtype=dt)
    E = np.zeros_like(A)
    A[:nf, :nf] = Af
    A[nf:, nf:] = Ai
    E[:nf, :nf] = np.eye(nf)
    E[nf:, nf:] = Ei
    B = np.vstack([Bf, Bi]) if nf + ni else np.zeros((0, D.shape[1]))
    C = np.hstack([Cf, Ci]) if nf + ni else np.zeros((D.shape[0], 0))
    return PencilRealization.build(A=A, E=E, B=B, C=C, D=D, n=nf + ni,
                                   m=D.shape[1], p=D.shape[0])


def lsminreal(R: PencilRealization, contr: bool = True, obs: bool = True,
              noseig: bool = False, atol: float = 0.0,
              rtol: float | None = None) -> PencilRealization:
    """Irreducible or minimal descriptor realization.

    Parameters
    ----------
    R : PencilRealization
        Descriptor realization.
    contr, obs : bool
        Remove uncontrollable / unobservable finite and infinite eigenvalues.
    noseig : bool
        Also eliminate non-dynamic modes (first order infinite elementary
        divisors of ``A - lam*E``).  This step uses non-orthogonal
        eliminations.

    Returns
    -------
    PencilRealization

    Raises
    ------
    SingularPencil
        If ``A - lam*E`` is not regular.
    """
    check_regular(R, atol, rtol)
    if R.order == 0:
        return R
    direction = "both" if (contr and obs) else ("controllability" if contr else
                                                ("observability" if obs else None))
    if direction is not None:
        R, _ = staircase_reduce(R, direction, "both", atol, rtol)
    if noseig and R.order:
        A, E, B, C, D = _remove_nondynamic(R.A, R.E, R.B, R.C, R.D, atol, rtol)
        R = PencilRealization.build(A=A, E=E, B=B, C=C, D=D, n=A.shape[0],
                                    m=R.inputs, p=R.outputs)
    return R


# ---------------------------------------------------------------------------
# strongly minimal pencil realizations

def _deflate_column_pencil(R: PencilRealization, atol=0.0, rtol=None):
    """Remove all finite and infinite eigenvalues of ``[A - lam*E; C - lam*G]``.

    Uses orthogonal ``Q``, ``Z`` on the state equations and adds a constant
    combination ``X`` of state equations to the output equations.
    """
    n = R.order
    if n == 0:
        return R, 0
    klf = klf_reduce(R.column_pencil(), atol, rtol, with_transforms=True)
    n1 = klf.offsets[1] + klf.nf
    if n1 == 0:
        return R, 0
    W1 = klf.U[:n1, :].conj().T
    W1a, W1c = W1[:n], W1[n:]
    X = -W1c @ np.linalg.pinv(W1a)
    Qf, _ = np.linalg.qr(W1a, mode="complete")
    Q = Qf.conj().T
    Z = klf.V
    A = Q @ R.A @ Z
    E = Q @ R.E @ Z
    B = Q @ R.B
    F = Q @ R.F
    C = (R.C + X @ R.A) @ Z
    G = (R.G + X @ R.E) @ Z
    D = R.D + X @ R.B
    H = R.H + X @ R.F
    out = PencilRealization(A[n1:, n1:], E[n1:, n1:], B[n1:], F[n1:],
                            C[:, n1:], G[:, n1:], D, H)
    return out, n1


def lpsminreal(R: PencilRealization, atol: float = 0.0,
               rtol: float | None = None) -> PencilRealization:
    """Strongly minimal pencil realization.

    Alternately removes the eigenvalues of ``[A - lam*E; C - lam*G]`` and of
    ``[A - lam*E, B - lam*F]`` until both pencils have neither finite nor
    infinite eigenvalues.

    Raises
    ------
    SingularPencil
        If ``A - lam*E`` is not regular.
    """
    check_regular(R, atol, rtol)
    while R.order:
        R, d1 = _deflate_column_pencil(R, atol, rtol)
        Rt, d2 = _deflate_column_pencil(R.transpose(), atol, rtol)
        R = Rt.transpose()
        if d1 == 0 and d2 == 0:
            break
    return R


# ---------------------------------------------------------------------------
# additive decomposition

def rm2lspm(R: RationalMatrix, atol: float = 0.0, rtol: float | None = None):
    """Minimal realization of the strictly proper part plus the polynomial part.

    Returns
    -------
    sp : PencilRealization
        Minimal descriptor realization ``(A - lam*I, B, C, 0)`` of the
        strictly proper part.
    Rpol : PolyMatrix
        Polynomial part.
    """
    from .linearize import sp_realize
    from .polymat import pm_divrem

    Q, Rem = pm_divrem(R)
    p, m = R.shape
    mode = "columnwise" if m <= p else "rowwise"
    sp = sp_realize(Rem, mode)
    sp, _ = staircase_reduce(sp, "both", "finite", atol, rtol)
    return sp, Q


# ---------------------------------------------------------------------------
# reconstruction

def _interp_nodes(q: int, radius: float) -> np.ndarray:
    return radius * np.exp(2j * np.pi * np.arange(q) / q)


def _coeffs_from_values(vals: np.ndarray, radius: float) -> np.ndarray:
    """Ascending coefficients from values at scaled roots of unity (axis 0)."""
    q = vals.shape[0]
    c = np.fft.fft(vals, axis=0) / q
    # fft uses exp(-2 pi i jk/q), matching the inverse of evaluation at w^j.
    scale = radius ** np.arange(q)
    return c / scale.reshape((-1,) + (1,) * (vals.ndim - 1))


def _entry(R: PencilRealization, i: int, j: int) -> PencilRealization:
    return PencilRealization(R.A, R.E, R.B[:, j:j + 1], R.F[:, j:j + 1], R.C[i:i + 1],
                             R.G[i:i + 1], R.D[i:i + 1, j:j + 1], R.H[i:i + 1, j:j + 1])


def _finite_poles(R: PencilRealization, atol, rtol) -> np.ndarray:
    if R.order == 0:
        return np.zeros(0)
    klf = klf_reduce(R.state_pencil(), atol, rtol)
    if klf.nf == 0:
        return np.zeros(0)
    return np.linalg.eigvals(np.linalg.solve(klf.Nf, klf.Mf))


def realization_to_matrix(R: PencilRealization, target: str = "rational",
                          atol: float = 0.0, rtol: float | None = None):
    """Matrix represented by a realization.

    Each entry is first reduced to a strongly minimal single-input
    single-output realization.  Its finite poles give the monic
    denominator; the numerator is interpolated at scaled roots of unity
    outside all poles.

    Parameters
    ----------
    R : PencilRealization
    target : {"poly", "rational"}

    Returns
    -------
    PolyMatrix or RationalMatrix

    Raises
    ------
    NotPolynomial
        If ``target="poly"`` and some entry has finite poles or the values
        do not fit a polynomial.
    """
    if target not in ("poly", "rational"):
        raise ValueError(f"unknown target {target!r}")
    check_regular(R, atol, rtol)
    real = not any(np.iscomplexobj(getattr(R, k)) for k in "AEBFCGDH")
    p, m = R.outputs, R.inputs
    num = [[None] * m for _ in range(p)]
    den = [[None] * m for _ in range(p)]
    for i in range(p):
        for j in range(m):
            sub = lpsminreal(_entry(R, i, j), atol, rtol)
            poles = _finite_poles(sub, atol, rtol)
            if target == "poly" and poles.size:
                raise NotPolynomial("the realization has finite poles")
            d = np.poly(poles)[::-1] if poles.size else np.ones(1)
            q = sub.order + 2
            radius = 1.0 + (float(np.abs(poles).max()) if poles.size else 0.0)
            nodes = _interp_nodes(q, radius)
            vals = np.array([sub.transfer(z)[0, 0] * np.polyval(d[::-1], z) for z in nodes])
            c = _coeffs_from_values(vals, radius)
            if real:
                c, d = c.real, d.real
            num[i][j] = poly_trim(c, rtol=1e3 * EPS)
            den[i][j] = d
    if target == "rational":
        return RationalMatrix(num, den)
    k = max(max(e.size for e in row) for row in num) - 1
    coeffs = np.zeros((max(k, 0) + 1, p, m), dtype=num[0][0].dtype if p and m else float)
    for i in range(p):
        for j in range(m):
            coeffs[: num[i][j].size, i, j] = num[i][j]
    P = PolyMatrix(coeffs)
    _validate_poly(R, P, 2.0)
    return P


def _validate_poly(R: PencilRealization, P: PolyMatrix, radius: float):
    from .polymat import pm_eval
    rng = np.random.default_rng(12345)
    for _ in range(3):
        z = radius * (0.3 + 0.6 * rng.random()) * np.exp(2j * np.pi * rng.random())
        ref = R.transfer(z)
        err = np.abs(pm_eval(P, z) - ref).max()
        if err > 1e-6 * (1.0 + np.abs(ref).max()):
            raise NotPolynomial("the realization does not represent a polynomial matrix")

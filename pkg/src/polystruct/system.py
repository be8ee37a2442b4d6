"""Realization containers shared by the linearization and reduction modules."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pencil import Pencil
from .polymat import PolyMatrix, block_polymatrix, pm_eval


def _mat(a, shape, dt) -> np.ndarray:
    if a is None:
        return np.zeros(shape, dtype=dt)
    a = np.asarray(a, dtype=dt).reshape(shape)
    return a


@dataclass(frozen=True)
class PencilRealization:
    """Quadruple of pencils ``(A - lam*E, B - lam*F, C - lam*G, D - lam*H)``.

    It represents ``R(lam) = (C - lam*G) (lam*E - A)^{-1} (B - lam*F) + D - lam*H``.
    A descriptor realization has ``F``, ``G`` and ``H`` equal to zero.

    Use :meth:`build` to fill in missing blocks.
    """

    A: np.ndarray
    E: np.ndarray
    B: np.ndarray
    F: np.ndarray
    C: np.ndarray
    G: np.ndarray
    D: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        for name in "AEBFCGDH":
            a = np.array(getattr(self, name))
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        n, m, p = self.order, self.inputs, self.outputs
        expected = dict(A=(n, n), E=(n, n), B=(n, m), F=(n, m), C=(p, n), G=(p, n),
                        D=(p, m), H=(p, m))
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise ValueError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")

    @classmethod
    def build(cls, A=None, E=None, B=None, F=None, C=None, G=None, D=None, H=None,
              n: int | None = None, m: int | None = None, p: int | None = None):
        """Construct with defaults: ``E`` identity, other missing blocks zero.

        Dimensions are inferred from the given blocks where possible.
        """
        given = dict(A=A, E=E, B=B, F=F, C=C, G=G, D=D, H=H)
        arrs = {k: np.atleast_2d(np.asarray(v)) if v is not None and np.size(v) else v
                for k, v in given.items()}

        def dim(keys_axes):
            for key, ax in keys_axes:
                v = arrs[key]
                if v is not None and np.size(v):
                    return v.shape[ax]
            return None

        if n is None:
            n = dim([("A", 0), ("E", 0), ("B", 0), ("F", 0), ("C", 1), ("G", 1)]) or 0
        if m is None:
            m = dim([("B", 1), ("F", 1), ("D", 1), ("H", 1)]) or 0
        if p is None:
            p = dim([("C", 0), ("G", 0), ("D", 0), ("H", 0)]) or 0
        cplx = any(v is not None and np.iscomplexobj(v) for v in arrs.values())
        dt = complex if cplx else float

        def get(key, shape, default=None):
            v = given[key]
            if v is None or np.size(v) == 0:
                return default if default is not None else np.zeros(shape, dtype=dt)
            return _mat(v, shape, dt)

        return cls(A=get("A", (n, n)), E=get("E", (n, n), np.eye(n, dtype=dt)),
                   B=get("B", (n, m)), F=get("F", (n, m)), C=get("C", (p, n)),
                   G=get("G", (p, n)), D=get("D", (p, m)), H=get("H", (p, m)))

    @classmethod
    def descriptor(cls, A, E, B, C, D) -> "PencilRealization":
        """Descriptor realization ``(A - lam*E, B, C, D)``."""
        A = np.atleast_2d(np.asarray(A))
        n = A.shape[0] if A.size else 0
        D = np.atleast_2d(np.asarray(D))
        return cls.build(A=A, E=E, B=B, C=C, D=D, n=n, m=D.shape[1], p=D.shape[0])

    # -- dimensions ---------------------------------------------------------
    @property
    def order(self) -> int:
        return self.A.shape[0]

    @property
    def inputs(self) -> int:
        return self.D.shape[1]

    @property
    def outputs(self) -> int:
        return self.D.shape[0]

    @property
    def is_descriptor(self) -> bool:
        return not (np.any(self.F) or np.any(self.G) or np.any(self.H))

    # -- derived objects ----------------------------------------------------
    def system_pencil(self) -> Pencil:
        """System matrix ``[[A - lam*E, B - lam*F], [C - lam*G, D - lam*H]]``."""
        return Pencil(np.block([[self.A, self.B], [self.C, self.D]]),
                      np.block([[self.E, self.F], [self.G, self.H]]))

    def state_pencil(self) -> Pencil:
        return Pencil(self.A, self.E)

    def row_pencil(self) -> Pencil:
        """``[A - lam*E, B - lam*F]``."""
        return Pencil(np.hstack([self.A, self.B]), np.hstack([self.E, self.F]))

    def column_pencil(self) -> Pencil:
        """``[A - lam*E; C - lam*G]``."""
        return Pencil(np.vstack([self.A, self.C]), np.vstack([self.E, self.G]))

    def pole_pencil(self) -> Pencil:
        """Pole pencil whose zeros are the poles of a strongly irreducible realization."""
        n, m, p = self.order, self.inputs, self.outputs
        z = np.zeros
        M = np.block([[self.A, self.B, z((n, p))],
                      [self.C, self.D, np.eye(p)],
                      [z((m, n)), np.eye(m), z((m, p))]])
        N = np.block([[self.E, self.F, z((n, p))],
                      [self.G, self.H, z((p, p))],
                      [z((m, n)), z((m, m)), z((m, p))]])
        return Pencil(M, N)

    def reduced_pole_pencil(self) -> Pencil:
        """Pole pencil with the ``B``, ``C`` and ``D`` blocks dropped."""
        n, m, p = self.order, self.inputs, self.outputs
        z = np.zeros
        M = np.block([[self.A, z((n, m)), z((n, p))],
                      [z((p, n)), z((p, m)), np.eye(p)],
                      [z((m, n)), np.eye(m), z((m, p))]])
        N = np.block([[self.E, self.F, z((n, p))],
                      [self.G, self.H, z((p, p))],
                      [z((m, n)), z((m, m)), z((m, p))]])
        return Pencil(M, N)

    def strong_test_pencils(self) -> tuple[Pencil, Pencil]:
        """The two pencils that must be free of zeros for strong irreducibility."""
        n, m, p = self.order, self.inputs, self.outputs
        S = self.system_pencil()
        row = Pencil(np.hstack([S.M, np.vstack([np.zeros((n, p)), np.eye(p)])]),
                     np.hstack([S.N, np.zeros((n + p, p))]))
        col = Pencil(np.vstack([S.M, np.hstack([np.zeros((m, n)), np.eye(m)])]),
                     np.vstack([S.N, np.zeros((m, n + m))]))
        return row, col

    def transfer(self, lam) -> np.ndarray:
        """Evaluate the represented matrix at a finite point."""
        D = self.D - lam * self.H
        if self.order == 0:
            return D
        X = np.linalg.solve(lam * self.E - self.A, self.B - lam * self.F)
        return (self.C - lam * self.G) @ X + D

    def __call__(self, lam) -> np.ndarray:
        return self.transfer(lam)

    def transpose(self) -> "PencilRealization":
        """Realization of the transposed matrix."""
        return PencilRealization(self.A.T, self.E.T, self.C.T, self.G.T,
                                 self.B.T, self.F.T, self.D.T, self.H.T)


def block_diag_realizations(first: PencilRealization,
                            second: PencilRealization) -> PencilRealization:
    """Realization of the sum of two matrices of equal size (states stacked)."""
    def bd(a, b):
        out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]),
                       dtype=np.result_type(a, b))
        out[: a.shape[0], : a.shape[1]] = a
        out[a.shape[0]:, a.shape[1]:] = b
        return out

    return PencilRealization(
        A=bd(first.A, second.A), E=bd(first.E, second.E),
        B=np.vstack([first.B, second.B]), F=np.vstack([first.F, second.F]),
        C=np.hstack([first.C, second.C]), G=np.hstack([first.G, second.G]),
        D=first.D + second.D, H=first.H + second.H)


@dataclass(frozen=True)
class PolySystemMatrix:
    """Polynomial system matrix ``[[-T, U], [V, W]]`` for ``V T^{-1} U + W``."""

    T: PolyMatrix
    U: PolyMatrix
    V: PolyMatrix
    W: PolyMatrix

    def __post_init__(self):
        n = self.T.rows
        if self.T.cols != n:
            raise ValueError("T must be square")
        if self.U.rows != n or self.V.cols != n:
            raise ValueError("U and V must match the size of T")
        if self.U.cols != self.W.cols or self.V.rows != self.W.rows:
            raise ValueError("W must be p x m with U n x m and V p x n")

    @property
    def state_size(self) -> int:
        return self.T.rows

    def stacked(self) -> PolyMatrix:
        """The full polynomial matrix ``[[-T, U], [V, W]]``."""
        return block_polymatrix([[-self.T, self.U], [self.V, self.W]])

    def transfer(self, lam) -> np.ndarray:
        T = pm_eval(self.T, lam)
        return pm_eval(self.V, lam) @ np.linalg.solve(T, pm_eval(self.U, lam)) + pm_eval(self.W, lam)

import numpy as np
import pytest

from polystruct.polymat import PolyMatrix, RationalMatrix, pm2poly

P0 = [[1, 2, -2], [0, -1, -2], [0, 0, 0]]
P1 = [[1, 3, 0], [1, 4, 2], [0, -1, -2]]
P2 = [[1, 4, 2], [0, 0, 0], [1, 4, 2]]

# unimodular transformations bringing E1 to its Smith form
U_COEFFS = [[[1, -1, -1], [0, 1, 0], [0, 0, 1]],
            [[0, 0, 0], [-1, 1, 1], [0, -1, 0]]]
V_COEFFS = [[[1, -3, 6], [0, 1, -2], [0, 0, 1]]]

# order-4 irreducible descriptor realization of E1
DESC4 = dict(
    A=[[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, -1, 0]],
    E=[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    B=[[0, 0, 0], [0, 0, 0], [1, 4, 2], [0, -1, -2]],
    C=[[0, 0, -1, -1], [0, 0, -1, 0], [0, 0, 0, -1]],
    D=P0,
)

# first companion pencil of E1
M1 = [[-1, -3, 0, -1, -2, 2],
      [-1, -4, -2, 0, 1, 2],
      [0, 1, 2, 0, 0, 0],
      [1, 0, 0, 0, 0, 0],
      [0, 1, 0, 0, 0, 0],
      [0, 0, 1, 0, 0, 0]]
N1 = [[1, 4, 2, 0, 0, 0],
      [0, 0, 0, 0, 0, 0],
      [1, 4, 2, 0, 0, 0],
      [0, 0, 0, 1, 0, 0],
      [0, 0, 0, 0, 1, 0],
      [0, 0, 0, 0, 0, 1]]


def make_e1() -> PolyMatrix:
    return PolyMatrix(np.array([P0, P1, P2], dtype=float))


def make_e2() -> RationalMatrix:
    den = [[np.array([1.0, 1.0])] * 3 for _ in range(3)]
    return RationalMatrix(pm2poly(make_e1()), den)


def poly(*coeffs) -> PolyMatrix:
    """PolyMatrix from coefficient matrices given in ascending powers."""
    return PolyMatrix(np.array(coeffs, dtype=float))


def diag_poly(*entries) -> PolyMatrix:
    """Diagonal PolyMatrix from ascending scalar coefficient lists."""
    k = max(len(e) for e in entries) - 1
    n = len(entries)
    c = np.zeros((k + 1, n, n))
    for i, e in enumerate(entries):
        c[:len(e), i, i] = e
    return PolyMatrix(c)


@pytest.fixture
def e1():
    return make_e1()


@pytest.fixture
def e2():
    return make_e2()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def _orthogonal(n: int, rng) -> np.ndarray:
    if n == 0:
        return np.zeros((0, 0))
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def kcf_pencil(right=(), left=(), jordan=(), inf=(), rng=None):
    """Pencil with a prescribed Kronecker canonical form, hidden by orthogonal dressing.

    Parameters
    ----------
    right, left : sequence of int
        Right and left Kronecker indices.
    jordan : sequence of (eigenvalue, size)
        Finite Jordan blocks.
    inf : sequence of int
        Sizes of the infinite Jordan blocks.
    rng : numpy Generator, optional
        Without it the canonical form itself is returned.

    Returns
    -------
    M, N : ndarray
    """
    blocks = []
    for e in right:
        blocks.append((np.eye(e, e + 1, 1), np.eye(e, e + 1)))
    for e in left:
        blocks.append((np.eye(e + 1, e, -1), np.eye(e + 1, e)))
    for lam, s in jordan:
        blocks.append((lam * np.eye(s) + np.eye(s, k=1), np.eye(s)))
    for s in inf:
        blocks.append((np.eye(s), np.eye(s, k=1)))
    m = sum(b[0].shape[0] for b in blocks)
    n = sum(b[0].shape[1] for b in blocks)
    M = np.zeros((m, n))
    N = np.zeros((m, n))
    i = j = 0
    for bm, bn in blocks:
        r, c = bm.shape
        M[i:i + r, j:j + c] = bm
        N[i:i + r, j:j + c] = bn
        i += r
        j += c
    if rng is not None:
        Q, Z = _orthogonal(m, rng), _orthogonal(n, rng)
        M, N = Q @ M @ Z, Q @ N @ Z
    return M, N

"""Acceptance suite.

Every check prints one ``PASS``/``FAIL`` line.  Run it directly with
``python3 tests/test_acceptance.py`` or through pytest (``pytest -s`` shows
the lines).
"""
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from conftest import DESC4, M1, N1, U_COEFFS, V_COEFFS, diag_poly, make_e1, make_e2  # noqa: E402
from polystruct.analysis import is_pm_unimodular, pm_kstruct, rm_analyze  # noqa: E402
from polystruct.cli import main as cli_main  # noqa: E402
from polystruct.errors import PoleAtEvaluationPoint  # noqa: E402
from polystruct.linearize import polypart_descriptor_real, rm_linearize  # noqa: E402
from polystruct.oracle import (dressed_matrix, exact_mults_at,  # noqa: E402
                               minimal_indices_bruteforce)
from polystruct.pencil import Pencil, pencil_inf_indices, pkstruct  # noqa: E402
from polystruct.polymat import PolyMatrix, RationalMatrix, rm_eval  # noqa: E402
from polystruct.realize import realization_to_matrix, rm2lspm, staircase_reduce  # noqa: E402
from polystruct.system import PencilRealization  # noqa: E402

HERE = Path(__file__).parent

# tolerances
EIG_TOL = 1e-8           # example eigenvalues and poles
ORACLE_EIG_TOL = 1e-7    # rational eigenvalues of dressed instances
ROUND_TRIP_RTOL = 1e-8   # realization round trip

# sample sizes
ORACLE_INSTANCES = 100
INDEX_SUM_INSTANCES = 200
ROUND_TRIP_INSTANCES = 50
ROUND_TRIP_PROBES = 16
INF = float("inf")


def report(number: int, title: str, check) -> None:
    try:
        check()
    except AssertionError as exc:
        print(f"FAIL criterion {number}: {title} ({exc})")
        raise
    print(f"PASS criterion {number}: {title}")


# ---------------------------------------------------------------------------
# 1

def check_example1_routes():
    e1 = make_e1()
    for via in ("cf1", "cf2", "lps", "ls"):
        rep = pm_kstruct(e1, 2, via)
        assert rep.rank == 2, via
        assert len(rep.finite_zeros) == 1, via
        value, mults = rep.finite_zeros[0]
        assert abs(value - 1.0) <= EIG_TOL and mults == (1,), via
        assert rep.inf_mults == (0, 2), via
        assert rep.inf_indices == (-2, 0), via
        assert rep.right_indices == (0,) and rep.left_indices == (1,), via
        assert rep.mu == 1, via
        assert rep.pole_degree == 2 and rep.zero_degree == 1, via


def test_criterion_1_example1_all_routes():
    report(1, "example 1 structure via cf1, cf2, pencil and descriptor routes",
           check_example1_routes)


# ---------------------------------------------------------------------------
# 2

def check_companion_intermediate():
    ks = pkstruct(Pencil(np.array(M1, float), np.array(N1, float)))
    assert ks.delta_fin == 1
    assert ks.delta_inf == 2
    assert ks.inf_degrees == (2,)
    assert ks.right_indices == (1,) and ks.left_indices == (1,)
    assert ks.rank == 5


def test_criterion_2_companion_intermediate():
    report(2, "companion pencil of example 1", check_companion_intermediate)


# ---------------------------------------------------------------------------
# 3

def check_descriptor_intermediate():
    L = PencilRealization.descriptor(**{k: np.array(v, float) for k, v in DESC4.items()})
    assert L.order == 4
    assert pkstruct(L.system_pencil()).inf_degrees == (1, 1, 1, 1)
    pole = L.state_pencil()
    assert pkstruct(pole).inf_degrees == (1, 3)
    # McMillan degree from the infinite structural indices of the pole pencil
    assert sum(s for s in pencil_inf_indices(pole).indices if s > 0) == 2


def test_criterion_3_descriptor_intermediate():
    report(3, "order-4 descriptor realization of example 1", check_descriptor_intermediate)


# ---------------------------------------------------------------------------
# 4

def check_example2():
    e2 = make_e2()
    finite, inf = rm_analyze(e2, "poles")
    assert len(finite) == 1
    value, mults = finite[0]
    assert abs(value + 1.0) <= EIG_TOL and sum(mults) == 2
    assert inf == [1]
    finite, inf = rm_analyze(e2, "zeros")
    assert len(finite) == 1
    value, mults = finite[0]
    assert abs(value - 1.0) <= EIG_TOL and mults == (1,)
    assert inf == [1]
    rep = rm_analyze(e2, "kstruct")
    assert rep.right_indices == (0,) and rep.left_indices == (1,) and rep.mu == 1
    assert (rep.pole_degree, rep.zero_degree, rep.mu) == (3, 2, 1)
    assert rep.pole_degree == rep.zero_degree + rep.mu


def test_criterion_4_example2():
    report(4, "example 2 poles, zeros and indices", check_example2)


# ---------------------------------------------------------------------------
# 5

def check_example2_orders():
    sp, Rpol = rm2lspm(make_e2())
    assert sp.order == 2
    L = polypart_descriptor_real(Rpol, "controllable")
    assert L.order == 6
    red, _ = staircase_reduce(L, "both")
    assert red.order == 2


def test_criterion_5_example2_orders():
    report(5, "example 2 realization orders", check_example2_orders)


# ---------------------------------------------------------------------------
# 6

def compare_with_oracle(seed: int) -> None:
    Q, smith = dressed_matrix(seed)
    P = PolyMatrix(np.array(Q.to_float_coeffs(), float))
    k = Q.grade
    right, left = minimal_indices_bruteforce(Q)
    roots = sorted({r for d in smith.invariant_polys for r in range(-2, 3) if d(r) == 0})
    for via in ("cf1", "cf2", "lps", "ls"):
        rep = pm_kstruct(P, k, via)
        tag = f"seed {seed}, {via}"
        assert rep.rank == smith.rank, tag
        assert list(rep.right_indices) == right and list(rep.left_indices) == left, tag
        if k > 0:
            assert list(rep.inf_mults) == exact_mults_at(Q, INF, k), tag
        assert len(rep.finite_zeros) == len(roots), tag
        for r in roots:
            hits = [m for v, m in rep.finite_zeros if abs(v - r) <= ORACLE_EIG_TOL]
            assert len(hits) == 1, tag
            assert list(hits[0]) == [x for x in exact_mults_at(Q, r) if x], tag


def check_oracle_equivalence():
    for seed in range(ORACLE_INSTANCES):
        compare_with_oracle(seed)


def test_criterion_6_oracle_equivalence():
    report(6, f"{ORACLE_INSTANCES} dressed instances agree with the exact oracle",
           check_oracle_equivalence)


# ---------------------------------------------------------------------------
# 7 and 8

def random_polymatrix(rng):
    p, m = (int(x) for x in rng.integers(1, 4, 2))
    d = int(rng.integers(1, 4))
    c = rng.integers(-3, 4, (d + 1, p, m)).astype(float)
    if rng.random() < 0.5:
        c[-1] = np.outer(rng.integers(-2, 3, p), rng.integers(-2, 3, m))
    if not c[-1].any():
        c[-1, 0, 0] = 1.0
    return PolyMatrix(c), d


def check_index_sum():
    rng = np.random.default_rng(7)
    for t in range(INDEX_SUM_INSTANCES):
        P, d = random_polymatrix(rng)
        base = pm_kstruct(P, d)
        for extra in range(3):
            k = d + extra
            rep = base if extra == 0 else pm_kstruct(P, k)
            assert rep.delta_fin + rep.delta_inf + rep.mu == k * rep.rank, f"instance {t}"
            assert (rep.rank, rep.right_indices, rep.left_indices, rep.inf_indices,
                    len(rep.finite_zeros)) == \
                (base.rank, base.right_indices, base.left_indices, base.inf_indices,
                 len(base.finite_zeros)), f"instance {t}"
            assert [a + extra for a in base.inf_mults] == list(rep.inf_mults), f"instance {t}"


def test_criterion_7_index_sum():
    report(7, f"index sum over {INDEX_SUM_INSTANCES} random matrices and three grades",
           check_index_sum)


def check_infinite_degree_gap():
    rng = np.random.default_rng(8)
    for t in range(INDEX_SUM_INSTANCES):
        P, d = random_polymatrix(rng)
        rep = pm_kstruct(P, d)
        for kind in ("pencil", "descriptor"):
            L = rm_linearize(P, kind, True)
            gap = rep.delta_inf - pkstruct(L.system_pencil()).delta_inf
            assert gap == (d - 1) * rep.rank - L.order, f"instance {t}, {kind}"


def test_criterion_8_infinite_degree_gap():
    report(8, "infinite degree of matrix and system pencil differ by (d-1)r - n",
           check_infinite_degree_gap)


# ---------------------------------------------------------------------------
# 9

def random_rational(rng):
    p, m = (int(x) for x in rng.integers(1, 4, 2))
    num = [[rng.integers(-3, 4, rng.integers(1, 4)).astype(float) for _ in range(m)]
           for _ in range(p)]
    den = []
    for _ in range(p):
        row = []
        for _ in range(m):
            c = rng.integers(-3, 4, rng.integers(1, 4)).astype(float)
            row.append(c if c.any() else np.ones(1))
        den.append(row)
    return RationalMatrix(num, den)


def check_round_trip():
    rng = np.random.default_rng(9)
    for t in range(ROUND_TRIP_INSTANCES):
        R = random_rational(rng)
        for kind in ("descriptor", "pencil"):
            back = realization_to_matrix(rm_linearize(R, kind, True), "rational")
            used = 0
            while used < ROUND_TRIP_PROBES:
                z = complex(rng.standard_normal(), rng.standard_normal())
                try:
                    want = rm_eval(R, z)
                except PoleAtEvaluationPoint:
                    continue
                used += 1
                err = np.linalg.norm(rm_eval(back, z) - want)
                assert err <= ROUND_TRIP_RTOL * np.linalg.norm(want), \
                    f"instance {t}, {kind}: {err:.2e}"


def test_criterion_9_round_trip():
    report(9, f"round trip of {ROUND_TRIP_INSTANCES} random rational matrices",
           check_round_trip)


# ---------------------------------------------------------------------------
# 10

def check_unimodular():
    assert is_pm_unimodular(PolyMatrix(np.array(U_COEFFS, float)))
    assert is_pm_unimodular(PolyMatrix(np.array(V_COEFFS, float)))
    assert not is_pm_unimodular(make_e1())
    assert not is_pm_unimodular(diag_poly([0, 1], [1]))


def test_criterion_10_unimodular():
    report(10, "unimodularity of U, V, example 1 and diag(lam, 1)", check_unimodular)


# ---------------------------------------------------------------------------
# 11

def check_cli_goldens():
    cases = sorted((HERE / "golden").glob("example*.json"))
    assert {p.name.split(".")[0] for p in cases} == {"example1", "example2"}
    for golden in cases:
        example, command, _ = golden.name.split(".")
        out = _run_cli([command, str(HERE / "data" / f"{example}.json"), "--format", "json"])
        assert out == golden.read_text(), golden.name


def _run_cli(argv) -> str:
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(argv)
    assert code == 0
    return buf.getvalue()


def test_criterion_11_cli_goldens():
    report(11, "structured CLI output equals the checked-in goldens", check_cli_goldens)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items(), key=lambda kv: int(kv[0].split("_")[2])
                           if kv[0].startswith("test_criterion_") else 0):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)

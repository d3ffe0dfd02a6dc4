import random

import pytest
from gmpy2 import mpq

from kappatwist import _backend, _kernels_py, hopf, lie, linsolve, pbw

c_kernels = pytest.importorskip("kappatwist._kernels_c")


@pytest.fixture
def restore_backend():
    name = _backend.BACKEND
    yield
    _backend.use(name)


def rseries(rng, n):
    return tuple(mpq(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n))


def test_series_kernels_agree():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 6)
        a, b = rseries(rng, n), rseries(rng, n)
        budget = rng.randrange(n)
        assert _kernels_py.series_mul(a, b, budget) == c_kernels.series_mul(a, b, budget)
        assert _kernels_py.valuation(a) == c_kernels.valuation(a)


def test_echelon_kernels_agree():
    rng = random.Random(8)
    for _ in range(100):
        ncols = rng.randint(1, 8)
        rows = [{j: mpq(rng.randint(-3, 3), rng.randint(1, 3)) for j in
                 rng.sample(range(ncols + 1), min(3, ncols + 1))} for _ in range(rng.randint(1, 8))]
        pa, ba = _kernels_py.echelon([dict(r) for r in rows], ncols)
        pb, bb = c_kernels.echelon([dict(r) for r in rows], ncols)
        assert pa == pb and ba == bb
        assert _kernels_py.back_substitute(pa, ncols) == c_kernels.back_substitute(pb, ncols)


@pytest.mark.parametrize("algebra", ["iso3", "so4"])
def test_products_agree(algebra, restore_backend):
    from conftest import random_element

    results = {}
    for name in ("python", "cython"):
        _backend.use(name)
        rs = pbw.RewriteSystem(lie.get_algebra(algebra), 3)
        rng = random.Random(9)
        out = []
        for _ in range(15):
            x = random_element(rs, rng, terms=3, max_degree=3)
            y = random_element(rs, rng, terms=3, max_degree=3)
            out.append(pbw.mul(rs, x, y).terms)
        results[name] = out
    assert results["python"] == results["cython"]


def test_kappa_structure_agrees(restore_backend):
    deltas = {}
    for name in ("python", "cython"):
        _backend.use(name)
        h = hopf.kappa_poincare(3, 3)
        assert hopf.check_hopf_axioms(h, samples=5, seed=0).ok()
        deltas[name] = [h.delta.images[g].terms for g in range(h.rs.dim)]
    assert deltas["python"] == deltas["cython"]


def test_linsolve_agrees(restore_backend):
    rng = random.Random(10)
    rows = [{j: mpq(rng.randint(-4, 4)) for j in range(6)} for _ in range(5)]
    rhs = [mpq(rng.randint(-4, 4)) for _ in range(5)]
    got = {}
    for name in ("python", "cython"):
        _backend.use(name)
        got[name] = (linsolve.solve(rows, rhs, 6), linsolve.nullspace(rows, 6), linsolve.rank(rows, 6))
    assert got["python"] == got["cython"]


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.use("fortran")

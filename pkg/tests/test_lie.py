import json
import random
from itertools import combinations

import pytest
import sympy
from gmpy2 import mpq

from kappatwist import lie
from kappatwist.errors import AlgebraMismatch, IndexOutOfRange, NoDecomposition
from kappatwist.lie import LieTensor, bracket, cybe_bracket, iw_contract, killing_form, validate


def vec(spec, **kw):
    return LieTensor.vector({spec.index(k): v for k, v in kw.items()}, spec.name)


# --- dense oracles built without the package's structure code -----------------------

def unit(n, a, b, v=1):
    m = sympy.zeros(n, n)
    m[a, b] = v
    return m


def eta_generators(n):
    """Labelled matrices of so(n+1) in the metric diag(1,..,1,-1)."""
    eta = [1] * n + [-1]
    dim = n + 1

    def L(a, b):
        return eta[b] * unit(dim, a, b) - eta[a] * unit(dim, b, a)

    gens = {}
    for i, j in combinations(range(1, n), 2):
        gens["M%d%d" % (i, j)] = -L(i, j)
    for i in range(1, n):
        gens["N%d" % i] = L(i, n)
    for i in range(1, n):
        gens["P%d" % i] = -L(0, i)
    gens["E"] = L(0, n)
    return gens


def dense_structure(gens):
    """Structure constants by solving commutator = sum c_k g_k (sympy linear solve)."""
    labels = list(gens)
    A = sympy.Matrix.hstack(*[gens[l].reshape(len(gens[l]), 1) for l in labels])
    out = {}
    for a, b in combinations(labels, 2):
        c = gens[a] * gens[b] - gens[b] * gens[a]
        sol = A.solve_least_squares(c.reshape(len(c), 1)) if any(c) else sympy.zeros(len(labels), 1)
        assert A * sol == c.reshape(len(c), 1)
        out[(a, b)] = {labels[k]: sol[k] for k in range(len(labels)) if sol[k] != 0}
    return out


def spec_structure(spec):
    out = {}
    for a, b in combinations(range(spec.dim), 2):
        out[(spec.labels[a], spec.labels[b])] = {
            spec.labels[c]: sympy.Rational(int(v.numerator), int(v.denominator))
            for c, v in spec.bracket_gen(a, b).items()}
    return out


@pytest.mark.parametrize("name,n", [("so4", 3), ("so5", 4)])
def test_so_registry_matches_matrix_oracle(name, n):
    spec = lie.get_algebra(name)
    assert spec_structure(spec) == dense_structure(eta_generators(n))


def test_so3_bracket_matches_matrix_commutator():
    spec = lie.get_algebra("so3")
    gens = {"M%d%d" % (i, j): unit(3, i, j) - unit(3, j, i) for i, j in combinations(range(3), 2)}
    assert spec_structure(spec) == dense_structure(gens)
    # [M_12, M_23] = M_13 in one-based labels
    assert bracket(spec, vec(spec, M01=1), vec(spec, M12=1)) == vec(spec, M02=1)


@pytest.mark.parametrize("name", lie.registry_names())
def test_registry_validates(name):
    rep = validate(lie.get_algebra(name))
    assert rep["jacobi"] and rep["decomposition"]
    assert rep["span_pp"] == (name not in ("iso3", "iso4"))


def test_span_pp_examples():
    assert validate(lie.get_algebra("so4"))["span_pp"] is True
    assert validate(lie.get_algebra("iso3"))["span_pp"] is False


def test_iso3_brackets():
    s = lie.get_algebra("iso3")
    assert bracket(s, vec(s, M12=1), vec(s, P1=1)) == vec(s, P2=1)
    assert bracket(s, vec(s, P1=1), vec(s, P2=1)).is_zero()
    assert bracket(s, vec(s, N1=1), vec(s, P1=1)) == vec(s, E=1)
    assert bracket(s, vec(s, N1=1), vec(s, E=1)) == vec(s, P1=1)
    assert bracket(s, vec(s, N1=1), vec(s, N2=1)) == vec(s, M12=-1)


def test_bracket_errors():
    s = lie.get_algebra("iso3")
    other = LieTensor.vector({0: 1}, "so3")
    with pytest.raises(AlgebraMismatch):
        bracket(s, other, vec(s, P1=1))
    with pytest.raises(IndexOutOfRange):
        lie.LieAlgebraSpec("bad", [("a", "NONE")], {(0, 3): [(0, 1)]})


def test_bracket_bilinear_antisymmetric():
    s = lie.get_algebra("so5")
    rng = random.Random(3)
    for _ in range(20):
        x, y, z = (LieTensor.vector({rng.randrange(s.dim): rng.randint(-3, 3) for _ in range(3)}, s.name)
                   for _ in range(3))
        assert bracket(s, x, y) == bracket(s, y, x) * -1
        assert bracket(s, x + z, y) == bracket(s, x, y) + bracket(s, z, y)


def test_killing_form_examples():
    so3 = lie.get_algebra("so3")
    K = killing_form(so3)
    # oracle: trace of the square of the explicit 3x3 adjoint matrix
    ad = sympy.Matrix([[0, 0, 0], [0, 0, -1], [0, 1, 0]])
    assert K[2][2] == mpq(int((ad * ad).trace()))
    assert K[2][2] == -2
    so4 = lie.get_algebra("so4")
    K4 = killing_form(so4)
    for a in so4.of_parity(lie.H):
        for b in so4.of_parity(lie.P):
            assert K4[a][b] == 0
    assert sympy.Matrix(K4).det() != 0
    assert sympy.Matrix(killing_form(lie.get_algebra("iso3"))).det() == 0


@pytest.mark.parametrize("name", ["so4", "so5", "sl2", "so4-so3"])
def test_killing_form_of_contraction_degenerate(name):
    c = iw_contract(lie.get_algebra(name))
    assert sympy.Matrix(killing_form(c)).det() == 0


def test_iw_contract():
    assert iw_contract(lie.get_algebra("so4")).same_structure(lie.get_algebra("iso3"))
    assert iw_contract(lie.get_algebra("so5")).same_structure(lie.get_algebra("iso4"))
    iso3 = lie.get_algebra("iso3")
    assert iw_contract(iso3).same_structure(iso3)
    with pytest.raises(NoDecomposition):
        iw_contract(lie.get_algebra("so3"))


@pytest.mark.parametrize("name", ["so4", "so5", "sl2", "so3+so3"])
def test_iw_contract_only_touches_pp(name):
    s = lie.get_algebra(name)
    c = iw_contract(s)
    assert validate(c)["jacobi"]
    for a, b in combinations(range(s.dim), 2):
        pp = s.parities[a] == lie.P and s.parities[b] == lie.P
        assert c.bracket_gen(a, b) == ({} if pp else s.bracket_gen(a, b))


def dense_cybe(spec, r):
    """[[r,r]] by explicit index loops over a dense structure-constant array."""
    n = spec.dim
    C = [[[0] * n for _ in range(n)] for _ in range(n)]
    for (a, b), terms in spec.structure.items():
        for c, v in terms:
            C[a][b][c] += v
            C[b][a][c] -= v
    R = [[0] * n for _ in range(n)]
    for (a, b), v in r.entries.items():
        R[a][b] += v
    out = {}
    rng = range(n)
    for i in rng:
        for j in rng:
            for k in rng:
                s = 0
                for a in rng:
                    for b in rng:
                        if not R[a][b]:
                            continue
                        # [r12, r13]: r^{ab} r^{cd} [g_a, g_c] (x) g_b (x) g_d
                        s += sum(R[a][j] * R[c][k] * C[a][c][i] for c in rng) if b == j else 0
                        # [r12, r23]: g_a (x) [g_b, g_c] (x) g_d
                        s += sum(R[a][b] * R[c][k] * C[b][c][j] for c in rng) if a == i else 0
                        # [r13, r23]: g_a (x) g_c (x) [g_b, g_d]
                        s += sum(R[a][b] * R[c][d] * C[b][d][k] for c in rng for d in rng
                                 if c == j) if a == i else 0
                if s:
                    out[(i, j, k)] = s
    return out


def random_r(spec, rng, terms=6):
    return LieTensor(2, {(rng.randrange(spec.dim), rng.randrange(spec.dim)): mpq(rng.randint(-4, 4), rng.randint(1, 3))
                         for _ in range(terms)}, spec.name)


def test_cybe_examples():
    s = lie.get_algebra("iso3")
    assert cybe_bracket(s, LieTensor(2, {}, s.name)).is_zero()
    p1, p2 = s.index("P1"), s.index("P2")
    assert cybe_bracket(s, LieTensor(2, {(p1, p2): 1, (p2, p1): -1}, s.name)).is_zero()
    r = LieTensor(2, {}, s.name)
    for i in (1, 2):
        n, p = s.index("N%d" % i), s.index("P%d" % i)
        r = r + LieTensor(2, {(n, p): 1, (p, n): -1}, s.name)
    got = cybe_bracket(s, r)
    assert not got.is_zero()
    assert got.entries == dense_cybe(s, r)


@pytest.mark.parametrize("name", ["iso3", "iso4"])
def test_cybe_matches_dense_oracle(name):
    s = lie.get_algebra(name)
    rng = random.Random(name)
    for _ in range(20):
        r = random_r(s, rng)
        assert cybe_bracket(s, r).entries == dense_cybe(s, r)


def test_cybe_bilinear_quadratic():
    s = lie.get_algebra("iso3")
    rng = random.Random(9)
    r = random_r(s, rng)
    assert cybe_bracket(s, r * 3) == cybe_bracket(s, r) * 9


def test_ad_invariant_examples():
    so3 = lie.get_algebra("so3")
    assert lie.ad_invariant(so3, LieTensor(2, {}, so3.name))
    K = sympy.Matrix(killing_form(so3)).inv()
    cas = LieTensor(2, {(a, b): mpq(int(K[a, b].p), int(K[a, b].q))
                        for a in range(3) for b in range(3) if K[a, b] != 0}, so3.name)
    assert lie.ad_invariant(so3, cas)
    iso3 = lie.get_algebra("iso3")
    m = iso3.index("M12")
    T = LieTensor(2, {(m, m): 1}, iso3.name)
    assert not lie.ad_invariant(iso3, T)
    assert lie.ad_invariance_witness(iso3, T) is not None


def dense_ad_invariant(spec, T):
    n = spec.dim
    for x in range(n):
        acc = {}
        for key, v in T.entries.items():
            for leg, a in enumerate(key):
                for c in range(n):
                    w = spec.bracket_gen(x, a).get(c, 0)
                    if w:
                        k = key[:leg] + (c,) + key[leg + 1:]
                        acc[k] = acc.get(k, 0) + v * w
        if any(acc.values()):
            return False
    return True


@pytest.mark.parametrize("name", ["iso3", "iso4"])
def test_ad_invariance_sparse_vs_dense(name):
    s = lie.get_algebra(name)
    rng = random.Random(name + "ad")
    for _ in range(20):
        rr = cybe_bracket(s, random_r(s, rng, 3))
        assert lie.ad_invariant(s, rr) == dense_ad_invariant(s, rr)


def test_algebra_json_roundtrip(tmp_path):
    s = lie.get_algebra("so4")
    p = tmp_path / "so4.json"
    p.write_text(json.dumps(s.to_json()))
    t = lie.load_algebra(p)
    assert t.same_structure(s) and t.labels == s.labels and t.parities == s.parities

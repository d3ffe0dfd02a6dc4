import random

import pytest
from gmpy2 import mpq

from kappatwist import deform, hopf, lie, pbw
from kappatwist.errors import BadDimension, MissingCoassociator, MissingR
from kappatwist.pbw import commutator, exp_element, inverse, leg_embed, normal_form, tensor
from kappatwist.scalars import Series

from conftest import random_element


@pytest.mark.parametrize("name", lie.registry_names())
def test_canonical_hopf_passes(name):
    rs = pbw.RewriteSystem(lie.get_algebra(name), 2)
    rep = hopf.check_hopf_axioms(hopf.canonical_hopf(rs), samples=10)
    assert rep.ok(), rep.first_failure()
    assert set(rep.results) == {"relations", "coassociativity", "counit", "antipode"}


def test_kappa_coproduct_examples():
    h = hopf.kappa_poincare(3, 1)
    rs = h.rs
    one, E, P1 = rs.one(), rs.gen("E"), rs.gen("P1")
    assert h.coproduct(E) == tensor(E, one) + tensor(one, E)
    half = Series.lam(1, 1, mpq(1, 2))
    want = tensor(P1, one) + tensor(one, P1) + (tensor(P1, E) - tensor(E, P1)).scale(half)
    assert h.coproduct(P1) == want
    assert h.antipode(P1) == -P1
    assert h.antipode(rs.gen("M12")) == -rs.gen("M12")


@pytest.mark.parametrize("n", [3, 4])
def test_antipode_scalar_solved(n):
    h = hopf.kappa_poincare(n, 2)
    assert h.meta["d_solved"] is True
    assert h.meta["d"] == n - 1


def test_kappa_hopf_axioms_n3():
    rep = hopf.check_hopf_axioms(hopf.kappa_poincare(3, 3), samples=10)
    assert rep.ok(), rep.first_failure()


def test_kappa_broken_mixed_term_detected():
    h = hopf.kappa_poincare(4, 2, mixed_term=False)
    rep = hopf.check_hopf_axioms(h, samples=0)
    assert not rep.ok("relations")
    e = rep.results["relations"]
    assert e["order"] == 1 and e["witness"] is not None and e["where"]


def test_wrong_antipode_scalar_detected():
    h = hopf.kappa_poincare(3, 2, d=mpq(1))
    assert not hopf.check_hopf_axioms(h, samples=0).ok("antipode")


def test_kappa_bad_dimension():
    with pytest.raises(BadDimension):
        hopf.kappa_poincare(5, 1)


@pytest.mark.parametrize("n", [3, 4])
def test_kappa_delta_contractible(n):
    assert hopf.delta_contractibility(hopf.kappa_poincare(n, 3))["ok"]


def test_casimir_central(iso3_rs):
    rs = iso3_rs
    t = hopf.iso3_casimir(rs)
    for g in range(rs.dim):
        assert commutator(t, rs.gen(g)).is_zero()
    # a wrong sign in the boost part is not central
    bad = normal_form(rs, ["M12", "E"], 2) + normal_form(rs, ["N2", "P1"], 2) + normal_form(rs, ["N1", "P2"], 2)
    assert any(not commutator(bad, rs.gen(g)).is_zero() for g in range(rs.dim))


# --- quasi-Hopf and triangular ----------------------------------------------------------

def test_trivial_structures_pass(iso3_rs):
    rs = iso3_rs
    h = hopf.canonical_hopf(rs).with_structure(R=rs.one(2), Phi=rs.one(3))
    assert hopf.check_quasi_hopf(h, samples=5).ok()
    assert hopf.check_triangular(h, samples=5).ok()


def test_missing_structure_errors(iso3_rs):
    h = hopf.canonical_hopf(iso3_rs)
    with pytest.raises(MissingCoassociator):
        hopf.check_quasi_hopf(h)
    with pytest.raises(MissingR):
        hopf.check_triangular(h)


def test_central_coassociator_pentagon_fails():
    u1 = lie.LieAlgebraSpec("u1", [("E", "NONE")], {})
    rs = pbw.RewriteSystem(u1, 3)
    E = rs.gen("E")
    Phi = rs.one(3) + tensor(E, E, E).shift(1)
    rep = hopf.check_quasi_hopf(hopf.canonical_hopf(rs).with_structure(Phi=Phi))
    assert rep.ok("quasi_coassociativity")
    assert not rep.ok("pentagon")
    assert rep.results["pentagon"]["order"] == 2


def test_abelian_r_matrix_triangular():
    rs = pbw.RewriteSystem(lie.get_algebra("iso3"), 3)
    E, P1 = rs.gen("E"), rs.gen("P1")
    R = exp_element(rs, (tensor(E, P1) - tensor(P1, E)).shift(1))
    rep = hopf.check_triangular(hopf.canonical_hopf(rs).with_structure(R=R))
    assert rep.ok("triangularity")


def _twisted(rs, F):
    c = hopf.canonical_hopf(rs)
    R, Phi = deform.twist_qtqh(F, rs.one(2), rs.one(3), c.delta)
    Fi = inverse(F)
    D = pbw.GenMap(rs, rs, {g: F * c.delta.images[g] * Fi for g in range(rs.dim)}, rank=2)
    return c.with_structure(delta=D, R=R, Phi=Phi), D, Phi


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_twisting_trivial_structure_passes_everything(seed):
    rs = pbw.RewriteSystem(lie.get_algebra("iso3"), 3)
    # counital twist: no unit legs
    F = rs.one(2) + random_element(rs, random.Random(seed), terms=3, max_degree=1, min_val=1, rank=2,
                                   min_degree=1)
    h, _, _ = _twisted(rs, F)
    assert hopf.check_quasi_hopf(h, samples=3).ok()
    assert hopf.check_triangular(h, samples=3).ok()


def test_quasi_coassociativity_order_pinned_by_twisting():
    rs = pbw.RewriteSystem(lie.get_algebra("iso3"), 2)
    g = rs.gen
    F = rs.one(2) + tensor(g("N1"), g("P2")).shift(1) + tensor(g("M12"), g("N1")).shift(1)
    _, D, Phi = _twisted(rs, F)
    swapped_ok = True
    for x in range(rs.dim):
        dx = D.apply(rs.gen(x))
        left, right = D.apply_leg(dx, 0), D.apply_leg(dx, 1)
        assert Phi * right == left * Phi
        swapped_ok = swapped_ok and (Phi * left == right * Phi)
    assert not swapped_ok


def test_hopf_json_roundtrip():
    h = hopf.kappa_poincare(3, 2)
    g = hopf.HopfSpec.from_json(h.to_json())
    assert g.rs.labels == h.rs.labels
    for x in range(h.rs.dim):
        assert g.delta.images[x].terms == h.delta.images[x].terms
        assert g.antipode.images[x].terms == h.antipode.images[x].terms

"""Hopf and quasi-Hopf structures on PBW algebras, their axiom checkers and
the κ-Poincaré model.

Quasi-Hopf conventions used throughout (a coassociator ``Phi`` obtained by
twisting with ``F`` is ``F12 (D(x)id)(F) Phi (id(x)D)(F^-1) F23^-1``):

* quasi-coassociativity ``Phi (id(x)D)D(a) = (D(x)id)D(a) Phi``;
* pentagon ``(D(x)id(x)id)(Phi) (id(x)id(x)D)(Phi) = (Phi(x)1) (id(x)D(x)id)(Phi) (1(x)Phi)``;
* hexagons ``(D(x)id)R = Phi_312^-1 R_13 Phi_132 R_23 Phi^-1`` and
  ``(id(x)D)R = Phi_231 R_13 Phi_213^-1 R_12 Phi``.

These are Drinfeld's axioms written for the inverse coassociator.
"""

import random
from itertools import combinations

from gmpy2 import mpq

from . import lie as _lie
from .errors import BadDimension, DeformedInput, MissingCoassociator, MissingR, RankMismatch
from .pbw import (
    GenMap, RewriteSystem, Tensor, commutator, contractibility_check, exp_element, inverse,
    leg_embed, multiply_legs, normal_form, tensor,
)
from .scalars import Series, ZERO, monomial, valuation, zeros


class HopfSpec:
    """Coproduct, counit and antipode on generators; optional ``R`` and ``Phi``."""

    def __init__(self, rs, delta, counit, antipode, R=None, Phi=None, name=None,
                 contractible=False, meta=None):
        if delta.rank != 2 or delta.mode != "hom":
            raise RankMismatch("the coproduct must be a rank-2 homomorphism")
        if antipode.rank != 1 or antipode.mode != "antihom":
            raise RankMismatch("the antipode must be a rank-1 anti-homomorphism")
        self.rs = rs
        self.delta = delta
        self.counit = {rs.gen_index(g): _as_tuple(v, rs.N) for g, v in counit.items()}
        self.antipode = antipode
        self.R = R
        self.Phi = Phi
        self.name = name or rs.name
        self.contractible = contractible
        self.meta = dict(meta or {})

    def with_structure(self, delta=None, R=None, Phi=None, name=None):
        return HopfSpec(self.rs, delta or self.delta, self.counit, self.antipode,
                        R=R, Phi=Phi, name=name or self.name,
                        contractible=self.contractible, meta=self.meta)

    # -- applying the structure maps ---------------------------------------
    def eps_monomial(self, mono):
        N = self.rs.N
        out = self.rs.one_c
        for g in mono:
            c = self.counit[g]
            if not any(c):
                return zeros(N)
            out = _smul(out, c, N)
        return out

    def counit_leg(self, x, leg):
        """Apply the counit to leg ``leg``; a rank-1 input gives a Series."""
        N = self.rs.N
        acc = {}
        for key, c in x.terms.items():
            e = self.eps_monomial(key[leg])
            if any(e):
                k = key[:leg] + key[leg + 1:]
                v = _smul(c, e, N)
                old = acc.get(k)
                acc[k] = v if old is None else tuple(a + b for a, b in zip(old, v))
        if x.rank == 1:
            return Series._raw(acc.get((), zeros(N)))
        return Tensor(self.rs, x.rank - 1, acc)

    def coproduct(self, x):
        return self.delta.apply(x)

    def op_coproduct(self, x):
        return leg_embed(self.delta.apply(x), "21", 2)

    def to_json(self):
        rs = self.rs
        out = {
            "schema": 1,
            "name": self.name,
            "order": rs.N,
            "algebra": rs.algebra.to_json(),
            "corrections": [
                {"a": rs.labels[a], "b": rs.labels[b],
                 "terms": [{"word": rs.mono_labels(w), "coeff": Series._raw(c).to_json()}
                           for w, _, c in rows]}
                for (a, b), rows in sorted(rs.rules.items()) if rows
            ],
            "delta": {rs.labels[g]: t.to_json() for g, t in sorted(self.delta.images.items())},
            "counit": {rs.labels[g]: Series._raw(c).to_json() for g, c in sorted(self.counit.items())},
            "antipode": {rs.labels[g]: t.to_json() for g, t in sorted(self.antipode.images.items())},
            "contractible": self.contractible,
            "meta": _jsonable(self.meta),
        }
        if self.R is not None:
            out["R"] = self.R.to_json()
        if self.Phi is not None:
            out["Phi"] = self.Phi.to_json()
        return out

    @classmethod
    def from_json(cls, data):
        algebra = _lie.LieAlgebraSpec.from_json(data["algebra"])
        N = data["order"]
        corr = {}
        for br in data.get("corrections", []):
            corr[(br["a"], br["b"])] = [(t["word"], Series.from_json(t["coeff"])) for t in br["terms"]]
        rs = RewriteSystem(algebra, N, corr)
        delta = GenMap(rs, rs, {g: Tensor.from_json(rs, t) for g, t in data["delta"].items()}, rank=2)
        anti = GenMap(rs, rs, {g: Tensor.from_json(rs, t) for g, t in data["antipode"].items()},
                      mode="antihom")
        counit = {g: Series.from_json(c) for g, c in data["counit"].items()}
        R = Tensor.from_json(rs, data["R"]) if "R" in data else None
        Phi = Tensor.from_json(rs, data["Phi"]) if "Phi" in data else None
        return cls(rs, delta, counit, anti, R=R, Phi=Phi, name=data.get("name"),
                   contractible=data.get("contractible", False), meta=data.get("meta"))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, type(ZERO)):
        return "%d/%d" % (obj.numerator, obj.denominator)
    return obj


def _as_tuple(v, N):
    if isinstance(v, Series):
        return v.coeffs
    if isinstance(v, tuple):
        return v
    return monomial(N, 0, v)


def _smul(a, b, N):
    from . import _backend

    return _backend.kernels.series_mul(a, b, N)


# --- reports ------------------------------------------------------------------

class AxiomReport:
    """Per-axiom verdicts with the first violating element and its λ-order."""

    def __init__(self, kind):
        self.kind = kind
        self.results = {}
        self.info = {}

    def record(self, axiom, diff, where=None):
        """Register one comparison; only the first failure per axiom is kept."""
        entry = self.results.setdefault(axiom, {"ok": True, "witness": None, "order": None,
                                                "where": None, "checked": 0})
        entry["checked"] += 1
        if entry["ok"] and not _is_zero(diff):
            entry["ok"] = False
            entry["witness"] = diff
            entry["order"] = _valuation(diff)
            entry["where"] = where
        return entry["ok"]

    def ok(self, axiom=None):
        if axiom is not None:
            return self.results[axiom]["ok"]
        return all(e["ok"] for e in self.results.values())

    def first_failure(self):
        for name, e in self.results.items():
            if not e["ok"]:
                return name, e
        return None

    def to_json(self):
        out = {"kind": self.kind, "ok": self.ok(), "axioms": {}, "info": _jsonable(self.info)}
        for name, e in self.results.items():
            w = e["witness"]
            if isinstance(w, Tensor):
                w = w.to_json()
            elif isinstance(w, Series):
                w = w.to_json()
            out["axioms"][name] = {"ok": e["ok"], "checked": e["checked"], "order": e["order"],
                                   "where": e["where"], "witness": w}
        return out

    def __repr__(self):
        return "AxiomReport(%s, %s)" % (
            self.kind, {k: v["ok"] for k, v in self.results.items()})


def _is_zero(x):
    return x.is_zero()


def _valuation(x):
    return x.valuation()


# --- checkers -----------------------------------------------------------------

def random_words(rs, count, max_degree=3, seed=0):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        k = rng.randint(2, max_degree)
        out.append(tuple(rng.randrange(rs.dim) for _ in range(k)))
    return out


def check_hopf_axioms(h, samples=50, seed=0, max_degree=3):
    """Relation compatibility, coassociativity, counit and antipode mod ``lam**(N+1)``."""
    rs = h.rs
    rep = AxiomReport("hopf")
    D = h.delta
    gens = [rs.gen(g) for g in range(rs.dim)]
    dimg = [D.images[g] for g in range(rs.dim)]
    # relation compatibility on generator pairs
    for b, a in combinations(range(rs.dim), 2):
        lhs = commutator(dimg[a], dimg[b])
        rhs = D.apply(normal_form(rs, (a, b)) - normal_form(rs, (b, a)))
        rep.record("relations", lhs - rhs, [rs.labels[a], rs.labels[b]])
    words = random_words(rs, samples, max_degree, seed)
    for w in words:
        prod = rs.one(2)
        for g in w:
            prod = prod * dimg[g]
        rep.record("relations", D.apply(normal_form(rs, w)) - prod, rs.mono_labels(w))
    elems = [(rs.labels[g], gens[g]) for g in range(rs.dim)]
    elems += [(rs.mono_labels(w), normal_form(rs, w)) for w in words]
    for where, x in elems:
        dx = D.apply(x)
        rep.record("coassociativity", D.apply_leg(dx, 0) - D.apply_leg(dx, 1), where)
        rep.record("counit", h.counit_leg(dx, 0) - x, where)
        rep.record("counit", h.counit_leg(dx, 1) - x, where)
        e = rs.scalar(Series._raw(_eps_elem(h, x)))
        rep.record("antipode", multiply_legs(h.antipode.apply_leg(dx, 0)) - e, where)
        rep.record("antipode", multiply_legs(h.antipode.apply_leg(dx, 1)) - e, where)
    return rep


def _eps_elem(h, x):
    return h.counit_leg(x, 0).coeffs


def check_quasi_hopf(h, samples=0, seed=0):
    """Quasi-coassociativity, pentagon and counit normalization of ``h.Phi``."""
    if h.Phi is None:
        raise MissingCoassociator("the structure has no coassociator")
    rs = h.rs
    rep = AxiomReport("quasi-hopf")
    D = h.delta
    Phi = h.Phi
    elems = [(rs.labels[g], rs.gen(g)) for g in range(rs.dim)]
    elems += [(rs.mono_labels(w), normal_form(rs, w)) for w in random_words(rs, samples, 3, seed)]
    for where, x in elems:
        dx = D.apply(x)
        left = D.apply_leg(dx, 0)
        right = D.apply_leg(dx, 1)
        rep.record("quasi_coassociativity", Phi * right - left * Phi, where)
    one = rs.one(1)
    lhs = D.apply_leg(Phi, 0) * D.apply_leg(Phi, 2)
    rhs = tensor(Phi, one) * D.apply_leg(Phi, 1) * tensor(one, Phi)
    rep.record("pentagon", lhs - rhs)
    rep.record("counit_normalization", h.counit_leg(Phi, 1) - rs.one(2))
    return rep


def check_triangular(h, samples=0, seed=0):
    """Intertwining, ``R_21 R = 1`` and, with a coassociator, both hexagons."""
    if h.R is None:
        raise MissingR("the structure has no R-matrix")
    rs = h.rs
    rep = AxiomReport("triangular")
    R = h.R
    elems = [(rs.labels[g], rs.gen(g)) for g in range(rs.dim)]
    elems += [(rs.mono_labels(w), normal_form(rs, w)) for w in random_words(rs, samples, 3, seed)]
    for where, x in elems:
        rep.record("intertwining", R * h.coproduct(x) - h.op_coproduct(x) * R, where)
    rep.record("triangularity", leg_embed(R, "21", 2) * R - rs.one(2))
    if h.Phi is not None:
        Phi = h.Phi
        Phi_inv = inverse(Phi)

        def perm(x, p):
            return leg_embed(x, p, 3)

        R13, R23, R12 = perm(R, "13"), perm(R, "23"), perm(R, "12")
        lhs = h.delta.apply_leg(R, 0)
        rhs = perm(Phi_inv, "312") * R13 * perm(Phi, "132") * R23 * Phi_inv
        rep.record("hexagon_left", lhs - rhs)
        lhs = h.delta.apply_leg(R, 1)
        rhs = perm(Phi, "231") * R13 * perm(Phi_inv, "213") * R12 * Phi
        rep.record("hexagon_right", lhs - rhs)
    return rep


# --- builders -----------------------------------------------------------------

def canonical_hopf(rs):
    """Primitive coproduct, zero counit and ``S(x) = -x`` on an undeformed ``U(g)``."""
    if rs.deformed:
        raise DeformedInput("canonical_hopf needs an undeformed rewrite system")
    one = rs.one(1)
    delta = GenMap(rs, rs, {g: tensor(rs.gen(g), one) + tensor(one, rs.gen(g))
                            for g in range(rs.dim)}, rank=2)
    anti = GenMap(rs, rs, {g: -rs.gen(g) for g in range(rs.dim)}, mode="antihom")
    counit = {g: 0 for g in range(rs.dim)}
    return HopfSpec(rs, delta, counit, anti, name=rs.name + "-canonical",
                    contractible=rs.algebra.has_decomposition())


def _sinh_cosh_words(N, e, odd):
    """Words and coefficients of ``kappa sinh(E/kappa)`` (odd) or ``cosh(E/kappa)``."""
    from math import factorial

    out = []
    k = 1 if odd else 0
    while k - (1 if odd else 0) <= N:
        lam_pow = k - 1 if odd else k
        if lam_pow > N:
            break
        out.append(((e,) * k, monomial(N, lam_pow, mpq(1, factorial(k)))))
        k += 2
    return out


def kappa_relations(n, N, quadratic=(1, 1)):
    """Deformed brackets of κ-Poincaré in spacetime dimension ``n`` to order ``N``.

    ``quadratic`` scales the two ``1/4kappa^2`` terms of ``[N_i, N_j]``
    (``P.P M_ij`` and ``P_k P_[i M_j]k``); the model uses ``(1, 1)``.
    """
    if n not in (3, 4):
        raise BadDimension("kappa_poincare supports n = 3, 4 (got %r)" % (n,))
    algebra = _lie.poincare_iso(n)
    sp = list(range(1, n))
    corr = {}
    sinh = _sinh_cosh_words(N, "E", True)
    cosh = _sinh_cosh_words(N, "E", False)
    q1, q2 = (mpq(q) for q in quadratic)
    quarter = monomial(N, 2, mpq(1, 4))

    def M(i, j):
        if i < j:
            return "M%d%d" % (i, j), 1
        return "M%d%d" % (j, i), -1

    for i in sp:
        for j in sp:
            if i == j:
                corr[("N%d" % i, "P%d" % j)] = [(w, c) for w, c in sinh]
    for i, j in combinations(sp, 2):
        m, _ = M(i, j)
        terms = [((m,) + w, tuple(-x for x in c)) for w, c in cosh]
        if N >= 2:
            for k in sp:
                terms.append((("P%d" % k, "P%d" % k, m), tuple(q1 * x for x in quarter)))
            for k in sp:
                if k != j:
                    mjk, s = M(j, k)
                    terms.append((("P%d" % k, "P%d" % i, mjk), tuple(q2 * s * x for x in quarter)))
                if k != i:
                    mik, s = M(i, k)
                    terms.append((("P%d" % k, "P%d" % j, mik), tuple(-q2 * s * x for x in quarter)))
        corr[("N%d" % i, "N%d" % j)] = terms
    return algebra, corr


def kappa_poincare(n, N, d=None, mixed_term=True, quadratic=(1, 1)):
    """κ-Poincaré in spacetime dimension ``n`` (3 or 4) with ``lam = 1/kappa``.

    The antipode scalar ``d`` of ``S(N_i) = -N_i + (d/2kappa) P_i`` is solved
    from the antipode axiom on ``N_i`` unless given; the value is stored in
    ``meta["d"]``.  ``mixed_term=False`` drops the ``(1/2kappa) P_j (x) M_ij``
    part of the boost coproduct (a deliberately broken model for testing).
    """
    algebra, corr = kappa_relations(n, N, quadratic)
    rs = RewriteSystem(algebra, N, corr, name="kappa-poincare-%d" % n)
    sp = list(range(1, n))
    one = rs.one(1)
    half = Series.lam(N, 1, mpq(1, 2))
    ep = exp_element(rs, rs.gen("E", half))
    em = exp_element(rs, rs.gen("E", -half))
    images = {}
    for lab in rs.labels:
        g = rs.gen(lab)
        if lab.startswith("M") or lab == "E":
            images[lab] = tensor(g, one) + tensor(one, g)
        elif lab.startswith("P"):
            images[lab] = tensor(g, ep) + tensor(em, g)
    for i in sp:
        g = rs.gen("N%d" % i)
        img = tensor(g, ep) + tensor(em, g)
        if mixed_term:
            for j in sp:
                if j == i:
                    continue
                lab, s = ("M%d%d" % (i, j), 1) if i < j else ("M%d%d" % (j, i), -1)
                mij = rs.gen(lab, s)
                pj = rs.gen("P%d" % j)
                img = img + (tensor(pj, ep * mij) - tensor(em * mij, pj)).scale(half)
        images["N%d" % i] = img
    delta = GenMap(rs, rs, images, rank=2)
    counit = {g: 0 for g in range(rs.dim)}

    def antipode_for(dv):
        imgs = {}
        for lab in rs.labels:
            g = rs.gen(lab)
            if lab.startswith("N"):
                imgs[lab] = -g + rs.gen("P" + lab[1:], Series.lam(N, 1, mpq(dv) / 2))
            else:
                imgs[lab] = -g
        return GenMap(rs, rs, imgs, mode="antihom")

    solved = None
    if d is None:
        d, solved = _solve_d(rs, delta, antipode_for, sp)
    h = HopfSpec(rs, delta, counit, antipode_for(d), name="kappa-poincare-%d" % n,
                 contractible=True,
                 meta={"n": n, "d": d, "d_solved": solved, "mixed_term": mixed_term})
    return h


def _solve_d(rs, delta, antipode_for, sp):
    """Solve the antipode axiom on the boosts for the scalar ``d`` (it enters linearly)."""
    if rs.N < 1:
        return mpq(0), False
    res = {}
    for dv in (0, 1):
        S = antipode_for(dv)
        r = rs.zero(1)
        for i in sp:
            dx = delta.apply(rs.gen("N%d" % i))
            r = r + multiply_legs(S.apply_leg(dx, 0))
        res[dv] = r
    r0, r1 = res[0], res[1]
    slope = r1 - r0
    for key, c in slope.terms.items():
        for k, v in enumerate(c):
            if v:
                d = -r0.coeff(key)[k] / v
                return d, True
    return mpq(0), False


def iso3_casimir(rs):
    """``t = eps_ijk M_ij P_k`` with ``M_i3 = N_i``, ``P_3 = E``: ``2(M12 E + N2 P1 - N1 P2)``."""
    return (normal_form(rs, ["M12", "E"], 2) + normal_form(rs, ["N2", "P1"], 2)
            - normal_form(rs, ["N1", "P2"], 2))


def delta_contractibility(h):
    """contractibility_check of coproduct images with offsets H -> 0, P -> 1."""
    rs = h.rs
    out = {"ok": True, "witnesses": []}
    for g in range(rs.dim):
        r = contractibility_check(h.delta.images[g], 1 if rs.is_p[g] else 0)
        if not r["ok"]:
            out["ok"] = False
            out["witnesses"].extend((rs.labels[g],) + w for w in r["witnesses"])
    return out

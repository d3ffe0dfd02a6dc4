"""Chevalley-Eilenberg and Hochschild coboundaries with enveloping-algebra values,
and the exact linear solvers behind the isomorphism and twist recursions.

CE cochains take values in ``U^{(x)r}`` (``r = 2`` for twists, ``r = 1`` for
algebra maps) with ``g |> x = [D0^{(r)}(g), x]``, where ``D0^{(r)}(g)`` puts
``g`` in each leg in turn.
"""

import time
from itertools import combinations, combinations_with_replacement, product

from gmpy2 import mpq

from . import linsolve
from .errors import NoSolutionWithinCaps, NotACocycle, WindowExceeded
from .lie import P
from .pbw import Tensor, _add, commutator, normal_form, tensor
from .scalars import monomial, zeros


class CECochain:
    """Alternating ``n``-cochain on generators, stored on increasing tuples."""

    def __init__(self, rs, degree, values=None, module_rank=2):
        self.rs = rs
        self.degree = degree
        self.module_rank = module_rank
        self.values = {}
        for key, v in (values or {}).items():
            key = tuple(rs.gen_index(g) for g in key)
            sign, skey = _sort_sign(key)
            if sign == 0:
                continue
            if v.rank != module_rank:
                raise ValueError("cochain value has rank %d, expected %d" % (v.rank, module_rank))
            v = v if sign > 0 else -v
            old = self.values.get(skey)
            self.values[skey] = v if old is None else old + v
        self.values = {k: v for k, v in self.values.items() if not v.is_zero()}

    @classmethod
    def zero_form(cls, x):
        return cls(x.rs, 0, {(): x}, module_rank=x.rank)

    def __call__(self, *args):
        """Value on generators (labels or indices), with the alternating sign."""
        key = tuple(self.rs.gen_index(g) for g in args)
        sign, skey = _sort_sign(key)
        if sign == 0:
            return self.rs.zero(self.module_rank)
        v = self.values.get(skey)
        if v is None:
            return self.rs.zero(self.module_rank)
        return v if sign > 0 else -v

    def eval_lin(self, args):
        """Value on a tuple of linear combinations ``{gen: coeff}`` (multilinear)."""
        out = self.rs.zero(self.module_rank)
        for combo in product(*[list(a.items()) for a in args]):
            c = mpq(1)
            for _, v in combo:
                c *= v
            out = out + self(*[g for g, _ in combo]).scale(c)
        return out

    def is_zero(self):
        return not self.values

    def __sub__(self, other):
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = vals[k] - v if k in vals else -v
        return CECochain(self.rs, self.degree, vals, self.module_rank)

    def __eq__(self, other):
        return isinstance(other, CECochain) and (self - other).is_zero()

    def to_json(self):
        return {"degree": self.degree, "module_rank": self.module_rank,
                "values": [{"args": [self.rs.labels[g] for g in k], "value": v.to_json()}
                           for k, v in sorted(self.values.items())]}


def _sort_sign(key):
    if len(set(key)) != len(key):
        return 0, key
    sign = 1
    k = list(key)
    for i in range(len(k)):
        for j in range(len(k) - 1 - i):
            if k[j] > k[j + 1]:
                k[j], k[j + 1] = k[j + 1], k[j]
                sign = -sign
    return sign, tuple(k)


def delta0_gen(rs, g, rank):
    """``D0^{(rank)}(g) = sum_l 1 (x) .. g .. (x) 1``."""
    one = rs.one(1)
    x = rs.gen(g)
    out = rs.zero(rank)
    for leg in range(rank):
        parts = [one] * rank
        parts[leg] = x
        out = out + (tensor(*parts) if rank > 1 else parts[0])
    return out


def module_action(rs, g, x):
    """``g |> x = [D0(g), x]`` on a tensor of any rank."""
    return commutator(delta0_gen(rs, g, x.rank), x)


def ce_coboundary(f):
    """``d_n f`` per the Chevalley-Eilenberg formula (values on increasing tuples)."""
    rs = f.rs
    alg = rs.algebra
    n = f.degree
    vals = {}
    for xs in combinations(range(rs.dim), n + 1):
        acc = rs.zero(f.module_rank)
        for i, x in enumerate(xs):
            rest = xs[:i] + xs[i + 1:]
            v = f(*rest)
            if not v.is_zero():
                acc = acc + module_action(rs, x, v).scale((-1) ** i)
        for i, j in combinations(range(n + 1), 2):
            br = alg.bracket_gen(xs[i], xs[j])
            if not br:
                continue
            rest = [{g: mpq(1)} for k, g in enumerate(xs) if k not in (i, j)]
            acc = acc + f.eval_lin([br] + rest).scale((-1) ** (i + j))
        if not acc.is_zero():
            vals[xs] = acc
    return CECochain(rs, n + 1, vals, f.module_rank)


def ce_action(x, f):
    """``(x |> f)(x_1..x_n) = x |> f(..) - sum_i f(.., [x, x_i], ..)``."""
    rs = f.rs
    vals = {}
    for xs in combinations(range(rs.dim), f.degree):
        acc = module_action(rs, x, f(*xs)) if f.degree else module_action(rs, x, f())
        for i, xi in enumerate(xs):
            br = rs.algebra.bracket_gen(x, xi)
            if br:
                args = [{g: mpq(1)} for g in xs]
                args[i] = br
                acc = acc - f.eval_lin(args)
        if not acc.is_zero():
            vals[xs] = acc
    return CECochain(rs, f.degree, vals, f.module_rank)


# --- Hochschild -----------------------------------------------------------------

class HCochain:
    """Hochschild ``n``-cochain ``U^{(x)n} -> U`` known on monomial tuples.

    Either a callable ``func(monomials) -> Element`` or a finite table of
    values; a table cochain vanishes on tuples it does not list provided each
    argument has degree at most ``window`` and raises WindowExceeded beyond.
    """

    def __init__(self, rs, degree, values=None, func=None, window=None):
        self.rs = rs
        self.degree = degree
        self.func = func
        self.window = window
        self.values = {}
        for key, v in (values or {}).items():
            key = tuple(tuple(rs.gen_index(g) for g in m) for m in key)
            self.values[key] = v

    def on_monomials(self, monos):
        if self.func is not None:
            return self.func(monos)
        if self.window is not None and any(len(m) > self.window for m in monos):
            raise WindowExceeded("argument of degree %d beyond window %d"
                                 % (max(len(m) for m in monos), self.window))
        return self.values.get(tuple(monos), self.rs.zero(1))

    def __call__(self, *args):
        """Value on elements (multilinear over series coefficients)."""
        rs = self.rs
        N = rs.N
        from . import _backend

        sm = _backend.kernels.series_mul
        out = {}
        for combo in product(*[list(a.terms.items()) for a in args]):
            c = rs.one_c
            for _, cc in combo:
                c = sm(c, cc, N)
            v = self.on_monomials(tuple(k[0] for k, _ in combo))
            for k, cc in v.terms.items():
                _add(out, k, sm(c, cc, N))
        return Tensor(rs, 1, out)


def hochschild_coboundary(f):
    """``delta_n f`` with left and right multiplication as the bimodule actions."""
    rs = f.rs
    n = f.degree

    def func(monos):
        xs = [normal_form(rs, m) for m in monos]
        if n == 0:
            m0 = f()
            return xs[0] * m0 - m0 * xs[0]
        acc = xs[0] * f(*xs[1:])
        for i in range(n):
            args = xs[:i] + [xs[i] * xs[i + 1]] + xs[i + 2:]
            acc = acc + f(*args).scale((-1) ** (i + 1))
        acc = acc + (f(*xs[:n]) * xs[n]).scale((-1) ** (n + 1))
        return acc

    return HCochain(rs, n + 1, func=func)


def hochschild_zero_form(x):
    return HCochain(x.rs, 0, func=lambda monos: x)


# --- gradings ------------------------------------------------------------------

def z2_gradings(rs):
    """Basis of additive Z/2 gradings of the generators respected by every rule.

    A grading ``s`` satisfies ``s(word) = s(a) + s(b)`` for every word of every
    correction of ``[g_a, g_b]`` (all λ-orders).  Returned as bit vectors.
    """
    dim = rs.dim
    eqs = []
    for (a, b), rows in rs.rules.items():
        for w, _, _ in rows:
            v = [0] * dim
            for g in w:
                v[g] ^= 1
            v[a] ^= 1
            v[b] ^= 1
            if any(v):
                eqs.append(v)
    # nullspace over GF(2)
    pivots = {}
    for v in eqs:
        v = v[:]
        for c in range(dim):
            if v[c] and c in pivots:
                v = [x ^ y for x, y in zip(v, pivots[c])]
        lead = next((c for c in range(dim) if v[c]), None)
        if lead is not None:
            for c, row in list(pivots.items()):
                if row[lead]:
                    pivots[c] = [x ^ y for x, y in zip(row, v)]
            pivots[lead] = v
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for f in free:
        s = [0] * dim
        s[f] = 1
        for c, row in pivots.items():
            if row[f]:
                s[c] = 1
        basis.append(tuple(s))
    return basis


def grade_of(gradings, monos):
    return tuple(sum(s[g] for m in monos for g in m) & 1 for s in gradings)


def p_is_abelian(rs):
    alg = rs.algebra
    ps = [i for i in range(rs.dim) if rs.is_p[i]]
    return all(not alg.bracket_gen(a, b) for a, b in combinations(ps, 2))


def monomials(rs, max_degree, p_degrees=None):
    """Sorted monomials of degree ``<= max_degree``, optionally filtered by p-degree."""
    out = [()]
    for d in range(1, max_degree + 1):
        for m in combinations_with_replacement(range(rs.dim), d):
            out.append(m)
    if p_degrees is not None:
        out = [m for m in out if rs.p_degree(m) in p_degrees]
    return out


# --- linear solve over a monomial basis ---------------------------------------------

def _solve_columns(columns, rhs_rows, row_index):
    """Solve ``sum_j x_j * columns[j] = rhs`` where columns are dicts row_key -> q."""
    rows = {}
    for j, col in enumerate(columns):
        for rk, v in col.items():
            r = row_index.setdefault(rk, len(row_index))
            rows.setdefault(r, {})[j] = v
    rhs = {}
    for rk, v in rhs_rows.items():
        r = row_index.setdefault(rk, len(row_index))
        rhs[r] = v
    keys = sorted(set(rows) | set(rhs))
    mat = [rows.get(r, {}) for r in keys]
    b = [rhs.get(r, 0) for r in keys]
    return linsolve.solve(mat, b, len(columns))


def _cocycle_witness(xi):
    """A pair where ``d1 xi`` is nonzero, preferring pairs that touch the support of ``xi``."""
    dxi = ce_coboundary(xi)
    if dxi.is_zero():
        return None
    support = {k[0] for k in xi.values}
    key = min(dxi.values, key=lambda k: (not (set(k) & support), k))
    return [xi.rs.labels[g] for g in key]


def _homogeneous_p(xi, rs, shift):
    """Common value of ``p_degree - shift(g)`` over all terms of ``xi(g)``, or None."""
    seen = set()
    for (g,), v in xi.values.items():
        for key in v.terms:
            seen.add(sum(rs.p_degree(m) for m in key) - shift(g))
    return seen.pop() if len(seen) == 1 else None


def _homogeneous_z2(xi, rs, gradings):
    seen = set()
    for (g,), v in xi.values.items():
        gg = grade_of(gradings, [(g,)])
        for key in v.terms:
            k = grade_of(gradings, key)
            seen.add(tuple(x ^ y for x, y in zip(k, gg)))
    return seen.pop() if len(seen) == 1 else None


def solve_d0(xi, p_cap, degree_cap, total_cap=None, check=True):
    """Find ``alpha`` with ``[D0(g), alpha] = xi(g)`` for every generator.

    ``alpha`` is sought among tensors whose monomial tuples have total
    p-degree ``<= p_cap`` and per-leg degree ``<= degree_cap`` (and total
    degree ``<= total_cap`` when given).  When ``xi`` is homogeneous for the
    p-degree grading (abelian ``P``) or for a Z/2 grading of the algebra, the
    basis is cut to the matching component.  Free variables are set to zero
    under the fixed column order.  Returns ``(alpha, diagnostics)``.
    """
    t0 = time.perf_counter()
    rs = xi.rs
    r = xi.module_rank
    if check:
        w = _cocycle_witness(xi)
        if w is not None:
            raise NotACocycle("xi is not a 1-cocycle; d1 xi is nonzero on %s" % (w,), w)
    diag = {"p_cap": p_cap, "degree_cap": degree_cap, "total_cap": total_cap, "module_rank": r}
    if xi.is_zero():
        diag.update(rows=0, cols=0, rank=0, kernel_dim=None, seconds=0.0, solutions=[])
        return rs.zero(r), diag
    p_set = range(p_cap + 1)
    if p_is_abelian(rs):
        d = _homogeneous_p(xi, rs, lambda g: 1 if rs.is_p[g] else 0)
        if d is not None:
            p_set = [d] if d <= p_cap else []
    gradings = z2_gradings(rs)
    zgrade = _homogeneous_z2(xi, rs, gradings) if gradings else None
    diag["p_degrees"] = list(p_set)
    diag["z2_grade"] = zgrade
    legs = monomials(rs, degree_cap, set(range(p_cap + 1)))
    basis = []
    for key in product(legs, repeat=r):
        pd = sum(rs.p_degree(m) for m in key)
        if pd not in p_set:
            continue
        if total_cap is not None and sum(len(m) for m in key) > total_cap:
            continue
        if zgrade is not None and grade_of(gradings, key) != zgrade:
            continue
        basis.append(key)
    basis.sort(key=lambda k: (sum(len(m) for m in k), k))
    # column images per λ-order-0 part
    gens = list(range(rs.dim))
    d0 = [delta0_gen(rs, g, r) for g in gens]
    columns = []
    for key in basis:
        b = Tensor(rs, r, {key: rs.one_c})
        col = {}
        for g in gens:
            img = commutator(d0[g], b)
            for k, c in img.terms.items():
                if c[0]:
                    col[(g, k)] = c[0]
        columns.append(col)
    alpha = rs.zero(r)
    N = rs.N
    ranks = []
    for lam_k in range(N + 1):
        rhs = {}
        for (g,), v in xi.values.items():
            for k, c in v.terms.items():
                if c[lam_k]:
                    rhs[(g, k)] = c[lam_k]
        if not rhs:
            continue
        sol, info = _solve_columns(columns, rhs, {})
        ranks.append(info)
        if sol is None:
            diag.update(rows=info["rows"], cols=len(basis), rank=info["rank"],
                        kernel_dim=info["kernel_dim"], seconds=time.perf_counter() - t0)
            raise NoSolutionWithinCaps(
                "no solution with p_cap=%d degree_cap=%d total_cap=%s (basis %d)"
                % (p_cap, degree_cap, total_cap, len(basis)))
        terms = {basis[j]: monomial(N, lam_k, v) for j, v in sol.items()}
        alpha = alpha + Tensor(rs, r, terms)
    # unconditional re-verification
    for g in gens:
        got = commutator(d0[g], alpha)
        if got != xi(g):
            raise AssertionError("solve_d0 post-verification failed at %s" % rs.labels[g])
    last = ranks[-1] if ranks else {"rows": 0, "rank": 0, "kernel_dim": len(basis)}
    diag.update(rows=last["rows"], cols=len(basis), rank=last["rank"],
                kernel_dim=last["kernel_dim"], seconds=time.perf_counter() - t0, verified=True)
    return alpha, diag


def solve_d1(omega, p_target, degree_cap, check=True):
    """Find a 1-cochain ``phi`` (rank-1 values) with ``d1 phi = omega``.

    ``p_target(g)`` gives the allowed p-degrees of ``phi(g)``.  Solutions are
    restricted to the Z/2 grade of each generator when ``omega`` is
    homogeneous.  Returns ``(phi, diagnostics)``.
    """
    t0 = time.perf_counter()
    rs = omega.rs
    if check:
        d = ce_coboundary(omega)
        if not d.is_zero():
            key = sorted(d.values)[0]
            raise NotACocycle("omega is not a 2-cocycle", [rs.labels[g] for g in key])
    gradings = z2_gradings(rs)
    shift = None
    if gradings:
        seen = set()
        for (a, b), v in omega.values.items():
            ga = grade_of(gradings, [(a, b)])
            for key in v.terms:
                k = grade_of(gradings, key)
                seen.add(tuple(x ^ y for x, y in zip(k, ga)))
        if len(seen) == 1:
            shift = seen.pop()
    mons = monomials(rs, degree_cap)
    basis = []
    for g in range(rs.dim):
        allowed = set(p_target(g))
        gg = grade_of(gradings, [(g,)]) if gradings else None
        for m in mons:
            if rs.p_degree(m) not in allowed:
                continue
            if shift is not None:
                want = tuple(x ^ y for x, y in zip(gg, shift))
                if grade_of(gradings, [m]) != want:
                    continue
            basis.append((g, m))
    basis.sort(key=lambda gm: (len(gm[1]), gm))
    columns = []
    for g, m in basis:
        phi = CECochain(rs, 1, {(g,): Tensor(rs, 1, {(m,): rs.one_c})}, module_rank=1)
        img = ce_coboundary(phi)
        col = {}
        for key, v in img.values.items():
            for k, c in v.terms.items():
                if c[0]:
                    col[(key, k)] = c[0]
        columns.append(col)
    N = rs.N
    vals = {}
    info = {"rows": 0, "rank": 0, "kernel_dim": len(basis)}
    for lam_k in range(N + 1):
        rhs = {}
        for key, v in omega.values.items():
            for k, c in v.terms.items():
                if c[lam_k]:
                    rhs[(key, k)] = c[lam_k]
        if not rhs:
            continue
        sol, info = _solve_columns(columns, rhs, {})
        if sol is None:
            raise NoSolutionWithinCaps("no 1-cochain within degree_cap=%d (basis %d)"
                                       % (degree_cap, len(basis)))
        for j, v in sol.items():
            g, m = basis[j]
            t = Tensor(rs, 1, {(m,): monomial(N, lam_k, v)})
            vals[(g,)] = vals[(g,)] + t if (g,) in vals else t
    phi = CECochain(rs, 1, vals, module_rank=1)
    if ce_coboundary(phi) != omega:
        raise AssertionError("solve_d1 post-verification failed")
    return phi, {"rows": info["rows"], "cols": len(basis), "rank": info["rank"],
                 "kernel_dim": info["kernel_dim"], "seconds": time.perf_counter() - t0,
                 "verified": True}

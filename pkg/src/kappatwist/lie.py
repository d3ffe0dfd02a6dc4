"""Finite-dimensional Lie algebras over Q given by structure constants.

Symmetric decompositions are recorded as a parity per generator (``H`` or
``P``).  The registry builds its semisimple members from explicit matrices,
so their structure constants are computed rather than typed in; the
inhomogeneous ``iso`` algebras are written from the bracket formulas.
"""

import json
from itertools import combinations

from gmpy2 import mpq

from . import linsolve
from .errors import AlgebraMismatch, IndexOutOfRange, NoDecomposition
from .scalars import fmt_rat, rat

H, P, NONE = "H", "P", "NONE"


class LieAlgebraSpec:
    """Basis labels, parities and structure constants ``[g_a, g_b]`` for ``a < b``."""

    def __init__(self, name, generators, structure):
        self.name = name
        self.generators = [(str(l), str(p)) for l, p in generators]
        self.labels = [l for l, _ in self.generators]
        self.parities = [p for _, p in self.generators]
        self.dim = len(self.generators)
        self._index = {l: i for i, l in enumerate(self.labels)}
        clean = {}
        for (a, b), terms in structure.items():
            for i in (a, b):
                if not 0 <= i < self.dim:
                    raise IndexOutOfRange("generator index %r out of range" % (i,))
            if a == b:
                continue
            sign = 1
            if a > b:
                a, b, sign = b, a, -1
            acc = dict(clean.get((a, b), {}))
            for c, v in terms:
                if not 0 <= c < self.dim:
                    raise IndexOutOfRange("generator index %r out of range" % (c,))
                acc[c] = acc.get(c, 0) + sign * rat(v)
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                clean[(a, b)] = acc
            else:
                clean.pop((a, b), None)
        self.structure = {k: sorted(v.items()) for k, v in sorted(clean.items())}

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise IndexOutOfRange("unknown generator %r" % (label,)) from None

    def has_decomposition(self):
        return any(p != NONE for p in self.parities)

    def of_parity(self, parity):
        return [i for i, p in enumerate(self.parities) if p == parity]

    def bracket_gen(self, a, b):
        """``[g_a, g_b]`` as a dict ``c -> coeff``."""
        if a == b:
            return {}
        if a < b:
            return dict(self.structure.get((a, b), ()))
        return {c: -v for c, v in self.structure.get((b, a), ())}

    def ad_matrix(self, a):
        """Matrix of ``ad_{g_a}``; column ``b`` holds ``[g_a, g_b]``."""
        m = [[mpq(0)] * self.dim for _ in range(self.dim)]
        for b in range(self.dim):
            for c, v in self.bracket_gen(a, b).items():
                m[c][b] = v
        return m

    def same_structure(self, other):
        return self.generators == other.generators and self.structure == other.structure

    def __repr__(self):
        return "LieAlgebraSpec(%r, dim=%d)" % (self.name, self.dim)

    def to_json(self):
        return {
            "name": self.name,
            "generators": [{"label": l, "parity": p} for l, p in self.generators],
            "brackets": [
                {"a": self.labels[a], "b": self.labels[b],
                 "terms": [{"c": self.labels[c], "coeff": fmt_rat(v)} for c, v in terms]}
                for (a, b), terms in self.structure.items()
            ],
        }

    @classmethod
    def from_json(cls, data):
        gens = [(g["label"], g.get("parity", NONE)) for g in data["generators"]]
        idx = {l: i for i, (l, _) in enumerate(gens)}

        def look(label):
            if label not in idx:
                raise IndexOutOfRange("unknown generator %r" % (label,))
            return idx[label]

        structure = {}
        for br in data.get("brackets", []):
            key = (look(br["a"]), look(br["b"]))
            structure.setdefault(key, []).extend(
                (look(t["c"]), rat(t["coeff"])) for t in br["terms"])
        return cls(data["name"], gens, structure)


def load_algebra(path):
    with open(path) as fh:
        return LieAlgebraSpec.from_json(json.load(fh))


class LieTensor:
    """Sparse element of ``g^{(x)k}``: k-tuples of generator indices to rationals."""

    __slots__ = ("rank", "entries", "algebra")

    def __init__(self, rank, entries=None, algebra=None):
        if rank < 1:
            raise ValueError("rank must be at least 1")
        self.rank = rank
        self.algebra = algebra
        acc = {}
        for k, v in (entries or {}).items():
            k = tuple(k)
            if len(k) != rank:
                raise ValueError("key %r does not have rank %d" % (k, rank))
            acc[k] = acc.get(k, 0) + rat(v)
        self.entries = {k: v for k, v in acc.items() if v}

    @classmethod
    def vector(cls, coeffs, algebra=None):
        return cls(1, {(c,): v for c, v in coeffs.items()}, algebra)

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, LieTensor):
            return NotImplemented
        return self.rank == other.rank and self.entries == other.entries

    def __add__(self, other):
        acc = dict(self.entries)
        for k, v in other.entries.items():
            acc[k] = acc.get(k, 0) + v
        return LieTensor(self.rank, acc, self.algebra)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, q):
        q = rat(q)
        return LieTensor(self.rank, {k: v * q for k, v in self.entries.items()}, self.algebra)

    __rmul__ = __mul__

    def __repr__(self):
        return "LieTensor(%d, %r)" % (self.rank, self.entries)


def _check_owner(spec, *ts):
    for t in ts:
        if t.algebra is not None and t.algebra != spec.name:
            raise AlgebraMismatch("tensor over %r used with %r" % (t.algebra, spec.name))
        for k in t.entries:
            for i in k:
                if not 0 <= i < spec.dim:
                    raise AlgebraMismatch("index %d outside %r" % (i, spec.name))


def bracket(spec, x, y):
    _check_owner(spec, x, y)
    if x.rank != 1 or y.rank != 1:
        raise AlgebraMismatch("bracket takes rank-1 tensors")
    acc = {}
    for (a,), u in x.entries.items():
        for (b,), v in y.entries.items():
            for c, w in spec.bracket_gen(a, b).items():
                acc[(c,)] = acc.get((c,), 0) + u * v * w
    return LieTensor(1, acc, spec.name)


def _jacobi_ok(spec):
    for a, b, c in combinations(range(spec.dim), 3):
        acc = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for d, v in spec.bracket_gen(y, z).items():
                for e, w in spec.bracket_gen(x, d).items():
                    acc[e] = acc.get(e, 0) + v * w
        if any(acc.values()):
            return False
    return True


def _decomposition_ok(spec):
    if not spec.has_decomposition():
        return True
    if any(p not in (H, P) for p in spec.parities):
        return False
    for (a, b), terms in spec.structure.items():
        pa, pb = spec.parities[a], spec.parities[b]
        want = H if pa == pb else P
        if any(spec.parities[c] != want for c, _ in terms):
            return False
    return True


def _span_pp_ok(spec):
    if not spec.has_decomposition():
        return True
    ps = spec.of_parity(P)
    hs = spec.of_parity(H)
    rows = [spec.bracket_gen(a, b) for a, b in combinations(ps, 2)]
    rows = [r for r in rows if r]
    if any(spec.parities[c] != H for r in rows for c in r):
        return False
    return linsolve.rank(rows, spec.dim) == len(hs)


def validate(spec):
    """Exact Jacobi, parity-rule and ``span [P,P] = H`` checks."""
    return {
        "jacobi": _jacobi_ok(spec),
        "decomposition": _decomposition_ok(spec),
        "span_pp": _span_pp_ok(spec),
    }


def killing_form(spec):
    ads = [spec.ad_matrix(a) for a in range(spec.dim)]
    n = spec.dim
    out = [[mpq(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            A, B = ads[a], ads[b]
            t = sum((A[i][k] * B[k][i] for i in range(n) for k in range(n)), mpq(0))
            out[a][b] = out[b][a] = t
    return out


def iw_contract(spec, name=None):
    """Inonu-Wigner contraction: every ``[P, P]`` bracket is set to zero."""
    if not spec.has_decomposition():
        raise NoDecomposition("%r has no symmetric decomposition" % spec.name)
    structure = {
        k: v for k, v in spec.structure.items()
        if not (spec.parities[k[0]] == P and spec.parities[k[1]] == P)
    }
    return LieAlgebraSpec(name or spec.name + "-contracted", spec.generators, structure)


def cybe_bracket(spec, r):
    """``[[r, r]] = [r12, r13] + [r12, r23] + [r13, r23]`` for ``r`` of rank 2."""
    _check_owner(spec, r)
    if r.rank != 2:
        raise AlgebraMismatch("cybe_bracket takes a rank-2 tensor")
    acc = {}

    def add(key, v):
        acc[key] = acc.get(key, 0) + v

    items = list(r.entries.items())
    for (a, b), u in items:
        for (c, d), v in items:
            uv = u * v
            for e, w in spec.bracket_gen(a, c).items():
                add((e, b, d), uv * w)
            for e, w in spec.bracket_gen(b, c).items():
                add((a, e, d), uv * w)
            for e, w in spec.bracket_gen(b, d).items():
                add((a, c, e), uv * w)
    return LieTensor(3, acc, spec.name)


def ad_action(spec, x, T):
    """``sum over legs`` of ``ad_{g_x}`` applied to that leg of ``T``."""
    acc = {}
    for key, v in T.entries.items():
        for leg, a in enumerate(key):
            for c, w in spec.bracket_gen(x, a).items():
                k = key[:leg] + (c,) + key[leg + 1:]
                acc[k] = acc.get(k, 0) + v * w
    return LieTensor(T.rank, acc, spec.name)


def ad_invariance_witness(spec, T):
    """First generator index that moves ``T``, or None if ``T`` is invariant."""
    _check_owner(spec, T)
    for x in range(spec.dim):
        if not ad_action(spec, x, T).is_zero():
            return x
    return None


def ad_invariant(spec, T):
    return ad_invariance_witness(spec, T) is None


# --- registry ---------------------------------------------------------------

def _matmul(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n)), mpq(0)) for j in range(n)]
            for i in range(n)]


def _comm(A, B):
    AB, BA = _matmul(A, B), _matmul(B, A)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(AB, BA)]


def _unit_matrix(n, a, b, v=1):
    m = [[mpq(0)] * n for _ in range(n)]
    m[a][b] = mpq(v)
    return m


def _lin(*pairs):
    out = None
    for c, m in pairs:
        scaled = [[c * x for x in row] for row in m]
        out = scaled if out is None else [[x + y for x, y in zip(r, s)] for r, s in zip(out, scaled)]
    return out


def from_matrices(name, generators, matrices):
    """Structure constants of the span of ``matrices`` (closed under commutators)."""
    flat = [[x for row in m for x in row] for m in matrices]
    ncols = len(matrices)
    rows = []
    size = len(flat[0])
    for e in range(size):
        rows.append({c: flat[c][e] for c in range(ncols) if flat[c][e]})
    structure = {}
    for a, b in combinations(range(ncols), 2):
        target = [x for row in _comm(matrices[a], matrices[b]) for x in row]
        sol, _ = linsolve.solve(rows, target, ncols)
        if sol is None:
            raise ValueError("matrices of %r are not closed under the commutator" % name)
        if sol:
            structure[(a, b)] = sorted(sol.items())
    return LieAlgebraSpec(name, generators, structure)


def compact_so(n):
    """so(n) on ``M_ab = E_ab - E_ba``, ``0 <= a < b < n``; no decomposition."""
    pairs = list(combinations(range(n), 2))
    mats = [_lin((1, _unit_matrix(n, a, b)), (-1, _unit_matrix(n, b, a))) for a, b in pairs]
    return from_matrices("so%d" % n, [("M%d%d" % p, NONE) for p in pairs], mats)


def poincare_labels(n):
    """κ-labels for spacetime dimension ``n``: M_ij, N_i, then P_i, E (spatial 1..n-1)."""
    sp = range(1, n)
    ms = ["M%d%d" % p for p in combinations(sp, 2)]
    ns = ["N%d" % i for i in sp]
    ps = ["P%d" % i for i in sp]
    return [(l, H) for l in ms + ns] + [(l, P) for l in ps + ["E"]]


def lorentz_so(n):
    """so(n+1) in the κ-labelled basis with metric diag(1, ..., 1, -1).

    Basis matrices ``L_ab = eta_bb E_ab - eta_aa E_ba`` on indices 0..n with
    ``eta_nn = -1``; ``M_ij = -L_ij``, ``N_i = L_in``, ``P_i = -L_0i``,
    ``E = L_0n``.  At κ-order zero this reproduces the Poincaré conventions.
    """
    size = n + 1
    eta = [1] * n + [-1]

    def L(a, b):
        return _lin((eta[b], _unit_matrix(size, a, b)), (-eta[a], _unit_matrix(size, b, a)))

    sp = range(1, n)
    mats = [_lin((-1, L(i, j))) for i, j in combinations(sp, 2)]
    mats += [L(i, n) for i in sp]
    mats += [_lin((-1, L(0, i))) for i in sp]
    mats += [L(0, n)]
    return from_matrices("so%d" % (n + 1), poincare_labels(n), mats)


def _delta(a, b):
    return 1 if a == b else 0


def poincare_iso(n):
    """iso(n) written from the bracket formulas (independent of the matrices)."""
    gens = poincare_labels(n)
    idx = {l: i for i, (l, _) in enumerate(gens)}
    sp = list(range(1, n))

    def M(i, j):
        if i == j:
            return None, 0
        if i < j:
            return idx["M%d%d" % (i, j)], 1
        return idx["M%d%d" % (j, i)], -1

    structure = {}

    def put(a, b, terms):
        terms = [(c, v) for c, v in terms if c is not None and v]
        if terms:
            structure.setdefault((a, b), []).extend(terms)

    for i, j in combinations(sp, 2):
        m = idx["M%d%d" % (i, j)]
        for k in sp:
            put(m, idx["P%d" % k], [(idx["P%d" % j], _delta(i, k)), (idx["P%d" % i], -_delta(j, k))])
            put(m, idx["N%d" % k], [(idx["N%d" % j], _delta(i, k)), (idx["N%d" % i], -_delta(j, k))])
        for k, l in combinations(sp, 2):
            m2 = idx["M%d%d" % (k, l)]
            if m2 <= m:
                continue
            terms = []
            for (x, y), s in (((j, l), _delta(i, k)), ((i, l), -_delta(j, k)),
                              ((j, k), -_delta(i, l)), ((i, k), _delta(j, l))):
                if s:
                    c, sg = M(x, y)
                    terms.append((c, s * sg))
            put(m, m2, terms)
    for i in sp:
        ni = idx["N%d" % i]
        put(ni, idx["E"], [(idx["P%d" % i], 1)])
        for j in sp:
            put(ni, idx["P%d" % j], [(idx["E"], _delta(i, j))])
            if j > i:
                c, sg = M(i, j)
                put(ni, idx["N%d" % j], [(c, -sg)])
    return LieAlgebraSpec("iso%d" % n, gens, structure)


def _sl2():
    A = _lin((1, _unit_matrix(2, 0, 1)), (-1, _unit_matrix(2, 1, 0)))
    S1 = _lin((1, _unit_matrix(2, 0, 0)), (-1, _unit_matrix(2, 1, 1)))
    S2 = _lin((1, _unit_matrix(2, 0, 1)), (1, _unit_matrix(2, 1, 0)))
    return from_matrices("sl2", [("A", H), ("S1", P), ("S2", P)], [A, S1, S2])


def _so3_so2():
    base = compact_so(3)
    # H = {M12}, P = {M01, M02}
    order = [2, 0, 1]
    gens = [(base.labels[i], H if i == 2 else P) for i in order]
    pos = {old: new for new, old in enumerate(order)}
    structure = {}
    for (a, b), terms in base.structure.items():
        structure[(pos[a], pos[b])] = [(pos[c], v) for c, v in terms]
    return LieAlgebraSpec("so3-so2", gens, structure)


def compact_pair(n):
    """so(n+1) on ``M_ab = E_ab - E_ba`` with ``H = so(n)`` on indices 1..n, ``P = {M_0i}``."""
    base = compact_so(n + 1)
    hs = [i for i, l in enumerate(base.labels) if not l.startswith("M0")]
    ps = [i for i, l in enumerate(base.labels) if l.startswith("M0")]
    order = hs + ps
    pos = {old: new for new, old in enumerate(order)}
    gens = [(base.labels[i], H if i in hs else P) for i in order]
    structure = {}
    for (a, b), terms in base.structure.items():
        structure[(pos[a], pos[b])] = [(pos[c], v) for c, v in terms]
    return LieAlgebraSpec("so%d-so%d" % (n + 1, n), gens, structure)


def _so3_diag():
    n = 3
    e = [_lin((1, _unit_matrix(n, a, b)), (-1, _unit_matrix(n, b, a)))
         for a, b in combinations(range(n), 2)]

    def block(x, y):
        m = [[mpq(0)] * 6 for _ in range(6)]
        for i in range(3):
            for j in range(3):
                m[i][j] = x[i][j]
                m[3 + i][3 + j] = y[i][j]
        return m

    neg = [[[-v for v in row] for row in m] for m in e]
    mats = [block(m, m) for m in e] + [block(m, mn) for m, mn in zip(e, neg)]
    gens = [("H%d" % k, H) for k in range(1, 4)] + [("Q%d" % k, P) for k in range(1, 4)]
    return from_matrices("so3+so3", gens, mats)


_BUILDERS = {
    "so3": lambda: compact_so(3),
    "so4": lambda: lorentz_so(3),
    "so5": lambda: lorentz_so(4),
    "iso3": lambda: poincare_iso(3),
    "iso4": lambda: poincare_iso(4),
    "sl2": _sl2,
    "so3-so2": _so3_so2,
    "so4-so3": lambda: compact_pair(3),
    "so3+so3": _so3_diag,
}

_CACHE = {}


def registry_names():
    return list(_BUILDERS)


def get_algebra(name):
    """Registry lookup by name (``so3``, ``so4``, ``iso3``, ...)."""
    if name not in _BUILDERS:
        raise KeyError("unknown algebra %r" % (name,))
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]

"""Symmetric tensors over ``g`` or ``g (+) g``, invariant subspaces and the
restriction property.

Basis vectors of ``g (+) g`` are numbered ``0..dim-1`` (first copy, ``X``)
and ``dim..2dim-1`` (second copy, ``Y``).  A tuple's bigrade ``(m, p)``
counts its ``H`` and ``P`` factors.  Invariants are exact rational
nullspaces of the stacked action matrices.
"""

from itertools import combinations, combinations_with_replacement, permutations
from math import factorial

from gmpy2 import mpq

from . import linsolve
from .errors import DimensionTooLarge
from .lie import H, P
from .pbw import normal_form
from .scalars import fmt_rat, rat

DEFAULT_CAP = 20000


class SymTensor:
    """Sparse symmetric tensor: sorted index tuples to rationals."""

    __slots__ = ("spec", "degree", "copies", "entries")

    def __init__(self, spec, degree, entries=None, copies=2):
        self.spec = spec
        self.degree = degree
        self.copies = copies
        acc = {}
        for k, v in (entries or {}).items():
            k = tuple(sorted(k))
            if len(k) != degree:
                raise ValueError("tuple %r does not have degree %d" % (k, degree))
            if any(not 0 <= i < copies * spec.dim for i in k):
                raise ValueError("index out of range in %r" % (k,))
            acc[k] = acc.get(k, 0) + rat(v)
        self.entries = {k: v for k, v in acc.items() if v}

    def parity(self, i):
        return self.spec.parities[i % self.spec.dim]

    def bigrade(self, key):
        p = sum(1 for i in key if self.parity(i) == P)
        return (len(key) - p, p)

    def is_zero(self):
        return not self.entries

    def __add__(self, other):
        acc = dict(self.entries)
        for k, v in other.entries.items():
            acc[k] = acc.get(k, 0) + v
        return SymTensor(self.spec, self.degree, acc, self.copies)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q):
        q = rat(q)
        return SymTensor(self.spec, self.degree, {k: v * q for k, v in self.entries.items()},
                         self.copies)

    def __eq__(self, other):
        return isinstance(other, SymTensor) and self.entries == other.entries

    def label(self, i):
        lab = self.spec.labels[i % self.spec.dim]
        if self.copies == 1:
            return lab
        return ("X:" if i < self.spec.dim else "Y:") + lab

    def to_json(self):
        return {"degree": self.degree,
                "entries": [{"factors": [self.label(i) for i in k], "coeff": fmt_rat(v)}
                            for k, v in sorted(self.entries.items())]}

    def __repr__(self):
        return "SymTensor(%s)" % " + ".join(
            "%s*%s" % (fmt_rat(v), "*".join(self.label(i) for i in k) or "1")
            for k, v in sorted(self.entries.items()))


def _act_vector(spec, x, i):
    """``[x, e_i]`` for ``x`` a dict gen -> coeff, on either copy of ``g``."""
    dim = spec.dim
    base, off = i % dim, i - i % dim
    out = {}
    for a, ca in x.items():
        for c, v in spec.bracket_gen(a, base).items():
            out[off + c] = out.get(off + c, 0) + ca * v
    return out


def _act_tuple(spec, x, key):
    out = {}
    for pos, i in enumerate(key):
        for j, v in _act_vector(spec, x, i).items():
            k = tuple(sorted(key[:pos] + (j,) + key[pos + 1:]))
            out[k] = out.get(k, 0) + v
    return out


def sym_action(spec, x, T):
    """Diagonal adjoint action of ``x`` (generator or dict) extended as a derivation."""
    if not isinstance(x, dict):
        x = {x if isinstance(x, int) else spec.index(x): mpq(1)}
    acc = {}
    for key, v in T.entries.items():
        for k, w in _act_tuple(spec, x, key).items():
            acc[k] = acc.get(k, 0) + v * w
    return SymTensor(spec, T.degree, acc, T.copies)


def ambient_basis(spec, degree, bigrade=None, copies=2, split=None):
    """Sorted index tuples of the given degree, optionally one bigrade / copy split."""
    out = []
    for key in combinations_with_replacement(range(copies * spec.dim), degree):
        if bigrade is not None:
            p = sum(1 for i in key if spec.parities[i % spec.dim] == P)
            if (degree - p, p) != tuple(bigrade):
                continue
        if split is not None:
            nx = sum(1 for i in key if i < spec.dim)
            if (nx, degree - nx) != tuple(split):
                continue
        out.append(key)
    return out


def _acting_elements(spec, acting):
    if acting in ("H", "H-only"):
        return [{i: mpq(1)} for i in spec.of_parity(H)]
    if acting in ("full", "full-g", "g"):
        return [{i: mpq(1)} for i in range(spec.dim)]
    if acting in ("PP", "span[P,P]"):
        return [spec.bracket_gen(a, b) for a, b in combinations(spec.of_parity(P), 2)
                if spec.bracket_gen(a, b)]
    return [x if isinstance(x, dict) else {x: mpq(1)} for x in acting]


class SubspaceBasis:
    def __init__(self, spec, degree, bigrade, split, acting, basis, ambient_dim, copies):
        self.spec = spec
        self.degree = degree
        self.bigrade = bigrade
        self.split = split
        self.acting = acting
        self.basis = basis
        self.ambient_dim = ambient_dim
        self.copies = copies

    @property
    def dim(self):
        return len(self.basis)

    def to_json(self):
        return {"degree": self.degree, "bigrade": self.bigrade, "split": self.split,
                "acting": self.acting if isinstance(self.acting, str) else "custom",
                "ambient_dim": self.ambient_dim, "dim": self.dim,
                "basis": [b.to_json() for b in self.basis]}


def invariant_subspace(spec, degree, bigrade=None, acting="H", copies=2, split=None,
                       cap=DEFAULT_CAP):
    """Exact basis of the tensors killed by every acting element.

    ``bigrade`` restricts the ambient space to one ``(m, p)`` block, which
    is only meaningful when every acting element preserves it (``H``).
    """
    amb = ambient_basis(spec, degree, bigrade, copies, split)
    if len(amb) > cap:
        raise DimensionTooLarge("ambient dimension %d exceeds cap %d" % (len(amb), cap))
    col = {k: j for j, k in enumerate(amb)}
    rows = {}
    for x in _acting_elements(spec, acting):
        for j, key in enumerate(amb):
            for k, v in _act_tuple(spec, x, key).items():
                rk = (id(x), k)
                rows.setdefault(rk, {})[j] = v
    ns = linsolve.nullspace(list(rows.values()), len(amb))
    basis = [SymTensor(spec, degree, {amb[j]: v for j, v in vec.items()}, copies) for vec in ns]
    return SubspaceBasis(spec, degree, bigrade, split, acting, basis, len(amb), copies)


def project_to_p(T):
    """Drop every tuple containing an ``H`` factor (restriction to ``p``)."""
    return SymTensor(T.spec, T.degree,
                     {k: v for k, v in T.entries.items()
                      if all(T.parity(i) == P for i in k)}, T.copies)


def _vec(T, index):
    return {index[k]: v for k, v in T.entries.items()}


def restriction_check(spec, degree, cap=DEFAULT_CAP, split=None):
    """Does projection to ``p`` map ``S_p(g+g)^g`` onto ``S_{0,p}(g+g)^h``?

    The cokernel is reported as the orthogonal complement (coordinate inner
    product on tuples) of the image inside the ``h``-invariants.
    """
    full = invariant_subspace(spec, degree, None, "full", split=split, cap=cap)
    hinv = invariant_subspace(spec, degree, (0, degree), "H", split=split, cap=cap)
    amb = ambient_basis(spec, degree, (0, degree), 2, split)
    index = {k: j for j, k in enumerate(amb)}
    images = [project_to_p(b) for b in full.basis]
    img_rows = [_vec(t, index) for t in images if not t.is_zero()]
    img_rank = linsolve.rank(img_rows, len(amb)) if img_rows else 0
    inside = True
    if img_rows:
        both = img_rows + [_vec(b, index) for b in hinv.basis]
        inside = linsolve.rank(both, len(amb)) == hinv.dim
    # orthogonal complement of the image inside span(hinv)
    coker = []
    if img_rank < hinv.dim:
        hb = [_vec(b, index) for b in hinv.basis]
        eqs = []
        for r in img_rows:
            eq = {}
            for i, h in enumerate(hb):
                s = sum((v * r.get(j, 0) for j, v in h.items()), mpq(0))
                if s:
                    eq[i] = s
            if eq:
                eqs.append(eq)
        for coeffs in linsolve.nullspace(eqs, len(hb)):
            acc = {}
            for i, c in coeffs.items():
                for j, v in hb[i].items():
                    acc[amb[j]] = acc.get(amb[j], 0) + c * v
            coker.append(SymTensor(spec, degree, acc, 2))
    return {
        "algebra": spec.name,
        "degree": degree,
        "split": split,
        "dim_full_invariants": full.dim,
        "dim_h_invariants": hinv.dim,
        "image_rank": img_rank,
        "image_inside": inside,
        "surjective": img_rank == hinv.dim,
        "cokernel_basis": coker,
    }


def report_json(rep):
    out = dict(rep)
    out["cokernel_basis"] = [t.to_json() for t in rep["cokernel_basis"]]
    return out


def symmetrize(rs, T):
    """``(1/k!) sum_sigma x_sigma(1) ... x_sigma(k)`` in normal form (single copy)."""
    out = rs.zero(1)
    k = T.degree
    w = mpq(1, factorial(k))
    spec = T.spec
    for key, v in T.entries.items():
        labels = [spec.labels[i] for i in key]
        for perm in permutations(labels):
            out = out + normal_form(rs, perm, v * w)
    return out

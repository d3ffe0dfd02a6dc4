"""PBW normal ordering in (deformed) enveloping algebras and their tensor powers.

A :class:`RewriteSystem` orders the generators with every ``H`` generator
before every ``P`` generator, so the number of ``P`` factors of a sorted
monomial (its *p-degree*) is read off directly.  Commutation rules
``g_a g_b = g_b g_a + c_ab`` (``a`` after ``b``) may carry positive powers
of the deformation parameter; a correction of valuation ``v`` is rewritten
with the remaining budget ``N - v``, which bounds the recursion.

All elements are :class:`Tensor` objects of some rank ``k``: a map from
``k``-tuples of sorted monomials to raw coefficient tuples.  ``Element`` and
``TensorElement`` are the rank-1 and general names for the same class.
"""

from itertools import combinations
from math import factorial

from gmpy2 import mpq

from . import _backend
from .errors import (
    BadPlacement, InconsistentRewriteSystem, MismatchedOrder, NonNilpotentArgument,
    NotInvertible, RankMismatch, UnknownGenerator,
)
from .lie import H, NONE, P, LieAlgebraSpec
from .scalars import Series, ZERO, fmt_rat, monomial, rat, unit, valuation, zeros


def _coeff_tuple(c, N):
    """Coerce a Series / raw tuple / rational to a raw tuple of length N+1."""
    if isinstance(c, Series):
        if c.order != N:
            raise MismatchedOrder("series of order %d used at order %d" % (c.order, N))
        return c.coeffs
    if isinstance(c, tuple):
        if len(c) != N + 1:
            raise MismatchedOrder("coefficient tuple has the wrong length")
        return c
    return monomial(N, 0, rat(c))


def _pbw_order(algebra):
    return sorted(range(algebra.dim), key=lambda i: (algebra.parities[i] == P, i))


def _reindexed(algebra, order):
    pos = {old: new for new, old in enumerate(order)}
    gens = [algebra.generators[i] for i in order]
    structure = {}
    for (a, b), terms in algebra.structure.items():
        structure[(pos[a], pos[b])] = [(pos[c], v) for c, v in terms]
    return LieAlgebraSpec(algebra.name, gens, structure)


class RewriteSystem:
    """Commutation rules of ``U(g)[[lam]] / lam**(N+1)``, possibly deformed.

    ``corrections`` maps an ordered pair of generators (labels or indices) to
    the full right-hand side of ``[g_a, g_b]`` as a list of ``(word, coeff)``;
    pairs that are not listed use the Lie bracket.  The constructor enforces
    the termination guard and runs the diamond check on all length-3 words.
    """

    def __init__(self, algebra, N, corrections=None, check=True, name=None):
        if N < 0:
            raise ValueError("truncation order must be non-negative")
        order = _pbw_order(algebra)
        if order != list(range(algebra.dim)):
            algebra = _reindexed(algebra, order)
        self.algebra = algebra
        self.name = name or algebra.name
        self.N = N
        self.labels = list(algebra.labels)
        self.dim = algebra.dim
        self.is_p = tuple(p == P for p in algebra.parities)
        self._index = {l: i for i, l in enumerate(self.labels)}
        self.one_c = unit(N)
        self.deformed = False
        brackets = {}
        for a, b in combinations(range(self.dim), 2):
            brackets[(b, a)] = [((c,), monomial(N, 0, -v)) for c, v in algebra.bracket_gen(a, b).items()]
        for key, terms in (corrections or {}).items():
            a, b = (self.gen_index(k) for k in key)
            if a == b:
                raise InconsistentRewriteSystem("correction for a generator with itself", key)
            sign = 1
            if a < b:
                a, b, sign = b, a, -1
            rows = []
            for word, c in terms:
                w = tuple(self.gen_index(g) for g in word)
                ct = _coeff_tuple(c, N)
                if sign < 0:
                    ct = tuple(-x for x in ct)
                rows.append((w, ct))
            brackets[(a, b)] = rows
        self.rules = {}
        for (a, b), rows in brackets.items():
            merged = {}
            for w, ct in rows:
                old = merged.get(w)
                merged[w] = ct if old is None else tuple(x + y for x, y in zip(old, ct))
            out = []
            for w, ct in merged.items():
                if any(ct):
                    v = valuation(ct)
                    if v > 0:
                        self.deformed = True
                    out.append((w, v, ct))
            self.rules[(a, b)] = out
        self._guard()
        self.cache = {}
        if check:
            bad = self.diamond_check()
            if bad is not None:
                raise InconsistentRewriteSystem(
                    "overlap %s does not resolve" % ".".join(bad[0]), bad)

    # -- structure ---------------------------------------------------------
    def gen_index(self, g):
        if isinstance(g, str):
            try:
                return self._index[g]
            except KeyError:
                raise UnknownGenerator("unknown generator %r" % (g,)) from None
        if isinstance(g, int) and 0 <= g < self.dim:
            return g
        raise UnknownGenerator("unknown generator %r" % (g,))

    def _guard(self):
        for (a, b), rows in self.rules.items():
            lie = {}
            for c, v in self.algebra.bracket_gen(a, b).items():
                lie[(c,)] = v
            got = {}
            for w, v, ct in rows:
                if v == 0:
                    if len(w) > 1:
                        raise InconsistentRewriteSystem(
                            "order-0 correction of degree %d for %s,%s"
                            % (len(w), self.labels[a], self.labels[b]), (a, b, w))
                    got[w] = ct[0]
            if got != lie:
                raise InconsistentRewriteSystem(
                    "order-0 part of [%s,%s] differs from the Lie bracket"
                    % (self.labels[a], self.labels[b]), (a, b))

    def diamond_check(self):
        """None if every overlap ``g_a g_b g_c`` (``a > b > c``) resolves, else a witness."""
        N = self.N
        for c, b, a in combinations(range(self.dim), 3):
            left = [((b, a, c), self.one_c)] + [(w + (c,), ct) for w, _, ct in self.rules[(a, b)]]
            right = [((a, c, b), self.one_c)] + [((a,) + w, ct) for w, _, ct in self.rules[(b, c)]]
            diff = self._lin_nf(left) - self._lin_nf(right)
            if not diff.is_zero():
                return ((self.labels[a], self.labels[b], self.labels[c]), diff)
        return None

    def _lin_nf(self, pairs):
        acc = {}
        N = self.N
        for w, ct in pairs:
            v = valuation(ct)
            if v > N:
                continue
            sub = _backend.kernels.nf_word(w, N - v, self.rules, self.cache, self.one_c)
            for m, s in sub.items():
                _add(acc, (m,), _backend.kernels.series_mul(ct, s, N))
        return Tensor(self, 1, acc)

    # -- constructors ------------------------------------------------------
    def one(self, rank=1):
        return Tensor(self, rank, {((),) * rank: self.one_c})

    def zero(self, rank=1):
        return Tensor(self, rank, {})

    def gen(self, g, coeff=1):
        i = self.gen_index(g)
        return Tensor(self, 1, {((i,),): _coeff_tuple(coeff, self.N)})

    def scalar(self, coeff, rank=1):
        return Tensor(self, rank, {((),) * rank: _coeff_tuple(coeff, self.N)})

    def word(self, word, coeff=1):
        return normal_form(self, word, coeff)

    def lam(self, k=1, value=1):
        return Series.lam(self.N, k, value)

    def p_degree(self, mono):
        isp = self.is_p
        return sum(1 for g in mono if isp[g])

    def mono_labels(self, mono):
        return [self.labels[g] for g in mono]

    def __repr__(self):
        return "RewriteSystem(%r, N=%d%s)" % (self.name, self.N, ", deformed" if self.deformed else "")


def _add(acc, key, c):
    old = acc.get(key)
    acc[key] = c if old is None else tuple(x + y for x, y in zip(old, c))


class Tensor:
    """Sparse element of ``U^{(x)rank}[[lam]]`` in PBW normal form."""

    __slots__ = ("rs", "rank", "terms")

    def __init__(self, rs, rank, terms):
        self.rs = rs
        self.rank = rank
        self.terms = {k: v for k, v in terms.items() if any(v)}

    # -- access ------------------------------------------------------------
    @property
    def N(self):
        return self.rs.N

    def items(self):
        for k, v in self.terms.items():
            yield k, Series._raw(v)

    def coeff(self, key):
        return Series._raw(self.terms.get(tuple(key), zeros(self.rs.N)))

    def is_zero(self):
        return not self.terms

    def valuation(self):
        return min((valuation(c) for c in self.terms.values()), default=self.rs.N + 1)

    def order_part(self, k):
        """Coefficient of ``lam**k`` as a dict ``key -> rational``."""
        return {key: c[k] for key, c in self.terms.items() if c[k]}

    def truncate(self, k):
        """Drop all powers of ``lam`` above ``k``."""
        N = self.rs.N
        out = {}
        for key, c in self.terms.items():
            out[key] = tuple(c[i] if i <= k else ZERO for i in range(N + 1))
        return Tensor(self.rs, self.rank, out)

    def shift(self, k):
        """Multiply by ``lam**k``."""
        return self.scale(monomial(self.rs.N, k))

    # -- arithmetic --------------------------------------------------------
    def _compat(self, other):
        if not isinstance(other, Tensor):
            raise TypeError("expected a Tensor")
        if other.rank != self.rank:
            raise RankMismatch("rank %d vs %d" % (self.rank, other.rank))
        if other.rs is not self.rs:
            if other.rs.N != self.rs.N:
                raise MismatchedOrder("truncation orders differ")
            if other.rs.labels != self.rs.labels:
                raise RankMismatch("tensors over different algebras")

    def __add__(self, other):
        if not isinstance(other, Tensor):
            return self + self.rs.scalar(other, self.rank)
        self._compat(other)
        acc = dict(self.terms)
        for k, c in other.terms.items():
            _add(acc, k, c)
        return Tensor(self.rs, self.rank, acc)

    __radd__ = __add__

    def __neg__(self):
        return Tensor(self.rs, self.rank, {k: tuple(-x for x in c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        N = self.rs.N
        ct = _coeff_tuple(s, N)
        if ct[0] and not any(ct[1:]):
            q = ct[0]
            return Tensor(self.rs, self.rank, {k: tuple(x * q for x in c) for k, c in self.terms.items()})
        sm = _backend.kernels.series_mul
        return Tensor(self.rs, self.rank, {k: sm(c, ct, N) for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Tensor):
            return mul(self.rs, self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, q):
        return self.scale(1 / rat(q))

    def __pow__(self, k):
        out = self.rs.one(self.rank)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Tensor):
            return self.rank == other.rank and self.terms == other.terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def __repr__(self):
        return "Tensor(%s)" % self.pretty()

    def pretty(self):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=_sort_key):
            legs = ["*".join(self.rs.labels[g] for g in m) or "1" for m in key]
            parts.append("(%s) %s" % (Series._raw(self.terms[key]).pretty(), " (x) ".join(legs)))
        return " + ".join(parts)

    # -- serialization -----------------------------------------------------
    def to_json(self):
        return {
            "rank": self.rank,
            "terms": [
                {"monomials": [self.rs.mono_labels(m) for m in key],
                 "coeff": Series._raw(self.terms[key]).to_json()}
                for key in sorted(self.terms, key=_sort_key)
            ],
        }

    @classmethod
    def from_json(cls, rs, data):
        out = rs.zero(data["rank"])
        for t in data["terms"]:
            c = Series.from_json(t["coeff"])
            legs = [normal_form(rs, m) for m in t["monomials"]]
            term = legs[0]
            for leg in legs[1:]:
                term = tensor(term, leg)
            out = out + term.scale(c)
        return out


Element = Tensor
TensorElement = Tensor


def _sort_key(key):
    return tuple((len(m), m) for m in key)


def normal_form(rs, word, coeff=1):
    """PBW normal form of ``coeff * word`` (labels or generator indices)."""
    w = tuple(rs.gen_index(g) for g in word)
    ct = _coeff_tuple(coeff, rs.N)
    return rs._lin_nf([(w, ct)])


def mul(rs, x, y):
    """Leg-wise product of two tensors of equal rank, in normal form."""
    if x.rank != y.rank:
        raise RankMismatch("cannot multiply rank %d by rank %d" % (x.rank, y.rank))
    if x.rs.N != y.rs.N or x.rs.N != rs.N:
        raise MismatchedOrder("truncation orders differ")
    terms = _backend.kernels.mul_terms(x.terms, y.terms, x.rank, rs.rules, rs.cache, rs.one_c, rs.N)
    return Tensor(rs, x.rank, terms)


def commutator(x, y):
    return x * y - y * x


def tensor(*xs):
    """Tensor product ``x_1 (x) x_2 (x) ...`` of tensors over one rewrite system."""
    rs = xs[0].rs
    N = rs.N
    sm = _backend.kernels.series_mul
    terms = dict(xs[0].terms)
    rank = xs[0].rank
    for y in xs[1:]:
        nxt = {}
        for k1, c1 in terms.items():
            for k2, c2 in y.terms.items():
                _add(nxt, k1 + k2, sm(c1, c2, N))
        terms = nxt
        rank += y.rank
    return Tensor(rs, rank, terms)


def leg_embed(x, placement, target_rank):
    """Place the legs of ``x`` at the 1-based positions ``placement`` (e.g. "13", "21")."""
    pos = [int(ch) - 1 for ch in str(placement)]
    if len(pos) != x.rank or len(set(pos)) != len(pos) or any(not 0 <= p < target_rank for p in pos):
        raise BadPlacement("placement %r invalid for rank %d -> %d" % (placement, x.rank, target_rank))
    out = {}
    for key, c in x.terms.items():
        legs = [()] * target_rank
        for m, p in zip(key, pos):
            legs[p] = m
        _add(out, tuple(legs), c)
    return Tensor(x.rs, target_rank, out)


def multiply_legs(x):
    """``m(a (x) b) = a b`` on a rank-2 tensor."""
    if x.rank != 2:
        raise RankMismatch("multiply_legs expects rank 2")
    rs = x.rs
    N = rs.N
    k = _backend.kernels
    acc = {}
    for (a, b), c in x.terms.items():
        v = valuation(c)
        for m, s in k.nf_word(a + b, N - v, rs.rules, rs.cache, rs.one_c).items():
            _add(acc, (m,), k.series_mul(c, s, N))
    return Tensor(rs, 1, acc)


def transport(x, rs):
    """Reinterpret the sorted monomials of ``x`` in another system with the same labels."""
    if rs.labels != x.rs.labels or rs.N != x.rs.N:
        raise RankMismatch("systems do not share generators and order")
    return Tensor(rs, x.rank, x.terms)


def inverse(x):
    """Inverse of a tensor congruent to a nonzero scalar mod ``lam``."""
    rs = x.rs
    one = rs.one(x.rank)
    c0 = x.order_part(0)
    unit_key = ((),) * x.rank
    if set(c0) != {unit_key}:
        raise NotInvertible("order-0 part is not a nonzero scalar")
    s = 1 / c0[unit_key]
    u = one - x.scale(s)
    out = one
    power = one
    for _ in range(rs.N):
        power = power * u
        if power.is_zero():
            break
        out = out + power
    return out.scale(s)


def exp_element(rs, x):
    """``sum_k x**k / k!`` for ``x`` with every term of positive valuation."""
    for key, c in x.terms.items():
        if c[0]:
            raise NonNilpotentArgument("term %r has valuation 0" % (key,))
    out = rs.one(x.rank)
    power = rs.one(x.rank)
    for k in range(1, rs.N + 1):
        power = power * x
        if power.is_zero():
            break
        out = out + power.scale(mpq(1, factorial(k)))
    return out


def contractibility_check(x, p):
    """Every order-``n`` term must have total p-degree at most ``n + p``."""
    rs = x.rs
    witnesses = []
    for key in sorted(x.terms, key=_sort_key):
        c = x.terms[key]
        d = sum(rs.p_degree(m) for m in key)
        for n, v in enumerate(c):
            if v and d > n + p:
                witnesses.append((n, key))
    witnesses.sort()
    return {"ok": not witnesses, "witnesses": witnesses}


def format_witness(rs, w):
    n, key = w
    return {"order": n, "monomials": [rs.mono_labels(m) for m in key]}


class GenMap:
    """Map given on generators, extended as ``hom``, ``antihom`` or ``derivation``.

    ``images[g]`` is a Tensor of rank ``rank`` over ``target``.  Products of
    images are formed in ``target``; the source only provides the monomials.
    """

    MODES = ("hom", "antihom", "derivation")

    def __init__(self, source, target, images, mode="hom", rank=1):
        if mode not in self.MODES:
            raise ValueError("unknown extension mode %r" % (mode,))
        if source.N != target.N:
            raise MismatchedOrder("source and target truncation orders differ")
        self.source = source
        self.target = target
        self.mode = mode
        self.rank = rank
        self.images = {}
        for g, img in images.items():
            i = source.gen_index(g)
            if img.rank != rank:
                raise RankMismatch("image of %s has rank %d, expected %d"
                                   % (source.labels[i], img.rank, rank))
            self.images[i] = img
        missing = [source.labels[i] for i in range(source.dim) if i not in self.images]
        if missing:
            raise UnknownGenerator("no image for %s" % ", ".join(missing))
        if mode == "derivation" and rank != 1:
            raise RankMismatch("derivations are supported with rank-1 images only")
        self._cache = {}

    def image(self, g):
        return self.images[self.source.gen_index(g)]

    def on_monomial(self, mono):
        hit = self._cache.get(mono)
        if hit is not None:
            return hit
        t = self.target
        if self.mode == "derivation":
            if not mono:
                res = t.zero(1)
            else:
                res = t.zero(1)
                for i, g in enumerate(mono):
                    left = t.word([self.source.labels[h] for h in mono[:i]])
                    right = t.word([self.source.labels[h] for h in mono[i + 1:]])
                    res = res + left * self.images[g] * right
        elif not mono:
            res = t.one(self.rank)
        elif len(mono) == 1:
            res = self.images[mono[0]]
        elif self.mode == "hom":
            res = self.on_monomial(mono[:-1]) * self.images[mono[-1]]
        else:
            res = self.images[mono[-1]] * self.on_monomial(mono[:-1])
        self._cache[mono] = res
        return res

    def apply(self, x):
        if x.rank != 1:
            raise RankMismatch("apply expects a rank-1 element; use apply_leg")
        return self.apply_leg(x, 0)

    __call__ = apply

    def apply_leg(self, x, leg):
        """Apply the map to leg ``leg`` of ``x``; the image legs replace it in place."""
        if not 0 <= leg < x.rank:
            raise RankMismatch("leg %d out of range for rank %d" % (leg, x.rank))
        N = self.target.N
        sm = _backend.kernels.series_mul
        acc = {}
        for key, c in x.terms.items():
            img = self.on_monomial(key[leg])
            pre, post = key[:leg], key[leg + 1:]
            for ik, ic in img.terms.items():
                _add(acc, pre + ik + post, sm(c, ic, N))
        return Tensor(self.target, x.rank - 1 + self.rank, acc)

    def is_identity(self):
        return all(img == self.target.gen(self.source.labels[g]) for g, img in self.images.items())


def identity_map(rs):
    return GenMap(rs, rs, {g: rs.gen(g) for g in range(rs.dim)})


def adjoint_map(rs, x):
    """The derivation ``y -> [x, y]``."""
    return GenMap(rs, rs, {g: commutator(x, rs.gen(g)) for g in range(rs.dim)}, mode="derivation")


def compose(phi, psi):
    """``phi o psi`` for rank-1 homomorphisms (``psi`` lands in ``phi.source``)."""
    if psi.target.labels != phi.source.labels or psi.rank != 1:
        raise RankMismatch("maps do not compose")
    imgs = {g: phi.apply(transport(img, phi.source)) for g, img in psi.images.items()}
    return GenMap(psi.source, phi.target, imgs, mode=phi.mode, rank=phi.rank)


def inverse_map(phi):
    """Order-by-order inverse of a homomorphism congruent to the identity mod ``lam``.

    Returns ``psi`` from ``phi.target`` to ``phi.source`` with
    ``phi(psi(g)) = g`` for every generator.
    """
    if phi.mode != "hom" or phi.rank != 1:
        raise ValueError("inverse_map needs a rank-1 homomorphism")
    src, tgt = phi.source, phi.target
    for g, img in phi.images.items():
        if (img - tgt.gen(src.labels[g])).valuation() < 1:
            raise NotInvertible("map is not congruent to the identity mod lam")
    imgs = {g: src.gen(tgt.labels[g]) for g in range(tgt.dim)}
    for _ in range(src.N):
        done = True
        for g in range(tgt.dim):
            r = phi.apply(imgs[g]) - tgt.gen(g)
            if not r.is_zero():
                done = False
                imgs[g] = imgs[g] - transport(r, src)
        if done:
            break
    return GenMap(tgt, src, imgs)


def map_contractibility(phi, offsets=None):
    """contractibility_check on generator images with parity offsets (H -> 0, P -> 1)."""
    rs = phi.source
    report = {"ok": True, "witnesses": []}
    for g in range(rs.dim):
        p = (offsets or {}).get(g, 1 if rs.is_p[g] else 0)
        r = contractibility_check(phi.images[g], p)
        if not r["ok"]:
            report["ok"] = False
            report["witnesses"].extend((rs.labels[g], w) for w in r["witnesses"])
    return report


def canonical_hopf(rs):
    """Undeformed Hopf structure on ``U(g)``; see :func:`kappatwist.hopf.canonical_hopf`."""
    from .hopf import canonical_hopf as build

    return build(rs)

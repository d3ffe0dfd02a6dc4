"""Pure-Python hot kernels.

Reference implementation of the inner loops: truncated series products,
PBW normal ordering, leg-wise products of tensor terms and sparse exact
row reduction.  ``_kernels_c`` (Cython) implements the same functions and
is preferred at import when it was built; both must agree exactly.

Coefficients are raw tuples of ``gmpy2.mpq`` of length ``N + 1``.
Monomials are tuples of generator indices, non-decreasing in PBW order.
"""

from gmpy2 import mpq

ZERO = mpq(0)


def series_mul(a, b, budget):
    n = len(a)
    out = [ZERO] * n
    for i in range(budget + 1):
        ai = a[i]
        if not ai:
            continue
        for j in range(budget + 1 - i):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return tuple(out)


def valuation(c):
    i = 0
    for x in c:
        if x:
            return i
        i += 1
    return i


def _addto(acc, key, c):
    old = acc.get(key)
    if old is None:
        acc[key] = c
    else:
        acc[key] = tuple([x + y for x, y in zip(old, c)])


def _prune(acc):
    return {k: v for k, v in acc.items() if any(v)}


def nf_word(word, budget, rules, cache, one):
    """Normal form of ``word`` modulo ``lam**(budget+1)``.

    ``rules[(a, b)]`` (``a > b``) lists ``(word, val, coeffs)`` with
    ``g_a g_b = g_b g_a + sum coeffs * word``; ``val`` is the valuation of
    ``coeffs``.  Results are memoised in ``cache`` keyed by ``(word, budget)``.
    """
    key = (word, budget)
    hit = cache.get(key)
    if hit is not None:
        return hit
    n = len(word)
    i = 0
    while i < n - 1 and word[i] <= word[i + 1]:
        i += 1
    if i >= n - 1:
        res = {word: one}
        cache[key] = res
        return res
    a = word[i]
    b = word[i + 1]
    pre = word[:i]
    post = word[i + 2:]
    acc = dict(nf_word(pre + (b, a) + post, budget, rules, cache, one))
    for w, v, c in rules[(a, b)]:
        if v > budget:
            continue
        sub = nf_word(pre + w + post, budget - v, rules, cache, one)
        for m, s in sub.items():
            _addto(acc, m, series_mul(c, s, budget))
    res = _prune(acc)
    cache[key] = res
    return res


def mul_terms(xt, yt, rank, rules, cache, one, N):
    """Leg-wise product of two tensor term maps (keys are rank-tuples of monomials)."""
    out = {}
    yitems = [(k, c, valuation(c)) for k, c in yt.items()]
    for kx, cx in xt.items():
        vx = valuation(cx)
        for ky, cy, vy in yitems:
            v = vx + vy
            if v > N:
                continue
            budget = N - v
            c = series_mul(cx, cy, N)
            if rank == 1:
                leg = nf_word(kx[0] + ky[0], budget, rules, cache, one)
                for m, s in leg.items():
                    _addto(out, (m,), series_mul(c, s, N))
                continue
            partial = [((), c)]
            for l in range(rank):
                leg = nf_word(kx[l] + ky[l], budget, rules, cache, one)
                nxt = []
                for key, cc in partial:
                    for m, s in leg.items():
                        nxt.append((key + (m,), series_mul(cc, s, N)))
                partial = nxt
            for key, cc in partial:
                _addto(out, key, cc)
    return _prune(out)


def echelon(rows, ncols):
    """Row echelon form of sparse rows over Q.

    ``rows`` are dicts ``col -> mpq``; column ``ncols`` holds the right-hand
    side (it sorts last).  Returns ``(pivots, bad)`` where ``pivots`` maps a
    pivot column to its normalised row and ``bad`` is the first row that
    reduced to ``0 = rhs != 0`` (or None).
    """
    pivots = {}
    bad = None
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        while r:
            c = min(r)
            if c == ncols:
                if bad is None:
                    bad = r
                break
            p = pivots.get(c)
            if p is None:
                inv = 1 / r[c]
                pivots[c] = {k: v * inv for k, v in r.items()}
                break
            f = r[c]
            for k, v in p.items():
                nv = r.get(k, ZERO) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return pivots, bad


def back_substitute(pivots, ncols):
    """Solution of an echelon system with every free variable set to zero."""
    x = {}
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        acc = row.get(ncols, ZERO)
        for k, v in row.items():
            if k != c and k != ncols:
                xv = x.get(k)
                if xv is not None:
                    acc -= v * xv
        if acc:
            x[c] = acc
    return x

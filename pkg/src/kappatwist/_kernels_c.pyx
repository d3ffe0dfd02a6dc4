# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_kernels_py``; same functions, same results."""

from gmpy2 import mpq

ZERO = mpq(0)


cpdef tuple series_mul(tuple a, tuple b, int budget):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i, j
    cdef list out = [ZERO] * n
    cdef object ai, bj
    for i in range(budget + 1):
        ai = a[i]
        if not ai:
            continue
        for j in range(budget + 1 - i):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return tuple(out)


cpdef int valuation(tuple c):
    cdef Py_ssize_t i
    cdef Py_ssize_t n = len(c)
    for i in range(n):
        if c[i]:
            return i
    return n


cdef inline void _addto(dict acc, object key, tuple c):
    cdef object old = acc.get(key)
    cdef Py_ssize_t i, n
    cdef list s
    if old is None:
        acc[key] = c
    else:
        n = len(c)
        s = [None] * n
        for i in range(n):
            s[i] = (<tuple>old)[i] + c[i]
        acc[key] = tuple(s)


cdef inline bint _nonzero(tuple c):
    for x in c:
        if x:
            return True
    return False


cdef dict _prune(dict acc):
    return {k: v for k, v in acc.items() if _nonzero(<tuple>v)}


cpdef dict nf_word(tuple word, int budget, dict rules, dict cache, tuple one):
    cdef object key = (word, budget)
    cdef object hit = cache.get(key)
    if hit is not None:
        return <dict>hit
    cdef Py_ssize_t n = len(word)
    cdef Py_ssize_t i = 0
    while i < n - 1 and word[i] <= word[i + 1]:
        i += 1
    cdef dict res
    if i >= n - 1:
        res = {word: one}
        cache[key] = res
        return res
    cdef object a = word[i]
    cdef object b = word[i + 1]
    cdef tuple pre = word[:i]
    cdef tuple post = word[i + 2:]
    cdef dict acc = dict(nf_word(pre + (b, a) + post, budget, rules, cache, one))
    cdef dict sub
    cdef int v
    for w, v, c in rules[(a, b)]:
        if v > budget:
            continue
        sub = nf_word(pre + w + post, budget - v, rules, cache, one)
        for m, s in sub.items():
            _addto(acc, m, series_mul(<tuple>c, <tuple>s, budget))
    res = _prune(acc)
    cache[key] = res
    return res


cpdef dict mul_terms(dict xt, dict yt, int rank, dict rules, dict cache, tuple one, int N):
    cdef dict out = {}
    cdef list yitems = [(k, c, valuation(<tuple>c)) for k, c in yt.items()]
    cdef int vx, vy, v, budget, l
    cdef tuple c, cc
    cdef dict leg
    cdef list partial, nxt
    for kx, cx in xt.items():
        vx = valuation(<tuple>cx)
        for ky, cy, vy in yitems:
            v = vx + vy
            if v > N:
                continue
            budget = N - v
            c = series_mul(<tuple>cx, <tuple>cy, N)
            if rank == 1:
                leg = nf_word((<tuple>kx)[0] + (<tuple>ky)[0], budget, rules, cache, one)
                for m, s in leg.items():
                    _addto(out, (m,), series_mul(c, <tuple>s, N))
                continue
            partial = [((), c)]
            for l in range(rank):
                leg = nf_word((<tuple>kx)[l] + (<tuple>ky)[l], budget, rules, cache, one)
                nxt = []
                for key, cc in partial:
                    for m, s in leg.items():
                        nxt.append((key + (m,), series_mul(cc, <tuple>s, N)))
                partial = nxt
            for key, cc in partial:
                _addto(out, key, cc)
    return _prune(out)


cpdef tuple echelon(list rows, int ncols):
    cdef dict pivots = {}
    cdef object bad = None
    cdef dict r, p
    cdef int c
    cdef object f, inv, nv
    for row in rows:
        r = {k: v for k, v in (<dict>row).items() if v}
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


cpdef dict back_substitute(dict pivots, int ncols):
    cdef dict x = {}
    cdef dict row
    cdef object acc, xv
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        acc = row.get(ncols, ZERO)
        for k, v in row.items():
            if k != c and k != ncols:
                xv = x.get(k)
                if xv is not None:
                    acc = acc - v * xv
        if acc:
            x[c] = acc
    return x

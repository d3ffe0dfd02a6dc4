"""Sparse exact linear algebra over Q (rank, solve, nullspace, determinant)."""

from gmpy2 import mpq

from . import _backend


def _rows(matrix):
    if isinstance(matrix, dict):
        return list(matrix.values())
    out = []
    for row in matrix:
        if isinstance(row, dict):
            out.append(row)
        else:
            out.append({j: mpq(v) for j, v in enumerate(row) if v})
    return out


def rank(matrix, ncols=None):
    rows = _rows(matrix)
    if ncols is None:
        ncols = 1 + max((max(r) for r in rows if r), default=-1)
    pivots, _ = _backend.kernels.echelon(rows, ncols)
    return len(pivots)


def solve(rows, rhs, ncols):
    """Solve ``A x = b`` for sparse rows; free variables are set to zero.

    ``rhs`` is a list of rationals aligned with ``rows``.  Returns
    ``(x, info)`` where ``x`` is a dict ``col -> value`` or None when the
    system is inconsistent; ``info`` holds rank and kernel dimension.
    """
    aug = []
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[ncols] = mpq(b)
        aug.append(row)
    pivots, bad = _backend.kernels.echelon(aug, ncols)
    info = {"rows": len(rows), "cols": ncols, "rank": len(pivots),
            "kernel_dim": ncols - len(pivots)}
    if bad is not None:
        return None, info
    return _backend.kernels.back_substitute(pivots, ncols), info


def nullspace(rows, ncols):
    """Basis of ``{x : A x = 0}`` as a list of sparse dicts (deterministic order).

    Each basis vector has a single free column set to 1 (reduced echelon
    convention), free columns taken in increasing order.
    """
    pivots, _ = _backend.kernels.echelon(_rows(rows), ncols)
    # full back-reduction so each pivot row expresses its pivot via free columns
    order = sorted(pivots)
    reduced = {}
    for c in reversed(order):
        row = dict(pivots[c])
        for k in [k for k in row if k != c and k in reduced]:
            f = row.pop(k)
            for kk, vv in reduced[k].items():
                if kk == k:
                    continue
                nv = row.get(kk, 0) - f * vv
                if nv:
                    row[kk] = nv
                else:
                    row.pop(kk, None)
        reduced[c] = row
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        vec = {f: mpq(1)}
        for c, row in reduced.items():
            v = row.get(f)
            if v:
                vec[c] = -v
        basis.append(vec)
    return basis


def det(matrix):
    """Exact determinant of a square dense matrix (fraction-exact elimination)."""
    a = [[mpq(x) for x in row] for row in matrix]
    n = len(a)
    d = mpq(1)
    for i in range(n):
        p = next((r for r in range(i, n) if a[r][i]), None)
        if p is None:
            return mpq(0)
        if p != i:
            a[i], a[p] = a[p], a[i]
            d = -d
        d *= a[i][i]
        inv = 1 / a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] * inv
            if f:
                for c in range(i, n):
                    a[r][c] -= f * a[i][c]
    return d

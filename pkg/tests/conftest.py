import random

import pytest
from gmpy2 import mpq

from kappatwist import hopf, lie, pbw


@pytest.fixture(scope="session")
def iso3_rs():
    return pbw.RewriteSystem(lie.get_algebra("iso3"), 3)


@pytest.fixture(scope="session")
def kp3_n2():
    return hopf.kappa_poincare(3, 2)


def rand_rational(rng, lo=-3, hi=3, den=3):
    return mpq(rng.randint(lo, hi), rng.randint(1, den))


def random_element(rs, rng, terms=3, max_degree=2, min_val=0, rank=1, min_degree=0):
    """Sparse random tensor: a few monomials with random series coefficients."""
    out = rs.zero(rank)
    for _ in range(terms):
        legs = []
        for _ in range(rank):
            d = rng.randint(min_degree, max_degree)
            legs.append(tuple(rng.randrange(rs.dim) for _ in range(d)))
        k = rng.randint(min_val, rs.N)
        c = rand_rational(rng)
        if not c:
            continue
        t = None
        for w in legs:
            e = pbw.normal_form(rs, w)
            t = e if t is None else pbw.tensor(t, e)
        out = out + t.shift(k).scale(c)
    return out


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    rows = {}
    for key in ("passed", "failed", "error", ""):
        for rep in terminalreporter.stats.get(key, []):
            name = getattr(rep, "nodeid", "").partition("test_acceptance.py::test_criterion_")[2]
            if not name:
                continue
            num, _, title = name.split("[")[0].partition("_")
            row = rows.setdefault(int(num), {"title": title.replace("_", " "), "ok": True, "seconds": 0.0})
            if key:
                row["ok"] = row["ok"] and key == "passed"
            row["seconds"] += rep.duration
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(rows):
        row = rows[num]
        terminalreporter.write_line("criterion %2d: %s  %s (%.1f s)"
                                    % (num, "PASS" if row["ok"] else "FAIL", row["title"], row["seconds"]))

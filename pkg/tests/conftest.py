import itertools
import math

import pytest


def is_prime_power(x: int) -> bool:
    if x < 2:
        return False
    p = next(d for d in range(2, x + 1) if x % d == 0)
    while x % p == 0:
        x //= p
    return x == 1


def naive_lineq(terms, m, n, r, require_max_differ=True):
    """Every ordered index tuple, checked one at a time."""
    out = []
    idx = range(len(terms))
    for x in itertools.product(idx, repeat=m):
        sx = sum(terms[i] for i in x)
        for y in itertools.product(idx, repeat=n):
            if sx != sum(terms[j] for j in y) + r:
                continue
            if require_max_differ and max(terms[i] for i in x) == max(terms[j] for j in y):
                continue
            out.append((x, y))
    return sorted(out)


def brute_crt_min(a1, m1, a2, m2):
    for x in range(math.lcm(m1, m2)):
        if x % m1 == a1 % m1 and x % m2 == a2 % m2:
            return x
    return None


@pytest.fixture
def run_cli(capsys):
    from vaporlab.cli import main

    def run(*argv):
        code = main([str(a) for a in argv])
        return code, capsys.readouterr().out

    return run


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)

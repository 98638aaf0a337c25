import math
import warnings

import mpmath
import pytest

from sparsecuts.bounds import (Phase, RegimeWarning, bound_report, lb_theorem2, lb_theorem3,
                               phase_classify, phase_thresholds, ub_theorem1)

mpmath.mp.dps = 40


def test_ub_hand_evaluation():
    ub1, ub1s, ub2 = ub_theorem1(4, 3, 2, 2)
    L = math.log(48)
    want = 4 * max(4 ** 0.25 / math.sqrt(2) * 4 * math.sqrt(L), 16 / 6 * L)
    assert ub1 == pytest.approx(want, rel=1e-12)
    assert ub1s == pytest.approx(8 * math.sqrt(2) * math.sqrt(2) * math.sqrt(L), rel=1e-12)
    assert ub2 == pytest.approx(2 * 2 * (2 - 1))
    assert ub_theorem1(5, 3, 5, 1)[2] == 0


def test_lb2_factor_and_flags():
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        v = lb_theorem2(100, 10, 10)
    assert any(issubclass(w.category, RegimeWarning) for w in rec)
    assert v < 0
    # the (1/2 - k^{-3/2}) factor at k = 64
    n, t, k = 10 ** 6, 10 ** 9, 64
    head = min(math.sqrt(n / k) * math.sqrt(math.log(t)) / (110 * math.sqrt(math.log(n))), math.sqrt(n) / 8)
    assert lb_theorem2(n, t, k, quiet=True) == pytest.approx(head * (0.5 - 1 / 512) - 3 * math.sqrt(math.log(t)))
    # the leading term grows like sqrt(log t); the -3 sqrt(log t) tail is separate
    def first(t):
        return lb_theorem2(n, t, k, quiet=True) + 3 * math.sqrt(math.log(t))
    assert first(t * t) / first(t) == pytest.approx(math.sqrt(2))


def hand_theorem3(n, m, M, k):
    n, m, M, k = map(mpmath.mpf, (n, m, M, k))
    c = k / n
    inv_alpha = M / (2 * (M + 1)) * (n - 2 * mpmath.sqrt(n * mpmath.log(8 * m))) / (
        c * ((2 - c) * n + 1) + 2 * mpmath.sqrt(10 * c * n * m))
    alpha = 1 / inv_alpha
    eps = 24 * mpmath.sqrt(mpmath.log(4 * n ** 2 * m)) / mpmath.sqrt(n)
    eps_p = 3 * mpmath.sqrt(mpmath.log(8 * n)) / (mpmath.sqrt(m) - 2 * mpmath.sqrt(mpmath.log(8 * n)))
    val = mpmath.sqrt(n) / 2 * (2 / max(alpha, 1) * (1 - eps) ** 2 - (1 + eps_p))
    return val, alpha, eps, eps_p


@pytest.mark.parametrize("params", [(10 ** 4, 100, 100, 5000), (10 ** 6, 200, 10, 250000), (400, 60, 5, 100)])
def test_lb3_matches_hand_evaluation(params):
    got = lb_theorem3(*params, quiet=True)
    want = hand_theorem3(*params)
    for g, w in zip(got, want):
        assert abs(g - float(w)) <= 1e-12 * abs(float(w))


def test_lb3_eps_example():
    _, _, eps, _ = lb_theorem3(10 ** 4, 100, 100, 5000, quiet=True)
    assert eps == pytest.approx(24 * math.sqrt(math.log(4e10)) / 100)


def test_phases():
    n, t = 10 ** 6, 100
    small_end, large_start = phase_thresholds(n, t)
    assert phase_classify(n, t, 1) is Phase.SMALL
    assert phase_classify(n, t, n) is Phase.LARGE
    assert phase_classify(n, t, math.ceil(small_end)) is Phase.MEDIUM
    assert phase_classify(n, t, math.ceil(large_start)) is Phase.LARGE
    # desk scale: thresholds cross, Large wins
    assert phase_classify(10, 150, 1) is Phase.LARGE


def test_bound_report():
    rep = bound_report(12, 20, 6, m=3, M=5)
    assert rep.ub == min(rep.ub1, rep.ub2)
    assert rep.lb_pip is not None and any(f.startswith("pip: ") for f in rep.flags)

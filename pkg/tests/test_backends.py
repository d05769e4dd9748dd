"""Parity between the compiled hot-kernel core and the numpy fallback."""
import itertools

import numpy as np
import pytest

from ratepriv import JointDistribution, PrivacyFilter, evaluate_filter
from ratepriv import _numpycore

fastcore = pytest.importorskip("ratepriv._fastcore", reason="compiled core not built")


def test_batch_objectives_parity():
    rng = np.random.default_rng(7)
    for _ in range(10):
        nx, ny, nz = rng.integers(2, 5), rng.integers(2, 5), rng.integers(1, 5)
        pxy = rng.dirichlet(np.ones(nx * ny)).reshape(nx, ny)
        filters = rng.dirichlet(np.ones(nz), size=(64, ny))
        u1, l1 = _numpycore.batch_filter_objectives(pxy, filters)
        u2, l2 = fastcore.batch_filter_objectives(pxy, filters)
        assert np.abs(u1 - u2).max() < 1e-12
        assert np.abs(l1 - l2).max() < 1e-12


def test_batch_objectives_match_single_evaluation():
    rng = np.random.default_rng(8)
    pxy = rng.dirichlet(np.ones(6)).reshape(2, 3)
    j = JointDistribution(pxy)
    filters = rng.dirichlet(np.ones(4), size=(16, 3))
    u, l = fastcore.batch_filter_objectives(pxy, filters)
    for i in range(16):
        ev = evaluate_filter(j, PrivacyFilter(filters[i]))
        assert u[i] == pytest.approx(ev.utility, abs=1e-12)
        assert l[i] == pytest.approx(ev.leakage, abs=1e-12)


def test_solve_bases_parity():
    rng = np.random.default_rng(9)
    for r, n in ((3, 7), (5, 9), (7, 12)):
        a = rng.normal(size=(r, n))
        b = rng.normal(size=r)
        combos = np.array(list(itertools.combinations(range(n), r)), dtype=np.int64)
        s1, ok1 = _numpycore.solve_bases(a, b, combos)
        s2, ok2 = fastcore.solve_bases(a, b, combos)
        assert np.array_equal(ok1, ok2)
        assert np.abs(s1[ok1] - s2[ok1]).max() < 1e-8


def test_solve_bases_flags_singular():
    a = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    b = np.array([1.0, 1.0])
    combos = np.array([[0, 1], [0, 2]], dtype=np.int64)
    for impl in (_numpycore, fastcore):
        sols, ok = impl.solve_bases(a, b, combos)
        assert not ok[0]  # duplicate columns are singular
        assert ok[1]
        assert np.allclose(sols[1], [1.0, 1.0])


def test_readonly_inputs_accepted():
    pxy = np.array([[0.4, 0.1], [0.2, 0.3]])
    pxy.flags.writeable = False
    filters = np.asarray(np.random.default_rng(0).dirichlet(np.ones(2), size=(4, 2)))
    filters.flags.writeable = False
    u, l = fastcore.batch_filter_objectives(pxy, filters)
    assert np.all(u >= 0) and np.all(l >= 0)

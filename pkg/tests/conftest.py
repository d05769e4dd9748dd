"""Shared joint-distribution generators for the test suite."""
import numpy as np
import pytest

from ratepriv import JointDistribution, Kernel, mutual_information


def random_joint(rng, nx, ny, alpha=1.0):
    probs = rng.dirichlet(np.full(nx * ny, alpha)).reshape(nx, ny)
    return JointDistribution(probs)


def dependent_joint(rng, nx, ny, min_mi=1e-4):
    """A random joint with verified dependence (resampled on rare near-independence)."""
    for _ in range(100):
        j = random_joint(rng, nx, ny)
        if mutual_information(j) > min_mi:
            return j
    raise RuntimeError("failed to draw a dependent joint")


def duplicate_posterior_joint(rng, nx, ny):
    """A joint where two y columns are proportional, so their posteriors coincide."""
    assert ny >= 2
    probs = rng.dirichlet(np.full(nx * (ny - 1), 1.0)).reshape(nx, ny - 1)
    scale = rng.uniform(0.3, 0.7)
    col = probs[:, 0].copy()
    out = np.empty((nx, ny))
    out[:, 0] = col * scale
    out[:, 1] = col * (1.0 - scale)
    out[:, 2:] = probs[:, 1:]
    return JointDistribution(out / out.sum())


def bec_joint(p=0.5, delta=0.3):
    """X ~ Bernoulli(p) through a binary erasure channel; Y in {0, e, 1}."""
    chan = Kernel(
        [[1 - delta, delta, 0.0], [0.0, delta, 1 - delta]],
        input_labels=("0", "1"),
        output_labels=("0", "e", "1"),
    )
    return JointDistribution.from_input_and_channel([1 - p, p], chan)


def bsc_joint(crossover, p=0.5):
    chan = Kernel([[1 - crossover, crossover], [crossover, 1 - crossover]])
    return JointDistribution.from_input_and_channel([1 - p, p], chan)


def independent_joint(px, py):
    return JointDistribution(np.outer(np.asarray(px, float), np.asarray(py, float)))


def decomposable_joint(rng, nxp=2, nyp=2, nv=2, mutually_independent=False):
    """X = (X', V), Y = (Y', V) with X' and Y' conditionally independent given V.

    When mutually_independent is set, X', Y', V are fully independent (the
    special case where g_0 = H(Y')).
    """
    pv = rng.dirichlet(np.full(nv, 2.0))
    if mutually_independent:
        pxp = rng.dirichlet(np.full(nxp, 2.0))
        pyp = rng.dirichlet(np.full(nyp, 2.0))
        px_v = np.tile(pxp, (nv, 1))
        py_v = np.tile(pyp, (nv, 1))
    else:
        px_v = rng.dirichlet(np.full(nxp, 2.0), size=nv)
        py_v = rng.dirichlet(np.full(nyp, 2.0), size=nv)
    probs = np.zeros((nxp * nv, nyp * nv))
    for v in range(nv):
        for xp in range(nxp):
            for yp in range(nyp):
                probs[xp * nv + v, yp * nv + v] = pv[v] * px_v[v, xp] * py_v[v, yp]
    return JointDistribution(probs / probs.sum()), pv, py_v


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

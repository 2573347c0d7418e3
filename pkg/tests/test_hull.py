import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone

from crsing.hull import (
    OUTSIDE,
    UNRESOLVED,
    HullProbe,
    convexity_scan,
    graph_samples,
    hull_probe,
    monomials,
    probe_lattice,
)
from crsing.demos import SURFACES
from crsing.surface import CRSurface


def conj(z):
    return np.conj(z)


@pytest.fixture(scope="module")
def conj_graph():
    return graph_samples(conj, 1.0, 12, 48)


def test_monomials():
    assert monomials(2) == [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert len(monomials(8)) == 44


def test_flat_disc_exact_separation():
    # K lies in {w = 0}; P = w / 0.5 vanishes on K and is 1 at the probe
    z = graph_samples(lambda x: np.zeros_like(x), 1.0, 6, 24)
    res = hull_probe(z, (0, 0.5), d_max=2)
    assert res.mValues[0] < 1e-6
    assert res.verdict == OUTSIDE and res.witnessDegree == 1


def test_maximum_principle_control():
    # the analytic disc {(z, 1/4) : |z| <= 1/2} has its boundary circle on the
    # graph of |z|^2, so by the maximum principle (0, 1/4) cannot be separated
    K = graph_samples(lambda x: np.abs(x) ** 2 + 0j, 1.0, 16, 64)
    res = hull_probe(K, (0, 0.25), d_max=4)
    assert all(m >= 1 - 1e-6 for m in res.mValues)
    assert res.verdict == UNRESOLVED and res.witnessDegree is None


def test_conj_probe_outside(conj_graph):
    res = hull_probe(conj_graph, (0, 0.5), d_max=3)
    assert res.verdict == OUTSIDE
    assert res.mValues[-1] < 0.9


def test_sound_and_monotone(conj_graph):
    res = hull_probe(conj_graph, (0.1, 0.6j), d_max=4)
    m = res.mValues
    assert all(x <= 1 for x in m)
    assert all(b <= a + 1e-9 for a, b in zip(m, m[1:]))


def test_member_probe(conj_graph):
    p = conj_graph[5]
    with pytest.raises(ValueError, match="one of the samples"):
        hull_probe(conj_graph, p, d_max=2)
    res = hull_probe(conj_graph, p, d_max=3, allow_member=True)
    assert res.mValues == (1.0, 1.0, 1.0)


def test_real_four_column_input(conj_graph):
    X = np.stack([conj_graph[:, 0].real, conj_graph[:, 0].imag, conj_graph[:, 1].real, conj_graph[:, 1].imag], 1)
    a = hull_probe(X, (0, 0.5), d_max=2)
    b = hull_probe(conj_graph, (0, 0.5), d_max=2)
    assert a.mValues == b.mValues


def test_bad_probe(conj_graph):
    with pytest.raises(ValueError):
        hull_probe(conj_graph, (0, 0, 1), d_max=1)


@settings(max_examples=15, deadline=None)
@given(
    shift=st.tuples(st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=2)),
    p=st.tuples(st.complex_numbers(max_magnitude=1), st.complex_numbers(min_magnitude=0.3, max_magnitude=1)),
)
def test_translation_invariance(shift, p):
    # translations preserve polynomial degree, so m_d is unchanged
    K = graph_samples(conj, 1.0, 4, 16)
    probe = (p[0], np.conj(p[0]) + p[1])
    a = hull_probe(K, probe, d_max=2)
    b = hull_probe(K + np.array(shift), (probe[0] + shift[0], probe[1] + shift[1]), d_max=2)
    np.testing.assert_allclose(a.mValues, b.mValues, atol=1e-3)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 1000))
def test_random_sets_sound(seed):
    rng = np.random.default_rng(seed)
    K = rng.normal(size=(40, 2)) + 1j * rng.normal(size=(40, 2))
    probe = rng.normal(size=2) + 1j * rng.normal(size=2)
    m = hull_probe(K, probe, d_max=3).mValues
    assert all(0 <= x <= 1 for x in m)
    assert all(b <= a + 1e-9 for a, b in zip(m, m[1:]))


def test_probe_lattice_off_graph():
    P = probe_lattice(conj, 0.5, 6)
    assert P.shape == (6, 2)
    assert np.all(np.abs(P[:, 0]) <= 0.25)
    assert np.all(np.abs(P[:, 1] - np.conj(P[:, 0])) > 0.2)
    assert probe_lattice(conj, 0.5, 0).shape == (0, 2)


def test_convexity_scan_small():
    s = CRSurface.from_dict(SURFACES["zbar3"])
    rep = convexity_scan(s, 0.5, n_probes=2, d_max=2, n_radii=8, n_angles=32)
    assert len(rep.results) == 2
    d = rep.to_dict()
    assert d["nProbes"] == 2 and d["nOutside"] == rep.n_outside


def test_convexity_scan_threads_identical(monkeypatch):
    s = CRSurface.from_dict(SURFACES["zbar3"])
    kw = dict(n_probes=3, d_max=2, n_radii=8, n_angles=32)
    one = convexity_scan(s, 0.5, **kw).to_dict()
    monkeypatch.setenv("CRSING_THREADS", "3")
    assert convexity_scan(s, 0.5, **kw).to_dict() == one


class TestEstimator:
    def test_params(self):
        est = HullProbe(max_degree=3)
        assert est.get_params() == {"max_degree": 3, "threshold": 1e-3, "max_iter": 200}
        assert clone(est).get_params() == est.get_params()

    def test_fit_predict(self, conj_graph):
        est = HullProbe(max_degree=2).fit(conj_graph)
        assert est.n_samples_ == conj_graph.shape[0]
        verdicts = est.predict([[0, 0.5]])
        assert list(verdicts) == [OUTSIDE]
        assert est.decision_function([[0, 0.5]])[0] < 1

    def test_not_fitted(self):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            HullProbe().probe((0, 1))

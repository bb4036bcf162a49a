import math

import numpy as np
import pytest

import berglab as bl


def test_standard_weight_values():
    w = bl.Weight.standard(1)
    assert w(0.0) == pytest.approx(2.0)
    # tail is the plain integral of 2(1 - t^2); 2 * moment(1) is the total dA mass
    assert w.tail(0.0) == pytest.approx(4.0 / 3.0)
    assert 2 * w.moment(1.0) == pytest.approx(1.0)
    assert "standard" in repr(w)


def test_kernel_closed_form():
    w = bl.Weight.standard(0)
    z, xi = 0.5 + 0.2j, -0.3 + 0.6j
    closed = (1 - z.conjugate() * xi) ** -2
    assert abs(bl.kernel_eval(w, z, xi) - closed) < 1e-9
    c = bl.kernel_coefficients(w, 8)
    assert c == pytest.approx([n + 1 for n in range(9)])


def test_reproducing_property():
    w = bl.Weight.standard(2)
    f = bl.Function.monomials([1, 2j, -0.5, 0.25])
    z = 0.6 - 0.3j
    k = bl.kernel_coefficients(w, 64)
    bz = bl.Function.monomials([k[n] * z.conjugate() ** n for n in range(65)])
    assert abs(bl.inner_product(f, bz, w) - f(z)) < 1e-10


def test_geometry():
    assert abs(bl.mobius(0.3j, 0.3j)) < 1e-15
    assert bl.bergman_distance(0, 0.5) == pytest.approx(0.5 * math.log(3))
    assert bl.region_weight_square(bl.Weight.standard(0), 0.5) == pytest.approx(0.25 * 1.5 / (2 * math.pi**2))


def test_lattice_certifies():
    L = bl.generate_lattice(0.5, 1.0, 1e-2)
    rep = bl.verify_lattice(L, 2000)
    assert rep["separated"] and rep["covering"]
    assert len(L) > 0


def test_atom_at_origin():
    w = bl.Weight.standard(0)
    mu = bl.Measure.atomic([0j], [3.0])
    assert bl.toeplitz_norm_exact(mu, w)["value"] == pytest.approx(3.0, abs=1e-6)
    emb = bl.embedding_norm(w, 2, mu, 2, budget=300)
    assert emb["value"] == pytest.approx(math.sqrt(3.0), rel=0.02)


def test_identity_measure():
    w = bl.Weight.standard(1)
    mu = bl.Measure.radial(w)
    assert bl.m0_sup(mu, w, w, w, 2, 2)["value"] == pytest.approx(1.0, abs=1e-12)
    T = bl.toeplitz_matrix(mu, w, 8)
    assert isinstance(T, np.ndarray)
    assert np.max(np.abs(T - np.eye(8))) < 1e-8
    assert bl.vanishing_profile(mu, w, w, w, 2, 2)["verdict"] == "not vanishing"


def test_khinchin():
    r = bl.khinchin_check([1, 1], 1)
    assert r["ratio"] == pytest.approx(math.sqrt(2))
    assert bl.khinchin_check([1 + 1j, 2, -0.5j], 2)["ratio"] == pytest.approx(1.0, abs=1e-12)


def test_errors():
    w = bl.Weight.standard(0)
    with pytest.raises(bl.DomainError):
        bl.Measure.atomic([0.1], [-1.0])
    with pytest.raises(bl.ParameterError):
        bl.mu_hat_norm(bl.Measure.power(0.5), w, w, w, 2, 3)
    with pytest.raises(bl.ConfigError):
        bl.normalize_scenario('{"scenario": {"bogus": 1}}')
    assert issubclass(bl.DomainError, bl.Error)


def test_scenario_round_trip():
    s = bl.normalize_scenario('{"id": "x", "weights": {"omega": {"type": "standard", "alpha": 1}}, "p": 3, "q": 2}')
    assert s["scenario"]["id"] == "x" and s["scenario"]["p"] == 3


def test_single_row_experiment():
    rep = bl.run_experiment("thm1", ["a0-p2-q2-omega"], budget=300)
    assert rep["experiment"] == "thm1"
    assert len(rep["rows"]) == 1

import math

import pytest

import pearcey


def test_beta_of_gamma():
    b = pearcey.beta_of_gamma(0.5)
    assert b.real == 0.0
    assert abs(b.imag - math.log(2.0) / (2.0 * math.pi)) < 1e-15


def test_pearcey_p_origin():
    p0, p1, _ = pearcey.pearcey_p(0.0)
    assert abs(p0.real - math.gamma(0.25) / (math.pi * 4.0**0.75)) < 1e-12
    assert abs(p1) < 1e-15


def test_kernel_oracles_agree():
    a = pearcey.kernel(0.3, -0.7, 1.0, "rational")
    for oracle in ("integral", "rh"):
        assert abs(pearcey.kernel(0.3, -0.7, 1.0, oracle) - a) < 1e-7
    with pytest.raises(ValueError):
        pearcey.kernel(0.0, 1.0, 0.0, "bogus")


def test_logdet():
    assert pearcey.logdet(3.0, 0.0)["f"] == 0.0
    d = pearcey.logdet_converged(2.0, 0.5)
    assert d["f"] < 0.0 and d["sign_ok"]
    assert abs(pearcey.logdet(2.0, 0.5, n=96)["f"] - d["f"]) < 1e-9


def test_large_gap_matches_determinant():
    s = 10.0
    f = pearcey.logdet_converged(s, 0.5)["f"]
    a = pearcey.f_large_gap(s, 0.5)
    assert abs(f - a["total"]) < 1e-2
    assert abs(a["total"] - (a["leading"] + a["subleading"] + a["log_term"] + a["constant"])) < 1e-12


def test_moments_and_trajectory():
    mean_t, var_t = pearcey.moments(4.0)
    mean_m, var_m = pearcey.moments(4.0, method="mgf")
    assert abs(mean_t - mean_m) < 1e-5 and abs(var_t - var_m) < 1e-5
    t = pearcey.hamiltonian_trajectory(10.0, 2.0, 0.5)
    assert len(t["s"]) == len(t["H"]) > 10
    assert t["max_constraint_drift"] < 1e-6


def test_chf_verify():
    r = pearcey.chf_verify(0.11)
    assert r["max_ray_residual"] < 1e-9
    assert r["upsilon0_err"] < 1e-12


def test_errors_carry_kind():
    with pytest.raises(pearcey.PearceyError, match="domain"):
        pearcey.logdet(13.0, 0.5)


def test_acceptance_subset():
    rows = pearcey.run_acceptance([2, 11])
    assert [r["id"] for r in rows] == [2, 11]
    assert all(r["pass"] for r in rows)
    assert rows[0]["line"].startswith("PASS [ 2]")

from fractions import Fraction

import pytest

import qhl


def test_ellipticity():
    assert qhl.is_elliptic([["3/5", "-4/5"], ["4/5", "3/5"]]) == (True, "")
    ok, reason = qhl.is_elliptic([[1, 1], [0, 1]])
    assert not ok and reason == "nontrivial Jordan block"


def test_powers_of_two():
    assert qhl.min_volume([[2]], [1023], 4, 12) == (2, "{(0,-1),(10,+1)}")
    rows = qhl.distortion_profile([[2]], [1], 1, 1024, 10)
    assert rows[1]["max_multiple"] == 1024 and rows[1]["saturated"]
    d = qhl.greedy_decompose([[2]], [1], 10**6 - 1)
    assert d["verified"]


def test_simplex_is_exact():
    r = qhl.simplex([[1, 1], [1, 3]], [4, 6], [3, 5])
    assert r["status"] == "optimal"
    assert r["optimum"] == Fraction(14)
    assert r["certified"]


def test_fillings_and_pairings():
    assert qhl.validate_builtin("bs12")
    assert qhl.filling_volume("grid", "x^3 y^3 x^-3 y^-3") == 9
    assert qhl.pairing("tube", "(a, t^6) 1;(a, 1) -1", [1]) == [Fraction(6)]


def test_diamond():
    r = qhl.verify_tau(2, 4)
    assert r["boundary_ok"] and r["rho_ok"] and r["K_ok"]
    assert not qhl.verify_tau(1, 3)["K_ok"]


def test_modules():
    inv, U, V, ok = qhl.laurent_snf([["t - 1", "t^2 - 1"], ["0", "t - 1"]])
    assert ok and inv == ["-1 + t", "-1 + t"]
    split, cert = qhl.splitting_test([["t - 1"]], [["t^2 - 2*t + 1"]], [["t - 1"]])
    assert not split and cert
    split, r = qhl.splitting_test([["t - 1"]], [["t - 1", "0"], ["0", "t - 1"]], [["1"], ["0"]])
    assert split and r == [["1", "0"]]
    c = qhl.certificate_chains([-1, 1], 5)
    assert c["ok"] and c["pairing"] == [Fraction(5)]
    with pytest.raises(ValueError):
        qhl.certificate_chains([-2, 1], 3)

import math

import numpy as np
import pytest

import semirfd


def test_braid_growth():
    t = semirfd.enumerate("braid(3)", 4)
    assert t.counts == [1, 2, 4, 7, 12]
    assert t.cancellative
    assert t.canonical("s2.s1.s2") == "s1.s2.s1"
    assert t.right_lcm("s1", "s2") == "s1.s2.s1"


def test_divisors():
    t = semirfd.enumerate("nat(2)", 6)
    assert len(t.right_divisors("x.x.y")) == 6
    f = semirfd.enumerate("free(2)", 3)
    assert f.right_divisors("a.b") == ["e", "b", "a.b"]
    assert f.right_lcm("a", "b") is None


def test_kernel_set_and_compression():
    t = semirfd.enumerate("nat(1)", 5)
    ks = semirfd.kernel_set(t, ["x.x"], 5)
    assert ks["kernel"] == ["x.x.x", "x.x.x.x", "x.x.x.x.x"]
    m = semirfd.pi_F(t, ["x.x"], "x")
    assert np.array_equal(m, np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=complex))


def test_coaction():
    t = semirfd.enumerate("braid(3)", 3)
    rep = semirfd.fell_check(t, "length", 3, 4)
    assert rep["isometry"]
    assert all(rep["intertwining"].values())
    assert len(semirfd.qf_spanning_set(t, "length", ["x.x"])) == 7


def test_function_algebra():
    assert semirfd.monomial_norm("drury_arveson", [1, 1]) == pytest.approx(1 / math.sqrt(2))
    assert semirfd.monomial_norm("dirichlet", [4]) == pytest.approx(math.sqrt(5))
    n = semirfd.multiplier_norm_lower("hardy", "1 + z", 200)
    assert 1.99 <= n <= 2.0


def test_run_and_errors():
    status, report = semirfd.run(
        {"command": "enumerate", "presentation": "braid(3)", "L": 4}
    )
    assert status == 0
    assert report["tables"]["counts"] == [1, 2, 4, 7, 12]
    status, _ = semirfd.run({"command": "enumerate"})
    assert status == 2
    with pytest.raises(semirfd.ParseError):
        semirfd.enumerate("tree(2)", 3)
    with pytest.raises(semirfd.Error):
        semirfd.enumerate("free(3)", 12, max_words=100)

from fractions import Fraction
from itertools import product

import pytest

import magnus_walks as mw


def test_word_problem():
    assert not mw.words_equal("zr:2", "[s1,s2]", "e")
    assert mw.words_equal("zr:2", "[[s1,s2],[s1,s2]^s1]", "e")
    assert mw.normalize_word("s1 s1^-1 s2", 2) == mw.normalize_word("s2", 2)


def test_embed_and_flow_agree():
    e = mw.embed("zr:2", "[s1,s2]")
    f = mw.flow("zr:2", "[s1,s2]")
    assert e["schema_version"] == mw.schema_version
    assert e["base"] == [0, 0]
    edges = {(tuple(x["vertex"]), x["gen"]): x["value"] for x in f["edges"]}
    from_embed = {}
    for entry in e["a"]:
        for i, v in enumerate(entry["vector"]):
            if v:
                from_embed[(tuple(entry["key"]), i + 1)] = v
    assert edges == from_embed
    assert sum(edges.values()) == 0


def lazy_z2_return(n):
    # independent count on Z^2: steps +-e_i with 1/8 each, stay with 1/2
    steps = [((0, 0), Fraction(1, 2))] + [(s, Fraction(1, 8)) for s in [(1, 0), (-1, 0), (0, 1), (0, -1)]]
    total = Fraction(0)
    for path in product(steps, repeat=n):
        if sum(p[0][0] for p in path) == 0 and sum(p[0][1] for p in path) == 0:
            w = Fraction(1)
            for p in path:
                w *= p[1]
            total += w
    return total


def test_return_probability():
    assert mw.return_probability("sdr:2,2", "lazy", 2) == Fraction(5, 16)
    for n in range(1, 5):
        assert mw.return_probability("zr:2", "lazy", n) == lazy_z2_return(n)
    with pytest.raises(mw.BudgetExceeded):
        mw.return_probability("sdr:2,2", "lazy", 8, budget=10)


def test_monte_carlo_is_thread_independent():
    a = mw.return_probability_mc("sdr:2,2", "lazy", 4, 20000, 7, threads=1)
    b = mw.return_probability_mc("sdr:2,2", "lazy", 4, 20000, 7, threads=3)
    assert a["hits"] == b["hits"]
    assert a["ci_lo"] <= a["estimate"] <= a["ci_hi"]


def test_exclusive_pair():
    r = mw.check_exclusive("zr:2", ["s1^2", "s2^2"], "[s1,s2]", 1)
    assert r["kind"] == "check-exclusive"
    assert r["condition1"]["holds"] and r["exclusive"] and r["certified"]


def test_asymptotics():
    assert mw.witt_degree(2, 2) == 4
    assert mw.gamma("power:1", 10.0)["gamma"] == pytest.approx((2 * 10 + 1) ** 0.5, rel=1e-6)
    assert mw.phi_profile("polynomial", [2], 100)["value"] == pytest.approx(0.01)
    d = mw.dirichlet_box("zr:1", "lazy", 3)
    assert d["lambda1"] <= d["test_function_bound"]


def test_parse_errors():
    with pytest.raises(mw.ParseError):
        mw.words_equal("zr:2", "s1^", "e")
    with pytest.raises(ValueError):
        mw.group_info("nonsense:3")


def test_selftest_subset():
    res = mw.selftest([11])
    assert len(res) == 1 and res[0]["passed"]

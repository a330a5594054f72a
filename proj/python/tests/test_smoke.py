import math

import pytest

import shgh_py as s


def test_system_parse_and_dims():
    j = s.system("174; 55^10")
    assert j["degree"] == 174
    assert len(j["mults"]) == 10
    # v = d(d+3)/2 - k m(m+1)/2, computed here independently
    assert j["virtual_dim"] == 174 * 177 // 2 - 10 * 55 * 56 // 2
    assert j["expected_dim"] == max(-1, j["virtual_dim"])
    assert j["text"] == "174; 55^10"


def test_dim_examples():
    assert s.dim("2; 2^2")["dim"] == 0
    r = s.dim("3; 1^9")
    assert (r["dim"], r["status"]) == (0, "PROVEN")
    r = s.dim("174; 55^10")
    assert (r["dim"], r["status"]) == (-1, "CONJECTURAL")
    assert s.dim("54; 36,15^6")["table"][-1] == "18; 0, 3, 3, 3, 3, 3, 3"


def test_parse_error():
    with pytest.raises(s.ParseError):
        s.system("5; 1, ")
    with pytest.raises(s.ShghError):
        s.system("5; 1, ")


def test_oracle_small():
    r = s.oracle("19; 6^10")
    assert r["status"] == "CERTIFIED-EMPTY"
    assert r["dim"] == -1
    r = s.oracle("4; 2^5")
    assert r["status"] == "UPPER-BOUND-ONLY"
    assert r["dim"] == 0
    # the cubic through nine general points is unique
    r = s.oracle("3; 1^9", trials=1)
    assert r["dim"] == 0 and r["witnesses"][0]["cols"] == math.comb(5, 2)


def test_fiber_and_validate():
    j = s.fiber(4, 348, 110, 14)
    assert j["validation"]["ok"]
    again = s.validate(j["fiber"])
    assert again == j["validation"]
    bad = j["fiber"]
    bad["components"][0]["bundle"]["degree"] = 1000
    assert not s.validate(bad)["ok"]
    with pytest.raises(s.HypothesisError):
        s.fiber(2, 174, 55, 6)


def test_ledgers_and_choice():
    assert s.ledger(174, 55)["verdict"] == "EMPTY"
    r = s.ledger(193, 61, 7)
    assert r["verdict"] == "DIM-EXACT-UNDER-ASSUMPTIONS"
    with pytest.raises(s.RatioOutOfRange):
        s.choose_a(3, 10)


def test_scan_exceptions():
    rows = s.scan("174/55", "19/6", 200, all_pairs=True)
    odd = {(r["d"], r["m"]) for r in rows if r["verdict"] == "CASE-SCRIPT"}
    assert odd == {(174, 55), (193, 61), (348, 110)}


def test_verify_fast():
    rs = s.verify()
    assert len(rs) == 9
    fast = [r for r in rs if not r["long"]]
    assert len(fast) == 8 and all(r["pass"] for r in fast)
    assert [r["skipped"] for r in rs if r["long"]] == [True]

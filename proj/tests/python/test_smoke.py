import hashlib

import pytest

import spocsim

ETH = spocsim.UNITS_PER_WHOLE


def test_honest_run():
    outcome, trace, violations = spocsim.run_scenario()
    assert violations == []
    assert outcome["requestorPayoff"] == 90 * ETH
    assert outcome["nodePayoff"] == 7 * ETH
    assert outcome["finalState"] == "Closed"
    assert trace.count("\n") > 5


def test_overrides_and_inspect():
    outcome, trace, _ = spocsim.run_scenario(node="compute-no-deliver", chargeGas=True)
    assert outcome["requestorPayoff"] == -(10 * ETH + ETH // 2)
    report, ok = spocsim.inspect_trace(trace)
    assert ok
    assert report["nodePayoffWithGas"] == outcome["nodePayoffWithGas"]


def test_bad_config_raises():
    with pytest.raises(ValueError):
        spocsim.run_scenario(colour="blue")


def test_payoff_matrix_grid():
    matrices = spocsim.payoff_matrix(grid="100 10 3 1 1\n20 8 2 1 3\n")
    assert len(matrices) == 2
    assert all(m["tableRowsMatch"] for m in matrices)
    assert len(matrices[0]["cells"]) == 9


def test_gas_and_latency():
    gas = spocsim.gas_report(tier="fast")
    assert gas["totalPerTaskGas"] == 582159
    assert gas["totalPerTaskCost"] == 582159 * gas["pricePerGas"]
    assert spocsim.latency_report(tier="slow")["latency"] == 2400


def test_secret_helpers():
    secret = spocsim.generate_secret(42)
    assert len(secret) == 32
    assert spocsim.generate_secret(42) == secret
    assert spocsim.hash_secret(secret) == hashlib.sha256(secret).digest()
    assert spocsim.parse_money("0.5ether") == ETH // 2

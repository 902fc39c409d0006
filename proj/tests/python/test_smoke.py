# Copyright 2026 The stablematch Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import pytest

import stablematch as sm


def test_fig1_goldens():
    m = sm.fig1_market()
    assert m.buyers == ["Alice", "Bob", "Claire"]
    assert sm.optimal_value(m) == pytest.approx(9.0)
    r = sm.metrics(m, [(0, 0), (1, 1)], [7.0, 11.0])
    assert r["lambda"] == pytest.approx(2 / 3)
    assert r["si"] == pytest.approx(4.0)
    assert r["norm_si"] == pytest.approx(5 / 9)
    assert r["kappa"] == pytest.approx(0.2)
    assert not r["stable"]


def test_subsidy_matches_instability():
    m = sm.fig1_market()
    pairs, prices = [(0, 0), (1, 1)], [7.0, 11.0]
    si = sm.subset_instability(m, pairs, prices)
    assert sm.minimum_stabilizing_subsidy(m, pairs, prices) == pytest.approx(si)
    assert sm.brute_force_si(m, pairs, prices) == pytest.approx(si)


def test_matching_and_prices():
    m = sm.Market.from_surplus([[3, 1], [2, 2]])
    res = sm.max_weight_matching(m)
    assert res["value"] == pytest.approx(5.0)
    prices = sm.price(m, res["pairs"], "shapley-shubik")
    assert sm.metrics(m, res["pairs"], prices)["stable"]


def test_generate_simulate_evaluate():
    inst = sm.generate("triangular", n=4)
    assert inst.model == "vertex"
    assert sm.OnlineInstance.from_json(inst.to_json()) == inst
    a = sm.simulate(inst, "ranking", seed=3)
    assert a == sm.simulate(inst, "ranking", seed=3)
    ev = sm.evaluate(inst, "ranking", method="exact")
    assert ev["cells"]["kappa"]["avg"]["value"] >= 1 - 1 / math.e - 0.01


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        sm.metrics(sm.fig1_market(), [(0, 0)], [1.0])
    with pytest.raises(sm.CapacityError):
        sm.evaluate(sm.generate("adversary_begin", W=10, l=16), "greedy-free-disposal-random-ties")


def test_cli_round_trip(tmp_path):
    path = tmp_path / "fig1.json"
    path.write_text(json.dumps({
        "buyers": ["Alice", "Bob", "Claire"],
        "sellers": [{"name": "Dori", "cost": 6}, {"name": "Edward", "cost": 10}],
        "valuations": [[10, 10], [6, 12], [6, 15]],
    }))
    code, out, _ = sm.run_cli(["solve", "--instance", str(path)])
    assert code == 0
    assert json.loads(out)["opt"] == pytest.approx(9.0)
    code, _, _ = sm.run_cli(["solve", "--instance", str(tmp_path / "missing.json")])
    assert code == 2

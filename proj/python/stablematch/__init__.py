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
"""Stability metrics and online allocation algorithms for assignment markets."""

from ._core import (
    CapacityError,
    Error,
    Market,
    OnlineInstance,
    brute_force_si,
    evaluate,
    fig1_market,
    generate,
    max_weight_matching,
    metrics,
    minimum_stabilizing_subsidy,
    optimal_value,
    price,
    run_cli,
    simulate,
    subset_instability,
)

__all__ = [
    "CapacityError",
    "Error",
    "Market",
    "OnlineInstance",
    "brute_force_si",
    "evaluate",
    "fig1_market",
    "generate",
    "max_weight_matching",
    "metrics",
    "minimum_stabilizing_subsidy",
    "optimal_value",
    "price",
    "run_cli",
    "simulate",
    "subset_instability",
]

__version__ = "0.1.0"

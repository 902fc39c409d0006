// Copyright 2026 The stablematch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "stablematch/cli.hpp"
#include "stablematch/errors.hpp"
#include "stablematch/evaluation.hpp"
#include "stablematch/instances.hpp"
#include "stablematch/lp_solver.hpp"
#include "stablematch/matching_solver.hpp"
#include "stablematch/pricing.hpp"
#include "stablematch/stability.hpp"

namespace py = pybind11;
using namespace stablematch;

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

Allocation make_allocation(const Market& market, const Pairs& pairs,
                           const std::optional<std::vector<double>>& prices) {
  Allocation alloc = allocation_at_cost(
      market, Matching::from_pairs(market.num_buyers(), market.num_sellers(), pairs));
  if (prices) {
    if (prices->size() != market.num_sellers()) {
      throw StructuralError("one price per seller is required");
    }
    alloc.prices = *prices;
  }
  return alloc;
}

py::dict metrics_dict(const Market& market, const Allocation& alloc) {
  const MetricReport r = evaluate_metrics(market, alloc);
  py::dict d;
  d["opt"] = r.opt;
  d["social_welfare"] = r.social_welfare;
  d["lambda"] = r.lambda;
  d["si"] = r.si;
  d["norm_si"] = r.norm_si;
  d["kappa"] = r.kappa;
  d["kappa_raw"] = r.kappa_raw;
  d["individually_rational"] = r.individually_rational;
  d["stable"] = is_stable(market, alloc);
  return d;
}

py::dict allocation_dict(const Allocation& alloc) {
  py::dict d;
  d["pairs"] = alloc.matching.pairs();
  d["prices"] = alloc.prices;
  return d;
}

OnlineAlgorithm algorithm(const std::string& name) {
  const auto alg = algorithm_by_name(name);
  if (!alg) throw ConfigError("unknown algorithm '" + name + "'");
  return *alg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Assignment-market stability metrics and online allocation algorithms";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);

  py::class_<Market>(m, "Market")
      .def(py::init([](std::vector<std::string> buyers, std::vector<std::string> sellers,
                       const std::vector<std::vector<double>>& valuations,
                       std::vector<double> costs) {
             return Market(std::move(buyers), std::move(sellers),
                           Matrix::from_rows(valuations), std::move(costs));
           }),
           py::arg("buyers"), py::arg("sellers"), py::arg("valuations"), py::arg("costs"))
      .def_static("from_surplus",
                  [](const std::vector<std::vector<double>>& a) {
                    return Market::from_surplus(Matrix::from_rows(a));
                  })
      .def_property_readonly("buyers", &Market::buyer_ids)
      .def_property_readonly("sellers", &Market::seller_ids)
      .def_property_readonly("costs", &Market::costs)
      .def_property_readonly("valuations",
                             [](const Market& mk) { return mk.valuations().to_rows(); })
      .def_property_readonly("surplus", [](const Market& mk) { return mk.surplus().to_rows(); })
      .def("__eq__", [](const Market& a, const Market& b) { return a == b; });

  py::class_<OnlineInstance>(m, "OnlineInstance")
      .def_static("from_json", &instance_from_json)
      .def_static("load", [](const std::string& path) { return load_instance(path); })
      .def("to_json", &instance_to_json)
      .def("save", [](const OnlineInstance& inst, const std::string& path) {
        save_instance(inst, path);
      })
      .def_readonly("market", &OnlineInstance::market)
      .def_property_readonly("model",
                             [](const OnlineInstance& i) { return std::string(to_string(i.model)); })
      .def_readonly("order", &OnlineInstance::order)
      .def_readonly("free_disposal", &OnlineInstance::free_disposal)
      .def("__eq__", [](const OnlineInstance& a, const OnlineInstance& b) { return a == b; });

  m.def("fig1_market", &fig1_market);
  m.def("max_weight_matching", [](const Market& market) {
    const MatchingResult r = max_weight_matching(market.surplus());
    py::dict d;
    d["value"] = r.value;
    d["pairs"] = r.matching.pairs();
    d["alpha"] = r.alpha;
    d["beta"] = r.beta;
    return d;
  });
  m.def("optimal_value", &optimal_value);
  m.def("metrics", [](const Market& market, const Pairs& pairs,
                      std::optional<std::vector<double>> prices) {
    return metrics_dict(market, make_allocation(market, pairs, prices));
  }, py::arg("market"), py::arg("pairs"), py::arg("prices") = py::none());
  m.def("subset_instability", [](const Market& market, const Pairs& pairs,
                                 std::vector<double> prices) {
    return subset_instability(market, make_allocation(market, pairs, prices));
  });
  m.def("brute_force_si", [](const Market& market, const Pairs& pairs,
                             std::vector<double> prices) {
    return brute_force_si(market, make_allocation(market, pairs, prices));
  });
  m.def("minimum_stabilizing_subsidy", [](const Market& market, const Pairs& pairs,
                                          std::vector<double> prices) {
    return minimum_stabilizing_subsidy(market, make_allocation(market, pairs, prices)).value;
  });
  m.def("price", [](const Market& market, const Pairs& pairs, const std::string& policy) {
    const auto tag = parse_price_policy(policy);
    if (!tag || *tag == PricePolicyTag::kCustom) {
      throw ConfigError("unknown price policy '" + policy + "'");
    }
    const Allocation alloc = apply_price_policy(
        market, Matching::from_pairs(market.num_buyers(), market.num_sellers(), pairs),
        PricePolicy{*tag, {}});
    return alloc.prices;
  });

  m.def("generate", [](const std::string& family, double kappa0, std::size_t n, double W,
                       std::size_t l, std::size_t variant, std::uint64_t seed,
                       std::size_t buyers, std::size_t sellers) {
    const auto f = parse_family(family);
    if (!f) throw ConfigError("unknown family '" + family + "'");
    GeneratorSpec spec;
    spec.family = *f;
    spec.kappa0 = kappa0;
    spec.n = n;
    spec.W = W;
    spec.l = l;
    spec.variant = variant;
    spec.seed = seed;
    spec.buyers = buyers;
    spec.sellers = sellers;
    return generate(spec);
  }, py::arg("family"), py::arg("kappa0") = 0.5, py::arg("n") = 3, py::arg("W") = 10.0,
     py::arg("l") = 3, py::arg("variant") = 0, py::arg("seed") = 0, py::arg("buyers") = 3,
     py::arg("sellers") = 3);

  m.def("simulate", [](const OnlineInstance& inst, const std::string& alg, std::uint64_t seed) {
    const Allocation alloc = simulate(inst, algorithm(alg), seed);
    py::dict d = allocation_dict(alloc);
    d["metrics"] = metrics_dict(inst.market, alloc);
    return d;
  }, py::arg("instance"), py::arg("alg") = "greedy", py::arg("seed") = 0);

  m.def("evaluate", [](const OnlineInstance& inst, const std::string& alg,
                       const std::string& method, std::size_t trials, std::uint64_t seed) {
    const auto me = parse_method(method);
    if (!me) throw ConfigError("unknown method '" + method + "'");
    FullEvaluation full;
    {
      py::gil_scoped_release release;
      full = evaluate_all(inst, algorithm(alg), *me, trials, seed);
    }
    py::dict cells;
    for (Metric metric : {Metric::kLambda, Metric::kNormSi, Metric::kKappa}) {
      py::dict row;
      for (Mode mode : {Mode::kPost, Mode::kAnte, Mode::kAvg}) {
        const Cell& c = full.at(metric, mode);
        py::dict cell;
        cell["value"] = c.value;
        cell["std_error"] = c.std_error;
        cell["estimated"] = c.estimated;
        row[py::str(std::string(to_string(mode)))] = cell;
      }
      cells[py::str(std::string(to_string(metric)))] = row;
    }
    py::dict d;
    d["cells"] = cells;
    d["method"] = std::string(to_string(full.method));
    d["support_size"] = full.support_size;
    d["trials"] = full.trials;
    d["expected_u"] = full.expected_u;
    d["expected_v"] = full.expected_v;
    return d;
  }, py::arg("instance"), py::arg("alg") = "greedy", py::arg("method") = "exact",
     py::arg("trials") = 10000, py::arg("seed") = 0);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    int code;
    {
      py::gil_scoped_release release;
      code = run_cli(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  });
}

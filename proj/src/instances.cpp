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

#include "stablematch/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "stablematch/errors.hpp"
#include "stablematch/random_source.hpp"

namespace stablematch {
namespace {

using nlohmann::json;

std::vector<std::string> labels(std::string_view prefix, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t k = 1; k <= count; ++k) out.push_back(std::string(prefix) + std::to_string(k));
  return out;
}

Market surplus_market(std::vector<std::string> buyers, std::vector<std::string> sellers,
                      Matrix surplus) {
  const std::size_t m = sellers.size();
  return Market(std::move(buyers), std::move(sellers), std::move(surplus),
                std::vector<double>(m, 0.0));
}

OnlineInstance edge_instance(Market market,
                             const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  OnlineInstance inst;
  for (const auto& [i, j] : edges) inst.order.push_back(edge_index(market, i, j));
  inst.model = ArrivalModel::kEdge;
  inst.vertex_weighted = is_vertex_weighted(market);
  inst.market = std::move(market);
  return inst;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_keys(const json& object, std::initializer_list<std::string_view> allowed,
                std::string_view where) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SchemaError("unknown field '" + key + "' in " + std::string(where));
    }
  }
}

const json& field(const json& object, const char* name, std::string_view where) {
  const auto it = object.find(name);
  if (it == object.end()) {
    throw SchemaError("missing field '" + std::string(name) + "' in " + std::string(where));
  }
  return *it;
}

double number(const json& value, std::string_view what) {
  if (!value.is_number()) throw SchemaError(std::string(what) + " must be a number");
  return value.get<double>();
}

std::string text(const json& value, std::string_view what) {
  if (!value.is_string()) throw SchemaError(std::string(what) + " must be a string");
  return value.get<std::string>();
}

std::size_t resolve(const std::vector<std::string>& names, const std::string& name,
                    std::string_view side) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw SchemaError("arrival order names unknown " + std::string(side) + " '" + name + "'");
  }
  return static_cast<std::size_t>(it - names.begin());
}

void check_unique(const std::vector<std::string>& names, std::string_view side) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) {
      throw SchemaError("duplicate " + std::string(side) + " name '" + n + "'");
    }
  }
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kFig1:
      return "fig1";
    case Family::kProp311:
      return "prop311";
    case Family::kFig6Pair:
      return "fig6_pair";
    case Family::kKvvPair:
      return "kvv_pair";
    case Family::kTriangular:
      return "triangular";
    case Family::kAdversaryBegin:
      return "adversary_begin";
    case Family::kAdversaryFull:
      return "adversary_full";
    case Family::kRandom:
      return "random";
    case Family::kRandomVertexWeighted:
      return "random_vertex_weighted";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '-', '_');
  for (Family f : {Family::kFig1, Family::kProp311, Family::kFig6Pair, Family::kKvvPair,
                   Family::kTriangular, Family::kAdversaryBegin, Family::kAdversaryFull,
                   Family::kRandom, Family::kRandomVertexWeighted}) {
    if (key == to_string(f)) return f;
  }
  return std::nullopt;
}

Market fig1_market() {
  return Market({"Alice", "Bob", "Claire"}, {"Dori", "Edward"},
                Matrix{{10, 10}, {6, 12}, {6, 15}}, {6, 10});
}

Market prop311_market(double kappa0) {
  require(std::isfinite(kappa0) && kappa0 >= 0.0 && kappa0 < 1.0,
          "prop311 needs kappa0 in [0, 1)");
  return surplus_market({"a", "b"}, {"alpha", "beta"},
                        Matrix{{kappa0, 0.0}, {0.0, 1.0 - kappa0}});
}

Allocation prop311_allocation(const Market& market) {
  Matching mu(market.num_buyers(), market.num_sellers());
  mu.match(0, 0);
  return Allocation{mu, std::vector<double>(market.num_sellers(), 0.0)};
}

std::array<OnlineInstance, 2> fig6_pair() {
  const std::vector<std::string> buyers{"Alice", "Bob"};
  const std::vector<std::string> sellers{"Dori", "Edward"};
  return {edge_instance(surplus_market(buyers, sellers, Matrix{{1, 0}, {1, 0}}),
                        {{0, 0}, {1, 0}}),
          edge_instance(surplus_market(buyers, sellers, Matrix{{1, 1}, {0, 0}}),
                        {{0, 0}, {0, 1}})};
}

std::array<OnlineInstance, 2> kvv_pair() {
  const std::vector<std::string> buyers{"A", "B"};
  const std::vector<std::string> sellers{"alpha", "beta"};
  return {vertex_instance(surplus_market(buyers, sellers, Matrix{{1, 1}, {1, 0}})),
          vertex_instance(surplus_market(buyers, sellers, Matrix{{1, 1}, {0, 1}}))};
}

OnlineInstance triangular(std::size_t n) {
  require(n >= 1, "triangular needs n >= 1");
  Matrix a(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) a(i, j) = 1.0;
  }
  return vertex_instance(surplus_market(labels("B", n), labels("S", n), std::move(a)));
}

namespace {

std::vector<std::string> adversary_sellers(std::size_t l) {
  std::vector<std::string> out;
  for (std::size_t k = 1; k <= l; ++k) {
    out.push_back("alpha" + std::to_string(k));
    out.push_back("beta" + std::to_string(k));
  }
  return out;
}

void check_adversary(double W, std::size_t l) {
  require(std::isfinite(W) && W >= 1.0, "adversary needs W >= 1");
  require(l >= 1, "adversary needs l >= 1");
}

}  // namespace

OnlineInstance adversary_begin(double W, std::size_t l) {
  check_adversary(W, l);
  Matrix a(l, 2 * l, 0.0);
  for (std::size_t k = 0; k < l; ++k) {
    a(k, 2 * k) = 1.0;
    a(k, 2 * k + 1) = 1.0;
  }
  return vertex_instance(surplus_market(labels("A", l), adversary_sellers(l), std::move(a)),
                         /*free_disposal=*/true);
}

OnlineInstance adversary_full(double W, const std::vector<bool>& heavy_on_alpha) {
  const std::size_t l = heavy_on_alpha.size();
  check_adversary(W, l);
  Matrix a(2 * l, 2 * l, 0.0);
  for (std::size_t k = 0; k < l; ++k) {
    a(k, 2 * k) = 1.0;
    a(k, 2 * k + 1) = 1.0;
    a(l + k, heavy_on_alpha[k] ? 2 * k : 2 * k + 1) = W;
  }
  std::vector<std::string> buyers = labels("A", l);
  for (const auto& b : labels("B", l)) buyers.push_back(b);
  return vertex_instance(surplus_market(std::move(buyers), adversary_sellers(l), std::move(a)),
                         /*free_disposal=*/true);
}

AdversaryProbe probe_adversary(const OnlineAlgorithm& alg, double W, std::size_t l,
                               std::size_t probe_trials, std::uint64_t seed) {
  const OnlineInstance begin = adversary_begin(W, l);
  AdversaryProbe probe;
  probe.alpha_count.assign(l, 0);
  probe.beta_count.assign(l, 0);
  const std::size_t runs = alg.randomized() ? std::max<std::size_t>(probe_trials, 1) : 1;
  for (std::size_t t = 0; t < runs; ++t) {
    const Allocation alloc = simulate(begin, alg, derive_seed(seed, t));
    for (std::size_t k = 0; k < l; ++k) {
      const std::size_t j = alloc.matching.seller_of(k);
      if (j == 2 * k) ++probe.alpha_count[k];
      if (j == 2 * k + 1) ++probe.beta_count[k];
    }
  }
  probe.heavy_on_alpha.resize(l);
  for (std::size_t k = 0; k < l; ++k) {
    probe.heavy_on_alpha[k] = probe.alpha_count[k] >= probe.beta_count[k];
  }
  probe.instance = adversary_full(W, probe.heavy_on_alpha);
  return probe;
}

OnlineInstance build_adversary_full(const OnlineAlgorithm& alg, double W, std::size_t l,
                                    std::size_t probe_trials, std::uint64_t seed) {
  return probe_adversary(alg, W, l, probe_trials, seed).instance;
}

Market random_market(std::size_t buyers, std::size_t sellers, int lo, int hi,
                     std::uint64_t seed) {
  require(buyers >= 1 && sellers >= 1, "random market needs at least one agent per side");
  require(0 <= lo && lo <= hi, "random market needs 0 <= min_value <= max_value");
  SeededSource rng(seed);
  Matrix a(buyers, sellers, 0.0);
  const auto span = static_cast<std::size_t>(hi - lo) + 1;
  for (std::size_t i = 0; i < buyers; ++i) {
    for (std::size_t j = 0; j < sellers; ++j) {
      a(i, j) = lo + static_cast<double>(rng.choice(span));
    }
  }
  return surplus_market(labels("B", buyers), labels("S", sellers), std::move(a));
}

Market random_vertex_weighted_market(std::size_t buyers, std::size_t sellers, int lo,
                                     int hi, std::uint64_t seed) {
  require(buyers >= 1 && sellers >= 1, "random market needs at least one agent per side");
  lo = std::max(lo, 1);
  require(lo <= hi, "random vertex-weighted market needs max_value >= 1");
  SeededSource rng(seed);
  Matrix a(buyers, sellers, 0.0);
  const auto span = static_cast<std::size_t>(hi - lo) + 1;
  for (std::size_t j = 0; j < sellers; ++j) {
    const double w = lo + static_cast<double>(rng.choice(span));
    for (std::size_t i = 0; i < buyers; ++i) {
      if (rng.choice(2) == 1) a(i, j) = w;
    }
  }
  return surplus_market(labels("B", buyers), labels("S", sellers), std::move(a));
}

OnlineInstance generate(const GeneratorSpec& spec) {
  auto pick_variant = [&](std::array<OnlineInstance, 2> pair) {
    require(spec.variant < 2, "two-instance families take variant 0 or 1");
    return std::move(pair[spec.variant]);
  };
  switch (spec.family) {
    case Family::kFig1:
      return vertex_instance(fig1_market());
    case Family::kProp311:
      return vertex_instance(prop311_market(spec.kappa0));
    case Family::kFig6Pair:
      return pick_variant(fig6_pair());
    case Family::kKvvPair:
      return pick_variant(kvv_pair());
    case Family::kTriangular:
      return triangular(spec.n);
    case Family::kAdversaryBegin:
      return adversary_begin(spec.W, spec.l);
    case Family::kAdversaryFull: {
      const auto alg = algorithm_by_name(spec.algorithm);
      require(alg.has_value(), "unknown probe algorithm '" + spec.algorithm + "'");
      return build_adversary_full(*alg, spec.W, spec.l, spec.probe_trials, spec.seed);
    }
    case Family::kRandom:
      return vertex_instance(
          random_market(spec.buyers, spec.sellers, spec.min_value, spec.max_value, spec.seed));
    case Family::kRandomVertexWeighted:
      return vertex_instance(random_vertex_weighted_market(
          spec.buyers, spec.sellers, spec.min_value, spec.max_value, spec.seed));
  }
  throw ConfigError("unknown family");
}

std::string instance_to_json(const OnlineInstance& instance) {
  const Market& market = instance.market;
  json doc;
  doc["buyers"] = market.buyer_ids();
  json sellers = json::array();
  for (std::size_t j = 0; j < market.num_sellers(); ++j) {
    sellers.push_back({{"name", market.seller_ids()[j]}, {"cost", market.costs()[j]}});
  }
  doc["sellers"] = std::move(sellers);
  doc["valuations"] = market.valuations().to_rows();
  json order = json::array();
  const std::size_t m = market.num_sellers();
  for (std::size_t idx : instance.order) {
    if (instance.model == ArrivalModel::kVertex) {
      order.push_back(market.buyer_ids().at(idx));
    } else {
      order.push_back({market.buyer_ids().at(idx / m), market.seller_ids().at(idx % m)});
    }
  }
  doc["arrival"] = {{"model", std::string(to_string(instance.model))},
                    {"order", std::move(order)},
                    {"free_disposal", instance.free_disposal},
                    {"vertex_weighted", instance.vertex_weighted}};
  return doc.dump(2) + "\n";
}

OnlineInstance instance_from_json(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("instance must be a JSON object");
  check_keys(doc, {"buyers", "sellers", "valuations", "arrival"}, "instance");

  const json& buyers_json = field(doc, "buyers", "instance");
  if (!buyers_json.is_array()) throw SchemaError("'buyers' must be an array of names");
  std::vector<std::string> buyers;
  for (const json& b : buyers_json) buyers.push_back(text(b, "buyer name"));

  const json& sellers_json = field(doc, "sellers", "instance");
  if (!sellers_json.is_array()) throw SchemaError("'sellers' must be an array");
  std::vector<std::string> sellers;
  std::vector<double> costs;
  for (const json& s : sellers_json) {
    if (!s.is_object()) throw SchemaError("each seller must be an object");
    check_keys(s, {"name", "cost"}, "seller");
    sellers.push_back(text(field(s, "name", "seller"), "seller name"));
    costs.push_back(number(field(s, "cost", "seller"), "seller cost"));
  }
  check_unique(buyers, "buyer");
  check_unique(sellers, "seller");

  const json& val_json = field(doc, "valuations", "instance");
  if (!val_json.is_array() || val_json.size() != buyers.size()) {
    throw SchemaError("'valuations' must have one row per buyer");
  }
  std::vector<std::vector<double>> rows;
  for (const json& row : val_json) {
    if (!row.is_array() || row.size() != sellers.size()) {
      throw SchemaError("each 'valuations' row must have one entry per seller");
    }
    std::vector<double> r;
    for (const json& x : row) r.push_back(number(x, "valuation"));
    rows.push_back(std::move(r));
  }

  Market market(buyers, sellers, Matrix::from_rows(rows), costs);
  OnlineInstance inst;
  const auto arrival_it = doc.find("arrival");
  if (arrival_it == doc.end()) {
    return vertex_instance(std::move(market));
  }
  const json& arrival = *arrival_it;
  if (!arrival.is_object()) throw SchemaError("'arrival' must be an object");
  check_keys(arrival, {"model", "order", "free_disposal", "vertex_weighted"}, "arrival");
  const std::string model = text(field(arrival, "model", "arrival"), "arrival model");
  if (model == "vertex") {
    inst.model = ArrivalModel::kVertex;
  } else if (model == "edge") {
    inst.model = ArrivalModel::kEdge;
  } else {
    throw SchemaError("arrival model must be 'edge' or 'vertex', got '" + model + "'");
  }
  const json& order = field(arrival, "order", "arrival");
  if (!order.is_array()) throw SchemaError("'order' must be an array");
  for (const json& entry : order) {
    if (inst.model == ArrivalModel::kVertex) {
      inst.order.push_back(resolve(buyers, text(entry, "arrival entry"), "buyer"));
    } else {
      if (!entry.is_array() || entry.size() != 2) {
        throw SchemaError("edge arrivals must be [buyer, seller] pairs");
      }
      const std::size_t i = resolve(buyers, text(entry[0], "arrival buyer"), "buyer");
      const std::size_t j = resolve(sellers, text(entry[1], "arrival seller"), "seller");
      inst.order.push_back(edge_index(market, i, j));
    }
  }
  if (const auto fd = arrival.find("free_disposal"); fd != arrival.end()) {
    if (!fd->is_boolean()) throw SchemaError("'free_disposal' must be a boolean");
    inst.free_disposal = fd->get<bool>();
  }
  if (const auto vw = arrival.find("vertex_weighted"); vw != arrival.end()) {
    if (!vw->is_boolean()) throw SchemaError("'vertex_weighted' must be a boolean");
    inst.vertex_weighted = vw->get<bool>();
  } else {
    inst.vertex_weighted = is_vertex_weighted(market);
  }
  inst.market = std::move(market);
  validate(inst);
  return inst;
}

OnlineInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open instance file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

void save_instance(const OnlineInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write instance file " + path.string());
  out << instance_to_json(instance);
}

}  // namespace stablematch

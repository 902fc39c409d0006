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

#include "stablematch/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "stablematch/errors.hpp"
#include "stablematch/evaluation.hpp"
#include "stablematch/instances.hpp"
#include "stablematch/lp_solver.hpp"
#include "stablematch/matching_solver.hpp"
#include "stablematch/pricing.hpp"
#include "stablematch/stability.hpp"
#include "stablematch/tables.hpp"

namespace stablematch {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct Options {
  std::string instance;
  std::string matching;
  std::string prices;
  std::string policy = "half";
  std::string alg = "greedy";
  std::string metric = "all";
  std::string mode = "all";
  std::string method = "exact";
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string output;
  std::string family;
  std::string params;
  std::size_t sweep = 100;
  std::uint64_t tables_seed = 2026;
  std::size_t tables_trials = 20000;
};

ordered_json matching_json(const Market& market, const Matching& mu) {
  ordered_json pairs = ordered_json::array();
  for (const auto& [i, j] : mu.pairs()) {
    pairs.push_back({market.buyer_ids()[i], market.seller_ids()[j]});
  }
  return pairs;
}

ordered_json optional_number(const std::optional<double>& x) {
  return x ? ordered_json(*x) : ordered_json(nullptr);
}

ordered_json metrics_json(const Market& market, const Allocation& alloc) {
  const MetricReport r = evaluate_metrics(market, alloc);
  const UtilityProfile util = utilities(market, alloc);
  ordered_json out;
  out["opt"] = r.opt;
  out["social_welfare"] = r.social_welfare;
  out["lambda"] = r.lambda;
  out["si"] = r.si;
  out["norm_si"] = r.norm_si;
  out["kappa"] = optional_number(r.kappa);
  out["kappa_raw"] = optional_number(r.kappa_raw);
  out["individually_rational"] = r.individually_rational;
  out["stable"] = is_stable(market, alloc);
  if (const auto bp = find_blocking_pair(market, alloc)) {
    out["blocking_pair"] = {market.buyer_ids()[bp->first], market.seller_ids()[bp->second]};
  } else {
    out["blocking_pair"] = nullptr;
  }
  out["buyer_utilities"] = util.u;
  out["seller_utilities"] = util.v;
  return out;
}

ordered_json allocation_json(const Market& market, const Allocation& alloc) {
  ordered_json out;
  out["matching"] = matching_json(market, alloc.matching);
  out["prices"] = alloc.prices;
  return out;
}

ordered_json cell_json(const Cell& c) {
  ordered_json out;
  out["value"] = c.value;
  out["std_error"] = optional_number(c.std_error);
  out["estimated"] = c.estimated;
  return out;
}

Market require_market(const Options& o) {
  if (o.instance.empty()) throw ConfigError("--instance is required");
  return load_instance(o.instance).market;
}

OnlineAlgorithm require_algorithm(const std::string& name) {
  const auto alg = algorithm_by_name(name);
  if (!alg) {
    throw ConfigError("unknown algorithm '" + name +
                      "' (greedy, greedy-half, ranking, ranking-half, greedy-free-disposal, "
                      "greedy-free-disposal-random-ties)");
  }
  return *alg;
}

ordered_json cmd_solve(const Options& o, std::ostream& err) {
  const Market market = require_market(o);
  const MatchingResult r = max_weight_matching(market.surplus());
  const Allocation alloc = shapley_shubik_prices(market);
  const UtilityProfile util = utilities(market, alloc);
  ordered_json out;
  out["opt"] = r.value;
  out["matching"] = matching_json(market, alloc.matching);
  out["prices"] = alloc.prices;
  out["buyer_utilities"] = util.u;
  out["seller_utilities"] = util.v;
  out["stable"] = is_stable(market, alloc);
  err << "OPT = " << r.value << " with " << alloc.matching.size() << " matched pairs\n";
  return out;
}

ordered_json cmd_metrics(const Options& o, std::ostream& err) {
  const Market market = require_market(o);
  if (o.matching.empty()) throw ConfigError("--matching is required");
  const Matching mu = parse_matching(market, o.matching);
  Allocation alloc = allocation_at_cost(market, mu);
  if (!o.prices.empty()) alloc.prices = parse_prices(market, o.prices);
  ordered_json out = metrics_json(market, alloc);
  out["subsidy"] = minimum_stabilizing_subsidy(market, alloc).value;
  err << "lambda = " << out["lambda"].get<double>() << ", SI = " << out["si"].get<double>()
      << "\n";
  return out;
}

ordered_json cmd_price(const Options& o, std::ostream& err) {
  const Market market = require_market(o);
  const auto tag = parse_price_policy(o.policy);
  if (!tag) throw ConfigError("unknown price policy '" + o.policy + "'");
  PricePolicy policy{*tag, {}};
  if (*tag == PricePolicyTag::kCustom) {
    if (o.prices.empty()) throw ConfigError("--policy custom needs --prices");
    policy.custom_prices = parse_prices(market, o.prices);
  }
  Matching mu;
  if (o.matching.empty()) {
    if (*tag != PricePolicyTag::kShapleyShubik) {
      throw ConfigError("--matching is required for policy '" + o.policy + "'");
    }
    mu = max_weight_matching(market.surplus()).matching;
  } else {
    mu = parse_matching(market, o.matching);
  }
  const Allocation alloc = apply_price_policy(market, mu, policy);
  ordered_json out;
  out["policy"] = std::string(to_string(*tag));
  const ordered_json fields = allocation_json(market, alloc);
  for (const auto& [k, v] : fields.items()) out[k] = v;
  out["metrics"] = metrics_json(market, alloc);
  err << "policy " << to_string(*tag) << ": SI = " << out["metrics"]["si"].get<double>() << "\n";
  return out;
}

ordered_json cmd_simulate(const Options& o, std::ostream& err) {
  if (o.instance.empty()) throw ConfigError("--instance is required");
  const OnlineInstance inst = load_instance(o.instance);
  const OnlineAlgorithm alg = require_algorithm(o.alg);
  const SimulationResult sim = simulate_traced(inst, alg, o.seed);
  const Market& market = inst.market;
  ordered_json out;
  out["algorithm"] = alg.name;
  out["seed"] = o.seed;
  const ordered_json fields = allocation_json(market, sim.allocation);
  for (const auto& [k, v] : fields.items()) out[k] = v;
  ordered_json trace = ordered_json::array();
  for (const StepRecord& s : sim.trace) {
    ordered_json step;
    step["arrival"] = s.arrival;
    step["buyer"] = market.buyer_ids()[s.buyer];
    step["seller"] = s.seller == kUnmatched ? ordered_json(nullptr)
                                            : ordered_json(market.seller_ids()[s.seller]);
    step["price"] = s.seller == kUnmatched ? ordered_json(nullptr) : ordered_json(s.price);
    step["displaced"] = s.displaced == kUnmatched
                            ? ordered_json(nullptr)
                            : ordered_json(market.buyer_ids()[s.displaced]);
    trace.push_back(std::move(step));
  }
  out["trace"] = std::move(trace);
  out["metrics"] = metrics_json(market, sim.allocation);
  err << alg.name << " matched " << sim.allocation.matching.size() << " pairs\n";
  return out;
}

ordered_json cmd_evaluate(const Options& o, std::ostream& err) {
  if (o.instance.empty()) throw ConfigError("--instance is required");
  const OnlineInstance inst = load_instance(o.instance);
  const OnlineAlgorithm alg = require_algorithm(o.alg);
  const auto method = parse_method(o.method);
  if (!method) throw ConfigError("unknown method '" + o.method + "'");
  const bool all_metrics = o.metric == "all";
  const bool all_modes = o.mode == "all";
  const auto metric = parse_metric(o.metric);
  const auto mode = parse_mode(o.mode);
  if (!all_metrics && !metric) throw ConfigError("unknown metric '" + o.metric + "'");
  if (!all_modes && !mode) throw ConfigError("unknown mode '" + o.mode + "'");

  const FullEvaluation full = evaluate_all(inst, alg, *method, o.trials, o.seed);
  ordered_json out;
  out["algorithm"] = alg.name;
  out["method"] = std::string(to_string(full.method));
  if (full.method == Method::kExact) {
    out["support_size"] = full.support_size;
  } else {
    out["trials"] = full.trials;
  }
  out["seed"] = o.seed;
  out["opt"] = full.opt;
  if (!all_metrics && !all_modes) {
    const Cell& c = full.at(*metric, *mode);
    out["metric"] = std::string(to_string(*metric));
    out["mode"] = std::string(to_string(*mode));
    out["value"] = c.value;
    out["std_error"] = optional_number(c.std_error);
    out["estimated"] = c.estimated;
    err << to_string(*metric) << "^" << to_string(*mode) << " = " << c.value << "\n";
  } else {
    ordered_json cells;
    for (Metric me : {Metric::kLambda, Metric::kNormSi, Metric::kKappa}) {
      if (!all_metrics && me != *metric) continue;
      for (Mode mo : {Mode::kPost, Mode::kAnte, Mode::kAvg}) {
        if (!all_modes && mo != *mode) continue;
        cells[std::string(to_string(me))][std::string(to_string(mo))] =
            cell_json(full.at(me, mo));
      }
    }
    out["cells"] = std::move(cells);
    err << "evaluated " << alg.name << " (" << to_string(full.method) << ")\n";
  }
  out["expected_buyer_utilities"] = full.expected_u;
  out["expected_seller_utilities"] = full.expected_v;
  out["non_ir_outcomes"] = full.non_ir_outcomes;
  out["discretized"] = full.discretized;
  return out;
}

GeneratorSpec parse_generator(const Options& o) {
  GeneratorSpec spec;
  const auto family = parse_family(o.family);
  if (!family) throw ConfigError("unknown family '" + o.family + "'");
  spec.family = *family;
  spec.seed = o.seed;
  std::stringstream ss(o.params);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("parameter '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "kappa0" || key == "kappa") {
        spec.kappa0 = std::stod(value);
      } else if (key == "n") {
        spec.n = std::stoul(value);
      } else if (key == "W") {
        spec.W = std::stod(value);
      } else if (key == "l") {
        spec.l = std::stoul(value);
      } else if (key == "variant") {
        spec.variant = std::stoul(value);
      } else if (key == "buyers") {
        spec.buyers = std::stoul(value);
      } else if (key == "sellers") {
        spec.sellers = std::stoul(value);
      } else if (key == "min") {
        spec.min_value = std::stoi(value);
      } else if (key == "max") {
        spec.max_value = std::stoi(value);
      } else if (key == "probe_trials") {
        spec.probe_trials = std::stoul(value);
      } else if (key == "alg") {
        spec.algorithm = value;
      } else if (key == "seed") {
        spec.seed = std::stoull(value);
      } else {
        throw ConfigError("unknown generator parameter '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw ConfigError("bad value for generator parameter '" + key + "'");
    }
  }
  return spec;
}

std::string render(const ordered_json& doc, const std::string& format) {
  if (format == "json") return doc.dump(2) + "\n";
  if (format != "csv") throw ConfigError("unknown format '" + format + "'");
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) continue;
    std::string text = value.is_string() ? value.get<std::string>() : value.dump();
    std::replace(text.begin(), text.end(), ',', ';');
    os << key << ',' << text << "\n";
  }
  return os.str();
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw ConfigError("cannot write " + o.output);
  file << text;
}

int cmd_tables(const Options& o, std::ostream& out, std::ostream& err) {
  TablesConfig config;
  config.seed = o.tables_seed;
  config.sweep = o.sweep;
  config.trials = o.tables_trials;
  const std::filesystem::path dir = o.output.empty() ? "tables" : o.output;
  std::filesystem::create_directories(dir);
  const TablesResult r = compute_tables(config);
  ordered_json summary;
  ordered_json files = ordered_json::array();
  int code = kExitOk;
  for (const auto& [name, cells] :
       {std::pair<std::string, const std::vector<TableCell>*>{"vertex_weighted",
                                                              &r.vertex_weighted},
        {"free_disposal", &r.free_disposal}}) {
    const std::filesystem::path path = dir / (name + ".csv");
    std::ofstream(path, std::ios::binary) << table_csv(*cells);
    files.push_back(path.generic_string());
    ordered_json table = ordered_json::array();
    for (const TableCell& c : *cells) {
      ordered_json cell;
      cell["metric"] = std::string(to_string(c.metric));
      cell["mode"] = std::string(to_string(c.mode));
      cell["claim"] = c.claim;
      cell["measured"] = c.measured;
      cell["status"] = c.status;
      if (c.violated && c.witness) {
        const std::filesystem::path witness = dir / ("witness_" + name + "_" +
                                                     std::string(to_string(c.metric)) + "_" +
                                                     std::string(to_string(c.mode)) + ".json");
        save_instance(*c.witness, witness);
        cell["witness"] = witness.generic_string();
        err << "bound violated: " << name << " " << to_string(c.metric) << "^"
            << to_string(c.mode) << " (witness " << witness.generic_string() << ")\n";
        code = kExitBoundViolation;
      }
      table.push_back(std::move(cell));
    }
    summary[name] = std::move(table);
  }
  summary["files"] = std::move(files);
  summary["ok"] = r.ok();
  if (!r.ok()) code = kExitBoundViolation;
  out << summary.dump(2) << "\n";
  err << (r.ok() ? "all table cells consistent" : "table bound violations found") << "\n";
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Stability metrics and online algorithms for assignment markets", "stablematch"};
  app.require_subcommand(1);

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", o.output, "Write machine output to this file");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  CLI::App* solve = app.add_subcommand("solve", "Optimal matching and a stable allocation");
  solve->add_option("--instance", o.instance)->required();
  add_output(solve);

  CLI::App* metrics = app.add_subcommand("metrics", "Stability metrics of an allocation");
  metrics->add_option("--instance", o.instance)->required();
  metrics->add_option("--matching", o.matching, "Pairs as Buyer-Seller, comma separated")
      ->required();
  metrics->add_option("--prices", o.prices, "Seller prices in seller order");
  add_output(metrics);

  CLI::App* price = app.add_subcommand("price", "Price a matching with a policy");
  price->add_option("--instance", o.instance)->required();
  price->add_option("--matching", o.matching);
  price->add_option("--policy", o.policy, "half, shapley-shubik, min-si or custom");
  price->add_option("--prices", o.prices, "Prices for the custom policy");
  add_output(price);

  CLI::App* sim = app.add_subcommand("simulate", "Run an online algorithm once");
  sim->add_option("--instance", o.instance)->required();
  sim->add_option("--alg", o.alg);
  sim->add_option("--seed", o.seed);
  add_output(sim);

  CLI::App* eval = app.add_subcommand("evaluate", "Ex-post, ex-ante and average metrics");
  eval->add_option("--instance", o.instance)->required();
  eval->add_option("--alg", o.alg);
  eval->add_option("--metric", o.metric, "lambda, norm_si, kappa or all");
  eval->add_option("--mode", o.mode, "post, ante, avg or all");
  eval->add_option("--method", o.method, "exact or monte_carlo");
  eval->add_option("--trials", o.trials);
  eval->add_option("--seed", o.seed);
  add_output(eval);

  CLI::App* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->add_option("--family", o.family)->required();
  gen->add_option("--params", o.params, "key=value pairs, comma separated");
  gen->add_option("--seed", o.seed);
  add_output(gen);

  CLI::App* tables = app.add_subcommand("tables", "Reproduce the guarantee tables as CSV");
  tables->add_option("-o,--output", o.output, "Output directory");
  tables->add_option("--seed", o.tables_seed);
  tables->add_option("--trials", o.tables_trials);
  tables->add_option("--sweep", o.sweep);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (tables->parsed()) return cmd_tables(o, out, err);
    if (gen->parsed()) {
      const OnlineInstance inst = generate(parse_generator(o));
      emit(instance_to_json(inst), o, out);
      err << "generated " << o.family << " with " << inst.market.num_buyers() << " buyers and "
          << inst.market.num_sellers() << " sellers\n";
      return kExitOk;
    }
    ordered_json doc;
    if (solve->parsed()) doc = cmd_solve(o, err);
    if (metrics->parsed()) doc = cmd_metrics(o, err);
    if (price->parsed()) doc = cmd_price(o, err);
    if (sim->parsed()) doc = cmd_simulate(o, err);
    if (eval->parsed()) doc = cmd_evaluate(o, err);
    emit(render(doc, o.format), o, out);
    return kExitOk;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace stablematch

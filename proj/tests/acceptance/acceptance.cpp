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

// One line per acceptance criterion. Exit status is nonzero if any fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/test_util.hpp"
#include "stablematch/cli.hpp"
#include "stablematch/errors.hpp"
#include "stablematch/evaluation.hpp"
#include "stablematch/instances.hpp"
#include "stablematch/lp_solver.hpp"
#include "stablematch/matching_solver.hpp"
#include "stablematch/pricing.hpp"
#include "stablematch/stability.hpp"

namespace sm = stablematch;
using sm::testing::brute_force_opt;
using sm::testing::random_matching;
using sm::testing::random_prices;
using sm::testing::random_small_market;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && out_.pass) out_.detail = what;
    out_.pass = out_.pass && ok;
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": got " << got << ", want " << want << " +/- " << tol;
    expect(std::abs(got - want) <= tol, os.str());
  }
  void note(const std::string& text) {
    if (out_.pass) out_.detail = text;
  }
  Outcome result() const { return out_; }

 private:
  Outcome out_;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

const std::vector<sm::Mode> kModes{sm::Mode::kPost, sm::Mode::kAnte, sm::Mode::kAvg};

Outcome worked_example() {
  Check c;
  const sm::Market m = sm::fig1_market();
  c.near(sm::optimal_value(m), brute_force_opt(m), 1e-12, "OPT vs brute force");
  const sm::Allocation alloc{sm::parse_matching(m, "A-D,B-E"), {7, 11}};
  c.near(sm::brute_force_si(m, alloc), 4.0, 1e-9, "brute-force SI");
  const sm::MetricReport r = sm::evaluate_metrics(m, alloc);
  c.near(r.opt, 9.0, 1e-9, "OPT");
  c.near(r.lambda, 2.0 / 3.0, 1e-9, "lambda");
  c.near(r.si, 4.0, 1e-9, "SI");
  c.near(r.norm_si, 5.0 / 9.0, 1e-9, "J");
  c.note("OPT=9 lambda=2/3 SI=4 J=5/9");
  return c.result();
}

Outcome subsidy_equivalence() {
  Check c;
  sm::SeededSource rng(101);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const sm::Market m = random_small_market(rng, 3, 10, t % 2 == 1);
    const sm::Allocation a{random_matching(rng, m), random_prices(rng, m)};
    const double lp = sm::minimum_stabilizing_subsidy(m, a).value;
    const double si = sm::subset_instability(m, a);
    worst = std::max(worst, std::abs(lp - si));
    c.near(lp, si, 1e-6, "instance " + std::to_string(t));
  }
  c.note("200 markets, max gap " + fmt(worst));
  return c.result();
}

Outcome si_oracle() {
  Check c;
  sm::SeededSource rng(202);
  for (int t = 0; t < 300; ++t) {
    const sm::Market m = random_small_market(rng, 4, 10, t % 3 == 0);
    const sm::Allocation a{random_matching(rng, m), random_prices(rng, m)};
    c.near(sm::subset_instability(m, a), sm::brute_force_si(m, a), 1e-9,
           "instance " + std::to_string(t));
  }
  c.note("300 instances agree with subset enumeration");
  return c.result();
}

Outcome min_si_prices() {
  Check c;
  sm::SeededSource rng(303);
  for (int t = 0; t < 300; ++t) {
    const sm::Market m = random_small_market(rng, 4, 10, t % 2 == 0);
    const sm::Matching mu = random_matching(rng, m);
    const sm::Allocation a = sm::min_si_prices(m, mu);
    const std::string tag = "instance " + std::to_string(t);
    c.expect(sm::is_individually_rational(m, a), tag + " not IR");
    const sm::MetricReport r = sm::evaluate_metrics(m, a);
    c.near(r.si, r.opt - r.social_welfare, 1e-6, tag + " SI");
    c.near(r.norm_si, r.lambda, 1e-6, tag + " J vs lambda");

    const sm::Allocation raw{mu, random_prices(rng, m)};
    const sm::Allocation clamped = sm::clamp_prices_ir(m, raw);
    c.expect(sm::is_individually_rational(m, clamped), tag + " clamp not IR");
    c.expect(sm::subset_instability(m, clamped) <= sm::subset_instability(m, raw) + 1e-9,
             tag + " clamp increased SI");
  }
  c.note("300 pairs: IR, SI = OPT - SW, J = lambda; clamp monotone");
  return c.result();
}

Outcome half_bound() {
  Check c;
  sm::SeededSource rng(404);
  double slack = 1e9;
  for (int t = 0; t < 300; ++t) {
    const sm::Market m = random_small_market(rng, 4, 10, t % 2 == 1);
    const sm::MetricReport r = sm::evaluate_metrics(m, sm::half_prices(m, random_matching(rng, m)));
    slack = std::min(slack, r.norm_si - 0.5 * r.lambda);
    c.expect(r.norm_si - 0.5 * r.lambda >= -1e-9, "offline instance " + std::to_string(t));
  }
  auto online = [&](const sm::OnlineInstance& inst, const sm::OnlineAlgorithm& alg,
                    const std::string& tag) {
    const sm::FullEvaluation e = sm::evaluate_all(inst, alg, sm::Method::kExact);
    for (sm::Mode mo : kModes) {
      const double s = e.at(sm::Metric::kNormSi, mo).value -
                       0.5 * e.at(sm::Metric::kLambda, mo).value;
      slack = std::min(slack, s);
      c.expect(s >= -1e-9, tag + " mode " + std::string(sm::to_string(mo)));
    }
  };
  for (int t = 0; t < 60; ++t) {
    const auto n = static_cast<std::size_t>(2 + t % 4);
    online(sm::vertex_instance(sm::random_vertex_weighted_market(n, n, 1, 9, 500 + t)),
           sm::greedy_half(), "greedy-half " + std::to_string(t));
    online(sm::vertex_instance(sm::random_market(n, n, 0, 9, 700 + t), true),
           sm::greedy_free_disposal(), "greedy-fd " + std::to_string(t));
    online(sm::vertex_instance(sm::random_market(n, 3, 0, 3, 900 + t), true),
           sm::greedy_free_disposal(true), "greedy-fd-random " + std::to_string(t));
  }
  for (std::size_t n = 2; n <= 6; ++n) online(sm::triangular(n), sm::greedy_half(), "tri");
  c.note("offline and online, min slack " + fmt(slack));
  return c.result();
}

Outcome chains() {
  Check c;
  std::size_t audited = 0;
  auto audit = [&](const sm::OnlineInstance& inst, const sm::OnlineAlgorithm& alg,
                   const std::string& tag) {
    const sm::AuditReport r = sm::inequality_audit(inst, alg);
    ++audited;
    c.expect(r.ok(), tag + ": " + (r.ok() ? "" : r.violations.front()));
    const auto& e = r.evaluation;
    c.expect(e.at(sm::Metric::kLambda, sm::Mode::kAnte).value ==
                 e.at(sm::Metric::kLambda, sm::Mode::kAvg).value,
             tag + ": lambda ante != avg");
  };
  for (int t = 0; t < 40; ++t) {
    const auto n = static_cast<std::size_t>(2 + t % 3);
    audit(sm::vertex_instance(sm::random_vertex_weighted_market(n, n, 1, 9, 40 + t)),
          sm::greedy_half(), "greedy-half " + std::to_string(t));
    audit(sm::vertex_instance(sm::random_market(n, n, 0, 5, 80 + t), true),
          sm::greedy_free_disposal(true), "greedy-fd-random " + std::to_string(t));
    audit(sm::vertex_instance(sm::random_vertex_weighted_market(n, n, 1, 1, 120 + t)),
          sm::ranking(), "ranking " + std::to_string(t));
  }
  for (std::size_t n = 3; n <= 6; ++n) audit(sm::triangular(n), sm::ranking(), "triangular");
  for (const auto& inst : sm::kvv_pair()) audit(inst, sm::ranking(), "kvv ranking");
  audit(sm::adversary_full(10.0, {true, false, true}), sm::greedy_free_disposal(true),
        "adversary");
  c.note(std::to_string(audited) + " exact evaluations satisfy both chains");
  return c.result();
}

Outcome prop311() {
  Check c;
  for (int k = 0; k <= 9; ++k) {
    const double k0 = 0.1 * k;
    const sm::Market m = sm::prop311_market(k0);
    const sm::MetricReport r = sm::evaluate_metrics(m, sm::prop311_allocation(m));
    const std::string tag = "kappa0=" + fmt(k0);
    c.near(r.lambda, k0, 1e-9, tag + " lambda");
    c.near(r.norm_si, k0, 1e-9, tag + " J");
    c.expect(r.kappa.has_value(), tag + " kappa undefined");
    if (r.kappa) c.near(*r.kappa, 0.0, 1e-9, tag + " kappa");
  }
  c.note("lambda = J = kappa0 and kappa = 0 on the grid");
  return c.result();
}

// Accepts every first offered edge; the seller receives a uniformly drawn
// share of the pair's surplus.
class RandomShareAcceptFirst : public sm::OnlinePolicy {
 public:
  sm::Decision decide(const sm::ArrivalView& view, sm::RandomSource& rng) override {
    const std::size_t i = view.buyer();
    const std::size_t j = view.seller();
    if (view.allocation().matching.seller_matched(j) ||
        view.allocation().matching.buyer_matched(i) || view.surplus(i, j) <= 0.0) {
      return {};
    }
    return {j, view.cost(j) + rng.uniform01() * view.surplus(i, j)};
  }
};

Outcome first_edge_tightness() {
  Check c;
  std::vector<sm::OnlineAlgorithm> algs{sm::greedy_half(), sm::greedy(0.0), sm::greedy(0.25),
                                        sm::greedy(1.0)};
  sm::OnlineAlgorithm coin = sm::greedy();
  coin.pricing.kind = sm::PriceRule::Kind::kRandomShare;
  coin.pricing.shares = {0.0, 1.0};
  coin.name = "greedy-coin";
  algs.push_back(coin);
  algs.push_back(sm::half_wrapper(coin));
  algs.push_back(sm::custom_algorithm(
      "random-share", [] { return std::make_unique<RandomShareAcceptFirst>(); }, true));
  const auto pair = sm::fig6_pair();
  double worst = -1e9;
  for (const auto& alg : algs) {
    double best = 1e9;
    for (const auto& inst : pair) {
      const sm::FullEvaluation e = sm::evaluate_all(inst, alg, sm::Method::kExact);
      best = std::min(best, e.at(sm::Metric::kNormSi, sm::Mode::kAvg).value -
                                0.5 * e.at(sm::Metric::kLambda, sm::Mode::kPost).value);
    }
    worst = std::max(worst, best);
    c.expect(best <= 1e-9, alg.name + " min gap " + fmt(best));
  }
  c.note(std::to_string(algs.size()) + " first-edge algorithms, largest min gap " + fmt(worst));
  return c.result();
}

Outcome ranking_triangular() {
  Check c;
  const double bound = 1.0 - std::exp(-1.0) - 0.01;
  std::string summary;
  for (std::size_t n = 4; n <= 6; ++n) {
    const sm::OnlineInstance inst = sm::triangular(n);
    const double exact =
        sm::evaluate_all(inst, sm::ranking(), sm::Method::kExact).at(sm::Metric::kKappa,
                                                                     sm::Mode::kAvg).value;
    const sm::Cell mc = sm::evaluate_all(inst, sm::ranking(), sm::Method::kMonteCarlo, 100000,
                                         2026 + n)
                            .at(sm::Metric::kKappa, sm::Mode::kAvg);
    const std::string tag = "n=" + std::to_string(n);
    c.expect(exact >= bound, tag + " exact kappa_avg " + fmt(exact));
    c.near(mc.value, exact, 3.0 * mc.std_error.value_or(0.0), tag + " Monte Carlo");
    summary += tag + ":" + fmt(exact) + " ";
  }
  c.note("kappa_avg " + summary + ">= " + fmt(bound));
  return c.result();
}

Outcome greedy_vertex_weighted() {
  Check c;
  double pair_min = 1.0;
  for (const auto& inst : sm::kvv_pair()) {
    pair_min = std::min(pair_min, sm::evaluate_all(inst, sm::greedy_half(), sm::Method::kExact)
                                      .at(sm::Metric::kKappa, sm::Mode::kPost)
                                      .value);
  }
  c.expect(pair_min == 0.5, "KVV pair kappa_post " + fmt(pair_min));
  double kmin = 1.0;
  double lmin = 1.0;
  for (int t = 0; t < 200; ++t) {
    const auto b = static_cast<std::size_t>(1 + t % 5);
    const auto s = static_cast<std::size_t>(1 + (t / 5) % 5);
    const sm::OnlineInstance inst =
        sm::vertex_instance(sm::random_vertex_weighted_market(b, s, 1, 9, 3000 + t));
    const double k = sm::evaluate_all(inst, sm::greedy_half(), sm::Method::kExact)
                         .at(sm::Metric::kKappa, sm::Mode::kPost)
                         .value;
    const double l = sm::evaluate_all(inst, sm::greedy(), sm::Method::kExact)
                         .at(sm::Metric::kLambda, sm::Mode::kPost)
                         .value;
    kmin = std::min(kmin, k);
    lmin = std::min(lmin, l);
    c.expect(k >= 0.5 - 1e-9, "instance " + std::to_string(t) + " kappa_post " + fmt(k));
    c.expect(l >= 0.5, "instance " + std::to_string(t) + " lambda_post " + fmt(l));
  }
  c.note("KVV kappa_post 0.5; sweep min kappa_post " + fmt(kmin) + ", min lambda_post " +
         fmt(lmin));
  return c.result();
}

Outcome adversary_collapse() {
  Check c;
  std::string summary;
  struct Grid {
    double W;
    std::size_t l;
  };
  for (const Grid g : {Grid{10.0, 3}, Grid{100.0, 5}}) {
    for (bool flip : {false, true}) {
      const sm::OnlineAlgorithm alg = sm::greedy_free_disposal(flip);
      const sm::OnlineInstance inst = sm::build_adversary_full(alg, g.W, g.l, 2000, 11);
      const sm::FullEvaluation e =
          sm::evaluate_all(inst, alg, sm::Method::kMonteCarlo, 20000, 77);
      const sm::Cell& ante = e.at(sm::Metric::kKappa, sm::Mode::kAnte);
      const double se = ante.std_error.value_or(0.0);
      const double bound = 1.0 / g.W + std::pow(0.5, static_cast<double>(g.l)) + 3.0 * se;
      const double post = e.at(sm::Metric::kKappa, sm::Mode::kPost).value;
      const std::string tag = "W=" + fmt(g.W) + " l=" + std::to_string(g.l) +
                              (flip ? " tie-flip" : " deterministic");
      c.expect(ante.value <= bound, tag + " kappa_ante " + fmt(ante.value) + " > " + fmt(bound));
      c.expect(post <= 1.0 / g.W + 1e-12, tag + " no collapsed outcome, kappa_post " + fmt(post));
      summary += "[" + tag + ": ante " + fmt(ante.value) + "] ";
    }
  }
  c.note(summary);
  return c.result();
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = sm::run_cli(args, out, err);
  return {code, out.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  Check c;
  const std::filesystem::path dir = std::filesystem::path(STABLEMATCH_TEST_TMP) / "acceptance";
  std::filesystem::create_directories(dir);
  const std::string fig1 = (dir / "fig1.json").string();
  const std::string tri = (dir / "tri.json").string();
  const std::string adv = (dir / "adv.json").string();
  sm::save_instance(sm::vertex_instance(sm::fig1_market()), fig1);
  sm::save_instance(sm::triangular(5), tri);

  const std::vector<std::vector<std::string>> commands{
      {"solve", "--instance", fig1},
      {"solve", "--instance", fig1, "--format", "csv"},
      {"metrics", "--instance", fig1, "--matching", "A-D,B-E", "--prices", "7,11"},
      {"price", "--instance", fig1, "--matching", "A-D,B-E", "--policy", "min-si"},
      {"price", "--instance", fig1, "--policy", "shapley-shubik"},
      {"simulate", "--instance", tri, "--alg", "ranking", "--seed", "5"},
      {"evaluate", "--instance", tri, "--alg", "ranking", "--method", "exact"},
      {"evaluate", "--instance", tri, "--alg", "ranking", "--method", "monte_carlo",
       "--trials", "5000", "--seed", "9"},
      {"gen", "--family", "random", "--params", "buyers=4,sellers=5", "--seed", "3"},
      {"gen", "--family", "adversary_full", "--params", "W=10,l=3,alg=greedy-free-disposal-random-ties",
       "--seed", "4"},
  };
  for (const auto& args : commands) {
    const CliRun a = cli(args);
    const CliRun b = cli(args);
    c.expect(a.code == sm::kExitOk, args.front() + " exited " + std::to_string(a.code));
    c.expect(!a.out.empty() && a.out == b.out, args.front() + " output differs between runs");
  }

  const std::vector<std::string> tables_args{"tables", "--sweep", "12", "--trials", "2000",
                                             "--seed", "5"};
  std::vector<std::string> first;
  for (int run = 0; run < 2; ++run) {
    const std::string out = (dir / ("tables" + std::to_string(run))).string();
    auto args = tables_args;
    args.push_back("-o");
    args.push_back(out);
    const CliRun r = cli(args);
    c.expect(r.code == sm::kExitOk, "tables exited " + std::to_string(r.code));
    const std::string files = slurp(std::filesystem::path(out) / "vertex_weighted.csv") +
                              slurp(std::filesystem::path(out) / "free_disposal.csv");
    if (run == 0) {
      first = {files};
    } else {
      c.expect(!files.empty() && files == first.front(), "tables CSV differs between runs");
    }
  }
  c.note(std::to_string(commands.size() + 1) + " commands byte-identical across reruns");
  return c.result();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"worked example goldens", worked_example},
      {"subsidy LP equals subset instability", subsidy_equivalence},
      {"subset instability oracle", si_oracle},
      {"min-SI prices and clamping", min_si_prices},
      {"half pricing keeps J >= lambda/2", half_bound},
      {"metric and mode chains", chains},
      {"kappa0 family", prop311},
      {"first-edge tightness pair", first_edge_tightness},
      {"ranking on triangular markets", ranking_triangular},
      {"greedy on vertex-weighted markets", greedy_vertex_weighted},
      {"adversarial kappa collapse", adversary_collapse},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s: %s (%s)\n", k + 1, o.pass ? "PASS" : "FAIL",
                criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

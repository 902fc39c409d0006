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

#include "stablematch/tables.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "stablematch/instances.hpp"
#include "stablematch/parallel.hpp"
#include "stablematch/random_source.hpp"

namespace stablematch {
namespace {

constexpr double kSlack = 1e-9;
const double kRankingBound = 1.0 - std::exp(-1.0);

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

struct Minimum {
  double value = std::numeric_limits<double>::infinity();
  std::optional<OnlineInstance> argmin;

  void consider(double v, const OnlineInstance& inst) {
    if (v < value) {
      value = v;
      argmin = inst;
    }
  }
};

std::vector<FullEvaluation> evaluate_sweep(const std::vector<OnlineInstance>& instances,
                                           const OnlineAlgorithm& alg) {
  std::vector<FullEvaluation> out(instances.size());
  parallel_for(instances.size(), [&](std::size_t k) {
    out[k] = evaluate_all(instances[k], alg, Method::kExact);
  });
  return out;
}

Minimum sweep_min(const std::vector<OnlineInstance>& instances,
                  const std::vector<FullEvaluation>& evals, Metric metric, Mode mode) {
  Minimum m;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    m.consider(evals[k].at(metric, mode).value, instances[k]);
  }
  return m;
}

TableCell lower_bound_cell(Metric metric, Mode mode, std::string claim, double bound,
                           const std::string& algorithm, const Minimum& m,
                           std::string detail) {
  TableCell c;
  c.metric = metric;
  c.mode = mode;
  c.claim = std::move(claim);
  c.algorithm = algorithm;
  c.measured = m.value;
  c.status = "verified-lower-bound";
  c.detail = std::move(detail);
  if (m.value < bound - kSlack) {
    c.violated = true;
    c.status = "violated";
    c.witness = m.argmin;
  }
  return c;
}

TableCell open_cell(Metric metric, Mode mode, const std::string& algorithm, const Minimum& m,
                    std::string detail) {
  TableCell c;
  c.metric = metric;
  c.mode = mode;
  c.claim = "?";
  c.algorithm = algorithm;
  c.measured = m.value;
  c.status = "open";
  c.detail = std::move(detail);
  return c;
}

std::vector<TableCell> vertex_weighted_table(const TablesConfig& config) {
  std::vector<OnlineInstance> sweep;
  const auto kvv = kvv_pair();
  sweep.push_back(kvv[0]);
  sweep.push_back(kvv[1]);
  for (std::size_t s = 0; s < config.sweep; ++s) {
    const std::size_t b = 2 + s % 4;
    const std::size_t m = 2 + (s / 4) % 4;
    sweep.push_back(vertex_instance(
        random_vertex_weighted_market(b, m, 1, 10, derive_seed(config.seed, s))));
  }
  // Ranking is enumerated exactly on equal-weight instances.
  std::vector<OnlineInstance> ranking_set;
  for (std::size_t n : {4, 5, 6}) ranking_set.push_back(triangular(n));
  for (std::size_t s = 0; s < config.sweep / 4; ++s) {
    const std::size_t b = 2 + s % 5;
    const std::size_t m = 2 + (s / 5) % 5;
    ranking_set.push_back(vertex_instance(random_vertex_weighted_market(
        b, m, 1, 1, derive_seed(config.seed ^ 0x52414e4bULL, s))));
  }

  const OnlineAlgorithm gh = greedy_half();
  const OnlineAlgorithm g = greedy();
  const OnlineAlgorithm rk = ranking();
  const auto gh_eval = evaluate_sweep(sweep, gh);
  const auto g_eval = evaluate_sweep(sweep, g);
  const auto rk_eval = evaluate_sweep(ranking_set, rk);

  const std::string sweep_note = "kvv_pair plus " + std::to_string(config.sweep) +
                                 " random vertex-weighted instances";
  const std::string ranking_note = "triangular 4..6 plus " +
                                   std::to_string(ranking_set.size() - 3) +
                                   " random unit-weight instances; exact rank enumeration";
  const double kvv_kappa = gh_eval[0].at(Metric::kKappa, Mode::kPost).value;

  std::vector<TableCell> cells;
  cells.push_back(lower_bound_cell(
      Metric::kKappa, Mode::kPost, "1/2", 0.5, gh.name,
      sweep_min(sweep, gh_eval, Metric::kKappa, Mode::kPost),
      sweep_note + "; kvv_pair instance 1 gives " + fmt(kvv_kappa)));
  if (std::abs(kvv_kappa - 0.5) > kSlack) {
    cells.back().violated = true;
    cells.back().status = "violated";
    cells.back().witness = sweep[0];
  }
  cells.push_back(open_cell(Metric::kKappa, Mode::kAnte,
                            rk.name, sweep_min(ranking_set, rk_eval, Metric::kKappa, Mode::kAnte),
                            "empirical minimum; " + ranking_note));
  cells.push_back(lower_bound_cell(Metric::kKappa, Mode::kAvg, "1-1/e", kRankingBound, rk.name,
                                   sweep_min(ranking_set, rk_eval, Metric::kKappa, Mode::kAvg),
                                   ranking_note));
  cells.push_back(lower_bound_cell(Metric::kNormSi, Mode::kPost, "1/2", 0.5, gh.name,
                                   sweep_min(sweep, gh_eval, Metric::kNormSi, Mode::kPost),
                                   sweep_note));
  cells.push_back(open_cell(Metric::kNormSi, Mode::kAnte, rk.name,
                            sweep_min(ranking_set, rk_eval, Metric::kNormSi, Mode::kAnte),
                            "empirical minimum; " + ranking_note));
  cells.push_back(lower_bound_cell(Metric::kNormSi, Mode::kAvg, "1-1/e", kRankingBound,
                                   rk.name,
                                   sweep_min(ranking_set, rk_eval, Metric::kNormSi, Mode::kAvg),
                                   ranking_note));
  cells.push_back(lower_bound_cell(Metric::kLambda, Mode::kPost, "1/2", 0.5, g.name,
                                   sweep_min(sweep, g_eval, Metric::kLambda, Mode::kPost),
                                   sweep_note));
  cells.push_back(lower_bound_cell(Metric::kLambda, Mode::kAnte, "1-1/e", kRankingBound,
                                   rk.name,
                                   sweep_min(ranking_set, rk_eval, Metric::kLambda, Mode::kAnte),
                                   ranking_note));
  cells.push_back(lower_bound_cell(Metric::kLambda, Mode::kAvg, "1-1/e", kRankingBound, rk.name,
                                   sweep_min(ranking_set, rk_eval, Metric::kLambda, Mode::kAvg),
                                   ranking_note));
  return cells;
}

struct AdversaryRun {
  double W;
  std::size_t l;
  OnlineAlgorithm alg;
  OnlineInstance instance;
  FullEvaluation eval;
};

std::vector<TableCell> free_disposal_table(const TablesConfig& config) {
  std::vector<OnlineInstance> sweep;
  for (std::size_t s = 0; s < config.sweep; ++s) {
    const std::size_t b = 2 + s % 4;
    const std::size_t m = 2 + (s / 4) % 4;
    sweep.push_back(vertex_instance(
        random_market(b, m, 0, 10, derive_seed(config.seed ^ 0x46444953ULL, s)),
        /*free_disposal=*/true));
  }
  const OnlineAlgorithm fd = greedy_free_disposal(false);
  const auto fd_eval = evaluate_sweep(sweep, fd);

  // Half pricing guarantees J >= lambda / 2 instance by instance.
  double worst_half_slack = std::numeric_limits<double>::infinity();
  std::optional<OnlineInstance> half_witness;
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    for (Mode mode : {Mode::kPost, Mode::kAnte, Mode::kAvg}) {
      const double slack = fd_eval[k].at(Metric::kNormSi, mode).value -
                           0.5 * fd_eval[k].at(Metric::kLambda, mode).value;
      if (slack < worst_half_slack) {
        worst_half_slack = slack;
        half_witness = sweep[k];
      }
    }
  }
  const bool half_ok = worst_half_slack >= -kSlack;

  std::vector<AdversaryRun> runs;
  std::size_t idx = 0;
  for (auto [W, l] : {std::pair<double, std::size_t>{10.0, 3}, {100.0, 5}}) {
    for (const OnlineAlgorithm& alg : {greedy_free_disposal(false), greedy_free_disposal(true)}) {
      const std::uint64_t s = derive_seed(config.seed, 1000 + idx++);
      OnlineInstance inst = build_adversary_full(alg, W, l, config.probe_trials, s);
      FullEvaluation eval =
          evaluate_all(inst, alg, Method::kMonteCarlo, config.trials, derive_seed(s, 1));
      runs.push_back({W, l, alg, std::move(inst), std::move(eval)});
    }
  }

  const std::string sweep_note =
      std::to_string(config.sweep) + " random free-disposal instances (surplus 0..10)";
  std::vector<TableCell> cells;

  TableCell post;
  post.metric = Metric::kKappa;
  post.mode = Mode::kPost;
  post.claim = "0";
  post.algorithm = fd.name + " (+random ties)";
  post.status = "verified-collapse";
  post.measured = 0.0;
  TableCell ante = post;
  ante.mode = Mode::kAnte;
  std::ostringstream post_detail;
  std::ostringstream ante_detail;
  for (const AdversaryRun& r : runs) {
    const Cell& kp = r.eval.at(Metric::kKappa, Mode::kPost);
    const Cell& ka = r.eval.at(Metric::kKappa, Mode::kAnte);
    const double se = ka.std_error.value_or(0.0);
    const double bound = 1.0 / r.W + std::pow(0.5, static_cast<double>(r.l)) + 3.0 * se;
    post.measured = std::max(post.measured, kp.value);
    if (ante.measured <= ka.value) {
      ante.measured = ka.value;
      ante.std_error = se;
    }
    const std::string tag = r.alg.name + " W=" + fmt(r.W) + " l=" + std::to_string(r.l);
    post_detail << tag << ": min kappa " << fmt(kp.value) << " <= 1/W " << fmt(1.0 / r.W)
                << "; ";
    ante_detail << tag << ": kappa_ante " << fmt(ka.value) << " <= " << fmt(bound) << "; ";
    if (kp.value > 1.0 / r.W + kSlack && !post.violated) {
      post.violated = true;
      post.witness = r.instance;
    }
    if (ka.value > bound + kSlack && !ante.violated) {
      ante.violated = true;
      ante.witness = r.instance;
    }
  }
  post.detail = "adversary: " + post_detail.str();
  ante.detail = "adversary: " + ante_detail.str();
  if (post.violated) post.status = "violated";
  if (ante.violated) ante.status = "violated";
  cells.push_back(post);
  cells.push_back(ante);
  cells.push_back(open_cell(Metric::kKappa, Mode::kAvg, fd.name,
                            sweep_min(sweep, fd_eval, Metric::kKappa, Mode::kAvg),
                            "empirical minimum; " + sweep_note));

  const std::string half_note =
      "J >= lambda/2 checked on every instance (worst slack " + fmt(worst_half_slack) + ")";
  auto half_cell = [&](Mode mode, std::string claim, double bound, bool estimate) {
    TableCell c = lower_bound_cell(Metric::kNormSi, mode, std::move(claim), bound, fd.name,
                                   sweep_min(sweep, fd_eval, Metric::kNormSi, mode),
                                   sweep_note + "; " + half_note);
    if (estimate && !c.violated) {
      c.status = "estimate";
      c.detail += "; the stated constant relies on an algorithm outside this suite";
    }
    if (!half_ok) {
      c.violated = true;
      c.status = "violated";
      c.witness = half_witness;
    }
    return c;
  };
  cells.push_back(half_cell(Mode::kPost, ">=1/4", 0.25, false));
  cells.push_back(half_cell(Mode::kAnte, ">=0.268", 0.25, true));
  cells.push_back(half_cell(Mode::kAvg, ">=0.268", 0.25, true));

  cells.push_back(lower_bound_cell(Metric::kLambda, Mode::kPost, "1/2", 0.5, fd.name,
                                   sweep_min(sweep, fd_eval, Metric::kLambda, Mode::kPost),
                                   sweep_note));
  for (Mode mode : {Mode::kAnte, Mode::kAvg}) {
    TableCell c = lower_bound_cell(Metric::kLambda, mode, ">=0.536", 0.5, fd.name,
                                   sweep_min(sweep, fd_eval, Metric::kLambda, mode),
                                   sweep_note +
                                       "; greedy measured against its own 1/2 bound; the "
                                       "stated constant relies on an algorithm outside "
                                       "this suite");
    if (!c.violated) c.status = "estimate";
    cells.push_back(c);
  }
  return cells;
}

}  // namespace

bool TablesResult::ok() const {
  for (const auto* table : {&vertex_weighted, &free_disposal}) {
    for (const TableCell& c : *table) {
      if (c.violated) return false;
    }
  }
  return true;
}

TablesResult compute_tables(const TablesConfig& config) {
  TablesResult r;
  r.vertex_weighted = vertex_weighted_table(config);
  r.free_disposal = free_disposal_table(config);
  return r;
}

std::string table_csv(const std::vector<TableCell>& cells) {
  std::ostringstream os;
  os << "metric,mode,claim,algorithm,measured,std_error,status,detail\n";
  for (const TableCell& c : cells) {
    os << to_string(c.metric) << ',' << to_string(c.mode) << ',' << c.claim << ','
       << c.algorithm << ',' << fmt(c.measured) << ','
       << (c.std_error ? fmt(*c.std_error) : std::string()) << ',' << c.status << ",\""
       << c.detail << "\"\n";
  }
  return os.str();
}

}  // namespace stablematch

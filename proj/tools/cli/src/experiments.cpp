// Copyright 2026 The truthsched Authors
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

#include "truthsched_cli/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>

#include "truthsched/lower_bounds.hpp"
#include "truthsched/ppf.hpp"
#include "truthsched/rng.hpp"
#include "truthsched/runner.hpp"

namespace truthsched::cli {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

StochasticSpec default_stream(Setting setting, Slot horizon) {
  StochasticSpec spec;
  spec.horizon = horizon;
  spec.setting = setting;
  if (setting == Setting::clairvoyant) {
    spec.machines = 2;
    spec.bounds = Bounds{4.0, 4, 3};
    spec.arrival_rate = 1.0;
    spec.values = {{1.0, 0.5}, {2.0, 0.3}, {4.0, 0.2}};
    spec.lengths = {{1, 0.5}, {2, 0.3}, {3, 0.2}};
    spec.slack = {{0, 0.5}, {1, 0.5}};
  } else {
    spec.machines = 1;
    spec.bounds = Bounds{4.0, 2, 2};
    spec.arrival_rate = 0.8;
    spec.values = {{1.0, 0.6}, {4.0, 0.4}};
    spec.lengths = {{1, 0.5}, {2, 0.5}};
    spec.slack = {{0, 0.4}, {1, 0.3}, {2, 0.3}};
  }
  return spec;
}

Instance make_instance(const InstanceSource& source, Slot horizon, std::uint64_t seed) {
  const std::string& k = source.kind;
  if (k == "stochastic") {
    StochasticSpec spec = default_stream(source.setting, horizon);
    if (source.arrival_rate) spec.arrival_rate = *source.arrival_rate;
    return gen_stochastic(spec, seed);
  }
  if (k == "clb") return gen_clairvoyant_lb(std::max<Slot>(1, horizon / 2), seed);
  if (k == "nclb") {
    const Slot rounds = std::max<Slot>(1, horizon / 8);
    const LossSequence base = source.losses.empty() ? LossSequence{{0.5, 0.5}} : source.losses;
    LossSequence losses;
    for (Slot i = 0; i < rounds; ++i) losses.push_back(base[static_cast<std::size_t>(i) % base.size()]);
    return gen_nc_lb(losses, seed);
  }
  if (k == "syncing") return gen_syncing_example(horizon, source.setting);
  if (k == "desk") return desk_corpus(source.setting, 1, seed).front();
  if (k == "file") return read_instance(source.path);
  throw UsageError("unknown instance kind '" + k + "'");
}

namespace {

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

}  // namespace

RegretRow regret_cell(const RegretConfig& cfg, Slot horizon, std::uint64_t seed) {
  if (!cfg.choice.combiner) throw UsageError("regret needs --combiner");
  const Instance inst = make_instance(cfg.source, horizon, derive_seed(seed, 0));
  MechanismHandle h = cfg.choice.factory(inst.setting)(derive_seed(seed, 1));
  RegretRow row;
  row.horizon = horizon;
  row.seed = seed;
  if (*cfg.choice.combiner == "fts") {
    auto& mech = h.clairvoyant();
    row.combiner = run_clairvoyant(*mech, inst).total;
    const auto& fts = dynamic_cast<const Fts&>(*mech);
    row.switches = static_cast<std::int64_t>(fts.log().switch_slots.size());
    for (const auto& d : cfg.choice.roster) {
      auto m = d.clairvoyant();
      row.members.push_back(run_clairvoyant(*m, inst).total);
    }
    row.best = *std::max_element(row.members.begin(), row.members.end());
  } else {
    auto& mech = h.non_clairvoyant();
    row.combiner = run_nonclairvoyant(*mech, inst).total;
    const auto& ftbs = dynamic_cast<const Ftbs&>(*mech);
    row.gamma = ftbs.gamma();
    row.switches = static_cast<std::int64_t>(ftbs.log().switch_slots.size());
    row.restarts = static_cast<std::int64_t>(ftbs.log().restart_slots.size());
    std::vector<NonClairvoyantHandle> members;
    for (const auto& d : cfg.choice.roster) members.push_back(d.non_clairvoyant());
    const BenchmarkEstimate est =
        restart_benchmark(members, row.gamma, inst, cfg.benchmark_samples, derive_seed(seed, 2));
    for (const MemberEstimate& e : est.members) row.members.push_back(e.mean);
    row.best = est.opt_bar;
  }
  row.regret = row.best - row.combiner;
  return row;
}

std::vector<RegretRow> regret_rows(const RegretConfig& cfg) {
  std::vector<Slot> horizons = cfg.horizons;
  std::vector<std::uint64_t> seeds = cfg.seeds;
  std::sort(horizons.begin(), horizons.end());
  horizons.erase(std::unique(horizons.begin(), horizons.end()), horizons.end());
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  std::vector<RegretRow> rows;
  for (Slot T : horizons) {
    for (std::uint64_t seed : seeds) rows.push_back(regret_cell(cfg, T, seed));
  }
  return rows;
}

void write_regret_csv(const RegretConfig& cfg, const std::vector<RegretRow>& rows, std::ostream& out) {
  out << "T,seed,gamma,combiner_welfare";
  for (std::size_t i = 0; i < cfg.choice.roster.size(); ++i) out << ",member_" << i;
  out << ",best,regret,switches,restarts\n";
  for (const RegretRow& r : rows) {
    out << r.horizon << ',' << r.seed << ',' << format_number(r.gamma) << ',' << format_number(r.combiner);
    for (double m : r.members) out << ',' << format_number(m);
    out << ',' << format_number(r.best) << ',' << format_number(r.regret) << ',' << r.switches << ','
        << r.restarts << '\n';
  }
}

ScalingFit fit_scaling(const std::vector<RegretRow>& rows) {
  std::map<Slot, std::vector<double>> by_t;
  for (const RegretRow& r : rows) by_t[r.horizon].push_back(r.regret);
  ScalingFit fit;
  bool positive = true;
  for (const auto& [T, regrets] : by_t) {
    fit.horizons.push_back(T);
    fit.mean_regret.push_back(mean_of(regrets));
    positive = positive && fit.mean_regret.back() > 0.0;
  }
  if (!positive || fit.horizons.size() < 2) return fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < fit.horizons.size(); ++k) {
    xs.push_back(std::log(static_cast<double>(fit.horizons[k])));
    ys.push_back(std::log(fit.mean_regret[k]));
  }
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  fit.slope = sxy / sxx;
  return fit;
}

std::vector<LbCheck> verify_nc_lower_bound() {
  std::vector<LbCheck> out;
  const double grid[] = {0.0, 0.25, 0.5, 1.0};
  for (double l1 : grid) {
    for (double l2 : grid) {
      const NcLbRoundValues v = nc_lb_expected_round_values(LossSequence(3, LossPair{l1, l2}));
      const std::string params = "l1=" + format_number(l1) + " l2=" + format_number(l2);
      out.push_back(LbCheck{"nclb-round-price1", params, 10.0 - 2.0 * l1, v.price1[1], v.price1[1] == 10.0 - 2.0 * l1});
      out.push_back(LbCheck{"nclb-round-price2", params, 10.0 - 2.0 * l2, v.price2[1], v.price2[1] == 10.0 - 2.0 * l2});
    }
  }
  const auto cases = nc_lb_switch_cases(4);
  double min_loss = cases.empty() ? 0.0 : cases.front().loss;
  for (const NcLbSwitchCase& c : cases) min_loss = std::min(min_loss, c.loss);
  out.push_back(LbCheck{"nclb-switch-loss", "cases=" + std::to_string(cases.size()), 6.0, min_loss,
                        !cases.empty() && min_loss >= 6.0});
  return out;
}

std::vector<LbCheck> verify_clairvoyant_lower_bound(std::int64_t rounds, const std::vector<std::uint64_t>& seeds) {
  std::vector<LbCheck> out;
  std::vector<double> per_round;
  bool exact1 = true;
  bool exact2 = true;
  for (std::uint64_t seed : seeds) {
    const Instance inst = gen_clairvoyant_lb(rounds, seed);
    PpfClairvoyant a1(1.0);
    PpfClairvoyant a2(2.0);
    const double w1 = run_clairvoyant(a1, inst).total;
    const double w2 = run_clairvoyant(a2, inst).total;
    std::int64_t third = 0;
    for (const JobType& j : inst.jobs) third += j.arrival % 2 == 0 ? 1 : 0;
    exact1 = exact1 && w1 == 3.0 * static_cast<double>(rounds);
    exact2 = exact2 && w2 == 2.0 * static_cast<double>(rounds) + 2.0 * static_cast<double>(third);
    per_round.push_back(w2 / static_cast<double>(rounds));
  }
  const std::string params = "rounds=" + std::to_string(rounds) + " seeds=" + std::to_string(seeds.size());
  out.push_back(LbCheck{"clb-price1-per-round", params, 3.0, 3.0, exact1});
  out.push_back(LbCheck{"clb-price2-exact", params, 1.0, exact2 ? 1.0 : 0.0, exact2});
  const double m = mean_of(per_round);
  double var = 0.0;
  for (double x : per_round) var += (x - m) * (x - m);
  const double n = static_cast<double>(per_round.size());
  const double se = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
  // Per-round values are 2 or 4 with equal odds: standard deviation 1.
  const double se_floor = 1.0 / std::sqrt(static_cast<double>(rounds) * n);
  out.push_back(LbCheck{"clb-price2-mean", params, 3.0, m, std::abs(m - 3.0) <= 3.0 * std::max(se, se_floor)});
  return out;
}

void write_lb_csv(const std::vector<LbCheck>& checks, std::ostream& out) {
  out << "check,params,expected,observed,ok\n";
  for (const LbCheck& c : checks) {
    out << c.name << ',' << c.params << ',' << format_number(c.expected) << ',' << format_number(c.observed) << ','
        << (c.ok ? "yes" : "no") << '\n';
  }
}

CheckReport run_truthcheck(const TruthcheckConfig& cfg) {
  CheckReport total;
  for (const Instance& inst : cfg.corpus) {
    const MechanismFactory factory = cfg.choice.factory(inst.setting);
    auto budgeted = [&] {
      CheckOptions o = cfg.options;
      o.budget = cfg.options.budget - total.reruns;
      return o;
    };
    if (cfg.truthful) total.merge(check_truthful(factory, inst, budgeted()));
    if (total.partial) break;
    if (cfg.order_respecting) total.merge(check_order_respecting(factory, inst, budgeted()));
    if (total.partial) break;
  }
  return total;
}

namespace {

std::string job_text(const JobType& j) {
  return std::to_string(j.arrival) + " " + std::to_string(j.deadline) + " " + std::to_string(j.length) + " " +
         format_number(j.value);
}

}  // namespace

void write_violations_csv(const CheckReport& report, std::ostream& out) {
  out << "check,seed,job,truth,report,deleted,utility_truth,utility_lie,detail\n";
  for (const Violation& v : report.violations) {
    out << v.check << ',' << v.seed << ',' << v.job << ',' << job_text(v.truth) << ',' << job_text(v.report) << ','
        << (v.deleted ? "yes" : "no") << ',' << format_number(v.utility_truth) << ','
        << format_number(v.utility_lie) << ',' << v.detail << '\n';
  }
}

}  // namespace truthsched::cli

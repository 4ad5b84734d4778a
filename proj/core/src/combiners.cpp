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

#include "truthsched/combiners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace truthsched {

Fts::Fts(std::vector<ClairvoyantHandle> roster, FtsConfig cfg) : roster_(std::move(roster)), cfg_(cfg) {
  if (roster_.empty()) throw std::invalid_argument("FTS needs a nonempty roster");
}

std::string Fts::name() const {
  std::string n = "fts(";
  for (std::size_t i = 0; i < roster_.size(); ++i) n += (i ? "," : "") + roster_[i]->name();
  return n + ")";
}

void Fts::reset(const Environment& env) {
  env_ = env;
  switching_cost_ = cfg_.switching_cost.value_or(2.0 * env.bounds.v_max * static_cast<double>(env.bounds.d_max) *
                                                 env.machines);
  sims_ = roster_;
  for (auto& s : sims_) s->reset(env);
  const double reward_bound = std::max(env.bounds.v_max * env.machines, 1e-12);
  learner_.emplace(static_cast<int>(roster_.size()),
                   LazyFplConfig{env.horizon, reward_bound, switching_cost_, cfg_.epsilon, cfg_.seed});
  current_ = learner_->choose();
  chain_ = roster_[static_cast<std::size_t>(current_)];
  chain_->reset(env);
  log_ = RunLog{};
  log_.member_welfare.assign(roster_.size(), WelfareSeries(env.horizon));
}

void Fts::begin_slot(Slot t) {
  if (t > 1) {
    std::vector<double> r(roster_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = log_.member_welfare[i].at(t - 1);
    learner_->feed(r);
    log_.rewards.resize(static_cast<std::size_t>(t - 1));
    log_.rewards.push_back(std::move(r));
    const int next = learner_->choose();
    if (next != current_) {
      current_ = next;
      chain_ = make_handle<SwitchClairvoyant>(SwitchClairvoyant::splice(
          std::move(chain_), sims_[static_cast<std::size_t>(next)], t, env_));
      log_.switch_slots.push_back(t);
    }
  }
  log_.choices.resize(static_cast<std::size_t>(t - 1), current_);
  log_.choices.push_back(current_);
  for (auto& s : sims_) s->begin_slot(t);
  chain_->begin_slot(t);
}

Decision Fts::on_arrival(const JobType& job) {
  for (std::size_t i = 0; i < sims_.size(); ++i) {
    const Decision d = sims_[i]->on_arrival(job);
    for (const Unit& u : d.units) log_.member_welfare[i].add(u.slot, job.value);
  }
  return chain_->on_arrival(job);
}

void Fts::encode(StateWriter& out) const {
  out.put(kind());
  out.put(current_);
  for (const auto& s : sims_) s->encode(out);
  chain_->encode(out);
  for (double c : learner_->cumulative()) out.put(c);
}

BatchRewards batch_rewards(const WelfareSeries& welfare, Slot t_prev, Slot t, Slot w) {
  if (t_prev >= t) throw std::invalid_argument("batch needs t' < t");
  BatchRewards b;
  for (Slot x = t_prev; x <= t - 1; ++x) {
    const double r = x <= t_prev + w ? 0.0 : welfare.at(x);
    b.per_slot.push_back(r);
    b.total += r;
  }
  return b;
}

double ftbs_default_gamma(const Environment& env, int arms) {
  const double n = arms;
  const double g = std::pow(static_cast<double>(env.sync_window()), -2.0 / 3.0) *
                   std::pow(static_cast<double>(env.horizon), -1.0 / 3.0) * std::cbrt(n * std::log(n));
  return std::clamp(g, 1e-12, 1.0);
}

Ftbs::Ftbs(std::vector<NonClairvoyantHandle> roster, FtbsConfig cfg) : roster_(std::move(roster)), cfg_(std::move(cfg)) {
  if (roster_.empty()) throw std::invalid_argument("FTBS needs a nonempty roster");
}

std::string Ftbs::name() const {
  std::string n = "ftbs(";
  for (std::size_t i = 0; i < roster_.size(); ++i) n += (i ? "," : "") + roster_[i]->name();
  return n + ")";
}

void Ftbs::reset(const Environment& env) {
  env_ = env;
  gamma_ = cfg_.gamma.value_or(ftbs_default_gamma(env, static_cast<int>(roster_.size())));
  coins_ = CoinSource(gamma_, derive_seed(cfg_.seed, 1));
  bandit_.emplace(make_doubling_exp3(static_cast<int>(roster_.size()), derive_seed(cfg_.seed, 2)));
  arm_ = bandit_->choose();
  core_.emplace(roster_[static_cast<std::size_t>(arm_)]);
  core_->reset(env);
  last_heads_ = 1;
  reported_value_.clear();
  running_.clear();
  log_ = RunLog{};
}

void Ftbs::step(Slot t, std::span<const JobId> finished, std::span<const NcReport> arrivals, NcEvents& out) {
  const bool heads = t <= env_.horizon && (cfg_.coin_override ? cfg_.coin_override(t, arrivals) : coins_.heads(t));
  if (heads) {
    log_.heads.push_back(t);
    if (t > last_heads_) {
      const BatchRewards b = batch_rewards(log_.own_welfare, last_heads_, t, env_.sync_window());
      bandit_->feed(arm_, b.total);
      log_.batches.push_back(BatchRecord{last_heads_, t - 1, arm_, b.total});
    }
    const int next = bandit_->choose();
    (next != arm_ ? log_.switch_slots : log_.restart_slots).push_back(t);
    arm_ = next;
    last_heads_ = t;
    core_->request_window(t, roster_[static_cast<std::size_t>(arm_)]);
  }
  for (JobId id : finished) running_.erase(id);
  for (const NcReport& r : arrivals) reported_value_[r.id] = r.value;

  const std::size_t first_start = out.starts.size();
  core_->step(t, finished, arrivals, out);
  for (std::size_t k = first_start; k < out.starts.size(); ++k) {
    running_[out.starts[k].id] = reported_value_.at(out.starts[k].id);
  }
  double w = 0.0;
  for (const auto& [id, v] : running_) w += v;
  log_.own_welfare.add(t, w);
  if (t <= env_.horizon) {
    log_.choices.resize(static_cast<std::size_t>(t - 1), arm_);
    log_.choices.push_back(arm_);
  }
}

void Ftbs::encode(StateWriter& out) const {
  out.put(kind());
  out.put(arm_);
  out.put(last_heads_);
  core_->encode(out);
}

BenchmarkEstimate restart_benchmark(const std::vector<NonClairvoyantHandle>& roster, double gamma,
                                    const Instance& inst, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("restart benchmark needs at least one sample");
  BenchmarkEstimate est;
  for (std::size_t i = 0; i < roster.size(); ++i) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int k = 0; k < samples; ++k) {
      const RestartConfig cfg{gamma, derive_seed(derive_seed(seed, i), static_cast<std::uint64_t>(k))};
      auto m = with_random_restarts(roster[i], cfg);
      const double w = run_nonclairvoyant(*m, inst).total;
      sum += w;
      sum_sq += w * w;
    }
    const double n = samples;
    MemberEstimate e;
    e.mean = sum / n;
    const double var = samples > 1 ? std::max(0.0, (sum_sq - n * e.mean * e.mean) / (n - 1.0)) : 0.0;
    e.standard_error = std::sqrt(var / n);
    est.members.push_back(e);
  }
  for (std::size_t i = 0; i < est.members.size(); ++i) {
    if (i == 0 || est.members[i].mean > est.opt_bar) {
      est.opt_bar = est.members[i].mean;
      est.best = static_cast<int>(i);
    }
  }
  return est;
}

}  // namespace truthsched

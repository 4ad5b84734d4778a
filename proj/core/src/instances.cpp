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

#include "truthsched/instances.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "truthsched/rng.hpp"

namespace truthsched {

void validate_losses(const LossSequence& losses) {
  for (std::size_t i = 0; i < losses.size(); ++i) {
    const auto& l = losses[i];
    if (!(l.first >= 0.0 && l.first <= 1.0 && l.second >= 0.0 && l.second <= 1.0)) {
      throw std::invalid_argument("loss pair " + std::to_string(i) + " outside [0, 1]");
    }
  }
}

namespace {

template <class T>
void check_distribution(const Weighted<T>& dist, const char* what) {
  if (dist.empty()) throw std::invalid_argument(std::string(what) + " distribution is empty");
  double total = 0.0;
  for (const auto& [x, w] : dist) {
    if (!(w >= 0.0)) throw std::invalid_argument(std::string(what) + " weight is negative");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument(std::string(what) + " weights sum to zero");
}

template <class T>
std::discrete_distribution<std::size_t> make_picker(const Weighted<T>& dist) {
  std::vector<double> w;
  for (const auto& p : dist) w.push_back(p.second);
  return std::discrete_distribution<std::size_t>(w.begin(), w.end());
}

void finalize(Instance& inst) {
  inst.sort_jobs();
  require_valid(inst);
}

}  // namespace

void validate_spec(const StochasticSpec& spec) {
  if (spec.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (spec.machines < 1) throw std::invalid_argument("machines must be >= 1");
  if (!(spec.arrival_rate >= 0.0)) throw std::invalid_argument("arrival rate must be non-negative");
  check_distribution(spec.values, "value");
  check_distribution(spec.lengths, "length");
  check_distribution(spec.slack, "slack");
  for (const auto& [v, w] : spec.values) {
    if (v < 0 || v > spec.bounds.v_max) throw std::invalid_argument("value support outside [0, v_max]");
  }
  for (const auto& [l, w] : spec.lengths) {
    if (l < 1 || l > spec.bounds.l_max) throw std::invalid_argument("length support outside [1, l_max]");
  }
  for (const auto& [s, w] : spec.slack) {
    if (s < 0) throw std::invalid_argument("slack support is negative");
    if (spec.setting == Setting::non_clairvoyant && s > spec.bounds.d_max) {
      throw std::invalid_argument("wait budget support exceeds d_max");
    }
  }
}

Instance gen_stochastic(const StochasticSpec& spec, std::uint64_t seed) {
  validate_spec(spec);
  Instance inst;
  inst.horizon = spec.horizon;
  inst.machines = spec.machines;
  inst.bounds = spec.bounds;
  inst.setting = spec.setting;
  if (spec.arrival_rate == 0.0) return inst;

  Rng rng(seed);
  std::poisson_distribution<int> arrivals(spec.arrival_rate);
  auto value = make_picker(spec.values);
  auto length = make_picker(spec.lengths);
  auto slack = make_picker(spec.slack);
  JobId next_id = 0;
  for (Slot t = 1; t <= spec.horizon; ++t) {
    const int k = arrivals(rng);
    for (int i = 0; i < k; ++i) {
      JobType j;
      j.id = next_id++;
      j.arrival = t;
      j.value = spec.values[value(rng)].first;
      j.length = spec.lengths[length(rng)].first;
      const Slot s = spec.slack[slack(rng)].first;
      if (spec.setting == Setting::clairvoyant) {
        j.deadline = std::min({t + j.length - 1 + s, t + spec.bounds.d_max - 1, spec.horizon});
      } else {
        j.deadline = s;
      }
      inst.jobs.push_back(j);
    }
  }
  finalize(inst);
  return inst;
}

Instance gen_clairvoyant_lb(std::int64_t rounds, std::uint64_t seed) {
  if (rounds < 1) throw std::invalid_argument("need at least one round");
  Instance inst;
  inst.horizon = 2 * rounds;
  inst.machines = 1;
  inst.bounds = Bounds{2.0, 2, 1};
  inst.setting = Setting::clairvoyant;
  for (std::int64_t i = 0; i < rounds; ++i) {
    const Slot t = 2 * i + 1;
    inst.jobs.push_back(JobType{3 * i, t, t, 1, 1.0});
    inst.jobs.push_back(JobType{3 * i + 1, t, t + 1, 1, 2.0});
    if (to_unit_open(derive_seed(seed, static_cast<std::uint64_t>(i))) < 0.5) {
      inst.jobs.push_back(JobType{3 * i + 2, t + 1, t + 1, 1, 2.0});
    }
  }
  finalize(inst);
  return inst;
}

double nc_lb_long_first_probability(const LossPair& loss) { return 0.5 + loss.first / 2.0; }
double nc_lb_long_third_probability(const LossPair& loss) { return loss.second; }

Instance nc_lb_instance(const std::vector<NcLbRound>& rounds) {
  if (rounds.empty()) throw std::invalid_argument("need at least one round");
  Instance inst;
  inst.horizon = 8 * static_cast<Slot>(rounds.size());
  inst.machines = 1;
  inst.bounds = Bounds{3.0, 0, 8};
  inst.setting = Setting::non_clairvoyant;
  for (std::size_t k = 0; k < rounds.size(); ++k) {
    const auto i = static_cast<std::int64_t>(k);
    inst.jobs.push_back(JobType{4 * i, 8 * i + 1, 0, rounds[k].long_first ? 8 : 6, 1.0});
    inst.jobs.push_back(JobType{4 * i + 1, 8 * i + 7, 0, 2, 3.0});
    if (i >= 1) {
      inst.jobs.push_back(JobType{4 * i + 2, 8 * i - 2, 0, rounds[k].long_third ? 4 : 2, 2.0});
      inst.jobs.push_back(JobType{4 * i + 3, 8 * i, 0, 2, 3.0});
    }
  }
  finalize(inst);
  return inst;
}

Instance gen_nc_lb(const LossSequence& losses, std::uint64_t seed) {
  validate_losses(losses);
  std::vector<NcLbRound> rounds;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    const double u1 = to_unit_open(derive_seed(seed, 2 * i));
    const double u2 = to_unit_open(derive_seed(seed, 2 * i + 1));
    rounds.push_back(NcLbRound{u1 < nc_lb_long_first_probability(losses[i]),
                               u2 < nc_lb_long_third_probability(losses[i])});
  }
  return nc_lb_instance(rounds);
}

Instance gen_syncing_example(Slot horizon, Setting setting) {
  if (horizon < 5) throw std::invalid_argument("syncing example needs T >= 5");
  Instance inst;
  inst.horizon = horizon;
  inst.machines = 1;
  inst.setting = setting;
  const Slot longest = std::max<Slot>(3, horizon - 4);
  const std::vector<std::pair<Slot, Slot>> al{{1, 3}, {3, 3}, {4, horizon - 4}};
  if (setting == Setting::clairvoyant) {
    inst.bounds = Bounds{1.0, longest, longest};
  } else {
    inst.bounds = Bounds{1.0, 0, longest};
  }
  JobId id = 1;
  for (const auto& [a, l] : al) {
    const Slot d = setting == Setting::clairvoyant ? a + l - 1 : 0;
    inst.jobs.push_back(JobType{id++, a, d, l, 1.0});
  }
  finalize(inst);
  return inst;
}

Instance random_instance(const RandomInstanceParams& p, std::uint64_t seed) {
  Rng rng(seed);
  auto uniform = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  Instance inst;
  inst.setting = p.setting;
  inst.horizon = uniform(std::min<Slot>(5, p.max_horizon), p.max_horizon);
  inst.machines = static_cast<int>(uniform(1, p.max_machines));
  inst.bounds = Bounds{p.v_max, p.d_max, p.l_max};
  const auto n = uniform(1, p.max_jobs);
  std::vector<JobId> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), JobId{0});
  std::shuffle(ids.begin(), ids.end(), rng);
  for (JobId id : ids) {
    JobType j;
    j.id = id;
    j.arrival = uniform(1, inst.horizon);
    j.length = uniform(1, p.l_max);
    j.value = p.v_max * static_cast<double>(uniform(0, p.value_levels)) / p.value_levels;
    if (p.setting == Setting::clairvoyant) {
      j.deadline = std::min(j.arrival + uniform(0, p.d_max - 1), inst.horizon);
    } else {
      j.deadline = uniform(0, p.d_max);
    }
    inst.jobs.push_back(j);
  }
  finalize(inst);
  return inst;
}

std::vector<Instance> desk_corpus(Setting setting, int count, std::uint64_t seed) {
  RandomInstanceParams p;
  p.setting = setting;
  p.max_horizon = 20;
  p.max_jobs = 6;
  p.max_machines = 2;
  p.v_max = 4.0;
  p.value_levels = 4;
  p.d_max = setting == Setting::clairvoyant ? 5 : 3;
  p.l_max = 3;
  std::vector<Instance> out;
  for (int k = 0; k < count; ++k) out.push_back(random_instance(p, derive_seed(seed, static_cast<std::uint64_t>(k))));
  return out;
}

ParseError::ParseError(std::int64_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

void write_instance(const Instance& inst, std::ostream& out) {
  nlohmann::ordered_json header;
  header["T"] = inst.horizon;
  header["m"] = inst.machines;
  header["v_max"] = inst.bounds.v_max;
  header["d_max"] = inst.bounds.d_max;
  header["l_max"] = inst.bounds.l_max;
  header["setting"] = std::string(to_string(inst.setting));
  out << header.dump() << '\n';
  for (const JobType& j : inst.jobs) {
    nlohmann::ordered_json rec;
    rec["id"] = j.id;
    rec["a"] = j.arrival;
    rec["d"] = j.deadline;
    rec["l"] = j.length;
    rec["v"] = j.value;
    out << rec.dump() << '\n';
  }
}

void write_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_instance(inst, out);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

template <class T>
T field(const nlohmann::json& rec, const char* key, std::int64_t line) {
  if (!rec.contains(key)) throw ParseError(line, std::string("missing field '") + key + "'");
  try {
    return rec.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(line, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

Instance read_instance(std::istream& in) {
  Instance inst;
  bool have_header = false;
  std::string text;
  std::int64_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line, std::string("malformed record: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(line, "record is not an object");
    const bool is_header = rec.contains("T");
    if (!have_header) {
      if (!is_header) throw ParseError(line, "job record before the header");
      inst.horizon = field<Slot>(rec, "T", line);
      inst.machines = field<int>(rec, "m", line);
      inst.bounds.v_max = field<Value>(rec, "v_max", line);
      inst.bounds.d_max = field<Slot>(rec, "d_max", line);
      inst.bounds.l_max = field<Slot>(rec, "l_max", line);
      if (rec.contains("setting")) {
        try {
          inst.setting = parse_setting(field<std::string>(rec, "setting", line));
        } catch (const std::invalid_argument& e) {
          throw ParseError(line, e.what());
        }
      }
      have_header = true;
      continue;
    }
    if (is_header) throw ParseError(line, "second header record");
    inst.jobs.push_back(JobType{field<JobId>(rec, "id", line), field<Slot>(rec, "a", line),
                                field<Slot>(rec, "d", line), field<Slot>(rec, "l", line),
                                field<Value>(rec, "v", line)});
  }
  if (!have_header) throw ParseError(line + 1, "missing header record");
  require_valid(inst);
  return inst;
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_instance(in);
}

LossSequence read_losses(std::istream& in) {
  LossSequence out;
  std::string text;
  std::int64_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;
    std::istringstream row(text);
    LossPair p;
    std::string extra;
    if (!(row >> p.first >> p.second) || (row >> extra)) throw ParseError(line, "expected two losses");
    if (!(p.first >= 0.0 && p.first <= 1.0 && p.second >= 0.0 && p.second <= 1.0)) {
      throw ParseError(line, "loss outside [0, 1]");
    }
    out.push_back(p);
  }
  return out;
}

LossSequence read_losses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_losses(in);
}

}  // namespace truthsched

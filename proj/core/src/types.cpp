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

#include "truthsched/types.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace truthsched {

std::string_view to_string(Setting setting) {
  return setting == Setting::clairvoyant ? "clairvoyant" : "non-clairvoyant";
}

Setting parse_setting(std::string_view text) {
  if (text == "clairvoyant" || text == "c") return Setting::clairvoyant;
  if (text == "non-clairvoyant" || text == "nonclairvoyant" || text == "nc") {
    return Setting::non_clairvoyant;
  }
  throw std::invalid_argument("unknown setting '" + std::string(text) + "'");
}

const JobType* Instance::find(JobId id) const {
  auto it = std::find_if(jobs.begin(), jobs.end(), [id](const JobType& j) { return j.id == id; });
  return it == jobs.end() ? nullptr : &*it;
}

const JobType& Instance::job(JobId id) const {
  if (const JobType* j = find(id)) return *j;
  throw std::out_of_range("no job with id " + std::to_string(id));
}

void Instance::sort_jobs() { std::stable_sort(jobs.begin(), jobs.end(), arrives_before); }

namespace {

std::string job_prefix(const JobType& j) { return "job " + std::to_string(j.id) + ": "; }

}  // namespace

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> out;
  if (inst.horizon < 1) out.push_back("horizon must be >= 1");
  if (inst.machines < 1) out.push_back("machines must be >= 1");
  if (inst.bounds.v_max < 0) out.push_back("v_max must be >= 0");
  if (inst.bounds.l_max < 1) out.push_back("l_max must be >= 1");
  const Slot min_d_max = inst.setting == Setting::clairvoyant ? 1 : 0;
  if (inst.bounds.d_max < min_d_max) {
    out.push_back("d_max must be >= " + std::to_string(min_d_max));
  }

  std::set<JobId> ids;
  bool duplicate = false;
  for (const JobType& j : inst.jobs) {
    if (!ids.insert(j.id).second) duplicate = true;
    const std::string p = job_prefix(j);
    if (j.arrival < 1 || j.arrival > inst.horizon) out.push_back(p + "arrival outside [1, T]");
    if (j.length < 1) out.push_back(p + "length below 1");
    if (j.length > inst.bounds.l_max) out.push_back(p + "length exceeds l_max");
    if (j.value < 0) out.push_back(p + "value is negative");
    if (j.value > inst.bounds.v_max) out.push_back(p + "value exceeds v_max");
    if (inst.setting == Setting::clairvoyant) {
      if (j.deadline < j.arrival) out.push_back(p + "deadline before arrival");
      if (j.deadline > inst.horizon) out.push_back(p + "deadline outside [1, T]");
      if (j.deadline - j.arrival + 1 > inst.bounds.d_max) out.push_back(p + "window exceeds d_max");
    } else {
      if (j.deadline < 0) out.push_back(p + "wait budget is negative");
      if (j.deadline > inst.bounds.d_max) out.push_back(p + "wait budget exceeds d_max");
    }
  }
  if (duplicate) out.push_back("ids not unique");
  if (!std::is_sorted(inst.jobs.begin(), inst.jobs.end(), arrives_before)) {
    out.push_back("jobs not sorted by (arrival, id)");
  }
  return out;
}

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::ostringstream os;
  os << "invalid instance";
  for (const auto& s : v) os << "; " << s;
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

void require_valid(const Instance& inst) {
  auto v = validate_instance(inst);
  if (!v.empty()) throw ValidationError(std::move(v));
}

}  // namespace truthsched

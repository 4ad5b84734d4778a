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

#include "truthsched_cli/descriptors.hpp"

#include <charconv>
#include <limits>

#include "truthsched/ppf.hpp"

namespace truthsched::cli {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view text, std::string_view what) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw UsageError("bad " + std::string(what) + " '" + s + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

std::optional<Setting> parse_setting_tag(std::string_view tag) {
  try {
    return parse_setting(tag);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace

Setting MechanismDescriptor::resolve(Setting instance_setting) const {
  const Setting s = setting.value_or(instance_setting);
  if (s != instance_setting) {
    throw UsageError("mechanism '" + text + "' is " + std::string(to_string(s)) + " but the instance is " +
                     std::string(to_string(instance_setting)));
  }
  return s;
}

ClairvoyantHandle MechanismDescriptor::clairvoyant() const {
  if (kind == "ppf") return make_handle<PpfClairvoyant>(price);
  if (kind == "first-price") return make_handle<FirstPriceClairvoyant>();
  throw UsageError("mechanism '" + text + "' has no clairvoyant variant");
}

NonClairvoyantHandle MechanismDescriptor::non_clairvoyant() const {
  if (kind == "ppf") return make_handle<PpfNonClairvoyant>(price);
  if (kind == "repricing") return make_handle<RepricingNonClairvoyant>(price);
  throw UsageError("mechanism '" + text + "' has no non-clairvoyant variant");
}

MechanismHandle MechanismDescriptor::make(Setting instance_setting) const {
  const Setting s = resolve(instance_setting);
  if (s == Setting::clairvoyant) return MechanismHandle(clairvoyant(), price);
  return MechanismHandle(non_clairvoyant(), price);
}

MechanismDescriptor parse_mechanism(std::string_view text) {
  const auto parts = split(text, ':');
  MechanismDescriptor d;
  d.text = std::string(text);
  d.kind = std::string(parts[0]);
  if (d.kind == "first-price") {
    if (parts.size() != 1) throw UsageError("first-price takes no parameters");
    d.setting = Setting::clairvoyant;
    return d;
  }
  if (d.kind != "ppf" && d.kind != "repricing") {
    throw UsageError("unknown mechanism '" + std::string(text) + "'");
  }
  bool have_price = false;
  for (std::size_t k = 1; k < parts.size(); ++k) {
    std::string_view p = parts[k];
    if (auto s = parse_setting_tag(p)) {
      if (d.setting) throw UsageError("setting given twice in '" + d.text + "'");
      d.setting = s;
      continue;
    }
    if (p.substr(0, 6) == "price=") p.remove_prefix(6);
    if (have_price) throw UsageError("price given twice in '" + d.text + "'");
    d.price = parse_number(p, "price");
    have_price = true;
  }
  if (!have_price) throw UsageError("mechanism '" + d.text + "' needs a price");
  if (d.price < 0) throw UsageError("price must be non-negative in '" + d.text + "'");
  if (d.kind == "repricing") {
    if (d.setting == Setting::clairvoyant) throw UsageError("repricing is non-clairvoyant only");
    d.setting = Setting::non_clairvoyant;
  }
  return d;
}

std::vector<MechanismDescriptor> parse_roster(std::string_view text) {
  std::vector<MechanismDescriptor> out;
  for (std::string_view part : split(text, ',')) {
    if (part.empty()) throw UsageError("empty roster entry in '" + std::string(text) + "'");
    out.push_back(parse_mechanism(part));
  }
  return out;
}

LearnerDescriptor parse_learner(std::string_view text) {
  const auto parts = split(text, ':');
  LearnerDescriptor d;
  d.text = std::string(text);
  d.kind = std::string(parts[0]);
  if (d.kind == "exp3") {
    if (parts.size() > 2 || (parts.size() == 2 && parts[1] != "doubling")) {
      throw UsageError("only 'exp3:doubling' is supported: the bandit inside FTBS must not need T or R");
    }
    return d;
  }
  if (d.kind != "lazy-fpl") throw UsageError("unknown learner '" + d.text + "'");
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const std::string_view p = parts[k];
    if (p.substr(0, 2) == "C=") {
      d.switching_cost = parse_number(p.substr(2), "switching cost");
      if (*d.switching_cost < 0) throw UsageError("switching cost must be non-negative");
    } else if (p.substr(0, 4) == "eps=") {
      d.epsilon = parse_number(p.substr(4), "epsilon");
      if (*d.epsilon <= 0) throw UsageError("epsilon must be positive");
    } else {
      throw UsageError("unknown learner parameter '" + std::string(p) + "'");
    }
  }
  return d;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> out;
  for (std::string_view part : split(text, ',')) {
    const std::size_t dots = part.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_unsigned(part, "seed"));
      continue;
    }
    const std::uint64_t lo = parse_unsigned(part.substr(0, dots), "seed");
    const std::uint64_t hi = parse_unsigned(part.substr(dots + 2), "seed");
    if (hi < lo) throw UsageError("empty seed range '" + std::string(part) + "'");
    if (hi - lo >= 10'000'000) throw UsageError("seed range too large '" + std::string(part) + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw UsageError("seed list is empty");
  return out;
}

std::vector<Slot> parse_horizons(std::string_view text) {
  std::vector<Slot> out;
  for (std::string_view part : split(text, ',')) {
    const std::uint64_t v = parse_unsigned(part, "horizon");
    if (v < 1 || v > static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max())) {
      throw UsageError("horizon out of range '" + std::string(part) + "'");
    }
    out.push_back(static_cast<Slot>(v));
  }
  return out;
}

std::string MechanismChoice::label() const {
  if (!combiner) return roster.front().text;
  std::string s = *combiner + "(";
  for (std::size_t i = 0; i < roster.size(); ++i) s += (i ? "," : "") + roster[i].text;
  return s + ")";
}

std::optional<Setting> MechanismChoice::setting() const {
  if (combiner) return *combiner == "fts" ? Setting::clairvoyant : Setting::non_clairvoyant;
  return roster.front().setting;
}

MechanismFactory MechanismChoice::factory(Setting instance_setting) const {
  if (const auto s = setting(); s && *s != instance_setting) {
    throw UsageError(label() + " is " + std::string(to_string(*s)) + " but the instance is " +
                     std::string(to_string(instance_setting)));
  }
  if (!combiner) {
    const MechanismHandle proto = roster.front().make(instance_setting);
    return [proto](std::uint64_t) { return proto; };
  }
  if (*combiner == "fts") {
    std::vector<ClairvoyantHandle> members;
    for (const auto& d : roster) members.push_back(d.make(instance_setting).clairvoyant());
    FtsConfig cfg;
    if (learner) {
      cfg.switching_cost = learner->switching_cost;
      cfg.epsilon = learner->epsilon;
    }
    return [members, cfg](std::uint64_t seed) {
      FtsConfig c = cfg;
      c.seed = seed;
      return MechanismHandle(make_handle<Fts>(members, c));
    };
  }
  std::vector<NonClairvoyantHandle> members;
  for (const auto& d : roster) members.push_back(d.make(instance_setting).non_clairvoyant());
  const std::optional<double> g = gamma;
  return [members, g](std::uint64_t seed) {
    return MechanismHandle(make_handle<Ftbs>(members, FtbsConfig{g, seed, {}}));
  };
}

MechanismChoice make_choice(const std::optional<std::string>& mech, const std::optional<std::string>& combiner,
                            const std::optional<std::string>& roster, const std::optional<std::string>& learner,
                            std::optional<double> gamma) {
  MechanismChoice c;
  if (mech && combiner) throw UsageError("give either --mech or --combiner, not both");
  if (mech) {
    if (roster) throw UsageError("--roster needs --combiner");
    c.roster.push_back(parse_mechanism(*mech));
    return c;
  }
  if (!combiner) throw UsageError("missing --mech or --combiner");
  if (*combiner != "fts" && *combiner != "ftbs") throw UsageError("unknown combiner '" + *combiner + "'");
  if (!roster) throw UsageError("missing --roster for combiner " + *combiner);
  c.combiner = *combiner;
  c.roster = parse_roster(*roster);
  const Setting s = *c.setting();
  for (const auto& d : c.roster) static_cast<void>(d.resolve(s));  // throws on a mismatch
  if (learner) {
    c.learner = parse_learner(*learner);
    if (*combiner == "fts" && c.learner->kind != "lazy-fpl") throw UsageError("fts uses a lazy-fpl learner");
    if (*combiner == "ftbs" && c.learner->kind != "exp3") throw UsageError("ftbs uses the exp3:doubling bandit");
  }
  if (gamma) {
    if (*combiner != "ftbs") throw UsageError("--gamma applies to ftbs only");
    if (*gamma < 0 || *gamma > 1) throw UsageError("gamma must lie in [0, 1]");
    c.gamma = gamma;
  }
  return c;
}

}  // namespace truthsched::cli

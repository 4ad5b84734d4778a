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

#include "truthsched_cli/app.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <optional>
#include <sstream>

#include "truthsched/instances.hpp"
#include "truthsched/runner.hpp"
#include "truthsched_cli/descriptors.hpp"
#include "truthsched_cli/experiments.hpp"

namespace truthsched::cli {
namespace {

namespace fs = std::filesystem;

fs::path resolve_output(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') p = fs::path(dir) / p;
  }
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

/// Writes `text` to the -o file when given, else to `out`.
void emit(const std::string& text, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    out << text;
    return;
  }
  const fs::path p = resolve_output(output);
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + p.string());
}

bool is_generator(const std::string& name) {
  return name == "stochastic" || name == "clb" || name == "nclb" || name == "syncing" || name == "desk";
}

LossSequence loss_flags(const std::string& loss, const std::string& losses_file) {
  if (!losses_file.empty()) {
    if (!fs::exists(losses_file)) throw UsageError("loss file not found: " + losses_file);
    return read_losses(fs::path(losses_file));
  }
  if (loss.empty()) return {};
  std::istringstream in(loss);
  std::string a;
  std::string b;
  if (!std::getline(in, a, ',') || !std::getline(in, b)) throw UsageError("--loss takes 'l1,l2'");
  try {
    LossSequence seq{{std::stod(a), std::stod(b)}};
    validate_losses(seq);
    return seq;
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad --loss: ") + e.what());
  }
}

int cmd_gen(const std::string& kind, Slot T, std::uint64_t seed, const std::string& setting, const std::string& loss,
            const std::string& losses_file, std::optional<double> rate, const std::string& output, std::ostream& out) {
  if (!is_generator(kind)) throw UsageError("unknown --kind '" + kind + "'");
  InstanceSource src;
  src.kind = kind;
  src.setting = parse_setting(setting);
  src.losses = loss_flags(loss, losses_file);
  src.arrival_rate = rate;
  std::ostringstream buf;
  write_instance(make_instance(src, T, seed), buf);
  emit(buf.str(), output, out);
  return kExitClean;
}

}  // namespace

int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"truthful online job scheduling simulator", "truthsched"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "truthsched 0.1.0");

  std::string output;
  std::string setting = "clairvoyant";
  std::uint64_t seed = 0;
  Slot horizon = 100;
  std::string loss;
  std::string losses_file;
  double rate = -1.0;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  std::string kind = "stochastic";
  gen->add_option("--kind", kind, "stochastic, clb, nclb, syncing or desk")->capture_default_str();
  gen->add_option("--T", horizon, "Horizon in slots")->capture_default_str();
  gen->add_option("--seed", seed, "Generator seed")->capture_default_str();
  gen->add_option("--setting", setting, "clairvoyant or nc")->capture_default_str();
  gen->add_option("--loss", loss, "Constant loss pair 'l1,l2' (nclb)");
  gen->add_option("--losses", losses_file, "Loss file, one 'l1 l2' per line (nclb)");
  gen->add_option("--rate", rate, "Arrival rate (stochastic)");
  gen->add_option("-o,--output", output, "Output file (stdout when omitted)");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run a mechanism or combiner on one instance");
  std::string mech;
  std::string combiner;
  std::string roster;
  std::string learner;
  std::string gamma_text = "auto";
  std::string instance = "stochastic";
  Slot start = 1;
  run_cmd->add_option("--mech", mech, "Mechanism descriptor, e.g. ppf:1 or ppf:2:nc");
  run_cmd->add_option("--combiner", combiner, "fts or ftbs");
  run_cmd->add_option("--roster", roster, "Comma-separated mechanism descriptors");
  run_cmd->add_option("--learner", learner, "lazy-fpl[:C=..][:eps=..] or exp3:doubling");
  run_cmd->add_option("--gamma", gamma_text, "FTBS restart probability or 'auto'")->capture_default_str();
  run_cmd->add_option("--instance", instance, "Instance file or generator name")->capture_default_str();
  run_cmd->add_option("--T", horizon, "Horizon for generated instances")->capture_default_str();
  run_cmd->add_option("--seed", seed, "Instance and coin seed")->capture_default_str();
  run_cmd->add_option("--setting", setting, "Setting for generated instances")->capture_default_str();
  run_cmd->add_option("--start", start, "First simulated slot")->capture_default_str();
  run_cmd->add_option("--loss", loss, "Constant loss pair 'l1,l2' (nclb)");
  run_cmd->add_option("--losses", losses_file, "Loss file (nclb)");
  run_cmd->add_option("-o,--output", output, "Output file (stdout when omitted)");

  // regret
  auto* regret = app.add_subcommand("regret", "Regret of a combiner against its best roster member");
  std::string gen_kind = "stochastic";
  std::string horizons = "1024";
  std::string seeds = "1";
  int samples = 20;
  regret->add_option("--combiner", combiner, "fts or ftbs");
  regret->add_option("--roster", roster, "Comma-separated mechanism descriptors");
  regret->add_option("--learner", learner, "lazy-fpl[:C=..][:eps=..] or exp3:doubling");
  regret->add_option("--gamma", gamma_text, "FTBS restart probability or 'auto'")->capture_default_str();
  regret->add_option("--gen", gen_kind, "stochastic, clb, nclb, syncing or desk")->capture_default_str();
  regret->add_option("--T", horizons, "Comma-separated horizons")->capture_default_str();
  regret->add_option("--seeds", seeds, "Seed list, e.g. 1..50 or 1,2,7")->capture_default_str();
  regret->add_option("--samples", samples, "Restart samples per member for the FTBS benchmark")->capture_default_str();
  regret->add_option("--loss", loss, "Constant loss pair 'l1,l2' (nclb)");
  regret->add_option("--losses", losses_file, "Loss file (nclb)");
  regret->add_option("--rate", rate, "Arrival rate (stochastic)");
  regret->add_option("-o,--output", output, "Output CSV (stdout when omitted)");

  // truthcheck
  auto* truth = app.add_subcommand("truthcheck", "Search for profitable misreports and order dependence");
  std::string corpus = "small";
  std::string budget_text = "1e6";
  std::string check = "both";
  std::uint64_t corpus_seed = 2026;
  std::string coin_seeds = "0";
  truth->add_option("--mech", mech, "Mechanism descriptor");
  truth->add_option("--combiner", combiner, "fts or ftbs");
  truth->add_option("--roster", roster, "Comma-separated mechanism descriptors");
  truth->add_option("--learner", learner, "lazy-fpl[:C=..][:eps=..] or exp3:doubling");
  truth->add_option("--gamma", gamma_text, "FTBS restart probability or 'auto'")->capture_default_str();
  truth->add_option("--corpus", corpus, "'small' (50 desk instances), a count, or an instance file")
      ->capture_default_str();
  truth->add_option("--corpus-seed", corpus_seed, "Seed of the generated corpus")->capture_default_str();
  truth->add_option("--setting", setting, "Setting of the corpus when the mechanism does not fix it")
      ->capture_default_str();
  truth->add_option("--seeds", coin_seeds, "Coin seeds for randomized mechanisms")->capture_default_str();
  truth->add_option("--budget", budget_text, "Maximum number of reruns")->capture_default_str();
  truth->add_option("--check", check, "truthful, order or both")->capture_default_str();
  truth->add_option("-o,--output", output, "Violations CSV (stdout when omitted)");

  // lb-verify
  auto* lb = app.add_subcommand("lb-verify", "Check the lower-bound constructions");
  std::string lb_kind = "all";
  std::int64_t rounds = 1000;
  std::string lb_seeds = "1..20";
  lb->add_option("--kind", lb_kind, "nclb, clb or all")->capture_default_str();
  lb->add_option("--rounds", rounds, "Rounds per clairvoyant instance")->capture_default_str();
  lb->add_option("--seeds", lb_seeds, "Seeds for the clairvoyant check")->capture_default_str();
  lb->add_option("-o,--output", output, "Output CSV (stdout when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitClean;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitClean;
  } catch (const CLI::CallForVersion&) {
    out << "truthsched 0.1.0\n";
    return kExitClean;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  auto given = [](CLI::App* sub, const std::string& name, const std::string& value) {
    return sub->count(name) > 0 ? std::optional<std::string>(value) : std::nullopt;
  };
  auto parse_gamma = [](const std::string& text) -> std::optional<double> {
    if (text == "auto") return std::nullopt;
    try {
      std::size_t used = 0;
      const double g = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return g;
    } catch (const std::exception&) {
      throw UsageError("bad --gamma '" + text + "'");
    }
  };

  try {
    if (gen->parsed()) {
      return cmd_gen(kind, horizon, seed, setting, loss, losses_file, rate >= 0 ? std::optional<double>(rate) : std::nullopt,
                     output, out);
    }
    if (run_cmd->parsed()) {
      const MechanismChoice choice =
          make_choice(given(run_cmd, "--mech", mech), given(run_cmd, "--combiner", combiner),
                      given(run_cmd, "--roster", roster), given(run_cmd, "--learner", learner),
                      run_cmd->count("--gamma") > 0 ? parse_gamma(gamma_text) : std::nullopt);
      InstanceSource src;
      if (is_generator(instance)) {
        src.kind = instance;
      } else {
        if (!fs::exists(instance)) throw UsageError("instance file not found: " + instance);
        src.kind = "file";
        src.path = instance;
      }
      src.setting = choice.setting().value_or(parse_setting(setting));
      src.losses = loss_flags(loss, losses_file);
      const Instance inst = make_instance(src, horizon, seed);
      const MechanismHandle h = choice.factory(inst.setting)(seed);
      const RunResult r = run(h, inst, RunOptions{start, true});
      std::int64_t served = static_cast<std::int64_t>(served_jobs(r.allocation, inst).size());
      double payments = 0.0;
      for (const JobType& j : inst.jobs) payments += r.allocation.outcome(j.id).payment;
      std::ostringstream buf;
      buf << "mechanism,instance,T,seed,start,jobs,served,welfare,payments\n";
      buf << choice.label() << ',' << instance << ',' << inst.horizon << ',' << seed << ',' << start << ','
          << inst.jobs.size() << ',' << served << ',' << format_number(r.total) << ',' << format_number(payments)
          << '\n';
      emit(buf.str(), output, out);
      return kExitClean;
    }
    if (regret->parsed()) {
      RegretConfig cfg;
      cfg.choice = make_choice(std::nullopt, given(regret, "--combiner", combiner), given(regret, "--roster", roster),
                               given(regret, "--learner", learner),
                               regret->count("--gamma") > 0 ? parse_gamma(gamma_text) : std::nullopt);
      if (!is_generator(gen_kind)) throw UsageError("unknown --gen '" + gen_kind + "'");
      cfg.source.kind = gen_kind;
      cfg.source.setting = *cfg.choice.setting();
      cfg.source.losses = loss_flags(loss, losses_file);
      if (rate >= 0) cfg.source.arrival_rate = rate;
      cfg.horizons = parse_horizons(horizons);
      cfg.seeds = parse_seeds(seeds);
      if (samples < 1) throw UsageError("--samples must be at least 1");
      cfg.benchmark_samples = samples;
      std::ostringstream buf;
      write_regret_csv(cfg, regret_rows(cfg), buf);
      emit(buf.str(), output, out);
      return kExitClean;
    }
    if (truth->parsed()) {
      TruthcheckConfig cfg;
      cfg.choice = make_choice(given(truth, "--mech", mech), given(truth, "--combiner", combiner),
                               given(truth, "--roster", roster), given(truth, "--learner", learner),
                               truth->count("--gamma") > 0 ? parse_gamma(gamma_text) : std::nullopt);
      const Setting s = cfg.choice.setting().value_or(parse_setting(setting));
      if (corpus == "small") {
        cfg.corpus = desk_corpus(s, 50, corpus_seed);
      } else if (!corpus.empty() && corpus.find_first_not_of("0123456789") == std::string::npos) {
        cfg.corpus = desk_corpus(s, std::stoi(corpus), corpus_seed);
      } else {
        if (!fs::exists(corpus)) throw UsageError("corpus file not found: " + corpus);
        cfg.corpus.push_back(read_instance(fs::path(corpus)));
      }
      double budget = 0.0;
      try {
        budget = std::stod(budget_text);
      } catch (const std::exception&) {
        throw UsageError("bad --budget '" + budget_text + "'");
      }
      if (budget < 1) throw UsageError("--budget must be at least 1");
      cfg.options.budget = static_cast<std::int64_t>(budget);
      cfg.options.seeds = parse_seeds(coin_seeds);
      if (check != "both" && check != "truthful" && check != "order") throw UsageError("bad --check '" + check + "'");
      cfg.truthful = check != "order";
      cfg.order_respecting = check != "truthful";
      const CheckReport report = run_truthcheck(cfg);
      if (!report.violations.empty()) {
        std::ostringstream buf;
        write_violations_csv(report, buf);
        emit(buf.str(), output, out);
      }
      out << report.violations.size() << " violations (" << report.reruns << " reruns"
          << (report.partial ? ", budget exhausted" : "") << ")\n";
      return report.violations.empty() ? kExitClean : kExitViolations;
    }
    if (lb->parsed()) {
      if (lb_kind != "all" && lb_kind != "nclb" && lb_kind != "clb") throw UsageError("bad --kind '" + lb_kind + "'");
      if (rounds < 1) throw UsageError("--rounds must be at least 1");
      std::vector<LbCheck> checks;
      if (lb_kind != "clb") checks = verify_nc_lower_bound();
      if (lb_kind != "nclb") {
        auto c = verify_clairvoyant_lower_bound(rounds, parse_seeds(lb_seeds));
        checks.insert(checks.end(), c.begin(), c.end());
      }
      std::ostringstream buf;
      write_lb_csv(checks, buf);
      emit(buf.str(), output, out);
      const bool ok = std::all_of(checks.begin(), checks.end(), [](const LbCheck& c) { return c.ok; });
      return ok ? kExitClean : kExitViolations;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace truthsched::cli

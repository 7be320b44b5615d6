#include "countstable/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "countstable/errors.hpp"
#include "countstable/pmf.hpp"

namespace countstable::cli {

namespace {

struct RawFlags {
  double alpha = 0, delta = 0, gamma = 0, lambda = 0, theta = 0, mu = 0, sigma2 = 0;
  std::size_t max_k = 0;
  std::string n_list;
  std::uint64_t seed = kDefaultSeed;
  std::size_t count = 1000;
  std::size_t grid_points = 21;
  std::string format = "csv";
  double tol = kPmfTolerance;
};

struct FlagSet {
  std::map<std::string, CLI::Option*> opts;
  bool given(const std::string& name) const { return opts.at(name)->count() > 0; }
};

FlagSet add_flags(CLI::App& sub, RawFlags& f) {
  FlagSet s;
  s.opts["--alpha"] = sub.add_option("--alpha", f.alpha, "stability index in (0,2]");
  s.opts["--delta"] = sub.add_option("--delta", f.delta, "linear APGF coefficient");
  s.opts["--gamma"] = sub.add_option("--gamma", f.gamma, "power / log APGF coefficient");
  s.opts["--lambda"] = sub.add_option("--lambda", f.lambda, "Poisson rate of summands");
  s.opts["--theta"] = sub.add_option("--theta", f.theta, "first-trial success probability");
  s.opts["--mu"] = sub.add_option("--mu", f.mu, "Hermite mean");
  s.opts["--sigma2"] = sub.add_option("--sigma2", f.sigma2, "Hermite dispersion");
  s.opts["--max-k"] = sub.add_option("--max-k", f.max_k, "truncation index");
  s.opts["--n"] = sub.add_option("--n", f.n_list, "comma-separated copy counts (verify)");
  s.opts["--seed"] = sub.add_option("--seed", f.seed, "random seed");
  s.opts["--count"] = sub.add_option("--count", f.count, "number of samples");
  s.opts["--points"] = sub.add_option("--points", f.grid_points, "APGF grid size on [0,2]");
  s.opts["--format"] = sub.add_option("--format", f.format, "csv or json");
  s.opts["--tol"] = sub.add_option("--tol", f.tol, "PMF-level verification tolerance");
  return s;
}

std::vector<unsigned long> parse_n_list(const std::string& text) {
  std::vector<unsigned long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      if (item.empty() || item[0] == '-') throw std::invalid_argument(item);
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      throw UsageError("--n expects comma-separated positive integers, got '" + text + "'");
    }
    if (used != item.size() || v == 0 || v > kMaxPmfCopies) {
      throw UsageError("--n entries must be integers in [1," + std::to_string(kMaxPmfCopies) +
                       "], got '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--n must list at least one copy count");
  return out;
}

void select_parametrization(const FlagSet& s, const RawFlags& f, CliConfig& cfg) {
  const bool stable_only = s.given("--delta") || s.given("--gamma");
  const bool compound_only = s.given("--lambda") || s.given("--theta");
  const bool hermite = s.given("--mu") || s.given("--sigma2");

  auto first_given = [&](std::initializer_list<const char*> names) -> std::string {
    for (const char* n : names) {
      if (s.given(n)) return n;
    }
    return "";
  };
  auto conflict = [](const std::string& a, const std::string& b) {
    throw UsageError("conflicting parametrizations: " + a + " cannot be combined with " + b);
  };

  if (stable_only && compound_only) {
    conflict(first_given({"--delta", "--gamma"}), first_given({"--lambda", "--theta"}));
  }
  if (hermite && (stable_only || compound_only || s.given("--alpha"))) {
    conflict(first_given({"--mu", "--sigma2"}),
             first_given({"--alpha", "--delta", "--gamma", "--lambda", "--theta"}));
  }

  auto require = [&](std::initializer_list<const char*> names, const char* group) {
    for (const char* n : names) {
      if (!s.given(n)) throw UsageError(std::string(group) + " parametrization requires " + n);
    }
  };
  if (hermite) {
    require({"--mu", "--sigma2"}, "Hermite");
    cfg.hermite = HermiteGroup{f.mu, f.sigma2};
  } else if (compound_only) {
    require({"--lambda", "--theta", "--alpha"}, "compound");
    cfg.compound = CompoundGroup{f.lambda, f.theta, f.alpha};
  } else if (stable_only || s.given("--alpha")) {
    require({"--alpha", "--delta", "--gamma"}, "stable");
    cfg.stable = StableGroup{f.alpha, f.delta, f.gamma};
  } else {
    throw UsageError(
        "no distribution given: use --alpha/--delta/--gamma, --lambda/--theta/--alpha or --mu/--sigma2");
  }
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

nlohmann::json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

StableParams canonical_params(const CliConfig& cfg) {
  if (cfg.hermite) return hermite_to_stable({cfg.hermite->mu, cfg.hermite->sigma2});
  if (cfg.compound) {
    const auto& c = *cfg.compound;
    return compound_to_stable(CompoundParams::make(c.lambda, c.theta, c.alpha));
  }
  const auto& s = *cfg.stable;
  const StableParams p = StableParams::make(s.alpha, s.delta, s.gamma);
  require_valid(p);
  return p;
}

int run_pmf(const CliConfig& cfg, const StableParams& p, std::ostream& out) {
  const CountPmf pmf = cfg.max_k ? stable_pmf(p, *cfg.max_k) : stable_pmf_auto(p);
  if (cfg.format == Format::kJson) {
    out << to_json(pmf).dump() << '\n';
  } else {
    write_csv(out, pmf);
  }
  return kExitOk;
}

int run_sample(const CliConfig& cfg, const StableParams& p, std::ostream& out) {
  Rng rng(cfg.seed);
  std::vector<std::uint64_t> draws;
  if (cfg.hermite) {
    draws = hermite_sample({cfg.hermite->mu, cfg.hermite->sigma2}, rng, cfg.count);
  } else {
    CompoundParams c = CompoundParams::make(0.0, 1.0, p.alpha);
    try {
      c = stable_to_compound(p);
    } catch (const DegenerateError&) {
      // point mass at 0: lambda = 0 draws only zeros
    }
    draws = stable_sample(c, rng, cfg.count);
  }
  if (cfg.format == Format::kJson) {
    out << nlohmann::json{{"seed", cfg.seed}, {"samples", draws}}.dump() << '\n';
  } else {
    for (std::uint64_t d : draws) out << d << '\n';
  }
  return kExitOk;
}

int run_moments(const CliConfig& cfg, const StableParams& p, std::ostream& out) {
  const double mean = stable_mean(p);
  const double disp = stable_dispersion(p);
  const std::string_view cls = to_string(classify(p));
  if (cfg.format == Format::kJson) {
    out << nlohmann::json{{"alpha", p.alpha},
                          {"delta", p.delta},
                          {"gamma", p.gamma},
                          {"mean", json_number(mean)},
                          {"dispersion", json_number(disp)},
                          {"class", std::string(cls)}}
               .dump()
        << '\n';
  } else {
    out << "statistic,value\n";
    out << "mean," << format_number(mean) << '\n';
    out << "dispersion," << format_number(disp) << '\n';
    out << "class," << cls << '\n';
  }
  return kExitOk;
}

int run_apgf(const CliConfig& cfg, const StableParams& p, std::ostream& out) {
  const std::size_t m = cfg.grid_points;
  nlohmann::json rows = nlohmann::json::array();
  if (cfg.format == Format::kCsv) out << "t,psi\n";
  for (std::size_t i = 0; i < m; ++i) {
    const double t = m == 1 ? 0.0 : 2.0 * static_cast<double>(i) / static_cast<double>(m - 1);
    const double psi = apgf_eval(p, t);
    if (cfg.format == Format::kJson) {
      rows.push_back({{"t", t}, {"psi", psi}});
    } else {
      out << format_number(t) << ',' << format_number(psi) << '\n';
    }
  }
  if (cfg.format == Format::kJson) out << rows.dump() << '\n';
  return kExitOk;
}

int run_verify(const CliConfig& cfg, const StableParams& p, std::ostream& out) {
  std::size_t window = 0;
  if (cfg.max_k) {
    window = *cfg.max_k;
  } else {
    for (unsigned long n : cfg.n_list) window = std::max(window, verification_window(p, n, cfg.tol));
  }
  std::size_t range = window;
  for (unsigned long n : cfg.n_list) range = std::max(range, pre_thinning_range(window, coefficients(p, n).a));
  const CountPmf x = stable_pmf(p, range);
  bool all_pass = true;
  nlohmann::json reports = nlohmann::json::array();
  if (cfg.format == Format::kCsv) {
    out << "n,a_n,b_n,param_residual,tv,window_tv,lhs_tail,rhs_tail,max_k,tolerance,verdict,form_used\n";
  }
  for (unsigned long n : cfg.n_list) {
    const StabilityReport r = verify_pmf_level(p, n, x, window, cfg.tol);
    all_pass = all_pass && r.pass;
    if (cfg.format == Format::kJson) {
      reports.push_back(to_json(r));
    } else {
      out << r.n << ',' << format_number(r.a_n) << ',' << format_number(r.b_n) << ','
          << format_number(r.param_residual) << ',' << format_number(r.tv) << ','
          << format_number(r.window_tv) << ',' << format_number(r.lhs_tail) << ','
          << format_number(r.rhs_tail) << ',' << r.max_k << ',' << format_number(r.tolerance) << ','
          << (r.pass ? "pass" : "fail") << ',' << to_string(r.form_used) << '\n';
    }
  }
  if (cfg.format == Format::kJson) out << reports.dump() << '\n';
  return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

CliConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Discrete stable distributions: PMFs, sampling, moments, APGF and stability checks",
               "countstable"};
  app.require_subcommand(1, 1);
  struct Entry {
    const char* name;
    Command command;
    const char* description;
  };
  const std::vector<Entry> commands = {
      {"pmf", Command::kPmf, "truncated PMF table with tail bound"},
      {"sample", Command::kSample, "random draws, one per line"},
      {"verify", Command::kVerify, "check the stability identity for each n"},
      {"moments", Command::kMoments, "mean, dispersion and stability class"},
      {"apgf", Command::kApgf, "APGF on an even grid over [0,2]"}};
  std::vector<RawFlags> raw(commands.size());
  std::vector<FlagSet> sets;
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].name, commands[i].description);
    sets.push_back(add_flags(*sub, raw[i]));
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (CLI::App* sub : subs) {
      if (sub->parsed()) target = sub;
    }
    throw HelpRequested(target->help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CliConfig cfg;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    cfg.command = commands[i].command;
    const RawFlags& f = raw[i];
    const FlagSet& s = sets[i];
    select_parametrization(s, f, cfg);
    if (s.given("--max-k")) {
      if (f.max_k > kMaxTruncation) {
        throw UsageError("--max-k must be at most " + std::to_string(kMaxTruncation));
      }
      cfg.max_k = f.max_k;
    }
    if (s.given("--n")) cfg.n_list = parse_n_list(f.n_list);
    cfg.seed = f.seed;
    cfg.count = f.count;
    if (f.grid_points == 0) throw UsageError("--points must be positive");
    cfg.grid_points = f.grid_points;
    if (f.format == "csv") {
      cfg.format = Format::kCsv;
    } else if (f.format == "json") {
      cfg.format = Format::kJson;
    } else {
      throw UsageError("--format must be csv or json, got '" + f.format + "'");
    }
    if (!(f.tol > 0.0) || !std::isfinite(f.tol)) throw UsageError("--tol must be positive");
    cfg.tol = f.tol;
  }
  return cfg;
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  StableParams p;
  try {
    p = canonical_params(config);
  } catch (const InvalidParams& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidParams;
  }
  try {
    switch (config.command) {
      case Command::kPmf: return run_pmf(config, p, out);
      case Command::kSample: return run_sample(config, p, out);
      case Command::kMoments: return run_moments(config, p, out);
      case Command::kApgf: return run_apgf(config, p, out);
      case Command::kVerify: return run_verify(config, p, out);
    }
  } catch (const InvalidParams& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidParams;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidParams;
  }
  return kExitUsage;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return run(cfg, out, err);
}

}  // namespace countstable::cli

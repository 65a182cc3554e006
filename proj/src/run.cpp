#include "fbel/run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fbel/bel_weight.hpp"
#include "fbel/error.hpp"
#include "fbel/fbm_engine.hpp"
#include "fbel/fd_oracle.hpp"
#include "fbel/parallel.hpp"
#include "fbel/payoff.hpp"
#include "fbel/rough_vol.hpp"
#include "fbel/validation.hpp"

namespace fbel {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw InvalidArgument(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument(std::string(key) + ": expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> to_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(to_double(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

RunMode parse_mode(std::string_view text) {
  if (text == "paths") return RunMode::paths;
  if (text == "delta-sde") return RunMode::delta_sde;
  if (text == "delta-rv") return RunMode::delta_rv;
  if (text == "validate") return RunMode::validate;
  throw InvalidArgument("unknown mode '" + std::string(text) + "' (paths, delta-sde, delta-rv, validate)");
}

std::string_view mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::paths: return "paths";
    case RunMode::delta_sde: return "delta-sde";
    case RunMode::delta_rv: return "delta-rv";
    case RunMode::validate: return "validate";
  }
  return "?";
}

DriftSpec parse_drift(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::vector<double> args =
      colon == std::string_view::npos ? std::vector<double>{} : to_list("drift", text.substr(colon + 1));
  auto need = [&](std::size_t n) {
    if (args.size() != n) {
      throw InvalidArgument("drift '" + std::string(kind) + "' takes " + std::to_string(n) + " parameters");
    }
  };
  if (kind == "zero") {
    need(0);
    return DriftSpec::zero();
  }
  if (kind == "linear") {
    need(1);
    return DriftSpec::linear(args[0]);
  }
  if (kind == "regime") {
    need(3);
    return DriftSpec::regime_switch(args[0], args[1], args[2]);
  }
  if (kind == "regime-ou") {
    need(4);
    return DriftSpec::regime_switch_ou(args[0], args[1], args[2], args[3]);
  }
  throw InvalidArgument("unknown drift '" + std::string(text) + "' (zero, linear:L, regime:b1,b2,R, regime-ou:a1,a2,R,level)");
}

void RunConfig::set(std::string_view key_in, std::string_view value_in) {
  std::string key(trim(key_in));
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string_view value = trim(value_in);
  if (key == "mode") {
    mode = parse_mode(value);
  } else if (key == "hurst") {
    hurst = to_double(key, value);
  } else if (key == "horizon") {
    horizon = to_double(key, value);
  } else if (key == "steps") {
    steps = to_unsigned(key, value);
  } else if (key == "paths") {
    paths = to_unsigned(key, value);
  } else if (key == "seed") {
    seed = to_unsigned(key, value);
  } else if (key == "dim") {
    dim = to_unsigned(key, value);
  } else if (key == "drift") {
    parse_drift(value);
    drift = std::string(value);
  } else if (key == "epsilon") {
    if (value == "auto") {
      epsilon.reset();
    } else {
      epsilon = to_double(key, value);
    }
  } else if (key == "payoff") {
    Payoff::parse(value, 0.0);
    payoff = std::string(value);
  } else if (key == "strike") {
    strike = to_double(key, value);
  } else if (key == "weight_fn") {
    WeightFn::parse(value, 1.0);
    weight_fn = std::string(value);
  } else if (key == "x0") {
    x0 = to_list(key, value);
  } else if (key == "x1") {
    x1 = to_double(key, value);
  } else if (key == "x2") {
    x2 = to_double(key, value);
  } else if (key == "mu") {
    mu = to_double(key, value);
  } else if (key == "g_alpha") {
    g_alpha = to_double(key, value);
  } else if (key == "g_gamma") {
    g_gamma = to_double(key, value);
  } else if (key == "bump") {
    if (value == "auto") {
      bump.reset();
    } else {
      bump = to_double(key, value);
    }
  } else if (key == "dump_paths") {
    dump_paths = to_unsigned(key, value);
  } else if (key == "out") {
    if (value.empty()) throw InvalidArgument("out: empty path");
    out = std::string(value);
  } else {
    throw InvalidArgument("unknown key '" + key + "'");
  }
}

void RunConfig::merge_text(std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value, got '" + std::string(line) + "'", line_no);
    try {
      set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig c;
  c.merge_text(text);
  return c;
}

void RunConfig::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    merge_text(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

RunConfig RunConfig::load(const std::string& path) {
  RunConfig c;
  c.merge_file(path);
  return c;
}

std::vector<double> RunConfig::initial_state() const {
  if (dim == 0) throw InvalidArgument("dim must be at least 1");
  if (x0.size() == dim) return x0;
  if (x0.size() == 1) return std::vector<double>(dim, x0.front());
  throw InvalidArgument("x0 has " + std::to_string(x0.size()) + " entries, dim is " + std::to_string(dim));
}

double RunConfig::resolved_epsilon() const {
  if (epsilon) {
    if (!(*epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    return *epsilon;
  }
  return default_epsilon(GridSpec(horizon, steps), HurstParam(hurst));
}

namespace {

double resolved_bump(const RunConfig& c) {
  if (c.bump) return *c.bump;
  const bool digital = Payoff::parse(c.payoff, c.strike).kind() == Payoff::Kind::digital;
  double scale = 0.0;
  if (c.mode == RunMode::delta_rv) {
    scale = std::max(std::abs(c.x1), std::abs(c.x2));
  } else {
    for (double v : c.initial_state()) scale = std::max(scale, std::abs(v));
  }
  return default_bump(scale, digital);
}

}  // namespace

std::string RunConfig::resolved() const {
  std::ostringstream os;
  os << "mode=" << mode_name(mode) << '\n'
     << "hurst=" << num(hurst) << '\n'
     << "horizon=" << num(horizon) << '\n'
     << "steps=" << steps << '\n'
     << "paths=" << paths << '\n'
     << "seed=" << seed << '\n'
     << "dim=" << dim << '\n'
     << "drift=" << drift << '\n'
     << "epsilon=" << num(resolved_epsilon()) << '\n'
     << "payoff=" << payoff << '\n'
     << "strike=" << num(strike) << '\n'
     << "weight_fn=" << weight_fn << '\n'
     << "x0=";
  for (std::size_t i = 0; i < x0.size(); ++i) os << (i ? "," : "") << num(x0[i]);
  os << '\n'
     << "x1=" << num(x1) << '\n'
     << "x2=" << num(x2) << '\n'
     << "mu=" << num(mu) << '\n'
     << "g_alpha=" << num(g_alpha) << '\n'
     << "g_gamma=" << num(g_gamma) << '\n'
     << "bump=" << num(resolved_bump(*this)) << '\n'
     << "dump_paths=" << dump_paths << '\n'
     << "out=" << out << '\n';
  return os.str();
}

std::vector<std::string> validity_advisories(HurstParam h, std::size_t dim) {
  std::vector<std::string> out;
  std::ostringstream os;
  if (!h.strong_solution_valid(dim)) {
    os << "advisory: h=" << h.value() << " >= 1/(2(d+2)) = " << HurstParam::strong_solution_threshold(dim)
       << " for d=" << dim << "; the delta representation is computed but is outside proven validity";
    out.push_back(os.str());
  } else if (!h.continuous_version_valid(dim)) {
    os << "note: h=" << h.value() << " >= 1/(2(d+3)) = " << HurstParam::continuous_version_threshold(dim)
       << " for d=" << dim << "; the representation holds for almost every x0, continuity in x0 is not guaranteed";
    out.push_back(os.str());
  }
  return out;
}

namespace {

std::string component(const char* prefix, std::size_t i) { return std::string(prefix) + std::to_string(i); }

void add_fd_comparison(RunReport& rep, const char* quantity, const std::string& comp, double est, double se,
                       std::size_t n, const FDEstimate& fd, std::size_t i) {
  const double comb = std::hypot(se, fd.std_error[i]);
  ResultRow row = compare_row(quantity, comp, est, se, n, fd.value[i], 3.0 * comb);
  if (fd.below_noise_floor) row.pass = false;
  rep.rows.push_back(std::move(row));
}

void run_delta_sde(const RunConfig& c, RunReport& rep) {
  const HurstParam h(c.hurst);
  const GridSpec grid(c.horizon, c.steps);
  const std::vector<double> x0 = c.initial_state();
  const std::size_t d = x0.size();
  const DriftSpec base = parse_drift(c.drift);
  const MollifiedDrift drift = mollify(base, c.resolved_epsilon());
  const Payoff payoff = Payoff::parse(c.payoff, c.strike);
  const WeightFn a = WeightFn::parse(c.weight_fn, c.horizon);
  rep.advisories = validity_advisories(h, d);

  const DeltaProblem problem{drift, x0, h, a, grid, c.paths, c.seed};
  const DeltaEstimate bel = estimate_delta(problem, payoff);

  const VolterraSampler sampler(grid, h);
  const std::size_t n = grid.n_steps();
  const ModelRunner runner = [&](std::span<const double> x, PathSeed seed) {
    const JointPath path = sampler.sample(d, seed);
    return payoff(euler_solve(drift, x, path).state(n));
  };
  const FDEstimate fd = fd_delta(runner, x0, resolved_bump(c), c.paths, c.seed);
  if (fd.below_noise_floor) rep.advisories.push_back("finite differences below noise floor: " + fd.note);

  for (std::size_t i = 0; i < d; ++i) {
    const std::string comp = component("x0_", i);
    rep.rows.push_back(estimate_row("delta_bel", comp, bel.mean[i], bel.std_error[i], c.paths));
    rep.rows.push_back(estimate_row("delta_fd", comp, fd.value[i], fd.std_error[i], c.paths));
    add_fd_comparison(rep, "delta_bel_vs_fd", comp, bel.mean[i], bel.std_error[i], c.paths, fd, i);
  }

  if (base.kind() == DriftSpec::Kind::zero && payoff.kind() != Payoff::Kind::custom) {
    // Sum of coordinates is N(sum x0, d T^2H).
    double m = 0.0;
    for (double v : x0) m += v;
    const double sd = std::sqrt(static_cast<double>(d)) * std::pow(c.horizon, c.hurst);
    const double k = c.strike;
    double exact = 0.0;
    switch (payoff.kind()) {
      case Payoff::Kind::identity: exact = 1.0; break;
      case Payoff::Kind::digital: exact = std::exp(-0.5 * ((k - m) / sd) * ((k - m) / sd)) / (std::sqrt(2.0 * std::numbers::pi) * sd); break;
      case Payoff::Kind::call: exact = normal_cdf((m - k) / sd); break;
      case Payoff::Kind::put: exact = -normal_cdf((k - m) / sd); break;
      case Payoff::Kind::custom: break;
    }
    for (std::size_t i = 0; i < d; ++i) {
      rep.rows.push_back(compare_row("delta_bel_vs_exact", component("x0_", i), bel.mean[i], bel.std_error[i],
                                     c.paths, exact, 3.0 * bel.std_error[i]));
    }
  }
}

void run_delta_rv(const RunConfig& c, RunReport& rep) {
  const HurstParam h(c.hurst);
  const GridSpec grid(c.horizon, c.steps);
  const RVConfig cfg{c.mu, VolMap(c.g_alpha, c.g_gamma), mollify(parse_drift(c.drift), c.resolved_epsilon()),
                     c.x1, c.x2, h};
  const Payoff payoff = Payoff::parse(c.payoff, c.strike);
  const WeightFn a = WeightFn::parse(c.weight_fn, c.horizon);
  // The volatility factor is one-dimensional.
  rep.advisories = validity_advisories(h, 1);

  const RVProblem problem{cfg, a, grid, c.paths, c.seed};
  const RVPayoff phi = [&](double s, double) { return payoff(s); };
  const std::string name = payoff.describe();
  const DeltaEstimate est =
      sbel_deltas(problem, std::span<const RVPayoff>(&phi, 1), std::span<const std::string>(&name, 1)).front();

  const RVModel model(cfg, grid);
  const ModelRunner runner = [&](std::span<const double> x, PathSeed seed) {
    return payoff(model.terminal(x[0], x[1], seed).first);
  };
  const double x[2] = {c.x1, c.x2};
  const FDEstimate fd = fd_delta(runner, x, resolved_bump(c), c.paths, c.seed);
  if (fd.below_noise_floor) rep.advisories.push_back("finite differences below noise floor: " + fd.note);

  const char* names[2] = {"x1", "x2"};
  for (std::size_t i = 0; i < 2; ++i) {
    rep.rows.push_back(estimate_row("delta_sbel", names[i], est.mean[i], est.std_error[i], c.paths));
    rep.rows.push_back(estimate_row("delta_fd", names[i], fd.value[i], fd.std_error[i], c.paths));
    add_fd_comparison(rep, "delta_sbel_vs_fd", names[i], est.mean[i], est.std_error[i], c.paths, fd, i);
  }
  if (payoff.kind() == Payoff::Kind::identity) {
    rep.rows.push_back(compare_row("delta_sbel_vs_exact", "x1", est.mean[0], est.std_error[0], c.paths,
                                   std::exp(c.mu * c.horizon), 3.0 * est.std_error[0]));
    if (c.g_gamma == 0.0) {
      rep.rows.push_back(compare_row("delta_sbel_vs_exact", "x2", est.mean[1], est.std_error[1], c.paths, 0.0,
                                     3.0 * est.std_error[1]));
    }
  }
}

void run_paths(const RunConfig& c, RunReport& rep) {
  const HurstParam h(c.hurst);
  const GridSpec grid(c.horizon, c.steps);
  const std::size_t d = c.dim;
  if (d == 0) throw InvalidArgument("dim must be at least 1");
  if (c.paths < 2) throw InvalidArgument("paths mode needs at least two paths");
  const VolterraSampler sampler(grid, h);
  const std::size_t n = grid.n_steps();
  const std::size_t keep = std::min(c.dump_paths, c.paths);
  std::vector<JointPath> dump(keep);
  std::vector<double> sq(d * c.paths);
  std::vector<double> consistency(c.paths);
  parallel_for(c.paths, [&](std::size_t p) {
    JointPath path = sampler.sample(d, PathSeed{c.seed, p});
    for (std::size_t i = 0; i < d; ++i) sq[i * c.paths + p] = path.BH(n, i) * path.BH(n, i);
    consistency[p] = sampler.consistency_error(path);
    if (p < keep) dump[p] = std::move(path);
  });
  const std::string paths_file = c.out + ".paths.csv";
  std::ofstream out(paths_file);
  if (!out) throw IoError("cannot write '" + paths_file + "'");
  write_paths_csv(out, dump);
  const double target = std::pow(c.horizon, 2.0 * c.hurst);
  for (std::size_t i = 0; i < d; ++i) {
    const auto ms = mean_stderr(std::span<const double>(&sq[i * c.paths], c.paths));
    rep.rows.push_back(compare_row("variance_bh_T", component("bh_", i), ms.mean, ms.std_error, c.paths, target,
                                   3.0 * ms.std_error));
  }
  const double worst = *std::max_element(consistency.begin(), consistency.end());
  rep.rows.push_back(compare_row("path_consistency_error", "bh", worst, std::nullopt, c.paths, 0.0, 1e-10));
}

void run_validate(const RunConfig& c, RunReport& rep) {
  ValidationOptions o;
  o.h = HurstParam(c.hurst);
  o.horizon = c.horizon;
  o.steps = c.steps;
  o.n_paths = c.paths;
  o.seed = c.seed;
  rep.rows = validation_suite(o);
  rep.failed = !all_pass(rep.rows);
}

}  // namespace

RunReport run(const RunConfig& config) {
  if (config.paths < 2) throw InvalidArgument("paths must be at least 2");
  const std::string resolved = config.resolved();  // validates derived values early
  RunReport rep;
  switch (config.mode) {
    case RunMode::paths: run_paths(config, rep); break;
    case RunMode::delta_sde: run_delta_sde(config, rep); break;
    case RunMode::delta_rv: run_delta_rv(config, rep); break;
    case RunMode::validate: run_validate(config, rep); break;
  }

  rep.results_path = config.out;
  rep.config_path = config.config_path();
  {
    std::ofstream out(rep.results_path);
    if (!out) throw IoError("cannot write '" + rep.results_path + "'");
    write_results_csv(out, rep.rows);
  }
  std::ofstream cfg(rep.config_path);
  if (!cfg) throw IoError("cannot write '" + rep.config_path + "'");
  cfg << "# resolved configuration; rerun with --config " << rep.config_path << '\n';
  for (const auto& a : rep.advisories) cfg << "# " << a << '\n';
  cfg << resolved;
  if (!cfg) throw IoError("failed writing '" + rep.config_path + "'");
  return rep;
}

}  // namespace fbel

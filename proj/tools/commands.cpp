#include "commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "tamech/analytic.hpp"
#include "tamech/errors.hpp"
#include "tamech/montecarlo.hpp"
#include "tamech/solver.hpp"

namespace tamech::cli {
namespace {

constexpr std::string_view kKeys[] = {"beta", "control_value", "n_bidders",
                                      "replications", "seed", "output_path"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> to_unsigned(std::string_view s) {
  s = trim(s);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

std::map<std::string, std::string, std::less<>> collect_entries(std::string_view text) {
  std::map<std::string, std::string, std::less<>> entries;
  const auto insert = [&](std::string key, std::string value) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw ConfigError(key, "unknown key");
    }
    if (!entries.emplace(key, std::move(value)).second) {
      throw ConfigError(key, "duplicate key");
    }
  };

  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("", "config must be a flat object");
    for (const auto& [key, value] : doc.items()) {
      if (value.is_string()) {
        insert(key, value.get<std::string>());
      } else if (value.is_number()) {
        insert(key, value.dump());
      } else {
        throw ConfigError(key, "value must be a number or string");
      }
    }
    return entries;
  }

  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    auto sep = view.find('=');
    if (sep == std::string_view::npos) sep = view.find(':');
    if (sep == std::string_view::npos) {
      throw ConfigError("", fmt::format("line {}: expected key = value", line_no));
    }
    const std::string key(unquote(trim(view.substr(0, sep))));
    std::string_view value = trim(view.substr(sep + 1));
    if (!value.empty() && value.back() == ',') value = trim(value.substr(0, value.size() - 1));
    insert(key, std::string(unquote(value)));
  }
  return entries;
}

const std::string& required(const std::map<std::string, std::string, std::less<>>& entries,
                            std::string_view key) {
  const auto it = entries.find(key);
  if (it == entries.end()) throw ConfigError(std::string(key), "missing required key");
  return it->second;
}

double parse_ratio(std::string_view s) {
  s = trim(s);
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = to_double(s.substr(0, slash));
    const auto den = to_double(s.substr(slash + 1));
    if (!num || !den || *den == 0.0) throw ConfigError("beta", "malformed ratio");
    return *num / *den;
  }
  const auto value = to_double(s);
  if (!value) throw ConfigError("beta", fmt::format("not a number: '{}'", s));
  return *value;
}

void print_row(std::ostream& out, std::string_view name, double value) {
  fmt::print(out, "{:<30}{:.6f}\n", name, value);
}

void print_flag(std::ostream& out, std::string_view name, bool value) {
  fmt::print(out, "{:<30}{}\n", name, value ? "true" : "false");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open for writing: " + path.string());
  file << content;
  file.flush();
  if (!file) throw IoError("write failed: " + path.string());
}

template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kUsageError;
  } catch (const IoError& e) {
    fmt::print(err, "I/O error: {}\n", e.what());
    return kUsageError;
  } catch (const DomainError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsageError;
  } catch (const ConvergenceError& e) {
    fmt::print(err, "convergence failure: {} (residual {:.3e} after {} iterations)\n", e.what(),
               e.residual(), e.iterations());
    return kNumericFailure;
  } catch (const NumericError& e) {
    fmt::print(err, "numeric failure: {} (at {})\n", e.what(), e.at());
    return kNumericFailure;
  }
}

}  // namespace

ScenarioFile parse_scenario(std::string_view text) {
  const auto entries = collect_entries(text);
  ScenarioFile file;

  file.beta = parse_beta(required(entries, "beta"));

  const std::string& control = required(entries, "control_value");
  if (control == "optimal") {
    file.control_value.reset();
  } else {
    const auto c = to_double(control);
    if (!c || !std::isfinite(*c) || *c < 0.0) {
      throw ConfigError("control_value", "must be a number >= 0 or \"optimal\"");
    }
    file.control_value = *c;
  }

  if (const auto it = entries.find("n_bidders"); it != entries.end()) {
    const auto n = to_unsigned(it->second);
    if (!n || *n < 2) throw ConfigError("n_bidders", "must be an integer >= 2");
    file.n_bidders = static_cast<std::size_t>(*n);
  }

  const auto reps = to_unsigned(required(entries, "replications"));
  if (!reps || *reps < 1) throw ConfigError("replications", "must be an integer >= 1");
  file.replications = *reps;

  const auto seed = to_unsigned(required(entries, "seed"));
  if (!seed) throw ConfigError("seed", "must be an unsigned 64-bit integer");
  file.seed = *seed;

  if (const auto it = entries.find("output_path"); it != entries.end()) {
    if (trim(it->second).empty()) throw ConfigError("output_path", "must not be empty");
    file.output_path = std::filesystem::path(std::string(trim(it->second)));
  }
  return file;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

double resolve_control(const ScenarioFile& file) {
  if (file.control_value) return *file.control_value;
  if (file.n_bidders != 2) {
    throw ConfigError("control_value", "\"optimal\" needs the two-bidder closed-form payoff");
  }
  return analytic::optimal_control(file.beta);
}

AuctionScenario to_scenario(const ScenarioFile& file) {
  return AuctionScenario(file.n_bidders, ValuationDistribution::uniform(0.0, 1.0),
                         TypeFunction(file.beta), resolve_control(file));
}

double parse_beta(std::string_view token) {
  std::string_view s = trim(token);
  double value = 0.0;
  if (s.starts_with("sqrt(") && s.ends_with(")")) {
    const double inner = parse_ratio(s.substr(5, s.size() - 6));
    if (!(inner >= 0.0)) throw ConfigError("beta", "sqrt of a negative number");
    value = std::sqrt(inner);
  } else {
    value = parse_ratio(s);
  }
  if (!std::isfinite(value) || value < 0.0) throw ConfigError("beta", "must be finite and >= 0");
  return value;
}

std::vector<double> parse_beta_list(std::string_view list) {
  std::vector<double> betas;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto piece = list.substr(start, comma == std::string_view::npos ? list.npos
                                                                          : comma - start);
    if (!trim(piece).empty()) betas.push_back(parse_beta(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return betas;
}

std::string format_exact(double value) { return fmt::format("{:.17g}", value); }

std::vector<Quantity> report_quantities(const PayoffReport& report) {
  std::vector<Quantity> q;
  const auto add = [&](std::string name, const Estimate& e) {
    q.push_back({std::move(name), e.value, e.std_error, report.replications, report.seed});
  };
  add("control_value", {report.control_value, 0.0});
  add("seller_payoff", report.seller_payoff);
  add("winning_bid", report.winning_bid);
  for (std::size_t i = 0; i < report.bidder_payoffs.size(); ++i) {
    add(fmt::format("bidder_{}_payoff", i + 1), report.bidder_payoffs[i]);
  }
  return q;
}

std::string render_csv(std::span<const Quantity> quantities) {
  std::string csv = "name,estimate,stderr,replications,seed\n";
  for (const auto& q : quantities) {
    csv += fmt::format("{},{},{},{},{}\n", q.name, format_exact(q.estimate),
                       format_exact(q.std_error), q.replications, q.seed);
  }
  return csv;
}

std::string render_json(const ScenarioFile& file, double control_value,
                        std::span<const Quantity> quantities) {
  std::string json = "{\n  \"command\": \"simulate\",\n  \"scenario\": {\n";
  json += fmt::format("    \"beta\": {},\n", format_exact(file.beta));
  json += fmt::format("    \"control_value\": {},\n", format_exact(control_value));
  json += fmt::format("    \"control_mode\": \"{}\",\n",
                      file.optimal_control() ? "optimal" : "fixed");
  json += fmt::format("    \"n_bidders\": {},\n", file.n_bidders);
  json += fmt::format("    \"replications\": {},\n", file.replications);
  json += fmt::format("    \"seed\": {}\n  }},\n  \"quantities\": [\n", file.seed);
  for (std::size_t i = 0; i < quantities.size(); ++i) {
    const auto& q = quantities[i];
    json += fmt::format(
        "    {{\"name\": \"{}\", \"estimate\": {}, \"stderr\": {}, \"replications\": {}, "
        "\"seed\": {}}}{}\n",
        q.name, format_exact(q.estimate), format_exact(q.std_error), q.replications, q.seed,
        i + 1 < quantities.size() ? "," : "");
  }
  json += "  ]\n}\n";
  return json;
}

std::vector<Quantity> parse_csv(std::string_view csv) {
  std::vector<Quantity> rows;
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "name,estimate,stderr,replications,seed") {
    throw ConfigError("", "unexpected CSV header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view view = line;
    for (std::size_t pos = 0;;) {
      const auto comma = view.find(',', pos);
      cells.push_back(view.substr(pos, comma == view.npos ? view.npos : comma - pos));
      if (comma == view.npos) break;
      pos = comma + 1;
    }
    if (cells.size() != 5) throw ConfigError("", "CSV row needs 5 cells: " + line);
    const auto estimate = to_double(cells[1]);
    const auto stderr_value = to_double(cells[2]);
    const auto reps = to_unsigned(cells[3]);
    const auto seed = to_unsigned(cells[4]);
    if (!estimate || !stderr_value || !reps || !seed) {
      throw ConfigError("", "malformed CSV row: " + line);
    }
    rows.push_back({std::string(cells[0]), *estimate, *stderr_value, *reps, *seed});
  }
  return rows;
}

int cmd_analyze(double beta, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!std::isfinite(beta) || beta < 0.0) throw ConfigError("beta", "must be finite and >= 0");
    const double c_star = analytic::optimal_control(beta);
    const auto search = solver::maximize_control(solver::seller_payoff_function(beta), 0.0,
                                                 solver::default_control_upper(beta));
    const auto cmp = analytic::pareto_compare(beta);
    print_row(out, "beta", beta);
    print_row(out, "c_star", c_star);
    print_row(out, "c_star_golden_section", search.c_star);
    print_row(out, "seller_payoff_initial", analytic::seller_expected_payoff(beta, 0.0));
    print_row(out, "seller_payoff_at_c_star", analytic::seller_payoff_at_optimum(beta));
    print_row(out, "bidder_payoff_at_c_star", analytic::bidder_payoff_at_optimum(beta));
    print_row(out, "benchmark_seller_revenue", cmp.seller_benchmark);
    print_row(out, "benchmark_bidder_payoff", cmp.bidder_benchmark);
    print_flag(out, "seller_improves", cmp.seller_improves);
    print_flag(out, "bidder_improves", cmp.bidder_improves);
    print_flag(out, "pareto", cmp.pareto_optimal);
    return kSuccess;
  });
}

int cmd_simulate(const std::filesystem::path& config, unsigned workers, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioFile file = load_scenario(config);
    if (!file.output_path) throw ConfigError("output_path", "missing required key");
    montecarlo::SimulationConfig sim{to_scenario(file), file.replications, file.seed,
                                     montecarlo::BidStrategyKind::analytic_equilibrium,
                                     std::nullopt};
    const PayoffReport report = montecarlo::estimate_payoffs(sim, workers);
    const auto quantities = report_quantities(report);

    auto csv_path = *file.output_path;
    auto json_path = *file.output_path;
    csv_path.replace_extension(".csv");
    json_path.replace_extension(".json");
    write_file(csv_path, render_csv(quantities));
    write_file(json_path, render_json(file, report.control_value, quantities));

    fmt::print(out, "{:<20}{:>12}{:>12}\n", "quantity", "estimate", "stderr");
    for (const auto& q : quantities) {
      fmt::print(out, "{:<20}{:>12.6f}{:>12.6f}\n", q.name, q.estimate, q.std_error);
    }
    fmt::print(out, "wrote {} and {}\n", csv_path.string(), json_path.string());
    return kSuccess;
  });
}

int cmd_compare(std::span<const double> betas, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (betas.empty()) throw ConfigError("beta", "at least one beta is required");
    fmt::print(out, "{:>10} {:>16} {:>10} {:>16} {:>10} {:>15} {:>15} {:>7}\n", "beta",
               "seller_adjusted", "benchmark", "bidder_adjusted", "benchmark",
               "seller_improves", "bidder_improves", "pareto");
    for (const double beta : betas) {
      const auto cmp = analytic::pareto_compare(beta);
      fmt::print(out, "{:>10.6f} {:>16.6f} {:>10.6f} {:>16.6f} {:>10.6f} {:>15} {:>15} {:>7}\n",
                 cmp.beta, cmp.seller_adjusted, cmp.seller_benchmark, cmp.bidder_adjusted,
                 cmp.bidder_benchmark, cmp.seller_improves, cmp.bidder_improves,
                 cmp.pareto_optimal);
    }
    print_row(out, "seller_threshold_beta", analytic::seller_threshold_beta());
    print_row(out, "bidder_threshold_beta", analytic::bidder_threshold_beta());
    return kSuccess;
  });
}

int cmd_verify(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioFile file = load_scenario(config);
    if (file.n_bidders != 2) {
      throw ConfigError("n_bidders", "verify checks the two-bidder closed-form setting");
    }
    const AuctionScenario scenario = to_scenario(file);
    std::vector<std::string> failed;
    const auto report = [&](std::string_view name, bool pass, const std::string& detail) {
      fmt::print(out, "[{}] {:<22} {}\n", pass ? "PASS" : "FAIL", name, detail);
      if (!pass) failed.emplace_back(name);
    };
    fmt::print(out, "beta = {:.6f}, c = {:.6f}\n", scenario.beta(), scenario.control_value());

    const auto regret = solver::ic_regret_search(scenario, 101, 101);
    report("incentive_compatible", regret.max_regret <= 1e-12,
           fmt::format("max_regret={:.3e} at theta0={:.4f} report={:.4f}", regret.max_regret,
                       regret.argmax_truth, regret.argmax_deviation));

    const auto concavity =
        solver::check_concavity(solver::seller_payoff_function(scenario.beta()), 0.0,
                                solver::default_control_upper(scenario.beta()), 101);
    report("concavity", concavity.satisfied,
           fmt::format("max_curvature={:.3e} initial_slope={:.6f} regime={}",
                       concavity.max_curvature, concavity.initial_slope,
                       concavity.regime == solver::ControlRegime::positive_optimum
                           ? "c*>0"
                           : "c*=0"));

    std::vector<std::vector<double>> profiles(1000, std::vector<double>(2));
    for (std::size_t k = 0; k < profiles.size(); ++k) {
      for (std::size_t i = 0; i < 2; ++i) {
        RandomStream stream(file.seed, k, i);
        profiles[k][i] = sample_intrinsic(scenario.distribution(), stream);
      }
    }
    const auto revelation = solver::check_revelation(
        scenario, profiles, solver::BidStrategy::equilibrium(scenario), 1e-12);
    report("revelation_consistent", revelation.consistent,
           fmt::format("profiles={} mismatches={} max_transfer_gap={:.3e}",
                       revelation.profiles_checked, revelation.mismatches,
                       revelation.max_transfer_gap));

    try {
      const auto grid = solver::best_response_iteration(scenario);
      const double distance = grid.sup_distance(analytic::equilibrium_bid);
      std::vector<double> samples(20);
      for (std::size_t k = 0; k < samples.size(); ++k) {
        RandomStream stream(file.seed, profiles.size() + k, 0);
        samples[k] = scenario.adjust(sample_intrinsic(scenario.distribution(), stream));
      }
      const auto scan = solver::deviation_scan(scenario, grid, samples);
      report("best_response",
             distance < 2e-3 && scan.max_gain <= 10.0 * grid.spacing(),
             fmt::format("iterations={} residual={:.3e} sup_distance={:.3e} max_gain={:.3e}",
                         grid.iterations, grid.residual, distance, scan.max_gain));
    } catch (const ConvergenceError& e) {
      report("best_response", false,
             fmt::format("no convergence, residual={:.3e}", e.residual()));
    }

    if (!failed.empty()) {
      fmt::print(err, "failed checks: {}\n", fmt::join(failed, ", "));
      return kNumericFailure;
    }
    return kSuccess;
  });
}

}  // namespace tamech::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tamech/model.hpp"

namespace tamech::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kNumericFailure = 2 };

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed scenario file. Accepts either a flat JSON object or `key = value`
/// lines (`#` starts a comment). Keys: beta, control_value (number or
/// "optimal"), n_bidders, replications, seed, output_path.
struct ScenarioFile {
  double beta = 0.0;
  /// Empty when control_value is "optimal".
  std::optional<double> control_value;
  std::size_t n_bidders = 2;
  std::uint64_t replications = 0;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> output_path;

  bool optimal_control() const noexcept { return !control_value.has_value(); }
};

ScenarioFile parse_scenario(std::string_view text);
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Control value to simulate: the configured one, or the golden-section
/// optimum of the closed-form seller payoff when "optimal".
double resolve_control(const ScenarioFile& file);
AuctionScenario to_scenario(const ScenarioFile& file);

/// Parses a beta: a decimal, a ratio `a/b`, or `sqrt(x)` of either.
double parse_beta(std::string_view token);
std::vector<double> parse_beta_list(std::string_view list);

/// 17 significant digits, the form used in CSV and JSON reports.
std::string format_exact(double value);

struct Quantity {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t replications = 0;
  std::uint64_t seed = 0;
};

std::vector<Quantity> report_quantities(const PayoffReport& report);
std::string render_csv(std::span<const Quantity> quantities);
std::string render_json(const ScenarioFile& file, double control_value,
                        std::span<const Quantity> quantities);
/// Reads back a CSV produced by render_csv.
std::vector<Quantity> parse_csv(std::string_view csv);

int cmd_analyze(double beta, std::ostream& out, std::ostream& err);
int cmd_simulate(const std::filesystem::path& config, unsigned workers, std::ostream& out,
                 std::ostream& err);
int cmd_compare(std::span<const double> betas, std::ostream& out, std::ostream& err);
int cmd_verify(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

}  // namespace tamech::cli

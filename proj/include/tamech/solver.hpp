#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tamech/golden_section.hpp"
#include "tamech/model.hpp"

namespace tamech::solver {

using PayoffFunction = std::function<double(double)>;

struct ControlOptimum {
  double c_star = 0.0;
  double value = 0.0;
  GoldenSectionResult search;
};

/// Default search bracket for the designer's control: [0, max(1, beta^2)].
double default_control_upper(double beta);

/// Maximizes a designer payoff over the control value by golden section.
ControlOptimum maximize_control(const PayoffFunction& payoff, double lo, double hi,
                                double tol = 1e-8);

/// The seller's payoff in the two-bidder closed-form setting, as a function of c.
PayoffFunction seller_payoff_function(double beta);

enum class ControlRegime {
  zero_optimum,      // payoff does not rise at lo: c* = 0
  positive_optimum,  // payoff rises at lo: c* > 0
};

struct ConcavityVerdict {
  bool satisfied = false;
  /// Grid point of the largest positive curvature when violated.
  std::optional<double> violated_at;
  /// Largest curvature estimate over the interior grid points.
  double max_curvature = 0.0;
  /// One-sided difference quotient at lo.
  double initial_slope = 0.0;
  ControlRegime regime = ControlRegime::zero_optimum;
};

inline constexpr double kCurvatureTolerance = 1e-9;

/// Checks concavity of `payoff` on an m-point uniform grid over [lo, hi]:
/// every central second difference quotient must stay below
/// kCurvatureTolerance. The regime is classified from the slope just to the
/// right of lo. Throws DomainError if m < 5, lo < 0 or !(lo < hi).
ConcavityVerdict check_concavity(const PayoffFunction& payoff, double lo, double hi,
                                 std::size_t points);

/// Discretized symmetric bid function over adjusted types.
struct BidGrid {
  std::vector<double> grid_points;
  std::vector<double> bids;
  int iterations = 0;
  double residual = 0.0;

  std::size_t size() const noexcept { return grid_points.size(); }
  double spacing() const noexcept;
  /// Piecewise-linear interpolation, clamped to the end values outside the grid.
  double bid_at(double adjusted_type) const;
  /// Largest |bid - reference(type)| over the grid points.
  double sup_distance(const std::function<double(double)>& reference) const;
  /// Throws DomainError unless bids are nondecreasing and 0 <= bid <= type.
  void validate() const;
};

/// A symmetric bidding strategy mapping an adjusted type to a bid.
class BidStrategy {
 public:
  BidStrategy(std::string name, std::function<double(double)> bid)
      : name_(std::move(name)), bid_(std::move(bid)) {}

  /// The symmetric equilibrium for uniform types: the adjusted type minus its
  /// excess over the bottom of the support divided by n. For two bidders on
  /// [0, 1] this is half the adjusted type.
  static BidStrategy equilibrium(const AuctionScenario& scenario);
  static BidStrategy from_grid(BidGrid grid);
  /// Bid the full adjusted type.
  static BidStrategy truthful();

  double operator()(double adjusted_type) const { return bid_(adjusted_type); }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  std::function<double(double)> bid_;
};

/// Probability of winning with `bid` when each of n-1 opponents follows
/// `opponents`; an exact tie with one opponent counts as half a win.
double win_probability(const AuctionScenario& scenario, const BidGrid& opponents, double bid);

/// (type - bid) * win_probability.
double interim_payoff(const AuctionScenario& scenario, const BidGrid& opponents,
                      double adjusted_type, double bid);

struct BestResponseOptions {
  std::size_t grid_size = 512;
  double tol = 1e-6;
  int max_iters = 100;
};

/// Iterates grid best responses from truthful bidding until successive bid
/// grids differ by less than tol in sup norm. Throws ConvergenceError with the
/// last residual after max_iters.
BidGrid best_response_iteration(const AuctionScenario& scenario,
                                const BestResponseOptions& options = {});

struct DeviationScan {
  double max_gain = 0.0;
  double worst_type = 0.0;
  double best_deviation = 0.0;
};

/// For each sample type, compares the grid strategy's interim payoff with the
/// best of `deviation_points` evenly spaced bids in [0, type].
DeviationScan deviation_scan(const AuctionScenario& scenario, const BidGrid& grid,
                             std::span<const double> adjusted_types,
                             std::size_t deviation_points = 2001);

/// Direct mechanism in which the highest adjusted report wins and pays
/// `payment_share` times its adjusted report. 1/2 is the standard SCF.
struct DirectMechanism {
  double payment_share = 0.5;
};

inline constexpr DirectMechanism kHalfReportScf{0.5};
inline constexpr DirectMechanism kFullReportScf{1.0};

/// Exact interim payoff of reporting `report` with intrinsic factor `theta0`
/// while every opponent reports truthfully.
double direct_interim_payoff(const AuctionScenario& scenario, const DirectMechanism& mechanism,
                             double theta0, double report);

struct RegretReport {
  /// max over the truth grid of (best deviation payoff - truthful payoff).
  double max_regret = 0.0;
  double argmax_truth = 0.0;
  double argmax_deviation = 0.0;
  std::size_t grid_resolution = 0;
};

/// Exhaustive incentive-compatibility search over a truth x deviation grid of
/// intrinsic factors. Throws DomainError for grids with fewer than two points.
RegretReport ic_regret_search(const AuctionScenario& scenario, std::size_t truth_grid,
                              std::size_t deviation_grid,
                              const DirectMechanism& mechanism = kHalfReportScf);

struct RevelationCheck {
  bool consistent = true;
  std::size_t profiles_checked = 0;
  std::size_t mismatches = 0;
  double max_transfer_gap = 0.0;
};

/// Plays `strategy` in the first-price auction for each profile of intrinsic
/// factors and compares the outcome with the direct SCF on the adjusted types:
/// same winner and transfers within `tolerance`.
RevelationCheck check_revelation(const AuctionScenario& scenario,
                                 std::span<const std::vector<double>> profiles,
                                 const BidStrategy& strategy, double tolerance = 1e-12);

bool revelation_consistency(const AuctionScenario& scenario,
                            std::span<const std::vector<double>> profiles,
                            const BidStrategy& strategy, double tolerance = 1e-12);

}  // namespace tamech::solver

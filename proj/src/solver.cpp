#include "tamech/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tamech/analytic.hpp"
#include "tamech/errors.hpp"

namespace tamech::solver {

double default_control_upper(double beta) { return std::max(1.0, beta * beta); }

ControlOptimum maximize_control(const PayoffFunction& payoff, double lo, double hi, double tol) {
  ControlOptimum out;
  out.search = golden_section_maximize(payoff, lo, hi, tol);
  out.c_star = out.search.argmax;
  out.value = out.search.value;
  return out;
}

PayoffFunction seller_payoff_function(double beta) {
  if (!(beta >= 0.0)) throw DomainError("beta must be >= 0");
  return [beta](double c) { return analytic::seller_expected_payoff(beta, c); };
}

ConcavityVerdict check_concavity(const PayoffFunction& payoff, double lo, double hi,
                                 std::size_t points) {
  if (points < 5) throw DomainError("concavity check needs at least 5 grid points");
  if (!(lo >= 0.0) || !(lo < hi)) throw DomainError("concavity check needs 0 <= lo < hi");

  const double h = (hi - lo) / static_cast<double>(points - 1);
  std::vector<double> values(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double c = i + 1 == points ? hi : lo + h * static_cast<double>(i);
    values[i] = payoff(c);
    if (!std::isfinite(values[i])) throw NumericError("payoff is not finite", c);
  }

  ConcavityVerdict verdict;
  verdict.max_curvature = -std::numeric_limits<double>::infinity();
  double worst_at = lo;
  for (std::size_t i = 1; i + 1 < points; ++i) {
    const double curvature = (values[i - 1] - 2.0 * values[i] + values[i + 1]) / (h * h);
    if (curvature > verdict.max_curvature) {
      verdict.max_curvature = curvature;
      worst_at = lo + h * static_cast<double>(i);
    }
  }
  verdict.satisfied = verdict.max_curvature < kCurvatureTolerance;
  if (!verdict.satisfied) verdict.violated_at = worst_at;

  // The grid step is too coarse to see the slope at lo when c* is tiny.
  const double step = 1e-8 * (hi - lo);
  verdict.initial_slope = (payoff(lo + step) - payoff(lo)) / step;
  verdict.regime = verdict.initial_slope > kCurvatureTolerance ? ControlRegime::positive_optimum
                                                               : ControlRegime::zero_optimum;
  return verdict;
}

double BidGrid::spacing() const noexcept {
  if (grid_points.size() < 2) return 0.0;
  return (grid_points.back() - grid_points.front()) / static_cast<double>(grid_points.size() - 1);
}

double BidGrid::bid_at(double adjusted_type) const {
  if (grid_points.empty()) throw DomainError("empty bid grid");
  if (adjusted_type <= grid_points.front()) return bids.front();
  if (adjusted_type >= grid_points.back()) return bids.back();
  const auto it = std::upper_bound(grid_points.begin(), grid_points.end(), adjusted_type);
  const auto j = static_cast<std::size_t>(it - grid_points.begin());
  const double t0 = grid_points[j - 1];
  const double t1 = grid_points[j];
  const double w = (adjusted_type - t0) / (t1 - t0);
  return bids[j - 1] + w * (bids[j] - bids[j - 1]);
}

double BidGrid::sup_distance(const std::function<double(double)>& reference) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    worst = std::max(worst, std::abs(bids[i] - reference(grid_points[i])));
  }
  return worst;
}

void BidGrid::validate() const {
  if (grid_points.size() != bids.size() || grid_points.size() < 2) {
    throw DomainError("bid grid needs matching point and bid vectors of size >= 2");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    if (i > 0 && (bids[i] < bids[i - 1] || grid_points[i] <= grid_points[i - 1])) {
      throw DomainError("bid grid is not monotone at index " + std::to_string(i));
    }
    if (bids[i] < 0.0 || bids[i] > grid_points[i]) {
      throw DomainError("bid outside [0, type] at index " + std::to_string(i));
    }
  }
}

BidStrategy BidStrategy::equilibrium(const AuctionScenario& scenario) {
  if (scenario.is_closed_form_setting()) {
    return BidStrategy("equilibrium", [](double t) { return analytic::equilibrium_bid(t); });
  }
  const double n = static_cast<double>(scenario.n_bidders());
  const double floor = scenario.adjust(scenario.distribution().lower());
  return BidStrategy("equilibrium", [n, floor](double t) { return t - (t - floor) / n; });
}

BidStrategy BidStrategy::from_grid(BidGrid grid) {
  return BidStrategy("grid", [g = std::move(grid)](double t) { return g.bid_at(t); });
}

BidStrategy BidStrategy::truthful() {
  return BidStrategy("truthful", [](double t) { return t; });
}

namespace {

// sup { t : b(t) < bid } (strict) or sup { t : b(t) <= bid } over a
// nondecreasing piecewise-linear bid function; the grid's lowest point when
// the set is empty.
double type_threshold(const BidGrid& grid, double bid, bool strict) {
  const auto below = [bid, strict](double b) { return strict ? b < bid : b <= bid; };
  const auto& b = grid.bids;
  const auto& t = grid.grid_points;
  if (!below(b.front())) return t.front();
  if (below(b.back())) return t.back();
  const auto it = std::partition_point(b.begin(), b.end(), below);
  const auto j = static_cast<std::size_t>(it - b.begin());
  const double w = (bid - b[j - 1]) / (b[j] - b[j - 1]);
  return t[j - 1] + w * (t[j] - t[j - 1]);
}

BidGrid initial_grid(const AuctionScenario& scenario, std::size_t grid_size) {
  const auto& dist = scenario.distribution();
  BidGrid grid;
  grid.grid_points.resize(grid_size);
  const double width = dist.upper() - dist.lower();
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double theta0 = i + 1 == grid_size
                              ? dist.upper()
                              : dist.lower() + width * static_cast<double>(i) /
                                                   static_cast<double>(grid_size - 1);
    grid.grid_points[i] = scenario.adjust(theta0);
  }
  grid.bids = grid.grid_points;
  return grid;
}

// Best response to a piecewise-linear opponent bid function. On each strictly
// increasing segment the win probability is W(b) = P(b)^m with P the opponent's
// cdf composed with the segment's inverse, and the first-order condition
// P(b) = m P'(b) (type - b) has a single sign change; it is solved by bisection
// to machine precision. Grid noise is amplified by roughly 1/spacing per
// iteration, so an approximate optimizer here would prevent convergence.
double best_response_bid(const AuctionScenario& scenario, const BidGrid& opponents, double type) {
  if (type <= 0.0) return 0.0;
  const auto& dist = scenario.distribution();
  const double scale = scenario.type_scale();
  const double m = static_cast<double>(scenario.n_bidders() - 1);
  const auto& b = opponents.bids;
  const auto& t = opponents.grid_points;

  double best_bid = 0.0;
  double best_value = interim_payoff(scenario, opponents, type, 0.0);
  const auto consider = [&](double bid) {
    if (!(bid >= 0.0 && bid <= type)) return;
    const double v = interim_payoff(scenario, opponents, type, bid);
    if (v > best_value) {
      best_value = v;
      best_bid = bid;
    }
  };

  for (std::size_t j = 1; j < b.size(); ++j) {
    const double b0 = b[j - 1];
    const double b1 = b[j];
    if (!(b1 > b0) || b0 >= type) continue;
    consider(b0);
    consider(b1);
    const double dt_db = (t[j] - t[j - 1]) / (b1 - b0);
    const auto foc = [&](double bid) {
      const double intrinsic = (t[j - 1] + (bid - b0) * dt_db) / scale;
      return m * dist.pdf(intrinsic) * dt_db / scale * (type - bid) - dist.cdf(intrinsic);
    };
    double lo = b0;
    double hi = std::min(b1, type);
    if (!(foc(lo) > 0.0 && foc(hi) < 0.0)) continue;
    for (int k = 0; k < 200; ++k) {
      const double mid = lo + (hi - lo) / 2.0;
      if (mid <= lo || mid >= hi) break;
      (foc(mid) > 0.0 ? lo : hi) = mid;
    }
    consider(lo);
    consider(hi);
  }
  // Above the opponents' highest bid the win is certain and payoff falls with the bid.
  consider(b.back());
  return best_bid;
}

}  // namespace

double win_probability(const AuctionScenario& scenario, const BidGrid& opponents, double bid) {
  const double scale = scenario.type_scale();
  const auto& dist = scenario.distribution();
  const double below = dist.cdf(type_threshold(opponents, bid, true) / scale);
  const double at_or_below = dist.cdf(type_threshold(opponents, bid, false) / scale);
  const double single = 0.5 * (below + at_or_below);
  return std::pow(single, static_cast<double>(scenario.n_bidders() - 1));
}

double interim_payoff(const AuctionScenario& scenario, const BidGrid& opponents,
                      double adjusted_type, double bid) {
  return (adjusted_type - bid) * win_probability(scenario, opponents, bid);
}

BidGrid best_response_iteration(const AuctionScenario& scenario,
                                const BestResponseOptions& options) {
  if (options.grid_size < 64) throw DomainError("best response grid needs >= 64 points");
  if (!(options.tol > 0.0) || options.max_iters < 1) {
    throw DomainError("best response needs tol > 0 and max_iters >= 1");
  }
  BidGrid current = initial_grid(scenario, options.grid_size);
  double residual = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= options.max_iters; ++iter) {
    BidGrid next = current;
    double running_max = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double type = next.grid_points[i];
      double bid = best_response_bid(scenario, current, type);
      // Optimal bids are monotone in type; this strips refinement noise.
      bid = std::clamp(std::max(bid, running_max), 0.0, std::max(type, 0.0));
      running_max = bid;
      next.bids[i] = bid;
    }
    residual = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      residual = std::max(residual, std::abs(next.bids[i] - current.bids[i]));
    }
    current = std::move(next);
    current.iterations = iter;
    current.residual = residual;
    if (residual < options.tol) return current;
  }
  throw ConvergenceError("best response iteration did not converge", residual,
                         options.max_iters);
}

DeviationScan deviation_scan(const AuctionScenario& scenario, const BidGrid& grid,
                             std::span<const double> adjusted_types,
                             std::size_t deviation_points) {
  if (deviation_points < 2) throw DomainError("deviation scan needs >= 2 bids");
  DeviationScan scan;
  scan.max_gain = -std::numeric_limits<double>::infinity();
  for (const double type : adjusted_types) {
    const double on_path = interim_payoff(scenario, grid, type, grid.bid_at(type));
    double best = on_path;
    double best_bid = grid.bid_at(type);
    for (std::size_t j = 0; j < deviation_points; ++j) {
      const double b = type * static_cast<double>(j) / static_cast<double>(deviation_points - 1);
      const double v = interim_payoff(scenario, grid, type, b);
      if (v > best) {
        best = v;
        best_bid = b;
      }
    }
    if (best - on_path > scan.max_gain) {
      scan.max_gain = best - on_path;
      scan.worst_type = type;
      scan.best_deviation = best_bid;
    }
  }
  return scan;
}

double direct_interim_payoff(const AuctionScenario& scenario, const DirectMechanism& mechanism,
                             double theta0, double report) {
  const double scale = scenario.type_scale();
  const double win = std::pow(scenario.distribution().cdf(report),
                              static_cast<double>(scenario.n_bidders() - 1));
  return scale * (theta0 - mechanism.payment_share * report) * win;
}

RegretReport ic_regret_search(const AuctionScenario& scenario, std::size_t truth_grid,
                              std::size_t deviation_grid, const DirectMechanism& mechanism) {
  if (truth_grid < 2 || deviation_grid < 2) {
    throw DomainError("regret search needs at least two points per grid");
  }
  const auto& dist = scenario.distribution();
  const auto grid_value = [&](std::size_t i, std::size_t m) {
    if (i + 1 == m) return dist.upper();
    return dist.lower() +
           (dist.upper() - dist.lower()) * static_cast<double>(i) / static_cast<double>(m - 1);
  };

  RegretReport report;
  report.grid_resolution = std::min(truth_grid, deviation_grid);
  report.max_regret = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < truth_grid; ++i) {
    const double theta0 = grid_value(i, truth_grid);
    const double truthful = direct_interim_payoff(scenario, mechanism, theta0, theta0);
    for (std::size_t j = 0; j < deviation_grid; ++j) {
      const double report_value = grid_value(j, deviation_grid);
      const double gain =
          direct_interim_payoff(scenario, mechanism, theta0, report_value) - truthful;
      if (gain > report.max_regret) {
        report.max_regret = gain;
        report.argmax_truth = theta0;
        report.argmax_deviation = report_value;
      }
    }
  }
  return report;
}

RevelationCheck check_revelation(const AuctionScenario& scenario,
                                 std::span<const std::vector<double>> profiles,
                                 const BidStrategy& strategy, double tolerance) {
  RevelationCheck check;
  std::vector<double> adjusted(scenario.n_bidders());
  std::vector<double> bids(scenario.n_bidders());
  for (const auto& profile : profiles) {
    if (profile.size() != scenario.n_bidders()) {
      throw DomainError("type profile size differs from the number of bidders");
    }
    for (std::size_t i = 0; i < profile.size(); ++i) {
      adjusted[i] = scenario.adjust(profile[i]);
      bids[i] = strategy(adjusted[i]);
    }
    const SocialChoiceOutcome played = allocate_to_highest(bids, bids);
    const SocialChoiceOutcome direct = scf_outcome(adjusted);

    double gap = std::abs(played.seller_transfer - direct.seller_transfer);
    for (std::size_t i = 0; i < profile.size(); ++i) {
      gap = std::max(gap, std::abs(played.transfers[i] - direct.transfers[i]));
    }
    check.max_transfer_gap = std::max(check.max_transfer_gap, gap);
    if (played.winner() != direct.winner() || gap > tolerance) ++check.mismatches;
    ++check.profiles_checked;
  }
  check.consistent = check.mismatches == 0;
  return check;
}

bool revelation_consistency(const AuctionScenario& scenario,
                            std::span<const std::vector<double>> profiles,
                            const BidStrategy& strategy, double tolerance) {
  return check_revelation(scenario, profiles, strategy, tolerance).consistent;
}

}  // namespace tamech::solver

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tamech/model.hpp"
#include "tamech/solver.hpp"

namespace tamech::montecarlo {

enum class BidStrategyKind { analytic_equilibrium, grid_function };

struct SimulationConfig {
  AuctionScenario scenario;
  std::uint64_t replications = 1;
  std::uint64_t seed = 0;
  BidStrategyKind bid_strategy = BidStrategyKind::analytic_equilibrium;
  /// Required when bid_strategy is grid_function.
  std::optional<solver::BidGrid> bid_grid;

  /// Throws DomainError on zero replications or a missing grid.
  void validate() const;
  solver::BidStrategy strategy() const;
};

/// One play of the first-price auction.
struct AuctionRound {
  std::vector<double> intrinsic_types;
  std::vector<double> adjusted_types;
  std::vector<double> bids;
  SocialChoiceOutcome outcome;
  std::vector<double> utilities;
  double winning_bid = 0.0;
  /// Winning bid minus the control cost.
  double seller_revenue = 0.0;
};

/// Plays the auction on the given intrinsic factors (one per bidder).
AuctionRound run_auction_once(const AuctionScenario& scenario, const solver::BidStrategy& strategy,
                              std::span<const double> intrinsic_types);

/// Draws intrinsic factors from the streams keyed by (seed, replication, bidder).
AuctionRound run_auction_once(const AuctionScenario& scenario, const solver::BidStrategy& strategy,
                              std::uint64_t seed, std::uint64_t replication);

/// Replications are grouped into fixed blocks of this size; block sums are
/// merged in block order, so results do not depend on the worker count.
inline constexpr std::uint64_t kBlockSize = 4096;

/// Sample-mean payoffs with standard errors. `workers` = 0 picks the hardware
/// concurrency. Bit-identical for identical configs and any worker count.
PayoffReport estimate_payoffs(const SimulationConfig& config, unsigned workers = 1);

/// Sample mean of max(U1, U2) for uniform[0,1] draws. Throws DomainError if n_reps == 0.
Estimate estimate_winner_expectation(std::uint64_t n_reps, std::uint64_t seed,
                                     unsigned workers = 1);

/// Running mean and sum of squared deviations; merges are order-sensitive, so
/// callers merge in a fixed order.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept;
  void merge(const Moments& other) noexcept;
  /// Sample standard deviation over sqrt(count); 0 for fewer than two samples.
  double standard_error() const noexcept;
};

}  // namespace tamech::montecarlo

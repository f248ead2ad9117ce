#include "tamech/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "tamech/errors.hpp"

namespace tamech::montecarlo {

void Moments::add(double x) noexcept {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

void Moments::merge(const Moments& other) noexcept {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double n_a = static_cast<double>(count);
  const double n_b = static_cast<double>(other.count);
  const double n = n_a + n_b;
  const double delta = other.mean - mean;
  mean += delta * n_b / n;
  m2 += other.m2 + delta * delta * n_a * n_b / n;
  count += other.count;
}

double Moments::standard_error() const noexcept {
  if (count < 2) return 0.0;
  const double n = static_cast<double>(count);
  return std::sqrt(m2 / (n - 1.0)) / std::sqrt(n);
}

void SimulationConfig::validate() const {
  if (replications == 0) throw DomainError("replications must be >= 1");
  if (bid_strategy == BidStrategyKind::grid_function) {
    if (!bid_grid) throw DomainError("grid_function strategy needs a bid grid");
    bid_grid->validate();
  }
}

solver::BidStrategy SimulationConfig::strategy() const {
  if (bid_strategy == BidStrategyKind::grid_function) {
    return solver::BidStrategy::from_grid(*bid_grid);
  }
  return solver::BidStrategy::equilibrium(scenario);
}

AuctionRound run_auction_once(const AuctionScenario& scenario, const solver::BidStrategy& strategy,
                              std::span<const double> intrinsic_types) {
  const std::size_t n = scenario.n_bidders();
  if (intrinsic_types.size() != n) {
    throw DomainError("one intrinsic factor per bidder is required");
  }
  AuctionRound round;
  round.intrinsic_types.assign(intrinsic_types.begin(), intrinsic_types.end());
  round.adjusted_types.resize(n);
  round.bids.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    round.adjusted_types[i] = scenario.adjust(intrinsic_types[i]);
    round.bids[i] = strategy(round.adjusted_types[i]);
  }
  round.outcome = allocate_to_highest(round.bids, round.bids);
  const std::size_t w = round.outcome.winner();
  round.winning_bid = round.bids[w];
  round.utilities.assign(n, 0.0);
  round.utilities[w] = round.adjusted_types[w] - round.winning_bid;
  round.seller_revenue = round.winning_bid - scenario.control_value();
  return round;
}

AuctionRound run_auction_once(const AuctionScenario& scenario, const solver::BidStrategy& strategy,
                              std::uint64_t seed, std::uint64_t replication) {
  std::vector<double> draws(scenario.n_bidders());
  for (std::size_t i = 0; i < draws.size(); ++i) {
    RandomStream stream(seed, replication, i);
    draws[i] = sample_intrinsic(scenario.distribution(), stream);
  }
  return run_auction_once(scenario, strategy, draws);
}

namespace {

unsigned resolve_workers(unsigned workers) {
  if (workers != 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs `fill(block_index, first_rep, last_rep, slot)` for every block, spread
// over workers, then hands back the per-block slots in block order.
template <typename Slot, typename Fill>
std::vector<Slot> run_blocks(std::uint64_t replications, unsigned workers, Fill fill) {
  const std::uint64_t n_blocks = (replications + kBlockSize - 1) / kBlockSize;
  std::vector<Slot> slots(n_blocks);
  std::atomic<std::uint64_t> next{0};
  const auto work = [&] {
    for (std::uint64_t b = next++; b < n_blocks; b = next++) {
      const std::uint64_t first = b * kBlockSize;
      const std::uint64_t last = std::min(replications, first + kBlockSize);
      fill(first, last, slots[b]);
    }
  };
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), n_blocks));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  return slots;
}

struct PayoffBlock {
  Moments winning_bid;
  std::vector<Moments> bidders;
};

}  // namespace

PayoffReport estimate_payoffs(const SimulationConfig& config, unsigned workers) {
  config.validate();
  const solver::BidStrategy strategy = config.strategy();
  const AuctionScenario& scenario = config.scenario;
  const std::size_t n = scenario.n_bidders();

  const auto blocks = run_blocks<PayoffBlock>(
      config.replications, workers,
      [&](std::uint64_t first, std::uint64_t last, PayoffBlock& block) {
        block.bidders.assign(n, Moments{});
        for (std::uint64_t rep = first; rep < last; ++rep) {
          const AuctionRound round = run_auction_once(scenario, strategy, config.seed, rep);
          block.winning_bid.add(round.winning_bid);
          for (std::size_t i = 0; i < n; ++i) block.bidders[i].add(round.utilities[i]);
        }
      });

  Moments winning_bid;
  std::vector<Moments> bidders(n);
  for (const auto& block : blocks) {
    winning_bid.merge(block.winning_bid);
    for (std::size_t i = 0; i < n; ++i) bidders[i].merge(block.bidders[i]);
  }

  PayoffReport report;
  report.method = PayoffMethod::monte_carlo;
  report.control_value = scenario.control_value();
  report.replications = config.replications;
  report.seed = config.seed;
  report.winning_bid = {winning_bid.mean, winning_bid.standard_error()};
  // The control cost is a constant shift: same standard error as the bid.
  report.seller_payoff = {winning_bid.mean - scenario.control_value(),
                          winning_bid.standard_error()};
  for (const auto& m : bidders) report.bidder_payoffs.push_back({m.mean, m.standard_error()});
  return report;
}

Estimate estimate_winner_expectation(std::uint64_t n_reps, std::uint64_t seed, unsigned workers) {
  if (n_reps == 0) throw DomainError("n_reps must be >= 1");
  const auto dist = ValuationDistribution::uniform(0.0, 1.0);
  const auto blocks = run_blocks<Moments>(
      n_reps, workers, [&](std::uint64_t first, std::uint64_t last, Moments& block) {
        for (std::uint64_t rep = first; rep < last; ++rep) {
          RandomStream a(seed, rep, 0);
          RandomStream b(seed, rep, 1);
          block.add(std::max(sample_intrinsic(dist, a), sample_intrinsic(dist, b)));
        }
      });
  Moments total;
  for (const auto& block : blocks) total.merge(block);
  return {total.mean, total.standard_error()};
}

}  // namespace tamech::montecarlo

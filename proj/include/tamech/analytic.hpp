#pragma once

#include "tamech/model.hpp"

namespace tamech::analytic {

// Exact values of the two-bidder uniform[0,1] setting, each computed from its
// defining expression.

/// E[max(U1, U2)] = integral of z * 2z over [0, 1].
inline constexpr double kWinnerExpectation = 2.0 / 3.0;
/// Seller's payoff with no control: half the expected highest type.
inline constexpr double kSellerInitialPayoff = kWinnerExpectation / 2.0;
/// Each bidder's payoff with no control: half of the winner's surplus E[max]/2.
inline constexpr double kBidderInitialPayoff = kSellerInitialPayoff / 2.0;
/// Optimal reserve for two uniform[0,1] bidders: the root of 2r - 1.
inline constexpr double kBenchmarkReserve = 1.0 / 2.0;
/// r^2 (1 - r) + [y^2/2 - y^3/3] from r to 1, at r = 1/2: 1/8 + 1/12.
inline constexpr double kBenchmarkPayment =
    kBenchmarkReserve * kBenchmarkReserve * (1.0 - kBenchmarkReserve) +
    ((1.0 / 2.0 - 1.0 / 3.0) - (kBenchmarkReserve * kBenchmarkReserve / 2.0 -
                                kBenchmarkReserve * kBenchmarkReserve * kBenchmarkReserve / 3.0));
inline constexpr double kBenchmarkSellerRevenue = 2.0 * kBenchmarkPayment;
/// Expected valuation of a bidder above the reserve, taken as the midpoint of [r, 1].
inline constexpr double kBenchmarkValuation = (kBenchmarkReserve + 1.0) / 2.0;
inline constexpr double kBenchmarkBidderPayoff = kBenchmarkValuation - kBenchmarkPayment;

/// beta above which the seller beats the benchmark: (1/3)(1 + beta^2/12) = 5/12.
double seller_threshold_beta();
/// beta above which each bidder beats the benchmark: 1/6 + beta^2/36 = 13/24.
double bidder_threshold_beta();

/// Symmetric equilibrium bid of the two-bidder game: half the adjusted type.
double equilibrium_bid(double adjusted_type);

/// (1 + beta sqrt(c)) / 3 - c. Throws DomainError on negative arguments.
double seller_expected_payoff(double beta, double control);
/// Each bidder's ex ante payoff at any control: (1 + beta sqrt(c)) / 6.
double bidder_expected_payoff(double beta, double control);
/// beta^2 / 36.
double optimal_control(double beta);
/// (1/3)(1 + beta^2/12).
double seller_payoff_at_optimum(double beta);
/// 1/6 + beta^2/36.
double bidder_payoff_at_optimum(double beta);
/// Expected maximum of two independent uniform[0,1] draws.
double winner_expectation_oracle();

/// Closed-form payoffs for `scenario`. Throws DomainError unless the scenario
/// is the two-bidder uniform[0,1] setting.
PayoffReport analytic_report(const AuctionScenario& scenario);

/// Ex ante expected payment of one bidder in a first-price auction with reserve
/// r, two uniform[0,1] bidders: r^2 (1 - r) + integral_r^1 y (1 - y) dy.
/// Throws DomainError for r outside [0, 1].
double myerson_expected_payment(double reserve);

/// The same expected payment evaluated by adaptive quadrature of
/// r (1 - F(r)) G(r) + integral_r^w y (1 - F(y)) g(y) dy for `n_bidders`
/// i.i.d. bidders drawn from `dist`, where G = F^(n-1).
double myerson_expected_payment_quadrature(double reserve, const ValuationDistribution& dist,
                                           std::size_t n_bidders);

struct BenchmarkReport {
  double optimal_reserve = 0.0;
  double bidder_expected_payment = 0.0;
  double seller_revenue = 0.0;
  double bidder_expected_payoff = 0.0;
  double bidder_expected_valuation = 0.0;
};

/// Optimal-reserve first-price benchmark for two uniform[0,1] bidders. The
/// reserve is located numerically by maximizing the seller's revenue.
BenchmarkReport myerson_benchmark();

struct ParetoComparison {
  double beta = 0.0;
  double seller_adjusted = 0.0;
  double seller_benchmark = 0.0;
  double bidder_adjusted = 0.0;
  double bidder_benchmark = 0.0;
  bool seller_improves = false;
  bool bidder_improves = false;
  bool pareto_optimal = false;
};

/// Payoffs at the optimal control against the reserve benchmark. Improvement
/// is strict: equality at a threshold does not count.
ParetoComparison pareto_compare(double beta);

}  // namespace tamech::analytic

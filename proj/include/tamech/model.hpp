#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tamech/random_stream.hpp"

namespace tamech {

enum class DistributionKind { uniform };

/// Distribution of a bidder's intrinsic factor. Only the uniform family is
/// implemented; `kind` leaves room for others without changing signatures.
class ValuationDistribution {
 public:
  /// Throws DomainError unless lower < upper and both are finite.
  static ValuationDistribution uniform(double lower, double upper);

  DistributionKind kind() const noexcept { return kind_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

  double cdf(double x) const noexcept;
  double pdf(double x) const noexcept;
  /// Inverse cdf; p is clamped to [0, 1].
  double quantile(double p) const noexcept;
  double mean() const noexcept;

  bool operator==(const ValuationDistribution&) const = default;

 private:
  ValuationDistribution(DistributionKind kind, double lower, double upper)
      : kind_(kind), lower_(lower), upper_(upper) {}

  DistributionKind kind_;
  double lower_;
  double upper_;
};

/// theta_c = (1 + beta * sqrt(c)) * theta_0.
class TypeFunction {
 public:
  /// Throws DomainError for negative or non-finite beta.
  explicit TypeFunction(double beta);

  double beta() const noexcept { return beta_; }

  /// Multiplier (1 + beta * sqrt(c)) applied to every intrinsic factor.
  double scale(double control) const;
  double operator()(double theta0, double control) const;

  bool operator==(const TypeFunction&) const = default;

 private:
  double beta_;
};

double apply_type_function(const TypeFunction& tf, double theta0, double control);

/// Full description of one type-adjustable auction experiment.
class AuctionScenario {
 public:
  /// Throws DomainError when n_bidders < 2 or control_value is negative.
  AuctionScenario(std::size_t n_bidders, ValuationDistribution distribution,
                  TypeFunction type_function, double control_value);

  /// The two-bidder uniform[0,1] setting used by every closed form.
  static AuctionScenario standard_setting(double beta, double control_value);

  std::size_t n_bidders() const noexcept { return n_bidders_; }
  const ValuationDistribution& distribution() const noexcept { return distribution_; }
  const TypeFunction& type_function() const noexcept { return type_function_; }
  double control_value() const noexcept { return control_value_; }
  double beta() const noexcept { return type_function_.beta(); }

  /// (1 + beta * sqrt(c)) for this scenario's control value.
  double type_scale() const { return type_function_.scale(control_value_); }
  double adjust(double theta0) const { return type_function_(theta0, control_value_); }

  /// Same scenario with a different control value.
  AuctionScenario with_control(double control_value) const;

  /// True for two bidders with uniform[0,1] intrinsic factors.
  bool is_closed_form_setting() const noexcept;

 private:
  std::size_t n_bidders_;
  ValuationDistribution distribution_;
  TypeFunction type_function_;
  double control_value_;
};

/// Allocation and transfers for one type profile. Transfers are signed from
/// the bidder's side: negative means the bidder pays.
struct SocialChoiceOutcome {
  std::vector<int> allocation;
  int seller_allocation = 0;
  std::vector<double> transfers;
  double seller_transfer = 0.0;

  /// Index of the bidder holding the object; n_bidders() if the seller keeps it.
  std::size_t winner() const noexcept;
  std::size_t n_bidders() const noexcept { return allocation.size(); }
};

/// Highest value wins, ties to the lowest index. Throws DomainError on empty input.
std::size_t winner_index(std::span<const double> values);

/// Direct-mechanism outcome: the highest adjusted type gets the object and
/// pays half its adjusted type to the seller.
SocialChoiceOutcome scf_outcome(std::span<const double> adjusted_types);

/// Winner-takes-object outcome where the winner pays `payments[winner]`.
/// Shared by the indirect mechanism (payments are bids) and the SCF.
SocialChoiceOutcome allocate_to_highest(std::span<const double> ranking,
                                        std::span<const double> payments);

/// Draws one intrinsic factor from `dist` using the next value of `stream`.
double sample_intrinsic(const ValuationDistribution& dist, RandomStream& stream);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

enum class PayoffMethod { analytic, monte_carlo };

std::string_view to_string(PayoffMethod method) noexcept;

struct PayoffReport {
  double control_value = 0.0;
  Estimate seller_payoff;
  /// Expected winning bid (seller revenue before the control cost).
  Estimate winning_bid;
  std::vector<Estimate> bidder_payoffs;
  std::uint64_t replications = 0;
  std::uint64_t seed = 0;
  PayoffMethod method = PayoffMethod::analytic;
};

}  // namespace tamech

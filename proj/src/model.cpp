#include "tamech/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tamech/errors.hpp"

namespace tamech {

ValuationDistribution ValuationDistribution::uniform(double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw DomainError("uniform distribution requires finite lower < upper");
  }
  return ValuationDistribution(DistributionKind::uniform, lower, upper);
}

double ValuationDistribution::cdf(double x) const noexcept {
  if (x <= lower_) return 0.0;
  if (x >= upper_) return 1.0;
  return (x - lower_) / (upper_ - lower_);
}

double ValuationDistribution::pdf(double x) const noexcept {
  if (x < lower_ || x > upper_) return 0.0;
  return 1.0 / (upper_ - lower_);
}

double ValuationDistribution::quantile(double p) const noexcept {
  p = std::clamp(p, 0.0, 1.0);
  if (p == 1.0) return upper_;
  return lower_ + p * (upper_ - lower_);
}

double ValuationDistribution::mean() const noexcept { return 0.5 * (lower_ + upper_); }

TypeFunction::TypeFunction(double beta) : beta_(beta) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw DomainError("type function coefficient beta must be finite and >= 0");
  }
}

double TypeFunction::scale(double control) const {
  if (!(control >= 0.0)) {
    throw DomainError("control value must be >= 0, got " + std::to_string(control));
  }
  return 1.0 + beta_ * std::sqrt(control);
}

double TypeFunction::operator()(double theta0, double control) const {
  // c == 0 must return theta0 bit-for-bit.
  if (control == 0.0) return theta0;
  return scale(control) * theta0;
}

double apply_type_function(const TypeFunction& tf, double theta0, double control) {
  if (!(control >= 0.0)) {
    throw DomainError("control value must be >= 0, got " + std::to_string(control));
  }
  return tf(theta0, control);
}

AuctionScenario::AuctionScenario(std::size_t n_bidders, ValuationDistribution distribution,
                                 TypeFunction type_function, double control_value)
    : n_bidders_(n_bidders),
      distribution_(distribution),
      type_function_(type_function),
      control_value_(control_value) {
  if (n_bidders < 2) throw DomainError("an auction needs at least two bidders");
  if (!std::isfinite(control_value) || control_value < 0.0) {
    throw DomainError("control value must be finite and >= 0");
  }
}

AuctionScenario AuctionScenario::standard_setting(double beta, double control_value) {
  return AuctionScenario(2, ValuationDistribution::uniform(0.0, 1.0), TypeFunction(beta),
                         control_value);
}

AuctionScenario AuctionScenario::with_control(double control_value) const {
  return AuctionScenario(n_bidders_, distribution_, type_function_, control_value);
}

bool AuctionScenario::is_closed_form_setting() const noexcept {
  return n_bidders_ == 2 && distribution_.kind() == DistributionKind::uniform &&
         distribution_.lower() == 0.0 && distribution_.upper() == 1.0;
}

std::size_t SocialChoiceOutcome::winner() const noexcept {
  auto it = std::find(allocation.begin(), allocation.end(), 1);
  return static_cast<std::size_t>(it - allocation.begin());
}

std::size_t winner_index(std::span<const double> values) {
  if (values.empty()) throw DomainError("empty type profile");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

SocialChoiceOutcome allocate_to_highest(std::span<const double> ranking,
                                        std::span<const double> payments) {
  if (ranking.size() != payments.size()) {
    throw DomainError("ranking and payment vectors differ in length");
  }
  const std::size_t w = winner_index(ranking);
  SocialChoiceOutcome out;
  out.allocation.assign(ranking.size(), 0);
  out.transfers.assign(ranking.size(), 0.0);
  out.allocation[w] = 1;
  out.seller_allocation = 0;
  out.transfers[w] = -payments[w];
  out.seller_transfer = payments[w];
  return out;
}

SocialChoiceOutcome scf_outcome(std::span<const double> adjusted_types) {
  if (adjusted_types.empty()) throw DomainError("empty type profile");
  std::vector<double> half(adjusted_types.begin(), adjusted_types.end());
  for (double& t : half) {
    if (!(t >= 0.0)) throw DomainError("adjusted types must be >= 0");
    t /= 2.0;
  }
  return allocate_to_highest(adjusted_types, half);
}

double sample_intrinsic(const ValuationDistribution& dist, RandomStream& stream) {
  return dist.quantile(stream.next_unit());
}

std::string_view to_string(PayoffMethod method) noexcept {
  switch (method) {
    case PayoffMethod::analytic:
      return "analytic";
    case PayoffMethod::monte_carlo:
      return "monte_carlo";
  }
  return "unknown";
}

}  // namespace tamech

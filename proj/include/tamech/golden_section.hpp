#pragma once

#include <functional>
#include <vector>

namespace tamech {

struct GoldenSectionResult {
  double argmax = 0.0;
  double value = 0.0;
  /// Final bracket; its width is below the requested tolerance.
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  /// Bracket width after every iteration, starting with the initial width.
  std::vector<double> widths;
};

/// Golden-section maximization of a unimodal function on [lo, hi].
///
/// The reported maximizer is the best of the final bracket's probes and the
/// two original endpoints, so a maximum sitting on the boundary is returned
/// exactly. Throws DomainError if !(lo < hi) or tol <= 0, and NumericError
/// (carrying the offending argument) if the objective returns a non-finite value.
GoldenSectionResult golden_section_maximize(const std::function<double(double)>& objective,
                                            double lo, double hi, double tol);

}  // namespace tamech

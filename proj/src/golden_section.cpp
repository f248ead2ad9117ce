#include "tamech/golden_section.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tamech/errors.hpp"

namespace tamech {
namespace {

// 1/phi and 1/phi^2.
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
const double kInvPhi2 = 1.0 - kInvPhi;

double evaluate(const std::function<double(double)>& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw NumericError("objective is not finite at " + std::to_string(x), x);
  }
  return y;
}

}  // namespace

GoldenSectionResult golden_section_maximize(const std::function<double(double)>& objective,
                                            double lo, double hi, double tol) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("golden section needs a finite bracket with lo < hi");
  }
  if (!(tol > 0.0)) throw DomainError("golden section tolerance must be positive");

  GoldenSectionResult result;
  const double lo0 = lo;
  const double hi0 = hi;
  double width = hi - lo;
  result.widths.push_back(width);

  double x1 = lo + kInvPhi2 * width;
  double x2 = lo + kInvPhi * width;
  double f1 = evaluate(objective, x1);
  double f2 = evaluate(objective, x2);

  while (width >= tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      width = hi - lo;
      x2 = lo + kInvPhi * width;
      f2 = evaluate(objective, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      width = hi - lo;
      x1 = lo + kInvPhi2 * width;
      f1 = evaluate(objective, x1);
    }
    ++result.iterations;
    result.widths.push_back(width);
    // Probes collapse once the width hits floating-point resolution.
    if (!(lo < x1 && x1 <= x2 && x2 < hi)) break;
  }

  result.bracket_lo = lo;
  result.bracket_hi = hi;
  result.argmax = f1 >= f2 ? x1 : x2;
  result.value = std::max(f1, f2);

  const double f_lo = evaluate(objective, lo0);
  const double f_hi = evaluate(objective, hi0);
  if (f_lo >= result.value && f_lo >= f_hi) {
    result.argmax = lo0;
    result.value = f_lo;
  } else if (f_hi > result.value) {
    result.argmax = hi0;
    result.value = f_hi;
  }
  return result;
}

}  // namespace tamech

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cryptacc/error.hpp"
#include "cryptacc/netsim.hpp"

namespace cryptacc::netsim {

std::string_view to_string(Complexity c) {
  switch (c) {
    case Complexity::constant: return "constant";
    case Complexity::logarithmic: return "logarithmic";
    case Complexity::linear: return "linear";
    case Complexity::superlinear: return "superlinear";
  }
  return "?";
}

namespace {

struct Fit {
  double slope;
  double sse;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  double slope = sxx > 0 ? sxy / sxx : 0.0;
  double intercept = my - slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (intercept + slope * x[i]);
    sse += r * r;
  }
  return {slope, sse};
}

}  // namespace

Complexity sim_fit_complexity(const std::vector<double>& sizes, const std::vector<double>& values) {
  if (sizes.size() != values.size())
    throw AccumulatorError(ErrorCode::insufficient_samples, "sizes and values differ in length");
  if (sizes.size() < 4) throw AccumulatorError(ErrorCode::insufficient_samples, "need at least 4 sizes");
  for (double n : sizes)
    if (!(n >= 1) || !std::isfinite(n)) throw AccumulatorError(ErrorCode::domain_error, "sizes must be >= 1");
  for (double v : values)
    if (!std::isfinite(v)) throw AccumulatorError(ErrorCode::domain_error, "values must be finite");

  struct Shape {
    Complexity label;
    double (*f)(double);
  };
  static const Shape shapes[] = {
      {Complexity::logarithmic, [](double n) { return std::log2(n); }},
      {Complexity::linear, [](double n) { return n; }},
      {Complexity::superlinear, [](double n) { return n * std::log2(n); }},
      {Complexity::superlinear, [](double n) { return n * n; }},
  };

  double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());

  Complexity best = Complexity::constant;
  double best_sse = std::numeric_limits<double>::infinity();
  double best_growth = 0;
  for (const auto& s : shapes) {
    std::vector<double> x;
    x.reserve(sizes.size());
    for (double n : sizes) x.push_back(s.f(n));
    Fit fit = least_squares(x, values);
    if (fit.sse < best_sse * (1 - 1e-9)) {
      best_sse = fit.sse;
      best = s.label;
      best_growth = fit.slope * (s.f(*hi) - s.f(*lo));
    }
  }
  // A flat series has no meaningful shape; anything whose fitted rise is a
  // small fraction of its level is reported as constant.
  double scale = std::max(std::abs(mean), std::numeric_limits<double>::min());
  if (std::abs(best_growth) <= kConstantTolerance * scale) return Complexity::constant;
  return best;
}

}  // namespace cryptacc::netsim

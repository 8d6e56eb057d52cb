#ifndef ASYMWELL_SPLINE_HPP
#define ASYMWELL_SPLINE_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "asymwell/error.hpp"

namespace asymwell {

/// Natural cubic spline through tabulated (x, y) samples with strictly increasing x.
class NaturalCubicSpline {
 public:
  struct Sample {
    double value;
    double slope;
  };

  NaturalCubicSpline(std::span<const double> xs, std::span<const double> ys)
      : x_(xs.begin(), xs.end()), y_(ys.begin(), ys.end()) {
    const std::size_t n = x_.size();
    if (n < 4 || y_.size() != n) {
      fail(ErrorKind::construction, "spline: need at least 4 samples with matching x and y counts");
    }
    for (std::size_t i = 1; i < n; ++i) {
      if (!(x_[i] > x_[i - 1])) fail(ErrorKind::construction, "spline: abscissae must be strictly increasing");
    }
    // Tridiagonal solve for the second derivatives (Thomas algorithm).
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      const double a = h0 / 6.0;
      const double b = (h0 + h1) / 3.0;
      const double cc = h1 / 6.0;
      const double rhs = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
      const double denom = b - a * c[i - 1];
      c[i] = cc / denom;
      d[i] = (rhs - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = d[i] - c[i] * m_[i + 1];
    }
  }

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

  Sample operator()(double x) const {
    if (x < x_.front() || x > x_.back()) fail(ErrorKind::domain, "spline: abscissa outside tabulated range");
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    if (i >= x_.size() - 1) i = x_.size() - 2;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    const double value = a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    const double slope = (y_[i + 1] - y_[i]) / h + ((1.0 - 3.0 * a * a) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
    return {value, slope};
  }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
};

}  // namespace asymwell

#endif  // ASYMWELL_SPLINE_HPP

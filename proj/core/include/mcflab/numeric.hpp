#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcflab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// L-infinity and area-weighted root-mean-square of a per-vertex field,
// restricted to a mask.
struct FieldSummary {
  double linf = 0.0;
  double l2 = 0.0;
  int count = 0;
  int excluded = 0;
  int argmax = -1;
};

inline FieldSummary summarize(const Eigen::VectorXd& values,
                              const std::vector<char>& mask,
                              const Eigen::VectorXd& weights) {
  FieldSummary s;
  double wsum = 0.0, acc = 0.0;
  for (int i = 0; i < values.size(); ++i) {
    if (!mask.empty() && !mask[i]) {
      ++s.excluded;
      continue;
    }
    const double a = std::abs(values[i]);
    if (a > s.linf) {
      s.linf = a;
      s.argmax = i;
    }
    const double w = weights.size() ? weights[i] : 1.0;
    acc += w * values[i] * values[i];
    wsum += w;
    ++s.count;
  }
  s.l2 = wsum > 0 ? std::sqrt(acc / wsum) : 0.0;
  return s;
}

inline FieldSummary summarize(const Eigen::VectorXd& values) {
  return summarize(values, {}, Eigen::VectorXd());
}

// Printed report precision: 12 significant digits. Values destined for JSON
// reports are rounded through this representation so serialization is stable.
inline std::string format_sig(double x, int sig = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, x);
  return buf;
}

inline double round_sig(double x, int sig = 12) {
  return std::strtod(format_sig(x, sig).c_str(), nullptr);
}

// Least-squares slope of log(y) against log(x); the observed convergence
// order of a refinement study.
inline double loglog_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error("loglog_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    if (x[i] <= 0 || y[i] <= 0) throw Error("loglog_slope: nonpositive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw Error("loglog_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace mcflab

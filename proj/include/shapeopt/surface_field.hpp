#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace shapeopt {

/// Periodic real-valued field indexed by surface node. The optional
/// segment-length metadata carries s_j = |x_{j+1} - x_j| so quadrature
/// weights can be formed without dragging the full curve around.
struct SurfaceField {
  std::vector<double> values;
  std::vector<double> seg_len;  // may be empty when no quadrature is needed

  SurfaceField() = default;
  explicit SurfaceField(std::size_t n, double fill = 0.0) : values(n, fill) {}
  SurfaceField(std::vector<double> v, std::vector<double> s)
      : values(std::move(v)), seg_len(std::move(s)) {}

  std::size_t size() const { return values.size(); }

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  // index arithmetic mod N
  double at_periodic(long i) const {
    const long n = static_cast<long>(values.size());
    long k = i % n;
    if (k < 0) k += n;
    return values[static_cast<std::size_t>(k)];
  }
};

/// Node-centered trapezoid weights w_j = (s_{j-1} + s_j) / 2.
inline std::vector<double> trapezoid_weights(const std::vector<double>& seg_len) {
  const std::size_t n = seg_len.size();
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j)
    w[j] = 0.5 * (seg_len[(j + n - 1) % n] + seg_len[j]);
  return w;
}

}  // namespace shapeopt

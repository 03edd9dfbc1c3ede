#pragma once

// Exact reference for the discrete-time single-spin model that the path
// sampler simulates: M slices, link matrix a = [[1,t],[t,1]] with
// t = tanh(tau*gamma), site weight diag(e^{tau h}, e^{-tau h}). The link
// alignment estimator corresponds to replacing one link matrix by
// xa = [[t,1],[1,t]]. Agreement with the sampler at matched M is exact up
// to statistics; there is no time-step bias in this comparison.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dt_oracle {

using mat2 = std::array<double, 4>;  // row major
using vec2 = std::array<double, 2>;

inline mat2 mul(const mat2& x, const mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

inline void normalize(mat2& m) {
  double mx = std::max(std::max(m[0], m[1]), std::max(m[2], m[3]));
  for (double& v : m) v /= mx;
}

inline void normalize(vec2& v) {
  double mx = std::max(v[0], v[1]);
  v[0] /= mx;
  v[1] /= mx;
}

struct link_matrices {
  mat2 da, dxa;  // D*a and D*xa (row scaling)
  mat2 ad, xad;  // a*D and xa*D (column scaling)
};

inline link_matrices build(double beta, double gamma, double h, int m) {
  if (m < 2) throw std::invalid_argument("need at least 2 slices");
  double tau = beta / m;
  double t = std::tanh(tau * gamma);
  double dp = std::exp(tau * h), dm = std::exp(-tau * h);
  link_matrices lm;
  lm.da = {dp * 1.0, dp * t, dm * t, dm * 1.0};
  lm.dxa = {dp * t, dp * 1.0, dm * 1.0, dm * t};
  lm.ad = {1.0 * dp, t * dm, t * dp, 1.0 * dm};
  lm.xad = {t * dp, 1.0 * dm, 1.0 * dp, t * dm};
  return lm;
}

// periodic time boundary: all m links are equivalent under the trace
inline double periodic_sigma_x(double beta, double gamma, double h, int m) {
  link_matrices lm = build(beta, gamma, h, m);
  mat2 p = {1.0, 0.0, 0.0, 1.0};
  for (int k = 0; k < m - 1; ++k) {
    p = mul(lm.da, p);
    normalize(p);
  }
  mat2 num = mul(lm.dxa, p);
  mat2 den = mul(lm.da, p);
  return (num[0] + num[3]) / (den[0] + den[3]);
}

// open time boundary: m-1 links averaged individually, since links near the
// chain ends carry different weights
inline double open_sigma_x(double beta, double gamma, double h, int m) {
  link_matrices lm = build(beta, gamma, h, m);
  double tau = beta / m;
  std::vector<vec2> suffix(m);  // suffix[j] = (ad)^(m-1-j) * 1, j = 1..m-1
  suffix[m - 1] = {1.0, 1.0};
  for (int j = m - 2; j >= 1; --j) {
    const vec2& v = suffix[j + 1];
    suffix[j] = {lm.ad[0] * v[0] + lm.ad[1] * v[1], lm.ad[2] * v[0] + lm.ad[3] * v[1]};
    normalize(suffix[j]);
  }
  vec2 u = {std::exp(tau * h), std::exp(-tau * h)};  // 1^T D
  double sum = 0.0;
  for (int j = 1; j <= m - 1; ++j) {
    const vec2& v = suffix[j];
    vec2 nv = {lm.xad[0] * v[0] + lm.xad[1] * v[1], lm.xad[2] * v[0] + lm.xad[3] * v[1]};
    vec2 zv = {lm.ad[0] * v[0] + lm.ad[1] * v[1], lm.ad[2] * v[0] + lm.ad[3] * v[1]};
    sum += (u[0] * nv[0] + u[1] * nv[1]) / (u[0] * zv[0] + u[1] * zv[1]);
    u = {u[0] * lm.ad[0] + u[1] * lm.ad[2], u[0] * lm.ad[1] + u[1] * lm.ad[3]};
    normalize(u);
  }
  return sum / static_cast<double>(m - 1);
}

inline double sigma_x(double beta, double gamma, double h, int m, bool periodic) {
  return periodic ? periodic_sigma_x(beta, gamma, h, m) : open_sigma_x(beta, gamma, h, m);
}

}  // namespace dt_oracle

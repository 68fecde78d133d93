#pragma once

// Test-only oracles, independent of the library's evaluation paths: dense
// tensor-grid quadrature, an explicit Rayleigh-form product, and a
// continued-fraction regularized incomplete gamma.

#include <cmath>
#include <stdexcept>

#include "uavharvest/config.hpp"

namespace oracles {

// Midpoint tensor-grid integral of (1 + s*p*Omega/m * d^-alpha)^-m over
// window i, divided by the window area. n*n nodes.
inline double window_mean_integrand(const uavharvest::NetworkConfig& c,
                                    double s, long i, int n) {
  const double cc = c.p * c.omega / c.m;
  const double x0 = static_cast<double>(i) * c.mu - c.w / 2;
  const double dx = c.w / n;
  const double y0 = -c.l / 2;
  const double dy = c.l / n;
  double acc = 0.0;
  for (int a = 0; a < n; ++a) {
    const double x = x0 + (a + 0.5) * dx;
    for (int b = 0; b < n; ++b) {
      const double y = y0 + (b + 0.5) * dy;
      const double g = std::pow(x * x + y * y + c.h * c.h, -c.alpha / 2);
      acc += std::pow(1.0 + s * cc * g, -static_cast<double>(c.m));
    }
  }
  return acc / (static_cast<double>(n) * n);
}

inline double window_factor(const uavharvest::NetworkConfig& c, double s,
                            long i, int n) {
  const double occ = c.occupancy();
  return (1.0 - occ) + occ * window_mean_integrand(c, s, i, n);
}

// Dense product over |i| <= K with the Rayleigh integrand written literally
// as 1/(1 + s*p*d^-alpha); only valid for m = omega = 1.
inline double rayleigh_interference_product(const uavharvest::NetworkConfig& c,
                                            double s, long K, int n) {
  if (c.m != 1 || c.omega != 1.0) {
    throw std::logic_error("rayleigh oracle requires m = omega = 1");
  }
  const double occ = c.occupancy();
  double logl = 0.0;
  for (long i = -K; i <= K; ++i) {
    if (i == 0) continue;
    const double x0 = static_cast<double>(i) * c.mu - c.w / 2;
    const double dx = c.w / n;
    const double y0 = -c.l / 2;
    const double dy = c.l / n;
    double acc = 0.0;
    for (int a = 0; a < n; ++a) {
      const double x = x0 + (a + 0.5) * dx;
      for (int b = 0; b < n; ++b) {
        const double y = y0 + (b + 0.5) * dy;
        acc += 1.0 / (1.0 + s * c.p *
                                std::pow(x * x + y * y + c.h * c.h,
                                         -c.alpha / 2));
      }
    }
    logl += std::log((1.0 - occ) + occ * acc / (static_cast<double>(n) * n));
  }
  return std::exp(logl);
}

// Regularized upper incomplete gamma Q(a, x) by series / continued fraction
// (Lentz), independent of the library's Erlang tail sum.
inline double gammq(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammq domain");
  if (x == 0.0) return 1.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) by series, return 1 - P.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
  }
  // Q(a,x) by continued fraction.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

}  // namespace oracles

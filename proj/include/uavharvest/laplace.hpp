#pragma once

#include <memory>

#include "uavharvest/config.hpp"
#include "uavharvest/quadrature.hpp"

namespace uavharvest {

// Infinite-product truncation policy: windows are included until the window
// factor exceeds 1 - epsilon (deficits are monotone in the window distance),
// subject to the k_max safety cap. Every result carries a bound on the
// neglected tail.
struct ProductTruncation {
  double epsilon = 1e-10;
  long k_max = 100000;
};

// Relative error budget attached to every analytic value.
struct ErrorBudget {
  double quadrature = 0.0;
  double truncation = 0.0;
  double total() const { return quadrature + truncation; }
  ErrorBudget& operator+=(const ErrorBudget& o) {
    quadrature += o.quadrature;
    truncation += o.truncation;
    return *this;
  }
};

struct Estimate {
  double value = 0.0;
  ErrorBudget budget;
};

struct UnsupportedOrderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluates the infinite product of per-window factors
//   F_i(s) = exp(-lambda*w*l)
//          + (1 - exp(-lambda*w*l))/(w*l) * II_window (1 + s*p*Omega/m /
//            (x^2+y^2+h^2)^(alpha/2))^(-m) dy dx
// over i in Z (1-D) or (i,j) in Z^2 (2-D), excluding the center window when
// configured as an interference transform. Window integrals use banked
// Gauss-Legendre rules whose order falls off with window distance; every
// factor carries a half-order self-check and far tails are bounded by an
// integral comparison.
//
// Evaluations are pure given (config, s); the internal node cache grows
// lazily under a lock, so concurrent calls are safe.
class LaplaceEvaluator {
 public:
  struct Options {
    bool exclude_center = false;
    ProductTruncation truncation{};
    QuadratureSpec quadrature{};
  };

  LaplaceEvaluator(const NetworkConfig& cfg, Options opt);
  ~LaplaceEvaluator();
  LaplaceEvaluator(LaplaceEvaluator&&) noexcept;
  LaplaceEvaluator& operator=(LaplaceEvaluator&&) noexcept;

  const NetworkConfig& config() const { return cfg_; }
  bool excludes_center() const { return opt_.exclude_center; }

  // L(s); exactly 1 at s = 0, nonincreasing, in (0, 1].
  Estimate value(double s) const;

  // exp(-s*noise_w) * L(s).
  Estimate value_with_noise(double s, double noise_w) const;

  // sum_{i=0}^{order-1} (-s)^i/i! d^i/ds^i [exp(-s*noise_w) L(s)],
  // i.e. E[P(G >= ...)] with G ~ Gamma(order, Omega/order). Derivatives are
  // analytic (differentiation under the integral sign + product rule across
  // factors); order is capped at 4.
  Estimate derivative_sum(double s, int order, double noise_w = 0.0) const;

  // Single window factor, in (0, 1]. j is ignored in 1-D mode.
  double factor(double s, long i, long j = 0) const;

  // Index of the outermost window (1-D) or ring (2-D) the truncated product
  // used at this s.
  long truncation_index(double s) const;

 private:
  struct Bank;
  NetworkConfig cfg_;
  Options opt_;
  std::unique_ptr<Bank> bank_;
};

// Spec-parity free functions.
Estimate laplace_shot_noise(const LaplaceEvaluator& eval, double s);
Estimate laplace_interference(const LaplaceEvaluator& eval, double s);
Estimate laplace_interference_plus_noise(const LaplaceEvaluator& eval,
                                         double s, double noise_w);
Estimate laplace_derivative_sum(const LaplaceEvaluator& eval, double s,
                                int order, double noise_w = 0.0);
double factor_window(const LaplaceEvaluator& eval, double s, long i,
                     long j = 0);

}  // namespace uavharvest

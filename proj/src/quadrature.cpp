#include "uavharvest/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace uavharvest {
namespace {

GaussLegendre compute_rule(int order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  GaussLegendre rule;
  rule.x.assign(order, 0.0);
  rule.weight.assign(order, 0.0);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[order - 1 - i] = x;
    const double wgt = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weight[i] = wgt;
    rule.weight[order - 1 - i] = wgt;
  }
  return rule;
}

}  // namespace

const GaussLegendre& GaussLegendre::get(int order) {
  static std::mutex mtx;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) {
    it = cache.emplace(order, compute_rule(order)).first;
  }
  return it->second;
}

RectRule RectRule::make(double x0, double x1, double y0, double y1, int nx,
                        int ny) {
  const GaussLegendre& gx = GaussLegendre::get(nx);
  const GaussLegendre& gy = GaussLegendre::get(ny);
  const double cx = 0.5 * (x0 + x1), rx = 0.5 * (x1 - x0);
  const double cy = 0.5 * (y0 + y1), ry = 0.5 * (y1 - y0);
  RectRule rule;
  rule.x.reserve(static_cast<std::size_t>(nx) * ny);
  rule.y.reserve(rule.x.capacity());
  rule.weight.reserve(rule.x.capacity());
  for (int a = 0; a < nx; ++a) {
    for (int b = 0; b < ny; ++b) {
      rule.x.push_back(cx + rx * gx.x[a]);
      rule.y.push_back(cy + ry * gy.x[b]);
      rule.weight.push_back(rx * ry * gx.weight[a] * gy.weight[b]);
    }
  }
  return rule;
}

}  // namespace uavharvest

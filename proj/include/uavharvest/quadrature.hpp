#pragma once

#include <vector>

namespace uavharvest {

// Node count and self-check tolerance for the per-window and outer integrals.
// The self-check compares against the half-order rule; when it fails the
// order is doubled up to max_nodes (adaptive fallback).
struct QuadratureSpec {
  int nodes = 32;
  double rel_tol = 1e-9;
  int max_nodes = 128;
};

// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once per order and
// cached process-wide.
struct GaussLegendre {
  std::vector<double> x;
  std::vector<double> weight;

  static const GaussLegendre& get(int order);
};

// Tensor-product rectangle rule over [x0,x1] x [y0,y1]: nx*ny nodes with
// weights summing to the rectangle area.
struct RectRule {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> weight;

  static RectRule make(double x0, double x1, double y0, double y1, int nx,
                       int ny);
  std::size_t size() const { return x.size(); }
};

}  // namespace uavharvest

#include "uavharvest/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <utility>
#include <vector>

namespace uavharvest {
namespace {

// -ln(1 - d) for a factor deficit d in [0, occ]; series for tiny d.
inline double neglog_of(double deficit) {
  return deficit < 2.5e-8 ? deficit * (1.0 + 0.5 * deficit)
                          : -std::log1p(-deficit);
}

// Per-node terms of the window integral and its s-derivatives.
//   D  = sum wgt * (1 - t^m),          t = 1/(1 + s*u)
//   P1 = sum wgt * d/ds t^m   = -m u t^(m+1)            (per node)
//   P2 = sum wgt * d2/ds2 t^m =  m(m+1) u^2 t^(m+2)
//   P3 = sum wgt * d3/ds3 t^m = -m(m+1)(m+2) u^3 t^(m+3)
// 1 - t^m is computed as (s*u*t) * sum_{q<m} t^q, which is cancellation-free
// and exactly 0 at s = 0.
template <bool Deriv>
inline void accumulate_nodes(const double* u, const double* wgt, std::size_t n,
                             double s, int m, double& D, double& P1,
                             double& P2, double& P3) {
  double d = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;
  const double md = static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) {
    const double su = s * u[k];
    const double t = 1.0 / (1.0 + su);
    double tq = 1.0, gsum = 1.0;
    for (int q = 1; q < m; ++q) {
      tq *= t;
      gsum += tq;
    }
    d += wgt[k] * su * t * gsum;
    if constexpr (Deriv) {
      const double tm1 = tq * t * t;  // t^(m+1)
      const double uu = u[k];
      p1 -= wgt[k] * md * uu * tm1;
      p2 += wgt[k] * md * (md + 1.0) * uu * uu * tm1 * t;
      p3 -= wgt[k] * md * (md + 1.0) * (md + 2.0) * uu * uu * uu * tm1 * t * t;
    }
  }
  D = d;
  P1 = p1;
  P2 = p2;
  P3 = p3;
}

struct WindowQuad {
  long i = 0;
  long j = 0;
  int mult = 1;
  int order = 0;
  std::vector<double> u, wgt;      // full rule
  std::vector<double> u_h, wgt_h;  // half-order self-check rule
};

struct ScanOut {
  double neglog = 0.0;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;  // log-derivative accumulators
  double quad_err = 0.0;
  double tail = 0.0;
  long k_stop = 0;
  bool complete = false;
  bool need_more_far = false;
  long far_request = 0;
  std::vector<std::pair<std::size_t, int>> refine;
};

}  // namespace

struct LaplaceEvaluator::Bank {
  // Immutable model constants.
  double c = 0.0;   // p * omega / m
  double b = 0.0;   // occ / (w*l)
  double occ = 0.0;
  double area = 0.0;
  int m = 1;
  bool two_d = false;
  double mu = 0, nuv = 0, w = 0, l = 0, h = 0, alpha = 0;
  ProductTruncation trunc;
  QuadratureSpec quad;

  // Band plan. 1-D: window index bands; 2-D: ring-index bands.
  long near_end = 0, mid_end = 0;
  int near_order = 0, mid_order = 0;
  long ring_cap = 0;  // effective k_max (2-D rings are capped harder)

  mutable std::shared_mutex mtx;
  mutable std::deque<WindowQuad> quads;               // center + near + mid
  std::vector<std::pair<std::size_t, std::size_t>> ring_range;  // 2-D rings -> quads span
  mutable std::vector<double> far_u;
  mutable std::vector<std::uint8_t> far_mult;         // 2-D reps only
  mutable std::vector<std::size_t> far_ring_end;      // 2-D: per far ring end offset
  mutable long far_windows = 0;                       // 1-D far windows materialized
  mutable long far_rings = 0;                         // 2-D far rings materialized

  double node_u(double x, double y) const {
    return c * std::pow(x * x + y * y + h * h, -alpha / 2.0);
  }

  void fill_quad(WindowQuad& q, int order) const {
    q.order = order;
    const double xc = static_cast<double>(q.i) * mu;
    const double yc = static_cast<double>(q.j) * nuv;
    auto fill = [&](int n, std::vector<double>& u, std::vector<double>& wg) {
      RectRule rule = RectRule::make(xc - w / 2, xc + w / 2, yc - l / 2,
                                     yc + l / 2, n, n);
      u.resize(rule.size());
      wg = std::move(rule.weight);
      for (std::size_t k = 0; k < u.size(); ++k) {
        u[k] = node_u(rule.x[k], rule.y[k]);
      }
    };
    fill(order, q.u, q.wgt);
    fill(std::max(1, order / 2), q.u_h, q.wgt_h);
  }

  void build_plan(const NetworkConfig& cfg, const Options& opt) {
    c = cfg.p * cfg.omega / static_cast<double>(cfg.m);
    occ = cfg.occupancy();
    area = cfg.window_area();
    b = area > 0.0 ? occ / area : 0.0;
    m = cfg.m;
    two_d = cfg.mode == GridMode::TwoD;
    mu = cfg.mu;
    nuv = two_d ? cfg.nu : 0.0;
    w = cfg.w;
    l = cfg.l;
    h = cfg.h;
    alpha = cfg.alpha;
    trunc = opt.truncation;
    quad = opt.quadrature;
    if (trunc.k_max < 1) throw ConfigError("truncation: k_max must be >= 1");

    if (!two_d) {
      near_end = std::min<long>(8, trunc.k_max);
      mid_end = std::min<long>(256, trunc.k_max);
      near_order = std::max(4, quad.nodes / 2);
      mid_order = 4;
      ring_cap = trunc.k_max;
      for (long i = 0; i <= mid_end; ++i) {
        WindowQuad q;
        q.i = i;
        q.j = 0;
        q.mult = i == 0 ? 1 : 2;
        fill_quad(q, i == 0 ? quad.nodes : (i <= near_end ? near_order : mid_order));
        quads.push_back(std::move(q));
      }
    } else {
      near_end = std::min<long>(4, trunc.k_max);
      mid_end = std::min<long>(32, trunc.k_max);
      near_order = std::max(4, quad.nodes / 4);
      mid_order = 2;
      // Ring reps grow quadratically with the cap; bound the memory.
      ring_cap = std::min<long>(trunc.k_max, 2048);
      ring_range.reserve(mid_end + 1);
      for (long r = 0; r <= mid_end; ++r) {
        const std::size_t begin = quads.size();
        for_ring(r, [&](long i, long j, int mult) {
          WindowQuad q;
          q.i = i;
          q.j = j;
          q.mult = mult;
          fill_quad(q, r == 0 ? quad.nodes : (r <= near_end ? near_order : mid_order));
          quads.push_back(std::move(q));
        });
        ring_range.emplace_back(begin, quads.size());
      }
    }
  }

  // Quadrant representatives of ring r (max(|i|,|j|) = r) with multiplicity.
  template <typename Fn>
  static void for_ring(long r, Fn&& fn) {
    if (r == 0) {
      fn(0, 0, 1);
      return;
    }
    for (long j = 0; j <= r; ++j) fn(r, j, j == 0 ? 2 : 4);
    for (long i = 0; i < r; ++i) fn(i, r, i == 0 ? 2 : 4);
  }

  // Must hold the exclusive lock.
  void grow_far_locked(long request) const {
    if (!two_d) {
      const long cap = std::max<long>(0, ring_cap - mid_end);
      const long target = std::min(request, cap);
      for (long f = far_windows; f < target; ++f) {
        const double x = static_cast<double>(mid_end + 1 + f) * mu;
        far_u.push_back(c * std::pow(x * x + h * h, -alpha / 2.0));
      }
      far_windows = std::max(far_windows, target);
    } else {
      const long cap = std::max<long>(0, ring_cap - mid_end);
      const long target = std::min(request, cap);
      for (long fr = far_rings; fr < target; ++fr) {
        const long r = mid_end + 1 + fr;
        for_ring(r, [&](long i, long j, int mult) {
          const double x = static_cast<double>(i) * mu;
          const double y = static_cast<double>(j) * nuv;
          far_u.push_back(c * std::pow(x * x + y * y + h * h, -alpha / 2.0));
          far_mult.push_back(static_cast<std::uint8_t>(mult));
        });
        far_ring_end.push_back(far_u.size());
      }
      far_rings = std::max(far_rings, target);
    }
  }

  // Relative quadrature-error bound of the one-node far rule at ring k.
  double far_rule_bound(long k) const {
    const double spacing = two_d ? std::min(mu, nuv) : mu;
    const double dist = std::max(spacing * (static_cast<double>(k) - 0.5), 1e-12);
    const double rel = alpha * (alpha + 2.0) / 24.0 * (w * w + l * l) / (dist * dist);
    return std::min(1.0, rel);
  }

  double tail_bound(double s, long k_stop) const {
    if (s <= 0.0 || occ <= 0.0) return 0.0;
    const double msc = static_cast<double>(m) * s * c;
    if (!two_d) {
      const double t0 = static_cast<double>(k_stop) * mu - w / 2;
      return 2.0 * occ * msc * std::pow(t0, 1.0 - alpha) / ((alpha - 1.0) * mu);
    }
    const double a = std::min(mu, nuv);
    const double y0 = std::max(0.5, static_cast<double>(k_stop) - 0.5);
    return 16.0 * occ * msc * std::pow(a, -alpha) * std::pow(y0, 2.0 - alpha) /
           (alpha - 2.0);
  }

  template <bool Deriv>
  void add_window(const WindowQuad& q, double s, ScanOut& out,
                  std::size_t idx, double& deficit_out) const {
    double d = 0, p1 = 0, p2 = 0, p3 = 0;
    accumulate_nodes<Deriv>(q.u.data(), q.wgt.data(), q.u.size(), s, m, d, p1,
                            p2, p3);
    double dh, x1, x2, x3;
    accumulate_nodes<false>(q.u_h.data(), q.wgt_h.data(), q.u_h.size(), s, m,
                            dh, x1, x2, x3);
    const double deficit = b * d;
    const double f = 1.0 - deficit;
    const double err = b * std::abs(d - dh) / f;
    if (err > quad.rel_tol && q.order * 2 <= quad.max_nodes) {
      out.refine.emplace_back(idx, q.order * 2);
    }
    const double mult = static_cast<double>(q.mult);
    out.neglog += mult * neglog_of(deficit);
    out.quad_err += mult * err;
    if constexpr (Deriv) {
      const double r1 = b * p1 / f;
      const double r2 = b * p2 / f;
      const double r3 = b * p3 / f;
      out.s1 += mult * r1;
      out.s2 += mult * (r2 - r1 * r1);
      out.s3 += mult * (r3 - 3.0 * r1 * r2 + 2.0 * r1 * r1 * r1);
    }
    deficit_out = deficit;
  }

  template <bool Deriv>
  void add_far_node(double u, int mult, double s, ScanOut& out,
                    double& deficit_out) const {
    const double su = s * u;
    const double t = 1.0 / (1.0 + su);
    double tq = 1.0, gsum = 1.0;
    for (int q = 1; q < m; ++q) {
      tq *= t;
      gsum += tq;
    }
    const double deficit = occ * su * t * gsum;  // b * area * (1 - t^m)
    const double f = 1.0 - deficit;
    const double mm = static_cast<double>(mult);
    out.neglog += mm * neglog_of(deficit);
    if constexpr (Deriv) {
      const double md = static_cast<double>(m);
      const double tm1 = tq * t * t;
      const double r1 = -occ * md * u * tm1 / f;
      const double r2 = occ * md * (md + 1.0) * u * u * tm1 * t / f;
      const double r3 =
          -occ * md * (md + 1.0) * (md + 2.0) * u * u * u * tm1 * t * t / f;
      out.s1 += mm * r1;
      out.s2 += mm * (r2 - r1 * r1);
      out.s3 += mm * (r3 - 3.0 * r1 * r2 + 2.0 * r1 * r1 * r1);
    }
    deficit_out = deficit;
  }

  // One full pass over the materialized bank. Holds the shared lock.
  template <bool Deriv>
  ScanOut scan_locked(double s, bool exclude_center) const {
    ScanOut out;
    const double eps = trunc.epsilon;

    if (!two_d) {
      for (long k = exclude_center ? 1 : 0; k <= mid_end; ++k) {
        double deficit = 0.0;
        add_window<Deriv>(quads[static_cast<std::size_t>(k)], s, out,
                          static_cast<std::size_t>(k), deficit);
        out.k_stop = k;
        if (k >= 1 && (deficit <= eps || k >= trunc.k_max)) {
          out.complete = true;
          break;
        }
      }
      if (!out.complete) {
        double far_def_sum = 0.0;
        for (long f = 0;; ++f) {
          const long k = mid_end + 1 + f;
          if (k > trunc.k_max) {
            out.complete = true;
            break;
          }
          if (f >= far_windows) {
            out.need_more_far = true;
            out.far_request = std::max<long>(f * 2 + 256, 1024);
            break;
          }
          double deficit = 0.0;
          add_far_node<Deriv>(far_u[static_cast<std::size_t>(f)], 2, s, out,
                              deficit);
          far_def_sum += 2.0 * deficit;
          out.k_stop = k;
          if (deficit <= eps) {
            out.complete = true;
            break;
          }
        }
        out.quad_err += far_def_sum * far_rule_bound(mid_end + 1);
      }
    } else {
      for (long r = exclude_center ? 1 : 0; r <= mid_end; ++r) {
        double ring_max = 0.0;
        const auto [begin, end] = ring_range[static_cast<std::size_t>(r)];
        for (std::size_t q = begin; q < end; ++q) {
          double deficit = 0.0;
          add_window<Deriv>(quads[q], s, out, q, deficit);
          ring_max = std::max(ring_max, deficit);
        }
        out.k_stop = r;
        if (r >= 1 && (ring_max <= eps || r >= ring_cap)) {
          out.complete = true;
          break;
        }
      }
      if (!out.complete) {
        double far_def_sum = 0.0;
        for (long fr = 0;; ++fr) {
          const long r = mid_end + 1 + fr;
          if (r > ring_cap) {
            out.complete = true;
            break;
          }
          if (fr >= far_rings) {
            out.need_more_far = true;
            out.far_request = fr + std::max<long>(8, fr);
            break;
          }
          const std::size_t begin =
              fr == 0 ? 0 : far_ring_end[static_cast<std::size_t>(fr - 1)];
          const std::size_t end = far_ring_end[static_cast<std::size_t>(fr)];
          double ring_max = 0.0;
          for (std::size_t q = begin; q < end; ++q) {
            double deficit = 0.0;
            add_far_node<Deriv>(far_u[q], far_mult[q], s, out, deficit);
            far_def_sum += far_mult[q] * deficit;
            ring_max = std::max(ring_max, deficit);
          }
          out.k_stop = r;
          if (ring_max <= eps) {
            out.complete = true;
            break;
          }
        }
        out.quad_err += far_def_sum * far_rule_bound(mid_end + 1);
      }
    }
    if (out.complete) out.tail = tail_bound(s, std::max<long>(out.k_stop, 1));
    return out;
  }

  void refine_locked(std::size_t idx, int order) const {
    WindowQuad& q = quads[idx];
    if (q.order < order) {
      WindowQuad fresh;
      fresh.i = q.i;
      fresh.j = q.j;
      fresh.mult = q.mult;
      fill_quad(fresh, order);
      q = std::move(fresh);
    }
  }

  template <bool Deriv>
  ScanOut run(double s, bool exclude_center) const {
    for (;;) {
      ScanOut out;
      {
        std::shared_lock lock(mtx);
        out = scan_locked<Deriv>(s, exclude_center);
        if (out.complete && out.refine.empty()) return out;
      }
      std::unique_lock lock(mtx);
      if (out.need_more_far) grow_far_locked(out.far_request);
      for (const auto& [idx, order] : out.refine) refine_locked(idx, order);
    }
  }
};

LaplaceEvaluator::LaplaceEvaluator(const NetworkConfig& cfg, Options opt)
    : cfg_(cfg), opt_(opt), bank_(std::make_unique<Bank>()) {
  cfg_.validate();
  bank_->build_plan(cfg_, opt_);
}

LaplaceEvaluator::~LaplaceEvaluator() = default;
LaplaceEvaluator::LaplaceEvaluator(LaplaceEvaluator&&) noexcept = default;
LaplaceEvaluator& LaplaceEvaluator::operator=(LaplaceEvaluator&&) noexcept =
    default;

Estimate LaplaceEvaluator::value(double s) const {
  if (!(s >= 0.0)) throw std::invalid_argument("laplace: s must be >= 0");
  const ScanOut out = bank_->run<false>(s, opt_.exclude_center);
  Estimate e;
  e.value = std::exp(-out.neglog);
  e.budget.quadrature = out.quad_err;
  e.budget.truncation = out.tail;
  return e;
}

Estimate LaplaceEvaluator::value_with_noise(double s, double noise_w) const {
  Estimate e = value(s);
  e.value *= std::exp(-s * noise_w);
  return e;
}

Estimate LaplaceEvaluator::derivative_sum(double s, int order,
                                          double noise_w) const {
  if (order < 1 || order > 4) {
    throw UnsupportedOrderError(
        "derivative_sum: supported orders are 1..4, got " +
        std::to_string(order));
  }
  if (!(s >= 0.0)) throw std::invalid_argument("laplace: s must be >= 0");
  if (order == 1) return value_with_noise(s, noise_w);

  const ScanOut out = bank_->run<true>(s, opt_.exclude_center);
  const double value = std::exp(-out.neglog - s * noise_w);
  const double lp = out.s1 - noise_w;  // l'(s), l = ln L
  const double lpp = out.s2;
  const double lppp = out.s3;

  double sum = 1.0;  // i = 0 term, divided by L
  sum += -s * lp;
  if (order >= 3) sum += 0.5 * s * s * (lpp + lp * lp);
  if (order >= 4) {
    sum += -(s * s * s / 6.0) * (lppp + 3.0 * lp * lpp + lp * lp * lp);
  }
  Estimate e;
  e.value = value * sum;
  e.budget.quadrature = out.quad_err * order;
  e.budget.truncation = out.tail * order;
  return e;
}

double LaplaceEvaluator::factor(double s, long i, long j) const {
  if (!(s >= 0.0)) throw std::invalid_argument("laplace: s must be >= 0");
  const Bank& bank = *bank_;
  if (j != 0 && !bank_->two_d) {
    throw ConfigError("factor: j != 0 requires 2-D mode");
  }
  const long ai = std::labs(i), aj = std::labs(j);
  const long ring = bank.two_d ? std::max(ai, aj) : ai;

  WindowQuad q;
  q.i = ai;
  q.j = aj;
  q.mult = 1;
  int order;
  if (ring == 0) {
    order = bank.quad.nodes;
  } else if (ring <= bank.near_end) {
    order = bank.near_order;
  } else if (ring <= bank.mid_end) {
    order = bank.mid_order;
  } else {
    order = 2;
  }
  bank.fill_quad(q, order);
  for (;;) {
    double d = 0, dh = 0, x1, x2, x3;
    accumulate_nodes<false>(q.u.data(), q.wgt.data(), q.u.size(), s, bank.m, d,
                            x1, x2, x3);
    accumulate_nodes<false>(q.u_h.data(), q.wgt_h.data(), q.u_h.size(), s,
                            bank.m, dh, x1, x2, x3);
    const double f = 1.0 - bank.b * d;
    const double err = bank.b * std::abs(d - dh) / f;
    if (err <= bank.quad.rel_tol) return f;
    if (q.order * 2 > bank.quad.max_nodes) {
      throw QuadratureError("factor_window: self-check did not converge (" +
                            units::format_double(err) + " relative at order " +
                            std::to_string(q.order) + ")");
    }
    bank.fill_quad(q, q.order * 2);
  }
}

long LaplaceEvaluator::truncation_index(double s) const {
  return bank_->run<false>(s, opt_.exclude_center).k_stop;
}

Estimate laplace_shot_noise(const LaplaceEvaluator& eval, double s) {
  return eval.value(s);
}

Estimate laplace_interference(const LaplaceEvaluator& eval, double s) {
  return eval.value(s);
}

Estimate laplace_interference_plus_noise(const LaplaceEvaluator& eval,
                                         double s, double noise_w) {
  return eval.value_with_noise(s, noise_w);
}

Estimate laplace_derivative_sum(const LaplaceEvaluator& eval, double s,
                                int order, double noise_w) {
  return eval.derivative_sum(s, order, noise_w);
}

double factor_window(const LaplaceEvaluator& eval, double s, long i, long j) {
  return eval.factor(s, i, j);
}

}  // namespace uavharvest

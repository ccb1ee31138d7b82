#include "weylvd/value_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace weylvd {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct AdaptiveContext {
  const std::function<double(double)>& f;
  int max_depth;
  long evals = 0;
  double err = 0.0;
};

double adaptive_simpson(AdaptiveContext& ctx, double a, double fa, double b, double fb,
                        double m, double fm, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = ctx.f(lm);
  const double frm = ctx.f(rm);
  ctx.evals += 2;
  const double len = b - a;
  const double s1 = len / 6.0 * (fa + 4.0 * fm + fb);
  const double s2 = len / 12.0 * (fa + 4.0 * flm + 2.0 * fm + 4.0 * frm + fb);
  const double diff = s2 - s1;
  if (depth >= ctx.max_depth || std::abs(diff) <= 15.0 * tol) {
    ctx.err += std::abs(diff) / 15.0;
    return s2 + diff / 15.0;
  }
  return adaptive_simpson(ctx, a, fa, m, fm, lm, flm, 0.5 * tol, depth + 1) +
         adaptive_simpson(ctx, m, fm, b, fb, rm, frm, 0.5 * tol, depth + 1);
}

// Adaptive integral of f over [a, b] seeded with `panels` uniform panels.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int panels, int max_depth, long& evals,
                          double& err) {
  AdaptiveContext ctx{f, max_depth};
  panels = std::max(1, panels);
  double total = 0.0;
  std::vector<double> nodes(static_cast<std::size_t>(panels) + 1);
  for (int i = 0; i <= panels; ++i) {
    nodes[static_cast<std::size_t>(i)] = a + (b - a) * i / panels;
  }
  double f_left = f(nodes[0]);
  ++ctx.evals;
  for (int i = 0; i < panels; ++i) {
    const double pa = nodes[static_cast<std::size_t>(i)];
    const double pb = nodes[static_cast<std::size_t>(i) + 1];
    const double pm = 0.5 * (pa + pb);
    const double f_mid = f(pm);
    const double f_right = f(pb);
    ctx.evals += 2;
    total += adaptive_simpson(ctx, pa, f_left, pb, f_right, pm, f_mid,
                              tol * (pb - pa) / (b - a), 0);
    f_left = f_right;
  }
  evals += ctx.evals;
  err += ctx.err;
  return total;
}

void require_finite_a(const IntervalUnion& a) {
  if (!(a.measure() < kInf)) {
    throw std::invalid_argument("value distribution: A must have finite measure");
  }
}

}  // namespace

ValueDistributionReport herglotz_value_distribution(
    const std::function<HalfPlanePoint(std::complex<double>)>& f, const IntervalUnion& a,
    const IntervalUnion& s, double d, const QuadraturePolicy& policy) {
  if (!(d > 0.0)) throw std::domain_error("herglotz_value_distribution: requires d > 0");
  require_finite_a(a);

  const std::function<double(double)> integrand = [&](double lambda) {
    return theta_angle(f({lambda, d}), s) / kPi;
  };

  ValueDistributionReport report;
  report.d_used = d;
  for (const Interval& piece : a.pieces()) {
    report.value += integrate_adaptive(integrand, piece.lo, piece.hi, policy.abs_tol,
                                       policy.initial_panels, policy.max_depth,
                                       report.grid_points, report.quad_error);
  }
  return report;
}

RealDistributionResult real_function_value_distribution(
    const std::function<double(double)>& g, const IntervalUnion& a,
    const IntervalUnion& s, const SamplingPolicy& policy) {
  require_finite_a(a);
  const double total_len = a.measure();

  const auto inside = [&](double lambda) {
    const double y = g(lambda);
    return std::isfinite(y) && s.contains(y);
  };

  // Measure of one piece at a fixed grid: full subsegments where the
  // indicator is constant, bisected boundaries where it changes.
  const auto measure_piece = [&](const Interval& piece, long n) {
    const double step = piece.length() / static_cast<double>(n);
    double acc = 0.0;
    bool in_prev = inside(piece.lo);
    double x_prev = piece.lo;
    for (long i = 1; i <= n; ++i) {
      const double x = (i == n) ? piece.hi : piece.lo + step * static_cast<double>(i);
      const bool in_here = inside(x);
      if (in_here == in_prev) {
        if (in_here) acc += x - x_prev;
      } else {
        double lo = x_prev, hi = x;
        bool lo_in = in_prev;
        for (int it = 0; it < policy.bisection_iters && hi - lo > 1e-15 * total_len; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (inside(mid) == lo_in) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        const double crossing = 0.5 * (lo + hi);
        if (in_prev) acc += crossing - x_prev;
        if (in_here) acc += x - crossing;
      }
      in_prev = in_here;
      x_prev = x;
    }
    return acc;
  };

  RealDistributionResult out;
  out.stabilized = true;
  for (const Interval& piece : a.pieces()) {
    long n = std::max<long>(2, policy.initial_samples);
    double prev = measure_piece(piece, n);
    bool stable = false;
    while (2 * n <= policy.max_samples) {
      n *= 2;
      const double next = measure_piece(piece, n);
      const bool close = std::abs(next - prev) <= policy.stabilization_tol * total_len;
      prev = next;
      if (close) {
        stable = true;
        break;
      }
    }
    out.value += prev;
    out.samples_used += n;
    out.stabilized = out.stabilized && stable;
  }
  return out;
}

bool compare_value_distributions(double m1, double m2, const IntervalUnion& a,
                                 double epsilon, double e_a_d) {
  if (!(epsilon > 0.0) || !(e_a_d >= 0.0)) {
    throw std::domain_error("compare_value_distributions: requires epsilon > 0, e_a_d >= 0");
  }
  return std::abs(m1 - m2) <= epsilon * a.measure() + 2.0 * e_a_d;
}

double free_asymptotic_distribution(const IntervalUnion& a, const IntervalUnion& s) {
  require_finite_a(a);

  // lambda < 0: the boundary value -sqrt|lambda| is real, so this part is an
  // exact measure of the preimage of S under lambda -> -sqrt(-lambda).
  double negative_part = 0.0;
  for (const Interval& sp : s.pieces()) {
    if (sp.lo >= 0.0) continue;
    const double q = -sp.lo;                       // sqrt|lambda| upper limit
    const double p = std::max(0.0, -sp.hi);        // sqrt|lambda| lower limit
    const double lam_lo = (q == kInf) ? -kInf : -q * q;
    const double lam_hi = -p * p;
    for (const Interval& ap : a.pieces()) {
      const double lo = std::max(ap.lo, lam_lo);
      const double hi = std::min(std::min(ap.hi, lam_hi), 0.0);
      if (hi > lo) negative_part += hi - lo;
    }
  }

  // lambda > 0: smooth angle at the interior point i sqrt(lambda).
  double positive_part = 0.0;
  const std::function<double(double)> integrand = [&](double lambda) {
    const double y = std::sqrt(std::max(lambda, 0.0));
    if (y == 0.0) return 0.0;
    return theta_angle(HalfPlanePoint(0.0, y), s) / kPi;
  };
  long evals = 0;
  double err = 0.0;
  for (const Interval& ap : a.pieces()) {
    const double lo = std::max(ap.lo, 0.0);
    const double hi = ap.hi;
    if (hi > lo) {
      positive_part += integrate_adaptive(integrand, lo, hi, 1e-10, 32, 40, evals, err);
    }
  }
  return negative_part + positive_part;
}

double empirical_error_proxy(const IntervalUnion& a, const IntervalUnion& s, double d,
                             const QuadraturePolicy& policy) {
  using C = std::complex<double>;
  require_finite_a(a);
  double hull_lo = a.pieces().front().lo;
  double hull_hi = a.pieces().back().hi;

  // A comb of poles across A probes the d-sensitivity of boundary values that
  // oscillate on a scale comparable to |A|/comb size.
  const int comb = 24;
  const double spacing = (hull_hi - hull_lo) / comb;
  const auto comb_fn = [=](C z) {
    C value = z;
    for (int j = 0; j < comb; ++j) {
      const double pole = hull_lo + (j + 0.5) * spacing;
      value += 0.5 * spacing / (pole - z);
    }
    return HalfPlanePoint(value);
  };

  const std::vector<std::function<HalfPlanePoint(C)>> battery = {
      [](C z) { return HalfPlanePoint(z); },
      [](C z) { return HalfPlanePoint(-1.0 / z); },
      [](C z) { return HalfPlanePoint(z - 1.0 / (z + 0.5) - 0.5 / (z - 1.3)); },
      comb_fn,
  };
  QuadraturePolicy comb_policy = policy;
  comb_policy.initial_panels = std::max(policy.initial_panels, 8 * comb);
  double worst = 0.0;
  for (const auto& f : battery) {
    const double md = herglotz_value_distribution(f, a, s, d, comb_policy).value;
    const double md10 = herglotz_value_distribution(f, a, s, d / 10.0, comb_policy).value;
    worst = std::max(worst, std::abs(md - md10));
  }
  // One ladder rung underestimates the full distance to d -> 0 (it is the
  // first term of a telescoping sum), so the estimator carries the tail.
  return 2.0 * worst;
}

}  // namespace weylvd

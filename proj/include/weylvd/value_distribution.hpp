#pragma once

#include <complex>
#include <functional>

#include "weylvd/halfplane.hpp"

namespace weylvd {

/// Result of the angle-integral evaluator.  Since the angle never exceeds pi,
/// value <= |A| + quad_error always holds.
struct ValueDistributionReport {
  double value = 0.0;
  double d_used = 0.0;
  double quad_error = 0.0;
  long grid_points = 0;
};

struct QuadraturePolicy {
  double abs_tol = 1e-8;
  /// Initial uniform panels per piece of A before adaptive refinement; raise
  /// this when the integrand oscillates faster than the default resolves.
  int initial_panels = 32;
  int max_depth = 30;
};

/// (1/pi) int_A theta(F(lambda + i d), S) d lambda by adaptive composite
/// Simpson over each piece of A.  Deterministic for a fixed policy and d.
ValueDistributionReport herglotz_value_distribution(
    const std::function<HalfPlanePoint(std::complex<double>)>& f,
    const IntervalUnion& a, const IntervalUnion& s, double d,
    const QuadraturePolicy& policy = {});

struct SamplingPolicy {
  /// Initial sample count per piece of A; doubled until the measure
  /// stabilizes or max_samples is reached.
  long initial_samples = 4096;
  long max_samples = 1L << 20;
  /// Stabilization threshold, relative to |A|.
  double stabilization_tol = 1e-3;
  int bisection_iters = 60;
};

struct RealDistributionResult {
  double value = 0.0;
  bool stabilized = false;
  long samples_used = 0;
};

/// |{lambda in A : g(lambda) in S}| by dense sampling with bisection
/// refinement of every indicator change.  Non-finite g values count as
/// outside S; isolated poles therefore contribute nothing.  Monotone in S at
/// fixed grid.
RealDistributionResult real_function_value_distribution(
    const std::function<double(double)>& g, const IntervalUnion& a,
    const IntervalUnion& s, const SamplingPolicy& policy = {});

/// Acceptance predicate |m1 - m2| <= epsilon |A| + 2 e_a_d (inclusive).
bool compare_value_distributions(double m1, double m2, const IntervalUnion& a,
                                 double epsilon, double e_a_d);

/// (1/pi) int_A theta(i sqrt lambda, S) d lambda: the limiting distribution of
/// the free problem.  For lambda > 0 the point i sqrt(lambda) is interior and
/// the angle is smooth; for lambda < 0 the boundary value -sqrt|lambda| is
/// real and the negative part reduces to an exact measure computation.
double free_asymptotic_distribution(const IntervalUnion& a, const IntervalUnion& s);

/// Observed |M_d - M_{d/10}| over a battery of rational Herglotz calibration
/// functions: an empirical stand-in for the d-dependent error term of the
/// comparison estimate.
double empirical_error_proxy(const IntervalUnion& a, const IntervalUnion& s, double d,
                             const QuadraturePolicy& policy = {});

}  // namespace weylvd

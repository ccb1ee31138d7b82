#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace weylvd {

/// A point of the open upper half-plane C+. Construction rejects im <= 0,
/// so a HalfPlanePoint is a witness that a value is genuinely interior.
struct HalfPlanePoint {
  double re = 0.0;
  double im = 1.0;

  HalfPlanePoint() = default;
  HalfPlanePoint(double re_, double im_);
  explicit HalfPlanePoint(std::complex<double> z);

  std::complex<double> value() const { return {re, im}; }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// A finite union of open intervals over the extended real line.  Endpoints
/// may be +-infinity, so half-lines and the whole line are representable.
/// Stored normalized: sorted, pairwise disjoint, touching pieces merged.
/// Single points carry neither measure nor subtended angle, so the open /
/// closed distinction at endpoints is immaterial throughout.
class IntervalUnion {
 public:
  IntervalUnion() = default;

  static IntervalUnion empty() { return {}; }
  static IntervalUnion reals();
  static IntervalUnion of(std::initializer_list<Interval> pieces);
  static IntervalUnion from_intervals(std::vector<Interval> pieces);
  /// (-inf, hi)
  static IntervalUnion half_line_below(double hi);
  /// (lo, +inf)
  static IntervalUnion half_line_above(double lo);

  IntervalUnion unite(const IntervalUnion& other) const;
  /// {-s : s in S}
  IntervalUnion negate() const;
  /// R \ S
  IntervalUnion complement() const;

  bool contains(double x) const;
  /// Total length; +inf when an infinite tail is present.
  double measure() const;
  bool is_empty() const { return pieces_.empty(); }
  bool has_minus_tail() const;
  bool has_plus_tail() const;
  const std::vector<Interval>& pieces() const { return pieces_; }

  friend bool operator==(const IntervalUnion& a, const IntervalUnion& b);

 private:
  std::vector<Interval> pieces_;
};

/// Separation of two points of C+: |z1 - z2| / sqrt(Im z1 * Im z2).
/// Symmetric, zero iff the points coincide, invariant under real translation
/// and positive dilation.  Not a metric, but 2 sinh(D/2) for the hyperbolic
/// distance D.
double gamma_separation(const HalfPlanePoint& z1, const HalfPlanePoint& z2);

/// Hyperbolic distance recovered from the separation: D = 2 asinh(gamma/2).
double hyperbolic_distance(const HalfPlanePoint& z1, const HalfPlanePoint& z2);

/// Angle subtended at z by the set s on the real axis, in [0, pi].
/// Each piece (s1, s2) contributes atan((s2-x)/y) - atan((s1-x)/y); infinite
/// endpoints pass through atan as exact +-pi/2 limits.
double theta_angle(const HalfPlanePoint& z, const IntervalUnion& s);

/// Boundary convention for real points: pi if lambda lies in s, else 0.
double theta_boundary(double lambda, const IntervalUnion& s);

/// Substitute for the triangle inequality of the separation: if
/// gamma(z1,z2) < alpha and gamma(z2,z3) < beta with 0 < alpha, beta <= 2,
/// then gamma(z1,z3) < sqrt(2) (alpha + beta).  Returns that bound.
double quasi_triangle_bound(double alpha, double beta);

}  // namespace weylvd

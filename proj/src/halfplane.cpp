#include "weylvd/halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace weylvd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
}  // namespace

HalfPlanePoint::HalfPlanePoint(double re_, double im_) : re(re_), im(im_) {
  if (!(im > 0.0) || !std::isfinite(re) || !std::isfinite(im)) {
    throw std::invalid_argument("HalfPlanePoint: requires finite re and im > 0");
  }
}

HalfPlanePoint::HalfPlanePoint(std::complex<double> z)
    : HalfPlanePoint(z.real(), z.imag()) {}

IntervalUnion IntervalUnion::reals() {
  IntervalUnion u;
  u.pieces_.push_back({-kInf, kInf});
  return u;
}

IntervalUnion IntervalUnion::of(std::initializer_list<Interval> pieces) {
  return from_intervals(std::vector<Interval>(pieces));
}

IntervalUnion IntervalUnion::from_intervals(std::vector<Interval> pieces) {
  for (const Interval& p : pieces) {
    if (std::isnan(p.lo) || std::isnan(p.hi) || p.lo > p.hi) {
      throw std::invalid_argument("IntervalUnion: interval with lo > hi or NaN endpoint");
    }
  }
  std::erase_if(pieces, [](const Interval& p) { return p.lo == p.hi; });
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalUnion u;
  for (const Interval& p : pieces) {
    if (!u.pieces_.empty() && p.lo <= u.pieces_.back().hi) {
      u.pieces_.back().hi = std::max(u.pieces_.back().hi, p.hi);
    } else {
      u.pieces_.push_back(p);
    }
  }
  return u;
}

IntervalUnion IntervalUnion::half_line_below(double hi) {
  return from_intervals({{-kInf, hi}});
}

IntervalUnion IntervalUnion::half_line_above(double lo) {
  return from_intervals({{lo, kInf}});
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& other) const {
  std::vector<Interval> all = pieces_;
  all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
  return from_intervals(std::move(all));
}

IntervalUnion IntervalUnion::negate() const {
  std::vector<Interval> flipped;
  flipped.reserve(pieces_.size());
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    flipped.push_back({-it->hi, -it->lo});
  }
  IntervalUnion u;
  u.pieces_ = std::move(flipped);
  return u;
}

IntervalUnion IntervalUnion::complement() const {
  IntervalUnion u;
  double cursor = -kInf;
  for (const Interval& p : pieces_) {
    if (p.lo > cursor) u.pieces_.push_back({cursor, p.lo});
    cursor = p.hi;
  }
  if (cursor < kInf) u.pieces_.push_back({cursor, kInf});
  return u;
}

bool IntervalUnion::contains(double x) const {
  for (const Interval& p : pieces_) {
    if (x < p.lo) return false;
    if (x <= p.hi) return true;
  }
  return false;
}

double IntervalUnion::measure() const {
  double total = 0.0;
  for (const Interval& p : pieces_) total += p.hi - p.lo;
  return total;
}

bool IntervalUnion::has_minus_tail() const {
  return !pieces_.empty() && pieces_.front().lo == -kInf;
}

bool IntervalUnion::has_plus_tail() const {
  return !pieces_.empty() && pieces_.back().hi == kInf;
}

bool operator==(const IntervalUnion& a, const IntervalUnion& b) {
  if (a.pieces_.size() != b.pieces_.size()) return false;
  for (std::size_t i = 0; i < a.pieces_.size(); ++i) {
    if (a.pieces_[i].lo != b.pieces_[i].lo || a.pieces_[i].hi != b.pieces_[i].hi)
      return false;
  }
  return true;
}

double gamma_separation(const HalfPlanePoint& z1, const HalfPlanePoint& z2) {
  const double dx = z1.re - z2.re;
  const double dy = z1.im - z2.im;
  return std::hypot(dx, dy) / (std::sqrt(z1.im) * std::sqrt(z2.im));
}

double hyperbolic_distance(const HalfPlanePoint& z1, const HalfPlanePoint& z2) {
  return 2.0 * std::asinh(0.5 * gamma_separation(z1, z2));
}

double theta_angle(const HalfPlanePoint& z, const IntervalUnion& s) {
  const double x = z.re;
  const double y = z.im;
  double total = 0.0;
  for (const Interval& p : s.pieces()) {
    total += std::atan((p.hi - x) / y) - std::atan((p.lo - x) / y);
  }
  return std::clamp(total, 0.0, kPi);
}

double theta_boundary(double lambda, const IntervalUnion& s) {
  return s.contains(lambda) ? kPi : 0.0;
}

double quasi_triangle_bound(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha <= 2.0) || !(beta > 0.0 && beta <= 2.0)) {
    throw std::domain_error("quasi_triangle_bound: requires 0 < alpha,beta <= 2");
  }
  return std::sqrt(2.0) * (alpha + beta);
}

}  // namespace weylvd

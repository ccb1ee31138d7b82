#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace weylvd {

enum class Interpolation { piecewise_constant, piecewise_linear };

/// A real potential on [0, x_max], stored as uniformly spaced samples with a
/// declared interpolation rule.  Grid-sampled rather than a closure so that
/// experiments serialize and reproduce exactly.  Immutable after construction.
class PotentialSpec {
 public:
  PotentialSpec(std::vector<double> samples, double h,
                Interpolation interp = Interpolation::piecewise_constant);

  /// Sample f at the grid nodes 0, h, 2h, ..., x_max.
  static PotentialSpec sample(const std::function<double(double)>& f,
                              double x_max, double h, Interpolation interp);
  static PotentialSpec zero(double x_max, double h);

  double x_max() const { return x_max_; }
  double spacing() const { return h_; }
  Interpolation interpolation() const { return interp_; }
  const std::vector<double>& samples() const { return samples_; }
  std::size_t cell_count() const { return samples_.size() - 1; }

  /// Value of the interpolant at x in [0, x_max].  Piecewise-constant cells
  /// take the left sample.  x beyond x_max evaluates to 0 (the potential is
  /// extended by zero on the rest of the half-line).
  double evaluate(double x) const;
  /// Constant value attributed to cell i (left sample) for propagation.
  double cell_value(std::size_t i) const { return samples_[i]; }

  PotentialSpec resampled(double new_h) const;
  /// Piecewise-constant refinement used to propagate piecewise-linear data:
  /// each cell is split `refine` times and takes the midpoint value.
  PotentialSpec as_piecewise_constant(int refine) const;
  /// V(x + shift) restricted to [0, x_max - shift]; shift must be a whole
  /// number of cells so the translation is exact on the grid.
  PotentialSpec translated(double shift) const;
  PotentialSpec plus_constant(double c) const;
  PotentialSpec scaled(double t) const;

 private:
  std::vector<double> samples_;
  double h_;
  double x_max_;
  Interpolation interp_;
};

/// integral over [a,b] of |V|^p (p = 1 or 2), in closed form per cell for the
/// declared interpolation rule.  No sampling error.
double window_norm(const PotentialSpec& v, double a, double b, int p);

struct Window {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
  double midpoint() const { return 0.5 * (a + b); }
};

/// Ordered, disjoint windows with strictly increasing lengths; the carrier of
/// the "arbitrarily long, arbitrarily small mass" structure on finite data.
class SparseWindowSequence {
 public:
  SparseWindowSequence() = default;
  explicit SparseWindowSequence(std::vector<Window> windows);

  const std::vector<Window>& windows() const { return windows_; }
  std::size_t size() const { return windows_.size(); }
  const Window& operator[](std::size_t k) const { return windows_[k]; }

  std::vector<double> masses(const PotentialSpec& v) const;
  /// True when the window L2 masses are non-increasing along the sequence.
  bool masses_non_increasing(const PotentialSpec& v, double slack = 1e-12) const;

 private:
  std::vector<Window> windows_;
};

/// `count` rectangular bumps separated by geometrically growing gaps; the gaps
/// are returned as the window sequence.  Every window has exactly zero L2
/// mass and the lengths grow by the factor gap_growth.
std::pair<PotentialSpec, SparseWindowSequence> make_sparse_bump_train(
    double bump_height, double bump_width, double gap_growth, int count);

/// Pointwise sum of a sparse base and a square-integrable perturbation.
/// Grids are unified to the finer spacing; x_max values must agree.
PotentialSpec make_l2_sparse(const PotentialSpec& base,
                             const PotentialSpec& perturbation);

/// cos(sqrt x) sampled on [0, x_max].  Subtracting 1 (plus_constant(-1))
/// exposes the near-zero plateaus around x = (2 pi n)^2.
PotentialSpec make_slow_oscillation(double x_max, double h);

/// CSV with header "x,v"; uniform strictly increasing x starting at 0,
/// validated to 1e-9 relative tolerance.
PotentialSpec read_potential_csv(const std::string& path);
void write_potential_csv(const PotentialSpec& v, const std::string& path);

}  // namespace weylvd

#pragma once

#include <complex>
#include <optional>

#include "weylvd/halfplane.hpp"
#include "weylvd/potential.hpp"

namespace weylvd {

/// Request for an m-function value.  `start` is the left endpoint of the
/// half-line problem (0 for the full problem, N for the truncated one).  The
/// square-integrable solution is approximated by imposing f'/f = tail_seed at
/// tail_x and propagating downward; the Weyl-disc contraction makes the
/// result insensitive to the seed once tail_x - start is a few multiples of
/// 1/Im(sqrt z).  tail_x = 0 selects the default start + max(50, 10/Im z);
/// the potential is extended by zero beyond its grid, so the tail may pass
/// x_max.
struct MFunctionRequest {
  std::complex<double> z;
  double start = 0.0;
  double tail_x = 0.0;
  std::optional<HalfPlanePoint> tail_seed;  // default i sqrt z
  double tolerance = 1e-6;
};

struct MFunctionResult {
  HalfPlanePoint m{0.0, 1.0};
  /// Separation between the values obtained from tail_x and from 2 tail_x;
  /// the observable truncation error.
  double gamma_diag = 0.0;
  double tail_x_used = 0.0;
  bool converged = false;
};

/// m(z) = f'(start, z)/f(start, z) for the square-integrable solution f.
/// Herglotz in z; equal to i sqrt z for the zero potential.
MFunctionResult m_function(const PotentialSpec& v, const MFunctionRequest& req);

/// m at z = lambda + i d; the caller owns the d -> 0 policy.
MFunctionResult m_boundary(const PotentialSpec& v, double lambda, double d,
                           MFunctionRequest req = {});

/// -v'(x,z)/v(x,z) for the Dirichlet solution propagated from 0; in C+ for
/// x > 0, Im z > 0.
HalfPlanePoint log_derivative_at(const PotentialSpec& v, std::complex<double> z, double x);

/// v'(x, lambda)/v(x, lambda) at real spectral parameter; the propagation is
/// real and regular, with poles at the isolated zeros of v(x, .).
double real_log_derivative_ratio(const PotentialSpec& v, double lambda, double x);

}  // namespace weylvd

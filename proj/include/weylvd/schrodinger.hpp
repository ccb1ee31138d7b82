#pragma once

#include <Eigen/Dense>
#include <complex>

#include "weylvd/halfplane.hpp"
#include "weylvd/potential.hpp"

namespace weylvd {

/// State (f, f') of a solution of  -f'' + V f = z f, carried together with a
/// separate log-magnitude: the true pair is (f, f') * exp(log_scale).
/// Renormalization keeps max(|f|, |f'|) inside [1/2, 2] so orbits that grow
/// like exp(b x) never overflow.
struct SolutionPair {
  std::complex<double> f{0.0, 0.0};
  std::complex<double> fprime{1.0, 0.0};
  double log_scale = 0.0;

  /// f'/f; the log-scale cancels in the ratio.
  std::complex<double> log_derivative() const { return fprime / f; }
};

/// v-type initial data: f(0) = 0, f'(0) = 1.
inline SolutionPair dirichlet_state() { return {{0.0, 0.0}, {1.0, 0.0}, 0.0}; }
/// u-type initial data: f(0) = 1, f'(0) = 0.
inline SolutionPair neumann_state() { return {{1.0, 0.0}, {0.0, 0.0}, 0.0}; }
/// f(0) = 1, f'(0) = -w0, so that -f'(0)/f(0) = w0 lies in C+.
inline SolutionPair seeded_state(const HalfPlanePoint& w0) {
  return {{1.0, 0.0}, -w0.value(), 0.0};
}
/// f = 1, f' = seed; used to impose f'/f = seed at a tail point.
inline SolutionPair tail_state(std::complex<double> seed) {
  return {{1.0, 0.0}, seed, 0.0};
}

/// Columns (u, u') and (v, v') of the fundamental system, times exp(log_scale).
/// The true matrix has unit determinant (Wronskian), so
/// det(m) * exp(2 log_scale) = 1 up to roundoff.
struct TransferMatrix {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  double log_scale = 0.0;

  std::complex<double> det_scaled() const {
    return m.determinant() * std::exp(2.0 * log_scale);
  }
  /// Entries at true scale; overflows only if the true solution does.
  Eigen::Matrix2cd true_matrix() const { return m * std::exp(log_scale); }
};

/// Principal square root; for Im z > 0 this is the branch a + ib with a, b > 0.
inline std::complex<double> sqrt_upper(std::complex<double> z) { return std::sqrt(z); }

/// Advance a solution from x_from to x_to (0 <= x_from < x_to, Im z >= 0).
/// Piecewise-constant cells are advanced by the exact closed-form 2x2
/// propagator built from entire functions of (z - V) dx^2, so there is no
/// step error beyond roundoff; piecewise-linear potentials are sub-sampled
/// onto a finer constant grid first.  Beyond x_max the potential is zero.
SolutionPair propagate(const PotentialSpec& v, std::complex<double> z,
                       double x_from, double x_to, SolutionPair state);

/// Advance downward from x_from to x_to (x_from > x_to >= 0); same exactness.
SolutionPair propagate_reverse(const PotentialSpec& v, std::complex<double> z,
                               double x_from, double x_to, SolutionPair state);

/// Fundamental system at x: u(0)=1, u'(0)=0, v(0)=0, v'(0)=1.
TransferMatrix fundamental_system(const PotentialSpec& v, std::complex<double> z,
                                  double x);

/// Transfer matrix over [a, b] (identity data imposed at a).
TransferMatrix transfer_matrix(const PotentialSpec& v, std::complex<double> z,
                               double a, double b);

/// Free solutions with the fundamental initial data, as entire functions of
/// z x^2 (no branch cuts, valid for all complex z and real x).
std::complex<double> free_u0(std::complex<double> z, double x);
std::complex<double> free_u0_prime(std::complex<double> z, double x);
std::complex<double> free_v0(std::complex<double> z, double x);
std::complex<double> free_v0_prime(std::complex<double> z, double x);

/// -v0'(x,z)/v0(x,z) for the zero potential, evaluated in the overflow-free
/// form  i w (1 + E^2)/(1 - E^2)  with w = sqrt z, E = exp(i w x), |E| < 1.
/// Lies in C+ for Im z > 0, x > 0, and tends to i sqrt z as x grows.
HalfPlanePoint free_log_derivative(std::complex<double> z, double x);

/// The three weighted integrals consumed by the comparison bounds:
///   diff_weighted = int_0^x (V - Vt)^2 |vt|^2 dt
///   vtilde_sq     = int_0^x |vt|^2 dt
///   v_sq          = int_0^x |v|^2 dt
/// where v, vt solve the equation with potentials V, Vt and Dirichlet data.
/// Composite Simpson on the propagation grid; quad_error is the largest
/// Richardson estimate among the three.
struct WeightedIntegrals {
  double diff_weighted = 0.0;
  double vtilde_sq = 0.0;
  double v_sq = 0.0;
  double quad_error = 0.0;
};
WeightedIntegrals weighted_l2_integrals(const PotentialSpec& v,
                                        const PotentialSpec& vtilde,
                                        std::complex<double> z, double x);

/// int_0^n Im(conj(u) v) dt along the propagated fundamental system.
double im_ubar_v_integral(const PotentialSpec& v, std::complex<double> z, double n);

}  // namespace weylvd

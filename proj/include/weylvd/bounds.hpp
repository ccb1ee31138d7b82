#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "weylvd/potential.hpp"

namespace weylvd {

struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;
};

/// lhs <= rhs (1 + rel) + abs, inclusive.
bool bound_holds(double lhs, double rhs, Tolerance tol);

/// One executed inequality: both sides computed from first principles, the
/// seed and digest sufficient to reproduce the inputs.
struct BoundCheckResult {
  std::string check;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool pass = false;
  std::string inputs_digest;
};

/// Constant of the L2 comparison bound: sqrt(2) (1/sqrt2 - 1/sinh sqrt2)^{-1/2},
/// strictly below 3.3.
double l2_comparison_constant();
/// Constant of the free-tail bound: 2^{1/4} times the one above, below 3.9.
double free_tail_constant();

/// gamma(-v'/v, -vt'/vt) at x against
/// (Im z)^{-1} sqrt( int (V-Vt)^2 |vt|^2 / int |vt|^2 ).
BoundCheckResult check_lemma1(const PotentialSpec& v, const PotentialSpec& vtilde,
                              std::complex<double> z, double x, Tolerance tol = {});

/// gamma(-v'/v, -v0'/v0) at L against C |z|^{1/4} (Im z)^{-1} (int_0^L V^2)^{1/2};
/// requires L >= 1/sqrt|z|.
BoundCheckResult check_lemma2(const PotentialSpec& v, std::complex<double> z, double l,
                              Tolerance tol = {});

/// gamma(-v0'/v0, i sqrt z) at L against
/// C' (1 + (b/a)^2)^{1/2} (e^{4bL} - 1)^{-1/2}; requires L >= 1/sqrt|z|.
/// Also verifies the three auxiliary inequalities tying b/a, b to Re z, Im z;
/// their failure fails the check and is noted in the digest.
BoundCheckResult check_lemma3(std::complex<double> z, double l, Tolerance tol = {});

/// Worst point of the denominator lower bound
///   sinh(2bL)/(2b) - sin(2aL)/(2a) > (1 - sqrt2/sinh sqrt2) sinh(2bL)/(2b)
/// over a grid of (a, b, L) with L >= 1/sqrt(a^2+b^2).
BoundCheckResult check_sinh_denominator(int points_per_axis = 22, Tolerance tol = {});

/// Transfer-matrix perturbation envelope: for every grid node x in [0, n],
///   ||M(x) - M0(x)||  <=  ||M0(x)|| (exp(int_0^n |V| ||A|| dt) - 1)
/// with ||A|| = |u0|^2 + |v0|^2 and the operator norm on l2.  The reported
/// sides are taken at the node and z of smallest margin.
BoundCheckResult check_lemma4(const PotentialSpec& v,
                              const std::vector<std::complex<double>>& k_grid, double n,
                              Tolerance tol = {});

/// Smallest-mass threshold delta0 such that the Gronwall-based envelope keeps
/// | int_0^n Im(conj u v) - int_0^n Im(conj u0 v0) | below target(z) whenever
/// int_0^n |V| < delta0, found by bisection.  worst_slack is the margin of
/// the envelope at the returned delta0.
struct Delta0Result {
  double delta0 = 0.0;
  double worst_slack = 0.0;
  bool found = false;
};
Delta0Result find_delta0_for_ubarv(const std::vector<std::complex<double>>& k_grid,
                                   double n, const std::function<double(std::complex<double>)>& target);

/// Direct validation of the integral comparison for one admissible potential:
/// lhs = max over the grid of |int Im(conj u v) - int Im(conj u0 v0)|, rhs = epsilon.
BoundCheckResult check_ubarv_corollary(const PotentialSpec& v,
                                       const std::vector<std::complex<double>>& k_grid,
                                       double n, double epsilon, Tolerance tol = {});

/// Constructive asymptotic check on the compact box K: picks N from the three
/// selection inequalities, delta0 from the Gronwall bisection, delta from
/// N delta < delta0^2 and C |z|^{1/4} (Im z)^{-1} sqrt(delta) < epsilon/6, then
/// verifies gamma(-f'(L)/f(L), i sqrt z) < epsilon and the three epsilon/6
/// sub-inequalities for drawn admissible potentials, all grid z, L in {N, 2N, 4N}.
struct Theorem1Options {
  double epsilon = 0.1;
  double re_lo = 1.0, re_hi = 2.0;
  double im_lo = 0.5, im_hi = 1.0;
  int grid_n = 5;
  int potentials = 20;
  std::uint64_t seed = 42;
  double grid_h = 0.05;
  double n_cap = 200.0;
  Tolerance tol{};
};
struct Theorem1Report {
  double n = 0.0;
  double delta0 = 0.0;
  double delta = 0.0;
  bool search_ok = false;
  std::vector<BoundCheckResult> checks;
  bool all_pass = false;
};
Theorem1Report check_theorem1(const Theorem1Options& options);

/// Uniform grid over the box K.
std::vector<std::complex<double>> box_grid(double re_lo, double re_hi, double im_lo,
                                           double im_hi, int n);

struct SuiteOptions {
  std::string check = "all";  // lemma1|lemma2|lemma3|lemma4|theorem1|all
  int draws = 100;
  std::uint64_t seed = 42;
  Tolerance tol{};
};

/// Seeded randomized sections for the selected checks; deterministic row
/// order and content for a fixed seed.
std::vector<BoundCheckResult> run_bound_suite(const SuiteOptions& options);

/// CSV rows `check,seed,lhs,rhs,margin,pass` with full-precision numbers.
void write_bound_csv(const std::vector<BoundCheckResult>& rows, std::ostream& out);

}  // namespace weylvd

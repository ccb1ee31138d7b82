#include "weylvd/weyl.hpp"

#include <cmath>
#include <stdexcept>

#include "weylvd/schrodinger.hpp"

namespace weylvd {

namespace {

std::complex<double> backward_log_derivative(const PotentialSpec& v,
                                             std::complex<double> z, double tail,
                                             double start,
                                             std::complex<double> seed) {
  SolutionPair st = tail_state(seed);
  st = propagate_reverse(v, z, tail, start, st);
  return st.log_derivative();
}

}  // namespace

MFunctionResult m_function(const PotentialSpec& v, const MFunctionRequest& req) {
  if (!(req.z.imag() > 0.0)) {
    throw std::domain_error("m_function: requires Im z > 0");
  }
  if (!(req.start >= 0.0)) {
    throw std::domain_error("m_function: requires start >= 0");
  }
  const double tail =
      req.tail_x > 0.0 ? req.tail_x : req.start + std::max(50.0, 10.0 / req.z.imag());
  if (!(tail > req.start)) {
    throw std::domain_error("m_function: requires tail_x > start");
  }
  const std::complex<double> seed =
      req.tail_seed ? req.tail_seed->value()
                    : std::complex<double>(0.0, 1.0) * sqrt_upper(req.z);

  const std::complex<double> m1 = backward_log_derivative(v, req.z, tail, req.start, seed);
  const std::complex<double> m2 =
      backward_log_derivative(v, req.z, 2.0 * tail, req.start, seed);

  if (!(m1.imag() > 0.0)) {
    throw std::runtime_error("m_function: computed value left the upper half-plane");
  }
  MFunctionResult out;
  out.m = HalfPlanePoint(m1);
  out.gamma_diag = gamma_separation(out.m, HalfPlanePoint(m2));
  out.tail_x_used = tail;
  out.converged = out.gamma_diag <= req.tolerance;
  return out;
}

MFunctionResult m_boundary(const PotentialSpec& v, double lambda, double d,
                           MFunctionRequest req) {
  if (!(d > 0.0)) throw std::domain_error("m_boundary: requires d > 0");
  req.z = {lambda, d};
  return m_function(v, req);
}

HalfPlanePoint log_derivative_at(const PotentialSpec& v, std::complex<double> z, double x) {
  if (!(z.imag() > 0.0) || !(x > 0.0)) {
    throw std::domain_error("log_derivative_at: requires Im z > 0 and x > 0");
  }
  const SolutionPair st = propagate(v, z, 0.0, x, dirichlet_state());
  return HalfPlanePoint(-st.log_derivative());
}

double real_log_derivative_ratio(const PotentialSpec& v, double lambda, double x) {
  const SolutionPair st = propagate(v, {lambda, 0.0}, 0.0, x, dirichlet_state());
  return st.fprime.real() / st.f.real();
}

}  // namespace weylvd

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "weylvd/schrodinger.hpp"

using namespace weylvd;
using Complex = std::complex<double>;
using namespace std::complex_literals;

namespace {

// Exponential form of the free Dirichlet solution, independent of the
// entire-function route used by the library.
Complex v0_exponential(Complex z, double x) {
  const Complex w = std::sqrt(z);
  return (std::exp(1i * w * x) - std::exp(-1i * w * x)) / (2.0 * 1i * w);
}

Complex v0_prime_exponential(Complex z, double x) {
  const Complex w = std::sqrt(z);
  return (std::exp(1i * w * x) + std::exp(-1i * w * x)) / 2.0;
}

Complex true_f(const SolutionPair& s) { return s.f * std::exp(s.log_scale); }
Complex true_fprime(const SolutionPair& s) { return s.fprime * std::exp(s.log_scale); }

PotentialSpec random_steps(std::mt19937_64& rng, double x_max, double h, double amp) {
  std::uniform_real_distribution<double> height(-amp, amp);
  std::uniform_int_distribution<int> hold(2, 12);
  std::vector<double> samples;
  const auto n = static_cast<std::size_t>(std::llround(x_max / h)) + 1;
  while (samples.size() < n) {
    const double v = height(rng);
    const int len = hold(rng);
    for (int i = 0; i < len && samples.size() < n; ++i) samples.push_back(v);
  }
  return PotentialSpec(std::move(samples), h, Interpolation::piecewise_constant);
}

}  // namespace

TEST_CASE("free propagation reproduces the exponential closed form") {
  const auto zero = PotentialSpec::zero(30.0, 0.1);
  const Complex z = 1i;
  SolutionPair st = dirichlet_state();
  double x = 0.0;
  for (double next : {0.7, 2.3, 5.0, 11.0, 25.0}) {
    st = propagate(zero, z, x, next, st);
    x = next;
    CHECK(std::abs(true_f(st) - v0_exponential(z, x)) <=
          1e-10 * std::abs(v0_exponential(z, x)));
    CHECK(std::abs(true_fprime(st) - v0_prime_exponential(z, x)) <=
          1e-10 * std::abs(v0_prime_exponential(z, x)));
    // renormalization invariant
    CHECK(std::max(std::abs(st.f), std::abs(st.fprime)) <= 2.0);
    CHECK(std::max(std::abs(st.f), std::abs(st.fprime)) >= 0.5);
  }
}

TEST_CASE("constant potential is a spectral shift of the free case") {
  const double c = -1.4;
  const auto pot = PotentialSpec::sample([&](double) { return c; }, 12.0, 0.25,
                                         Interpolation::piecewise_constant);
  const Complex z = 0.8 + 0.9i;
  const auto st = propagate(pot, z, 0.0, 7.0, dirichlet_state());
  const Complex expect = v0_exponential(z - c, 7.0);
  CHECK(std::abs(true_f(st) - expect) <= 1e-10 * std::abs(expect));
}

TEST_CASE("fundamental system: identity, free form, flow composition, Wronskian") {
  std::mt19937_64 rng(31);
  const auto pot = random_steps(rng, 10.0, 0.05, 2.0);
  const Complex z = -0.3 + 1.2i;

  const auto at_zero = fundamental_system(pot, z, 0.0);
  CHECK((at_zero.m - Eigen::Matrix2cd::Identity()).norm() == 0.0);

  const auto zero_pot = PotentialSpec::zero(10.0, 0.05);
  const auto m0 = fundamental_system(zero_pot, z, 3.0);
  const auto t0 = m0.true_matrix();
  CHECK(std::abs(t0(0, 0) - free_u0(z, 3.0)) <= 1e-10 * std::abs(free_u0(z, 3.0)));
  CHECK(std::abs(t0(0, 1) - free_v0(z, 3.0)) <= 1e-10 * std::abs(free_v0(z, 3.0)));
  CHECK(std::abs(t0(1, 0) - free_u0_prime(z, 3.0)) <= 1e-10 * std::abs(free_u0_prime(z, 3.0)));
  CHECK(std::abs(t0(1, 1) - free_v0_prime(z, 3.0)) <= 1e-10 * std::abs(free_v0_prime(z, 3.0)));

  // Wronskian conservation; recovering det = 1 from the scaled entries is a
  // cancellation of size exp(2 log_scale), so the tolerance tracks that.
  for (double x : {0.5, 2.0, 4.0}) {
    const auto m = fundamental_system(pot, z, x);
    const double cond = std::exp(2.0 * m.log_scale);
    CHECK(std::abs(m.det_scaled() - 1.0) <= std::max(1e-13, 1e-13 * cond));
    CHECK(std::abs(m.det_scaled() - 1.0) <= 1e-10);
  }
  CHECK(std::abs(fundamental_system(pot, z, 10.0).det_scaled() - 1.0) <= 1e-6);

  // flow property: full interval equals the composition of the halves
  const double a = 3.7, b = 8.9;
  const auto full = fundamental_system(pot, z, b);
  const auto head = fundamental_system(pot, z, a);
  const auto tail = transfer_matrix(pot, z, a, b);
  const Eigen::Matrix2cd composed = tail.true_matrix() * head.true_matrix();
  CHECK((full.true_matrix() - composed).norm() <= 1e-9 * composed.norm());
}

TEST_CASE("reverse propagation inverts forward propagation") {
  std::mt19937_64 rng(77);
  const auto pot = random_steps(rng, 8.0, 0.1, 1.5);
  const Complex z = 0.4 + 0.7i;
  const SolutionPair start{0.3 + 0.1i, 1.0 - 0.2i, 0.0};
  const auto fwd = propagate(pot, z, 0.5, 7.5, start);
  const auto back = propagate_reverse(pot, z, 7.5, 0.5, fwd);
  CHECK(std::abs(true_f(back) - true_f(start)) <= 1e-9);
  CHECK(std::abs(true_fprime(back) - true_fprime(start)) <= 1e-9);
}

TEST_CASE("free log-derivative: interior, limit, decay, closed-form separation") {
  const Complex z = 0.6 + 1.1i;
  const Complex w = sqrt_upper(z);
  const HalfPlanePoint limit(1i * w);

  // tends to i sqrt z
  CHECK(gamma_separation(free_log_derivative(z, 60.0), limit) <= 1e-12);

  // monotone decreasing separation along x on the imaginary axis
  double prev = std::numeric_limits<double>::infinity();
  for (double x = 0.5; x < 12.0; x += 0.5) {
    const double g = gamma_separation(free_log_derivative(2i, x), HalfPlanePoint(1i * sqrt_upper(2i)));
    CHECK(g < prev);
    prev = g;
  }

  // exact separation formula as an independent route
  const double a = w.real(), b = w.imag();
  for (double L : {1.0, 2.5, 4.0}) {
    const double direct = gamma_separation(free_log_derivative(z, L), limit);
    const double closed = std::sqrt(2.0 * (a * a + b * b) / a) * std::exp(-b * L) /
                          std::sqrt(a * std::sinh(2.0 * b * L) - b * std::sin(2.0 * a * L));
    CHECK(direct == doctest::Approx(closed).epsilon(1e-9));
  }

  CHECK_THROWS(free_log_derivative(Complex(1.0, 0.0), 1.0));
  CHECK_THROWS(free_log_derivative(2i, 0.0));
}

TEST_CASE("matching solution agrees with fundamental-system columns") {
  std::mt19937_64 rng(5);
  const auto pot = random_steps(rng, 6.0, 0.05, 2.5);
  const Complex z = 1.3 + 0.8i;
  const double x = 5.3;
  const auto st = propagate(pot, z, 0.0, x, dirichlet_state());
  const auto m = fundamental_system(pot, z, x);
  const Complex ratio_direct = -st.log_derivative();
  const Complex ratio_columns = -m.m(1, 1) / m.m(0, 1);
  CHECK(std::abs(ratio_direct - ratio_columns) <= 1e-10 * std::abs(ratio_direct));
}

TEST_CASE("weighted integrals: identical potentials and the free denominator") {
  std::mt19937_64 rng(11);
  const auto pot = random_steps(rng, 8.0, 0.05, 2.0);
  const Complex z = 0.2 + 1.4i;

  SUBCASE("identical potentials zero out the difference integral") {
    const auto w = weighted_l2_integrals(pot, pot, z, 6.0);
    CHECK(w.diff_weighted == 0.0);
    CHECK(w.vtilde_sq > 0.0);
    CHECK(w.v_sq == doctest::Approx(w.vtilde_sq).epsilon(1e-14));
  }

  SUBCASE("free |v0|^2 integral matches the closed form") {
    const auto zero = PotentialSpec::zero(8.0, 0.02);
    const Complex zi = 1i;
    const double L = 6.0;
    const auto w = weighted_l2_integrals(pot.resampled(0.02), zero, zi, L);
    const double a = sqrt_upper(zi).real(), b = sqrt_upper(zi).imag();
    const double closed = (std::sinh(2.0 * b * L) / (2.0 * b) -
                           std::sin(2.0 * a * L) / (2.0 * a)) /
                          (2.0 * (a * a + b * b));
    CHECK(w.vtilde_sq == doctest::Approx(closed).epsilon(1e-8));
    CHECK(w.quad_error < 1e-8 * closed);
  }

  SUBCASE("halving the grid changes the result below 1e-8 relative") {
    // both grids represent the same step functions; refining only shrinks
    // the quadrature panels
    const auto base = random_steps(rng, 8.0, 0.05, 1.5);
    const auto vt = random_steps(rng, 8.0, 0.05, 1.5);
    const auto w1 = weighted_l2_integrals(base, vt, z, 6.0);
    const auto w2 =
        weighted_l2_integrals(base.resampled(0.025), vt.resampled(0.025), z, 6.0);
    CHECK(std::abs(w1.vtilde_sq - w2.vtilde_sq) <= 1e-8 * w1.vtilde_sq);
    CHECK(std::abs(w1.diff_weighted - w2.diff_weighted) <= 1e-8 * w1.diff_weighted);
    CHECK(std::abs(w1.v_sq - w2.v_sq) <= 1e-8 * w1.v_sq);
  }
}

TEST_CASE("interior imaginary-part identity for -v'/v") {
  std::mt19937_64 rng(13);
  const auto pot = random_steps(rng, 7.0, 0.05, 1.8);
  const Complex z = -0.7 + 0.9i;
  const double x = 5.5;
  const auto st = propagate(pot, z, 0.0, x, dirichlet_state());
  const auto w = weighted_l2_integrals(pot, pot, z, x);
  const double lhs = std::imag(-st.log_derivative());
  const double rhs = z.imag() * w.v_sq / std::norm(true_f(st));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("cross-Wronskian accumulates the potential difference") {
  std::mt19937_64 rng(17);
  const auto v = random_steps(rng, 6.0, 0.05, 1.5);
  const auto vt = random_steps(rng, 6.0, 0.05, 1.5);
  const Complex z = 0.5 + 1.0i;
  const double x_end = 4.8;

  // march both orbits on a shared fine grid and integrate (V - Vt) v vt
  const double dt = 0.0125;
  const auto n = static_cast<long>(std::llround(x_end / dt));
  SolutionPair a = dirichlet_state(), b = dirichlet_state();
  std::vector<Complex> va{true_f(a)}, vb{true_f(b)};
  double x = 0.0;
  for (long i = 0; i < n; ++i) {
    const double next = dt * static_cast<double>(i + 1);
    a = propagate(v, z, x, next, a);
    b = propagate(vt, z, x, next, b);
    va.push_back(true_f(a));
    vb.push_back(true_f(b));
    x = next;
  }
  // composite Simpson over pairs of steps
  Complex integral = 0.0;
  for (long i = 0; i + 2 <= n; i += 2) {
    const double xm = dt * static_cast<double>(i + 1);
    const double x0 = dt * static_cast<double>(i);
    const double x2 = dt * static_cast<double>(i + 2);
    const auto g = [&](long j, double xx) {
      return (v.evaluate(std::min(xx, v.x_max() * (1 - 1e-15))) -
              vt.evaluate(std::min(xx, vt.x_max() * (1 - 1e-15)))) *
             va[static_cast<std::size_t>(j)] * vb[static_cast<std::size_t>(j)];
    };
    integral += (x2 - x0) / 6.0 * (g(i, x0 + 1e-9) + 4.0 * g(i + 1, xm + 1e-9) + g(i + 2, x2 - 1e-9));
  }
  const Complex lhs = vb.back() * true_fprime(a) - va.back() * true_fprime(b);
  CHECK(std::abs(lhs - integral) <= 1e-8 * std::abs(lhs));
}

TEST_CASE("int Im(conj u v): identity route, positivity, growth") {
  const auto zero = PotentialSpec::zero(50.0, 0.02);

  SUBCASE("matches the boundary-term identity for the free case") {
    for (const Complex z : {Complex(0.0, 1.0), Complex(1.5, 0.6), Complex(-1.0, 0.8)}) {
      for (double n : {0.8, 3.0, 9.0}) {
        const double quad = im_ubar_v_integral(zero, z, n);
        const Complex u = free_u0(z, n), up = free_u0_prime(z, n);
        const Complex v = free_v0(z, n), vp = free_v0_prime(z, n);
        const double identity =
            (std::real(std::conj(u) * vp - std::conj(up) * v) - 1.0) / (2.0 * z.imag());
        CHECK(quad == doctest::Approx(identity).epsilon(1e-9));
      }
    }
  }

  SUBCASE("identity route also holds through a potential") {
    std::mt19937_64 rng(23);
    const auto pot = random_steps(rng, 12.0, 0.05, 1.2);
    const Complex z = 0.9 + 0.7i;
    const double n = 8.0;
    const double quad = im_ubar_v_integral(pot, z, n);
    const auto m = fundamental_system(pot, z, n);
    const auto t = m.true_matrix();
    const double identity =
        (std::real(std::conj(t(0, 0)) * t(1, 1) - std::conj(t(1, 0)) * t(0, 1)) - 1.0) /
        (2.0 * z.imag());
    CHECK(quad == doctest::Approx(identity).epsilon(1e-8));
  }

  SUBCASE("positive on a z grid and unbounded in N for the free problem") {
    for (double re = -2.0; re <= 2.0; re += 1.0) {
      for (double im = 0.4; im <= 2.0; im += 0.4) {
        CHECK(im_ubar_v_integral(zero, {re, im}, 5.0) > 0.0);
      }
    }
    const Complex z = 1.0 + 0.5i;
    CHECK(im_ubar_v_integral(zero, z, 40.0) > 100.0 * im_ubar_v_integral(zero, z, 10.0));
  }
}

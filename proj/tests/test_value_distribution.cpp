#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "weylvd/schrodinger.hpp"
#include "weylvd/value_distribution.hpp"
#include "weylvd/weyl.hpp"

using namespace weylvd;
using Complex = std::complex<double>;
using namespace std::complex_literals;

namespace {
const auto kIdentity = [](Complex z) { return HalfPlanePoint(z); };
const auto kInverse = [](Complex z) { return HalfPlanePoint(-1.0 / z); };
}  // namespace

TEST_CASE("angle integral calibration on functions with known distributions") {
  SUBCASE("identity: M(A,S) = |A cap S|") {
    const auto a = IntervalUnion::of({{0.0, 1.0}});
    const auto r1 = herglotz_value_distribution(kIdentity, a, a, 1e-3);
    CHECK(r1.value == doctest::Approx(1.0).epsilon(0.005));
    const auto s2 = IntervalUnion::of({{0.25, 2.0}});
    const auto r2 = herglotz_value_distribution(kIdentity, a, s2, 1e-3);
    CHECK(std::abs(r2.value - 0.75) <= 0.005);
  }
  SUBCASE("-1/z maps [1,2] onto [-1,-1/2]") {
    const auto a = IntervalUnion::of({{1.0, 2.0}});
    const auto s = IntervalUnion::of({{-1.0, -0.5}});
    const auto r = herglotz_value_distribution(kInverse, a, s, 1e-3);
    CHECK(std::abs(r.value - 1.0) <= 0.01);
  }
  SUBCASE("free m-function on the negative axis") {
    const auto f = [](Complex z) { return HalfPlanePoint(1i * sqrt_upper(z)); };
    const auto a = IntervalUnion::of({{-1.0, -0.1}});
    const auto neg = herglotz_value_distribution(f, a, IntervalUnion::half_line_below(0.0), 1e-4);
    CHECK(neg.value == doctest::Approx(0.9).epsilon(0.02));
    const auto pos = herglotz_value_distribution(f, a, IntervalUnion::half_line_above(0.0), 1e-4);
    CHECK(pos.value <= 0.02);
  }
}

TEST_CASE("report invariants and failure modes") {
  const auto a = IntervalUnion::of({{0.0, 2.0}});
  const auto r = herglotz_value_distribution(kIdentity, a, IntervalUnion::reals(), 1e-2);
  CHECK(r.value <= a.measure() + r.quad_error + 1e-12);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.grid_points > 0);
  CHECK(r.d_used == 1e-2);
  CHECK_THROWS(herglotz_value_distribution(kIdentity, a, a, 0.0));
  CHECK_THROWS(herglotz_value_distribution(kIdentity, IntervalUnion::half_line_above(0.0), a, 1e-2));
}

TEST_CASE("additivity in S and the d-ladder contraction") {
  const auto a = IntervalUnion::of({{0.5, 2.5}});
  const auto s1 = IntervalUnion::of({{-0.5, 1.0}});
  const auto s2 = IntervalUnion::of({{1.5, 3.0}});
  const auto f = [](Complex z) { return HalfPlanePoint(z - 0.3 / (z - 0.7)); };

  const double m1 = herglotz_value_distribution(f, a, s1, 1e-3).value;
  const double m2 = herglotz_value_distribution(f, a, s2, 1e-3).value;
  const double m12 = herglotz_value_distribution(f, a, s1.unite(s2), 1e-3).value;
  CHECK(m12 == doctest::Approx(m1 + m2).epsilon(1e-6));

  // d-ladder differences shrink by at least a factor two for rational data
  double prev_diff = std::numeric_limits<double>::infinity();
  double prev_value = herglotz_value_distribution(f, a, s1, 1e-1).value;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const double value = herglotz_value_distribution(f, a, s1, d).value;
    const double diff = std::abs(value - prev_value);
    CHECK(diff <= 0.5 * prev_diff);
    prev_diff = diff;
    prev_value = value;
  }
}

TEST_CASE("truncating A perturbs the value by at most the lost measure") {
  const auto f = [](Complex z) { return HalfPlanePoint(z + 1.0 / (2.0 - z) + 0.5 / (6.0 - z)); };
  const auto a = IntervalUnion::of({{0.0, 10.0}});
  const auto a_trunc = IntervalUnion::of({{0.0, 8.0}});
  const auto s = IntervalUnion::of({{0.0, 4.0}});
  const double full = herglotz_value_distribution(f, a, s, 1e-3).value;
  const double trunc = herglotz_value_distribution(f, a_trunc, s, 1e-3).value;
  CHECK(std::abs(full - trunc) <= 2.0 + 1e-6);
}

TEST_CASE("real-function measurement") {
  SUBCASE("identity and full range") {
    const auto a = IntervalUnion::of({{0.0, 1.0}});
    const auto id = [](double x) { return x; };
    CHECK(real_function_value_distribution(id, a, a).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(real_function_value_distribution(id, a, IntervalUnion::reals()).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    const auto quarter = IntervalUnion::of({{0.25, 0.5}});
    CHECK(real_function_value_distribution(id, a, quarter).value ==
          doctest::Approx(0.25).epsilon(1e-9));
  }
  SUBCASE("monotone in S") {
    const auto a = IntervalUnion::of({{0.0, 6.0}});
    const auto g = [](double x) { return std::tan(x); };  // poles included
    const auto s_small = IntervalUnion::of({{0.0, 1.0}});
    const auto s_big = IntervalUnion::of({{-0.5, 2.0}});
    const double vs = real_function_value_distribution(g, a, s_small).value;
    const double vb = real_function_value_distribution(g, a, s_big).value;
    CHECK(vs <= vb + 1e-9);
  }
  SUBCASE("poles carry no measure") {
    const auto a = IntervalUnion::of({{0.0, M_PI}});
    const auto g = [](double x) { return std::tan(x); };
    const double v = real_function_value_distribution(g, a, IntervalUnion::reals()).value;
    CHECK(v == doctest::Approx(M_PI).epsilon(1e-6));
  }
}

TEST_CASE("the two faces agree for a real-boundary-valued ratio") {
  // v'(N,.)/v(N,.) for a compactly supported potential has real boundary
  // values; measure it directly and through the angle integral of -v'/v
  // against the negated target set.
  const auto pot = PotentialSpec::sample(
      [](double x) { return (x >= 1.0 && x < 2.0) ? 1.5 : 0.0; }, 20.0, 0.25,
      Interpolation::piecewise_constant);
  const double n = 9.0;
  const auto a = IntervalUnion::of({{1.0, 2.0}});
  const auto s = IntervalUnion::half_line_above(0.0);

  const auto g = [&](double lambda) { return real_log_derivative_ratio(pot, lambda, n); };
  const double direct = real_function_value_distribution(g, a, s).value;

  const auto f = [&](Complex z) {
    const SolutionPair st = propagate(pot, z, 0.0, n, dirichlet_state());
    return HalfPlanePoint(-st.log_derivative());
  };
  QuadraturePolicy policy;
  policy.initial_panels = 96;
  const double via_angles =
      herglotz_value_distribution(f, a, s.negate(), 1e-3, policy).value;

  CHECK(std::abs(direct - via_angles) <= 0.02 * a.measure());
}

TEST_CASE("comparison predicate") {
  const auto a = IntervalUnion::of({{0.0, 2.0}});
  CHECK(compare_value_distributions(0.7, 0.7, a, 0.01, 0.0));
  // boundary case is inclusive
  CHECK(compare_value_distributions(0.0, 0.1 * 2.0 + 2.0 * 0.05, a, 0.1, 0.05));
  CHECK(!compare_value_distributions(0.0, 0.1 * 2.0 + 2.0 * 0.05 + 1e-9, a, 0.1, 0.05));
  CHECK_THROWS(compare_value_distributions(0.0, 0.0, a, 0.0, 0.0));

  // chained form: a passing comparison with e_a_d < eps |A| / 2 forces the
  // discrepancy under 2 eps |A|
  const double eps = 0.07;
  for (double e : {0.0, 0.2 * eps * a.measure(), 0.49 * eps * a.measure()}) {
    for (double diff : {0.0, 0.5 * eps * a.measure(), eps * a.measure() + 2.0 * e}) {
      if (compare_value_distributions(0.0, diff, a, eps, e)) {
        CHECK(diff <= 2.0 * eps * a.measure());
      }
    }
  }
}

TEST_CASE("free limiting distribution") {
  SUBCASE("full target set recovers |A|") {
    const auto a = IntervalUnion::of({{-3.0, -1.0}, {1.0, 2.0}});
    CHECK(free_asymptotic_distribution(a, IntervalUnion::reals()) ==
          doctest::Approx(3.0).epsilon(1e-9));
  }
  SUBCASE("negative spectral parameters against half-lines") {
    const auto a = IntervalUnion::of({{-2.0, -1.0}});
    CHECK(free_asymptotic_distribution(a, IntervalUnion::half_line_below(0.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(free_asymptotic_distribution(a, IntervalUnion::half_line_above(0.0)) == 0.0);
  }
  SUBCASE("positive side splits evenly on a symmetric half-line") {
    const auto a = IntervalUnion::of({{1.0, 4.0}});
    CHECK(free_asymptotic_distribution(a, IntervalUnion::half_line_above(0.0)) ==
          doctest::Approx(1.5).epsilon(1e-9));
  }
  SUBCASE("the two targets coincide for positive A and symmetric S") {
    const auto a = IntervalUnion::of({{0.5, 3.0}});
    const auto s = IntervalUnion::of({{-1.5, 1.5}, {-4.0, -3.5}, {3.5, 4.0}});
    REQUIRE(s.negate() == s);
    CHECK(free_asymptotic_distribution(a, s) ==
          doctest::Approx(free_asymptotic_distribution(a, s.negate())).epsilon(1e-12));
  }
  SUBCASE("negative part agrees with a brute midpoint count") {
    const auto a = IntervalUnion::of({{-4.0, -0.5}});
    const auto s = IntervalUnion::of({{-1.5, -0.9}});
    const double exact = free_asymptotic_distribution(a, s);
    long hits = 0;
    const long n = 200000;
    for (long i = 0; i < n; ++i) {
      const double lam = -4.0 + 3.5 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      if (s.contains(-std::sqrt(-lam))) ++hits;
    }
    CHECK(exact == doctest::Approx(3.5 * hits / static_cast<double>(n)).epsilon(1e-3));
  }
}

TEST_CASE("empirical error proxy shrinks with d") {
  const auto a = IntervalUnion::of({{0.5, 2.0}});
  const auto s = IntervalUnion::of({{-1.0, 1.0}});
  const double p1 = empirical_error_proxy(a, s, 1e-1);
  const double p2 = empirical_error_proxy(a, s, 1e-2);
  CHECK(p2 < p1);
  CHECK(p2 < 0.05 * a.measure());
}

#include "weylvd/schrodinger.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace weylvd {

namespace {

using Complex = std::complex<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

// cos(sqrt xi) and sin(sqrt xi)/sqrt xi, entire in xi; series near zero.
Complex entire_cos(Complex xi) {
  if (std::abs(xi) < 1e-4) {
    return 1.0 + xi * (-1.0 / 2.0 + xi * (1.0 / 24.0 + xi * (-1.0 / 720.0)));
  }
  return std::cos(std::sqrt(xi));
}

Complex entire_sinc(Complex xi) {
  if (std::abs(xi) < 1e-4) {
    return 1.0 + xi * (-1.0 / 6.0 + xi * (1.0 / 120.0 + xi * (-1.0 / 5040.0)));
  }
  const Complex w = std::sqrt(xi);
  return std::sin(w) / w;
}

struct StepCoeffs {
  Complex c;  // cos(sqrt(q) dx)
  Complex s;  // sin(sqrt(q) dx)/(sqrt(q) dx)
};

StepCoeffs step_coeffs(Complex q, double dx) {
  const Complex xi = q * dx * dx;
  return {entire_cos(xi), entire_sinc(xi)};
}

// One exact constant-cell step of signed length dx:
//   f      -> c f + dx s f'
//   f'     -> -q dx s f + c f'
void apply_step(SolutionPair& st, Complex q, const StepCoeffs& cs, double dx) {
  const Complex f1 = cs.c * st.f + dx * cs.s * st.fprime;
  const Complex fp1 = -q * dx * cs.s * st.f + cs.c * st.fprime;
  st.f = f1;
  st.fprime = fp1;
}

void renormalize(SolutionPair& st) {
  const double m = std::max(std::abs(st.f), std::abs(st.fprime));
  if (m > 2.0 || m < 0.5) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw std::runtime_error("propagation state degenerated");
    }
    st.f /= m;
    st.fprime /= m;
    st.log_scale += std::log(m);
  }
}

// Fundamental system carried as two columns with one shared log-scale.
struct FundamentalState {
  Complex u{1.0, 0.0}, up{0.0, 0.0};
  Complex v{0.0, 0.0}, vp{1.0, 0.0};
  double log_scale = 0.0;
};

void apply_step(FundamentalState& st, Complex q, const StepCoeffs& cs, double dx) {
  const Complex u1 = cs.c * st.u + dx * cs.s * st.up;
  const Complex up1 = -q * dx * cs.s * st.u + cs.c * st.up;
  const Complex v1 = cs.c * st.v + dx * cs.s * st.vp;
  const Complex vp1 = -q * dx * cs.s * st.v + cs.c * st.vp;
  st.u = u1;
  st.up = up1;
  st.v = v1;
  st.vp = vp1;
}

void renormalize(FundamentalState& st) {
  const double m = std::max(std::max(std::abs(st.u), std::abs(st.up)),
                            std::max(std::abs(st.v), std::abs(st.vp)));
  if (m > 2.0 || m < 0.5) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw std::runtime_error("propagation state degenerated");
    }
    st.u /= m;
    st.up /= m;
    st.v /= m;
    st.vp /= m;
    st.log_scale += std::log(m);
  }
}

// Advance over a single constant-potential stretch of signed length dx,
// split into equal chunks so that no chunk grows by more than exp(40).
template <class State>
void advance_over(State& st, Complex q, double dx) {
  if (dx == 0.0) return;
  const double b = std::sqrt(q).imag();
  const double cap = (b > 1e-9) ? 40.0 / b : kInf;
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(dx) / cap)));
  const double step = dx / n;
  const StepCoeffs cs = step_coeffs(q, step);
  for (int i = 0; i < n; ++i) {
    apply_step(st, q, cs, step);
    renormalize(st);
  }
}

// Walk the constant-value runs of the sampled potential over [x0, x1]
// (ascending), calling fn(a, b, value).  Runs of equal consecutive cells can
// be merged; the region beyond x_max has value zero.
template <class Fn>
void for_each_run(const PotentialSpec& pot, double x0, double x1, bool merge, Fn&& fn) {
  const double h = pot.spacing();
  const double xmax = pot.x_max();
  const std::size_t ncells = pot.cell_count();
  const double eps = 1e-12 * std::max({1.0, std::abs(x1), xmax});
  double x = x0;
  while (x < x1 - eps) {
    if (x >= xmax - eps) {
      fn(x, x1, 0.0);
      return;
    }
    auto i = std::min<std::size_t>(static_cast<std::size_t>((x + eps) / h), ncells - 1);
    const double value = pot.cell_value(i);
    double seg_end = std::min(h * static_cast<double>(i + 1), xmax);
    if (merge) {
      std::size_t j = i + 1;
      while (j < ncells && pot.cell_value(j) == value) {
        seg_end = std::min(h * static_cast<double>(j + 1), xmax);
        ++j;
      }
      if (j >= ncells && value == 0.0) seg_end = kInf;  // zero tail continues
    }
    seg_end = std::min(seg_end, x1);
    if (seg_end <= x + eps) break;
    fn(x, seg_end, value);
    x = seg_end;
  }
}

struct Run {
  double a, b, value;
};

template <class State>
void propagate_state(const PotentialSpec& pot, Complex z, double x0, double x1, State& st) {
  for_each_run(pot, x0, x1, /*merge=*/true,
               [&](double a, double b, double v) { advance_over(st, z - v, b - a); });
}

template <class State>
void propagate_state_reverse(const PotentialSpec& pot, Complex z, double x_hi, double x_lo,
                             State& st) {
  std::vector<Run> runs;
  runs.reserve(64);
  for_each_run(pot, x_lo, x_hi, /*merge=*/true,
               [&](double a, double b, double v) { runs.push_back({a, b, v}); });
  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    advance_over(st, z - it->value, it->a - it->b);
  }
}

enum class NodeKind { initial, panel_mid, panel_end };

// Visit the orbit at Simpson nodes: the initial point once, then the midpoint
// and endpoint of every panel.  Panels never exceed one grid cell, also on
// the zero extension beyond x_max.
template <class State, class Visitor>
void propagate_state_sampled(const PotentialSpec& pot, Complex z, double x0, double x1,
                             State& st, int panels_per_cell, Visitor&& visit) {
  visit(x0, st, NodeKind::initial);
  for_each_run(pot, x0, x1, /*merge=*/false, [&](double a, double b, double v) {
    const Complex q = z - v;
    const double len = b - a;
    const int nsub =
        panels_per_cell *
        std::max(1, static_cast<int>(std::ceil(len / pot.spacing() - 1e-9)));
    for (int p = 0; p < nsub; ++p) {
      const double pa = a + len * p / nsub;
      const double pb = (p + 1 == nsub) ? b : a + len * (p + 1) / nsub;
      const double mid = 0.5 * (pa + pb);
      advance_over(st, q, mid - pa);
      visit(mid, st, NodeKind::panel_mid);
      advance_over(st, q, pb - mid);
      visit(pb, st, NodeKind::panel_end);
    }
  });
}

// Streaming sum of raw * exp(log_factor) * weight without overflow: terms are
// accumulated relative to the largest log factor seen so far.
struct LogShiftSum {
  double acc = 0.0;
  double ref = -kInf;

  void add(double raw, double log_factor, double weight) {
    if (raw == 0.0 || weight == 0.0) return;
    if (log_factor > ref) {
      acc *= std::exp(ref - log_factor);
      ref = log_factor;
    }
    acc += raw * weight * std::exp(log_factor - ref);
  }
  double value() const { return acc == 0.0 ? 0.0 : acc * std::exp(ref); }
};

// Composite-Simpson consumer over the sampled orbit.  Several integrands can
// share one propagation; each integrand sees the state and the midpoint of
// the current panel (so piecewise data is read from the correct cell).
template <class State, int N>
struct SimpsonConsumer {
  using RawFn = double (*)(const State&, double x_mid, const void* ctx);
  RawFn raw[N];
  const void* ctx = nullptr;
  LogShiftSum sums[N];

  State prev{};
  State mid{};
  double x_prev = 0.0, x_mid = 0.0;

  void operator()(double x, const State& st, NodeKind kind) {
    if (kind == NodeKind::initial) {
      prev = st;
      x_prev = x;
    } else if (kind == NodeKind::panel_mid) {
      mid = st;
      x_mid = x;
    } else {
      const double len = x - x_prev;
      for (int i = 0; i < N; ++i) {
        sums[i].add(raw[i](prev, x_mid, ctx), 2.0 * prev.log_scale, len / 6.0);
        sums[i].add(raw[i](mid, x_mid, ctx), 2.0 * mid.log_scale, 4.0 * len / 6.0);
        sums[i].add(raw[i](st, x_mid, ctx), 2.0 * st.log_scale, len / 6.0);
      }
      prev = st;
      x_prev = x;
    }
  }
};

const PotentialSpec& as_constant_cells(const PotentialSpec& pot,
                                       std::optional<PotentialSpec>& storage) {
  if (pot.interpolation() == Interpolation::piecewise_constant) return pot;
  storage = pot.as_piecewise_constant(4);
  return *storage;
}

void require_forward(double x_from, double x_to) {
  if (!(x_from >= 0.0) || !(x_to > x_from) || !std::isfinite(x_to)) {
    throw std::domain_error("propagate: requires 0 <= x_from < x_to finite");
  }
}

void require_halfplane(Complex z) {
  if (!(z.imag() >= 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::domain_error("propagate: requires finite z with Im z >= 0");
  }
}

double cell_value_at(const PotentialSpec& pot, double x) {
  if (x >= pot.x_max()) return 0.0;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(x / pot.spacing()),
                                       pot.cell_count() - 1);
  return pot.cell_value(i);
}

}  // namespace

SolutionPair propagate(const PotentialSpec& v, Complex z, double x_from, double x_to,
                       SolutionPair state) {
  require_forward(x_from, x_to);
  require_halfplane(z);
  std::optional<PotentialSpec> storage;
  const PotentialSpec& pot = as_constant_cells(v, storage);
  propagate_state(pot, z, x_from, x_to, state);
  return state;
}

SolutionPair propagate_reverse(const PotentialSpec& v, Complex z, double x_from,
                               double x_to, SolutionPair state) {
  require_forward(x_to, x_from);
  require_halfplane(z);
  std::optional<PotentialSpec> storage;
  const PotentialSpec& pot = as_constant_cells(v, storage);
  propagate_state_reverse(pot, z, x_from, x_to, state);
  return state;
}

TransferMatrix fundamental_system(const PotentialSpec& v, Complex z, double x) {
  return transfer_matrix(v, z, 0.0, x);
}

TransferMatrix transfer_matrix(const PotentialSpec& v, Complex z, double a, double b) {
  require_halfplane(z);
  FundamentalState st;
  if (b != a) {
    if (!(a >= 0.0) || !(b > a)) {
      throw std::domain_error("transfer_matrix: requires 0 <= a < b");
    }
    std::optional<PotentialSpec> storage;
    const PotentialSpec& pot = as_constant_cells(v, storage);
    propagate_state(pot, z, a, b, st);
  }
  TransferMatrix t;
  t.m << st.u, st.v, st.up, st.vp;
  t.log_scale = st.log_scale;
  return t;
}

std::complex<double> free_u0(Complex z, double x) { return entire_cos(z * x * x); }

std::complex<double> free_u0_prime(Complex z, double x) {
  return -z * x * entire_sinc(z * x * x);
}

std::complex<double> free_v0(Complex z, double x) { return x * entire_sinc(z * x * x); }

std::complex<double> free_v0_prime(Complex z, double x) { return entire_cos(z * x * x); }

HalfPlanePoint free_log_derivative(Complex z, double x) {
  if (!(z.imag() > 0.0) || !(x > 0.0)) {
    throw std::domain_error("free_log_derivative: requires Im z > 0 and x > 0");
  }
  const Complex w = sqrt_upper(z);
  const Complex iw = Complex(0.0, 1.0) * w;
  const Complex e = std::exp(iw * x);  // |e| = exp(-Im(w) x) < 1
  const Complex e2 = e * e;
  return HalfPlanePoint(iw * (1.0 + e2) / (1.0 - e2));
}

namespace {

struct DiffCtx {
  const PotentialSpec* v;
  const PotentialSpec* vt;
};

double raw_abs2(const SolutionPair& st, double, const void*) {
  return std::norm(st.f);
}

double raw_diff_weighted(const SolutionPair& st, double x_mid, const void* ctx) {
  const auto* c = static_cast<const DiffCtx*>(ctx);
  const double dv = cell_value_at(*c->v, x_mid) - cell_value_at(*c->vt, x_mid);
  return dv * dv * std::norm(st.f);
}

double raw_im_ubar_v(const FundamentalState& st, double, const void*) {
  return std::imag(std::conj(st.u) * st.v);
}

}  // namespace

WeightedIntegrals weighted_l2_integrals(const PotentialSpec& v, const PotentialSpec& vtilde,
                                        Complex z, double x) {
  if (!(z.imag() > 0.0)) {
    throw std::domain_error("weighted_l2_integrals: requires Im z > 0");
  }
  if (!(x > 0.0)) throw std::domain_error("weighted_l2_integrals: requires x > 0");
  std::optional<PotentialSpec> sv, svt;
  const PotentialSpec& pv = as_constant_cells(v, sv);
  const PotentialSpec& pvt = as_constant_cells(vtilde, svt);
  if (std::abs(pv.spacing() - pvt.spacing()) > 1e-12 * pv.spacing()) {
    throw std::invalid_argument("weighted_l2_integrals: potentials must share the grid spacing");
  }

  const DiffCtx ctx{&pv, &pvt};
  auto run = [&](int panels) {
    // vt-orbit carries the difference-weighted and |vt|^2 integrals
    SimpsonConsumer<SolutionPair, 2> ct;
    ct.raw[0] = &raw_diff_weighted;
    ct.raw[1] = &raw_abs2;
    ct.ctx = &ctx;
    SolutionPair vt = dirichlet_state();
    propagate_state_sampled(pvt, z, 0.0, x, vt, panels, ct);
    // v-orbit carries |v|^2
    SimpsonConsumer<SolutionPair, 1> cv;
    cv.raw[0] = &raw_abs2;
    SolutionPair vv = dirichlet_state();
    propagate_state_sampled(pv, z, 0.0, x, vv, panels, cv);
    return std::array<double, 3>{ct.sums[0].value(), ct.sums[1].value(), cv.sums[0].value()};
  };

  const auto coarse = run(1);
  const auto fine = run(2);
  WeightedIntegrals out;
  out.diff_weighted = fine[0];
  out.vtilde_sq = fine[1];
  out.v_sq = fine[2];
  for (int i = 0; i < 3; ++i) {
    out.quad_error = std::max(out.quad_error, std::abs(fine[i] - coarse[i]) / 15.0);
  }
  if (!std::isfinite(out.diff_weighted) || !std::isfinite(out.vtilde_sq) ||
      !std::isfinite(out.v_sq)) {
    throw std::runtime_error("weighted_l2_integrals: non-finite integrand");
  }
  return out;
}

double im_ubar_v_integral(const PotentialSpec& v, Complex z, double n) {
  if (!(n > 0.0)) throw std::domain_error("im_ubar_v_integral: requires n > 0");
  require_halfplane(z);
  std::optional<PotentialSpec> storage;
  const PotentialSpec& pot = as_constant_cells(v, storage);
  SimpsonConsumer<FundamentalState, 1> c;
  c.raw[0] = &raw_im_ubar_v;
  FundamentalState st;
  propagate_state_sampled(pot, z, 0.0, n, st, 2, c);
  const double value = c.sums[0].value();
  if (!std::isfinite(value)) {
    throw std::runtime_error("im_ubar_v_integral: non-finite integrand");
  }
  return value;
}

}  // namespace weylvd

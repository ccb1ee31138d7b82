#include "weylvd/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace weylvd {

namespace {

void format_full(char* buf, std::size_t n, double x) { std::snprintf(buf, n, "%.17g", x); }

// Exact integral of |s|^p over [0, len] for the linear segment s(t) = v0 + m t.
double linear_abs_power_integral(double v0, double v1, double len, int p) {
  if (len <= 0.0) return 0.0;
  const double m = (v1 - v0) / len;
  if (p == 2) {
    // antiderivative of s^2 is s^3/(3m) unless m == 0
    if (m == 0.0) return v0 * v0 * len;
    const double s1 = v1;
    return (s1 * s1 * s1 - v0 * v0 * v0) / (3.0 * m);
  }
  // p == 1: |s| integrates as trapezoid unless the sign changes inside
  if (v0 == 0.0 || v1 == 0.0 || (v0 > 0) == (v1 > 0)) {
    return 0.5 * (std::abs(v0) + std::abs(v1)) * len;
  }
  const double t_root = -v0 / m;  // in (0, len)
  return 0.5 * (std::abs(v0) * t_root + std::abs(v1) * (len - t_root));
}

}  // namespace

PotentialSpec::PotentialSpec(std::vector<double> samples, double h, Interpolation interp)
    : samples_(std::move(samples)), h_(h), interp_(interp) {
  if (!(h_ > 0.0) || !std::isfinite(h_)) {
    throw std::invalid_argument("PotentialSpec: spacing must be positive and finite");
  }
  if (samples_.size() < 2) {
    throw std::invalid_argument("PotentialSpec: needs at least two samples");
  }
  for (double s : samples_) {
    if (!std::isfinite(s)) throw std::invalid_argument("PotentialSpec: non-finite sample");
  }
  x_max_ = h_ * static_cast<double>(samples_.size() - 1);
}

PotentialSpec PotentialSpec::sample(const std::function<double(double)>& f,
                                    double x_max, double h, Interpolation interp) {
  if (!(x_max > 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("PotentialSpec::sample: x_max and h must be positive");
  }
  const auto n = static_cast<std::size_t>(std::ceil(x_max / h - 1e-9)) + 1;
  std::vector<double> samples(std::max<std::size_t>(n, 2));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = f(h * static_cast<double>(i));
  }
  return PotentialSpec(std::move(samples), h, interp);
}

PotentialSpec PotentialSpec::zero(double x_max, double h) {
  return sample([](double) { return 0.0; }, x_max, h, Interpolation::piecewise_constant);
}

double PotentialSpec::evaluate(double x) const {
  if (x >= x_max_) return 0.0;
  if (x < 0.0) throw std::domain_error("PotentialSpec::evaluate: x < 0");
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(x / h_), cell_count() - 1);
  if (interp_ == Interpolation::piecewise_constant) return samples_[i];
  const double t = (x - h_ * static_cast<double>(i)) / h_;
  return (1.0 - t) * samples_[i] + t * samples_[i + 1];
}

PotentialSpec PotentialSpec::resampled(double new_h) const {
  const auto n = static_cast<std::size_t>(std::llround(x_max_ / new_h)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::min(new_h * static_cast<double>(i), x_max_);
    out[i] = (x >= x_max_) ? samples_.back() : evaluate(x);
  }
  return PotentialSpec(std::move(out), new_h, interp_);
}

PotentialSpec PotentialSpec::as_piecewise_constant(int refine) const {
  if (refine < 1) throw std::invalid_argument("as_piecewise_constant: refine >= 1");
  if (interp_ == Interpolation::piecewise_constant && refine == 1) return *this;
  const double hf = h_ / refine;
  const std::size_t cells = cell_count() * static_cast<std::size_t>(refine);
  std::vector<double> out(cells + 1);
  for (std::size_t i = 0; i < cells; ++i) {
    const double mid = (static_cast<double>(i) + 0.5) * hf;
    out[i] = evaluate(std::min(mid, x_max_ * (1.0 - 1e-15)));
  }
  out[cells] = samples_.back();
  return PotentialSpec(std::move(out), hf, Interpolation::piecewise_constant);
}

PotentialSpec PotentialSpec::translated(double shift) const {
  const double cells_shift = shift / h_;
  const auto k = static_cast<long long>(std::llround(cells_shift));
  if (std::abs(cells_shift - static_cast<double>(k)) > 1e-9 || k < 0 ||
      static_cast<std::size_t>(k) >= cell_count()) {
    throw std::invalid_argument("translated: shift must be a whole number of cells inside the grid");
  }
  std::vector<double> out(samples_.begin() + k, samples_.end());
  return PotentialSpec(std::move(out), h_, interp_);
}

PotentialSpec PotentialSpec::plus_constant(double c) const {
  std::vector<double> out = samples_;
  for (double& s : out) s += c;
  return PotentialSpec(std::move(out), h_, interp_);
}

PotentialSpec PotentialSpec::scaled(double t) const {
  std::vector<double> out = samples_;
  for (double& s : out) s *= t;
  return PotentialSpec(std::move(out), h_, interp_);
}

double window_norm(const PotentialSpec& v, double a, double b, int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("window_norm: p must be 1 or 2");
  if (!(a >= 0.0) || !(b > a) || !(b <= v.x_max() * (1.0 + 1e-12))) {
    throw std::domain_error("window_norm: window must satisfy 0 <= a < b <= x_max");
  }
  b = std::min(b, v.x_max());
  const double h = v.spacing();
  const auto i0 = static_cast<std::size_t>(a / h);
  const auto i1 = std::min<std::size_t>(static_cast<std::size_t>(b / h * (1.0 + 1e-15)),
                                        v.cell_count() - 1);
  double total = 0.0;
  for (std::size_t i = i0; i <= i1; ++i) {
    const double lo = std::max(a, h * static_cast<double>(i));
    const double hi = std::min(b, h * static_cast<double>(i + 1));
    if (hi <= lo) continue;
    if (v.interpolation() == Interpolation::piecewise_constant) {
      const double c = v.cell_value(i);
      total += (p == 2 ? c * c : std::abs(c)) * (hi - lo);
    } else {
      const double x0 = h * static_cast<double>(i);
      const double va = v.samples()[i] + (v.samples()[i + 1] - v.samples()[i]) * (lo - x0) / h;
      const double vb = v.samples()[i] + (v.samples()[i + 1] - v.samples()[i]) * (hi - x0) / h;
      total += linear_abs_power_integral(va, vb, hi - lo, p);
    }
  }
  return total;
}

SparseWindowSequence::SparseWindowSequence(std::vector<Window> windows)
    : windows_(std::move(windows)) {
  for (std::size_t k = 0; k < windows_.size(); ++k) {
    if (!(windows_[k].a >= 0.0) || !(windows_[k].b > windows_[k].a)) {
      throw std::invalid_argument("SparseWindowSequence: window must satisfy 0 <= a < b");
    }
    if (k > 0 && windows_[k].a < windows_[k - 1].b) {
      throw std::invalid_argument("SparseWindowSequence: windows must be ordered and disjoint");
    }
    if (k > 0 && windows_[k].length() <= windows_[k - 1].length()) {
      throw std::invalid_argument("SparseWindowSequence: lengths must be strictly increasing");
    }
  }
}

std::vector<double> SparseWindowSequence::masses(const PotentialSpec& v) const {
  std::vector<double> m;
  m.reserve(windows_.size());
  for (const Window& w : windows_) m.push_back(window_norm(v, w.a, std::min(w.b, v.x_max()), 2));
  return m;
}

bool SparseWindowSequence::masses_non_increasing(const PotentialSpec& v, double slack) const {
  const std::vector<double> m = masses(v);
  for (std::size_t k = 1; k < m.size(); ++k) {
    if (m[k] > m[k - 1] + slack) return false;
  }
  return true;
}

std::pair<PotentialSpec, SparseWindowSequence> make_sparse_bump_train(
    double bump_height, double bump_width, double gap_growth, int count) {
  if (!(bump_width > 0.0) || !(gap_growth > 1.0) || count < 1) {
    throw std::invalid_argument(
        "make_sparse_bump_train: requires bump_width > 0, gap_growth > 1, count >= 1");
  }
  const double h = bump_width / 4.0;
  const auto width_cells = static_cast<std::size_t>(4);
  const double base_gap = 8.0 * bump_width;

  std::vector<double> samples;
  std::vector<Window> windows;
  std::size_t cell = 0;
  auto push_cells = [&](std::size_t n, double value) {
    samples.insert(samples.end(), n, value);
    cell += n;
  };
  for (int k = 0; k < count; ++k) {
    push_cells(width_cells, bump_height);
    const double gap_len = base_gap * std::pow(gap_growth, k);
    const auto gap_cells =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(gap_len / h)));
    const double a = h * static_cast<double>(cell);
    push_cells(gap_cells, 0.0);
    const double b = h * static_cast<double>(cell);
    windows.push_back({a, b});
  }
  samples.push_back(0.0);  // closing node
  return {PotentialSpec(std::move(samples), h, Interpolation::piecewise_constant),
          SparseWindowSequence(std::move(windows))};
}

PotentialSpec make_l2_sparse(const PotentialSpec& base, const PotentialSpec& perturbation) {
  if (std::abs(base.x_max() - perturbation.x_max()) > 1e-9 * base.x_max()) {
    throw std::invalid_argument("make_l2_sparse: incompatible x_max values");
  }
  const double h = std::min(base.spacing(), perturbation.spacing());
  const PotentialSpec b = (base.spacing() == h) ? base : base.resampled(h);
  const PotentialSpec q = (perturbation.spacing() == h) ? perturbation : perturbation.resampled(h);
  const std::size_t n = std::min(b.samples().size(), q.samples().size());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = b.samples()[i] + q.samples()[i];
  return PotentialSpec(std::move(out), h, base.interpolation());
}

PotentialSpec make_slow_oscillation(double x_max, double h) {
  return PotentialSpec::sample([](double x) { return std::cos(std::sqrt(x)); }, x_max, h,
                               Interpolation::piecewise_linear);
}

PotentialSpec read_potential_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open potential file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty potential file: " + path);
  // tolerate trailing carriage returns from foreign line endings
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,v") throw std::runtime_error("potential file must start with header 'x,v'");
  std::vector<double> xs, vs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string xa, va;
    if (!std::getline(row, xa, ',') || !std::getline(row, va)) {
      throw std::runtime_error("bad row " + std::to_string(lineno) + " in " + path);
    }
    try {
      xs.push_back(std::stod(xa));
      vs.push_back(std::stod(va));
    } catch (const std::exception&) {
      throw std::runtime_error("bad number on row " + std::to_string(lineno) + " in " + path);
    }
  }
  if (xs.size() < 2) throw std::runtime_error("potential file needs at least two rows");
  if (std::abs(xs.front()) > 1e-9) throw std::runtime_error("potential grid must start at x = 0");
  const double h = xs[1] - xs[0];
  if (!(h > 0.0)) throw std::runtime_error("potential grid must be strictly increasing");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double step = xs[i] - xs[i - 1];
    if (std::abs(step - h) > 1e-9 * std::abs(h)) {
      throw std::runtime_error("potential grid must be uniform (row " + std::to_string(i + 2) + ")");
    }
  }
  return PotentialSpec(std::move(vs), h, Interpolation::piecewise_constant);
}

void write_potential_csv(const PotentialSpec& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "x,v\n";
  char xb[40], vb[40];
  for (std::size_t i = 0; i < v.samples().size(); ++i) {
    format_full(xb, sizeof xb, v.spacing() * static_cast<double>(i));
    format_full(vb, sizeof vb, v.samples()[i]);
    out << xb << ',' << vb << '\n';
  }
}

}  // namespace weylvd

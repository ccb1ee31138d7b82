#include "weylvd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "weylvd/parallel.hpp"
#include "weylvd/value_distribution.hpp"
#include "weylvd/weyl.hpp"

namespace weylvd {

namespace {

constexpr double kPi = 3.14159265358979323846;

void append_full(std::string& line, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  line += buf;
}

// Oscillation-aware seeding: the slowest structure at distance `span` turns
// the phase about 2 sqrt(lambda) span across A; convert that to panels.
int panels_hint(const IntervalUnion& a, double span) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Interval& p : a.pieces()) {
    lo = std::min(lo, p.lo);
    hi = std::max(hi, p.hi);
  }
  const double slo = std::sqrt(std::max(lo, 0.01));
  const double shi = std::sqrt(std::max(hi, 0.01));
  const double periods = span * (shi - slo) / kPi;
  return std::max(64, static_cast<int>(std::ceil(6.0 * periods)));
}

long samples_hint(const IntervalUnion& a, double span) {
  return std::max<long>(4096, 16L * panels_hint(a, span));
}

struct WindowRange {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
};

WindowRange select_windows(const ExperimentConfig& cfg) {
  const auto count = cfg.windows.size();
  if (count == 0) throw InvalidWindowSequence("no windows in the sequence");
  if (cfg.k_min < 1 || (cfg.k_max != 0 && cfg.k_max < cfg.k_min)) {
    throw ConfigError("invalid k range");
  }
  WindowRange r;
  r.first = static_cast<std::size_t>(cfg.k_min - 1);
  r.last = (cfg.k_max == 0) ? count - 1 : static_cast<std::size_t>(cfg.k_max - 1);
  if (r.first >= count || r.last >= count) {
    throw ConfigError("k range outside the sequence");
  }
  return r;
}

void validate_common(const ExperimentConfig& cfg) {
  if (!(cfg.a_set.measure() < std::numeric_limits<double>::infinity()) ||
      cfg.a_set.is_empty()) {
    throw ConfigError("A must be nonempty with finite measure");
  }
  if (cfg.d_ladder.empty()) throw ConfigError("d ladder must be nonempty");
  for (std::size_t i = 0; i < cfg.d_ladder.size(); ++i) {
    if (!(cfg.d_ladder[i] > 0.0)) throw ConfigError("d ladder must be positive");
    if (i > 0 && !(cfg.d_ladder[i] < cfg.d_ladder[i - 1])) {
      throw ConfigError("d ladder must be strictly decreasing");
    }
  }
  if (!cfg.windows.masses_non_increasing(cfg.potential)) {
    throw InvalidWindowSequence("window masses are not non-increasing");
  }
}

// Angle integral of the truncated m-function, walked down the d-ladder; the
// smallest rung is reported.
double left_limit_value(const ExperimentConfig& cfg, double start,
                        const IntervalUnion& a, const IntervalUnion& s) {
  const double tail = std::max(cfg.potential.x_max(), start + 1.0);
  const auto f = [&](std::complex<double> z) {
    MFunctionRequest req;
    req.z = z;
    req.start = start;
    req.tail_x = tail;
    return m_function(cfg.potential, req).m;
  };
  QuadraturePolicy policy;
  policy.initial_panels = panels_hint(a, cfg.potential.x_max() - start);
  double value = 0.0;
  for (double d : cfg.d_ladder) {
    value = herglotz_value_distribution(f, a, s, d, policy).value;
  }
  return value;
}

double right_limit_value(const ExperimentConfig& cfg, double x_eval,
                         const IntervalUnion& a, const IntervalUnion& s) {
  const auto g = [&](double lambda) {
    return real_log_derivative_ratio(cfg.potential, lambda, x_eval);
  };
  SamplingPolicy policy;
  policy.initial_samples = samples_hint(a, x_eval);
  policy.stabilization_tol = 1e-4;
  return real_function_value_distribution(g, a, s, policy).value;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& token, const std::string& context) {
  const std::string t = trim(token);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double x = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + token + "' in " + context);
  }
}

IntervalUnion parse_interval_union(const std::string& text, const std::string& context) {
  std::vector<Interval> pieces;
  std::string s = text;
  std::replace(s.begin(), s.end(), ';', ' ');
  std::istringstream in(s);
  std::string token;
  while (in >> token) {
    if (token.size() < 2 || (token.front() != '[' && token.front() != '(') ||
        (token.back() != ']' && token.back() != ')')) {
      throw ConfigError("bad interval '" + token + "' in " + context);
    }
    const std::string inner = token.substr(1, token.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("bad interval '" + token + "' in " + context);
    }
    const double lo = parse_number(inner.substr(0, comma), context);
    const double hi = parse_number(inner.substr(comma + 1), context);
    if (!(lo < hi)) throw ConfigError("empty interval '" + token + "' in " + context);
    pieces.push_back({lo, hi});
  }
  if (pieces.empty()) throw ConfigError("no intervals in " + context);
  return IntervalUnion::from_intervals(std::move(pieces));
}

std::vector<double> parse_ladder(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> ladder;
  std::string token;
  while (in >> token) ladder.push_back(parse_number(token, "d_ladder"));
  return ladder;
}

}  // namespace

std::vector<ConvergenceRow> run_theorem2(const ExperimentConfig& cfg) {
  validate_common(cfg);
  const WindowRange range = select_windows(cfg);
  const double target_left = free_asymptotic_distribution(cfg.a_set, cfg.s_set);
  const double target_right =
      free_asymptotic_distribution(cfg.a_set, cfg.s_set.negate());

  const std::size_t rows_n = range.last - range.first + 1;
  std::vector<ConvergenceRow> rows(rows_n);
  parallel_for(rows_n, [&](std::size_t idx) {
    const std::size_t w = range.first + idx;
    const Window& win = cfg.windows[w];
    ConvergenceRow& row = rows[idx];
    row.k = static_cast<int>(w) + 1;
    row.l_k = win.length();
    row.window_mass =
        window_norm(cfg.potential, win.a, std::min(win.b, cfg.potential.x_max()), 2);
    row.target_left = target_left;
    row.target_right = target_right;
    try {
      row.md_left = left_limit_value(cfg, win.a, cfg.a_set, cfg.s_set);
      row.md_right = right_limit_value(cfg, win.b, cfg.a_set, cfg.s_set);
      row.discrepancy_left = std::abs(row.md_left - target_left);
      row.discrepancy_right = std::abs(row.md_right - target_right);
    } catch (const std::exception&) {
      row.ok = false;
      row.md_left = row.md_right = std::numeric_limits<double>::quiet_NaN();
      row.discrepancy_left = row.discrepancy_right = row.md_left;
    }
  });
  return rows;
}

Corollary2Report run_corollary2(const ExperimentConfig& cfg) {
  ExperimentConfig local = cfg;
  local.a_set = cfg.corollary_a;
  validate_common(local);
  for (const Interval& p : local.a_set.pieces()) {
    if (p.hi > 0.0) throw ConfigError("corollary A must lie in the negative axis");
  }
  const IntervalUnion s = IntervalUnion::half_line_below(0.0);

  Corollary2Report report;
  report.target_s = free_asymptotic_distribution(local.a_set, s);
  report.target_minus_s = free_asymptotic_distribution(local.a_set, s.negate());

  const WindowRange range = select_windows(local);
  const std::size_t rows_n = range.last - range.first + 1;
  report.rows.resize(rows_n);
  const double mass_slack = 1e-9;
  parallel_for(rows_n, [&](std::size_t idx) {
    const std::size_t w = range.first + idx;
    const Window& win = local.windows[w];
    Corollary2Row& row = report.rows[idx];
    row.k = static_cast<int>(w) + 1;
    row.n_k = win.midpoint();
    const double cap = local.potential.x_max();
    const double full_mass = window_norm(local.potential, win.a, std::min(win.b, cap), 2);
    const double left_half =
        window_norm(local.potential, win.a, std::min(row.n_k, cap), 2);
    const double right_half =
        window_norm(local.potential, std::min(row.n_k, cap), std::min(win.b, cap), 2);
    row.halves_admissible =
        left_half <= full_mass + mass_slack && right_half <= full_mass + mass_slack;
    row.specest1 = left_limit_value(local, row.n_k, local.a_set, s);
    row.specest2 = right_limit_value(local, row.n_k, local.a_set, s);
    row.gap = row.specest1 - row.specest2;
  });
  return report;
}

SparseWindowSequence sliding_window_scan(const PotentialSpec& v, double window_length,
                                         double delta) {
  if (!(window_length > 0.0) || window_length > v.x_max()) {
    throw std::domain_error("sliding_window_scan: needs 0 < window_length <= x_max");
  }
  if (!(delta > 0.0)) throw std::domain_error("sliding_window_scan: needs delta > 0");
  const double h = v.spacing();
  const auto cells = v.cell_count();
  std::vector<double> prefix(cells + 1, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    prefix[i + 1] = prefix[i] + window_norm(v, h * static_cast<double>(i),
                                            h * static_cast<double>(i + 1), 2);
  }

  std::vector<Window> maximal;
  std::size_t j = 0;
  std::size_t prev_j = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    if (j < i) j = i;
    while (j < cells && prefix[j + 1] - prefix[i] < delta) ++j;
    const bool is_maximal = (i == 0) || (j > prev_j);
    if (is_maximal && j > i) {
      const double a = h * static_cast<double>(i);
      const double b = h * static_cast<double>(j);
      if (b - a >= window_length - 1e-12) maximal.push_back({a, b});
    }
    prev_j = j;
  }

  // thin to strictly increasing lengths so the sequence invariant holds
  std::vector<Window> kept;
  for (const Window& w : maximal) {
    if ((kept.empty() || w.length() > kept.back().length()) &&
        (kept.empty() || w.a >= kept.back().b)) {
      kept.push_back(w);
    }
  }
  return SparseWindowSequence(std::move(kept));
}

void write_theorem2_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  out << "k,l_k,window_mass,md_left,md_right,target_left,target_right,"
         "discrepancy_left,discrepancy_right\n";
  for (const ConvergenceRow& r : rows) {
    std::string line = std::to_string(r.k);
    for (double x : {r.l_k, r.window_mass, r.md_left, r.md_right, r.target_left,
                     r.target_right, r.discrepancy_left, r.discrepancy_right}) {
      line += ',';
      append_full(line, x);
    }
    out << line << '\n';
  }
}

void write_corollary2_csv(const Corollary2Report& report, std::ostream& out) {
  out << "k,n_k,specest1,specest2,gap\n";
  for (const Corollary2Row& r : report.rows) {
    std::string line = std::to_string(r.k);
    for (double x : {r.n_k, r.specest1, r.specest2, r.gap}) {
      line += ',';
      append_full(line, x);
    }
    out << line << '\n';
  }
}

void write_discrepancy_svg(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  if (rows.empty()) {
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='1' height='1'/>\n";
    return;
  }
  const int width = 640, height = 420, margin = 56;
  double max_d = 1e-12;
  for (const ConvergenceRow& r : rows) {
    if (r.ok) max_d = std::max({max_d, r.discrepancy_left, r.discrepancy_right});
  }
  const double kmin = rows.front().k;
  const double kmax = std::max<double>(rows.back().k, kmin + 1.0);
  auto px = [&](double k) {
    return margin + (k - kmin) / (kmax - kmin) * (width - 2 * margin);
  };
  auto py = [&](double d) {
    return height - margin - d / max_d * (height - 2 * margin);
  };
  auto polyline = [&](bool left, const char* color) {
    std::string pts;
    for (const ConvergenceRow& r : rows) {
      if (!r.ok) continue;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(r.k),
                    py(left ? r.discrepancy_left : r.discrepancy_right));
      pts += buf;
    }
    out << "  <polyline fill='none' stroke='" << color << "' stroke-width='2' points='"
        << pts << "'/>\n";
  };
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
      << height << "'>\n";
  out << "  <rect width='100%' height='100%' fill='white'/>\n";
  out << "  <line x1='" << margin << "' y1='" << height - margin << "' x2='"
      << width - margin << "' y2='" << height - margin << "' stroke='black'/>\n";
  out << "  <line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
      << height - margin << "' stroke='black'/>\n";
  polyline(true, "#d62728");
  polyline(false, "#1f77b4");
  out << "  <text x='" << width / 2 << "' y='" << height - 12
      << "' text-anchor='middle' font-size='13'>window index k</text>\n";
  out << "  <text x='16' y='" << height / 2
      << "' font-size='13' transform='rotate(-90 16 " << height / 2
      << ")'>discrepancy</text>\n";
  out << "  <text x='" << width - margin << "' y='" << margin - 8
      << "' text-anchor='end' font-size='12' fill='#d62728'>left limit</text>\n";
  out << "  <text x='" << width - margin << "' y='" << margin + 8
      << "' text-anchor='end' font-size='12' fill='#1f77b4'>right limit</text>\n";
  out << "</svg>\n";
}

ExperimentConfig parse_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);

  std::map<std::string, std::map<std::string, std::string>> sections;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("bad section header on line " + std::to_string(lineno));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value on line " + std::to_string(lineno));
    }
    sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  auto get = [&](const std::string& sec, const std::string& key,
                 const std::string& fallback) {
    const auto s = sections.find(sec);
    if (s == sections.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
  };

  const std::string source = get("potential", "source", "bump_train");
  PotentialSpec potential = PotentialSpec::zero(1.0, 0.5);
  SparseWindowSequence windows;
  if (source == "bump_train") {
    const double height = parse_number(get("potential", "height", "2"), "potential.height");
    const double width = parse_number(get("potential", "width", "1"), "potential.width");
    const double growth = parse_number(get("potential", "growth", "2"), "potential.growth");
    const double count = parse_number(get("potential", "count", "6"), "potential.count");
    try {
      auto built = make_sparse_bump_train(height, width, growth, static_cast<int>(count));
      potential = std::move(built.first);
      windows = std::move(built.second);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("bump_train generator: ") + e.what());
    }
  } else if (source == "file") {
    const std::string file = get("potential", "path", "");
    if (file.empty()) throw ConfigError("potential.path required for source = file");
    try {
      potential = read_potential_csv(file);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("potential file: ") + e.what());
    }
    const double wl =
        parse_number(get("potential", "scan_window_length", "10"), "scan_window_length");
    const double delta = parse_number(get("potential", "scan_delta", "0.01"), "scan_delta");
    windows = sliding_window_scan(potential, wl, delta);
    if (windows.size() == 0) throw InvalidWindowSequence("scan found no windows");
  } else {
    throw ConfigError("unknown potential.source: " + source);
  }

  ExperimentConfig cfg{std::move(potential), std::move(windows)};
  cfg.a_set = parse_interval_union(get("sets", "a", "[1,2]"), "sets.a");
  cfg.s_set = parse_interval_union(get("sets", "s", "(0,inf)"), "sets.s");
  cfg.d_ladder = parse_ladder(get("run", "d_ladder", "0.1,0.01,0.001"));
  cfg.k_min = static_cast<int>(parse_number(get("run", "k_min", "1"), "run.k_min"));
  cfg.k_max = static_cast<int>(parse_number(get("run", "k_max", "0"), "run.k_max"));
  cfg.seed = static_cast<std::uint64_t>(parse_number(get("run", "seed", "42"), "run.seed"));
  cfg.corollary_a = parse_interval_union(get("corollary2", "a", "[-2,-1]"), "corollary2.a");
  return cfg;
}

}  // namespace weylvd

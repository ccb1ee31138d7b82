#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "weylvd/halfplane.hpp"
#include "weylvd/potential.hpp"

namespace weylvd {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidWindowSequence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  PotentialSpec potential;
  SparseWindowSequence windows;
  IntervalUnion a_set = IntervalUnion::of({{1.0, 2.0}});
  IntervalUnion s_set = IntervalUnion::half_line_above(0.0);
  std::vector<double> d_ladder{1e-1, 1e-2, 1e-3};
  int k_min = 1;  // 1-based, inclusive
  int k_max = 0;  // 0 selects every window
  std::uint64_t seed = 42;
  IntervalUnion corollary_a = IntervalUnion::of({{-2.0, -1.0}});
};

/// One window of the asymptotic sweep.  md_left integrates the angle of the
/// truncated m-function at the window's left endpoint; md_right measures the
/// set where v'(b_k, .)/v(b_k, .) lands in S; the targets are the free
/// distributions against S and -S respectively.
struct ConvergenceRow {
  int k = 0;
  double l_k = 0.0;
  double window_mass = 0.0;
  double md_left = 0.0;
  double md_right = 0.0;
  double target_left = 0.0;
  double target_right = 0.0;
  double discrepancy_left = 0.0;
  double discrepancy_right = 0.0;
  bool ok = true;  // false when a row failed and carries NaNs
};

/// Row order follows k; failures are recorded per row without aborting the
/// sweep.  Requires finite |A|, a strictly decreasing positive d-ladder, and
/// window masses non-increasing along the sequence.
std::vector<ConvergenceRow> run_theorem2(const ExperimentConfig& config);

struct Corollary2Row {
  int k = 0;
  double n_k = 0.0;
  double specest1 = 0.0;
  double specest2 = 0.0;
  double gap = 0.0;
  bool halves_admissible = true;
};

struct Corollary2Report {
  /// Closed-form targets of the two limits for S = (-inf, 0): |A| and 0.
  double target_s = 0.0;
  double target_minus_s = 0.0;
  std::vector<Corollary2Row> rows;
};

/// Negative-spectrum witness: runs the two limits at the window midpoints
/// N_k against S = (-inf, 0) over a set A inside the negative axis; their gap
/// staying near |A| is the numerical obstruction to absolutely continuous
/// spectrum below zero.
Corollary2Report run_corollary2(const ExperimentConfig& config);

/// All maximal windows of length >= window_length with mass int V^2 < delta,
/// greedily thinned to strictly increasing lengths so the result is a valid
/// window sequence.  An empty result is a valid answer.
SparseWindowSequence sliding_window_scan(const PotentialSpec& v, double window_length,
                                         double delta);

void write_theorem2_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);
void write_corollary2_csv(const Corollary2Report& report, std::ostream& out);
/// Static plot of both discrepancy columns against k.
void write_discrepancy_svg(const std::vector<ConvergenceRow>& rows, std::ostream& out);

/// Flat `key = value` sections: [potential] (bump_train generator or csv file
/// with an optional scan), [sets], [run], [corollary2].
ExperimentConfig parse_experiment_config(const std::string& path);

}  // namespace weylvd

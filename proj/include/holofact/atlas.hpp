#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "holofact/ivp.hpp"

// Generation-by-generation analytic continuation of a local solution across
// maximal disks. Boundary directions are probed by re-expansion walks along
// rays; directions where the local disks collapse onto a point with |L|
// blowing up and g(L) -> f(.) corroborating are recorded as singular.

namespace holofact::atlas {

using cplx = std::complex<double>;
using ivp::DiskChart;
using ivp::IvpSpec;
using series::PowerSeries;

struct Budget {
  int max_generation = 3;
  int max_charts = 256;
  int angles_per_chart = 64;
};

struct AtlasOptions {
  int order = 64;        // chart truncation order
  int walk_order = 48;   // re-expansion walk order
  double blowup_threshold = 1e8;
  double corroboration_tol = 1e-4;
  int threads = 0;  // 0: HOLOFACT_THREADS or hardware
};

struct SingularPoint {
  cplx location{};
  int chart_id = -1;
  int generation = 0;
  double blowup_mag = 0;
  cplx singular_value{};  // f at the located point
  double corroboration_residual = 0;
  std::vector<double> corroboration_tail;  // |g(L) - f(loc)| along the approach
  double angle = 0;
  bool refined = false;  // located by angular refinement between grid rays
};

enum class Verdict { Regular, Singular, Inconclusive };

struct Classification {
  Verdict verdict = Verdict::Inconclusive;
  cplx boundary_point{};
  cplx regular_value{};  // limit of L at the boundary point (Regular)
  cplx richardson_value{};
  SingularPoint singular;
  double min_local_radius = std::numeric_limits<double>::infinity();
  bool walk_arrived = false;
  bool walk_pinched = false;
  std::vector<std::pair<double, cplx>> grid_samples;  // (t, L) on the fixed grid
  std::vector<std::pair<cplx, cplx>> tail_samples;    // geometric (z, L)
  struct LocalChart {
    PowerSeries series;  // in the scaled variable, centered at 0
    cplx center;         // physical z = center + scale * zeta
    double scale = 1.0;
    double radius = 0;  // physical
    cplx eval(cplx z) const { return series::eval(series, (z - center) / scale).value; }
  };
  LocalChart last_chart;  // walk chart closest to the boundary
};

// Walk along the ray at angle theta; requires a finite empirical radius.
Classification classify_boundary(const DiskChart& chart, double theta,
                                 const AtlasOptions& opt = {});

struct Edge {
  int parent = 0;
  int child = 0;
  double entry_angle = 0;
  double overlap_residual = 0;
};

struct Atlas {
  IvpSpec root_spec;
  AtlasOptions options;
  Budget budget;
  std::vector<DiskChart> charts;
  std::vector<Edge> edges;
  std::vector<SingularPoint> singular;
  int generations_used = 0;
  bool budget_exhausted = false;
};

// Spawn the child chart seeded exactly on the parent boundary at angle theta.
// Throws NotRegularDirection / OverlapMismatch.
DiskChart continue_through(Atlas& atlas, int chart_id, double theta);

Atlas build_atlas(const IvpSpec& spec, const Budget& budget = {},
                  const AtlasOptions& opt = {});

struct PointCheck {
  int index = 0;
  bool tail_decreasing = false;
  double final_residual = 0;
  bool matches_g_value = false;
  double g_value_distance = std::numeric_limits<double>::infinity();
};

struct StructureReport {
  bool pass = false;
  bool g_values_complete = false;  // when false the value matching is skipped
  std::vector<cplx> g_asymptotic_values;
  std::vector<PointCheck> points;
  bool zero_singular_violation = false;  // finite root radius but empty singular set
  int closure_violations = 0;
  std::string notes;
};

// Checks the recorded singular points against the boundary-structure
// predictions: residual tails decrease, singular values land in the
// asymptotic set of g, and grid classifications stay consistent.
StructureReport verify_singular_structure(const Atlas& atlas);

double overlap_check(const Classification& cls, const DiskChart& child, int n_points = 20);

}  // namespace holofact::atlas

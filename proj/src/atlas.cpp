#include "holofact/atlas.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "holofact/catalog.hpp"

namespace holofact::atlas {

namespace {

using std::numbers::pi;

constexpr double kGrid[] = {0.80, 0.85, 0.90, 0.95, 0.99};
constexpr double kCauchyShrink = 0.8;
constexpr double kArriveFrac = 1e-6;
constexpr double kPinchFrac = 1e-9;
constexpr int kMaxWalkSteps = 600;
constexpr double kDipFrac = 0.15;  // refinement-candidate threshold
constexpr double kOverlapReject = 1e-6;
constexpr double kDedupValueTol = 1e-6;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HOLOFACT_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

cplx g_offset_of(const IvpSpec& spec) {
  return ivp::eval_f(spec, spec.center) - ivp::eval_g_raw(spec, spec.seed);
}

using WalkChart = Classification::LocalChart;

// classification walk along center + s*u, s in [0, r0]
Classification walk_ray(const DiskChart& chart, double theta, const AtlasOptions& opt,
                        bool abort_on_recovery) {
  Classification cls;
  double r0 = series::radius_or_inf(chart.empirical);
  if (!std::isfinite(r0))
    throw Error(Errc::UnsupportedVariant, "chart has no finite empirical radius");
  cplx u = std::polar(1.0, theta);
  cplx ab = chart.spec.center + r0 * u;
  cls.boundary_point = ab;

  WalkChart st;
  st.series = chart.L;
  st.series.center = cplx{};
  st.center = chart.spec.center;
  st.scale = 1.0;
  st.radius = r0;
  double s = 0;  // arc length covered
  std::size_t next_grid = 0;
  double max_abs = std::abs(chart.spec.seed);
  cls.tail_samples.push_back({chart.spec.center, chart.spec.seed});

  for (int step = 0; step < kMaxWalkSteps; ++step) {
    // emit pending fixed-grid samples that sit safely inside the current disk
    while (next_grid < std::size(kGrid)) {
      double starget = kGrid[next_grid] * r0;
      cplx zt = chart.spec.center + starget * u;
      if (std::abs(zt - st.center) <= 0.5 * st.radius) {
        cls.grid_samples.push_back({kGrid[next_grid], st.eval(zt)});
        ++next_grid;
      } else {
        break;
      }
    }

    double gap = r0 - s;
    if (gap <= kArriveFrac * r0) {
      cls.walk_arrived = true;
      cls.regular_value = st.eval(ab);
      cls.tail_samples.push_back({ab, cls.regular_value});
      break;
    }

    double adv = std::min(0.3 * st.radius, 0.45 * gap);
    if (!(adv > 0) || !std::isfinite(adv)) break;
    double snext = s + adv;
    cplx znext = chart.spec.center + snext * u;
    cplx seed = st.eval(znext);
    if (!std::isfinite(std::abs(seed))) break;

    double rho = std::max(0.5 * st.radius, 1e-280);
    DiskChart next;
    try {
      next = ivp::solve_local(ivp::rescaled(chart.spec, znext, seed, rho),
                              opt.walk_order, false);
    } catch (const Error&) {
      break;  // stalled
    }
    double rl = series::radius_or_inf(next.empirical) * rho;
    if (!std::isfinite(rl)) rl = gap + r0;  // locally entire-looking: no obstruction

    st = WalkChart{next.L, znext, rho, rl};
    st.series.center = cplx{};
    s = snext;
    max_abs = std::max(max_abs, std::abs(seed));
    cls.tail_samples.push_back({znext, seed});
    if (cls.tail_samples.size() > 12) cls.tail_samples.erase(cls.tail_samples.begin());
    cls.min_local_radius = std::min(cls.min_local_radius, rl);

    if (rl < std::max(kPinchFrac * r0, 1e-13 * (1.0 + std::abs(znext)))) {
      cls.walk_pinched = true;
      cls.singular.location = znext + rl * u;
      break;
    }
    if (std::abs(seed) > opt.blowup_threshold) {
      cls.walk_pinched = true;  // hard blow-up fast path
      cls.singular.location = znext + rl * u;
      break;
    }
    if (abort_on_recovery && cls.min_local_radius < 0.3 * r0 &&
        rl > 2.0 * cls.min_local_radius)
      break;  // past the closest approach; the dip value is what we came for
  }

  cls.last_chart = st;
  cls.singular.blowup_mag = max_abs;
  cls.singular.angle = theta;
  cls.singular.chart_id = chart.id;
  cls.singular.generation = chart.generation;
  return cls;
}

bool tail_is_cauchy(const std::vector<std::pair<cplx, cplx>>& tail) {
  if (tail.size() < 5) return false;
  std::vector<double> diffs;
  for (std::size_t i = tail.size() - 5; i + 1 < tail.size(); ++i)
    diffs.push_back(std::abs(tail[i + 1].second - tail[i].second));
  double scale = std::abs(tail.back().second) + 1.0;
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i)
    if (diffs[i + 1] > kCauchyShrink * diffs[i] + 1e-14 * scale) return false;
  return true;
}

bool tail_monotone_growth(const std::vector<std::pair<cplx, cplx>>& tail) {
  if (tail.size() < 4) return false;
  for (std::size_t i = tail.size() - 4; i + 1 < tail.size(); ++i)
    if (std::abs(tail[i + 1].second) < std::abs(tail[i].second)) return false;
  return true;
}

// Neville extrapolation to gap 0 of the collinear geometric samples
cplx neville_to_boundary(const std::vector<std::pair<cplx, cplx>>& tail, cplx center,
                         double r0, cplx u) {
  int m = static_cast<int>(std::min<std::size_t>(5, tail.size()));
  std::vector<double> g(m);
  std::vector<cplx> v(m);
  for (int i = 0; i < m; ++i) {
    const auto& [z, L] = tail[tail.size() - m + i];
    g[i] = r0 - std::real((z - center) / u);
    v[i] = L;
  }
  for (int level = 1; level < m; ++level)
    for (int i = 0; i < m - level; ++i)
      v[i] = (g[i + level] * v[i] - g[i] * v[i + 1]) / (g[i + level] - g[i]);
  return v[0];
}

}  // namespace

Classification classify_boundary(const DiskChart& chart, double theta,
                                 const AtlasOptions& opt) {
  Classification cls = walk_ray(chart, theta, opt, false);
  cplx offset = g_offset_of(chart.spec);

  // the arrival evaluation is not one of the geometric steps; test without it
  std::vector<std::pair<cplx, cplx>> approach = cls.tail_samples;
  if (cls.walk_arrived && !approach.empty()) approach.pop_back();
  if (cls.walk_arrived && tail_is_cauchy(approach)) {
    cls.verdict = Verdict::Regular;
    cls.richardson_value = neville_to_boundary(cls.tail_samples, chart.spec.center,
                                               series::radius_or_inf(chart.empirical),
                                               std::polar(1.0, theta));
    return cls;
  }

  if (cls.walk_pinched && tail_monotone_growth(cls.tail_samples)) {
    // corroboration: g(L) must approach f at the located point
    cplx fhat;
    try {
      fhat = ivp::eval_f(chart.spec, cls.singular.location);
    } catch (const Error&) {
      return cls;  // inconclusive
    }
    std::vector<double> corr;
    try {
      std::size_t from = cls.tail_samples.size() > 8 ? cls.tail_samples.size() - 8 : 0;
      for (std::size_t i = from; i < cls.tail_samples.size(); ++i)
        corr.push_back(
            std::abs(ivp::eval_g(chart.spec, cls.tail_samples[i].second, offset) - fhat));
    } catch (const Error&) {
      return cls;  // quadrature failure along the tail: inconclusive
    }
    if (!corr.empty() && corr.back() < opt.corroboration_tol) {
      cls.verdict = Verdict::Singular;
      cls.singular.singular_value = fhat;
      cls.singular.corroboration_residual = corr.back();
      cls.singular.corroboration_tail = std::move(corr);
    }
    return cls;
  }

  return cls;  // inconclusive
}

double overlap_check(const Classification& cls, const DiskChart& child, int n_points) {
  // points just inside the parent disk, clustered around the child center,
  // evaluated against the walk chart that carries the parent-side continuation
  double rho =
      0.25 * std::min(series::radius_or_inf(child.empirical), cls.last_chart.radius);
  if (!std::isfinite(rho) || !(rho > 0)) rho = 0.25 * cls.last_chart.radius;
  cplx inward = cls.last_chart.center - cls.boundary_point;
  double base = std::abs(inward) > 0 ? std::arg(inward) : 0.0;
  double worst = 0;
  for (int j = 0; j < n_points; ++j) {
    double phi = base - pi / 2 + pi * (j + 0.5) / n_points;
    cplx z = cls.boundary_point + std::polar(rho, phi);
    cplx a = series::eval(child.L, z).value;
    cplx b = cls.last_chart.eval(z);
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

namespace {

DiskChart spawn_child(const IvpSpec& parent_spec, const Classification& cls, int order) {
  IvpSpec child = parent_spec;
  child.center = cls.boundary_point;
  child.seed = cls.regular_value;
  return ivp::solve_local(child, order);
}

void insert_singular(Atlas& atlas, SingularPoint sp) {
  for (const SingularPoint& q : atlas.singular)
    if (std::abs(q.location - sp.location) < 1e-4 * (1.0 + std::abs(sp.location))) return;
  atlas.singular.push_back(std::move(sp));
}

// true when an equivalent chart already covers the candidate center (same
// sheet: the values must agree where both disks see the midpoint)
bool duplicates_existing(const Atlas& atlas, const Classification& cls) {
  cplx c_new = cls.boundary_point;
  for (const DiskChart& e : atlas.charts) {
    double re = series::radius_or_inf(e.empirical);
    double dist = std::abs(c_new - e.spec.center);
    if (!(dist < 0.7 * re)) continue;
    cplx mid = 0.5 * (c_new + e.spec.center);
    if (std::isfinite(re) && std::abs(mid - e.spec.center) > 0.6 * re) continue;
    if (std::abs(mid - cls.last_chart.center) > 0.5 * cls.last_chart.radius) continue;
    cplx ve = series::eval(e.L, mid).value;
    cplx vn = cls.last_chart.eval(mid);
    if (std::abs(ve - vn) < kDedupValueTol) return true;
  }
  return false;
}

// golden-section minimization of the walk's radius dip, hunting the pinch
void refine_cluster(Atlas& atlas, const DiskChart& chart, double lo, double hi,
                    const AtlasOptions& opt) {
  const double gr = (std::sqrt(5.0) - 1) / 2;
  auto dip = [&](double th) {
    Classification c = walk_ray(chart, th, opt, true);
    return std::make_pair(c.min_local_radius, c.walk_pinched);
  };
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  auto [f1, p1] = dip(x1);
  auto [f2, p2] = dip(x2);
  for (int it = 0; it < 40 && !p1 && !p2; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      std::tie(f1, p1) = dip(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      std::tie(f2, p2) = dip(x2);
    }
  }
  double theta_star = p1 ? x1 : (p2 ? x2 : 0.5 * (lo + hi));
  Classification full = classify_boundary(chart, theta_star, opt);
  if (full.verdict == Verdict::Singular) {
    full.singular.refined = true;
    insert_singular(atlas, full.singular);
  }
}

}  // namespace

Atlas build_atlas(const IvpSpec& spec, const Budget& budget, const AtlasOptions& opt) {
  ivp::validate(spec);
  Atlas atlas;
  atlas.root_spec = spec;
  atlas.options = opt;
  atlas.budget = budget;

  DiskChart root = ivp::solve_local(spec, opt.order);
  root.id = 0;
  root.generation = 0;
  atlas.charts.push_back(root);
  if (budget.max_charts < 1) atlas.budget_exhausted = true;

  int threads = resolve_threads(opt.threads);

  for (int gen = 0; gen <= budget.max_generation; ++gen) {
    std::vector<int> frontier;
    for (const DiskChart& c : atlas.charts)
      if (c.generation == gen) frontier.push_back(c.id);
    if (frontier.empty()) break;
    atlas.generations_used = gen + 1;

    struct AngleResult {
      Classification cls;
      bool classified = false;
    };
    std::vector<AngleResult> results(frontier.size() * budget.angles_per_chart);

    auto classify_chart = [&](std::size_t fi) {
      const DiskChart& chart = atlas.charts[frontier[fi]];
      if (!std::isfinite(series::radius_or_inf(chart.empirical))) return;
      for (int k = 0; k < budget.angles_per_chart; ++k) {
        double theta = 2 * pi * k / budget.angles_per_chart;
        AngleResult& slot = results[fi * budget.angles_per_chart + k];
        try {
          slot.cls = classify_boundary(chart, theta, opt);
          slot.classified = true;
        } catch (const Error&) {
          slot.classified = false;
        }
      }
    };

    if (threads > 1 && frontier.size() > 1) {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      std::size_t nt = std::min<std::size_t>(threads, frontier.size());
      for (std::size_t t = 0; t < nt; ++t)
        pool.emplace_back([&] {
          for (std::size_t i = next.fetch_add(1); i < frontier.size();
               i = next.fetch_add(1))
            classify_chart(i);
        });
      for (auto& th : pool) th.join();
    } else {
      for (std::size_t i = 0; i < frontier.size(); ++i) classify_chart(i);
    }

    // serial merge in deterministic (chart, angle) order; child insertion
    // reallocates the chart vector, so work on a copy
    for (std::size_t fi = 0; fi < frontier.size(); ++fi) {
      const DiskChart chart = atlas.charts[frontier[fi]];
      double r0 = series::radius_or_inf(chart.empirical);
      if (!std::isfinite(r0)) continue;
      std::vector<int> dips;
      for (int k = 0; k < budget.angles_per_chart; ++k) {
        AngleResult& slot = results[fi * budget.angles_per_chart + k];
        if (!slot.classified) continue;
        double theta = 2 * pi * k / budget.angles_per_chart;
        if (slot.cls.verdict == Verdict::Singular) {
          insert_singular(atlas, slot.cls.singular);
          continue;
        }
        if (slot.cls.min_local_radius < kDipFrac * r0) dips.push_back(k);
        if (slot.cls.verdict != Verdict::Regular) continue;
        if (chart.generation + 1 > budget.max_generation) continue;
        if (static_cast<int>(atlas.charts.size()) >= budget.max_charts) {
          atlas.budget_exhausted = true;
          continue;
        }
        if (duplicates_existing(atlas, slot.cls)) continue;
        if (std::abs(slot.cls.richardson_value - slot.cls.regular_value) > kOverlapReject)
          continue;
        DiskChart child;
        try {
          child = spawn_child(chart.spec, slot.cls, opt.order);
        } catch (const Error&) {
          continue;
        }
        double ov = overlap_check(slot.cls, child);
        if (ov > kOverlapReject) continue;
        child.id = static_cast<int>(atlas.charts.size());
        child.generation = chart.generation + 1;
        child.parent = chart.id;
        child.entry_angle = theta;
        atlas.charts.push_back(child);
        atlas.edges.push_back({chart.id, child.id, theta, ov});
      }
      // angular refinement: hunt the pinch between grid rays where the walk
      // radius dipped; the singular set has measure zero, so grid rays alone
      // almost never land on it
      if (!dips.empty()) {
        double dtheta = 2 * pi / budget.angles_per_chart;
        std::vector<std::pair<double, double>> brackets;
        int start = dips.front(), prev = dips.front();
        for (std::size_t i = 1; i <= dips.size(); ++i) {
          bool adjacent = i < dips.size() && dips[i] == prev + 1;
          if (!adjacent) {
            brackets.push_back({(start - 1) * dtheta, (prev + 1) * dtheta});
            if (i < dips.size()) start = dips[i];
          }
          if (i < dips.size()) prev = dips[i];
        }
        for (auto [lo, hi] : brackets) refine_cluster(atlas, chart, lo, hi, opt);
      }
    }
  }

  return atlas;
}

DiskChart continue_through(Atlas& atlas, int chart_id, double theta) {
  const DiskChart& parent = atlas.charts.at(chart_id);
  Classification cls = classify_boundary(parent, theta, atlas.options);
  if (cls.verdict != Verdict::Regular)
    throw Error(Errc::NotRegularDirection, "boundary direction is not regular");
  if (std::abs(cls.richardson_value - cls.regular_value) > kOverlapReject)
    throw Error(Errc::OverlapMismatch, "extrapolated boundary value disagrees");
  DiskChart child = spawn_child(parent.spec, cls, atlas.options.order);
  double ov = overlap_check(cls, child);
  if (ov > kOverlapReject)
    throw Error(Errc::OverlapMismatch, "child disagrees with the parent continuation");
  child.id = static_cast<int>(atlas.charts.size());
  child.generation = parent.generation + 1;
  child.parent = chart_id;
  child.entry_angle = theta;
  atlas.charts.push_back(child);
  atlas.edges.push_back({chart_id, child.id, theta, ov});
  return child;
}

StructureReport verify_singular_structure(const Atlas& atlas) {
  StructureReport rep;
  const IvpSpec& spec = atlas.root_spec;

  catalog::AsymptoticSet ag;
  if (spec.zero_order == 0) {
    try {
      cplx offset = g_offset_of(spec);
      catalog::CatalogFn g{catalog::IntExpPoly{spec.g_exp, offset}};
      ag = catalog::asymptotic_values(g);
    } catch (const Error&) {
      ag.complete = false;
    }
  } else {
    ag.complete = false;  // the (t-a)^N factor is outside the catalog's reach
  }
  rep.g_values_complete = ag.complete;
  rep.g_asymptotic_values = ag.values;
  if (!ag.complete) rep.notes += "value matching skipped: asymptotic set incomplete; ";

  bool all_ok = true;
  for (std::size_t i = 0; i < atlas.singular.size(); ++i) {
    const SingularPoint& sp = atlas.singular[i];
    PointCheck pc;
    pc.index = static_cast<int>(i);
    pc.tail_decreasing = !sp.corroboration_tail.empty();
    for (std::size_t j = 0; j + 1 < sp.corroboration_tail.size(); ++j)
      if (sp.corroboration_tail[j + 1] > sp.corroboration_tail[j] + 1e-12)
        pc.tail_decreasing = false;
    pc.final_residual = sp.corroboration_residual;
    if (ag.complete) {
      for (const cplx& v : ag.values)
        pc.g_value_distance =
            std::min(pc.g_value_distance, std::abs(sp.singular_value - v));
      pc.matches_g_value = pc.g_value_distance < 1e-4;
    } else {
      pc.matches_g_value = true;  // skipped
    }
    if (!pc.tail_decreasing || pc.final_residual >= 1e-4 || !pc.matches_g_value)
      all_ok = false;
    rep.points.push_back(pc);
  }

  // a finite root disk must expose at least one singular boundary point
  const DiskChart& root = atlas.charts.front();
  if (std::isfinite(series::radius_or_inf(root.empirical)) && atlas.singular.empty()) {
    rep.zero_singular_violation = true;
    rep.notes += "finite root radius with empty singular set: under-resolved; ";
  }

  // grid-resolution consistency: no regular grid ray within 1/256 of a
  // grid-located singular direction on the same chart
  for (const SingularPoint& sp : atlas.singular) {
    if (sp.refined) continue;
    const DiskChart& chart = atlas.charts.at(sp.chart_id);
    for (int k = 0; k < atlas.budget.angles_per_chart; ++k) {
      double theta = 2 * pi * k / atlas.budget.angles_per_chart;
      double d = std::abs(std::remainder(theta - sp.angle, 2 * pi));
      if (d > 1e-12 && d < 1.0 / 256) {
        try {
          Classification c = classify_boundary(chart, theta, atlas.options);
          if (c.verdict == Verdict::Regular) ++rep.closure_violations;
        } catch (const Error&) {
        }
      }
    }
  }
  if (rep.closure_violations) all_ok = false;

  rep.pass = all_ok && !rep.zero_singular_violation;
  return rep;
}

}  // namespace holofact::atlas

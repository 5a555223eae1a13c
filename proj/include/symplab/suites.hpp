#pragma once

// Verification suites, the end-to-end node pipeline, JSON reports and figures.

#include "symplab/geometry.hpp"
#include "symplab/isotopies.hpp"
#include "symplab/models.hpp"
#include "symplab/profiles.hpp"
#include "symplab/random.hpp"
#include "symplab/snf.hpp"
#include "symplab/svg.hpp"
#include "symplab/topology.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace symplab {

struct SuiteError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Check {
  std::string id;
  VerificationReport report;
};

struct SuiteConfig {
  std::string suite;
  json params = json::object();  ///< overrides of the suite defaults
  std::optional<std::uint64_t> seed;
  std::string out_dir;  ///< report is written to <out_dir>/<suite>.json when non-empty
};

struct SuiteResult {
  std::string suite;
  json params;
  std::optional<std::uint64_t> seed;
  std::vector<Check> checks;
  json notes = json::object();
  bool pass = false;
  double wall_ms = 0.0;
};

namespace suite_detail {

inline VerificationReport single(const std::string& quantity, double value, const Predicate& pred, double tol,
                                 std::vector<double> where = {}) {
  ReportBuilder b(quantity, "1 value", pred, tol);
  b.add(value, std::move(where));
  return b.finish();
}

inline Predicate negative() {
  return {"< 0", [](double q, double tol) { return q < -tol; }};
}

class Checks {
 public:
  void add(std::string id, VerificationReport r) { list_.push_back({std::move(id), std::move(r)}); }
  std::vector<Check> take() { return std::move(list_); }

 private:
  std::vector<Check> list_;
};

inline std::string tag(double x) { return svg::fmt(x); }

/// Merges overrides into defaults; unknown keys and kind mismatches are rejected.
inline json merge_params(const std::string& suite, const json& defaults, const json& overrides) {
  if (!overrides.is_object()) throw SuiteError(suite + ": parameters must be a JSON object");
  json merged = defaults;
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    if (!defaults.contains(it.key())) throw SuiteError(suite + ": unknown parameter '" + it.key() + "'");
    const json& def = defaults.at(it.key());
    const json& val = it.value();
    const bool ok = (def.is_number() && val.is_number()) || (def.is_array() && val.is_array()) ||
                    (def.is_boolean() && val.is_boolean()) || (def.is_string() && val.is_string());
    if (!ok) throw SuiteError(suite + ": parameter '" + it.key() + "' has the wrong type");
    if (def.is_number_integer() && !val.is_number_integer()) {
      throw SuiteError(suite + ": parameter '" + it.key() + "' must be an integer");
    }
    merged[it.key()] = val;
  }
  return merged;
}

inline void require(bool cond, const std::string& suite, const std::string& what) {
  if (!cond) throw SuiteError(suite + ": invalid parameter, " + what);
}

inline std::vector<double> numbers(const json& j, const std::string& suite, const std::string& key) {
  std::vector<double> out;
  for (const json& x : j.at(key)) {
    if (!x.is_number()) throw SuiteError(suite + ": '" + key + "' must be a list of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

inline Vec4 random_ball_point(SplitMix64& rng, double radius) {
  Vec4 z(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  const double n = z.norm();
  if (n == 0.0) return Vec4::Zero();
  return z / n * radius * std::pow(rng.uniform(), 0.25);
}

inline double pairing_max(const Frame& a, const Vec4& b1, const Vec4& b2) {
  const TwoFormField om = std_form(a.base().chart);
  const Frame b(a.base(), b1, b2);
  double worst = 0.0;
  for (const Tangent4* x : {&a.first(), &a.second()}) {
    for (const Tangent4* y : {&b.first(), &b.second()}) worst = std::max(worst, std::abs(eval_form(om, a.base(), *x, *y)));
  }
  return worst;
}

}  // namespace suite_detail

// ---------------------------------------------------------------------------
// Suites

struct SuiteSpec {
  json defaults;
  bool randomized = false;
  std::function<void(const json&, std::uint64_t, suite_detail::Checks&, json&)> run;
};

/// Sigma^ml, push-offs, orbit surfaces, deformation and nodalized profiles, framing.
inline void run_model1(const json& p, std::uint64_t, suite_detail::Checks& out, json& notes) {
  using namespace suite_detail;
  const std::string s = "model1";
  const int grid = p.at("grid").get<int>();
  const double tol = p.at("tol").get<double>();
  const double c = p.at("c").get<double>();
  const auto eps_list = numbers(p, s, "eps");
  const auto taus = numbers(p, s, "tau");
  const double deps = p.at("deform_eps").get<double>();
  const double corner = p.at("corner_radius").get<double>();
  const int nprof = p.at("profile_samples").get<int>();
  require(grid >= 2 && grid <= 2000, s, "grid must lie in [2, 2000]");
  require(c > 0.0 && tol >= 0.0 && deps > 0.0 && corner > 0.0 && nprof >= 2, s, "c, deform_eps, corner_radius > 0");
  for (double e : eps_list) require(e > 0.0 && e < 1.0, s, "eps values must lie in (0, 1)");
  for (double t : taus) require(t >= 0.0 && t < 1.0, s, "tau values must lie in [0, 1)");

  const ParamPatch sigma = sigma_ml(c);
  out.add("sigma_ml.density", grid_verify(sigma, "omega(dA/dtheta, dA/ds)", density_quantity(), {grid, grid},
                                          Predicate::near(1.0), tol));

  for (double e : eps_list) {
    const PushoffDisk minus = pushoff_disk(-1, e), plus = pushoff_disk(1, e);
    const ChartPoint origin(Vec4::Zero(), Chart::cotangent);
    const auto [m1, m2] = minus.basis();
    const auto [p1, p2] = plus.basis();
    const TwoFormField om = std_form(Chart::cotangent);
    out.add("pushoff.minus_pairing[" + tag(e) + "]",
            single("omega on the D- basis", eval_form(om, Frame(origin, m1, m2)), Predicate::near(-2 * e), tol, {e}));
    out.add("pushoff.plus_pairing[" + tag(e) + "]",
            single("omega on the D+ basis", eval_form(om, Frame(origin, p1, p2)), Predicate::near(2 * e), tol, {e}));
    out.add("pushoff.minus_density[" + tag(e) + "]",
            grid_verify(minus.patch, "D- patch density", density_quantity(), {51, 51}, Predicate::near(-2 * e), tol));
    out.add("pushoff.plus_density[" + tag(e) + "]",
            grid_verify(plus.patch, "D+ patch density", density_quantity(), {51, 51}, Predicate::near(2 * e), tol));
    out.add("pushoff.orientation[" + tag(e) + "]",
            single("sign det(D+ basis, D- basis reversed)", orientation_sign(p1, p2, m2, m1), Predicate::near(1.0), 0.0, {e}));
    out.add("pushoff.orthogonal[" + tag(e) + "]",
            single("max |omega(T0 D+, T0 D-)|", pairing_max(Frame(origin, p1, p2), m1, m2), Predicate::at_most(0.0), tol, {e}));
    for (const IntersectionCircle& circle : intersection_circles(e)) {
      out.add(std::string("circles.") + (circle.sign < 0 ? "minus" : "plus") + "_membership[" + tag(e) + "]",
              circle_membership(circle, p.at("circle_samples").get<int>(), tol));
    }
  }

  // Orbit surfaces: pointwise agreement of the frame density with a'b + b'a.
  auto orbit_agreement = [&](const ProfileCurve& prof) {
    const ParamPatch patch = orbit_surface(prof);
    return grid_verify(patch, "|omega(dC/dtheta, dC/ds) - (a'b + b'a)|",
                       [prof](const ParamPatch& pt, double th, double sv) {
                         return std::abs(symplectic_density(pt, th, sv) - profile_density(prof(sv)));
                       },
                       {100, 100}, Predicate::at_most(0.0), tol);
  };
  out.add("orbit.density_formula[sigma_ml]", orbit_agreement(sigma_ml_profile(c)));
  std::vector<double> hausdorff;
  for (double t : taus) {
    const ProfileCurve prof = deformation_family(t, deps);
    out.add("orbit.density_formula[tau=" + tag(t) + "]", orbit_agreement(prof));
    out.add("deformation.admissible[tau=" + tag(t) + "]", profile_admissible(prof, nprof));
    const double h = hausdorff_distance(profile_polyline(prof, 4001), nodal_slice_polyline(deps, prof.domain().hi));
    if (t > 0.0) hausdorff.push_back(h);
    notes["hausdorff_to_nodal_slice"][tag(t)] = h;
  }
  if (hausdorff.size() >= 2) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < hausdorff.size(); ++i) worst = std::max(worst, hausdorff[i] - hausdorff[i - 1]);
    out.add("deformation.hausdorff_decreasing", single("max increment of the Hausdorff distance along tau", worst, negative(), 0.0));
  }

  // Nodalized profile: density away from the node, far field, slice segments.
  const ProfileCurve nod = nodalized_profile(deps, corner);
  out.add("nodalized.density", grid_verify(orbit_surface(nod), "Sigma' density", density_quantity(), {100, 100},
                                           Predicate::positive(), 0.0));
  {
    ReportBuilder fillet("Sigma' density on the smoothed corners", std::to_string(nprof) + " samples", Predicate::positive(), 0.0);
    for (bool upper : {false, true}) {
      const Interval iv = nodalized_fillet_interval(deps, corner, upper);
      for (int i = 0; i < nprof / 2; ++i) {
        const double sv = iv.at(static_cast<double>(i) / (nprof / 2 - 1));
        fillet.add(profile_density(nod(sv)), {sv});
      }
    }
    out.add("nodalized.fillet_density", fillet.finish());
  }
  {
    const Interval lower = nodalized_fillet_interval(deps, corner, false);
    const Interval upper = nodalized_fillet_interval(deps, corner, true);
    ReportBuilder far("|a - 1| + |b - s| outside the corner region", std::to_string(nprof) + " samples", Predicate::at_most(0.0), tol);
    ReportBuilder seg("distance of the inner profile to the push-off slice lines", std::to_string(nprof) + " samples",
                      Predicate::at_most(0.0), tol);
    for (int i = 0; i < nprof; ++i) {
      const double sv = nod.domain().at(static_cast<double>(i) / (nprof - 1));
      const ProfileSample q = nod(sv);
      if (sv <= lower.lo || sv >= upper.hi) {
        far.add(std::abs(q.a - 1.0) + std::abs(q.b - sv), {sv});
      } else if (sv > lower.hi && sv < upper.lo) {
        // p2 = -eps q1 (D+ slice) below the node, p2 = eps q1 (D- slice) above it.
        seg.add(std::abs(q.b + (q.b < 0.0 ? deps : -deps) * q.a) / std::sqrt(1 + deps * deps), {sv});
      }
    }
    out.add("nodalized.far_field", far.finish());
    out.add("nodalized.slice_segments", seg.finish());
  }

  const int nw = p.at("winding_samples").get<int>();
  out.add("framing.sigma_ml", single("normal winding of Sigma^ml along the disk boundary", normal_winding(sigma, 0.0, 1.0, nw),
                                     Predicate::near(1.0), 0.0));
  out.add("framing.conormal", single("winding of the conormal field",
                                     winding_number([](double th) { return Vec2(std::cos(th), std::sin(th)); }, nw),
                                     Predicate::near(1.0), 0.0));
  out.add("framing.control", single("normal winding of the double-twist control", normal_winding(double_twist_patch(), 0.0, 1.0, nw),
                                    Predicate::near(2.0), 0.0));
}

/// gamma smoothing of the orthogonal node, chart change, Lagrangian disk.
inline void run_model2(const json& p, std::uint64_t, suite_detail::Checks& out, json& notes) {
  using namespace suite_detail;
  const std::string s = "model2";
  const int grid = p.at("grid").get<int>();
  const double tol = p.at("tol").get<double>();
  const double etol = p.at("endpoint_tol").get<double>();
  GammaParams gp{p.at("eps_prime").get<double>(), p.at("blend_inner").get<double>(), p.at("blend_outer").get<double>(),
                 p.at("radius").get<double>()};
  require(grid >= 2 && grid <= 2000, s, "grid must lie in [2, 2000]");
  require(gp.eps_prime > 0 && gp.eps_prime < gp.blend_inner && gp.blend_inner < gp.blend_outer && gp.blend_outer < gp.radius, s,
          "need 0 < eps_prime < blend_inner < blend_outer < radius");
  const auto chart_eps = numbers(p, s, "chart_eps");
  for (double e : chart_eps) require(e > 0.0, s, "chart_eps values must be positive");
  const int nchart = p.at("chart_samples").get<int>();
  const int ndisk = p.at("disk_samples").get<int>();
  require(nchart >= 1 && ndisk >= 4, s, "sample counts too small");

  const GammaCurve gamma = default_gamma(gp);
  const ParamPatch ann = gamma_smoothing(gamma);
  out.add("gamma.admissible", gamma_admissible(gamma));
  out.add("gamma.density_formula",
          grid_verify(ann, "|omega(dA/dtheta, dA/ds) - (g2 g2' - g1 g1')|",
                      [gamma](const ParamPatch& pt, double th, double sv) {
                        return std::abs(symplectic_density(pt, th, sv) - gamma_density(gamma(sv)));
                      },
                      {grid, grid}, Predicate::at_most(0.0), tol));
  {
    ReportBuilder e0("s=0 ring: |z2| + ||z1| - eps1|", "360 samples", Predicate::at_most(0.0), etol);
    ReportBuilder e1("s=1 ring: |z1| + ||z2| - eps2|", "360 samples", Predicate::at_most(0.0), etol);
    for (int i = 0; i < 360; ++i) {
      const double th = two_pi * i / 360;
      const Vec4 a = ann.coords(th, 0.0), b = ann.coords(th, 1.0);
      e0.add(std::hypot(a(2), a(3)) + std::abs(std::hypot(a(0), a(1)) - gamma.eps1()), {th});
      e1.add(std::hypot(b(0), b(1)) + std::abs(std::hypot(b(2), b(3)) - gamma.eps2()), {th});
    }
    out.add("gamma.endpoint_z1_disk", e0.finish());
    out.add("gamma.endpoint_z2_disk", e1.finish());
  }
  const double sdiag = gamma_diagonal_parameter(gamma);
  {
    const GammaSample g = gamma(sdiag);
    out.add("gamma.passes_eps_prime", single("|gamma(s*) - (eps', eps')|", std::hypot(g.g1 - gp.eps_prime, g.g2 - gp.eps_prime),
                                             Predicate::at_most(0.0), etol, {sdiag}));
  }

  // Chart change.
  const ProfileCurve prof = polynomial_profile({1.0, 0.0, 0.5}, {0.0, 1.0}, {-1.0, 1.0});
  for (double e : chart_eps) {
    const CoordinateChange chg(e);
    const PushoffDisk minus = pushoff_disk(-1, e), plus = pushoff_disk(1, e);
    ReportBuilder dm("|image of D- - (2 eps q1, -2 eps q2, 0, 0)|", "41x41", Predicate::at_most(0.0), tol);
    ReportBuilder dp("|image of D+ - (0, 0, -2 eps q1, -2 eps q2)|", "41x41", Predicate::at_most(0.0), tol);
    for (int i = 0; i < 41; ++i) {
      for (int j = 0; j < 41; ++j) {
        const double q1 = -1.0 + 2.0 * i / 40, q2 = -1.0 + 2.0 * j / 40;
        if (q1 * q1 + q2 * q2 > 1.0) continue;
        dm.add((chg.apply(minus.patch.coords(q1, q2)) - Vec4(2 * e * q1, -2 * e * q2, 0, 0)).norm(), {q1, q2});
        dp.add((chg.apply(plus.patch.coords(q1, q2)) - Vec4(0, 0, -2 * e * q1, -2 * e * q2)).norm(), {q1, q2});
      }
    }
    out.add("chart.minus_image[" + tag(e) + "]", dm.finish());
    out.add("chart.plus_image[" + tag(e) + "]", dp.finish());

    std::vector<Vec4> pts;
    for (int i = 0; i < nchart; ++i) {
      SplitMix64 rng = stream(0x5eed, static_cast<std::uint64_t>(i));
      pts.push_back(random_ball_point(rng, 2.0));
    }
    const PullbackConstant k = measure_pullback_constant(chg, pts);
    out.add("chart.kappa[" + tag(e) + "]", single("mean measured pullback constant", k.mean, Predicate::near(2 * e), tol, {e}));
    out.add("chart.kappa_variance[" + tag(e) + "]",
            single("variance of the pullback constant over points", k.variance, Predicate::at_most(0.0), 1e-18, {e}));
    out.add("chart.kappa_pattern[" + tag(e) + "]",
            single("max |J^T omega J - kappa omega|", k.max_offpattern, Predicate::at_most(0.0), 1e-9, {e}));
    notes["chart_pullback_constant"][tag(e)] = k.mean;

    ReportBuilder an("|image of annulus - (g1 e^{i theta}, g2 e^{-i theta})|", "60x60", Predicate::at_most(0.0), tol);
    for (int i = 0; i < 60; ++i) {
      for (int j = 0; j < 60; ++j) {
        const double th = two_pi * i / 59, sv = prof.domain().at(j / 59.0);
        const ProfileSample q = prof(sv);
        const double g1 = e * q.a + q.b, g2 = -e * q.a + q.b;
        const Vec4 target = from_complex(g1 * std::polar(1.0, th), g2 * std::polar(1.0, -th));
        an.add((chg.apply(annulus_point(q, th)) - target).norm(), {th, sv});
      }
    }
    out.add("chart.annulus_image[" + tag(e) + "]", an.finish());
  }
  notes["chart_scaling"] =
      "the linear chart change multiplies omega by kappa = 2 eps; it is a conformal symplectomorphism and a "
      "symplectomorphism only after rescaling by 1/sqrt(2 eps)";

  // Lagrangian disk with boundary on the smoothing.
  const ParamPatch disk = lagrangian_disk_in_smoothing(gp.eps_prime);
  {
    ReportBuilder lag("|omega(d/dr, d/dtheta)| on the disk", std::to_string(ndisk) + " samples", Predicate::at_most(0.0),
                      p.at("lagrangian_tol").get<double>());
    const int nr = std::max(2, static_cast<int>(std::sqrt(ndisk)));
    const int nt = std::max(2, ndisk / nr);
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nt; ++j) {
        const double r = gp.eps_prime * i / (nr - 1), th = two_pi * j / nt;
        lag.add(std::abs(symplectic_density(disk, r, th)), {r, th});
      }
    }
    out.add("lagrangian.omega_restriction", lag.finish());
  }
  {
    ReportBuilder bd("|disk boundary - annulus at gamma = (eps', eps')|", "360 samples", Predicate::at_most(0.0),
                     p.at("boundary_tol").get<double>());
    for (int i = 0; i < 360; ++i) {
      const double th = two_pi * i / 360;
      bd.add((disk.coords(gp.eps_prime, th) - ann.coords(th, sdiag)).norm(), {th});
    }
    out.add("lagrangian.boundary_on_smoothing", bd.finish());
    out.add("lagrangian.center_is_node", single("|disk(0, theta)|", disk.coords(0.0, 1.0).norm(), Predicate::at_most(0.0), 0.0));
  }
}

/// Rotated smoothings and their C1 distance to the complex smoothing.
inline void run_model3(const json& p, std::uint64_t seed, suite_detail::Checks& out, json& notes) {
  using namespace suite_detail;
  const std::string s = "model3";
  const int pairs = p.at("pairs").get<int>();
  const double eps = p.at("eps").get<double>();
  const int grid = p.at("grid").get<int>();
  const double rtol = p.at("residual_tol").get<double>();
  const auto halving = numbers(p, s, "halving");
  const double bi = p.at("blend_inner").get<double>(), bo = p.at("blend_outer").get<double>(), rad = p.at("radius").get<double>();
  require(pairs >= 1 && grid >= 2 && grid <= 1000, s, "pairs >= 1 and grid in [2, 1000]");
  require(eps > 0.0 && std::sqrt(eps) < bi && bi < bo && bo < rad, s, "need sqrt(eps) < blend_inner < blend_outer < radius");
  for (double e : halving) require(e > 0.0 && std::sqrt(e) < bi, s, "halving eps values need sqrt(eps) < blend_inner");

  auto gamma_for = [&](double e) { return default_gamma({std::sqrt(e), bi, bo, rad}); };
  const GammaCurve gamma = gamma_for(eps);
  const Interval core = *gamma.core();

  ReportBuilder res("|(z1 - (a+bi) z2) z2 - eps| on the core", std::to_string(pairs) + " pairs x " + std::to_string(grid) + "x" +
                                                                   std::to_string(grid),
                    Predicate::at_most(0.0), rtol);
  for (int k = 0; k < pairs; ++k) {
    SplitMix64 rng = stream(seed, static_cast<std::uint64_t>(k));
    const double a = rng.uniform(-1.0, 1.0), b = rng.uniform(-1.0, 1.0);
    const ParamPatch patch = rotated_smoothing(a, b, gamma, eps);
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        const double th = two_pi * i / (grid - 1), sv = core.at(static_cast<double>(j) / (grid - 1));
        res.add(algebraic_residual(patch.coords(th, sv), cplx(a, b), eps), {a, b, th, sv});
      }
    }
  }
  out.add("rotated.core_residual", res.finish());

  {
    const ParamPatch r0 = rotated_smoothing(0.0, 0.0, gamma, eps), g0 = gamma_smoothing(gamma);
    out.add("rotated.reduces_to_straight",
            grid_verify(r0, "|A_0 - A| (points and partials)",
                        [&g0](const ParamPatch& pt, double th, double sv) {
                          const Frame a = pt.frame(th, sv), b = g0.frame(th, sv);
                          return (a.base().coords - b.base().coords).norm() + (a.first().vec - b.first().vec).norm() +
                                 (a.second().vec - b.second().vec).norm();
                        },
                        {grid, grid}, Predicate::at_most(0.0), 0.0));
  }
  const double da = p.at("density_a").get<double>(), db = p.at("density_b").get<double>();
  out.add("rotated.density", grid_verify(rotated_smoothing(da, db, gamma, eps), "rotated smoothing density", density_quantity(),
                                         {grid, grid}, Predicate::positive(), 0.0));

  const int c1grid = p.at("c1_grid").get<int>();
  std::vector<double> dist;
  for (double e : halving) {
    const C1Distance d = c1_distance(rotated_smoothing(da, db, gamma_for(e), e), complex_curve_target(cplx(da, db), e),
                                     {c1grid, c1grid});
    dist.push_back(d.value);
    notes["c1_distance"][tag(e)] = {{"total", d.value}, {"position", d.position}, {"angle", d.angle}};
  }
  if (dist.size() >= 2) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < dist.size(); ++i) worst = std::max(worst, dist[i] - dist[i - 1]);
    out.add("c1.decreasing", single("max increment of the C1 distance as eps halves", worst, negative(), 0.0));
    out.add("c1.toward_zero", single("C1 distance ratio last/first", dist.back() / dist.front(), Predicate::at_most(0.5), 0.0));
  }
  {
    const ParamPatch g = gamma_smoothing(gamma);
    out.add("c1.self", single("C1 distance of a patch to itself", c1_distance(g, g, {c1grid, c1grid}).value,
                              Predicate::at_most(0.0), 1e-12));
    const auto [m1, m2] = pushoff_disk(-1, 0.1).basis();
    out.add("c1.sigma_vs_plane",
            single("C1 distance of Sigma^ml to the D- plane",
                   c1_distance(sigma_ml(1.0), plane_target(Vec4::Zero(), m1, m2, "D- plane"), {c1grid, c1grid}).value,
                   Predicate::at_least(0.5), 0.0));
  }
}

namespace suite_detail {

/// Random plane with 1 + ad - bc >= floor.
inline PlaneCoeffs random_plane(SplitMix64& rng, double bound = 2.0, double floor = 0.1) {
  for (;;) {
    PlaneCoeffs q{rng.uniform(-bound, bound), rng.uniform(-bound, bound), rng.uniform(-bound, bound), rng.uniform(-bound, bound)};
    if (1.0 + q.det() >= floor) return q;
  }
}

/// Constant family, or three planes joined linearly, that is symplectic on a fine sample.
inline PlaneFamily random_family(SplitMix64& rng) {
  for (;;) {
    if (rng.uniform() < 0.3) return PlaneFamily::constant(random_plane(rng));
    std::vector<std::array<double, 5>> rows;
    for (double t : {0.0, 0.5, 1.0}) {
      const PlaneCoeffs q = random_plane(rng);
      rows.push_back({t, q.a, q.b, q.c, q.d});
    }
    PlaneFamily fam = PlaneFamily::sampled(rows);
    bool ok = true;
    for (int i = 0; i <= 1000 && ok; ++i) ok = 1.0 + fam(i / 1000.0).det() >= 0.05;
    if (ok) return fam;
  }
}

}  // namespace suite_detail

/// Orthogonalizing isotopy with a radial cutoff.
inline void run_orth(const json& p, std::uint64_t seed, suite_detail::Checks& out, json& notes) {
  using namespace suite_detail;
  const std::string s = "orth";
  const int samples = p.at("samples").get<int>();
  const int families = p.at("families").get<int>();
  const double eps = p.at("eps").get<double>();
  const double tol = p.at("tol").get<double>();
  const double otol = p.at("orth_tol").get<double>();
  const double ctol = p.at("complex_tol").get<double>();
  require(samples >= families && families >= 1, s, "need samples >= families >= 1");
  require(eps > 0.0, s, "eps must be positive");

  ReportBuilder agree("|phi density - closed form|", std::to_string(samples) + " random inputs", Predicate::at_most(0.0), tol);
  ReportBuilder pos("phi density / r", std::to_string(samples) + " random inputs", Predicate::positive(), 0.0);
  ReportBuilder orth("max |omega(T phi, (d/dx1, d/dy1))| for s = 1, r <= eps", std::to_string(families) + " families x 64",
                     Predicate::at_most(0.0), otol);
  ReportBuilder support("|phi_s - phi_0| for r >= delta", std::to_string(families) + " families x 64", Predicate::at_most(0.0), 0.0);
  double eta_min = std::numeric_limits<double>::infinity();
  const int per = samples / families;
  for (int f = 0; f < families; ++f) {
    SplitMix64 frng = stream(seed, static_cast<std::uint64_t>(f));
    const PlaneFamily fam = random_family(frng);
    const double eta = eta_margin(fam);
    eta_min = std::min(eta_min, eta);
    const Cutoff cut = build_cutoff(eps, eta);
    const int count = f + 1 == families ? samples - per * (families - 1) : per;
    for (int i = 0; i < count; ++i) {
      SplitMix64 rng = stream(seed ^ 0xabcdefULL, static_cast<std::uint64_t>(f) * 1000003ULL + static_cast<std::uint64_t>(i));
      const double t = rng.uniform(), sv = rng.uniform(), th = rng.uniform(0.0, two_pi);
      const double r = cut.delta() * 1.2 * (1.0 - rng.uniform());  // (0, 1.2 delta]
      const double direct = phi_density(fam, cut, t, sv, r, th);
      const double closed = phi_density_closed_form(fam, cut, t, sv, r);
      agree.add(std::abs(direct - closed), {static_cast<double>(f), t, sv, r, th});
      pos.add(direct / r, {static_cast<double>(f), t, sv, r, th});
    }
    const Vec4 ex1(1, 0, 0, 0), ey1(0, 1, 0, 0);
    for (int i = 0; i < 64; ++i) {
      SplitMix64 rng = stream(seed ^ 0x0b7ULL, static_cast<std::uint64_t>(f) * 64ULL + static_cast<std::uint64_t>(i));
      const double t = rng.uniform(), th = rng.uniform(0.0, two_pi);
      const double r = cut.eps() * (1.0 - rng.uniform());
      const ParamPatch patch = phi_patch(fam, cut, t, 1.0, cut.delta());
      orth.add(pairing_max(patch.frame(r, th), ex1, ey1), {static_cast<double>(f), t, r, th});
      const double rr = cut.delta() * (1.0 + rng.uniform());
      const double sv = rng.uniform();
      support.add((phi_point(fam, cut, t, sv, rr, th) - phi_point(fam, cut, t, 0.0, rr, th)).norm(), {static_cast<double>(f), t, sv, rr});
    }
  }
  out.add("orth.closed_form", agree.finish());
  out.add("orth.positivity", pos.finish());
  out.add("orth.core_orthogonal", orth.finish());
  out.add("orth.support", support.finish());
  notes["smallest_eta"] = eta_min;

  ReportBuilder cplx_check("max(|d_s - a_s|, |c_s + b_s|)", std::to_string(families + 1) + " complex planes x 5 values of s",
                           Predicate::at_most(0.0), ctol);
  const std::vector<double> svals{0.0, 0.25, 0.5, 0.75, 1.0};
  for (int f = 0; f <= families; ++f) {
    SplitMix64 rng = stream(seed ^ 0xc0ffeeULL, static_cast<std::uint64_t>(f));
    const double a = f == 0 ? 2.0 : rng.uniform(-3.0, 3.0), b = f == 0 ? 3.0 : rng.uniform(-3.0, 3.0);
    const VerificationReport r = complex_preservation_check({a, b, -b, a}, svals, ctol);
    cplx_check.add(r.max, {a, b});
  }
  out.add("orth.complex_preserved", cplx_check.finish());
  out.add("orth.eta_margin_example",
          single("eta_margin for constant ad - bc = -1/2", eta_margin(PlaneFamily::constant({0.5, 0.0, 0.0, -1.0})),
                 Predicate::near(0.5), 1e-15));
}

/// Kaehler-to-Darboux Moser flow.
inline void run_moser(const json& p, std::uint64_t seed, suite_detail::Checks& out, json& notes) {
  using namespace suite_detail;
  const std::string s = "moser";
  const int nrad = p.at("radial_points").get<int>(), nid = p.at("identity_points").get<int>();
  const int nflow = p.at("flow_points").get<int>(), npull = p.at("pullback_points").get<int>();
  const double rid = p.at("radius_identity").get<double>(), rflow = p.at("radius_flow").get<double>();
  const double rhalf = p.at("radius_half").get<double>();
  const double h = p.at("h").get<double>();
  require(nrad >= 1 && nid >= 1 && nflow >= 1 && npull >= 1, s, "point counts must be positive");
  require(rflow > 0.0 && rflow < 1.0, s, "radius_flow must lie in (0, 1): the t = 1 flow exists only on the unit ball");
  require(rid > 0.0 && rhalf > 0.0 && h > 0.0, s, "radii and h must be positive");

  ReportBuilder l0("|lambda(V0)|", std::to_string(nrad) + " points", Predicate::at_most(0.0), p.at("radial_tol").get<double>());
  ReportBuilder f0("|df(V0) - f|", std::to_string(nrad) + " points", Predicate::at_most(0.0), p.at("radial_tol").get<double>());
  ReportBuilder i0("|i_{V0} d lambda - lambda|", std::to_string(nrad) + " points", Predicate::at_most(0.0), p.at("radial_tol").get<double>());
  for (int i = 0; i < nrad; ++i) {
    SplitMix64 rng = stream(seed, static_cast<std::uint64_t>(i));
    const Vec4 z = random_ball_point(rng, 3.0);
    const moser::RadialResiduals r = moser::radial_residuals(z);
    l0.add(r.lambda_v0, {z(0), z(1), z(2), z(3)});
    f0.add(r.df_v0, {z(0), z(1), z(2), z(3)});
    i0.add(r.iv0_dlambda, {z(0), z(1), z(2), z(3)});
  }
  out.add("radial.lambda_v0", l0.finish());
  out.add("radial.df_v0", f0.finish());
  out.add("radial.iv0_dlambda", i0.finish());

  ReportBuilder idr("|i_{V_t} omega_t + mu|", std::to_string(nid) + " points", Predicate::at_most(0.0), p.at("identity_tol").get<double>());
  ReportBuilder scale("|f_t (scale 3/4) - f_t|", std::to_string(nid) + " points", Predicate::at_most(0.0), p.at("dc_scale_tol").get<double>());
  ReportBuilder dmu("|d mu - (omega_K - omega_D)| (finite differences)", std::to_string(nid) + " points", Predicate::at_most(0.0), 1e-6);
  ReportBuilder pf("|Pfaffian(omega_t)|, |z| <= 3", std::to_string(nid) + " points", Predicate::positive(), 0.0);
  for (int i = 0; i < nid; ++i) {
    SplitMix64 rng = stream(seed ^ 0x1d1dULL, static_cast<std::uint64_t>(i));
    const double t = rng.uniform();
    const Vec4 z = random_ball_point(rng, rid);
    std::vector<double> w{t, z(0), z(1), z(2), z(3)};
    idr.add(moser::identity_residual(t, z), w);
    const double ft = moser::ft(t, z);
    scale.add(std::abs(moser::ft_from_forms(t, z, DcConvention{0.75}) - ft) / (1.0 + ft), w);
    const Mat4 d = fd_exterior_derivative(moser::mu_field(), ChartPoint(z, Chart::complex), 1e-4);
    dmu.add((d - (moser::omega_K(z) - moser::omega_D())).cwiseAbs().maxCoeff(), w);
    const Vec4 z3 = random_ball_point(rng, 3.0);
    pf.add(std::abs(pfaffian(moser::omega_t(t, z3))), {t, z3(0), z3(1), z3(2), z3(3)});
  }
  out.add("identity.moser_equation", idr.finish());
  out.add("identity.dc_scale_invariance", scale.finish());
  out.add("identity.dmu", dmu.finish());
  out.add("forms.omega_t_nondegenerate", pf.finish());

  const MoserFlow flow(1.0, {}, p.at("halving_tol").get<double>());
  ReportBuilder col("collinearity residual of Psi_1(z) with z", std::to_string(nflow) + " points", Predicate::at_most(0.0),
                    p.at("collinear_tol").get<double>());
  ReportBuilder orc("||Psi_1(z)| - radial solution|", std::to_string(nflow) + " points", Predicate::at_most(0.0),
                    p.at("oracle_tol").get<double>());
  ReportBuilder hv("step-halving residual", std::to_string(nflow) + " points", Predicate::at_most(0.0), p.at("halving_tol").get<double>());
  ReportBuilder mono("min increment of |Psi_1(r u)| along rays", std::to_string(nflow) + " rays", Predicate::positive(), 0.0);
  for (int i = 0; i < nflow; ++i) {
    SplitMix64 rng = stream(seed ^ 0xf10fULL, static_cast<std::uint64_t>(i));
    const Vec4 z = random_ball_point(rng, rflow);
    const MoserFlow::Result r = flow.solve(z);
    std::vector<double> w{z(0), z(1), z(2), z(3)};
    col.add(collinearity_residual(z, r.point), w);
    // |Psi_1(z)|^2 = f / (1 - f) solves the conserved relation F (t/(1+F) + 1 - t) = f at t = 1.
    const double f = z.squaredNorm();
    orc.add(std::abs(r.point.norm() - std::sqrt(f / (1.0 - f))), w);
    hv.add(r.halving_residual, w);
    const Vec4 u = z.norm() > 0 ? Vec4(z / z.norm()) : Vec4(1, 0, 0, 0);
    double prev = 0.0, worst = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 8; ++k) {
      const double rad = flow(u * (rflow * k / 8.0)).norm();
      worst = std::min(worst, rad - prev);
      prev = rad;
    }
    mono.add(worst, {u(0), u(1), u(2), u(3)});
  }
  out.add("flow.collinear", col.finish());
  out.add("flow.radial_oracle", orc.finish());
  out.add("flow.step_halving", hv.finish());
  out.add("flow.monotone_radius", mono.finish());

  std::vector<Vec4> pts1, pts_half;
  for (int i = 0; i < npull; ++i) {
    SplitMix64 rng = stream(seed ^ 0x9b11ULL, static_cast<std::uint64_t>(i));
    pts1.push_back(random_ball_point(rng, rflow));
    pts_half.push_back(random_ball_point(rng, rhalf));
  }
  const double ptol = p.at("pullback_tol").get<double>();
  out.add("pullback.psi1", verify_pullback(local_map(flow), moser::omega_K_field(), moser::omega_D_field(), pts1, h, ptol));
  out.add("pullback.psi_half", verify_pullback(local_map(MoserFlow(0.5)), moser::omega_t_field(0.5), moser::omega_D_field(),
                                               pts_half, h, ptol));
  const LocalMap identity = [](const Vec4&) { return std::function<Vec4(const Vec4&)>([](const Vec4& x) { return x; }); };
  out.add("pullback.identity", verify_pullback(identity, moser::omega_D_field(), moser::omega_D_field(), pts_half, h, 1e-12));
  notes["flow_domain"] = "Psi_1 sends |z|^2 = f to f/(1-f) and exists only for |z| < 1; t = 1 samples use |z| <= radius_flow";
}

/// d-splitting systems on the model surfaces.
inline void run_splitting(const json& p, std::uint64_t seed, suite_detail::Checks& out, json& notes) {
  using namespace suite_detail;
  const std::string s = "splitting";
  const int d = p.at("d").get<int>();
  const int nodes = p.at("nodes").get<int>();
  const int nrand = p.at("random_multicurves").get<int>();
  const auto range = numbers(p, s, "d_range");
  require(d >= 2 && d <= 12, s, "d must lie in [2, 12]");
  require(nodes >= 0 && nodes <= d * (d - 1) / 2, s, "nodes must lie in [0, d(d-1)/2]");
  require(range.size() == 2 && range[0] >= 2 && range[1] >= range[0] && range[1] <= 12, s, "d_range must be [lo, hi] within [2, 12]");
  require(nrand >= 0, s, "random_multicurves must be non-negative");

  for (int dd = static_cast<int>(range[0]); dd <= static_cast<int>(range[1]); ++dd) {
    const ModelSplitting m = build_model_splitting(dd);
    const SplittingCertificate cert = verify_splitting(cut_along(m.surface, m.multicurve), dd);
    const SplittingCounts k = splitting_counts(dd);
    out.add("model[" + std::to_string(dd) + "].certificate", single("splitting certificate passes", cert.pass ? 1.0 : 0.0, Predicate::near(1.0), 0.0));
    out.add("model[" + std::to_string(dd) + "].genus",
            single("genus - (d-1)(d-2)/2", m.surface.genus() - static_cast<double>(k.genus), Predicate::near(0.0), 0.0));
    out.add("model[" + std::to_string(dd) + "].curves",
            single("curves - d(d-1)/2", static_cast<double>(m.multicurve.curves.size()) - static_cast<double>(k.curves), Predicate::near(0.0), 0.0));
  }
  const ModelSplitting m = build_model_splitting(d, nodes);
  const SplittingCertificate cert = verify_splitting(cut_along(m.surface, m.multicurve), d);
  out.add("target.certificate", single("splitting certificate (retained nodes cut as node circles)", cert.pass ? 1.0 : 0.0,
                                       Predicate::near(1.0), 0.0));
  const SplittingCounts k = splitting_counts(d);
  notes["g"] = k.genus;
  notes["k"] = k.curves;
  notes["lagrangian_disks"] = k.curves - nodes;
  notes["certificate"] = certificate_to_json(cert);

  if (nrand > 0) {
    ReportBuilder rf("random non-splitting multicurve rejected with a failure clause", std::to_string(nrand) + " multicurves",
                     Predicate::near(1.0), 0.0);
    for (int i = 0; i < nrand; ++i) {
      const std::uint64_t sub = stream(seed, static_cast<std::uint64_t>(i))();
      const Multicurve mc = random_non_splitting_multicurve(m, sub);
      const SplittingCertificate c = verify_splitting(cut_along(m.surface, mc), d);
      rf.add(!c.pass && !c.failed_clause.empty() ? 1.0 : 0.0, {static_cast<double>(i)});
    }
    out.add("random.rejected", rf.finish());
  }
}

/// Complement homology and Smith normal form consistency.
inline void run_homology(const json& p, std::uint64_t seed, suite_detail::Checks& out, json& notes) {
  using namespace suite_detail;
  const std::string s = "homology";
  const int dmax = p.at("d_max").get<int>();
  const int trials = p.at("snf_trials").get<int>();
  const int n = p.at("snf_size").get<int>();
  const int bound = p.at("entry_bound").get<int>();
  require(dmax >= 1 && dmax <= 12, s, "d_max must lie in [1, 12]");
  require(trials >= 0 && n >= 1 && n <= 8 && bound >= 1, s, "snf_trials >= 0, snf_size in [1, 8], entry_bound >= 1");

  for (int d = 1; d <= dmax; ++d) {
    const ComplementHomology h = complement_homology(d);
    const long long g = (static_cast<long long>(d) - 1) * (d - 2) / 2;
    AbelianGroup z_d;
    if (d > 1) z_d.torsion.push_back(d);
    const AbelianGroup z2g{static_cast<std::size_t>(2 * g), {}};
    const bool ok = h.h1 == z_d && h.h2 == z2g && h.h3.trivial();
    out.add("complement[" + std::to_string(d) + "]", single("(H1, H2, H3) equals (Z/d, Z^2g, 0)", ok ? 1.0 : 0.0, Predicate::near(1.0), 0.0));
    notes["groups"][std::to_string(d)] = {h.h1.to_string(), h.h2.to_string(), h.h3.to_string()};
  }

  ReportBuilder chain("invariant factors form a divisibility chain", std::to_string(trials) + " random matrices", Predicate::near(1.0), 0.0);
  for (int k = 0; k < trials; ++k) {
    SplitMix64 rng = stream(seed, static_cast<std::uint64_t>(k));
    IntMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = static_cast<long long>(rng() % (2 * bound + 1)) - bound;
    }
    const SmithForm sf = smith_normal_form(a);  // throws unless U A V = D
    bool ok = true;
    for (std::size_t i = 0; i < sf.invariants.size(); ++i) {
      ok = ok && sf.invariants[i] > 0;
      if (i > 0) ok = ok && sf.invariants[i] % sf.invariants[i - 1] == 0;
    }
    chain.add(ok ? 1.0 : 0.0, {static_cast<double>(k)});
  }
  out.add("snf.random", chain.finish());
}

// ---------------------------------------------------------------------------
// Pipeline

struct PipelineStage {
  std::string id;
  std::string status;  ///< "pass", "fail" or "assumed, out of scope"
  int nodes = 0;
  std::string detail;
};

namespace suite_detail {

inline bool all_pass(const std::vector<Check>& checks, std::size_t from) {
  for (std::size_t i = from; i < checks.size(); ++i) {
    if (!checks[i].report.pass) return false;
  }
  return true;
}

}  // namespace suite_detail

/// Chains the constructions used along the isotopy: model splitting, nodal
/// profiles at every curve, line-arrangement bookkeeping, the (assumed)
/// isotopy to a complex arrangement, orthogonalization at every node, node
/// smoothings, and the Moser chart. Stops at the first failing stage.
inline void run_pipeline(const json& p, std::uint64_t seed, suite_detail::Checks& out, json& notes) {
  using namespace suite_detail;
  const std::string s = "pipeline";
  const int d = p.at("d").get<int>();
  const double eps = p.at("eps").get<double>();
  const double corner = p.at("corner_radius").get<double>();
  const int nphi = p.at("phi_samples").get<int>();
  const int nmoser = p.at("moser_points").get<int>();
  require(d >= 2 && d <= 8, s, "d must lie in [2, 8]");
  require(eps > 0.0 && eps < 0.5 && corner > 0.0 && nphi >= 1 && nmoser >= 1, s, "eps in (0, 0.5), corner_radius > 0");

  std::vector<PipelineStage> stages;
  std::vector<Check> collected;
  auto run_stage = [&](const std::string& id, int nodes, const std::function<void(Checks&)>& body) {
    Checks local;
    std::string detail;
    try {
      body(local);
    } catch (const std::exception& e) {
      detail = e.what();
      local.add(id + ".error", single(std::string("stage raised: ") + e.what(), 0.0, Predicate::near(1.0), 0.0));
    }
    const std::size_t from = collected.size();
    for (Check& c : local.take()) collected.push_back({id + "/" + c.id, std::move(c.report)});
    const bool ok = all_pass(collected, from);
    stages.push_back({id, ok ? "pass" : "fail", nodes, detail});
    return ok;
  };

  const ModelSplitting model = build_model_splitting(d);
  const int k = static_cast<int>(model.multicurve.curves.size());
  bool ok = run_stage("splitting", 0, [&](Checks& c) {
    const SplittingCertificate cert = verify_splitting(cut_along(model.surface, model.multicurve), d);
    c.add("certificate", single("splitting certificate passes", cert.pass ? 1.0 : 0.0, Predicate::near(1.0), 0.0));
    c.add("genus", single("genus - (d-1)(d-2)/2", model.surface.genus() - static_cast<double>(splitting_counts(d).genus),
                          Predicate::near(0.0), 0.0));
  });
  if (ok) {
    ok = run_stage("nodalize", k, [&](Checks& c) {
      const ProfileCurve nod = nodalized_profile(eps, corner);
      for (int i = 0; i < k; ++i) {
        c.add("node[" + std::to_string(i) + "].density",
              grid_verify(orbit_surface(nod), "Sigma' density", density_quantity(), {40, 40}, Predicate::positive(), 0.0));
      }
    });
  }
  if (ok) {
    ok = run_stage("arrangement", k, [&](Checks& c) {
      std::vector<Incidence> inc;
      int point = 0;
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) inc.push_back({i, j, point++});
      }
      c.add("generic", single("arrangement is generic", arrangement_generic(inc, d) ? 1.0 : 0.0, Predicate::near(1.0), 0.0));
      const std::vector<int> deg = deduce_component_degrees(d);
      const bool lines = static_cast<int>(deg.size()) == d && std::all_of(deg.begin(), deg.end(), [](int x) { return x == 1; });
      c.add("degrees", single("every component has degree 1", lines ? 1.0 : 0.0, Predicate::near(1.0), 0.0));
    });
  }
  if (ok) stages.push_back({"isotopy_to_complex_arrangement", "assumed, out of scope", k,
                            "pseudoholomorphic isotopy of symplectic line arrangements is not certified"});
  if (ok) {
    ok = run_stage("orthogonalize", k, [&](Checks& c) {
      for (int i = 0; i < k; ++i) {
        SplitMix64 rng = stream(seed, static_cast<std::uint64_t>(i));
        const PlaneFamily fam = random_family(rng);
        const Cutoff cut = build_cutoff(eps, eta_margin(fam));
        ReportBuilder pos("phi density / r", std::to_string(nphi) + " samples", Predicate::positive(), 0.0);
        ReportBuilder orth("max |omega(T phi, (d/dx1, d/dy1))| for s = 1, r <= eps", "64 samples", Predicate::at_most(0.0), 1e-12);
        for (int j = 0; j < nphi; ++j) {
          SplitMix64 r2 = stream(seed ^ 0x77ULL, static_cast<std::uint64_t>(i) * 1000003ULL + static_cast<std::uint64_t>(j));
          const double t = r2.uniform(), sv = r2.uniform(), th = r2.uniform(0.0, two_pi);
          const double r = cut.delta() * 1.2 * (1.0 - r2.uniform());
          pos.add(phi_density(fam, cut, t, sv, r, th) / r, {t, sv, r, th});
          if (j < 64) {
            const ParamPatch patch = phi_patch(fam, cut, t, 1.0, cut.delta());
            orth.add(pairing_max(patch.frame(cut.eps() * (1.0 - r2.uniform()), th), Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0)), {t, th});
          }
        }
        c.add("node[" + std::to_string(i) + "].positivity", pos.finish());
        c.add("node[" + std::to_string(i) + "].orthogonal", orth.finish());
      }
    });
  }
  if (ok) {
    ok = run_stage("smoothing", k, [&](Checks& c) {
      const double se = 0.01;
      const GammaCurve straight = default_gamma();
      const GammaCurve core = default_gamma({std::sqrt(se), 0.3, 0.6, 1.0});
      for (int i = 0; i < k; ++i) {
        SplitMix64 rng = stream(seed ^ 0x5300ULL, static_cast<std::uint64_t>(i));
        const double a = rng.uniform(-0.5, 0.5), b = rng.uniform(-0.5, 0.5);
        c.add("node[" + std::to_string(i) + "].straight_density",
              grid_verify(gamma_smoothing(straight), "gamma smoothing density", density_quantity(), {40, 40}, Predicate::positive(), 0.0));
        const ParamPatch rot = rotated_smoothing(a, b, core, se);
        const Interval iv = *core.core();
        ReportBuilder res("|(z1 - (a+bi) z2) z2 - eps| on the core", "40x40", Predicate::at_most(0.0), 1e-10);
        for (int u = 0; u < 40; ++u) {
          for (int v = 0; v < 40; ++v) {
            const double th = two_pi * u / 39, sv = iv.at(v / 39.0);
            res.add(algebraic_residual(rot.coords(th, sv), cplx(a, b), se), {th, sv});
          }
        }
        c.add("node[" + std::to_string(i) + "].rotated_residual", res.finish());
      }
    });
  }
  if (ok) {
    ok = run_stage("moser_chart", k, [&](Checks& c) {
      const MoserFlow flow(1.0);
      for (int i = 0; i < k; ++i) {
        std::vector<Vec4> pts;
        ReportBuilder idr("|i_{V_t} omega_t + mu|", std::to_string(nmoser) + " points", Predicate::at_most(0.0), 1e-8);
        for (int j = 0; j < nmoser; ++j) {
          SplitMix64 rng = stream(seed ^ 0x3053ULL, static_cast<std::uint64_t>(i) * 1000ULL + static_cast<std::uint64_t>(j));
          pts.push_back(random_ball_point(rng, 0.8));
          const double t = rng.uniform();
          idr.add(moser::identity_residual(t, pts.back() * 2.5), {t});
        }
        c.add("node[" + std::to_string(i) + "].moser_identity", idr.finish());
        c.add("node[" + std::to_string(i) + "].pullback",
              verify_pullback(local_map(flow), moser::omega_K_field(), moser::omega_D_field(), pts, 1e-5, 1e-4));
      }
    });
  }
  for (Check& c : collected) out.add(std::move(c.id), std::move(c.report));
  json st = json::array();
  for (const PipelineStage& ps : stages) {
    st.push_back({{"id", ps.id}, {"status", ps.status}, {"nodes", ps.nodes}, {"detail", ps.detail}});
    if (ps.status == "fail") notes["aborted_at"] = ps.id;
  }
  notes["stages"] = st;
  notes["nodes_processed"] = k;
}

inline const std::map<std::string, SuiteSpec>& suite_registry() {
  static const std::map<std::string, SuiteSpec> registry = {
      {"model1",
       {json{{"eps", {0.001, 0.01, 0.1}},
             {"grid", 200},
             {"c", 1.0},
             {"tol", 1e-12},
             {"circle_samples", 360},
             {"tau", {0.0, 0.5, 0.7, 0.9}},
             {"deform_eps", 0.1},
             {"corner_radius", 0.01},
             {"profile_samples", 10000},
             {"winding_samples", 720}},
        false, run_model1}},
      {"model2",
       {json{{"grid", 200},
             {"tol", 1e-12},
             {"endpoint_tol", 1e-10},
             {"eps_prime", 0.1},
             {"blend_inner", 0.3},
             {"blend_outer", 0.6},
             {"radius", 1.0},
             {"chart_eps", {0.001, 0.01, 0.1}},
             {"chart_samples", 1000},
             {"disk_samples", 1000},
             {"lagrangian_tol", 1e-12},
             {"boundary_tol", 1e-10}},
        false, run_model2}},
      {"model3",
       {json{{"pairs", 20},
             {"eps", 0.01},
             {"grid", 60},
             {"residual_tol", 1e-10},
             {"density_a", 0.3},
             {"density_b", -0.2},
             {"halving", {0.02, 0.01, 0.005, 0.0025}},
             {"c1_grid", 40},
             {"blend_inner", 0.3},
             {"blend_outer", 0.6},
             {"radius", 1.0}},
        true, run_model3}},
      {"orth",
       {json{{"samples", 100000}, {"families", 20}, {"eps", 0.1}, {"tol", 1e-10}, {"orth_tol", 1e-12}, {"complex_tol", 1e-12}},
        true, run_orth}},
      {"moser",
       {json{{"radial_points", 10000},
             {"identity_points", 1000},
             {"flow_points", 100},
             {"pullback_points", 100},
             {"radius_identity", 2.0},
             {"radius_flow", 0.8},
             {"radius_half", 2.0},
             {"h", 1e-5},
             {"radial_tol", 1e-10},
             {"identity_tol", 1e-8},
             {"collinear_tol", 1e-10},
             {"oracle_tol", 1e-8},
             {"pullback_tol", 1e-4},
             {"halving_tol", 1e-8},
             {"dc_scale_tol", 1e-12}},
        true, run_moser}},
      {"splitting", {json{{"d", 4}, {"nodes", 0}, {"random_multicurves", 100}, {"d_range", {2, 8}}}, true, run_splitting}},
      {"homology", {json{{"d_max", 8}, {"snf_trials", 200}, {"snf_size", 5}, {"entry_bound", 9}}, true, run_homology}},
      {"pipeline",
       {json{{"d", 2}, {"eps", 0.1}, {"corner_radius", 0.01}, {"phi_samples", 2000}, {"moser_points", 10}}, true, run_pipeline}},
  };
  return registry;
}

inline std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, spec] : suite_registry()) names.push_back(name);
  return names;
}

inline json environment_stamp() {
  return {{"compiler", __VERSION__}, {"cplusplus", static_cast<long>(__cplusplus)}, {"library", "symplab 1.0.0"}};
}

inline json check_to_json(const Check& c) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json witness = json::array();
  for (double w : c.report.witness) witness.push_back(num(w));
  return {{"id", c.id},         {"quantity", c.report.quantity}, {"grid", c.report.grid},    {"predicate", c.report.predicate},
          {"min", num(c.report.min)}, {"max", num(c.report.max)},     {"witness", witness},      {"tol", c.report.tol},
          {"samples", c.report.samples}, {"pass", c.report.pass}};
}

inline json result_to_json(const SuiteResult& r) {
  json checks = json::array();
  for (const Check& c : r.checks) checks.push_back(check_to_json(c));
  return {{"suite", r.suite},
          {"params", r.params},
          {"seed", r.seed ? json(*r.seed) : json(nullptr)},
          {"checks", checks},
          {"notes", r.notes},
          {"pass", r.pass},
          {"wall_ms", r.wall_ms},
          {"environment", environment_stamp()}};
}

/// The report with the timing field removed, for byte comparisons between runs.
inline json comparable(json report) {
  report.erase("wall_ms");
  return report;
}

inline SuiteResult run_suite(const SuiteConfig& config) {
  const auto& registry = suite_registry();
  auto it = registry.find(config.suite);
  if (it == registry.end()) throw SuiteError("unknown suite '" + config.suite + "'");
  const SuiteSpec& spec = it->second;
  if (spec.randomized && !config.seed) throw SuiteError(config.suite + ": a seed is required for this randomized suite");

  SuiteResult r;
  r.suite = config.suite;
  r.params = suite_detail::merge_params(config.suite, spec.defaults, config.params);
  r.seed = config.seed;
  const auto start = std::chrono::steady_clock::now();
  suite_detail::Checks checks;
  try {
    spec.run(r.params, config.seed.value_or(0), checks, r.notes);
  } catch (const SuiteError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw SuiteError(config.suite + ": bad parameter value: " + e.what());
  }
  r.checks = checks.take();
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  r.pass = !r.checks.empty() && std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.report.pass; });

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    svg::write_file((std::filesystem::path(config.out_dir) / (config.suite + ".json")).string(), result_to_json(r).dump(2) + "\n");
  }
  return r;
}

inline SuiteResult pipeline_check(int d, std::uint64_t seed = 1, const std::string& out_dir = "") {
  return run_suite({"pipeline", json{{"d", d}}, seed, out_dir});
}

// ---------------------------------------------------------------------------
// Figures

/// Writes the slice, deformation, gamma and density-heatmap figures as SVG with
/// CSV point data alongside. Returns the written file names.
inline std::vector<std::string> emit_figures(const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw std::runtime_error("emit_figures: cannot create directory " + out_dir);
  std::vector<std::string> written;
  auto save = [&](const std::string& stem, const svg::Plot& plot) {
    for (auto [ext, body] : {std::pair{".svg", plot.render()}, std::pair{".csv", plot.csv()}}) {
      const std::string path = (fs::path(out_dir) / (stem + ext)).string();
      svg::write_file(path, body);
      written.push_back(path);
    }
  };
  const double eps = 0.3;  // exaggerated for legibility

  {
    svg::Plot plot("(q1, p2)-slice: Sigma^ml, D^ml and its push-offs", "q1", "p2", -1.2, 1.4, -1.2, 1.2);
    plot.add({"Sigma^ml (q1 = 1)", "#d95f02", {{1.0, -1.1}, {1.0, 1.1}}});
    plot.add({"D^ml (p2 = 0)", "#1b9e77", {{-1.0, 0.0}, {1.0, 0.0}}});
    plot.add({"D-^ml (p2 = eps q1)", "#7570b3", {{-1.0, -eps}, {1.0, eps}}});
    plot.add({"D+^ml (p2 = -eps q1)", "#e7298a", {{-1.0, eps}, {1.0, -eps}}});
    save("fig2_slice", plot);
  }
  {
    svg::Plot plot("Profiles deforming Sigma^ml toward the nodal slice", "q1 = a(s)", "p2 = b(s)", -0.1, 1.2, -1.6, 1.6);
    const char* colors[] = {"#d95f02", "#e6ab02", "#66a61e"};
    int i = 0;
    for (double tau : {0.0, 0.5, 0.9}) {
      plot.add({"tau = " + svg::fmt(tau), colors[i++], profile_polyline(deformation_family(tau, eps, 1.5), 401)});
    }
    plot.add({"nodal slice", "#444444", nodal_slice_polyline(eps, 1.5), true});
    save("fig3_deformation", plot);
  }
  {
    svg::Plot plot("gamma(s) in the real (x1, x2)-plane", "x1", "x2", -0.05, 1.1, -0.05, 1.1);
    const GammaCurve g = default_gamma();
    std::vector<Vec2> pts;
    for (int i = 0; i <= 400; ++i) {
      const GammaSample q = g(i / 400.0);
      pts.emplace_back(q.g1, q.g2);
    }
    plot.add({"gamma", "#1b9e77", pts});
    std::vector<Vec2> hyper;
    for (int i = 0; i <= 200; ++i) {
      const double x = 0.0101 + 0.99 * i / 200.0;
      hyper.emplace_back(x, 0.01 / x);
    }
    plot.add({"x1 x2 = eps'^2", "#999999", hyper, true});
    save("fig4_gamma", plot);
  }
  {
    const PlaneFamily fam = PlaneFamily::constant({0.5, 0.0, 0.0, -1.0});  // ad - bc = -1/2
    const Cutoff cut = build_cutoff(0.1, eta_margin(fam));
    const double rmax = 1.1 * cut.delta();
    svg::Plot plot("phi density / r over (r, s), ad - bc = -1/2", "r", "s", 0.0, rmax, 0.0, 1.0);
    std::vector<std::array<double, 3>> cells;
    const int n = 60;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double r = rmax * (i + 0.5) / n, s = (j + 0.5) / n;
        cells.push_back({r, s, phi_density_closed_form(fam, cut, 0.0, s, r) / r});
      }
    }
    plot.heatmap(std::move(cells), rmax / n, 1.0 / n);
    save("lemma_density_heatmap", plot);
  }
  return written;
}

}  // namespace symplab

#pragma once

// Planar curve data that generates the model surfaces under circle actions:
// (q1, p2)-profiles (a(s), b(s)) for the cotangent model and
// gamma(s) = (gamma1, gamma2) curves in the real (x1, x2)-plane for the node model.

#include "symplab/geometry.hpp"
#include "symplab/smooth.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace symplab {

using json = nlohmann::json;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x, double slack = 1e-12) const { return x >= lo - slack && x <= hi + slack; }
  double at(double fraction) const { return lo + fraction * (hi - lo); }
};

namespace detail {

/// Piecewise cubic Hermite interpolation of several channels from values and derivatives.
class HermiteTable {
 public:
  /// rows: [s, v_0..v_{n-1}, d_0..d_{n-1}] with strictly increasing s.
  HermiteTable(std::vector<std::vector<double>> rows, int channels)
      : rows_(std::move(rows)), channels_(channels) {
    if (rows_.size() < 2) throw std::invalid_argument("sampled curve: need at least two samples");
    for (const auto& r : rows_) {
      if (static_cast<int>(r.size()) != 1 + 2 * channels_) {
        throw std::invalid_argument("sampled curve: wrong number of columns");
      }
      for (double x : r) {
        if (!std::isfinite(x)) throw std::invalid_argument("sampled curve: non-finite entry");
      }
    }
    for (std::size_t i = 1; i < rows_.size(); ++i) {
      if (!(rows_[i][0] > rows_[i - 1][0])) {
        throw std::invalid_argument("sampled curve: parameters must be strictly increasing");
      }
    }
  }

  Interval domain() const { return {rows_.front()[0], rows_.back()[0]}; }

  /// Value and derivative of channel c at s.
  std::pair<double, double> eval(int c, double s) const {
    auto it = std::upper_bound(rows_.begin(), rows_.end(), s,
                               [](double x, const std::vector<double>& r) { return x < r[0]; });
    std::size_t i = it == rows_.begin() ? 0 : static_cast<std::size_t>(it - rows_.begin()) - 1;
    i = std::min(i, rows_.size() - 2);
    const auto& r0 = rows_[i];
    const auto& r1 = rows_[i + 1];
    const double h = r1[0] - r0[0];
    const double x = (s - r0[0]) / h;
    const double y0 = r0[1 + c], y1 = r1[1 + c];
    const double m0 = r0[1 + channels_ + c] * h, m1 = r1[1 + channels_ + c] * h;
    const double x2 = x * x, x3 = x2 * x;
    const double value = (2 * x3 - 3 * x2 + 1) * y0 + (x3 - 2 * x2 + x) * m0 + (-2 * x3 + 3 * x2) * y1 +
                         (x3 - x2) * m1;
    const double dvalue = ((6 * x2 - 6 * x) * y0 + (3 * x2 - 4 * x + 1) * m0 + (-6 * x2 + 6 * x) * y1 +
                           (3 * x2 - 2 * x) * m1) /
                          h;
    return {value, dvalue};
  }

  /// Largest mismatch between stated derivatives and centered differences of the values,
  /// relative to the local derivative scale.
  double derivative_mismatch() const {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < rows_.size(); ++i) {
      const double ds = rows_[i + 1][0] - rows_[i - 1][0];
      for (int c = 0; c < channels_; ++c) {
        const double fd = (rows_[i + 1][1 + c] - rows_[i - 1][1 + c]) / ds;
        const double stated = rows_[i][1 + channels_ + c];
        worst = std::max(worst, std::abs(fd - stated) / (1.0 + std::abs(stated)));
      }
    }
    return worst;
  }

  const std::vector<std::vector<double>>& rows() const { return rows_; }

 private:
  std::vector<std::vector<double>> rows_;
  int channels_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// (q1, p2) profiles

struct ProfileSample {
  double s = 0.0, a = 0.0, b = 0.0, da = 0.0, db = 0.0;
};

/// Curve q1 = a(s), p2 = b(s) with derivatives. spec() holds the JSON form
/// that recreates the curve.
class ProfileCurve {
 public:
  using Evaluator = std::function<ProfileSample(double)>;

  ProfileCurve(Interval domain, Evaluator eval, json spec)
      : domain_(domain), eval_(std::move(eval)), spec_(std::move(spec)) {}

  const Interval& domain() const { return domain_; }
  const json& spec() const { return spec_; }

  ProfileSample operator()(double s) const {
    if (!domain_.contains(s)) throw DomainError("ProfileCurve: parameter outside profile domain");
    return eval_(s);
  }
  /// Evaluation without the domain check (for centered differences at the ends).
  ProfileSample extended(double s) const { return eval_(s); }

 private:
  Interval domain_;
  Evaluator eval_;
  json spec_;
};

inline json closed_form_spec(const std::string& name, json params) {
  return json{{"kind", "closed_form"}, {"name", name}, {"params", std::move(params)}};
}

/// a = 1, b = s on [-c, c]: the slice of the model symplectic annulus.
inline ProfileCurve sigma_ml_profile(double c = 1.0) {
  if (!(c > 0.0)) throw std::invalid_argument("sigma_ml_profile: c must be positive");
  return ProfileCurve({-c, c}, [](double s) { return ProfileSample{s, 1.0, s, 0.0, 1.0}; },
                      closed_form_spec("sigma_ml", {{"c", c}}));
}

/// a(s), b(s) polynomials with coefficients in increasing degree.
inline ProfileCurve polynomial_profile(std::vector<double> a, std::vector<double> b, Interval domain) {
  if (a.empty() || b.empty()) throw std::invalid_argument("polynomial_profile: empty coefficient list");
  auto horner = [](const std::vector<double>& c, double s) {
    double v = 0.0, dv = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      dv = dv * s + v;
      v = v * s + *it;
    }
    return std::pair{v, dv};
  };
  json spec = closed_form_spec("polynomial", {{"a", a}, {"b", b}, {"s0", domain.lo}, {"s1", domain.hi}});
  return ProfileCurve(domain,
                      [a = std::move(a), b = std::move(b), horner](double s) {
                        auto [av, da] = horner(a, s);
                        auto [bv, db] = horner(b, s);
                        return ProfileSample{s, av, bv, da, db};
                      },
                      std::move(spec));
}

/// Sampled profile from rows [s, a, b, a', b'] with cubic Hermite interpolation.
/// Rejects derivative columns that disagree with centered differences by more than fd_tol.
inline ProfileCurve sampled_profile(const std::vector<std::array<double, 5>>& samples, double fd_tol = 5e-2) {
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& r : samples) rows.push_back({r[0], r[1], r[2], r[3], r[4]});
  auto table = std::make_shared<detail::HermiteTable>(std::move(rows), 2);
  if (table->derivative_mismatch() > fd_tol) {
    throw std::invalid_argument("sampled_profile: derivative columns inconsistent with sampled values");
  }
  json spec{{"samples", samples}};
  return ProfileCurve(table->domain(),
                      [table](double s) {
                        auto [a, da] = table->eval(0, s);
                        auto [b, db] = table->eval(1, s);
                        return ProfileSample{s, a, b, da, db};
                      },
                      std::move(spec));
}

/// Symplectic density of the orbit surface, a'b + b'a.
inline double profile_density(const ProfileSample& p) { return p.da * p.b + p.db * p.a; }

/// Checks a > 0, b' > 0, a' <= 0 where b <= 0, a' >= 0 where b >= 0 at n samples.
/// The reported quantity is the density a'b + b'a; pass requires all four conditions.
inline VerificationReport profile_admissible(const ProfileCurve& profile, int n_samples, double tol = 1e-12) {
  if (n_samples < 2) throw std::invalid_argument("profile_admissible: need at least 2 samples");
  ReportBuilder builder("profile density a'b+b'a (admissibility table)", std::to_string(n_samples) + " samples",
                        Predicate::positive(), tol);
  const Interval& d = profile.domain();
  for (int i = 0; i < n_samples; ++i) {
    const double s = d.at(static_cast<double>(i) / (n_samples - 1));
    const ProfileSample p = profile(s);
    const bool ok = p.a > tol && p.db > tol && (p.b > 0.0 || p.da <= tol) && (p.b < 0.0 || p.da >= -tol);
    builder.add(profile_density(p), {s}, ok);
  }
  return builder.finish();
}

/// Slice of the nodal surface: the two push-off lines p2 = -eps q1 (below) and
/// p2 = eps q1 (above) joined to q1 = 1 outside |p2| <= eps; parametrized by p2.
inline Vec2 nodal_slice_point(double s, double eps) { return {std::min(std::abs(s) / eps, 1.0), s}; }

/// Family of admissible profiles interpolating a = 1, b = s (tau = 0) towards the
/// nodal slice (tau -> 1). b = s throughout; a = 1 - tau (1 - m(s)) where m is a
/// smoothed min(|s|/eps, 1) whose smoothing width shrinks like (1 - tau).
inline ProfileCurve deformation_family(double tau, double eps, double c = 2.0) {
  if (!(tau >= 0.0 && tau < 1.0)) throw std::invalid_argument("deformation_family: tau must lie in [0, 1)");
  if (!(eps > 0.0)) throw std::invalid_argument("deformation_family: eps must be positive");
  if (!(c > eps)) throw std::invalid_argument("deformation_family: c must exceed eps");
  const double width = 0.25 * (1.0 - tau) * eps;  // smoothing of |s| at the origin
  const double kappa = width / eps;                // smoothing of min(y, 1) at y = 1
  auto smin = [kappa](double y) { return 0.5 * (y + 1.0 - std::sqrt((y - 1.0) * (y - 1.0) + kappa * kappa)); };
  auto dsmin = [kappa](double y) { return 0.5 * (1.0 - (y - 1.0) / std::sqrt((y - 1.0) * (y - 1.0) + kappa * kappa)); };
  const double m0 = smin(0.0);
  return ProfileCurve(
      {-c, c},
      [=](double s) {
        const double root = std::sqrt(s * s + width * width);
        const double y = (root - width) / eps;
        const double dy = s / root / eps;
        const double m = (smin(y) - m0) / (1.0 - m0);
        const double dm = dsmin(y) * dy / (1.0 - m0);
        return ProfileSample{s, 1.0 - tau * (1.0 - m), s, tau * dm, 1.0};
      },
      closed_form_spec("deformation", {{"tau", tau}, {"eps", eps}, {"c", c}}));
}

/// Profile of the nodal surface: q1 = 1 for |s| >= eps + T, circular fillets of
/// radius corner_radius at (1, -eps) and (1, eps), and the two push-off slice
/// segments meeting at the origin (the node). T is the fillet tangent length.
/// On the inner part the parameter is a rescaled arc length.
inline ProfileCurve nodalized_profile(double eps, double corner_radius, double c = 2.0) {
  if (!(eps > 0.0)) throw std::invalid_argument("nodalized_profile: eps must be positive");
  if (!(corner_radius > 0.0)) throw std::invalid_argument("nodalized_profile: corner_radius must be positive");
  const double n = std::sqrt(1.0 + eps * eps);
  const double turn = std::numbers::pi / 2 - std::atan(eps);
  const double tangent = corner_radius * std::tan(turn / 2);
  const double s1 = eps + tangent;
  if (tangent >= 0.5 * n || s1 >= c) {
    throw std::invalid_argument("nodalized_profile: corner_radius too large to fit the fillet");
  }
  const double arc = corner_radius * turn;
  const double seg = n - tangent;
  const double total = 2.0 * (arc + seg);
  const double speed = total / (2.0 * s1);  // d(arc length)/ds on the inner part

  const Vec2 lower_center{1.0 - corner_radius, -s1};
  const Vec2 u_lower{-1.0 / n, eps / n};      // towards the origin along the lower line
  const Vec2 lower_end = Vec2{1.0, -eps} + tangent * u_lower;
  const Vec2 u_upper{1.0 / n, eps / n};       // away from the origin along the upper line
  const Vec2 upper_start = Vec2{1.0, eps} - tangent * u_upper;
  const Vec2 upper_center = upper_start + corner_radius * Vec2{-eps / n, 1.0 / n};
  const double upper_angle0 = std::atan(eps) - std::numbers::pi / 2;

  return ProfileCurve(
      {-c, c},
      [=](double s) -> ProfileSample {
        if (s <= -s1 || s >= s1) return {s, 1.0, s, 0.0, 1.0};
        double sigma = (s + s1) * speed;
        Vec2 p, dp;
        if (sigma < arc) {
          const double alpha = sigma / corner_radius;
          p = lower_center + corner_radius * Vec2{std::cos(alpha), std::sin(alpha)};
          dp = Vec2{-std::sin(alpha), std::cos(alpha)};
        } else if ((sigma -= arc) < seg) {
          p = lower_end + sigma * u_lower;
          dp = u_lower;
        } else if ((sigma -= seg) < seg) {
          p = sigma * u_upper;
          dp = u_upper;
        } else {
          sigma -= seg;
          const double alpha = upper_angle0 + std::min(sigma, arc) / corner_radius;
          p = upper_center + corner_radius * Vec2{std::cos(alpha), std::sin(alpha)};
          dp = Vec2{-std::sin(alpha), std::cos(alpha)};
        }
        return {s, p.x(), p.y(), dp.x() * speed, dp.y() * speed};
      },
      closed_form_spec("nodalized", {{"eps", eps}, {"corner_radius", corner_radius}, {"c", c}}));
}

/// Parameter subinterval of nodalized_profile(eps, corner_radius, c) covering the
/// lower or upper fillet arc.
inline Interval nodalized_fillet_interval(double eps, double corner_radius, bool upper) {
  const double n = std::sqrt(1.0 + eps * eps);
  const double turn = std::numbers::pi / 2 - std::atan(eps);
  const double tangent = corner_radius * std::tan(turn / 2);
  const double s1 = eps + tangent;
  const double arc = corner_radius * turn;
  const double total = 2.0 * (arc + n - tangent);
  const double ds = arc * 2.0 * s1 / total;
  return upper ? Interval{s1 - ds, s1} : Interval{-s1, -s1 + ds};
}

/// Polyline of (a, b) values at n equally spaced parameters.
inline std::vector<Vec2> profile_polyline(const ProfileCurve& profile, int n) {
  std::vector<Vec2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const ProfileSample p = profile(profile.domain().at(static_cast<double>(i) / (n - 1)));
    out.emplace_back(p.a, p.b);
  }
  return out;
}

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

inline double point_polyline_distance(const Vec2& p, const std::vector<Vec2>& line) {
  if (line.size() == 1) return (p - line[0]).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) best = std::min(best, point_segment_distance(p, line[i], line[i + 1]));
  return best;
}

/// sup over points of `from` (vertices and segment interiors) of the distance to
/// `to`. The distance is 1-Lipschitz along a segment, so a piece [u, v] with end
/// values du, dv can exceed max(du, dv) by at most (|v - u| - |du - dv|) / 2;
/// pieces are bisected until that bound is below `tol`.
inline double directed_hausdorff(const std::vector<Vec2>& from, const std::vector<Vec2>& to, double tol = 1e-12) {
  if (from.empty() || to.empty()) throw std::invalid_argument("directed_hausdorff: empty polyline");
  struct Piece {
    Vec2 u, v;
    double du, dv;
  };
  std::vector<Piece> stack;
  double worst = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) worst = std::max(worst, point_polyline_distance(from[i], to));
  for (std::size_t i = 0; i + 1 < from.size(); ++i) {
    stack.push_back({from[i], from[i + 1], point_polyline_distance(from[i], to), point_polyline_distance(from[i + 1], to)});
  }
  while (!stack.empty()) {
    const Piece p = stack.back();
    stack.pop_back();
    const double bound = 0.5 * (p.du + p.dv + (p.v - p.u).norm());
    if (bound <= worst + tol) continue;
    const Vec2 m = 0.5 * (p.u + p.v);
    const double dm = point_polyline_distance(m, to);
    worst = std::max(worst, dm);
    stack.push_back({p.u, m, p.du, dm});
    stack.push_back({m, p.v, dm, p.dv});
  }
  return worst;
}

/// Symmetric Hausdorff distance between two polylines as point sets.
inline double hausdorff_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

/// Polyline of the nodal slice over p2 in [-c, c] (vertices at the corners).
inline std::vector<Vec2> nodal_slice_polyline(double eps, double c) {
  return {{1.0, -c}, {1.0, -eps}, {0.0, 0.0}, {1.0, eps}, {1.0, c}};
}

// ---------------------------------------------------------------------------
// gamma curves for the node smoothing

struct GammaSample {
  double s = 0.0, g1 = 0.0, g2 = 0.0, dg1 = 0.0, dg2 = 0.0;
};

/// gamma(s) = (gamma1, gamma2), s in [0, 1], from the positive x1-axis to the
/// positive x2-axis. core(), when present, is the parameter range where
/// gamma1 * gamma2 is constant.
class GammaCurve {
 public:
  using Evaluator = std::function<GammaSample(double)>;

  GammaCurve(Evaluator eval, std::optional<Interval> core, json spec)
      : eval_(std::move(eval)), core_(core), spec_(std::move(spec)) {}

  GammaSample operator()(double s) const {
    if (!Interval{0.0, 1.0}.contains(s)) throw DomainError("GammaCurve: parameter outside [0, 1]");
    return eval_(s);
  }
  const std::optional<Interval>& core() const { return core_; }
  const json& spec() const { return spec_; }

  /// Radius of the annular ring in the z1-disk (s = 0) and the z2-disk (s = 1).
  double eps1() const { return eval_(0.0).g1; }
  double eps2() const { return eval_(1.0).g2; }

 private:
  Evaluator eval_;
  std::optional<Interval> core_;
  json spec_;
};

struct GammaParams {
  double eps_prime = 0.1;    ///< gamma passes through (eps', eps'); gamma1 gamma2 = eps'^2 on the core
  double blend_inner = 0.3;  ///< radius where the hyperbola starts blending to an axis
  double blend_outer = 0.6;  ///< radius beyond which gamma lies on an axis
  double radius = 1.0;       ///< endpoint radii eps1 = eps2
};

/// Hyperbola gamma1 gamma2 = eps'^2 blended to the axes by C-infinity steps.
/// With t in [-T, T]: gamma1 = eps' e^{-t} beta(-t), gamma2 = eps' e^{t} beta(t),
/// beta stepping from 0 at t = -t_out to 1 at t = -t_in.
inline GammaCurve default_gamma(const GammaParams& p = {}) {
  if (!(p.eps_prime > 0.0 && p.eps_prime < p.blend_inner && p.blend_inner < p.blend_outer &&
        p.blend_outer < p.radius)) {
    throw std::invalid_argument("default_gamma: need 0 < eps' < blend_inner < blend_outer < radius");
  }
  const double big_t = std::log(p.radius / p.eps_prime);
  const double t_in = std::log(p.blend_inner / p.eps_prime);
  const double t_out = std::log(p.blend_outer / p.eps_prime);
  const double width = t_out - t_in;
  const double e = p.eps_prime;
  auto beta = [=](double t) { return smooth_transition((t + t_out) / width); };
  auto dbeta = [=](double t) { return smooth_transition_derivative((t + t_out) / width) / width; };
  const Interval core{(big_t - t_in) / (2 * big_t), (big_t + t_in) / (2 * big_t)};
  json spec = closed_form_spec("default_gamma", {{"eps_prime", p.eps_prime},
                                                 {"blend_inner", p.blend_inner},
                                                 {"blend_outer", p.blend_outer},
                                                 {"radius", p.radius}});
  return GammaCurve(
      [=](double s) {
        const double t = -big_t + 2 * big_t * s;
        const double g2 = e * std::exp(t) * beta(t);
        const double dg2 = e * std::exp(t) * (beta(t) + dbeta(t));
        const double g1 = e * std::exp(-t) * beta(-t);
        const double dg1 = -e * std::exp(-t) * (beta(-t) + dbeta(-t));
        return GammaSample{s, g1, g2, 2 * big_t * dg1, 2 * big_t * dg2};
      },
      core, std::move(spec));
}

/// Sampled gamma from rows [s, gamma1, gamma2, gamma1', gamma2'] covering [0, 1].
inline GammaCurve sampled_gamma(const std::vector<std::array<double, 5>>& samples, double fd_tol = 5e-2) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : samples) rows.push_back({r[0], r[1], r[2], r[3], r[4]});
  auto table = std::make_shared<detail::HermiteTable>(std::move(rows), 2);
  const Interval d = table->domain();
  if (std::abs(d.lo) > 1e-12 || std::abs(d.hi - 1.0) > 1e-12) {
    throw std::invalid_argument("sampled_gamma: samples must cover s in [0, 1]");
  }
  if (table->derivative_mismatch() > fd_tol) {
    throw std::invalid_argument("sampled_gamma: derivative columns inconsistent with sampled values");
  }
  return GammaCurve(
      [table](double s) {
        auto [g1, dg1] = table->eval(0, s);
        auto [g2, dg2] = table->eval(1, s);
        return GammaSample{s, g1, g2, dg1, dg2};
      },
      std::nullopt, json{{"samples", samples}});
}

inline double gamma_density(const GammaSample& g) { return g.g2 * g.dg2 - g.g1 * g.dg1; }

/// Sign pattern gamma1, gamma2, gamma2' >= 0, gamma1' <= 0, positive density
/// gamma2 gamma2' - gamma1 gamma1', and endpoints on the positive axes.
inline VerificationReport gamma_admissible(const GammaCurve& gamma, int n_samples = 2001,
                                           double tol = 1e-12) {
  ReportBuilder builder("gamma density g2 g2' - g1 g1' (sign pattern)", std::to_string(n_samples) + " samples",
                        Predicate::positive(), tol);
  for (int i = 0; i < n_samples; ++i) {
    const double s = static_cast<double>(i) / (n_samples - 1);
    const GammaSample g = gamma(s);
    bool ok = g.g1 >= -tol && g.g2 >= -tol && g.dg2 >= -tol && g.dg1 <= tol && gamma_density(g) > tol;
    if (i == 0) ok = ok && std::abs(g.g2) <= tol && g.g1 > tol;
    if (i == n_samples - 1) ok = ok && std::abs(g.g1) <= tol && g.g2 > tol;
    builder.add(gamma_density(g), {s}, ok);
  }
  return builder.finish();
}

}  // namespace symplab

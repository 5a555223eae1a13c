#pragma once

// The two analytic engines: the omega-orthogonalization of a node by a radial
// cutoff, and the Moser flow taking the Kaehler form of the Fubini-Study
// potential to the Darboux form near a point.

#include "symplab/geometry.hpp"
#include "symplab/ode.hpp"
#include "symplab/smooth.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace symplab {

// ---------------------------------------------------------------------------
// Plane families and the orthogonalizing isotopy

/// Coefficients (a, b, c, d) of the plane spanned by
/// u = d/dx2 + a d/dx1 + b d/dy1 and v = d/dy2 + c d/dx1 + d d/dy1.
struct PlaneCoeffs {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  double det() const { return a * d - b * c; }
  bool symplectic() const { return 1.0 + det() > 0.0; }
};

/// t in [0, 1] -> plane coefficients.
class PlaneFamily {
 public:
  using Evaluator = std::function<PlaneCoeffs(double)>;

  explicit PlaneFamily(Evaluator eval) : eval_(std::move(eval)) {}

  static PlaneFamily constant(PlaneCoeffs p) {
    return PlaneFamily([p](double) { return p; });
  }

  /// Rows [t, a, b, c, d] with increasing t covering [0, 1]; linear interpolation.
  static PlaneFamily sampled(std::vector<std::array<double, 5>> rows) {
    if (rows.size() < 2) throw std::invalid_argument("PlaneFamily::sampled: need at least two rows");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (!(rows[i][0] > rows[i - 1][0])) throw std::invalid_argument("PlaneFamily::sampled: t must increase");
    }
    if (rows.front()[0] > 0.0 || rows.back()[0] < 1.0) {
      throw std::invalid_argument("PlaneFamily::sampled: rows must cover [0, 1]");
    }
    return PlaneFamily([rows = std::move(rows)](double t) {
      std::size_t i = 0;
      while (i + 2 < rows.size() && rows[i + 1][0] <= t) ++i;
      const auto& r0 = rows[i];
      const auto& r1 = rows[i + 1];
      const double w = (t - r0[0]) / (r1[0] - r0[0]);
      auto lerp = [w](double x, double y) { return x + w * (y - x); };
      return PlaneCoeffs{lerp(r0[1], r1[1]), lerp(r0[2], r1[2]), lerp(r0[3], r1[3]), lerp(r0[4], r1[4])};
    });
  }

  PlaneCoeffs operator()(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("PlaneFamily: t outside [0, 1]");
    return eval_(t);
  }

 private:
  Evaluator eval_;
};

/// Half of the supremum of eta with 1 + (1 + eta) min_t(ad - bc) > 0, capped.
/// Throws when the family is not symplectic at a sample.
inline double eta_margin(const PlaneFamily& family, int n_samples = 1001, double cap = 1.0) {
  if (n_samples < 2) throw std::invalid_argument("eta_margin: need at least 2 samples");
  double lowest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const PlaneCoeffs p = family(static_cast<double>(i) / (n_samples - 1));
    if (!p.symplectic()) {
      throw std::domain_error("eta_margin: plane family violates 1 + ad - bc > 0 at t = " +
                              std::to_string(static_cast<double>(i) / (n_samples - 1)));
    }
    lowest = std::min(lowest, p.det());
  }
  if (lowest >= 0.0) return cap;
  const double sup = -1.0 / lowest - 1.0;
  return std::min(0.5 * sup, cap);
}

/// Radial cutoff mu with mu = 1 on [0, eps], mu = 0 on [delta, inf), mu' <= 0 and
/// (r mu)' >= -eta. Built on rho = r mu: rho' descends from 1 to -k eta by a
/// quintic step, stays there, then returns to 0 so that rho(delta) = 0.
class Cutoff {
 public:
  static constexpr double slope_fraction = 0.75;  ///< k: plateau slope is -k eta

  double eps() const { return eps_; }
  double delta() const { return delta_; }
  double eta() const { return eta_; }

  double rho(double r) const {
    if (r <= eps_) return r;
    if (r >= delta_) return 0.0;
    const double k = slope_fraction * eta_;
    if (r <= eps_ + w_) {
      const double x = (r - eps_) / w_;
      return eps_ + w_ * (x - (1.0 + k) * smoothstep5_integral(x));
    }
    const double r1 = eps_ + w_ * (1.0 - 0.5 * (1.0 + k));
    if (r <= delta_ - w_) return r1 - k * (r - eps_ - w_);
    const double r2 = r1 - k * (delta_ - eps_ - 2.0 * w_);
    const double x = (r - delta_ + w_) / w_;
    return std::max(0.0, r2 - k * w_ * (x - smoothstep5_integral(x)));
  }

  double drho(double r) const {
    if (r <= eps_) return 1.0;
    if (r >= delta_) return 0.0;
    const double k = slope_fraction * eta_;
    if (r <= eps_ + w_) return 1.0 - (1.0 + k) * smoothstep5((r - eps_) / w_);
    if (r <= delta_ - w_) return -k;
    return -k * (1.0 - smoothstep5((r - delta_ + w_) / w_));
  }

  double mu(double r) const {
    if (r <= eps_) return 1.0;
    return rho(r) / r;
  }
  double dmu(double r) const {
    if (r <= eps_ || r >= delta_) return 0.0;
    return (drho(r) * r - rho(r)) / (r * r);
  }

  friend Cutoff build_cutoff(double eps, double eta);

 private:
  Cutoff(double eps, double delta, double eta, double w) : eps_(eps), delta_(delta), eta_(eta), w_(w) {}
  double eps_, delta_, eta_, w_;
};

struct CutoffConstructionError : std::logic_error {
  using std::logic_error::logic_error;
};

/// delta = eps (1 + 2/eta). The transition width w balances the integral of
/// rho' over [eps, delta] to -eps. Invariants are sampled at 1e4 points before returning.
inline Cutoff build_cutoff(double eps, double eta) {
  if (!(eps > 0.0)) throw std::invalid_argument("build_cutoff: eps must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("build_cutoff: eta must be positive");
  const double k = Cutoff::slope_fraction;
  const double delta = eps * (1.0 + 2.0 / eta);
  const double w = 2.0 * eps * (2.0 * k - 1.0) / (1.0 + 2.0 * k * eta);
  Cutoff cut(eps, delta, eta, w);

  const int n = 10000;
  const double tol = 1e-12;
  if (std::abs(cut.rho(delta - 1e-15 * delta)) > 1e-9 * eps) {
    throw CutoffConstructionError("build_cutoff: rho does not close at delta");
  }
  for (int i = 0; i <= n; ++i) {
    const double r = 1.2 * delta * i / n;
    const double m = cut.mu(r), dm = cut.dmu(r);
    const bool ok = std::isfinite(m) && std::isfinite(dm) && m >= -tol && m <= 1.0 + tol && dm <= tol &&
                    m + r * dm >= -eta - tol && (r > eps || m == 1.0) && (r < delta || m == 0.0);
    if (!ok) throw CutoffConstructionError("build_cutoff: invariant violated at r = " + std::to_string(r));
  }
  return cut;
}

inline PlaneCoeffs scaled(const PlaneCoeffs& p, double factor) {
  return {factor * p.a, factor * p.b, factor * p.c, factor * p.d};
}

/// phi_s^t(r, theta) = r cos(theta) u_{s,r} + r sin(theta) v_{s,r}, with the
/// d/dx1, d/dy1 coefficients of u, v scaled by 1 - s mu(r).
inline Vec4 phi_point(const PlaneFamily& family, const Cutoff& cutoff, double t, double s, double r, double theta) {
  const PlaneCoeffs p = family(t);
  const double len = r - s * cutoff.rho(r);
  const double co = std::cos(theta), si = std::sin(theta);
  return {len * (p.a * co + p.c * si), len * (p.b * co + p.d * si), r * co, r * si};
}

/// The isotoped plane as a patch over (r, theta) in [0, r_max] x [0, 2 pi].
inline ParamPatch phi_patch(const PlaneFamily& family, const Cutoff& cutoff, double t, double s, double r_max) {
  const PlaneCoeffs p = family(t);
  return ParamPatch(
      Chart::complex, {0.0, r_max, 0.0, 2.0 * std::numbers::pi, {}},
      [p, cutoff, s](double r, double th) {
        const double len = r - s * cutoff.rho(r);
        const double co = std::cos(th), si = std::sin(th);
        return Vec4(len * (p.a * co + p.c * si), len * (p.b * co + p.d * si), r * co, r * si);
      },
      [p, cutoff, s](double r, double th) {
        const double len = r - s * cutoff.rho(r);
        const double dlen = 1.0 - s * cutoff.drho(r);
        const double co = std::cos(th), si = std::sin(th);
        return std::pair{Vec4(dlen * (p.a * co + p.c * si), dlen * (p.b * co + p.d * si), co, si),
                         Vec4(len * (-p.a * si + p.c * co), len * (-p.b * si + p.d * co), -r * si, r * co)};
      });
}

/// omega(d phi/dr, d phi/dtheta) evaluated on the patch frame.
inline double phi_density(const PlaneFamily& family, const Cutoff& cutoff, double t, double s, double r, double theta) {
  const ParamPatch patch = phi_patch(family, cutoff, t, s, std::max(r, cutoff.delta()));
  return symplectic_density(patch, r, theta);
}

/// r [(1 - s mu)(1 - s(mu + r mu'))(ad - bc) + 1].
inline double phi_density_closed_form(const PlaneFamily& family, const Cutoff& cutoff, double t, double s,
                                      double r) {
  const PlaneCoeffs p = family(t);
  const double m = cutoff.mu(r), dm = cutoff.dmu(r);
  return r * ((1.0 - s * m) * (1.0 - s * (m + r * dm)) * p.det() + 1.0);
}

/// |J u - v| for the plane (a, b, c, d); zero iff the plane is a complex line.
inline double complex_residual(const PlaneCoeffs& p) {
  const Vec4 u(p.a, p.b, 1.0, 0.0), v(p.c, p.d, 0.0, 1.0);
  return (complex_structure() * u - v).norm();
}

inline bool is_complex_plane(const PlaneCoeffs& p, double tol = 1e-12) {
  return std::abs(p.d - p.a) <= tol && std::abs(p.c + p.b) <= tol;
}

/// The core plane at each s has coefficients scaled by 1 - s; checks that it stays complex.
inline VerificationReport complex_preservation_check(const PlaneCoeffs& p, const std::vector<double>& s_values,
                                                     double tol = 1e-12) {
  if (!is_complex_plane(p, tol)) throw std::invalid_argument("complex_preservation_check: plane is not complex");
  ReportBuilder builder("max(|d_s - a_s|, |c_s + b_s|)", std::to_string(s_values.size()) + " values of s",
                        Predicate::at_most(0.0), tol);
  for (double s : s_values) {
    const PlaneCoeffs q = scaled(p, 1.0 - s);
    builder.add(std::max(std::abs(q.d - q.a), std::abs(q.c + q.b)), {s});
  }
  return builder.finish();
}

// ---------------------------------------------------------------------------
// Kaehler vs Darboux forms and the Moser flow

namespace moser {

inline double potential(const Vec4& z) { return z.squaredNorm(); }

/// lambda = -d^C |z|^2.
inline Vec4 lambda(const Vec4& z, DcConvention conv = {}) {
  return -conv.scale * (complex_structure().transpose() * (2.0 * z));
}

/// omega_D = d lambda (the standard form under the default convention).
inline Mat4 omega_D(DcConvention conv = {}) { return -4.0 * conv.scale * complex_structure(); }

/// omega_K = -d d^C log(1 + |z|^2).
inline Mat4 omega_K(const Vec4& z, DcConvention conv = {}) {
  const double f = potential(z);
  const Vec4 l = lambda(z, conv);
  const Vec4 df = 2.0 * z;
  return omega_D(conv) / (1.0 + f) - (df * l.transpose() - l * df.transpose()) / ((1.0 + f) * (1.0 + f));
}

inline Mat4 omega_t(double t, const Vec4& z, DcConvention conv = {}) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("omega_t: t outside [0, 1]");
  return t * omega_K(z, conv) + (1.0 - t) * omega_D(conv);
}

inline TwoFormField omega_t_field(double t, DcConvention conv = {}) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("omega_t: t outside [0, 1]");
  return TwoFormField(Chart::complex, [t, conv](const Vec4& z) { return omega_t(t, z, conv); });
}
inline TwoFormField omega_K_field(DcConvention conv = {}) { return omega_t_field(1.0, conv); }
inline TwoFormField omega_D_field(DcConvention conv = {}) { return omega_t_field(0.0, conv); }

/// mu = -d^C(log(1 + |z|^2) - |z|^2) = -(f / (1 + f)) lambda.
inline Vec4 mu(const Vec4& z, DcConvention conv = {}) {
  const double f = potential(z);
  return -(f / (1.0 + f)) * lambda(z, conv);
}

/// mu computed directly from the potential by d^C (used as an independent route).
inline Vec4 mu_from_potential(const Vec4& z, DcConvention conv = {}, double h = 1e-5) {
  ScalarField g{[](const Vec4& x) { return std::log1p(x.squaredNorm()) - x.squaredNorm(); }, {}};
  return -dC(g, ChartPoint(z, Chart::complex), conv, h);
}

inline OneFormField lambda_field(DcConvention conv = {}) {
  return OneFormField(Chart::complex, [conv](const Vec4& z) { return lambda(z, conv); });
}
inline OneFormField mu_field(DcConvention conv = {}) {
  return OneFormField(Chart::complex, [conv](const Vec4& z) { return mu(z, conv); });
}

/// Half-radial field V0 = (1/2) sum x d/dx + y d/dy.
inline Vec4 v0(const Vec4& z) { return 0.5 * z; }

/// f_t(z) = |z|^2 (1 + |z|^2) / (t + (1 - t)(1 + |z|^2)^2).
inline double ft(double t, const Vec4& z) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("moser_ft: t outside [0, 1]");
  const double f = potential(z);
  const double den = t + (1.0 - t) * (1.0 + f) * (1.0 + f);
  if (!(den > 0.0)) throw std::domain_error("moser_ft: non-positive denominator");
  return f * (1.0 + f) / den;
}

/// f_t as the least-squares solution of f i_{V0} omega_t = -mu; the d^C scale cancels.
inline double ft_from_forms(double t, const Vec4& z, DcConvention conv = {}) {
  const Vec4 w = (v0(z).transpose() * omega_t(t, z, conv)).transpose();
  const double n2 = w.squaredNorm();
  if (n2 == 0.0) return 0.0;
  return -mu(z, conv).dot(w) / n2;
}

/// |i_{V_t} omega_t + mu| with V_t = f_t V0.
inline double identity_residual(double t, const Vec4& z, DcConvention conv = {}) {
  const Vec4 w = (ft(t, z) * v0(z).transpose() * omega_t(t, z, conv)).transpose();
  return (w + mu(z, conv)).norm();
}

struct RadialResiduals {
  double lambda_v0 = 0.0;  ///< |lambda(V0)|
  double df_v0 = 0.0;      ///< |df(V0) - f|
  double iv0_dlambda = 0.0;  ///< |i_{V0} d lambda - lambda|, d lambda by finite differences
};

inline RadialResiduals radial_residuals(const Vec4& z, DcConvention conv = {}, double h = 1e-4) {
  RadialResiduals r;
  const Vec4 l = lambda(z, conv);
  r.lambda_v0 = std::abs(l.dot(v0(z)));
  r.df_v0 = std::abs((2.0 * z).dot(v0(z)) - potential(z));
  const Mat4 dl = fd_exterior_derivative(lambda_field(conv), ChartPoint(z, Chart::complex), h);
  r.iv0_dlambda = ((v0(z).transpose() * dl).transpose() - l).cwiseAbs().maxCoeff();
  return r;
}

/// dz/dt = f_t(z) V0(z).
inline Vec4 velocity(double t, const Vec4& z) { return ft(t, z) * v0(z); }

}  // namespace moser

/// Moser flow Psi_t, integrated from 0 to t_end with adaptive Dormand-Prince
/// stepping and validated by replaying on the step-halved mesh.
class MoserFlow {
 public:
  struct Result {
    Vec4 point;
    std::vector<double> mesh;
    double halving_residual = 0.0;
  };

  MoserFlow(double t_end, ode::Settings settings = {}, double halving_tol = 1e-8)
      : t_end_(t_end), settings_(settings), halving_tol_(halving_tol) {
    if (!(t_end >= 0.0 && t_end <= 1.0)) throw std::invalid_argument("MoserFlow: t_end outside [0, 1]");
  }

  double t_end() const { return t_end_; }

  Result solve(const Vec4& z) const {
    auto rhs = [](double t, const Vec4& y) { return moser::velocity(std::min(t, 1.0), y); };
    const auto sol = ode::integrate_adaptive(rhs, 0.0, t_end_, z, settings_);
    const std::vector<double> fine = ode::halved_mesh(sol.mesh);
    const Vec4 replay = ode::integrate_on_mesh(rhs, std::span<const double>(fine), z);
    Result out{sol.y, sol.mesh, (replay - sol.y).norm() / (1.0 + sol.y.norm())};
    if (!(out.halving_residual <= halving_tol_)) {
      throw ode::StepSizeUnderflow("MoserFlow: step-halving disagreement " + std::to_string(out.halving_residual));
    }
    return out;
  }

  Vec4 operator()(const Vec4& z) const { return solve(z).point; }

  /// The flow map for points near z, integrated on the frozen mesh of z so that
  /// it is a smooth function of the initial point (for difference quotients).
  std::function<Vec4(const Vec4&)> frozen_near(const Vec4& z) const {
    auto mesh = std::make_shared<std::vector<double>>(solve(z).mesh);
    return [mesh](const Vec4& y) {
      auto rhs = [](double t, const Vec4& x) { return moser::velocity(std::min(t, 1.0), x); };
      return ode::integrate_on_mesh(rhs, std::span<const double>(*mesh), y);
    };
  }

 private:
  double t_end_;
  ode::Settings settings_;
  double halving_tol_;
};

inline ChartPoint moser_flow(const ChartPoint& point, double t_end, double tol = 1e-8) {
  require_same_chart(Chart::complex, point.chart, "moser_flow");
  return ChartPoint(MoserFlow(t_end, {}, tol)(point.coords), Chart::complex);
}

/// Largest |(x, y) cross products| between z and its image, normalized; zero iff collinear.
inline double collinearity_residual(const Vec4& z, const Vec4& w) {
  const double nz = z.norm(), nw = w.norm();
  if (nz == 0.0 || nw == 0.0) return nw;
  const Vec4 a = z / nz, b = w / nw;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) worst = std::max(worst, std::abs(a(i) * b(j) - a(j) * b(i)));
  }
  return worst + std::max(0.0, -a.dot(b));
}

/// Richardson-extrapolated central-difference Jacobian of map at x. Each
/// quotient divides by the actually represented step.
inline Mat4 richardson_jacobian(const std::function<Vec4(const Vec4&)>& map, const Vec4& x, double h) {
  auto central = [&](double step) {
    Mat4 jac;
    for (int i = 0; i < 4; ++i) {
      Vec4 xp = x, xm = x;
      xp(i) += step;
      xm(i) -= step;
      jac.col(i) = (map(xp) - map(xm)) / (xp(i) - xm(i));
    }
    return jac;
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

/// Map factory: given a sample point, returns the map to differentiate near it.
using LocalMap = std::function<std::function<Vec4(const Vec4&)>(const Vec4&)>;

inline LocalMap local_map(const MoserFlow& flow) {
  return [flow](const Vec4& x) { return flow.frozen_near(x); };
}

/// Max entrywise |J^T source(F(x)) J - target(x)| over the samples.
inline VerificationReport verify_pullback(const LocalMap& map, const TwoFormField& source,
                                          const TwoFormField& target, const std::vector<Vec4>& samples,
                                          double h = 1e-5, double tol = 1e-4) {
  ReportBuilder builder("max |F^*source - target| entry", std::to_string(samples.size()) + " points",
                        Predicate::at_most(0.0), tol);
  for (const Vec4& x : samples) {
    double residual = std::numeric_limits<double>::quiet_NaN();
    try {
      const auto f = map(x);
      const Mat4 jac = richardson_jacobian(f, x, h);
      const Mat4 pulled = jac.transpose() * source.at(f(x)) * jac;
      residual = (pulled - target.at(x)).cwiseAbs().maxCoeff();
    } catch (const std::exception&) {
      // reported as a non-finite violation at this sample
    }
    builder.add(residual, {x(0), x(1), x(2), x(3)});
  }
  return builder.finish();
}

}  // namespace symplab

#pragma once

// Local surface and disk models: the Lagrangian disk with its push-offs, the
// circle-action orbit surfaces, the node smoothings by gamma curves (straight
// and rotated), the linear change of charts between the two node models, the
// Lagrangian disk inside a smoothing, and the framing computation.

#include "symplab/geometry.hpp"
#include "symplab/profiles.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace symplab {

struct ConstraintViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProjectionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Cotangent-chart models

/// A(theta, s) = (cos theta, -s sin theta, sin theta, s cos theta), s in [-c, c].
inline ParamPatch sigma_ml(double c = 1.0) {
  if (!(c > 0.0)) throw std::invalid_argument("sigma_ml: c must be positive");
  return ParamPatch(
      Chart::cotangent, {0.0, two_pi, -c, c, {}},
      [](double th, double s) {
        return Vec4(std::cos(th), -s * std::sin(th), std::sin(th), s * std::cos(th));
      },
      [](double th, double s) {
        const double co = std::cos(th), si = std::sin(th);
        return std::pair{Vec4(-si, -s * co, co, -s * si), Vec4(0.0, -si, 0.0, co)};
      });
}

/// The Lagrangian disk D^ml: unit disk in the zero section {p = 0}, over (q1, q2).
inline ParamPatch lagrangian_zero_disk() {
  return ParamPatch(
      Chart::cotangent, {-1.0, 1.0, -1.0, 1.0, [](double u, double v) { return u * u + v * v <= 1.0 + 1e-12; }},
      [](double u, double v) { return Vec4(u, 0.0, v, 0.0); },
      [](double, double) { return std::pair{Vec4(1, 0, 0, 0), Vec4(0, 0, 1, 0)}; });
}

struct PushoffDisk {
  int sign = 1;
  double eps = 0.0;
  ParamPatch patch;

  /// The displayed tangent basis (d/dq1, d/dq2) of the disk.
  std::pair<Vec4, Vec4> basis() const {
    const double e = sign * eps;
    return {Vec4(1.0, 0.0, 0.0, -e), Vec4(0.0, e, 1.0, 0.0)};
  }
};

/// D-: (q1, -eps q2, q2, eps q1) and D+: (q1, eps q2, q2, -eps q1) over q1^2 + q2^2 <= 1.
inline PushoffDisk pushoff_disk(int sign, double eps) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("pushoff_disk: sign must be +1 or -1");
  if (!(eps > 0.0)) throw std::invalid_argument("pushoff_disk: eps must be positive");
  const double e = sign * eps;
  ParamPatch patch(
      Chart::cotangent, {-1.0, 1.0, -1.0, 1.0, [](double u, double v) { return u * u + v * v <= 1.0 + 1e-12; }},
      [e](double q1, double q2) { return Vec4(q1, e * q2, q2, -e * q1); },
      [e](double, double) { return std::pair{Vec4(1.0, 0.0, 0.0, -e), Vec4(0.0, e, 1.0, 0.0)}; });
  return {sign, eps, std::move(patch)};
}

/// C(theta, s) = (a cos theta, -b sin theta, a sin theta, b cos theta).
/// flip_theta gives the theta -> -theta reparametrization (same image, reversed orientation).
inline ParamPatch orbit_surface(const ProfileCurve& profile, bool flip_theta = false) {
  const double sg = flip_theta ? -1.0 : 1.0;
  const Interval d = profile.domain();
  return ParamPatch(
      Chart::cotangent, {0.0, two_pi, d.lo, d.hi, {}},
      [profile, sg](double th, double s) {
        const ProfileSample p = profile(s);
        const double co = std::cos(sg * th), si = std::sin(sg * th);
        return Vec4(p.a * co, -p.b * si, p.a * si, p.b * co);
      },
      [profile, sg](double th, double s) {
        const ProfileSample p = profile(s);
        const double co = std::cos(sg * th), si = std::sin(sg * th);
        const Vec4 dth = sg * Vec4(-p.a * si, -p.b * co, p.a * co, -p.b * si);
        const Vec4 ds(p.da * co, -p.db * si, p.da * si, p.db * co);
        return std::pair{dth, ds};
      });
}

// ---------------------------------------------------------------------------
// Closest points and membership

struct ClosestPoint {
  double u = 0.0, v = 0.0;
  Vec4 point = Vec4::Zero();
  double distance = 0.0;
  int iterations = 0;
};

/// Damped Gauss-Newton closest-point solve on a patch from the best node of a
/// coarse grid. Stops when the parameter step falls below tol or after max_iter.
inline ClosestPoint closest_point(const ParamPatch& patch, const Vec4& target, int coarse = 41,
                                  double tol = 1e-12, int max_iter = 50) {
  const ParamDomain& d = patch.domain();
  ClosestPoint best;
  best.distance = std::numeric_limits<double>::infinity();
  for (int i = 0; i < coarse; ++i) {
    for (int j = 0; j < coarse; ++j) {
      const double u = d.u0 + (d.u1 - d.u0) * i / (coarse - 1);
      const double v = d.v0 + (d.v1 - d.v0) * j / (coarse - 1);
      if (!d.contains(u, v)) continue;
      const double dist = (patch.coords(u, v) - target).norm();
      if (dist < best.distance) best = {u, v, patch.coords(u, v), dist, 0};
    }
  }
  if (!std::isfinite(best.distance)) throw ProjectionFailure("closest_point: empty patch domain");

  for (int it = 0; it < max_iter; ++it) {
    best.iterations = it + 1;
    const Frame f = patch.frame(best.u, best.v);
    Eigen::Matrix<double, 4, 2> jac;
    jac << f.first().vec, f.second().vec;
    const Vec4 r = best.point - target;
    Eigen::Matrix2d normal = jac.transpose() * jac;
    normal.diagonal().array() += 1e-14 * (1.0 + normal.trace());
    const Vec2 step = -normal.ldlt().solve(jac.transpose() * r);
    double scale = 1.0;
    bool moved = false;
    for (int k = 0; k < 40; ++k, scale *= 0.5) {
      const double u = std::clamp(best.u + scale * step.x(), d.u0, d.u1);
      const double v = std::clamp(best.v + scale * step.y(), d.v0, d.v1);
      if (!d.contains(u, v)) continue;
      const Vec4 p = patch.coords(u, v);
      const double dist = (p - target).norm();
      if (dist <= best.distance) {
        moved = std::abs(u - best.u) + std::abs(v - best.v) > tol;
        best.u = u;
        best.v = v;
        best.point = p;
        best.distance = dist;
        break;
      }
    }
    if (!moved) break;
  }
  return best;
}

/// Circles along which Sigma^ml meets D- (sign -1, at s = eps) and D+ (sign +1, at s = -eps).
struct IntersectionCircle {
  int sign = -1;
  double eps = 0.0;

  Vec4 at(double theta) const {
    const double e = -sign * eps;
    return {std::cos(theta), -e * std::sin(theta), std::sin(theta), e * std::cos(theta)};
  }
  double sigma_parameter() const { return -sign * eps; }
};

inline std::array<IntersectionCircle, 2> intersection_circles(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("intersection_circles: eps must be positive");
  return {IntersectionCircle{-1, eps}, IntersectionCircle{1, eps}};
}

/// Largest distance from n circle samples to Sigma^ml and to the matching push-off disk.
inline VerificationReport circle_membership(const IntersectionCircle& circle, int n = 360, double tol = 1e-12) {
  const ParamPatch sigma = sigma_ml(std::max(1.0, 2.0 * circle.eps));
  const PushoffDisk disk = pushoff_disk(circle.sign, circle.eps);
  ReportBuilder builder(std::string("distance of the ") + (circle.sign < 0 ? "D-" : "D+") +
                            " circle to both surfaces",
                        std::to_string(n) + " samples", Predicate::at_most(0.0), tol);
  for (int i = 0; i < n; ++i) {
    const double th = two_pi * i / n;
    const Vec4 x = circle.at(th);
    const double d = std::max(closest_point(sigma, x).distance, closest_point(disk.patch, x).distance);
    builder.add(d, {th});
  }
  return builder.finish();
}

// ---------------------------------------------------------------------------
// Complex-chart node smoothings

/// A(theta, s) = (gamma1 e^{i theta}, gamma2 e^{-i theta}).
inline ParamPatch gamma_smoothing(const GammaCurve& gamma) {
  return ParamPatch(
      Chart::complex, {0.0, two_pi, 0.0, 1.0, {}},
      [gamma](double th, double s) {
        const GammaSample g = gamma(s);
        const double co = std::cos(th), si = std::sin(th);
        return Vec4(g.g1 * co, g.g1 * si, g.g2 * co, -g.g2 * si);
      },
      [gamma](double th, double s) {
        const GammaSample g = gamma(s);
        const double co = std::cos(th), si = std::sin(th);
        return std::pair{Vec4(-g.g1 * si, g.g1 * co, -g.g2 * si, -g.g2 * co),
                         Vec4(g.dg1 * co, g.dg1 * si, g.dg2 * co, -g.dg2 * si)};
      });
}

inline Vec4 from_complex(cplx z1, cplx z2) { return {z1.real(), z1.imag(), z2.real(), z2.imag()}; }
inline std::pair<cplx, cplx> to_complex(const Vec4& x) { return {cplx(x(0), x(1)), cplx(x(2), x(3))}; }

/// |(z1 - c z2) z2 - eps| at a complex-chart point.
inline double algebraic_residual(const Vec4& x, cplx c, double eps) {
  auto [z1, z2] = to_complex(x);
  return std::abs((z1 - c * z2) * z2 - eps);
}

/// A_{a+bi}(theta, s): z2 = gamma2 e^{-i theta}, z1 = (a+bi) z2 + gamma1 e^{i theta}.
/// Requires gamma1 gamma2 = eps on the core interval of gamma.
inline ParamPatch rotated_smoothing(double a, double b, const GammaCurve& gamma, double eps,
                                    double core_tol = 1e-12, int core_samples = 201) {
  if (!gamma.core()) throw ConstraintViolation("rotated_smoothing: gamma has no core interval");
  const Interval core = *gamma.core();
  for (int i = 0; i < core_samples; ++i) {
    const GammaSample g = gamma(core.at(static_cast<double>(i) / (core_samples - 1)));
    if (!(std::abs(g.g1 * g.g2 - eps) < core_tol)) {
      throw ConstraintViolation("rotated_smoothing: gamma1*gamma2 differs from eps on the core");
    }
  }
  const cplx c(a, b);
  return ParamPatch(
      Chart::complex, {0.0, two_pi, 0.0, 1.0, {}},
      [gamma, c](double th, double s) {
        const GammaSample g = gamma(s);
        const cplx e = std::polar(1.0, th);
        const cplx z2 = g.g2 * std::conj(e);
        return from_complex(c * z2 + g.g1 * e, z2);
      },
      [gamma, c](double th, double s) {
        const GammaSample g = gamma(s);
        const cplx e = std::polar(1.0, th), i(0.0, 1.0);
        const cplx z2_th = -i * g.g2 * std::conj(e);
        const cplx z2_s = g.dg2 * std::conj(e);
        return std::pair{from_complex(c * z2_th + i * g.g1 * e, z2_th), from_complex(c * z2_s + g.dg1 * e, z2_s)};
      });
}

// ---------------------------------------------------------------------------
// C1 distances

/// Implicit or linear surface with a nearest-point projection returning the
/// foot point and a tangent basis there.
struct SurfaceTarget {
  std::string name;
  std::function<std::pair<Vec4, std::pair<Vec4, Vec4>>(const Vec4&)> project;
};

/// The complex curve {(z1 - c z2) z2 = eps}. Projection alternates a complex
/// Newton solve along the fixed normal conj(grad P) with a normal update,
/// converging to the orthogonal foot point. Throws ProjectionFailure when the
/// point is farther than max_distance or the iteration stalls.
inline SurfaceTarget complex_curve_target(cplx c, double eps, double max_distance = 1.0) {
  auto poly = [c, eps](cplx z1, cplx z2) { return (z1 - c * z2) * z2 - eps; };
  auto grad = [c](cplx z1, cplx z2) { return std::pair{z2, z1 - 2.0 * c * z2}; };
  return {"complex curve (z1-(a+bi)z2)z2=eps",
          [=](const Vec4& x) {
            auto [x1, x2] = to_complex(x);
            cplx y1 = x1, y2 = x2;
            for (int outer = 0; outer < 60; ++outer) {
              auto [g1, g2] = grad(y1, y2);
              const cplx n1 = std::conj(g1), n2 = std::conj(g2);
              if (std::norm(n1) + std::norm(n2) < 1e-300) throw ProjectionFailure("complex_curve_target: singular point");
              // Solve P(x + alpha n) = 0 for complex alpha, starting from the current foot point.
              cplx alpha = std::abs(n1) >= std::abs(n2) ? (y1 - x1) / n1 : (y2 - x2) / n2;
              for (int k = 0; k < 60; ++k) {
                const cplx p1 = x1 + alpha * n1, p2 = x2 + alpha * n2;
                const cplx val = poly(p1, p2);
                auto [h1, h2] = grad(p1, p2);
                const cplx slope = h1 * n1 + h2 * n2;
                if (std::abs(slope) < 1e-300) throw ProjectionFailure("complex_curve_target: Newton slope vanished");
                cplx step = val / slope;
                const double cap = 0.5 * (1.0 + std::abs(alpha));
                if (std::abs(step) > cap) step *= cap / std::abs(step);
                alpha -= step;
                if (std::abs(step) < 1e-16 * (1.0 + std::abs(alpha))) break;
              }
              const cplx ny1 = x1 + alpha * n1, ny2 = x2 + alpha * n2;
              const double change = std::abs(ny1 - y1) + std::abs(ny2 - y2);
              y1 = ny1;
              y2 = ny2;
              if (outer > 0 && change < 1e-15) break;
            }
            if (!(std::abs(poly(y1, y2)) < 1e-10)) throw ProjectionFailure("complex_curve_target: projection did not converge");
            const Vec4 foot = from_complex(y1, y2);
            if (!((foot - x).norm() <= max_distance)) throw ProjectionFailure("complex_curve_target: point too far from curve");
            auto [g1, g2] = grad(y1, y2);
            const cplx t1 = g2, t2 = -g1;  // complex tangent direction
            const cplx i(0.0, 1.0);
            return std::pair{foot, std::pair{from_complex(t1, t2), from_complex(i * t1, i * t2)}};
          }};
}

/// Affine plane through origin spanned by u, v.
inline SurfaceTarget plane_target(const Vec4& origin, const Vec4& u, const Vec4& v, std::string name = "plane") {
  Eigen::Matrix<double, 4, 2> basis;
  basis << u, v;
  const Eigen::Matrix<double, 4, 2> q =
      basis.householderQr().householderQ() * Eigen::Matrix<double, 4, 2>::Identity();
  return {std::move(name), [=](const Vec4& x) {
            const Vec4 foot = origin + q * (q.transpose() * (x - origin));
            return std::pair{foot, std::pair{u, v}};
          }};
}

struct C1Distance {
  double value = 0.0;     ///< sup of point distance + tangent-plane angle
  double position = 0.0;  ///< point distance at the worst node
  double angle = 0.0;     ///< plane angle at the worst node
  std::vector<double> witness;
};

/// sup over the grid of |x - foot(x)| + angle(T_x patch, T_foot target).
inline C1Distance c1_distance(const ParamPatch& patch, const SurfaceTarget& target, GridSpec grid) {
  const ParamDomain& d = patch.domain();
  C1Distance out;
  out.value = -1.0;
  for (int i = 0; i < grid.nu; ++i) {
    const double u = d.u0 + (d.u1 - d.u0) * i / (grid.nu - 1);
    for (int j = 0; j < grid.nv; ++j) {
      const double v = d.v0 + (d.v1 - d.v0) * j / (grid.nv - 1);
      if (!d.contains(u, v)) continue;
      const Frame f = patch.frame(u, v);
      auto [foot, tangent] = target.project(f.base().coords);
      const double pos = (foot - f.base().coords).norm();
      const double ang = plane_angle(f.first().vec, f.second().vec, tangent.first, tangent.second);
      if (pos + ang > out.value) out = {pos + ang, pos, ang, {u, v}};
    }
  }
  return out;
}

/// Same-parameter comparison of two patches over a's domain.
inline C1Distance c1_distance(const ParamPatch& a, const ParamPatch& b, GridSpec grid) {
  require_same_chart(a.chart(), b.chart(), "c1_distance");
  const ParamDomain& d = a.domain();
  C1Distance out;
  out.value = -1.0;
  for (int i = 0; i < grid.nu; ++i) {
    const double u = d.u0 + (d.u1 - d.u0) * i / (grid.nu - 1);
    for (int j = 0; j < grid.nv; ++j) {
      const double v = d.v0 + (d.v1 - d.v0) * j / (grid.nv - 1);
      if (!d.contains(u, v)) continue;
      b.require_in_domain(u, v);
      const Frame fa = a.frame(u, v), fb = b.frame(u, v);
      const double pos = (fa.base().coords - fb.base().coords).norm();
      const double ang = plane_angle(fa.first().vec, fa.second().vec, fb.first().vec, fb.second().vec);
      if (pos + ang > out.value) out = {pos + ang, pos, ang, {u, v}};
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Change of charts between the two node models

/// Linear map x1 = eps q1 + p2, y1 = p1 - eps q2, x2 = p2 - eps q1, y2 = -p1 - eps q2
/// from the cotangent chart to the complex chart. It scales the standard form by 2 eps.
class CoordinateChange {
 public:
  explicit CoordinateChange(double eps) : eps_(eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("CoordinateChange: eps must be positive");
    m_ << eps, 0, 0, 1,  //
        0, 1, -eps, 0,   //
        -eps, 0, 0, 1,   //
        0, -1, -eps, 0;
  }

  double eps() const { return eps_; }
  const Mat4& matrix() const { return m_; }

  ChartPoint operator()(const ChartPoint& p) const {
    require_same_chart(Chart::cotangent, p.chart, "CoordinateChange");
    return ChartPoint(m_ * p.coords, Chart::complex);
  }
  Vec4 apply(const Vec4& x) const { return m_ * x; }

  /// Image of a cotangent-chart patch.
  ParamPatch image(const ParamPatch& patch) const {
    require_same_chart(Chart::cotangent, patch.chart(), "CoordinateChange::image");
    const Mat4 m = m_;
    ParamPatch::Partials partials;
    if (patch.has_analytic_partials()) {
      partials = [patch, m](double u, double v) {
        const Frame f = patch.frame(u, v);
        return std::pair<Vec4, Vec4>{m * f.first().vec, m * f.second().vec};
      };
    }
    return ParamPatch(Chart::complex, patch.domain(), [patch, m](double u, double v) { return Vec4(m * patch.coords(u, v)); },
                      partials, patch.fd_step());
  }

  /// Centered-difference Jacobian at a point.
  Mat4 fd_jacobian(const Vec4& x, double h = 1e-4) const {
    Mat4 jac;
    for (int i = 0; i < 4; ++i) {
      Vec4 xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      jac.col(i) = (apply(xp) - apply(xm)) / (xp(i) - xm(i));
    }
    return jac;
  }

 private:
  double eps_;
  Mat4 m_;
};

struct PullbackConstant {
  double mean = 0.0;
  double variance = 0.0;
  double max_offpattern = 0.0;  ///< largest |J^T Omega J - kappa_x Omega| entry over the samples
  std::size_t samples = 0;
};

/// Measures kappa with J^T Omega J = kappa Omega from FD Jacobians at the given points.
inline PullbackConstant measure_pullback_constant(const CoordinateChange& change, const std::vector<Vec4>& points,
                                                  double h = 1e-4) {
  const Mat4 omega = standard_form_matrix();
  std::vector<double> kappas;
  PullbackConstant out;
  for (const Vec4& x : points) {
    const Mat4 jac = change.fd_jacobian(x, h);
    const Mat4 pull = jac.transpose() * omega * jac;
    const double kappa = 0.5 * (pull(0, 1) + pull(2, 3));
    out.max_offpattern = std::max(out.max_offpattern, (pull - kappa * omega).cwiseAbs().maxCoeff());
    kappas.push_back(kappa);
  }
  out.samples = kappas.size();
  if (kappas.empty()) return out;
  for (double k : kappas) out.mean += k;
  out.mean /= static_cast<double>(kappas.size());
  for (double k : kappas) out.variance += (k - out.mean) * (k - out.mean);
  out.variance /= static_cast<double>(kappas.size());
  return out;
}

/// (a cos theta, b sin theta, -a sin theta, b cos theta): the cotangent annulus
/// in the orientation used by the chart change.
inline Vec4 annulus_point(const ProfileSample& p, double theta) {
  return {p.a * std::cos(theta), p.b * std::sin(theta), -p.a * std::sin(theta), p.b * std::cos(theta)};
}

// ---------------------------------------------------------------------------
// Lagrangian disk in the smoothing and framings

/// {(r cos theta, r sin theta, r cos theta, -r sin theta) | r <= eps'} over (r, theta).
inline ParamPatch lagrangian_disk_in_smoothing(double eps_prime) {
  if (!(eps_prime > 0.0)) throw std::invalid_argument("lagrangian_disk_in_smoothing: eps' must be positive");
  return ParamPatch(
      Chart::complex, {0.0, eps_prime, 0.0, two_pi, {}},
      [](double r, double th) {
        const double co = std::cos(th), si = std::sin(th);
        return Vec4(r * co, r * si, r * co, -r * si);
      },
      [](double r, double th) {
        const double co = std::cos(th), si = std::sin(th);
        return std::pair{Vec4(co, si, co, -si), Vec4(-r * si, r * co, -r * si, -r * co)};
      });
}

/// Parameter where gamma1 = gamma2 (bisection on gamma1 - gamma2, which is decreasing).
inline double gamma_diagonal_parameter(const GammaCurve& gamma, double tol = 1e-15) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const GammaSample g = gamma(mid);
    (g.g1 - g.g2 > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Winding number of a planar loop sampled at n points, by accumulating the
/// principal angle increments. Throws when the loop passes within min_norm of 0.
inline int winding_number(const std::function<Vec2(double)>& loop, int n = 720, double min_norm = 1e-12) {
  if (n < 8) throw std::invalid_argument("winding_number: need at least 8 samples");
  double total = 0.0;
  Vec2 prev = loop(0.0);
  if (!(prev.norm() > min_norm)) throw DegeneracyError("winding_number: loop passes through the origin");
  for (int i = 1; i <= n; ++i) {
    const Vec2 cur = loop(two_pi * i / n);
    if (!(cur.norm() > min_norm)) throw DegeneracyError("winding_number: loop passes through the origin");
    total += std::atan2(prev.x() * cur.y() - prev.y() * cur.x(), prev.dot(cur));
    prev = cur;
  }
  return static_cast<int>(std::lround(total / two_pi));
}

/// Framing of the boundary of a zero-section disk induced by a surface patch
/// (theta, s) that contains it along s = s0: the winding of the fiber components
/// (p1, p2) of d/ds along the loop theta -> patch(theta, s0). The disk is given
/// by its radius; the loop must lie on its boundary circle in the zero section.
inline int normal_winding(const ParamPatch& surface, double s0, double disk_radius = 1.0, int n = 720) {
  require_same_chart(Chart::cotangent, surface.chart(), "normal_winding");
  for (int i = 0; i < n; ++i) {
    const Vec4 x = surface.coords(two_pi * i / n, s0);
    const double off = std::abs(x(1)) + std::abs(x(3)) + std::abs(std::hypot(x(0), x(2)) - disk_radius);
    if (!(off < 1e-9)) throw std::invalid_argument("normal_winding: loop does not lie on the disk boundary");
  }
  return winding_number(
      [&surface, s0](double th) {
        const Vec4 ds = surface.frame(th, s0).second().vec;
        return Vec2(ds(1), ds(3));
      },
      n);
}

/// Synthetic control surface whose normal rotates twice: (cos theta, -s sin 2theta, sin theta, s cos 2theta).
inline ParamPatch double_twist_patch(double c = 1.0) {
  return ParamPatch(
      Chart::cotangent, {0.0, two_pi, -c, c, {}},
      [](double th, double s) {
        return Vec4(std::cos(th), -s * std::sin(2 * th), std::sin(th), s * std::cos(2 * th));
      },
      [](double th, double s) {
        return std::pair{Vec4(-std::sin(th), -2 * s * std::cos(2 * th), std::cos(th), -2 * s * std::sin(2 * th)),
                         Vec4(0.0, -std::sin(2 * th), 0.0, std::cos(2 * th))};
      });
}

}  // namespace symplab

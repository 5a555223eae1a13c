#pragma once

// Coordinate charts, tangent vectors, constant and point-dependent 2-forms,
// finite-difference exterior calculus, parametrized patches and the grid
// verifier that every model check is built on.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symplab {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// The two fixed 4-dimensional charts. Both carry the standard form
/// e0^e1 + e2^e3 in their own coordinate order.
enum class Chart {
  cotangent,  ///< (q1, p1, q2, p2)
  complex,    ///< (x1, y1, x2, y2), z_j = x_j + i y_j
};

inline const char* chart_name(Chart c) {
  return c == Chart::cotangent ? "cotangent" : "complex";
}

struct ChartMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::out_of_range {
  using std::out_of_range::out_of_range;
};
struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChartPoint {
  Vec4 coords = Vec4::Zero();
  Chart chart = Chart::complex;

  ChartPoint() = default;
  ChartPoint(Vec4 c, Chart ch) : coords(std::move(c)), chart(ch) {
    if (!coords.allFinite()) throw std::invalid_argument("ChartPoint: non-finite coordinates");
  }
};

inline void require_same_chart(Chart a, Chart b, const char* where) {
  if (a != b) {
    throw ChartMismatch(std::string(where) + ": mixed " + chart_name(a) + "/" + chart_name(b) +
                        " chart arithmetic");
  }
}

struct Tangent4 {
  ChartPoint base;
  Vec4 vec = Vec4::Zero();
};

/// Ordered pair of tangent vectors at a common base point.
class Frame {
 public:
  Frame(Tangent4 first, Tangent4 second) : first_(std::move(first)), second_(std::move(second)) {
    require_same_chart(first_.base.chart, second_.base.chart, "Frame");
    if (first_.base.coords != second_.base.coords) {
      throw std::invalid_argument("Frame: tangent vectors have different base points");
    }
  }
  Frame(const ChartPoint& base, const Vec4& u, const Vec4& v) : Frame({base, u}, {base, v}) {}

  const Tangent4& first() const { return first_; }
  const Tangent4& second() const { return second_; }
  const ChartPoint& base() const { return first_.base; }

 private:
  Tangent4 first_;
  Tangent4 second_;
};

/// Matrix of e0^e1 + e2^e3, so that omega(v, w) = v^T M w.
inline Mat4 standard_form_matrix() {
  Mat4 m = Mat4::Zero();
  m(0, 1) = 1.0;
  m(1, 0) = -1.0;
  m(2, 3) = 1.0;
  m(3, 2) = -1.0;
  return m;
}

/// Standard complex structure on the complex chart: J d/dx = d/dy, J d/dy = -d/dx.
inline Mat4 complex_structure() {
  Mat4 j = Mat4::Zero();
  j(1, 0) = 1.0;
  j(0, 1) = -1.0;
  j(3, 2) = 1.0;
  j(2, 3) = -1.0;
  return j;
}

/// Pfaffian of an antisymmetric 4x4 matrix; nonzero iff the form is nondegenerate.
inline double pfaffian(const Mat4& m) {
  return m(0, 1) * m(2, 3) - m(0, 2) * m(1, 3) + m(0, 3) * m(1, 2);
}

inline double antisymmetry_defect(const Mat4& m) { return (m + m.transpose()).cwiseAbs().maxCoeff(); }

/// Point-dependent antisymmetric bilinear form on one chart.
class TwoFormField {
 public:
  using Evaluator = std::function<Mat4(const Vec4&)>;

  TwoFormField(Chart chart, Evaluator eval) : chart_(chart), eval_(std::move(eval)) {}

  Chart chart() const { return chart_; }

  Mat4 at(const ChartPoint& p) const {
    require_same_chart(chart_, p.chart, "TwoFormField");
    return eval_(p.coords);
  }
  Mat4 at(const Vec4& coords) const { return eval_(coords); }

 private:
  Chart chart_;
  Evaluator eval_;
};

/// Point-dependent covector field.
class OneFormField {
 public:
  using Evaluator = std::function<Vec4(const Vec4&)>;

  OneFormField(Chart chart, Evaluator eval) : chart_(chart), eval_(std::move(eval)) {}

  Chart chart() const { return chart_; }
  Vec4 at(const ChartPoint& p) const {
    require_same_chart(chart_, p.chart, "OneFormField");
    return eval_(p.coords);
  }
  Vec4 at(const Vec4& coords) const { return eval_(coords); }

 private:
  Chart chart_;
  Evaluator eval_;
};

inline TwoFormField std_form(Chart chart) {
  const Mat4 m = standard_form_matrix();
  return TwoFormField(chart, [m](const Vec4&) { return m; });
}

inline double eval_form(const TwoFormField& form, const ChartPoint& point, const Tangent4& v,
                        const Tangent4& w) {
  require_same_chart(form.chart(), point.chart, "eval_form");
  require_same_chart(point.chart, v.base.chart, "eval_form");
  require_same_chart(point.chart, w.base.chart, "eval_form");
  if (v.base.coords != point.coords || w.base.coords != point.coords) {
    throw std::invalid_argument("eval_form: tangent vectors are not based at the evaluation point");
  }
  return v.vec.dot(form.at(point) * w.vec);
}

inline double eval_form(const TwoFormField& form, const Frame& frame) {
  return eval_form(form, frame.base(), frame.first(), frame.second());
}

/// Smooth scalar potential on a chart, with an optional analytic gradient.
struct ScalarField {
  std::function<double(const Vec4&)> value;
  std::function<Vec4(const Vec4&)> gradient;
};

inline Vec4 fd_gradient(const std::function<double(const Vec4&)>& g, const Vec4& x, double h) {
  Vec4 out;
  for (int i = 0; i < 4; ++i) {
    Vec4 xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    out(i) = (g(xp) - g(xm)) / (xp(i) - xm(i));
  }
  return out;
}

/// Normalization of d^C. The default 1/4 makes dd^C|z|^2 = -omega_std and
/// lambda(V0) = 0, df(V0) = f, i_{V0} d lambda = lambda exact for the
/// half-radial field V0 = (1/2) sum x d/dx + y d/dy.
struct DcConvention {
  double scale = 0.25;
};

/// d^C g = scale * dg o J on the complex chart.
inline Vec4 dC(const ScalarField& potential, const ChartPoint& point, DcConvention conv = {},
               double h = 1e-4) {
  require_same_chart(Chart::complex, point.chart, "dC");
  const Vec4 grad = potential.gradient ? potential.gradient(point.coords)
                                       : fd_gradient(potential.value, point.coords, h);
  return conv.scale * (complex_structure().transpose() * grad);
}

/// Centered-difference exterior derivative of a 1-form:
/// (d alpha)_{ij} = d_i alpha_j - d_j alpha_i.
inline Mat4 fd_exterior_derivative(const OneFormField& one_form, const ChartPoint& point, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_exterior_derivative: step must be positive");
  require_same_chart(one_form.chart(), point.chart, "fd_exterior_derivative");
  Mat4 partial;  // partial(i, j) = d_i alpha_j
  for (int i = 0; i < 4; ++i) {
    Vec4 xp = point.coords, xm = point.coords;
    xp(i) += h;
    xm(i) -= h;
    partial.row(i) = ((one_form.at(xp) - one_form.at(xm)) / (xp(i) - xm(i))).transpose();
  }
  return partial - partial.transpose();
}

/// Closed parameter rectangle, optionally restricted by a membership predicate
/// (used for disks parametrized over a square).
struct ParamDomain {
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
  std::function<bool(double, double)> inside;

  bool contains(double u, double v) const {
    constexpr double slack = 1e-12;
    if (u < u0 - slack || u > u1 + slack || v < v0 - slack || v > v1 + slack) return false;
    return !inside || inside(u, v);
  }
};

/// Smooth map from a parameter rectangle into a chart.
class ParamPatch {
 public:
  using Map = std::function<Vec4(double, double)>;
  using Partials = std::function<std::pair<Vec4, Vec4>(double, double)>;

  ParamPatch(Chart chart, ParamDomain domain, Map map, Partials partials = {}, double fd_step = 1e-4)
      : chart_(chart),
        domain_(std::move(domain)),
        map_(std::move(map)),
        partials_(std::move(partials)),
        fd_step_(fd_step) {}

  Chart chart() const { return chart_; }
  const ParamDomain& domain() const { return domain_; }
  bool has_analytic_partials() const { return static_cast<bool>(partials_); }
  double fd_step() const { return fd_step_; }

  Vec4 coords(double u, double v) const { return map_(u, v); }
  ChartPoint point(double u, double v) const { return ChartPoint(map_(u, v), chart_); }

  /// Tangent frame (d/du, d/dv): analytic when available, else centered differences.
  Frame frame(double u, double v) const {
    if (partials_) {
      auto [pu, pv] = partials_(u, v);
      return Frame(point(u, v), pu, pv);
    }
    return fd_frame(u, v, fd_step_);
  }

  Frame fd_frame(double u, double v, double h) const {
    const double up = u + h, um = u - h, vp = v + h, vm = v - h;
    const Vec4 pu = (map_(up, v) - map_(um, v)) / (up - um);
    const Vec4 pv = (map_(u, vp) - map_(u, vm)) / (vp - vm);
    return Frame(point(u, v), pu, pv);
  }

  void require_in_domain(double u, double v) const {
    if (!domain_.contains(u, v)) {
      throw DomainError("ParamPatch: parameter (" + std::to_string(u) + ", " + std::to_string(v) +
                        ") outside the patch domain");
    }
  }

 private:
  Chart chart_;
  ParamDomain domain_;
  Map map_;
  Partials partials_;
  double fd_step_;
};

/// omega(d/du, d/dv) on the patch; the patch is symplectic at (u, v) iff positive.
inline double symplectic_density(const ParamPatch& patch, double u, double v,
                                 const std::optional<TwoFormField>& form = std::nullopt) {
  patch.require_in_domain(u, v);
  const TwoFormField omega = form ? *form : std_form(patch.chart());
  return eval_form(omega, patch.frame(u, v));
}

/// Sign of det[v1 v2 v3 v4]. Throws DegeneracyError when |det| < tol.
inline int orientation_sign(const Vec4& v1, const Vec4& v2, const Vec4& v3, const Vec4& v4,
                            double tol = 1e-12) {
  Mat4 m;
  m.col(0) = v1;
  m.col(1) = v2;
  m.col(2) = v3;
  m.col(3) = v4;
  const double det = m.determinant();
  if (!(std::abs(det) >= tol)) throw DegeneracyError("orientation_sign: degenerate 4-frame");
  return det > 0 ? 1 : -1;
}

/// True iff every cross pairing omega(a_i, b_j) vanishes within tol.
inline bool omega_orthogonal(const Frame& a, const Frame& b, double tol,
                             const std::optional<TwoFormField>& form = std::nullopt) {
  require_same_chart(a.base().chart, b.base().chart, "omega_orthogonal");
  if (a.base().coords != b.base().coords) {
    throw std::invalid_argument("omega_orthogonal: frames at different base points");
  }
  const TwoFormField omega = form ? *form : std_form(a.base().chart);
  for (const Tangent4* x : {&a.first(), &a.second()}) {
    for (const Tangent4* y : {&b.first(), &b.second()}) {
      if (!(std::abs(eval_form(omega, a.base(), *x, *y)) <= tol)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Verification reports

/// Shortest decimal that round-trips to x.
inline std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Named predicate applied to a sampled quantity with a tolerance.
struct Predicate {
  std::string name;
  std::function<bool(double value, double tol)> holds;

  static Predicate positive() {
    return {"> 0", [](double q, double tol) { return q > tol; }};
  }
  static Predicate at_least(double x) {
    return {">= " + shortest(x), [x](double q, double tol) { return q >= x - tol; }};
  }
  static Predicate at_most(double x) {
    return {"<= " + shortest(x), [x](double q, double tol) { return q <= x + tol; }};
  }
  static Predicate near(double x) {
    return {"== " + shortest(x), [x](double q, double tol) { return std::abs(q - x) <= tol; }};
  }
};

struct VerificationReport {
  std::string quantity;
  std::string grid;  ///< human-readable sampling description, e.g. "100x100"
  std::string predicate;
  double min = std::numeric_limits<double>::quiet_NaN();
  double max = std::numeric_limits<double>::quiet_NaN();
  /// First violating sample when failing, otherwise the arg-min sample.
  std::vector<double> witness;
  double tol = 0.0;
  bool pass = false;
  std::size_t samples = 0;
};

/// Deterministic sequential reduction of sampled values into a report.
/// Samples must be fed in a fixed (lexicographic) order.
class ReportBuilder {
 public:
  ReportBuilder(std::string quantity, std::string grid, Predicate predicate, double tol)
      : predicate_(std::move(predicate)) {
    report_.quantity = std::move(quantity);
    report_.grid = std::move(grid);
    report_.predicate = predicate_.name;
    report_.tol = tol;
  }

  /// Adds a value checked against the predicate.
  void add(double value, std::vector<double> where) { add(value, std::move(where), std::nullopt); }

  /// Adds a value whose verdict is decided by the caller (ok) rather than the predicate.
  void add(double value, std::vector<double> where, std::optional<bool> ok) {
    ++report_.samples;
    const bool finite = std::isfinite(value);
    const bool good = finite && (ok ? *ok : predicate_.holds(value, report_.tol));
    if (finite) {
      if (!have_value_ || value < report_.min) {
        report_.min = value;
        argmin_ = where;
      }
      if (!have_value_ || value > report_.max) report_.max = value;
      have_value_ = true;
    }
    if (!good && !first_violation_) first_violation_ = std::move(where);
  }

  VerificationReport finish() const {
    VerificationReport r = report_;
    r.pass = r.samples > 0 && !first_violation_;
    if (first_violation_) {
      r.witness = *first_violation_;
    } else {
      r.witness = argmin_;
    }
    return r;
  }

 private:
  Predicate predicate_;
  VerificationReport report_;
  bool have_value_ = false;
  std::vector<double> argmin_;
  std::optional<std::vector<double>> first_violation_;
};

struct GridSpec {
  int nu = 100;
  int nv = 100;
};

using PatchQuantity = std::function<double(const ParamPatch&, double u, double v)>;

inline PatchQuantity density_quantity() {
  return [](const ParamPatch& p, double u, double v) { return symplectic_density(p, u, v); };
}

/// Evaluates a quantity at every grid node of the patch domain (nodes outside
/// a restricted domain are skipped) and checks the predicate at each.
inline VerificationReport grid_verify(const ParamPatch& patch, const std::string& quantity_name,
                                      const PatchQuantity& quantity, GridSpec grid,
                                      const Predicate& predicate, double tol) {
  if (grid.nu < 2 || grid.nv < 2) throw std::invalid_argument("grid_verify: need at least 2 nodes per axis");
  const auto& d = patch.domain();
  ReportBuilder builder(quantity_name, std::to_string(grid.nu) + "x" + std::to_string(grid.nv), predicate,
                        tol);
  for (int i = 0; i < grid.nu; ++i) {
    const double u = d.u0 + (d.u1 - d.u0) * i / (grid.nu - 1);
    for (int j = 0; j < grid.nv; ++j) {
      const double v = d.v0 + (d.v1 - d.v0) * j / (grid.nv - 1);
      if (!d.contains(u, v)) continue;
      builder.add(quantity(patch, u, v), {u, v});
    }
  }
  return builder.finish();
}

/// Largest principal angle between span(a1, a2) and span(b1, b2).
inline double plane_angle(const Vec4& a1, const Vec4& a2, const Vec4& b1, const Vec4& b2) {
  Eigen::Matrix<double, 4, 2> a, b;
  a << a1, a2;
  b << b1, b2;
  const Eigen::Matrix<double, 4, 2> qa = a.householderQr().householderQ() * Eigen::Matrix<double, 4, 2>::Identity();
  const Eigen::Matrix<double, 4, 2> qb = b.householderQr().householderQ() * Eigen::Matrix<double, 4, 2>::Identity();
  const Eigen::Matrix<double, 4, 2> residual = qb - qa * (qa.transpose() * qb);
  const double sine = Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>>(residual).singularValues().maxCoeff();
  return std::asin(std::clamp(sine, 0.0, 1.0));
}

}  // namespace symplab

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wlab {

enum class WeightFamily { Constant, LinearDecreasing, ExponentialDecay, TabulatedSpline };

std::string_view to_string(WeightFamily family);
/// Parses "constant", "linear-decreasing", "exponential-decay", "tabulated-spline".
std::optional<WeightFamily> parse_weight_family(std::string_view name);

struct CertificationReport;
class WeightFunction;
WeightFunction make_weight(WeightFamily family, std::vector<double> params,
                           double domain_cap);
CertificationReport property_I_certify(WeightFunction& phi, int grid_points,
                                       double tol);

/// Radial weight phi(t) with analytic first and second derivatives.
///
///   constant           [c]                phi = c
///   linear-decreasing  [c, a], a >= 0     phi = c - a t
///   exponential-decay  [c, b, lambda]     phi = c + b exp(-lambda t), b >= 0, lambda > 0
///   tabulated-spline   [t0, p0, t1, p1, ...]
///
/// The spline family is a C^1 piecewise-quadratic interpolant of the knots
/// (Schumaker construction). It is non-increasing and convex whenever the
/// knot data are, and inherits any violation of either property otherwise.
class WeightFunction {
 public:
  /// A quadratic piece a + b (t - t0) + c (t - t0)^2 on [t0, t1].
  struct Piece {
    double t0, t1, a, b, c;
  };

  WeightFunction() = default;

  WeightFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  double domain_cap() const { return domain_cap_; }
  bool certified() const { return certified_; }

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double density(double t) const;  // exp(-phi(t))

  /// phi + c. Derivatives are bitwise identical to this weight's, so the
  /// certification status carries over.
  WeightFunction shifted(double c) const;

  /// Short tag for tables, e.g. "linear-decreasing(1,0.5)".
  std::string tag() const;

  /// Largest |phi'| over [0, t_max] (sampled).
  double max_abs_slope(double t_max) const;

 private:
  friend WeightFunction make_weight(WeightFamily, std::vector<double>, double);
  friend CertificationReport property_I_certify(WeightFunction&, int, double);

  const Piece& piece_at(double t) const;

  WeightFamily family_ = WeightFamily::Constant;
  std::vector<double> params_{0.0};
  double domain_cap_ = 1.0;
  double offset_ = 0.0;
  bool certified_ = false;
  std::vector<Piece> pieces_;
};

/// Throws std::invalid_argument for invalid parameters (wrong count, a < 0,
/// b < 0, lambda <= 0, domain_cap <= 0, fewer than two spline knots,
/// non-increasing knot abscissae, or a spline not covering [0, domain_cap]).
WeightFunction make_weight(WeightFamily family, std::vector<double> params,
                           double domain_cap);

struct CertificationReport {
  bool passed = false;
  int grid_points = 0;
  double tolerance = 0.0;
  double domain_cap = 0.0;
  double max_slope = 0.0;       // max phi' on the grid
  double max_slope_at = 0.0;
  double min_curvature = 0.0;   // min phi'' on the grid
  double min_curvature_at = 0.0;
  /// First grid point violating phi' <= tol or phi'' >= -tol.
  std::optional<double> first_violation_at;
  std::string first_violation;  // "phi' > tol" / "phi'' < -tol"
  std::string note;

  std::string summary() const;
};

/// Samples phi' <= tol and phi'' >= -tol on a uniform grid over
/// [0, domain_cap]. Sets the certified flag on success. grid_points must be
/// at least 100.
CertificationReport property_I_certify(WeightFunction& phi, int grid_points = 10000,
                                       double tol = 1e-10);

}  // namespace wlab

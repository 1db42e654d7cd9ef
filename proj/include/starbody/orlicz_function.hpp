#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace starbody {

/// Settings for a user-supplied member of C.
struct OrliczUserOptions {
  std::string name = "user";
  std::optional<double> derivative_at_one;
  std::function<double(double)> inverse;
  bool strictly_convex = false;
  double domain_floor = 1e-300;
};

/// A member of the Orlicz class C: phi: (0, inf) -> (0, inf), convex and
/// strictly decreasing with phi(0+) = inf and phi(inf) = 0.
///
/// Values are immutable after construction and safe to share between threads
/// (user evaluators must themselves be pure).
class OrliczFunction {
 public:
  enum class Kind { PowerNeg, ExpReciprocal, UserDefined };
  using Evaluator = std::function<double(double)>;

  using UserOptions = OrliczUserOptions;

  /// phi(t) = t^{-p}, p >= 1.
  static OrliczFunction power_neg(double p);
  /// phi(t) = e^{1/t} - 1.
  static OrliczFunction exp_reciprocal();
  static OrliczFunction user_defined(Evaluator eval, UserOptions options = {});

  Kind kind() const noexcept { return kind_; }
  /// Exponent p of PowerNeg; NaN for other kinds.
  double exponent() const noexcept { return p_; }
  bool strictly_convex() const noexcept { return strictly_convex_; }
  double domain_floor() const noexcept { return domain_floor_; }
  const std::string& name() const noexcept { return name_; }

  /// phi(t). Throws DomainError for t <= 0 (phi(0) is +inf by convention).
  /// May return +inf when the true value overflows a double.
  double operator()(double t) const;
  double evaluate(double t) const { return (*this)(t); }
  double at_one() const noexcept { return at_one_; }

  /// phi'_r(1). Analytic for built-ins, Richardson-extrapolated one-sided
  /// differences otherwise. Always strictly negative.
  double right_derivative_at_one() const;

  /// t with phi(t) = y. Analytic for built-ins and user functions that
  /// provide one, geometric bisection otherwise. Throws RangeError when y is
  /// not attained on (domain_floor, 1e300).
  double inverse(double y) const;

 private:
  OrliczFunction() = default;

  Kind kind_ = Kind::PowerNeg;
  double p_ = 0.0;
  std::string name_;
  Evaluator eval_;
  Evaluator inverse_;
  std::optional<double> derivative_at_one_;
  bool strictly_convex_ = false;
  double domain_floor_ = 1e-300;
  double at_one_ = 1.0;
};

/// Outcome of sampling a candidate function against the class-C conditions.
struct ClassCReport {
  bool grid_ok = true;
  bool positive = true;
  bool decreasing = true;
  bool convex = true;
  bool decays = true;
  bool blows_up = true;
  std::vector<std::string> failures;

  bool passed() const noexcept {
    return grid_ok && positive && decreasing && convex && decays && blows_up;
  }
};

/// The user-defined member 1/t + 1/t^2 (name "inv_plus_inv_square"), with
/// numerical derivative and inverse.
OrliczFunction inv_plus_inv_square();

/// Sample f on a sorted grid of positive reals (length >= 3) and report which
/// class-C conditions fail. Never throws for a bad candidate; the report
/// carries the failures.
ClassCReport validate_class_c(const OrliczFunction& f, std::span<const double> grid);

/// Forward-difference derivative at x with a Richardson table over the steps
/// h, h/2, ..., h/2^{levels-1}.
double richardson_forward_derivative(const std::function<double(double)>& g, double x, double h,
                                     int levels = 3);

/// Logarithmically spaced grid on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count);

}  // namespace starbody

#include "starbody/orlicz_function.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "starbody/errors.hpp"

namespace starbody {
namespace {

constexpr double kTMax = 1e300;
constexpr double kUserDerivativeStep = 1e-4;

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Geometric bisection for phi(t) = y on a decreasing phi.
double bisect_inverse(const OrliczFunction::Evaluator& eval, double y, double floor) {
  double lo = 1.0;
  double hi = 1.0;
  if (eval(1.0) > y) {
    while (eval(hi) > y) {
      if (hi >= kTMax) throw RangeError("inverse: value " + format_number(y) + " not attained");
      lo = hi;
      hi = std::min(hi * 4.0, kTMax);
    }
  } else {
    while (eval(lo) < y) {
      if (lo <= floor) throw RangeError("inverse: value " + format_number(y) + " not attained");
      hi = lo;
      lo = std::max(lo * 0.25, floor);
    }
  }
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = (hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = eval(mid);
    if (v == y) return mid;
    (v > y ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  const double flo = eval(lo);
  const double fhi = eval(hi);
  if (std::isfinite(flo) && std::isfinite(fhi) && flo != fhi) {
    const double t = lo + (flo - y) * (hi - lo) / (flo - fhi);
    if (t >= lo && t <= hi) return t;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

OrliczFunction OrliczFunction::power_neg(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw ArgumentError("power_neg: exponent must be >= 1, got " + format_number(p));
  }
  OrliczFunction f;
  f.kind_ = Kind::PowerNeg;
  f.p_ = p;
  f.name_ = "power_neg:" + format_number(p);
  // (t^{-p})'' = p(p+1) t^{-p-2} > 0
  f.strictly_convex_ = true;
  f.at_one_ = 1.0;
  return f;
}

OrliczFunction OrliczFunction::exp_reciprocal() {
  OrliczFunction f;
  f.kind_ = Kind::ExpReciprocal;
  f.p_ = std::numeric_limits<double>::quiet_NaN();
  f.name_ = "exp_reciprocal";
  f.strictly_convex_ = true;
  f.at_one_ = std::expm1(1.0);
  return f;
}

OrliczFunction OrliczFunction::user_defined(Evaluator eval, UserOptions options) {
  if (!eval) throw ArgumentError("user_defined: empty evaluator");
  if (!(options.domain_floor > 0.0)) throw ArgumentError("user_defined: domain_floor must be > 0");
  OrliczFunction f;
  f.kind_ = Kind::UserDefined;
  f.p_ = std::numeric_limits<double>::quiet_NaN();
  f.name_ = std::move(options.name);
  f.eval_ = std::move(eval);
  f.inverse_ = std::move(options.inverse);
  f.derivative_at_one_ = options.derivative_at_one;
  f.strictly_convex_ = options.strictly_convex;
  f.domain_floor_ = options.domain_floor;
  f.at_one_ = f.eval_(1.0);
  if (!(f.at_one_ > 0.0) || !std::isfinite(f.at_one_)) {
    throw ValidationError("user_defined: phi(1) must be finite and positive");
  }
  return f;
}

double OrliczFunction::operator()(double t) const {
  if (!(t > 0.0)) throw DomainError("phi evaluated at non-positive argument " + format_number(t));
  switch (kind_) {
    case Kind::PowerNeg:
      return p_ == 1.0 ? 1.0 / t : std::pow(t, -p_);
    case Kind::ExpReciprocal:
      return std::expm1(1.0 / t);
    case Kind::UserDefined:
      if (t < domain_floor_) {
        throw DomainError("phi evaluated below domain floor at " + format_number(t));
      }
      return eval_(t);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double OrliczFunction::right_derivative_at_one() const {
  double d = 0.0;
  switch (kind_) {
    case Kind::PowerNeg:
      d = -p_;
      break;
    case Kind::ExpReciprocal:
      // d/dt (e^{1/t} - 1) = -e^{1/t} / t^2
      d = -std::exp(1.0);
      break;
    case Kind::UserDefined:
      d = derivative_at_one_ ? *derivative_at_one_
                             : richardson_forward_derivative(eval_, 1.0, kUserDerivativeStep);
      break;
  }
  if (!std::isfinite(d) || !(d < 0.0)) {
    throw ValidationError("right derivative at 1 of " + name_ + " is not negative: " +
                          format_number(d));
  }
  return d;
}

double OrliczFunction::inverse(double y) const {
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw RangeError("inverse: value " + format_number(y) + " outside (0, inf)");
  }
  switch (kind_) {
    case Kind::PowerNeg:
      return p_ == 1.0 ? 1.0 / y : std::pow(y, -1.0 / p_);
    case Kind::ExpReciprocal:
      return 1.0 / std::log1p(y);
    case Kind::UserDefined:
      if (inverse_) return inverse_(y);
      return bisect_inverse(eval_, y, domain_floor_);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double richardson_forward_derivative(const std::function<double(double)>& g, double x, double h,
                                     int levels) {
  if (!(h > 0.0) || levels < 1) throw ArgumentError("richardson: need h > 0 and levels >= 1");
  const double gx = g(x);
  std::vector<double> table(static_cast<std::size_t>(levels));
  double step = h;
  for (int k = 0; k < levels; ++k, step *= 0.5) {
    table[k] = (g(x + step) - gx) / step;
  }
  // Forward differences carry an error series in h, h^2, ...
  for (int j = 1; j < levels; ++j) {
    const double factor = std::ldexp(1.0, j);
    for (int k = levels - 1; k >= j; --k) {
      table[k] = (factor * table[k] - table[k - 1]) / (factor - 1.0);
    }
  }
  return table.back();
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw ArgumentError("log_grid: bad range");
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) {
    grid[i] = std::exp(a + (b - a) * i / (count - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

ClassCReport validate_class_c(const OrliczFunction& f, std::span<const double> grid) {
  ClassCReport report;
  auto fail = [&report](bool& flag, std::string message) {
    if (flag) report.failures.push_back(std::move(message));
    flag = false;
  };

  if (grid.size() < 3) fail(report.grid_ok, "grid needs at least 3 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      fail(report.grid_ok, "grid must be strictly increasing and positive");
      break;
    }
  }
  if (!report.grid_ok) return report;

  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      values[i] = f(grid[i]);
    } catch (const Error&) {
      values[i] = std::numeric_limits<double>::quiet_NaN();
    }
    if (!(values[i] > 0.0)) {
      fail(report.positive, "not positive at t=" + format_number(grid[i]));
    }
  }

  for (std::size_t i = 1; i < grid.size(); ++i) {
    const bool both_inf = std::isinf(values[i]) && std::isinf(values[i - 1]);
    if (!both_inf && !(values[i] < values[i - 1])) {
      fail(report.decreasing, "not strictly decreasing between t=" + format_number(grid[i - 1]) +
                                  " and t=" + format_number(grid[i]));
    }
  }

  for (std::size_t gap = 1; gap <= 2; ++gap) {
    for (std::size_t i = 0; i + gap < grid.size(); ++i) {
      const double a = values[i];
      const double b = values[i + gap];
      if (!std::isfinite(a) || !std::isfinite(b)) continue;
      const double mid = f(0.5 * (grid[i] + grid[i + gap]));
      const double chord = 0.5 * (a + b);
      if (mid > chord + 1e-12 * std::max(1.0, std::abs(chord))) {
        fail(report.convex, "midpoint convexity fails on [" + format_number(grid[i]) + ", " +
                                format_number(grid[i + gap]) + "]");
      }
    }
  }

  // Limits are judged against the value at the geometric centre of the grid.
  const double centre = f(std::sqrt(grid.front() * grid.back()));
  if (!(std::abs(values.back()) < 0.5 * std::abs(centre))) {
    fail(report.decays, "no decay toward 0 at t=" + format_number(grid.back()));
  }
  if (!(std::abs(values.front()) > 2.0 * std::abs(centre))) {
    fail(report.blows_up, "no blow-up toward t=0 at t=" + format_number(grid.front()));
  }
  return report;
}

OrliczFunction inv_plus_inv_square() {
  OrliczUserOptions options;
  options.name = "inv_plus_inv_square";
  options.strictly_convex = true;
  return OrliczFunction::user_defined([](double t) { return 1.0 / t + 1.0 / (t * t); }, options);
}

}  // namespace starbody

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace imkit {

/// Closed interval [lower, upper] of parameter values. Either end may be
/// infinite; lower == upper is a singleton.
struct FocalInterval {
  double lower;
  double upper;
};

/// A subset of a scalar parameter space.
///
/// Rays carry an explicit boundary flag so that complement() is exact:
/// the complement of (-inf, t) is [t, inf), and so on. Containment of a
/// closed focal interval is decided exactly for every kind except
/// Predicate, where the interval is probed on a finite set of points.
class Assertion {
 public:
  enum class Kind { Point, NotPoint, LeftRay, RightRay, Interval, Exterior, Predicate };

  static Assertion point(double theta0);
  static Assertion not_point(double theta0);
  /// (-inf, theta0), or (-inf, theta0] when inclusive.
  static Assertion left_ray(double theta0, bool inclusive = false);
  /// (theta0, inf), or [theta0, inf) when inclusive.
  static Assertion right_ray(double theta0, bool inclusive = false);
  /// Open interval (a, b).
  static Assertion interval(double a, double b);
  /// (-inf, a] U [b, inf), the complement of interval(a, b).
  static Assertion exterior(double a, double b);
  static Assertion predicate(std::function<bool(double)> member, std::string label = "predicate");

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  bool inclusive() const { return inclusive_; }
  const std::string& label() const { return label_; }

  Assertion complement() const;
  bool contains(double theta) const;
  /// Whether the closed interval [set.lower, set.upper] lies inside the
  /// assertion.
  bool contains_set(const FocalInterval& set) const;

  /// Open intervals whose union equals the assertion up to finitely many
  /// points. Empty for Point; unavailable (throws) for Predicate.
  std::vector<std::pair<double, double>> open_pieces() const;

  std::string describe() const;

 private:
  Assertion(Kind kind, double a, double b, bool inclusive) : kind_(kind), a_(a), b_(b), inclusive_(inclusive) {}

  Kind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
  bool inclusive_ = false;
  bool negated_ = false;
  std::shared_ptr<const std::function<bool(double)>> member_;
  std::string label_;
};

}  // namespace imkit

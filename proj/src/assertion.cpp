#include "imkit/assertion.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "imkit/numeric.hpp"

namespace imkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Probe points for predicate containment: both ends plus interior points,
// mapped through t/(1-t) when an end is unbounded.
constexpr int kPredicateProbes = 257;

std::vector<double> probe_points(const FocalInterval& s) {
  std::vector<double> pts;
  if (s.lower == s.upper) return {s.lower};
  pts.reserve(kPredicateProbes);
  for (int i = 0; i < kPredicateProbes; ++i) {
    const double t = static_cast<double>(i) / (kPredicateProbes - 1);
    double v;
    if (std::isfinite(s.lower) && std::isfinite(s.upper)) {
      v = s.lower + t * (s.upper - s.lower);
    } else if (std::isfinite(s.lower)) {
      v = t >= 1.0 ? std::numeric_limits<double>::max() : s.lower + t / (1.0 - t);
    } else if (std::isfinite(s.upper)) {
      v = t <= 0.0 ? std::numeric_limits<double>::lowest() : s.upper - (1.0 - t) / t;
    } else {
      const double c = 2.0 * t - 1.0;
      v = std::abs(c) >= 1.0 ? std::copysign(std::numeric_limits<double>::max(), c) : c / (1.0 - c * c);
    }
    pts.push_back(v);
  }
  return pts;
}

}  // namespace

namespace {

double finite_or_throw(double theta0) {
  if (!std::isfinite(theta0)) throw DomainError("Assertion: boundary must be finite");
  return theta0;
}

}  // namespace

Assertion Assertion::point(double theta0) { return {Kind::Point, finite_or_throw(theta0), theta0, true}; }

Assertion Assertion::not_point(double theta0) { return {Kind::NotPoint, finite_or_throw(theta0), theta0, false}; }

Assertion Assertion::left_ray(double theta0, bool inclusive) {
  return {Kind::LeftRay, -kInf, finite_or_throw(theta0), inclusive};
}

Assertion Assertion::right_ray(double theta0, bool inclusive) {
  return {Kind::RightRay, finite_or_throw(theta0), kInf, inclusive};
}

Assertion Assertion::interval(double a, double b) {
  if (!(a < b)) throw DomainError("Assertion::interval: requires a < b");
  return {Kind::Interval, a, b, false};
}

Assertion Assertion::exterior(double a, double b) {
  if (!(a < b)) throw DomainError("Assertion::exterior: requires a < b");
  return {Kind::Exterior, a, b, true};
}

Assertion Assertion::predicate(std::function<bool(double)> member, std::string label) {
  if (!member) throw DomainError("Assertion::predicate: empty membership function");
  Assertion out(Kind::Predicate, 0.0, 0.0, false);
  out.member_ = std::make_shared<const std::function<bool(double)>>(std::move(member));
  out.label_ = std::move(label);
  return out;
}

Assertion Assertion::complement() const {
  switch (kind_) {
    case Kind::Point: return not_point(a_);
    case Kind::NotPoint: return point(a_);
    case Kind::LeftRay: return right_ray(b_, !inclusive_);
    case Kind::RightRay: return left_ray(a_, !inclusive_);
    case Kind::Interval: return exterior(a_, b_);
    case Kind::Exterior: return interval(a_, b_);
    case Kind::Predicate: {
      Assertion out = *this;
      out.negated_ = !negated_;
      return out;
    }
  }
  throw DomainError("Assertion: unknown kind");
}

bool Assertion::contains(double theta) const {
  switch (kind_) {
    case Kind::Point: return theta == a_;
    case Kind::NotPoint: return theta != a_;
    case Kind::LeftRay: return inclusive_ ? theta <= b_ : theta < b_;
    case Kind::RightRay: return inclusive_ ? theta >= a_ : theta > a_;
    case Kind::Interval: return theta > a_ && theta < b_;
    case Kind::Exterior: return theta <= a_ || theta >= b_;
    case Kind::Predicate: return (*member_)(theta) != negated_;
  }
  return false;
}

bool Assertion::contains_set(const FocalInterval& s) const {
  switch (kind_) {
    case Kind::Point: return s.lower == a_ && s.upper == a_;
    case Kind::NotPoint: return s.upper < a_ || s.lower > a_;
    case Kind::LeftRay: return inclusive_ ? s.upper <= b_ : s.upper < b_;
    case Kind::RightRay: return inclusive_ ? s.lower >= a_ : s.lower > a_;
    case Kind::Interval: return s.lower > a_ && s.upper < b_;
    case Kind::Exterior: return s.upper <= a_ || s.lower >= b_;
    case Kind::Predicate:
      for (double v : probe_points(s)) {
        if (!contains(v)) return false;
      }
      return true;
  }
  return false;
}

std::vector<std::pair<double, double>> Assertion::open_pieces() const {
  switch (kind_) {
    case Kind::Point: return {};
    case Kind::NotPoint: return {{-kInf, a_}, {a_, kInf}};
    case Kind::LeftRay: return {{-kInf, b_}};
    case Kind::RightRay: return {{a_, kInf}};
    case Kind::Interval: return {{a_, b_}};
    case Kind::Exterior: return {{-kInf, a_}, {b_, kInf}};
    case Kind::Predicate: break;
  }
  throw DomainError("Assertion: predicate assertions have no interval decomposition");
}

std::string Assertion::describe() const {
  std::ostringstream os;
  os.precision(10);
  switch (kind_) {
    case Kind::Point: os << "{" << a_ << "}"; break;
    case Kind::NotPoint: os << "{" << a_ << "}^c"; break;
    case Kind::LeftRay: os << "(-inf," << b_ << (inclusive_ ? "]" : ")"); break;
    case Kind::RightRay: os << (inclusive_ ? "[" : "(") << a_ << ",inf)"; break;
    case Kind::Interval: os << "(" << a_ << "," << b_ << ")"; break;
    case Kind::Exterior: os << "(-inf," << a_ << "]U[" << b_ << ",inf)"; break;
    case Kind::Predicate: os << (negated_ ? "not " : "") << label_; break;
  }
  return os.str();
}

}  // namespace imkit

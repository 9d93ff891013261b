#include "imkit/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace imkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Prefactor x^a e^{-x} / Gamma(a) of the incomplete gamma expansions.
double gamma_prefactor(double x, double a) {
  return std::exp(a * std::log(x) - x - std::lgamma(a));
}

// Series for P(a, x); converges quickly for x < a + 1.
double lower_gamma_series(double x, double a) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < 100000; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * gamma_prefactor(x, a);
    }
  }
  throw NumericError("gamma_cdf: series did not converge");
}

// Continued fraction for Q(a, x) (modified Lentz); used for x >= a + 1.
double upper_gamma_fraction(double x, double a) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h * gamma_prefactor(x, a);
  }
  throw NumericError("gamma_cdf: continued fraction did not converge");
}

void check_gamma_args(double x, double shape, const char* who) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError(std::string(who) + ": shape must be positive and finite");
  }
  if (std::isnan(x) || x < 0.0) {
    throw DomainError(std::string(who) + ": x must be non-negative");
  }
}

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208024525020, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[10];
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    throw QuadratureError("integrate: non-finite integrand value");
  }
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

double integrate_finite(const std::function<double(double)>& f, double lo, double hi,
                        const QuadratureSpec& spec) {
  std::vector<Segment> segments{gauss_kronrod(f, lo, hi)};
  for (int split = 0;; ++split) {
    double total = 0.0;
    double error = 0.0;
    for (const auto& s : segments) {
      total += s.value;
      error += s.error;
    }
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (error <= target || error <= 50.0 * kEps * std::abs(total)) return total;
    if (split >= spec.max_subdivisions) {
      throw QuadratureError("integrate: tolerance not met within " +
                            std::to_string(spec.max_subdivisions) + " subdivisions");
    }
    auto worst = std::max_element(segments.begin(), segments.end(),
                                  [](const Segment& x, const Segment& y) { return x.error < y.error; });
    const double a = worst->a;
    const double b = worst->b;
    const double mid = 0.5 * (a + b);
    if (!(a < mid && mid < b)) {
      throw QuadratureError("integrate: interval cannot be subdivided further");
    }
    *worst = gauss_kronrod(f, a, mid);
    segments.push_back(gauss_kronrod(f, mid, b));
  }
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw DomainError("QuadratureSpec: tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw DomainError("QuadratureSpec: max_subdivisions must be positive");
  }
}

double norm_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double norm_cdf(double z) {
  if (std::isnan(z)) throw DomainError("norm_cdf: NaN argument");
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("norm_quantile: p must lie in (0,1)");
  const double q = p - 0.5;
  double val;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    val = q *
          (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r + 67265.770927008700853) * r +
               45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
            133.14166789178437745) * r + 3.387132872796366608) /
          (((((((r * 5226.495278852545925 + 28729.085735721942674) * r + 39307.89580009271061) * r +
               21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
            42.313330701600911252) * r + 1.0);
  } else {
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    if (r <= 5.0) {
      r -= 1.6;
      val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                 1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                 0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
    } else {
      r -= 5.0;
      val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                 0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                 7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
    }
    if (q < 0.0) val = -val;
  }
  // One Newton step against erfc; the tail side is used to keep relative accuracy.
  const double dens = norm_pdf(val);
  if (dens > 1e-300) {
    const double resid = val < 0.0 ? norm_cdf(val) - p : (1.0 - p) - norm_cdf(-val);
    val -= resid / dens;
  }
  return val;
}

double gamma_cdf(double x, double shape) {
  check_gamma_args(x, shape, "gamma_cdf");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < shape + 1.0) return lower_gamma_series(x, shape);
  return 1.0 - upper_gamma_fraction(x, shape);
}

double gamma_sf(double x, double shape) {
  check_gamma_args(x, shape, "gamma_sf");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < shape + 1.0) return 1.0 - lower_gamma_series(x, shape);
  return upper_gamma_fraction(x, shape);
}

double gamma_pdf(double x, double shape) {
  check_gamma_args(x, shape, "gamma_pdf");
  if (x == 0.0) return shape == 1.0 ? 1.0 : (shape < 1.0 ? kInf : 0.0);
  return std::exp((shape - 1.0) * std::log(x) - x - std::lgamma(shape));
}

double gamma_quantile(double p, double shape) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("gamma_quantile: p must lie in (0,1)");
  check_gamma_args(0.0, shape, "gamma_quantile");

  // Wilson-Hilferty start, falling back to the small-x expansion of P(a,x).
  const double z = norm_quantile(p);
  const double c = 1.0 / (9.0 * shape);
  double x = shape * std::pow(1.0 - c + z * std::sqrt(c), 3);
  if (!(x > 0.0) || (shape < 1.0 && p < 0.5)) {
    x = std::exp((std::log(p) + std::lgamma(shape + 1.0)) / shape);
  }

  // Residual taken on whichever tail keeps relative precision.
  const bool upper = p > 0.5;
  auto resid = [&](double v) { return upper ? (1.0 - p) - gamma_sf(v, shape) : gamma_cdf(v, shape) - p; };

  double lo = 0.0;
  double hi = std::max(x, 1.0);
  while (resid(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericError("gamma_quantile: cannot bracket quantile");
  }
  x = std::clamp(x, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double r = resid(x);
    if (r == 0.0) return x;
    if (r < 0.0) lo = x; else hi = x;
    const double dens = gamma_pdf(x, shape);
    double next = dens > 0.0 && std::isfinite(dens) ? x - r / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * kEps * std::abs(next) || hi - lo <= 4.0 * kEps * hi) return next;
    x = next;
  }
  return x;
}

double poisson_pmf(long k, double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("poisson_pmf: theta must be positive and finite");
  }
  if (k < 0) return 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(theta) - theta - std::lgamma(kd + 1.0));
}

double poisson_cdf(long k, double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("poisson_cdf: theta must be positive and finite");
  }
  if (k < 0) return 0.0;
  return gamma_sf(theta, static_cast<double>(k) + 1.0);
}

double noncentral_t_cdf(double z, int df, double ncp, const QuadratureSpec& spec) {
  if (df < 1) throw DomainError("noncentral_t_cdf: df must be >= 1");
  if (std::isnan(z) || std::isnan(ncp)) throw DomainError("noncentral_t_cdf: NaN argument");
  spec.validate();
  if (std::isinf(z)) return z > 0.0 ? 1.0 : 0.0;

  const double nu = static_cast<double>(df);
  const double log_norm = std::log(2.0) + 0.5 * nu * std::log(0.5 * nu) - std::lgamma(0.5 * nu);
  // Density of W = sqrt(ChiSq(df)/df) times P{Z <= z w - ncp}.
  auto integrand = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double log_dens = log_norm + (nu - 1.0) * std::log(w) - 0.5 * nu * w * w;
    return norm_cdf(z * w - ncp) * std::exp(log_dens);
  };
  // W concentrates around 1 with spread ~ 1/sqrt(2 df); split there so the
  // adaptive rule sees the bulk even for large df.
  const double spread = 1.0 / std::sqrt(2.0 * nu);
  const double left = std::max(0.0, 1.0 - 12.0 * spread);
  const double right = 1.0 + 12.0 * spread;
  double total = integrate(integrand, 0.0, left, spec) + integrate(integrand, left, 1.0, spec) +
                 integrate(integrand, 1.0, right, spec) + integrate(integrand, right, kInf, spec);
  return std::clamp(total, 0.0, 1.0);
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec) {
  spec.validate();
  if (std::isnan(lo) || std::isnan(hi)) throw DomainError("integrate: NaN limit");
  if (lo == hi) return 0.0;
  if (lo > hi) return -integrate(f, hi, lo, spec);

  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (!lo_inf && !hi_inf) return integrate_finite(f, lo, hi, spec);
  if (lo_inf && hi_inf) {
    // x = t / (1 - t^2), t in (-1, 1)
    auto g = [&f](double t) {
      const double d = 1.0 - t * t;
      return f(t / d) * (1.0 + t * t) / (d * d);
    };
    return integrate_finite(g, -1.0, 1.0, spec);
  }
  if (hi_inf) {
    // x = lo + t / (1 - t), t in [0, 1)
    auto g = [&f, lo](double t) {
      const double d = 1.0 - t;
      return f(lo + t / d) / (d * d);
    };
    return integrate_finite(g, 0.0, 1.0, spec);
  }
  // x = hi - (1 - t) / t, t in (0, 1]
  auto g = [&f, hi](double t) { return f(hi - (1.0 - t) / t) / (t * t); };
  return integrate_finite(g, 0.0, 1.0, spec);
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                 int max_iter) {
  if (!(tol > 0.0)) throw DomainError("find_root: tol must be positive");
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (std::isnan(fa) || std::isnan(fb)) throw NumericError("find_root: NaN at bracket end");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw BracketError("find_root: f(lo) and f(hi) have the same sign");
  }
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int it = 0; it < max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
    if (std::isnan(fb)) throw NumericError("find_root: NaN function value");
  }
  throw NumericError("find_root: iteration limit reached");
}

}  // namespace imkit

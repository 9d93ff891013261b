#include "imkit/prs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "imkit/numeric.hpp"

namespace imkit {

namespace {

constexpr int kGapGrid = 4096;

UInterval clamp_unit(UInterval k) { return {std::max(k.lo, 0.0), std::min(k.hi, 1.0)}; }

void check_unit(double u, const char* who) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError(std::string(who) + ": u must lie in [0,1]");
}

// Closed gaps of [0,1] left uncovered by the open pieces of K.
std::vector<UInterval> gaps_of(std::vector<UInterval> k) {
  k.erase(std::remove_if(k.begin(), k.end(), [](const UInterval& p) { return p.empty(); }), k.end());
  std::sort(k.begin(), k.end(), [](const UInterval& x, const UInterval& y) { return x.lo < y.lo; });
  std::vector<UInterval> gaps;
  double cursor = 0.0;
  for (const auto& raw : k) {
    const UInterval p = clamp_unit(raw);
    // 0 and 1 are outside the open auxiliary space, so an empty gap there
    // is not a gap.
    if (p.lo >= cursor && p.lo > 0.0) gaps.push_back({cursor, p.lo});
    cursor = std::max(cursor, p.hi);
  }
  if (cursor < 1.0) gaps.push_back({cursor, 1.0});
  return gaps;
}

// Boundary between a member point `in` and a non-member `out` of a sublevel set.
double refine_boundary(const SublevelSet& s, double in, double out) {
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (in + out);
    if (s.contains(mid)) in = mid; else out = mid;
  }
  return in;
}

}  // namespace

struct PrsFactory {
  static PredictiveRandomSet make(PrsFamily family) { return PredictiveRandomSet(family); }

  static PredictiveRandomSet make_h(LevelFunction h, std::function<double(double)> level_cdf,
                                    const HNestedOptions& options) {
    if (!h) throw DomainError("h_nested_prs: empty level function");
    PredictiveRandomSet out(PrsFamily::HNested);
    out.h_ = std::make_shared<const LevelFunction>(std::move(h));
    if (level_cdf) {
      out.level_cdf_ = std::move(level_cdf);
    } else {
      if (options.mc_draws < 1) throw DomainError("h_nested_prs: mc_draws must be positive");
      std::vector<double> sample;
      sample.reserve(static_cast<std::size_t>(options.mc_draws));
      RandomStream stream(options.seed, 0);
      for (int i = 0; i < options.mc_draws; ++i) sample.push_back((*out.h_)(stream.uniform()));
      std::sort(sample.begin(), sample.end());
      out.level_sample_ = std::make_shared<const std::vector<double>>(std::move(sample));
    }
    return out;
  }
};

bool realized_contains(const RealizedSet& set, double u) {
  if (const auto* iv = std::get_if<UInterval>(&set)) return iv->lo <= u && u <= iv->hi;
  return std::get<SublevelSet>(set).contains(u);
}

std::vector<UInterval> realized_components(const RealizedSet& set, int grid) {
  if (const auto* iv = std::get_if<UInterval>(&set)) return {*iv};
  const auto& s = std::get<SublevelSet>(set);
  if (grid < 2) throw DomainError("realized_components: grid must be >= 2");

  std::vector<UInterval> comps;
  bool open = false;
  double start = 0.0;
  double prev = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double u = static_cast<double>(i) / grid;
    const bool in = s.contains(u);
    if (in && !open) {
      start = i == 0 ? 0.0 : refine_boundary(s, u, prev);
      open = true;
    } else if (!in && open) {
      comps.push_back({start, refine_boundary(s, prev, u)});
      open = false;
    }
    prev = u;
  }
  if (open) comps.push_back({start, 1.0});

  // Refined boundaries can stop just short of the anchor, which lies on the
  // boundary of its own sublevel set.
  const double slack = 1e-9 / grid;
  bool anchored = false;
  for (auto& c : comps) {
    if (c.lo - slack <= s.anchor && s.anchor <= c.hi + slack) {
      c.lo = std::min(c.lo, s.anchor);
      c.hi = std::max(c.hi, s.anchor);
      anchored = true;
    }
  }
  if (!anchored) {
    comps.push_back({s.anchor, s.anchor});
    std::sort(comps.begin(), comps.end(), [](const UInterval& x, const UInterval& y) { return x.lo < y.lo; });
  }
  return comps;
}

bool realized_subset(const RealizedSet& inner, const RealizedSet& outer) {
  const auto* a = std::get_if<UInterval>(&inner);
  const auto* b = std::get_if<UInterval>(&outer);
  if (a && b) return b->lo <= a->lo && a->hi <= b->hi;
  const auto* sa = std::get_if<SublevelSet>(&inner);
  const auto* sb = std::get_if<SublevelSet>(&outer);
  if (sa && sb && sa->h == sb->h) return sa->threshold <= sb->threshold;
  for (const auto& c : realized_components(inner)) {
    for (int i = 0; i <= 64; ++i) {
      if (!realized_contains(outer, c.lo + (c.hi - c.lo) * i / 64.0)) return false;
    }
  }
  return true;
}

std::string_view PredictiveRandomSet::name() const {
  switch (family_) {
    case PrsFamily::Default: return "default";
    case PrsFamily::Lower: return "lower";
    case PrsFamily::Upper: return "upper";
    case PrsFamily::Singleton: return "singleton";
    case PrsFamily::HNested: return "h-nested";
  }
  return "unknown";
}

RealizedSet PredictiveRandomSet::draw(RandomStream& stream) const {
  const double u = stream.uniform();
  switch (family_) {
    case PrsFamily::Default: {
      const double r = std::abs(u - 0.5);
      return UInterval{0.5 - r, 0.5 + r};
    }
    case PrsFamily::Lower: return UInterval{0.0, u};
    case PrsFamily::Upper: return UInterval{u, 1.0};
    case PrsFamily::Singleton: return UInterval{u, u};
    case PrsFamily::HNested: return SublevelSet{h_, (*h_)(u), u};
  }
  throw DomainError("unknown PRS family");
}

double PredictiveRandomSet::level_cdf(double c) const {
  if (level_cdf_) return level_cdf_(c);
  const auto& s = *level_sample_;
  return static_cast<double>(std::upper_bound(s.begin(), s.end(), c) - s.begin()) / s.size();
}

double PredictiveRandomSet::level_cdf_strict(double c) const {
  if (level_cdf_) return level_cdf_(c);
  const auto& s = *level_sample_;
  return static_cast<double>(std::lower_bound(s.begin(), s.end(), c) - s.begin()) / s.size();
}

double PredictiveRandomSet::miss_prob(double u) const {
  check_unit(u, "miss_prob");
  switch (family_) {
    case PrsFamily::Default: return std::abs(2.0 * u - 1.0);
    case PrsFamily::Lower: return u;  // [0,U] misses u iff U < u
    case PrsFamily::Upper: return 1.0 - u;
    case PrsFamily::Singleton: return 1.0;
    case PrsFamily::HNested: return level_cdf_strict((*h_)(u));
  }
  return 1.0;
}

double PredictiveRandomSet::containment_prob(const std::vector<UInterval>& k) const {
  switch (family_) {
    case PrsFamily::Default:
      for (const auto& raw : k) {
        const UInterval p = clamp_unit(raw);
        if (p.lo < 0.5 && 0.5 < p.hi) return std::min(1.0, 2.0 * std::min(0.5 - p.lo, p.hi - 0.5));
      }
      return 0.0;
    case PrsFamily::Lower:
      for (const auto& raw : k) {
        if (!raw.empty() && raw.lo <= 0.0) return std::min(raw.hi, 1.0);
      }
      return 0.0;
    case PrsFamily::Upper:
      for (const auto& raw : k) {
        if (!raw.empty() && raw.hi >= 1.0) return 1.0 - std::max(raw.lo, 0.0);
      }
      return 0.0;
    case PrsFamily::Singleton: {
      double total = 0.0;
      for (const auto& raw : k) total += clamp_unit(raw).length();
      return std::min(total, 1.0);
    }
    case PrsFamily::HNested: {
      // S subset of K iff h(U) < inf of h over the uncovered part of [0,1].
      double m = std::numeric_limits<double>::infinity();
      for (const auto& g : gaps_of(k)) {
        m = std::min({m, (*h_)(g.lo), (*h_)(g.hi)});
        const int n = std::max(1, static_cast<int>(std::ceil((g.hi - g.lo) * kGapGrid)));
        for (int i = 1; i < n; ++i) m = std::min(m, (*h_)(g.lo + (g.hi - g.lo) * i / n));
      }
      return std::isinf(m) ? 1.0 : level_cdf_strict(m);
    }
  }
  return 0.0;
}

PredictiveRandomSet default_prs() { return PrsFactory::make(PrsFamily::Default); }

PredictiveRandomSet one_sided_prs(PrsFamily side) {
  if (side != PrsFamily::Lower && side != PrsFamily::Upper) {
    throw DomainError("one_sided_prs: side must be Lower or Upper");
  }
  return PrsFactory::make(side);
}

PredictiveRandomSet singleton_prs() { return PrsFactory::make(PrsFamily::Singleton); }

PredictiveRandomSet h_nested_prs(LevelFunction h, std::function<double(double)> level_cdf) {
  return PrsFactory::make_h(std::move(h), std::move(level_cdf), HNestedOptions{});
}

PredictiveRandomSet h_nested_prs(LevelFunction h, const HNestedOptions& options) {
  return PrsFactory::make_h(std::move(h), {}, options);
}

PredictiveRandomSet prs_by_name(std::string_view name) {
  if (name == "default") return default_prs();
  if (name == "lower") return one_sided_prs(PrsFamily::Lower);
  if (name == "upper") return one_sided_prs(PrsFamily::Upper);
  if (name == "singleton") return singleton_prs();
  throw DomainError("unknown predictive random set '" + std::string(name) + "'");
}

}  // namespace imkit

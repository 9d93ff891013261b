#pragma once

#include <functional>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include "imkit/association.hpp"
#include "imkit/random_stream.hpp"

namespace imkit {

enum class PrsFamily { Default, Lower, Upper, Singleton, HNested };

using LevelFunction = std::function<double(double)>;

/// Realized sublevel set {u in [0,1] : h(u) <= threshold}. `anchor` is the
/// draw U that produced the threshold, so the set is never empty.
struct SublevelSet {
  std::shared_ptr<const LevelFunction> h;
  double threshold;
  double anchor;

  bool contains(double u) const { return (*h)(u) <= threshold; }
};

/// A draw of a predictive random set: either a closed interval of [0,1] or
/// an h-sublevel set.
using RealizedSet = std::variant<UInterval, SublevelSet>;

bool realized_contains(const RealizedSet& set, double u);
/// Whether `inner` is a subset of `outer`. Sublevel sets are compared on
/// the grid used by realized_components.
bool realized_subset(const RealizedSet& inner, const RealizedSet& outer);
/// Connected components of a realized set. Sublevel sets are resolved on a
/// uniform grid of `grid` cells; the anchor is always covered.
std::vector<UInterval> realized_components(const RealizedSet& set, int grid = 4096);

/// Nested predictive random set for a Unif(0,1) auxiliary variable.
///
/// containment_prob(K) = P_S{S subset of K} for K a finite union of disjoint
/// open intervals of (0,1); this is the only PRS functional the belief
/// calculus needs.
class PredictiveRandomSet {
 public:
  PrsFamily family() const { return family_; }
  std::string_view name() const;

  RealizedSet draw(RandomStream& stream) const;
  /// Q_S(u) = P_S{S does not contain u}.
  double miss_prob(double u) const;
  double containment_prob(const std::vector<UInterval>& k) const;

  /// Level function for h-nested sets; null otherwise.
  const std::shared_ptr<const LevelFunction>& level_function() const { return h_; }

 private:
  friend struct PrsFactory;

  explicit PredictiveRandomSet(PrsFamily family) : family_(family) {}

  // P{h(U) < c} for the h-nested family.
  double level_cdf_strict(double c) const;
  double level_cdf(double c) const;

  PrsFamily family_;
  std::shared_ptr<const LevelFunction> h_;
  std::function<double(double)> level_cdf_;  // analytic override of P{h(U) <= c}
  std::shared_ptr<const std::vector<double>> level_sample_;  // sorted h(U_i)
};

/// S = {u' : |u' - 0.5| <= |U - 0.5|}.
PredictiveRandomSet default_prs();
/// S = [0, U] (PrsFamily::Lower) or [U, 1] (PrsFamily::Upper).
PredictiveRandomSet one_sided_prs(PrsFamily side);
/// S = {U}; the fiducial choice. Not valid.
PredictiveRandomSet singleton_prs();

struct HNestedOptions {
  int mc_draws = 100000;
  std::uint64_t seed = 0x5eedULL;
};

/// S = {u : h(u) <= h(U)}. Without `level_cdf`, the distribution of h(U) is
/// estimated once from `options.mc_draws` uniform draws and cached.
PredictiveRandomSet h_nested_prs(LevelFunction h, std::function<double(double)> level_cdf = {});
PredictiveRandomSet h_nested_prs(LevelFunction h, const HNestedOptions& options);

/// Look up by CLI identifier: "default", "lower", "upper", "singleton".
PredictiveRandomSet prs_by_name(std::string_view name);

}  // namespace imkit

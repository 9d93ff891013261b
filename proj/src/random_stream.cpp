#include "imkit/random_stream.hpp"

#include <cmath>

#include "imkit/numeric.hpp"

namespace imkit {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed), stream_index_(stream_index) {
  const std::uint64_t s = mix64(master_seed + kGolden);
  key0_ = mix64(s ^ mix64(stream_index * kGolden + 0x632be59bd9b4e019ULL));
  key1_ = mix64(key0_ + 0xd1b54a32d192ed03ULL) | 1ULL;
}

RandomStream RandomStream::child(std::uint64_t index) const {
  return RandomStream(mix64(key0_ ^ 0xa0761d6478bd642fULL) ^ master_seed_, index);
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t c = counter_++;
  return mix64(mix64(c ^ key0_) + key1_ * (c | 1ULL));
}

double RandomStream::uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return norm_quantile(uniform()); }

double RandomStream::exponential() { return -std::log(uniform()); }

double RandomStream::gamma(double shape) {
  if (!(shape > 0.0)) throw DomainError("RandomStream::gamma: shape must be positive");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z;
    double v;
    do {
      z = normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RandomStream::chi_square(double df) { return 2.0 * gamma(0.5 * df); }

}  // namespace imkit

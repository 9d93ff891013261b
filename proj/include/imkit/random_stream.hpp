#pragma once

#include <cstdint>

namespace imkit {

/// Counter-based random stream. The i-th 64-bit output is a keyed hash of i,
/// where the key is derived from (master_seed, stream_index); identical
/// inputs therefore give identical sequences on every platform, and distinct
/// stream indices give unrelated sequences.
///
/// Variates are generated with in-house transforms rather than <random>
/// distributions, whose output is implementation-defined.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }
  std::uint64_t position() const { return counter_; }

  /// Independent stream for replicate `index`, keyed on this stream's
  /// (master_seed, stream_index) pair.
  RandomStream child(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform on the open interval (0,1), 53-bit resolution.
  double uniform();
  double normal();
  /// Exp(1).
  double exponential();
  /// Gamma(shape, 1), Marsaglia-Tsang.
  double gamma(double shape);
  double chi_square(double df);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t key0_;
  std::uint64_t key1_;
  std::uint64_t counter_ = 0;
};

}  // namespace imkit

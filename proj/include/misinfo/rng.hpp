#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace misinfo {

/// Threefry-2x32 with 20 rounds (Salmon et al., Random123). Encrypts a
/// 64-bit counter under a 64-bit key; outputs match the Random123 known-answer
/// vectors bit for bit.
std::array<std::uint32_t, 2> threefry2x32(std::array<std::uint32_t, 2> key,
                                          std::array<std::uint32_t, 2> counter);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive combination of a seed with stream tags.
std::uint64_t hash_combine(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

/// Counter-based pseudorandom stream.
///
/// A stream is fully determined by its 64-bit key; the n-th draw is
/// threefry(key, n). Substreams for (run, step, agent, purpose) are derived by
/// hashing tags into a new key, so the draws an agent sees never depend on the
/// order in which other agents or runs consume randomness.
///
/// All distributions below are implemented here rather than through <random>
/// distribution objects, whose algorithms are implementation-defined.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t key) : key_(key) {}

  /// Stream for `seed` specialised by `tags`.
  static RandomSource stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    return RandomSource(hash_combine(seed, tags));
  }

  RandomSource split(std::uint64_t tag) const { return RandomSource(hash_combine(key_, {tag})); }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform on (0, 1]; safe as a logarithm argument.
  double uniform_pos() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();

  /// Knuth's multiplication method; intended for small means.
  int poisson(double mean);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace misinfo

#include "misinfo/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace misinfo {

namespace {

constexpr std::uint32_t rotl32(std::uint32_t x, int r) { return (x << r) | (x >> (32 - r)); }

constexpr std::array<int, 8> kRotations = {13, 15, 26, 6, 17, 29, 16, 24};
constexpr std::uint32_t kParity = 0x1BD11BDA;

}  // namespace

std::array<std::uint32_t, 2> threefry2x32(std::array<std::uint32_t, 2> key,
                                          std::array<std::uint32_t, 2> counter) {
  const std::array<std::uint32_t, 3> ks = {key[0], key[1], key[0] ^ key[1] ^ kParity};
  std::uint32_t x0 = counter[0] + ks[0];
  std::uint32_t x1 = counter[1] + ks[1];
  for (int round = 0; round < 20; ++round) {
    x0 += x1;
    x1 = rotl32(x1, kRotations[round % 8]);
    x1 ^= x0;
    if (round % 4 == 3) {
      const std::uint32_t s = static_cast<std::uint32_t>(round / 4 + 1);
      x0 += ks[s % 3];
      x1 += ks[(s + 1) % 3] + s;
    }
  }
  return {x0, x1};
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t t : tags) h = mix64(h ^ mix64(t + 0x632BE59BD9B4E019ULL));
  return h;
}

std::uint64_t RandomSource::next_u64() {
  const auto out = threefry2x32(
      {static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32)},
      {static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32)});
  ++counter_;
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

double RandomSource::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomSource::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RandomSource::below: n must be positive");
  // Rejection on the top of the range keeps the result unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % n;
}

double RandomSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

int RandomSource::poisson(double mean) {
  if (mean < 0.0) throw std::invalid_argument("RandomSource::poisson: negative mean");
  const double threshold = std::exp(-mean);
  int k = 0;
  double p = uniform_pos();
  while (p > threshold) {
    ++k;
    p *= uniform_pos();
  }
  return k;
}

}  // namespace misinfo

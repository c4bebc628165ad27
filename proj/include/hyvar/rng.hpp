// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace hyvar {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
/// Stateless: the same (counter, key) always maps to the same four words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; a bijection on 64-bit words with good avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// 64-bit FNV-1a of a label, used to turn purpose strings into hash inputs.
constexpr std::uint64_t label_hash(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Hash-combines a base seed with an ordered list of words (e.g. n, replication, purpose label).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

/// Fixed sub-stream labels. Each label owns a disjoint region of the Philox counter space,
/// so draws from one stream never shift draws in another.
enum class Stream : std::uint32_t {
  JumpTimes = 1,
  JumpSizes = 2,
  GaussianIncrements = 3,
  SchemeComponent1 = 11,
  SchemeComponent2 = 12,
};

/// Sequential view over one Philox sub-stream keyed by a 64-bit seed.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, Stream stream);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }
  /// Standard normal via Box–Muller; pairs are consumed in order.
  double normal();
  /// Exponential with the given rate (> 0).
  double exponential(double rate);

  [[nodiscard]] std::uint64_t blocks_used() const { return block_; }

 private:
  std::uint32_t next_word();

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned pos_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hyvar

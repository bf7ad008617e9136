// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "bloomtree/hash.hpp"

namespace bloomtree {

/// Filter geometry shared by prover and verifier.
///
/// `m` is always `chunk_size * 8 * 2^L`, so the filter splits into a
/// power-of-two number of chunks and every Merkle leaf is a real chunk.
struct BloomParams {
  std::uint64_t m = 0;
  std::uint32_t k = 0;
  std::uint32_t chunk_size = 0;

  static constexpr std::uint32_t kMaxChunkSize = 65536;
  /// Upper bound on k; keeps index vectors for untrusted params bounded.
  static constexpr std::uint32_t kMaxK = 1U << 20;

  std::uint64_t chunk_bits() const noexcept { return std::uint64_t{chunk_size} * 8; }
  std::uint64_t chunk_count() const noexcept { return m / chunk_bits(); }
  std::uint64_t byte_count() const noexcept { return m / 8; }
  /// log2(chunk_count); only meaningful on valid params.
  unsigned depth() const noexcept;

  bool valid() const noexcept;
  /// Throws std::invalid_argument naming the broken invariant.
  void validate() const;

  friend bool operator==(const BloomParams&, const BloomParams&) = default;
};

/// ceil(n * -ln(p) / ln(2)^2), before padding to a chunk multiple.
std::uint64_t raw_bit_count(std::uint64_t n, double p);

/// Sizes a filter for `n` elements at target false-positive rate `p`, then
/// pads m up to the next power-of-two chunk count and picks k for the padded m.
BloomParams derive_params(std::uint64_t n, double p, std::uint32_t chunk_size);

/// (1 - (1 - 1/m)^(k n))^k
double fpr(std::uint64_t m, std::uint32_t k, std::uint64_t n);

/// k bit positions for `element`: (h1 + i*h2) mod m, where h1 and h2 are the
/// first two little-endian words of SHA-256(element) and h2 is forced odd.
/// Duplicates are kept, order is i = 0..k-1.
std::vector<std::uint64_t> indices(ByteView element, const BloomParams& params);

class BloomFilter {
 public:
  explicit BloomFilter(const BloomParams& params);
  /// Adopts existing filter bytes; size must be exactly m/8.
  BloomFilter(const BloomParams& params, Bytes bits);

  const BloomParams& params() const noexcept { return params_; }
  const Bytes& bytes() const noexcept { return bits_; }
  ByteView chunk(std::uint64_t chunk_index) const;

  void insert(ByteView element);
  bool contains(ByteView element) const;

  bool test_bit(std::uint64_t bit) const noexcept { return (bits_[bit >> 3] >> (bit & 7)) & 1U; }
  void set_bit(std::uint64_t bit) noexcept { bits_[bit >> 3] |= static_cast<std::uint8_t>(1U << (bit & 7)); }
  std::uint64_t popcount() const noexcept;

  friend bool operator==(const BloomFilter&, const BloomFilter&) = default;

 private:
  BloomParams params_;
  Bytes bits_;
};

}  // namespace bloomtree

// SPDX-License-Identifier: Apache-2.0
#include "bloomtree/bloom.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bloomtree {

unsigned BloomParams::depth() const noexcept {
  return static_cast<unsigned>(std::countr_zero(chunk_count()));
}

bool BloomParams::valid() const noexcept {
  if (k == 0 || k > kMaxK || chunk_size == 0 || chunk_size > kMaxChunkSize) return false;
  if (m < chunk_bits() || m % chunk_bits() != 0) return false;
  return std::has_single_bit(chunk_count());
}

void BloomParams::validate() const {
  if (k == 0 || k > kMaxK) throw std::invalid_argument("bloom params: k must be in [1, 2^20]");
  if (chunk_size == 0 || chunk_size > kMaxChunkSize) {
    throw std::invalid_argument("bloom params: chunk_size must be in [1, 65536], got " +
                                std::to_string(chunk_size));
  }
  if (m < chunk_bits() || m % chunk_bits() != 0 || !std::has_single_bit(chunk_count())) {
    throw std::invalid_argument("bloom params: m=" + std::to_string(m) +
                                " is not chunk_size*8 times a power of two");
  }
}

std::uint64_t raw_bit_count(std::uint64_t n, double p) {
  if (n == 0) throw std::invalid_argument("derive_params: n must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("derive_params: p must lie in (0, 1)");
  const double ln2 = std::numbers::ln2;
  double bits = std::ceil(static_cast<double>(n) * -std::log(p) / (ln2 * ln2));
  if (!(bits < 0x1p62)) throw std::invalid_argument("derive_params: filter too large");
  return static_cast<std::uint64_t>(bits);
}

BloomParams derive_params(std::uint64_t n, double p, std::uint32_t chunk_size) {
  std::uint64_t m_raw = raw_bit_count(n, p);
  if (chunk_size == 0 || chunk_size > BloomParams::kMaxChunkSize) {
    throw std::invalid_argument("derive_params: chunk_size must be in [1, 65536]");
  }
  BloomParams params;
  params.chunk_size = chunk_size;
  params.m = params.chunk_bits();
  while (params.m < m_raw) params.m <<= 1;

  double k = std::round(static_cast<double>(params.m) / static_cast<double>(n) * std::numbers::ln2);
  if (k > BloomParams::kMaxK) {
    throw std::invalid_argument("derive_params: k overflows");
  }
  params.k = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(k));
  return params;
}

double fpr(std::uint64_t m, std::uint32_t k, std::uint64_t n) {
  if (m == 0) throw std::invalid_argument("fpr: m must be >= 1");
  if (k == 0) throw std::invalid_argument("fpr: k must be >= 1");
  if (n == 0) return 0.0;
  // (1 - 1/m)^(kn) as exp(kn * log1p(-1/m)); m == 1 gives log1p(-1) = -inf -> 0.
  double kn = static_cast<double>(k) * static_cast<double>(n);
  double untouched = std::exp(kn * std::log1p(-1.0 / static_cast<double>(m)));
  return std::pow(1.0 - untouched, static_cast<double>(k));
}

namespace {

std::uint64_t load_le64(const std::uint8_t* p) noexcept {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

std::vector<std::uint64_t> indices(ByteView element, const BloomParams& params) {
  Digest d = sha256(element);
  std::uint64_t h1 = load_le64(d.data());
  std::uint64_t h2 = load_le64(d.data() + 8) | 1U;
  std::vector<std::uint64_t> out(params.k);
  std::uint64_t acc = h1;
  for (auto& idx : out) {
    idx = acc % params.m;
    acc += h2;  // wraps mod 2^64
  }
  return out;
}

BloomFilter::BloomFilter(const BloomParams& params) : params_(params) {
  params_.validate();
  bits_.assign(params_.byte_count(), 0);
}

BloomFilter::BloomFilter(const BloomParams& params, Bytes bits) : params_(params), bits_(std::move(bits)) {
  params_.validate();
  if (bits_.size() != params_.byte_count()) {
    throw std::invalid_argument("bloom filter: expected " + std::to_string(params_.byte_count()) +
                                " bytes, got " + std::to_string(bits_.size()));
  }
}

ByteView BloomFilter::chunk(std::uint64_t chunk_index) const {
  if (chunk_index >= params_.chunk_count()) throw std::out_of_range("bloom filter: chunk index out of range");
  return ByteView(bits_).subspan(chunk_index * params_.chunk_size, params_.chunk_size);
}

void BloomFilter::insert(ByteView element) {
  for (auto idx : indices(element, params_)) set_bit(idx);
}

bool BloomFilter::contains(ByteView element) const {
  for (auto idx : indices(element, params_)) {
    if (!test_bit(idx)) return false;
  }
  return true;
}

std::uint64_t BloomFilter::popcount() const noexcept {
  std::uint64_t total = 0;
  for (auto b : bits_) total += static_cast<std::uint64_t>(std::popcount(b));
  return total;
}

}  // namespace bloomtree

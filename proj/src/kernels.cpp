// SPDX-License-Identifier: Apache-2.0
#include "bloomtree/kernels.hpp"

#include <stdexcept>

#include "bloomtree/bloom.hpp"
#include "bloomtree/bloom_tree.hpp"
#include "bloomtree/merkle.hpp"

namespace bloomtree::kernels {

namespace {

std::size_t chunk_count_of(ByteView filter_bytes, std::uint32_t chunk_size) {
  if (chunk_size == 0 || filter_bytes.size() % chunk_size != 0) {
    throw std::invalid_argument("hash_chunks: filter size is not a multiple of chunk_size");
  }
  return filter_bytes.size() / chunk_size;
}

void check_even(std::span<const Digest> level) {
  if (level.size() % 2 != 0) throw std::invalid_argument("hash_level: odd node count");
}

}  // namespace

namespace serial {

std::vector<Digest> hash_chunks(ByteView filter_bytes, std::uint32_t chunk_size) {
  const std::size_t count = chunk_count_of(filter_bytes, chunk_size);
  std::vector<Digest> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = leaf_hash(i, filter_bytes.subspan(i * chunk_size, chunk_size));
  }
  return out;
}

std::vector<Digest> hash_level(std::span<const Digest> level) {
  check_even(level);
  std::vector<Digest> out(level.size() / 2);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = merkle::node_hash(level[2 * j], level[2 * j + 1]);
  }
  return out;
}

std::uint64_t count_hits(const BloomFilter& filter, std::span<const Bytes> probes) {
  std::uint64_t hits = 0;
  for (const auto& p : probes) hits += filter.contains(p) ? 1 : 0;
  return hits;
}

}  // namespace serial

namespace parallel {

std::vector<Digest> hash_chunks(ByteView filter_bytes, std::uint32_t chunk_size) {
  const std::size_t count = chunk_count_of(filter_bytes, chunk_size);
  if (count < kParallelThreshold) return serial::hash_chunks(filter_bytes, chunk_size);
  std::vector<Digest> out(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = leaf_hash(u, filter_bytes.subspan(u * chunk_size, chunk_size));
  }
  return out;
}

std::vector<Digest> hash_level(std::span<const Digest> level) {
  if (level.size() / 2 < kParallelThreshold) return serial::hash_level(level);
  check_even(level);
  std::vector<Digest> out(level.size() / 2);
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < n; ++j) {
    const auto u = static_cast<std::size_t>(j);
    out[u] = merkle::node_hash(level[2 * u], level[2 * u + 1]);
  }
  return out;
}

std::uint64_t count_hits(const BloomFilter& filter, std::span<const Bytes> probes) {
  if (probes.size() < kParallelThreshold) return serial::count_hits(filter, probes);
  std::uint64_t hits = 0;
  const auto n = static_cast<std::int64_t>(probes.size());
#pragma omp parallel for schedule(static) reduction(+ : hits)
  for (std::int64_t i = 0; i < n; ++i) {
    hits += filter.contains(probes[static_cast<std::size_t>(i)]) ? 1 : 0;
  }
  return hits;
}

}  // namespace parallel

}  // namespace bloomtree::kernels

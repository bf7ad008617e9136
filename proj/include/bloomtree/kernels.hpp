// SPDX-License-Identifier: Apache-2.0
#pragma once

// Data-parallel inner loops of tree construction and filter probing.
//
// `serial` is the reference implementation; `parallel` is the OpenMP version
// used by the library. Both must produce byte-identical results, which the
// kernel tests check on every build.

#include <cstdint>
#include <span>
#include <vector>

#include "bloomtree/hash.hpp"

namespace bloomtree {
class BloomFilter;
}

namespace bloomtree::kernels {

namespace serial {

/// leaf_hash(i, chunk_i) for every chunk of `filter_bytes`.
std::vector<Digest> hash_chunks(ByteView filter_bytes, std::uint32_t chunk_size);
/// One tree level up: out[j] = node_hash(in[2j], in[2j+1]). Input size must be even.
std::vector<Digest> hash_level(std::span<const Digest> level);
/// Number of probes the filter reports as present.
std::uint64_t count_hits(const BloomFilter& filter, std::span<const Bytes> probes);

}  // namespace serial

namespace parallel {

std::vector<Digest> hash_chunks(ByteView filter_bytes, std::uint32_t chunk_size);
std::vector<Digest> hash_level(std::span<const Digest> level);
std::uint64_t count_hits(const BloomFilter& filter, std::span<const Bytes> probes);

}  // namespace parallel

/// Below this many items the parallel kernels run the serial loop.
inline constexpr std::size_t kParallelThreshold = 256;

}  // namespace bloomtree::kernels

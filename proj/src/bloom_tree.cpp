// SPDX-License-Identifier: Apache-2.0
#include "bloomtree/bloom_tree.hpp"

#include <algorithm>

#include "bloomtree/kernels.hpp"

namespace bloomtree {

Digest leaf_hash(std::uint64_t chunk_index, ByteView chunk) {
  std::array<std::uint8_t, 9> prefix{};
  prefix[0] = 0x00;
  for (int i = 0; i < 8; ++i) prefix[1 + i] = static_cast<std::uint8_t>(chunk_index >> (8 * i));
  return thread_hasher().update(prefix).update(chunk).finish();
}

BitLocation locate(std::uint64_t bit_index, const BloomParams& params) {
  const std::uint64_t bits = params.chunk_bits();
  return {bit_index / bits, bit_index % bits};
}

std::vector<std::uint64_t> chunk_set(ByteView element, const BloomParams& params) {
  std::vector<std::uint64_t> chunks;
  for (auto idx : indices(element, params)) chunks.push_back(locate(idx, params).chunk_index);
  std::sort(chunks.begin(), chunks.end());
  chunks.erase(std::unique(chunks.begin(), chunks.end()), chunks.end());
  return chunks;
}

const char* to_string(Verdict::Kind kind) noexcept {
  switch (kind) {
    case Verdict::Kind::MaybePresent: return "MaybePresent";
    case Verdict::Kind::DefinitelyAbsent: return "DefinitelyAbsent";
    case Verdict::Kind::Invalid: return "Invalid";
  }
  return "Invalid";
}

BloomTree BloomTree::build(BloomFilter filter) {
  auto leaves = kernels::parallel::hash_chunks(filter.bytes(), filter.params().chunk_size);
  auto tree = merkle::MerkleTree::build(std::move(leaves));
  return BloomTree(std::move(filter), std::move(tree));
}

Proof BloomTree::prove(ByteView element) const {
  const auto& p = params();
  std::vector<std::uint64_t> zero_chunks;
  std::vector<std::uint64_t> chunks;
  for (auto idx : indices(element, p)) {
    auto chunk = locate(idx, p).chunk_index;
    chunks.push_back(chunk);
    if (!filter_.test_bit(idx)) zero_chunks.push_back(chunk);
  }

  if (!zero_chunks.empty()) {
    AbsenceProof proof;
    proof.chunk_index = *std::min_element(zero_chunks.begin(), zero_chunks.end());
    auto bytes = filter_.chunk(proof.chunk_index);
    proof.chunk.assign(bytes.begin(), bytes.end());
    proof.path = merkle::prove_single(tree_, proof.chunk_index);
    return proof;
  }

  std::sort(chunks.begin(), chunks.end());
  chunks.erase(std::unique(chunks.begin(), chunks.end()), chunks.end());
  PresenceProof proof;
  proof.chunks.reserve(chunks.size());
  for (auto c : chunks) {
    auto bytes = filter_.chunk(c);
    proof.chunks.emplace_back(bytes.begin(), bytes.end());
  }
  proof.multiproof = merkle::prove_multi(tree_, chunks);
  proof.chunk_indices = std::move(chunks);
  return proof;
}

namespace {

bool chunk_bit(ByteView chunk, std::uint64_t local_bit) {
  return (chunk[local_bit >> 3] >> (local_bit & 7)) & 1U;
}

Verdict verify_presence(const Digest& root, const BloomParams& params, ByteView element,
                        const PresenceProof& proof) {
  if (proof.chunk_indices.size() != proof.chunks.size()) {
    return Verdict::invalid("presence: chunk index and chunk counts differ");
  }
  if (proof.chunk_indices != chunk_set(element, params)) {
    return Verdict::invalid("presence: chunk set does not match the element's chunks");
  }
  for (const auto& chunk : proof.chunks) {
    if (chunk.size() != params.chunk_size) return Verdict::invalid("presence: chunk has wrong size");
  }
  for (auto idx : indices(element, params)) {
    auto loc = locate(idx, params);
    auto it = std::lower_bound(proof.chunk_indices.begin(), proof.chunk_indices.end(), loc.chunk_index);
    const auto& chunk = proof.chunks[static_cast<std::size_t>(it - proof.chunk_indices.begin())];
    if (!chunk_bit(chunk, loc.local_bit)) {
      return Verdict::invalid("presence: required bit " + std::to_string(idx) + " is zero");
    }
  }
  std::vector<merkle::LeafEntry> leaves;
  leaves.reserve(proof.chunks.size());
  for (std::size_t i = 0; i < proof.chunks.size(); ++i) {
    leaves.push_back({proof.chunk_indices[i], leaf_hash(proof.chunk_indices[i], proof.chunks[i])});
  }
  if (!merkle::verify_multi(root, leaves, params.chunk_count(), proof.multiproof)) {
    return Verdict::invalid("presence: multiproof does not match root");
  }
  return Verdict::maybe_present();
}

Verdict verify_absence(const Digest& root, const BloomParams& params, ByteView element, const AbsenceProof& proof) {
  if (proof.chunk.size() != params.chunk_size) return Verdict::invalid("absence: chunk has wrong size");
  bool relevant = false;
  bool has_zero = false;
  for (auto idx : indices(element, params)) {
    auto loc = locate(idx, params);
    if (loc.chunk_index != proof.chunk_index) continue;
    relevant = true;
    if (!chunk_bit(proof.chunk, loc.local_bit)) has_zero = true;
  }
  if (!relevant) return Verdict::invalid("absence: chunk is not one of the element's chunks");
  if (!has_zero) return Verdict::invalid("absence: chunk has no zero at a required bit");
  if (!merkle::verify_single(root, leaf_hash(proof.chunk_index, proof.chunk), proof.chunk_index,
                             params.chunk_count(), proof.path)) {
    return Verdict::invalid("absence: Merkle path does not match root");
  }
  return Verdict::definitely_absent();
}

}  // namespace

Verdict verify(const Digest& root, const BloomParams& params, ByteView element, const Proof& proof) {
  if (!params.valid()) return Verdict::invalid("invalid filter parameters");
  return std::visit(
      [&](const auto& p) -> Verdict {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, PresenceProof>) {
          return verify_presence(root, params, element, p);
        } else {
          return verify_absence(root, params, element, p);
        }
      },
      proof);
}

}  // namespace bloomtree

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bloomtree/bloom.hpp"
#include "bloomtree/hash.hpp"
#include "bloomtree/merkle.hpp"

namespace bloomtree {

/// SHA-256(0x00 || chunk_index as u64 LE || chunk). Salting with the index
/// stops a prover from presenting one chunk's bytes as another chunk.
Digest leaf_hash(std::uint64_t chunk_index, ByteView chunk);

struct BitLocation {
  std::uint64_t chunk_index = 0;
  std::uint64_t local_bit = 0;
  friend bool operator==(const BitLocation&, const BitLocation&) = default;
};

/// 0-based chunk and in-chunk bit for a global filter bit.
BitLocation locate(std::uint64_t bit_index, const BloomParams& params);

/// Sorted, deduplicated chunk indices touched by `element`.
std::vector<std::uint64_t> chunk_set(ByteView element, const BloomParams& params);

/// All chunks holding the element's bits, plus a multiproof over them.
struct PresenceProof {
  std::vector<std::uint64_t> chunk_indices;
  std::vector<Bytes> chunks;
  merkle::MultiProof multiproof;
  friend bool operator==(const PresenceProof&, const PresenceProof&) = default;
};

/// One chunk with a zero at a required bit, plus its Merkle path.
struct AbsenceProof {
  std::uint64_t chunk_index = 0;
  Bytes chunk;
  merkle::SingleProof path;
  friend bool operator==(const AbsenceProof&, const AbsenceProof&) = default;
};

using Proof = std::variant<PresenceProof, AbsenceProof>;

class Verdict {
 public:
  enum class Kind { MaybePresent, DefinitelyAbsent, Invalid };

  static Verdict maybe_present() { return Verdict(Kind::MaybePresent, {}); }
  static Verdict definitely_absent() { return Verdict(Kind::DefinitelyAbsent, {}); }
  static Verdict invalid(std::string reason) { return Verdict(Kind::Invalid, std::move(reason)); }

  Kind kind() const noexcept { return kind_; }
  bool is_valid() const noexcept { return kind_ != Kind::Invalid; }
  /// Empty unless invalid.
  const std::string& reason() const noexcept { return reason_; }

 private:
  Verdict(Kind kind, std::string reason) : kind_(kind), reason_(std::move(reason)) {}
  Kind kind_;
  std::string reason_;
};

const char* to_string(Verdict::Kind kind) noexcept;

/// A Bloom filter committed under a Merkle root over its index-salted chunks.
class BloomTree {
 public:
  static BloomTree build(BloomFilter filter);

  const BloomFilter& filter() const noexcept { return filter_; }
  const BloomParams& params() const noexcept { return filter_.params(); }
  const merkle::MerkleTree& tree() const noexcept { return tree_; }
  const Digest& root() const noexcept { return tree_.root(); }

  /// Presence proof when every bit of the element is set, otherwise an
  /// absence proof for the lowest chunk holding one of its zero bits.
  Proof prove(ByteView element) const;

 private:
  BloomTree(BloomFilter filter, merkle::MerkleTree tree) : filter_(std::move(filter)), tree_(std::move(tree)) {}
  BloomFilter filter_;
  merkle::MerkleTree tree_;
};

/// Checks `proof` for `element` against a trusted root. Never throws on
/// malformed proofs; every failure is Verdict::Invalid with a reason.
Verdict verify(const Digest& root, const BloomParams& params, ByteView element, const Proof& proof);

}  // namespace bloomtree

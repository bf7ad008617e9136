// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bloomtree/hash.hpp"

namespace bloomtree::merkle {

/// SHA-256(0x01 || left || right)
Digest node_hash(const Digest& left, const Digest& right);

/// Complete binary Merkle tree. Level 0 holds the 2^L leaves, the last level
/// holds only the root. Immutable once built.
class MerkleTree {
 public:
  /// Leaf count must be a power of two (1 is allowed).
  static MerkleTree build(std::vector<Digest> leaves);

  const Digest& root() const noexcept { return levels_.back().front(); }
  std::uint64_t leaf_count() const noexcept { return levels_.front().size(); }
  unsigned depth() const noexcept { return static_cast<unsigned>(levels_.size() - 1); }
  const std::vector<std::vector<Digest>>& levels() const noexcept { return levels_; }
  const Digest& node(unsigned level, std::uint64_t position) const { return levels_.at(level).at(position); }

 private:
  explicit MerkleTree(std::vector<std::vector<Digest>> levels) : levels_(std::move(levels)) {}
  std::vector<std::vector<Digest>> levels_;
};

/// Sibling digests ordered bottom-up.
struct SingleProof {
  std::vector<Digest> path;
  friend bool operator==(const SingleProof&, const SingleProof&) = default;
};

/// Sibling digests in canonical consumption order (level by level, left to
/// right). Carries no positions: the verifier re-derives them from the leaf
/// indices it is checking.
struct MultiProof {
  std::vector<Digest> hashes;
  friend bool operator==(const MultiProof&, const MultiProof&) = default;
};

struct LeafEntry {
  std::uint64_t index = 0;
  Digest digest{};
};

SingleProof prove_single(const MerkleTree& tree, std::uint64_t leaf_index);

/// Bit t of `leaf_index` set means the running digest is the right child at
/// level t. Wrong proof length or non-power-of-two leaf count yields false.
bool verify_single(const Digest& root, const Digest& leaf, std::uint64_t leaf_index, std::uint64_t leaf_count,
                   const SingleProof& proof);

/// `leaf_indices` must be non-empty, strictly increasing and in range.
MultiProof prove_multi(const MerkleTree& tree, std::span<const std::uint64_t> leaf_indices);

/// True iff the entries (strictly increasing by index) fold up to `root`
/// using every proof digest exactly once.
bool verify_multi(const Digest& root, std::span<const LeafEntry> leaves, std::uint64_t leaf_count,
                  const MultiProof& proof);

}  // namespace bloomtree::merkle

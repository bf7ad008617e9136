// SPDX-License-Identifier: Apache-2.0
#include "bloomtree/merkle.hpp"

#include <bit>
#include <stdexcept>

#include "bloomtree/kernels.hpp"

namespace bloomtree::merkle {

Digest node_hash(const Digest& left, const Digest& right) {
  return thread_hasher().update(std::uint8_t{0x01}).update(left).update(right).finish();
}

MerkleTree MerkleTree::build(std::vector<Digest> leaves) {
  if (!std::has_single_bit(leaves.size())) {
    throw std::invalid_argument("merkle: leaf count must be a power of two, got " + std::to_string(leaves.size()));
  }
  std::vector<std::vector<Digest>> levels;
  levels.push_back(std::move(leaves));
  while (levels.back().size() > 1) {
    levels.push_back(kernels::parallel::hash_level(levels.back()));
  }
  return MerkleTree(std::move(levels));
}

SingleProof prove_single(const MerkleTree& tree, std::uint64_t leaf_index) {
  if (leaf_index >= tree.leaf_count()) throw std::out_of_range("merkle: leaf index out of range");
  SingleProof proof;
  proof.path.reserve(tree.depth());
  std::uint64_t pos = leaf_index;
  for (unsigned level = 0; level < tree.depth(); ++level, pos >>= 1) {
    proof.path.push_back(tree.node(level, pos ^ 1));
  }
  return proof;
}

bool verify_single(const Digest& root, const Digest& leaf, std::uint64_t leaf_index, std::uint64_t leaf_count,
                   const SingleProof& proof) {
  if (!std::has_single_bit(leaf_count) || leaf_index >= leaf_count) return false;
  if (proof.path.size() != static_cast<std::size_t>(std::countr_zero(leaf_count))) return false;
  Digest acc = leaf;
  std::uint64_t pos = leaf_index;
  for (const auto& sibling : proof.path) {
    acc = (pos & 1) ? node_hash(sibling, acc) : node_hash(acc, sibling);
    pos >>= 1;
  }
  return acc == root;
}

MultiProof prove_multi(const MerkleTree& tree, std::span<const std::uint64_t> leaf_indices) {
  if (leaf_indices.empty()) throw std::invalid_argument("merkle: multiproof needs at least one leaf");
  for (std::size_t i = 0; i < leaf_indices.size(); ++i) {
    if (leaf_indices[i] >= tree.leaf_count()) throw std::out_of_range("merkle: leaf index out of range");
    if (i > 0 && leaf_indices[i] <= leaf_indices[i - 1]) {
      throw std::invalid_argument("merkle: leaf indices must be strictly increasing");
    }
  }

  MultiProof proof;
  std::vector<std::uint64_t> known(leaf_indices.begin(), leaf_indices.end());
  std::vector<std::uint64_t> parents;
  for (unsigned level = 0; level < tree.depth(); ++level) {
    parents.clear();
    for (std::size_t i = 0; i < known.size(); ++i) {
      std::uint64_t pos = known[i];
      if ((pos & 1) == 0 && i + 1 < known.size() && known[i + 1] == pos + 1) {
        ++i;  // both children known
      } else {
        proof.hashes.push_back(tree.node(level, pos ^ 1));
      }
      parents.push_back(pos >> 1);
    }
    known.swap(parents);
  }
  return proof;
}

bool verify_multi(const Digest& root, std::span<const LeafEntry> leaves, std::uint64_t leaf_count,
                  const MultiProof& proof) {
  if (leaves.empty() || !std::has_single_bit(leaf_count)) return false;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i].index >= leaf_count) return false;
    if (i > 0 && leaves[i].index <= leaves[i - 1].index) return false;
  }
  // Every proof digest must be consumed; a proof longer than the worst case
  // is rejected before doing any hashing.
  const auto depth = static_cast<unsigned>(std::countr_zero(leaf_count));
  if (proof.hashes.size() > leaves.size() * depth) return false;

  std::vector<LeafEntry> known(leaves.begin(), leaves.end());
  std::vector<LeafEntry> parents;
  std::size_t next = 0;
  for (unsigned level = 0; level < depth; ++level) {
    parents.clear();
    for (std::size_t i = 0; i < known.size(); ++i) {
      const auto& cur = known[i];
      Digest parent;
      if ((cur.index & 1) == 0 && i + 1 < known.size() && known[i + 1].index == cur.index + 1) {
        parent = node_hash(cur.digest, known[i + 1].digest);
        ++i;
      } else {
        if (next == proof.hashes.size()) return false;
        const Digest& sibling = proof.hashes[next++];
        parent = (cur.index & 1) ? node_hash(sibling, cur.digest) : node_hash(cur.digest, sibling);
      }
      parents.push_back({cur.index >> 1, parent});
    }
    known.swap(parents);
  }
  return next == proof.hashes.size() && known.size() == 1 && known.front().digest == root;
}

}  // namespace bloomtree::merkle

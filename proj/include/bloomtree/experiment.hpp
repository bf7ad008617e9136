// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bloomtree/bloom.hpp"

namespace bloomtree::experiment {

struct ExperimentConfig {
  std::vector<std::uint32_t> chunk_sizes{8, 32, 64};
  std::vector<double> fprs{0.1, 0.01, 0.001};
  std::vector<std::uint64_t> ns{500, 1000, 5000, 10000};
  std::size_t sample_size = 100;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on empty lists or a zero sample size.
  void validate() const;
};

/// Proof sizes for one (chunk_size, fpr, n) cell, in codec-encoded bytes.
struct ExperimentRow {
  std::uint32_t chunk_size = 0;
  double fpr_target = 0;
  std::uint64_t n = 0;
  std::uint64_t m_bits = 0;
  std::uint32_t k = 0;
  std::uint64_t filter_bytes = 0;
  std::uint64_t absence_proof_bytes = 0;
  std::uint64_t median_presence_proof_bytes = 0;
  /// Digests in the absence specimen's Merkle path (not part of the CSV).
  std::uint64_t absence_digests = 0;

  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

/// Deterministic 16-byte elements drawn from a seeded mt19937_64.
class ElementStream {
 public:
  explicit ElementStream(std::uint64_t seed) : rng_(seed) {}
  Bytes next();

 private:
  std::mt19937_64 rng_;
};

/// Builds one filter with n inserted elements and measures its proofs.
/// Every measured proof is verified; a failure throws std::logic_error.
ExperimentRow run_cell(std::uint32_t chunk_size, double fpr, std::uint64_t n, std::size_t sample_size,
                       std::uint64_t seed);

/// Seed used for the cell at position `cell_index` of the cross product.
std::uint64_t cell_seed(std::uint64_t seed, std::size_t cell_index) noexcept;

/// Cross product chunk_sizes x fprs x ns, in that nesting order. Cells run in
/// parallel; row order is always the cross-product order.
std::vector<ExperimentRow> run_grid(const ExperimentConfig& config);

std::string to_csv(std::span<const ExperimentRow> rows);
std::string summary_table(std::span<const ExperimentRow> rows);

}  // namespace bloomtree::experiment

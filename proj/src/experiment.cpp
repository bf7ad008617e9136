// SPDX-License-Identifier: Apache-2.0
#include "bloomtree/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "bloomtree/bloom_tree.hpp"
#include "bloomtree/codec.hpp"

namespace bloomtree::experiment {

void ExperimentConfig::validate() const {
  if (chunk_sizes.empty() || fprs.empty() || ns.empty()) {
    throw std::invalid_argument("experiment: chunk_sizes, fprs and ns must be non-empty");
  }
  if (sample_size == 0) throw std::invalid_argument("experiment: sample_size must be >= 1");
}

Bytes ElementStream::next() {
  Bytes out(16);
  for (std::size_t word = 0; word < 2; ++word) {
    std::uint64_t v = rng_();
    for (std::size_t i = 0; i < 8; ++i) out[word * 8 + i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
  return out;
}

namespace {

std::string key_of(const Bytes& b) { return std::string(b.begin(), b.end()); }

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t seed, std::size_t cell_index) noexcept {
  return splitmix64(seed ^ splitmix64(cell_index));
}

ExperimentRow run_cell(std::uint32_t chunk_size, double fpr, std::uint64_t n, std::size_t sample_size,
                       std::uint64_t seed) {
  if (sample_size == 0) throw std::invalid_argument("run_cell: sample_size must be >= 1");
  const BloomParams params = derive_params(n, fpr, chunk_size);

  ElementStream stream(seed);
  std::vector<Bytes> inserted;
  std::unordered_set<std::string> seen;
  inserted.reserve(n);
  BloomFilter filter(params);
  while (inserted.size() < n) {
    auto e = stream.next();
    if (!seen.insert(key_of(e)).second) continue;
    filter.insert(e);
    inserted.push_back(std::move(e));
  }
  const auto tree = BloomTree::build(std::move(filter));

  ExperimentRow row;
  row.chunk_size = chunk_size;
  row.fpr_target = fpr;
  row.n = n;
  row.m_bits = params.m;
  row.k = params.k;
  row.filter_bytes = params.byte_count();

  // Inserted elements are already uniformly random, so the first ones form the sample.
  const std::size_t samples = std::min<std::size_t>(sample_size, inserted.size());
  std::vector<std::size_t> sizes;
  sizes.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    auto proof = tree.prove(inserted[i]);
    if (!std::holds_alternative<PresenceProof>(proof) ||
        verify(tree.root(), params, inserted[i], proof).kind() != Verdict::Kind::MaybePresent) {
      throw std::logic_error("run_cell: inserted element did not yield a valid presence proof");
    }
    sizes.push_back(codec::encode_proof(params, proof).size());
  }
  std::sort(sizes.begin(), sizes.end());
  row.median_presence_proof_bytes = sizes[(sizes.size() - 1) / 2];

  const std::size_t max_draws = 10 * sample_size;
  bool found = false;
  for (std::size_t draw = 0; draw < max_draws && !found; ++draw) {
    auto e = stream.next();
    if (seen.contains(key_of(e))) continue;
    auto proof = tree.prove(e);
    const auto* absence = std::get_if<AbsenceProof>(&proof);
    if (absence == nullptr) continue;
    if (verify(tree.root(), params, e, proof).kind() != Verdict::Kind::DefinitelyAbsent) {
      throw std::logic_error("run_cell: absence proof failed to verify");
    }
    row.absence_proof_bytes = codec::encode_proof(params, proof).size();
    row.absence_digests = absence->path.path.size();
    found = true;
  }
  if (!found) {
    throw std::runtime_error("run_cell: no absence-yielding element in " + std::to_string(max_draws) + " draws");
  }
  return row;
}

std::vector<ExperimentRow> run_grid(const ExperimentConfig& config) {
  config.validate();
  struct Cell {
    std::uint32_t chunk_size;
    double fpr;
    std::uint64_t n;
  };
  std::vector<Cell> cells;
  for (auto cs : config.chunk_sizes) {
    for (auto p : config.fprs) {
      for (auto n : config.ns) cells.push_back({cs, p, n});
    }
  }

  std::vector<ExperimentRow> rows(cells.size());
  std::vector<std::string> errors(cells.size());
  const auto count = static_cast<std::int64_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      rows[u] = run_cell(cells[u].chunk_size, cells[u].fpr, cells[u].n, config.sample_size,
                         cell_seed(config.seed, u));
    } catch (const std::exception& e) {
      errors[u] = e.what();
    }
  }
  for (const auto& err : errors) {
    if (!err.empty()) throw std::runtime_error(err);
  }
  return rows;
}

std::string to_csv(std::span<const ExperimentRow> rows) {
  std::ostringstream out;
  out << "chunk_size,fpr,n,m_bits,k,filter_bytes,absence_bytes,median_presence_bytes\n";
  for (const auto& r : rows) {
    out << r.chunk_size << ',' << r.fpr_target << ',' << r.n << ',' << r.m_bits << ',' << r.k << ','
        << r.filter_bytes << ',' << r.absence_proof_bytes << ',' << r.median_presence_proof_bytes << '\n';
  }
  return out.str();
}

std::string summary_table(std::span<const ExperimentRow> rows) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%6s %7s %6s %9s %4s %9s %8s %9s %9s\n", "chunk", "fpr", "n", "m_bits", "k",
                "filter_B", "absent_B", "present_B", "present_%");
  out += line;
  for (const auto& r : rows) {
    double pct = 100.0 * static_cast<double>(r.median_presence_proof_bytes) / static_cast<double>(r.filter_bytes);
    std::snprintf(line, sizeof line, "%6u %7g %6llu %9llu %4u %9llu %8llu %9llu %8.2f%%\n", r.chunk_size,
                  r.fpr_target, static_cast<unsigned long long>(r.n), static_cast<unsigned long long>(r.m_bits), r.k,
                  static_cast<unsigned long long>(r.filter_bytes),
                  static_cast<unsigned long long>(r.absence_proof_bytes),
                  static_cast<unsigned long long>(r.median_presence_proof_bytes), pct);
    out += line;
  }
  return out;
}

}  // namespace bloomtree::experiment

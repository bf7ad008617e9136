// SPDX-License-Identifier: Apache-2.0
//
// bloomtree: build Bloom trees, produce and check presence/absence proofs,
// and run the proof-size experiment grid.
//
// Exit codes: 0 success or valid proof, 1 invalid proof, 2 usage error,
// 3 I/O or format error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <string>

#include "bloomtree/bloom.hpp"
#include "bloomtree/bloom_tree.hpp"
#include "bloomtree/codec.hpp"
#include "bloomtree/experiment.hpp"

namespace {

using namespace bloomtree;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read " + path);
  return data;
}

void write_file(const std::string& path, ByteView data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("cannot write " + path);
}

/// Newline-delimited elements; a final newline does not start a new element.
std::vector<Bytes> read_elements(const std::string& path) {
  Bytes data = read_file(path);
  std::vector<Bytes> out;
  auto begin = data.begin();
  while (begin != data.end()) {
    auto nl = std::find(begin, data.end(), std::uint8_t{'\n'});
    out.emplace_back(begin, nl);
    begin = nl == data.end() ? nl : nl + 1;
  }
  return out;
}

BloomTree load_filter(const std::string& path) {
  try {
    return codec::decode_filter(read_file(path));
  } catch (const codec::CodecError& e) {
    throw IoError(path + ": " + e.what());
  }
}

struct ElementArgs {
  std::string element;
  std::string element_file;
  CLI::Option* element_opt = nullptr;
  CLI::Option* file_opt = nullptr;

  void add_to(CLI::App& cmd) {
    element_opt = cmd.add_option("--element", element, "Element as a literal string");
    file_opt = cmd.add_option("--element-file", element_file, "File whose entire contents are the element");
    element_opt->excludes(file_opt);
  }
  Bytes get() const {
    if (file_opt->count() > 0) return read_file(element_file);
    if (element_opt->count() > 0) {
      auto v = as_bytes(element);
      return Bytes(v.begin(), v.end());
    }
    throw UsageError("one of --element or --element-file is required");
  }
};

int cmd_params(std::uint64_t n, double fpr_target, std::uint32_t chunk_size) {
  BloomParams params;
  std::uint64_t m_raw = 0;
  try {
    m_raw = raw_bit_count(n, fpr_target);
    params = derive_params(n, fpr_target, chunk_size);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::printf("m_raw=%llu\n", static_cast<unsigned long long>(m_raw));
  std::printf("m=%llu\n", static_cast<unsigned long long>(params.m));
  std::printf("k=%u\n", params.k);
  std::printf("chunk_size=%u\n", params.chunk_size);
  std::printf("chunks=%llu\n", static_cast<unsigned long long>(params.chunk_count()));
  std::printf("filter_bytes=%llu\n", static_cast<unsigned long long>(params.byte_count()));
  std::printf("predicted_fpr=%.6g\n", fpr(params.m, params.k, n));
  return kExitOk;
}

int cmd_build(const std::string& elements_path, std::optional<std::uint64_t> n, double fpr_target,
              std::uint32_t chunk_size, const std::string& out_path) {
  auto elements = read_elements(elements_path);
  // Sized for distinct elements so duplicate lines do not change the filter.
  std::set<Bytes> distinct(elements.begin(), elements.end());
  std::uint64_t expected = n.value_or(std::max<std::uint64_t>(1, distinct.size()));
  BloomParams params;
  try {
    params = derive_params(expected, fpr_target, chunk_size);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  BloomFilter filter(params);
  for (const auto& e : distinct) filter.insert(e);
  auto tree = BloomTree::build(std::move(filter));
  write_file(out_path, codec::encode_filter(tree));
  std::printf("elements=%zu m=%llu k=%u chunks=%llu root=%s\n", distinct.size(),
              static_cast<unsigned long long>(params.m), params.k,
              static_cast<unsigned long long>(params.chunk_count()), to_hex(tree.root()).c_str());
  return kExitOk;
}

int cmd_prove(const std::string& filter_path, const ElementArgs& element, const std::string& out_path) {
  auto tree = load_filter(filter_path);
  auto proof = tree.prove(element.get());
  write_file(out_path, codec::encode_proof(tree.params(), proof));
  std::puts(std::holds_alternative<PresenceProof>(proof) ? "presence" : "absence");
  return kExitOk;
}

int report(const Verdict& v) {
  if (v.is_valid()) {
    std::puts(to_string(v.kind()));
    return kExitOk;
  }
  std::printf("Invalid: %s\n", v.reason().c_str());
  return kExitInvalid;
}

struct VerifyArgs {
  std::string root_hex;
  std::string filter_path;
  std::string proof_path;
  std::optional<std::uint64_t> m;
  std::optional<std::uint32_t> k;
  std::optional<std::uint32_t> chunk_size;
};

int cmd_verify(const VerifyArgs& args, const ElementArgs& element) {
  Digest root{};
  std::optional<BloomParams> trusted;
  if (!args.filter_path.empty()) {
    auto tree = load_filter(args.filter_path);
    root = tree.root();
    trusted = tree.params();
  } else {
    auto parsed = digest_from_hex(args.root_hex);
    if (!parsed) throw UsageError("--root must be 64 hex characters");
    root = *parsed;
  }
  if (args.m || args.k || args.chunk_size) {
    if (!(args.m && args.k && args.chunk_size)) throw UsageError("--m, --k and --chunk-size must be given together");
    if (trusted) throw UsageError("--m/--k/--chunk-size cannot be combined with --filter");
    trusted = BloomParams{*args.m, *args.k, *args.chunk_size};
  }

  auto bytes = read_file(args.proof_path);
  auto value = element.get();
  codec::ProofEnvelope env;
  try {
    env = codec::decode_proof(bytes);
  } catch (const codec::CodecError& e) {
    return report(Verdict::invalid(std::string("malformed proof: ") + e.what()));
  }
  if (trusted && !(*trusted == env.params)) {
    return report(Verdict::invalid("proof params do not match the verifier's params"));
  }
  return report(verify(root, env.params, value, env.proof));
}

int cmd_root(const std::string& filter_path) {
  std::puts(to_hex(load_filter(filter_path).root()).c_str());
  return kExitOk;
}

int cmd_experiment(experiment::ExperimentConfig config, const std::string& out_path) {
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto rows = experiment::run_grid(config);
  auto csv = experiment::to_csv(rows);
  if (!out_path.empty()) write_file(out_path, as_bytes(csv));
  std::fputs(experiment::summary_table(rows).c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bloom tree: Merkle-committed Bloom filters with presence and absence proofs"};
  app.require_subcommand(1, 1);

  std::uint64_t n = 0;
  double fpr_target = 0;
  std::uint32_t chunk_size = 0;
  auto* params_cmd = app.add_subcommand("params", "Print derived filter geometry");
  params_cmd->add_option("--n", n, "Expected element count")->required();
  params_cmd->add_option("--fpr", fpr_target, "Target false-positive rate")->required();
  params_cmd->add_option("--chunk-size", chunk_size, "Chunk size in bytes")->required();

  std::string elements_path, out_path, filter_path;
  std::optional<std::uint64_t> build_n;
  auto* build_cmd = app.add_subcommand("build", "Build a filter file from newline-delimited elements");
  build_cmd->add_option("--elements", elements_path, "Elements file, one element per line")->required();
  build_cmd->add_option("--n", build_n, "Expected element count (default: distinct lines)");
  build_cmd->add_option("--fpr", fpr_target, "Target false-positive rate")->required();
  build_cmd->add_option("--chunk-size", chunk_size, "Chunk size in bytes")->required();
  build_cmd->add_option("--out", out_path, "Output filter file")->required();

  ElementArgs prove_element;
  auto* prove_cmd = app.add_subcommand("prove", "Write a presence or absence proof for an element");
  prove_cmd->add_option("--filter", filter_path, "Filter file")->required();
  prove_element.add_to(*prove_cmd);
  prove_cmd->add_option("--out", out_path, "Output proof file")->required();

  VerifyArgs verify_args;
  ElementArgs verify_element;
  auto* verify_cmd = app.add_subcommand("verify", "Verify a proof against a root");
  auto* root_opt = verify_cmd->add_option("--root", verify_args.root_hex, "Trusted root as lowercase hex");
  auto* vfilter_opt = verify_cmd->add_option("--filter", verify_args.filter_path, "Filter file to take the root from");
  root_opt->excludes(vfilter_opt);
  verify_element.add_to(*verify_cmd);
  verify_cmd->add_option("--proof", verify_args.proof_path, "Proof file")->required();
  verify_cmd->add_option("--m", verify_args.m, "Expected filter size in bits");
  verify_cmd->add_option("--k", verify_args.k, "Expected hash count");
  verify_cmd->add_option("--chunk-size", verify_args.chunk_size, "Expected chunk size in bytes");

  auto* root_cmd = app.add_subcommand("root", "Print the root of a filter file");
  root_cmd->add_option("--filter", filter_path, "Filter file")->required();

  experiment::ExperimentConfig config;
  std::string csv_path;
  auto* exp_cmd = app.add_subcommand("experiment", "Run the proof-size experiment grid");
  exp_cmd->add_option("--out", csv_path, "CSV output path");
  exp_cmd->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
  exp_cmd->add_option("--chunk-sizes", config.chunk_sizes, "Chunk sizes in bytes")->delimiter(',');
  exp_cmd->add_option("--fprs", config.fprs, "Target false-positive rates")->delimiter(',');
  exp_cmd->add_option("--ns", config.ns, "Element counts")->delimiter(',');
  exp_cmd->add_option("--sample-size", config.sample_size, "Presence proofs sampled per cell")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*params_cmd) return cmd_params(n, fpr_target, chunk_size);
    if (*build_cmd) return cmd_build(elements_path, build_n, fpr_target, chunk_size, out_path);
    if (*prove_cmd) return cmd_prove(filter_path, prove_element, out_path);
    if (*verify_cmd) {
      if (root_opt->count() == 0 && vfilter_opt->count() == 0) throw UsageError("one of --root or --filter is required");
      return cmd_verify(verify_args, verify_element);
    }
    if (*root_cmd) return cmd_root(filter_path);
    if (*exp_cmd) return cmd_experiment(config, csv_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

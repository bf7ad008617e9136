// SPDX-License-Identifier: Apache-2.0
#include "bloomtree/codec.hpp"

#include <array>
#include <limits>
#include <string>

namespace bloomtree::codec {

namespace {

constexpr std::array<std::uint8_t, 4> kFilterMagic{'B', 'L', 'T', 'R'};
constexpr std::array<std::uint8_t, 4> kProofMagic{'B', 'L', 'P', 'F'};

class Writer {
 public:
  explicit Writer(std::size_t reserve) { out_.reserve(reserve); }

  void raw(ByteView bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  template <typename T>
  void le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void params(const BloomParams& p) {
    le<std::uint64_t>(p.m);
    le<std::uint32_t>(p.k);
    le<std::uint32_t>(p.chunk_size);
  }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Every length is checked against the remaining input before anything is
// allocated, so hostile length fields cannot force large allocations.
class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  std::size_t remaining() const noexcept { return data_.size() - pos_; }

  ByteView take(std::size_t n, const char* what) {
    if (n > remaining()) {
      throw CodecError(CodecErrc::truncated, std::string("truncated payload reading ") + what);
    }
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint8_t u8(const char* what) { return take(1, what)[0]; }
  template <typename T>
  T le(const char* what) {
    auto b = take(sizeof(T), what);
    T v = 0;
    for (std::size_t i = sizeof(T); i-- > 0;) v = static_cast<T>((v << 8) | b[i]);
    return v;
  }
  BloomParams params() {
    BloomParams p;
    p.m = le<std::uint64_t>("m");
    p.k = le<std::uint32_t>("k");
    p.chunk_size = le<std::uint32_t>("chunk_size");
    if (!p.valid()) {
      throw CodecError(CodecErrc::invalid_params, "invalid params m=" + std::to_string(p.m) +
                                                      " k=" + std::to_string(p.k) +
                                                      " chunk_size=" + std::to_string(p.chunk_size));
    }
    return p;
  }
  void header(const std::array<std::uint8_t, 4>& magic) {
    auto m = take(magic.size(), "magic");
    if (!std::equal(m.begin(), m.end(), magic.begin())) throw CodecError(CodecErrc::bad_magic, "bad magic");
    auto version = u8("version");
    if (version != kVersion) {
      throw CodecError(CodecErrc::unsupported_version, "unsupported version " + std::to_string(version));
    }
  }
  void finish() const {
    if (remaining() != 0) {
      throw CodecError(CodecErrc::trailing_bytes, std::to_string(remaining()) + " trailing bytes");
    }
  }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

Digest read_digest(Reader& r) {
  Digest d{};
  auto b = r.take(d.size(), "digest");
  std::copy(b.begin(), b.end(), d.begin());
  return d;
}

std::vector<Digest> read_digests(Reader& r) {
  auto count = r.le<std::uint16_t>("digest count");
  if (std::size_t{count} * 32 > r.remaining()) throw CodecError(CodecErrc::truncated, "truncated digest list");
  std::vector<Digest> out(count);
  for (auto& d : out) d = read_digest(r);
  return out;
}

std::uint16_t checked_u16(std::size_t n, const char* what) {
  if (n > std::numeric_limits<std::uint16_t>::max()) {
    throw CodecError(CodecErrc::too_large, std::string(what) + " does not fit in 16 bits");
  }
  return static_cast<std::uint16_t>(n);
}

}  // namespace

const char* to_string(CodecErrc errc) noexcept {
  switch (errc) {
    case CodecErrc::bad_magic: return "bad magic";
    case CodecErrc::unsupported_version: return "unsupported version";
    case CodecErrc::bad_kind: return "bad proof kind";
    case CodecErrc::invalid_params: return "invalid params";
    case CodecErrc::truncated: return "truncated payload";
    case CodecErrc::trailing_bytes: return "trailing bytes";
    case CodecErrc::root_mismatch: return "root mismatch";
    case CodecErrc::too_large: return "value too large";
  }
  return "unknown";
}

Bytes encode_filter(const BloomTree& tree) {
  const auto& bytes = tree.filter().bytes();
  Writer w(kFilterHeaderSize + bytes.size() + 32);
  w.raw(kFilterMagic);
  w.u8(kVersion);
  w.params(tree.params());
  w.raw(bytes);
  w.raw(tree.root());
  return w.take();
}

BloomTree decode_filter(ByteView data) {
  Reader r(data);
  r.header(kFilterMagic);
  auto params = r.params();
  auto bits = r.take(params.byte_count(), "filter bytes");
  auto stored_root = read_digest(r);
  r.finish();
  auto tree = BloomTree::build(BloomFilter(params, Bytes(bits.begin(), bits.end())));
  if (tree.root() != stored_root) throw CodecError(CodecErrc::root_mismatch, "stored root does not match filter");
  return tree;
}

std::size_t encoded_size(const BloomParams& params, const Proof& proof) noexcept {
  return std::visit(
      [&](const auto& p) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, PresenceProof>) {
          std::size_t chunk_bytes = 0;
          for (const auto& c : p.chunks) chunk_bytes += c.size();
          return kProofHeaderSize + 2 + 8 * p.chunk_indices.size() + chunk_bytes + 2 + 32 * p.multiproof.hashes.size();
        } else {
          (void)params;
          return kProofHeaderSize + 8 + p.chunk.size() + 2 + 32 * p.path.path.size();
        }
      },
      proof);
}

Bytes encode_proof(const BloomParams& params, const Proof& proof) {
  Writer w(encoded_size(params, proof));
  w.raw(kProofMagic);
  w.u8(kVersion);
  if (const auto* presence = std::get_if<PresenceProof>(&proof)) {
    if (presence->chunk_indices.size() != presence->chunks.size()) {
      throw std::invalid_argument("encode_proof: chunk index and chunk counts differ");
    }
    w.u8(kPresenceKind);
    w.params(params);
    w.le(checked_u16(presence->chunks.size(), "chunk count"));
    for (auto idx : presence->chunk_indices) w.le<std::uint64_t>(idx);
    for (const auto& c : presence->chunks) {
      if (c.size() != params.chunk_size) throw std::invalid_argument("encode_proof: chunk has wrong size");
      w.raw(c);
    }
    w.le(checked_u16(presence->multiproof.hashes.size(), "multiproof length"));
    for (const auto& d : presence->multiproof.hashes) w.raw(d);
  } else {
    const auto& absence = std::get<AbsenceProof>(proof);
    if (absence.chunk.size() != params.chunk_size) {
      throw std::invalid_argument("encode_proof: chunk has wrong size");
    }
    w.u8(kAbsenceKind);
    w.params(params);
    w.le<std::uint64_t>(absence.chunk_index);
    w.raw(absence.chunk);
    w.le(checked_u16(absence.path.path.size(), "path length"));
    for (const auto& d : absence.path.path) w.raw(d);
  }
  return w.take();
}

ProofEnvelope decode_proof(ByteView data) {
  Reader r(data);
  r.header(kProofMagic);
  auto kind = r.u8("kind");
  if (kind != kPresenceKind && kind != kAbsenceKind) {
    throw CodecError(CodecErrc::bad_kind, "unknown proof kind " + std::to_string(kind));
  }
  ProofEnvelope env;
  env.params = r.params();
  const std::size_t chunk_size = env.params.chunk_size;

  if (kind == kPresenceKind) {
    PresenceProof p;
    auto count = r.le<std::uint16_t>("chunk count");
    if (std::size_t{count} * (8 + chunk_size) > r.remaining()) {
      throw CodecError(CodecErrc::truncated, "truncated chunk list");
    }
    p.chunk_indices.resize(count);
    for (auto& idx : p.chunk_indices) idx = r.le<std::uint64_t>("chunk index");
    p.chunks.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      auto c = r.take(chunk_size, "chunk");
      p.chunks.emplace_back(c.begin(), c.end());
    }
    p.multiproof.hashes = read_digests(r);
    env.proof = std::move(p);
  } else {
    AbsenceProof p;
    p.chunk_index = r.le<std::uint64_t>("chunk index");
    auto c = r.take(chunk_size, "chunk");
    p.chunk.assign(c.begin(), c.end());
    p.path.path = read_digests(r);
    env.proof = std::move(p);
  }
  r.finish();
  return env;
}

}  // namespace bloomtree::codec

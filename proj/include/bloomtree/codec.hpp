// SPDX-License-Identifier: Apache-2.0
#pragma once

// Bit-exact file formats. All integers are fixed-width little-endian.
//
// FilterFile: "BLTR" | 0x01 | m:u64 | k:u32 | chunk_size:u32 | filter (m/8) | root (32)
// ProofFile:  "BLPF" | 0x01 | kind:u8 | m:u64 | k:u32 | chunk_size:u32 | body
//   presence (kind 0x01): c:u16 | c x index:u64 | c x chunk | h:u16 | h x digest
//   absence  (kind 0x02): index:u64 | chunk | len:u16 | len x digest

#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "bloomtree/bloom_tree.hpp"

namespace bloomtree::codec {

enum class CodecErrc {
  bad_magic,
  unsupported_version,
  bad_kind,
  invalid_params,
  truncated,
  trailing_bytes,
  root_mismatch,
  too_large,  // encode only: a count does not fit its u16 field
};

const char* to_string(CodecErrc errc) noexcept;

class CodecError : public std::runtime_error {
 public:
  CodecError(CodecErrc errc, const std::string& what) : std::runtime_error(what), errc_(errc) {}
  CodecErrc errc() const noexcept { return errc_; }

 private:
  CodecErrc errc_;
};

inline constexpr std::size_t kFilterHeaderSize = 21;
inline constexpr std::size_t kProofHeaderSize = 22;
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::uint8_t kPresenceKind = 0x01;
inline constexpr std::uint8_t kAbsenceKind = 0x02;

Bytes encode_filter(const BloomTree& tree);
/// Rebuilds the tree and rejects files whose stored root disagrees.
BloomTree decode_filter(ByteView data);

/// A decoded proof together with the params echoed in its header.
struct ProofEnvelope {
  BloomParams params;
  Proof proof;
  friend bool operator==(const ProofEnvelope&, const ProofEnvelope&) = default;
};

Bytes encode_proof(const BloomParams& params, const Proof& proof);
ProofEnvelope decode_proof(ByteView data);

/// Encoded length without materializing the bytes.
std::size_t encoded_size(const BloomParams& params, const Proof& proof) noexcept;

}  // namespace bloomtree::codec

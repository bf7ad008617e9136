// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bloomtree {

using Digest = std::array<std::uint8_t, 32>;
using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) noexcept {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Incremental SHA-256. Not copyable; one instance per thread.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;
  Sha256(Sha256&&) noexcept;
  Sha256& operator=(Sha256&&) noexcept;

  Sha256& update(ByteView data);
  Sha256& update(std::uint8_t byte);
  /// Finalizes and resets the context so the instance can be reused.
  Digest finish();

 private:
  struct Ctx;
  std::unique_ptr<Ctx> ctx_;
};

Digest sha256(ByteView data);

/// Per-thread reusable context for hot hashing loops. Callers must finish()
/// before returning so the next user starts from a clean state.
Sha256& thread_hasher();

std::string to_hex(ByteView data);
/// Accepts exactly 64 hex characters, either case.
std::optional<Digest> digest_from_hex(std::string_view hex);

}  // namespace bloomtree

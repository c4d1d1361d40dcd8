#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace qvlasov {

/// 64-bit FNV-1a hash. Stable across platforms and builds.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Sixteen lower-case hex digits.
std::string to_hex(std::uint64_t value);

/// Parses the output of to_hex; returns false on malformed input.
bool from_hex(std::string_view text, std::uint64_t& value) noexcept;

}  // namespace qvlasov

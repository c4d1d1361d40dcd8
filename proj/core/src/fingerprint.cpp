#include "qvlasov/fingerprint.hpp"

#include <charconv>
#include <cstdio>

namespace qvlasov {

std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

bool from_hex(std::string_view text, std::uint64_t& value) noexcept {
    if (text.size() != 16) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace qvlasov

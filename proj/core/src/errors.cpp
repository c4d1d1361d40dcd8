#include "qvlasov/errors.hpp"

#include <cstdio>

namespace qvlasov {

ConfigError::ConfigError(std::string key, const std::string& what)
    : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

namespace {

std::string describe_failure(const std::string& reason, double P3, double t,
                             const std::array<double, 3>& s) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s (P3=%.17g, t=%.17g, f=%.6e, g=%.6e, w=%.6e)",
                  reason.c_str(), P3, t, s[0], s[1], s[2]);
    return buf;
}

}  // namespace

IntegrationError::IntegrationError(const std::string& reason, double P3, double t,
                                   std::array<double, 3> state)
    : Error(describe_failure(reason, P3, t, state)), P3_(P3), t_(t), state_(state) {}

IoError::IoError(std::filesystem::path path, const std::string& what)
    : Error(path.string() + ": " + what), path_(std::move(path)) {}

}  // namespace qvlasov

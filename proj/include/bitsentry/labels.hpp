#pragma once

#include <array>
#include <string>
#include <vector>

#include "bitsentry/error.hpp"

namespace bitsentry {

// The five-class scheme. Integer ids are dense, stable, and part of the
// on-disk formats (manifest CSV, bundles), so the order here never changes.
enum class ClassLabel : int {
    BenignAes = 0,
    MaliciousAes = 1,
    BenignRs232 = 2,
    MaliciousRs232 = 3,
    Empty = 4,
};

inline constexpr std::size_t kNumClasses = 5;

inline const std::array<std::string, kNumClasses>& class_label_names() {
    static const std::array<std::string, kNumClasses> names = {
        "benign_aes", "malicious_aes", "benign_rs232", "malicious_rs232", "empty"};
    return names;
}

inline const std::string& to_string(ClassLabel label) {
    return class_label_names()[static_cast<std::size_t>(label)];
}

inline ClassLabel class_label_from_string(const std::string& name) {
    const auto& names = class_label_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<ClassLabel>(i);
    throw Error(ErrorCode::InvalidManifest, "unknown label '" + name + "'");
}

inline std::vector<std::string> default_label_table() {
    const auto& names = class_label_names();
    return {names.begin(), names.end()};
}

}  // namespace bitsentry

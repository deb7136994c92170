#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bitsentry {

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t h = 0xCBF29CE484222325ULL) {
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s) {
    return fnv1a64(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

std::string to_hex(std::uint64_t v);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

// Little-endian IEEE-754 packing for the base64 matrix blocks in bundles.
std::string encode_doubles(std::span<const double> values);
std::vector<double> decode_doubles(const std::string& b64, std::size_t expected_count);

}  // namespace bitsentry

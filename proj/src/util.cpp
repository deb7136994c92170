#include "bitsentry/util.hpp"

#include <cstring>

#include "bitsentry/error.hpp"

namespace bitsentry {

namespace {
constexpr char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}
}  // namespace

std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back(kB64Alphabet[v & 63]);
    }
    const std::size_t rest = bytes.size() - i;
    if (rest == 1) {
        std::uint32_t v = bytes[i] << 16;
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back('=');
        out.push_back('=');
    } else if (rest == 2) {
        std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    // Strict: 4-character groups, '=' only in the last two slots of the
    // final group. Canonical bundles never produce the lenient forms.
    std::string compact;
    compact.reserve(text.size());
    for (char c : text)
        if (c != '\n' && c != '\r') compact.push_back(c);
    if (compact.size() % 4 != 0)
        throw Error(ErrorCode::BundleFormat, "base64 length is not a multiple of 4");

    std::vector<std::uint8_t> out;
    out.reserve(compact.size() / 4 * 3);
    for (std::size_t i = 0; i < compact.size(); i += 4) {
        int vals[4] = {0, 0, 0, 0};
        int pad = 0;
        for (int j = 0; j < 4; ++j) {
            const char c = compact[i + j];
            if (c == '=') {
                if (i + 4 != compact.size() || j < 2)
                    throw Error(ErrorCode::BundleFormat, "misplaced base64 padding");
                ++pad;
            } else {
                if (pad > 0) throw Error(ErrorCode::BundleFormat, "data after base64 padding");
                vals[j] = b64_value(c);
                if (vals[j] < 0) throw Error(ErrorCode::BundleFormat, "invalid base64 character");
            }
        }
        const std::uint32_t v = static_cast<std::uint32_t>(
            (vals[0] << 18) | (vals[1] << 12) | (vals[2] << 6) | vals[3]);
        out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
        if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
        if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    }
    return out;
}

std::string encode_doubles(std::span<const double> values) {
    std::vector<std::uint8_t> bytes(values.size() * 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &values[i], 8);
        for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<std::uint8_t>((bits >> (8 * b)) & 0xFF);
    }
    return base64_encode(bytes);
}

std::vector<double> decode_doubles(const std::string& b64, std::size_t expected_count) {
    const std::vector<std::uint8_t> bytes = base64_decode(b64);
    if (bytes.size() != expected_count * 8)
        throw Error(ErrorCode::BundleFormat,
                    "numeric block holds " + std::to_string(bytes.size() / 8) +
                        " values, expected " + std::to_string(expected_count));
    std::vector<double> out(expected_count);
    for (std::size_t i = 0; i < expected_count; ++i) {
        std::uint64_t bits = 0;
        for (int b = 7; b >= 0; --b) bits = (bits << 8) | bytes[i * 8 + b];
        std::memcpy(&out[i], &bits, 8);
    }
    return out;
}

}  // namespace bitsentry

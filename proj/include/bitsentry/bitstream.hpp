#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bitsentry/error.hpp"

namespace bitsentry {

// Largest file the parser accepts. Keeps memory bounded on small targets.
inline constexpr std::size_t kMaxBitstreamBytes = 64ull * 1024 * 1024;

// Vendor container metadata. Text fields are NUL-terminated on disk and
// stored here without the terminator.
struct HeaderInfo {
    std::string design_name;
    std::string part_name;
    std::string build_date;
    std::string build_time;
    std::uint32_t declared_length = 0;

    bool operator==(const HeaderInfo&) const = default;
};

struct BitstreamFile {
    std::optional<HeaderInfo> header;
    std::vector<std::uint8_t> payload;
    std::string source_path;
    std::vector<std::string> warnings;
};

// Parses a `.bit` container if the 13-byte preamble is present, otherwise
// treats the input as a headerless raw configuration image. Never errors on
// non-empty input unless the container magic is recognized but a record is
// truncated or inconsistent.
BitstreamFile parse_bitstream(const std::vector<std::uint8_t>& raw, const std::string& path);

// Reference encoder for the `.bit` container. Writes the fixed preamble,
// the a..d text records (NUL terminator appended), then the 'e' record with
// a 4-byte big-endian payload length. declared_length is taken from the
// payload size, not from header.declared_length.
std::vector<std::uint8_t> encode_bitstream(const HeaderInfo& header,
                                           const std::vector<std::uint8_t>& payload);

// Reads and parses a file, enforcing the size cap before loading.
BitstreamFile load_bitstream(const std::string& path);

}  // namespace bitsentry

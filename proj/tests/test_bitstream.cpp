#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "bitsentry/bitstream.hpp"

using namespace bitsentry;

namespace {

std::vector<std::uint8_t> sample_payload(std::size_t n) {
    std::vector<std::uint8_t> payload(n);
    std::iota(payload.begin(), payload.end(), std::uint8_t{1});
    return payload;
}

HeaderInfo sample_header() {
    HeaderInfo h;
    h.design_name = "top";
    h.part_name = "xc7z020clg400-1";
    h.build_date = "2025/01/01";
    h.build_time = "00:00:00";
    return h;
}

}  // namespace

TEST_CASE("encoded container round-trips through the parser") {
    const auto payload = sample_payload(64);
    const auto raw = encode_bitstream(sample_header(), payload);

    const BitstreamFile file = parse_bitstream(raw, "mem");
    REQUIRE(file.header.has_value());
    CHECK(file.header->design_name == "top");
    CHECK(file.header->part_name == "xc7z020clg400-1");
    CHECK(file.header->build_date == "2025/01/01");
    CHECK(file.header->build_time == "00:00:00");
    CHECK(file.header->declared_length == 64);
    CHECK(file.payload == payload);
    CHECK(file.warnings.empty());

    // Re-encoding the parsed fields reproduces the input byte-for-byte.
    CHECK(encode_bitstream(*file.header, file.payload) == raw);
}

TEST_CASE("bytes without the container preamble parse as a raw image") {
    std::vector<std::uint8_t> raw = {0xDE, 0xAD, 0xBE, 0xEF, 0x10, 0x20, 0x30, 0x40,
                                     0x51, 0x62, 0x73, 0x84, 0x95, 0xA6, 0xB7, 0xC8};
    const BitstreamFile file = parse_bitstream(raw, "raw");
    CHECK_FALSE(file.header.has_value());
    CHECK(file.payload == raw);
}

TEST_CASE("headerless fallback accepts any non-empty input") {
    for (int v = 0; v < 256; ++v) {
        std::vector<std::uint8_t> raw = {static_cast<std::uint8_t>(v)};
        const BitstreamFile file = parse_bitstream(raw, "one");
        CHECK(file.payload.size() == 1);
    }
}

TEST_CASE("declared payload length beyond the buffer is malformed") {
    auto raw = encode_bitstream(sample_header(), sample_payload(10));
    // Patch the 4-byte big-endian length word in front of the payload.
    const std::size_t len_pos = raw.size() - 10 - 4;
    raw[len_pos + 2] = 0x03;
    raw[len_pos + 3] = 0xE8;  // 1000
    CHECK_THROWS_WITH_AS(parse_bitstream(raw, "bad"),
                         doctest::Contains("declared payload length"), Error);
    try {
        parse_bitstream(raw, "bad");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedHeader);
    }
}

TEST_CASE("empty input is rejected") {
    CHECK_THROWS_AS(parse_bitstream({}, "empty"), Error);
    try {
        parse_bitstream({}, "empty");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyFile);
    }
}

TEST_CASE("truncated records are malformed, not misparsed") {
    const auto whole = encode_bitstream(sample_header(), sample_payload(16));
    // Any prefix that keeps the preamble but cuts a record must throw.
    for (std::size_t cut = 14; cut < whole.size() - 16; ++cut) {
        std::vector<std::uint8_t> part(whole.begin(),
                                       whole.begin() + static_cast<std::ptrdiff_t>(cut));
        CHECK_THROWS_AS(parse_bitstream(part, "cut"), Error);
    }
}

TEST_CASE("container with an empty declared payload is malformed") {
    const auto raw = encode_bitstream(sample_header(), {});
    CHECK_THROWS_AS(parse_bitstream(raw, "none"), Error);
}

TEST_CASE("unknown header tags are skipped with a warning") {
    auto raw = encode_bitstream(sample_header(), sample_payload(8));
    // Splice in a 'f'-tagged record (2-byte length + body) before 'e'.
    const std::size_t e_pos = raw.size() - 8 - 4 - 1;
    const std::vector<std::uint8_t> extra = {'f', 0x00, 0x02, 0x7F, 0x00};
    raw.insert(raw.begin() + static_cast<std::ptrdiff_t>(e_pos), extra.begin(), extra.end());

    const BitstreamFile file = parse_bitstream(raw, "future");
    REQUIRE(file.header.has_value());
    CHECK(file.payload == sample_payload(8));
    REQUIRE(file.warnings.size() == 1);
    CHECK(file.warnings[0].find('f') != std::string::npos);
}

TEST_CASE("trailing bytes after the declared payload are reported") {
    auto raw = encode_bitstream(sample_header(), sample_payload(8));
    raw.push_back(0xAA);
    raw.push_back(0xBB);
    const BitstreamFile file = parse_bitstream(raw, "padded");
    CHECK(file.payload == sample_payload(8));
    REQUIRE(file.warnings.size() == 1);
    CHECK(file.warnings[0].find("2 trailing bytes") != std::string::npos);
}

TEST_CASE("files above the size cap are rejected") {
    std::vector<std::uint8_t> raw(kMaxBitstreamBytes + 1, 0x55);
    try {
        parse_bitstream(raw, "huge");
        FAIL("expected FileTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FileTooLarge);
    }
}

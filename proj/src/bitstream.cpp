#include "bitsentry/bitstream.hpp"

#include <array>
#include <filesystem>
#include <fstream>

namespace bitsentry {

namespace {

constexpr std::array<std::uint8_t, 13> kPreamble = {
    0x00, 0x09, 0x0f, 0xf0, 0x0f, 0xf0, 0x0f, 0xf0, 0x0f, 0xf0, 0x00, 0x00, 0x01};

struct Cursor {
    const std::vector<std::uint8_t>& buf;
    std::size_t pos = 0;

    std::size_t remaining() const { return buf.size() - pos; }

    std::uint8_t u8() {
        if (remaining() < 1) throw Error(ErrorCode::MalformedHeader, "truncated record tag");
        return buf[pos++];
    }
    std::uint16_t u16be() {
        if (remaining() < 2) throw Error(ErrorCode::MalformedHeader, "truncated record length");
        std::uint16_t v = static_cast<std::uint16_t>((buf[pos] << 8) | buf[pos + 1]);
        pos += 2;
        return v;
    }
    std::uint32_t u32be() {
        if (remaining() < 4) throw Error(ErrorCode::MalformedHeader, "truncated payload length");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | buf[pos + i];
        pos += 4;
        return v;
    }
};

// Text record body: declared length covers the text plus its NUL terminator.
std::string read_text_record(Cursor& cur) {
    const std::uint16_t len = cur.u16be();
    if (cur.remaining() < len) throw Error(ErrorCode::MalformedHeader, "truncated text record");
    std::string text;
    if (len > 0) {
        const std::size_t end = cur.pos + len;
        std::size_t stop = cur.pos;
        while (stop < end && cur.buf[stop] != 0) ++stop;
        text.assign(cur.buf.begin() + static_cast<std::ptrdiff_t>(cur.pos),
                    cur.buf.begin() + static_cast<std::ptrdiff_t>(stop));
        cur.pos = end;
    }
    return text;
}

void write_u16be(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void write_text_record(std::vector<std::uint8_t>& out, char tag, const std::string& text) {
    out.push_back(static_cast<std::uint8_t>(tag));
    write_u16be(out, static_cast<std::uint16_t>(text.size() + 1));
    out.insert(out.end(), text.begin(), text.end());
    out.push_back(0);
}

}  // namespace

BitstreamFile parse_bitstream(const std::vector<std::uint8_t>& raw, const std::string& path) {
    if (raw.empty()) throw Error(ErrorCode::EmptyFile, path);
    if (raw.size() > kMaxBitstreamBytes)
        throw Error(ErrorCode::FileTooLarge,
                    path + " (" + std::to_string(raw.size()) + " bytes)");

    BitstreamFile out;
    out.source_path = path;

    const bool has_magic =
        raw.size() >= kPreamble.size() &&
        std::equal(kPreamble.begin(), kPreamble.end(), raw.begin());
    if (!has_magic) {
        out.payload = raw;
        return out;
    }

    Cursor cur{raw, kPreamble.size()};
    HeaderInfo header;
    bool saw_payload = false;
    while (!saw_payload) {
        const char tag = static_cast<char>(cur.u8());
        switch (tag) {
            case 'a': header.design_name = read_text_record(cur); break;
            case 'b': header.part_name = read_text_record(cur); break;
            case 'c': header.build_date = read_text_record(cur); break;
            case 'd': header.build_time = read_text_record(cur); break;
            case 'e': {
                header.declared_length = cur.u32be();
                if (cur.remaining() < header.declared_length)
                    throw Error(ErrorCode::MalformedHeader,
                                path + ": declared payload length " +
                                    std::to_string(header.declared_length) + " exceeds " +
                                    std::to_string(cur.remaining()) + " remaining bytes");
                out.payload.assign(
                    raw.begin() + static_cast<std::ptrdiff_t>(cur.pos),
                    raw.begin() + static_cast<std::ptrdiff_t>(cur.pos + header.declared_length));
                if (cur.remaining() > header.declared_length)
                    out.warnings.push_back(
                        std::to_string(cur.remaining() - header.declared_length) +
                        " trailing bytes after declared payload ignored");
                saw_payload = true;
                break;
            }
            default: {
                // Unknown field tags carry the same 2-byte length prefix as
                // a..d; skip them so newer vendor tool output still parses.
                const std::uint16_t len = cur.u16be();
                if (cur.remaining() < len)
                    throw Error(ErrorCode::MalformedHeader, path + ": truncated unknown record");
                cur.pos += len;
                out.warnings.push_back(std::string("skipped unknown header field tag '") + tag + "'");
                break;
            }
        }
    }
    if (out.payload.empty())
        throw Error(ErrorCode::MalformedHeader, path + ": container declares an empty payload");
    out.header = header;
    return out;
}

std::vector<std::uint8_t> encode_bitstream(const HeaderInfo& header,
                                           const std::vector<std::uint8_t>& payload) {
    std::vector<std::uint8_t> out;
    out.reserve(payload.size() + 64);
    out.insert(out.end(), kPreamble.begin(), kPreamble.end());
    write_text_record(out, 'a', header.design_name);
    write_text_record(out, 'b', header.part_name);
    write_text_record(out, 'c', header.build_date);
    write_text_record(out, 'd', header.build_time);
    out.push_back('e');
    const std::uint32_t n = static_cast<std::uint32_t>(payload.size());
    out.push_back(static_cast<std::uint8_t>(n >> 24));
    out.push_back(static_cast<std::uint8_t>((n >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((n >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>(n & 0xFF));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

BitstreamFile load_bitstream(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        throw Error(ErrorCode::FileNotFound, path);
    const auto size = std::filesystem::file_size(path, ec);
    if (ec) throw Error(ErrorCode::IoError, path + ": " + ec.message());
    if (size > kMaxBitstreamBytes)
        throw Error(ErrorCode::FileTooLarge, path + " (" + std::to_string(size) + " bytes)");

    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(size));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in && size > 0) throw Error(ErrorCode::IoError, "short read on " + path);
    return parse_bitstream(raw, path);
}

}  // namespace bitsentry

#include "bitsentry/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <vector>

#include "bitsentry/bitstream.hpp"
#include "bitsentry/error.hpp"
#include "bitsentry/rng.hpp"

namespace bitsentry {

namespace {

void validate(const SynthSpec& spec) {
    const std::size_t total =
        std::accumulate(spec.census.begin(), spec.census.end(), std::size_t{0});
    if (total != spec.n_samples)
        throw Error(ErrorCode::InvalidSpec, "census sums to " + std::to_string(total) +
                                                ", n_samples is " +
                                                std::to_string(spec.n_samples));
    for (std::size_t c = 0; c < spec.census.size(); ++c)
        if (spec.census[c] == 0)
            throw Error(ErrorCode::InvalidSpec,
                        "class " + class_label_names()[c] + " has zero samples");
    if (!(spec.epsilon >= 0.0 && spec.epsilon < 1.0))
        throw Error(ErrorCode::InvalidSpec, "epsilon must lie in [0, 1)");
    if (spec.min_payload == 0 || spec.min_payload > spec.max_payload)
        throw Error(ErrorCode::InvalidSpec, "payload length range is empty");
}

std::array<double, 256> normalized(std::array<double, 256> w) {
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= sum;
    return w;
}

// Near-uniform weights in [0.5, 1.5): every byte value stays plausible, so
// separating the classes takes the whole histogram rather than one bin.
std::array<double, 256> aes_like_profile(std::uint64_t seed) {
    SplitMix64 rng(mix_seed(seed + 0xA1));
    std::array<double, 256> w;
    for (double& v : w) v = 0.5 + rng.next_double();
    return normalized(w);
}

// Fourth-power weights concentrate mass on a handful of byte values, the
// signature of a sparse control-heavy payload.
std::array<double, 256> rs232_like_profile(std::uint64_t seed) {
    SplitMix64 rng(mix_seed(seed + 0xB2));
    std::array<double, 256> w;
    for (double& v : w) {
        const double u = rng.next_double();
        v = u * u * u * u;
    }
    return normalized(w);
}

// Padding-dominated: mostly 0x00 fill with an 0xFF block and a thin spread
// of everything else.
std::array<double, 256> empty_profile() {
    std::array<double, 256> w;
    w.fill(0.10 / 254.0);
    w[0x00] = 0.70;
    w[0xFF] = 0.20;
    return w;  // already sums to 1
}

// The trojan leaves its mark on the byte values the host design rarely
// emits: uniform mass over the 8 lowest-weight bytes of the benign profile.
std::array<double, 256> signature_for(const std::array<double, 256>& benign) {
    std::array<int, 256> order;
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return benign[a] < benign[b]; });
    std::array<double, 256> sig{};
    for (int i = 0; i < 8; ++i) sig[order[i]] = 1.0 / 8.0;
    return sig;
}

std::array<double, 256> mix(const std::array<double, 256>& benign,
                            const std::array<double, 256>& sig, double epsilon) {
    std::array<double, 256> out;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - epsilon) * benign[i] + epsilon * sig[i];
    return out;
}

}  // namespace

std::array<std::size_t, kNumClasses> default_census_for(std::size_t n_samples) {
    const SynthSpec defaults;
    const double base = static_cast<double>(defaults.n_samples);
    std::array<std::size_t, kNumClasses> census{};
    std::array<double, kNumClasses> fractional{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const double exact = static_cast<double>(n_samples) * defaults.census[c] / base;
        census[c] = static_cast<std::size_t>(exact);
        fractional[c] = exact - static_cast<double>(census[c]);
        assigned += census[c];
    }
    std::array<std::size_t, kNumClasses> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return fractional[a] > fractional[b];
    });
    for (std::size_t i = 0; assigned < n_samples; ++i, ++assigned)
        ++census[order[i % kNumClasses]];
    return census;
}

std::array<double, 256> class_byte_profile(const SynthSpec& spec, ClassLabel label) {
    switch (label) {
        case ClassLabel::BenignAes:
            return aes_like_profile(spec.seed);
        case ClassLabel::MaliciousAes:
            return mix(aes_like_profile(spec.seed),
                       signature_for(aes_like_profile(spec.seed)), spec.epsilon);
        case ClassLabel::BenignRs232:
            return rs232_like_profile(spec.seed);
        case ClassLabel::MaliciousRs232:
            return mix(rs232_like_profile(spec.seed),
                       signature_for(rs232_like_profile(spec.seed)), spec.epsilon);
        case ClassLabel::Empty:
            return empty_profile();
    }
    throw Error(ErrorCode::LabelOutOfRange, "unknown class label");
}

std::filesystem::path generate_synthetic_dataset(const SynthSpec& spec,
                                                 const std::filesystem::path& out_dir) {
    validate(spec);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string());

    std::array<std::array<double, 257>, kNumClasses> cdf;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const auto profile = class_byte_profile(spec, static_cast<ClassLabel>(c));
        cdf[c][0] = 0.0;
        for (std::size_t b = 0; b < 256; ++b) cdf[c][b + 1] = cdf[c][b] + profile[b];
        cdf[c][256] = 1.0;  // guard against accumulated rounding
    }

    SplitMix64 rng(mix_seed(spec.seed));
    std::vector<ManifestEntry> entries;
    entries.reserve(spec.n_samples);

    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const auto label = static_cast<ClassLabel>(c);
        for (std::size_t i = 0; i < spec.census[c]; ++i) {
            const std::size_t span = spec.max_payload - spec.min_payload + 1;
            const std::size_t length = spec.min_payload + rng.next_below(span);
            std::vector<std::uint8_t> payload(length);
            for (std::uint8_t& byte : payload) {
                const double u = rng.next_double();
                const auto it = std::upper_bound(cdf[c].begin() + 1, cdf[c].end(), u);
                byte = static_cast<std::uint8_t>(
                    std::min<std::ptrdiff_t>(it - cdf[c].begin() - 1, 255));
            }

            char name[64];
            std::snprintf(name, sizeof(name), "%s_%03zu.bit", to_string(label).c_str(), i);
            HeaderInfo header;
            header.design_name = name;
            header.part_name = "xc7z020clg400-1";
            header.build_date = "2025/01/01";
            header.build_time = "00:00:00";
            const auto bytes = encode_bitstream(header, payload);

            const std::filesystem::path file_path = out_dir / name;
            std::ofstream out(file_path, std::ios::binary);
            if (!out) throw Error(ErrorCode::IoError, "cannot write " + file_path.string());
            out.write(reinterpret_cast<const char*>(bytes.data()),
                      static_cast<std::streamsize>(bytes.size()));
            if (!out) throw Error(ErrorCode::IoError, "short write to " + file_path.string());
            entries.push_back({name, label});
        }
    }

    const std::filesystem::path manifest_path = out_dir / "manifest.csv";
    write_manifest(manifest_path.string(), entries);

    const std::filesystem::path census_path = out_dir / "census.csv";
    std::ofstream census(census_path, std::ios::binary);
    if (!census) throw Error(ErrorCode::IoError, "cannot write " + census_path.string());
    census << "label,count\n";
    for (std::size_t c = 0; c < kNumClasses; ++c)
        census << class_label_names()[c] << "," << spec.census[c] << "\n";
    if (!census) throw Error(ErrorCode::IoError, "short write to " + census_path.string());

    return manifest_path;
}

}  // namespace bitsentry

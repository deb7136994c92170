#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "bitsentry/features.hpp"
#include "bitsentry/labels.hpp"

namespace bitsentry {

// Stand-in corpus generator: seeded per-class byte distributions with a
// rare-byte trojan signature mixed into the malicious classes at weight
// epsilon. epsilon = 0 makes malicious and benign profiles bit-identical.
struct SynthSpec {
    std::size_t n_samples = 122;
    std::array<std::size_t, kNumClasses> census = {40, 18, 34, 14, 16};
    std::size_t min_payload = 8 * 1024;   // bytes
    std::size_t max_payload = 32 * 1024;  // bytes
    double epsilon = 0.15;
    std::uint64_t seed = 7;
};

// Scales the default census proportions to n_samples; remainders go to the
// classes with the largest fractional parts (ties to the lower class id).
std::array<std::size_t, kNumClasses> default_census_for(std::size_t n_samples);

// The categorical byte distribution a class's payloads are drawn from.
// Normalized to sum 1. Pure function of (spec.seed, spec.epsilon, label).
std::array<double, 256> class_byte_profile(const SynthSpec& spec, ClassLabel label);

// Writes census-many `.bit` files per class into out_dir plus manifest.csv
// (`path,label`) and census.csv (`label,count`). File contents are a pure
// function of the SynthSpec: one master byte stream seeded from spec.seed,
// classes in id order, and per file a length draw followed by payload draws.
// Returns the manifest path.
std::filesystem::path generate_synthetic_dataset(const SynthSpec& spec,
                                                 const std::filesystem::path& out_dir);

}  // namespace bitsentry

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bitsentry/labels.hpp"
#include "bitsentry/matrix.hpp"

namespace bitsentry {

inline constexpr std::size_t kFeatureDim = 256;

// Relative byte-frequency histogram. Bins are in [0, 1] and sum to 1.
using FeatureVector = std::array<double, kFeatureDim>;

struct DatasetMatrix {
    Matrix features;               // n × 256
    std::vector<int> labels;       // dense class ids, same length as rows
    std::vector<std::string> source_paths;

    std::size_t size() const { return features.rows; }
};

struct ManifestEntry {
    std::string path;
    ClassLabel label;
};

// bins[v] = count(byte v) / payload length. Counts accumulate in 64-bit
// integers; the division happens once per bin.
FeatureVector byte_histogram(std::span<const std::uint8_t> payload);

// Parses each manifest entry and stacks histograms in manifest order.
// Parse failures are rethrown with the offending path in the message.
DatasetMatrix build_dataset(const std::vector<ManifestEntry>& manifest);

// Manifest CSV: header `path,label`, one entry per line, relative paths
// resolved against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::string& manifest_path);
void write_manifest(const std::string& manifest_path, const std::vector<ManifestEntry>& entries);

DatasetMatrix load_dataset(const std::string& manifest_path);

}  // namespace bitsentry

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bitsentry/models.hpp"
#include "bitsentry/tsvd.hpp"

namespace bitsentry {

inline constexpr int kBundleFormatVersion = 1;
inline constexpr const char* kBundleMagic = "BSDM1";

struct BundleProvenance {
    // "fnv1a64:<16 hex>" over the raw manifest bytes; empty when the bundle
    // was trained from an in-memory dataset.
    std::string manifest_digest;
    std::uint64_t seed = 0;
    // ISO-8601 UTC. Excluded from bundle_digest so retraining with the same
    // inputs yields the same digest.
    std::string created_at;

    bool operator==(const BundleProvenance&) const = default;
};

struct ModelBundle {
    int format_version = kBundleFormatVersion;
    std::string normalization = "relative_frequency";
    std::size_t tsvd_rank = 0;
    TsvdProjector projector;
    TrainedClassifier classifier;
    std::vector<std::string> label_table;
    BundleProvenance provenance;

    bool operator==(const ModelBundle&) const = default;
};

// One `BSDM1` magic line followed by a canonical JSON document: keys sorted,
// every double block packed little-endian and base64-encoded so the text
// round-trips bit-exactly.
std::string serialize_bundle(const ModelBundle& bundle);

// Rejects a wrong magic line or format_version outright; never coerces.
ModelBundle deserialize_bundle(const std::string& text);

// "fnv1a64:<16 hex>" over the serialization with created_at blanked.
std::string bundle_digest(const ModelBundle& bundle);

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

}  // namespace bitsentry

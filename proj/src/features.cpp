#include "bitsentry/features.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "bitsentry/bitstream.hpp"

namespace bitsentry {

FeatureVector byte_histogram(std::span<const std::uint8_t> payload) {
    if (payload.empty()) throw Error(ErrorCode::EmptyPayload, "cannot vectorize an empty payload");
    std::array<std::uint64_t, kFeatureDim> counts{};
    for (std::uint8_t b : payload) ++counts[b];
    FeatureVector bins{};
    const double n = static_cast<double>(payload.size());
    for (std::size_t v = 0; v < kFeatureDim; ++v)
        bins[v] = static_cast<double>(counts[v]) / n;
    return bins;
}

DatasetMatrix build_dataset(const std::vector<ManifestEntry>& manifest) {
    if (manifest.empty()) throw Error(ErrorCode::EmptyDataset, "manifest has no entries");
    std::set<std::string> seen;
    for (const auto& entry : manifest)
        if (!seen.insert(entry.path).second)
            throw Error(ErrorCode::DuplicatePath, entry.path);

    DatasetMatrix out;
    out.features = Matrix(manifest.size(), kFeatureDim);
    out.labels.reserve(manifest.size());
    out.source_paths.reserve(manifest.size());
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const auto& entry = manifest[i];
        try {
            const BitstreamFile file = load_bitstream(entry.path);
            const FeatureVector bins = byte_histogram(file.payload);
            std::copy(bins.begin(), bins.end(), out.features.row(i).begin());
        } catch (const Error& e) {
            throw Error(e.code(), entry.path + ": " + e.message());
        }
        out.labels.push_back(static_cast<int>(entry.label));
        out.source_paths.push_back(entry.path);
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw Error(ErrorCode::FileNotFound, manifest_path);
    const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();

    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::InvalidManifest, manifest_path + ": empty file");
    if (trim(line) != "path,label")
        throw Error(ErrorCode::InvalidManifest,
                    manifest_path + ": expected header 'path,label', got '" + trim(line) + "'");

    std::vector<ManifestEntry> entries;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string row = trim(line);
        if (row.empty()) continue;
        const std::size_t comma = row.rfind(',');
        if (comma == std::string::npos)
            throw Error(ErrorCode::InvalidManifest,
                        manifest_path + ":" + std::to_string(lineno) + ": missing ',' separator");
        const std::string rel = trim(row.substr(0, comma));
        const std::string label = trim(row.substr(comma + 1));
        if (rel.empty())
            throw Error(ErrorCode::InvalidManifest,
                        manifest_path + ":" + std::to_string(lineno) + ": empty path");
        std::filesystem::path p(rel);
        if (p.is_relative()) p = base / p;
        entries.push_back({p.string(), class_label_from_string(label)});
    }
    if (entries.empty())
        throw Error(ErrorCode::InvalidManifest, manifest_path + ": no entries");
    return entries;
}

void write_manifest(const std::string& manifest_path, const std::vector<ManifestEntry>& entries) {
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + manifest_path);
    out << "path,label\n";
    const std::filesystem::path base =
        std::filesystem::absolute(std::filesystem::path(manifest_path).parent_path());
    for (const auto& entry : entries) {
        // Relative entry paths are already manifest-relative; absolute ones
        // are rewritten relative to the manifest's directory.
        std::filesystem::path p(entry.path);
        if (p.is_absolute()) p = p.lexically_proximate(base);
        out << p.generic_string() << "," << to_string(entry.label) << "\n";
    }
}

DatasetMatrix load_dataset(const std::string& manifest_path) {
    return build_dataset(read_manifest(manifest_path));
}

}  // namespace bitsentry

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "conseq/classifiers.hpp"
#include "conseq/pipeline.hpp"

namespace conseq {

/// Artifact-level failure: unreadable or corrupt file, digest mismatch,
/// unsupported format version. The CLI maps these to exit status 2.
class ArtifactError : public std::runtime_error {
public:
    explicit ArtifactError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kArtifactFormatVersion = 1;

/// Everything a prediction run needs, plus the provenance to reproduce the
/// training run bit-identically.
struct PipelineArtifact {
    int format_version = kArtifactFormatVersion;
    Featurizer featurizer;
    TrainedClassifier classifier;
    std::map<int, std::string> taxonomy;  // cluster id -> label sentence
    std::string dataset_sha256;           // digest of the canonicalized training file
    std::uint64_t seed = 0;
    PipelineConfig config;
    std::string timestamp;  // ISO 8601 UTC

    bool operator==(const PipelineArtifact&) const = default;
};

/// Single-file JSON envelope with base64 little-endian float64 matrix
/// blocks and a sha256 digest over the canonical payload serialization.
/// Writes are byte-stable for equal artifacts.
void save_artifact(const PipelineArtifact& artifact, const std::string& path);

/// Verifies the digest and format version before reconstructing.
/// load(save(a)) == a, matrices bit-exact.
PipelineArtifact load_artifact(const std::string& path);

std::string sha256_hex(std::string_view data);

/// JSON text of a pipeline configuration: the provenance "configs" block,
/// also echoed by `compare` so runs can be repeated exactly.
std::string pipeline_config_to_string(const PipelineConfig& config);

/// Current UTC time in ISO 8601. Honors SOURCE_DATE_EPOCH so reproducible
/// runs can pin the provenance timestamp.
std::string current_timestamp();

}  // namespace conseq

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace conseq {

/// One entry of the consequence-cluster taxonomy. Base clusters (ids 1-7)
/// have no constituents; combination clusters (ids 8-10) list the base
/// cluster ids they merge.
struct ConsequenceCluster {
    int id = 0;
    std::string label;
    std::vector<int> constituents;

    bool operator==(const ConsequenceCluster&) const = default;
};

/// One attack: a stable id, a name, 1-3 prose descriptions, the layman
/// consequence sentences, and one raw base-cluster id per consequence.
/// cluster_label is derived from the raw ids at load time, never stored
/// in raw input.
struct AttackRecord {
    std::string id;
    std::string name;
    std::vector<std::string> descriptions;
    std::vector<std::string> consequences;
    std::vector<int> raw_cluster_ids;
    int cluster_label = 0;

    bool operator==(const AttackRecord&) const = default;
};

struct Dataset {
    std::vector<AttackRecord> records;
    std::vector<ConsequenceCluster> taxonomy;

    const ConsequenceCluster* find_cluster(int id) const;
    bool operator==(const Dataset&) const = default;
};

struct SplitConfig {
    double train_fraction = 0.7;
    std::uint64_t seed = 0;

    bool operator==(const SplitConfig&) const = default;
};

enum class DatasetFormat { csv, json };

/// The ten-cluster taxonomy of the bundled dataset.
std::vector<ConsequenceCluster> default_taxonomy();

/// Maps a non-empty multiset of base cluster ids (each in 1..7) onto the
/// final label: a singleton support set {k} maps to k, otherwise to the
/// combination cluster whose constituent set equals the support set.
/// Order-insensitive. Throws ValidationError when no combination matches.
int assign_combined_label(const std::vector<int>& raw_cluster_ids,
                          const std::vector<ConsequenceCluster>& taxonomy);

/// Loads and validates a dataset; cluster labels are assigned on the way in.
/// Throws ParseError on malformed input, ValidationError on invariant
/// violations (both name the offending record and field).
Dataset load_dataset(const std::string& path, DatasetFormat format);

/// Format sniffed from the file extension (.csv vs everything else = JSON).
Dataset load_dataset(const std::string& path);

/// Canonical JSON serialization: fixed key order, two-space indent,
/// records and taxonomy in dataset order. save(load(x)) is byte-stable.
std::string dataset_to_json(const Dataset& dataset);
void save_dataset(const Dataset& dataset, const std::string& path);

/// Keeps only records whose class has at least min_count instances.
/// Throws ValidationError when the result would be empty.
Dataset filter_rare_classes(const Dataset& dataset, int min_count);

/// cluster_label -> instance count; zero-count labels omitted.
std::map<int, int> class_histogram(const Dataset& dataset);

/// Deterministic per-class split: class c with n_c instances sends
/// round(train_fraction * n_c) records to train, clamped to [1, n_c - 1].
/// Requires every class to have >= 2 instances.
std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset, const SplitConfig& config);

/// All descriptions of a record joined with single spaces: the per-attack
/// classification document.
std::string full_text(const AttackRecord& record);

}  // namespace conseq

#include "conseq/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "conseq/errors.hpp"
#include "conseq/random.hpp"

namespace conseq {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::set<int> support_set(const std::vector<int>& ids) {
    return std::set<int>(ids.begin(), ids.end());
}

std::string join_ints(const std::set<int>& ids) {
    std::string out;
    for (int id : ids) {
        if (!out.empty()) out += ",";
        out += std::to_string(id);
    }
    return out;
}

void validate_taxonomy(const std::vector<ConsequenceCluster>& taxonomy) {
    std::set<int> seen;
    for (const auto& cluster : taxonomy) {
        if (cluster.id < 1 || cluster.id > 10) {
            throw ValidationError("taxonomy: cluster id " + std::to_string(cluster.id) +
                                  " outside 1..10");
        }
        if (!seen.insert(cluster.id).second) {
            throw ValidationError("taxonomy: duplicate cluster id " + std::to_string(cluster.id));
        }
        if (cluster.id <= 7) {
            if (!cluster.constituents.empty()) {
                throw ValidationError("taxonomy: base cluster " + std::to_string(cluster.id) +
                                      " must have no constituents");
            }
        } else {
            if (cluster.constituents.size() < 2 || cluster.constituents.size() > 3) {
                throw ValidationError("taxonomy: combination cluster " +
                                      std::to_string(cluster.id) +
                                      " must list 2-3 constituent ids");
            }
            for (int c : cluster.constituents) {
                if (c < 1 || c > 7) {
                    throw ValidationError("taxonomy: combination cluster " +
                                          std::to_string(cluster.id) +
                                          " has constituent " + std::to_string(c) +
                                          " outside 1..7");
                }
            }
        }
    }
}

void validate_and_label(Dataset& dataset) {
    validate_taxonomy(dataset.taxonomy);
    std::set<std::string> ids;
    for (auto& rec : dataset.records) {
        if (rec.id.empty()) {
            throw ValidationError("record with empty id (field id)");
        }
        if (!ids.insert(rec.id).second) {
            throw ValidationError("record " + rec.id + ": duplicate id (field id)");
        }
        if (rec.descriptions.empty() || rec.descriptions.size() > 3) {
            throw ValidationError("record " + rec.id + ": need 1-3 descriptions (field descriptions)");
        }
        for (const auto& d : rec.descriptions) {
            if (trim(d).empty()) {
                throw ValidationError("record " + rec.id +
                                      ": empty description (field descriptions)");
            }
        }
        if (rec.consequences.empty() || rec.consequences.size() > 3) {
            throw ValidationError("record " + rec.id +
                                  ": need 1-3 consequences (field consequences)");
        }
        if (rec.consequences.size() != rec.raw_cluster_ids.size()) {
            throw ValidationError("record " + rec.id +
                                  ": consequences and cluster_ids must align (field cluster_ids)");
        }
        for (int id : rec.raw_cluster_ids) {
            if (id < 1 || id > 7) {
                throw ValidationError("record " + rec.id + ": unknown base cluster id " +
                                      std::to_string(id) + " (field cluster_ids)");
            }
        }
        rec.cluster_label = assign_combined_label(rec.raw_cluster_ids, dataset.taxonomy);
        if (!dataset.find_cluster(rec.cluster_label)) {
            throw ValidationError("record " + rec.id + ": cluster label " +
                                  std::to_string(rec.cluster_label) + " missing from taxonomy");
        }
    }
}

Dataset parse_json_dataset(std::istream& in, const std::string& path) {
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("cannot parse " + path + ": " + e.what());
    }
    if (!root.is_object() || !root.contains("taxonomy") || !root.contains("records")) {
        throw ParseError(path + ": expected top-level object with taxonomy and records");
    }
    Dataset dataset;
    try {
        for (const auto& t : root.at("taxonomy")) {
            ConsequenceCluster cluster;
            cluster.id = t.at("id").get<int>();
            cluster.label = t.at("label").get<std::string>();
            if (t.contains("constituents")) {
                cluster.constituents = t.at("constituents").get<std::vector<int>>();
            }
            dataset.taxonomy.push_back(std::move(cluster));
        }
        for (const auto& r : root.at("records")) {
            AttackRecord rec;
            rec.id = r.at("id").get<std::string>();
            rec.name = r.at("name").get<std::string>();
            rec.descriptions = r.at("descriptions").get<std::vector<std::string>>();
            rec.consequences = r.at("consequences").get<std::vector<std::string>>();
            rec.raw_cluster_ids = r.at("cluster_ids").get<std::vector<int>>();
            dataset.records.push_back(std::move(rec));
        }
    } catch (const json::exception& e) {
        throw ParseError(path + ": malformed dataset field: " + e.what());
    }
    return dataset;
}

// RFC 4180 style reader: quoted cells may contain commas, doubled quotes,
// and newlines.
std::vector<std::vector<std::string>> parse_csv(std::istream& in, const std::string& path) {
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(cell));
            cell.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
            if (any || !cell.empty()) {
                row.push_back(std::move(cell));
                cell.clear();
                rows.push_back(std::move(row));
                row.clear();
                any = false;
            }
        } else {
            cell += c;
            any = true;
        }
    }
    if (quoted) throw ParseError(path + ": unterminated quoted cell");
    if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    // a fully empty cell means "no entries", not one empty entry
    if (parts.size() == 1 && parts[0].empty()) parts.clear();
    return parts;
}

Dataset parse_csv_dataset(std::istream& in, const std::string& path) {
    auto rows = parse_csv(in, path);
    if (rows.empty()) throw ParseError(path + ": empty CSV, header row is mandatory");
    const std::vector<std::string> expected = {"id", "name", "descriptions", "consequences",
                                               "cluster_ids"};
    auto header = rows.front();
    for (auto& h : header) h = trim(h);
    if (header != expected) {
        throw ParseError(path + ": bad CSV header, expected id,name,descriptions,"
                                "consequences,cluster_ids");
    }
    Dataset dataset;
    dataset.taxonomy = default_taxonomy();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != expected.size()) {
            throw ParseError(path + ": row " + std::to_string(i + 1) + ": expected " +
                             std::to_string(expected.size()) + " cells, got " +
                             std::to_string(row.size()));
        }
        AttackRecord rec;
        rec.id = trim(row[0]);
        rec.name = trim(row[1]);
        rec.descriptions = split_on(row[2], '|');
        rec.consequences = split_on(row[3], '|');
        for (const auto& part : split_on(row[4], ',')) {
            try {
                std::size_t pos = 0;
                int v = std::stoi(part, &pos);
                if (pos != part.size()) throw std::invalid_argument(part);
                rec.raw_cluster_ids.push_back(v);
            } catch (const std::exception&) {
                throw ParseError(path + ": row " + std::to_string(i + 1) +
                                 ": bad cluster id '" + part + "'");
            }
        }
        dataset.records.push_back(std::move(rec));
    }
    return dataset;
}

}  // namespace

const ConsequenceCluster* Dataset::find_cluster(int id) const {
    for (const auto& c : taxonomy) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

std::vector<ConsequenceCluster> default_taxonomy() {
    return {
        {1, "The attacker sent you emails that could lead to an attack if their request is "
            "granted", {}},
        {2, "The attacker disrupted your access to your computer or the Internet.", {}},
        {3, "The attacker gained access to your computer or one of your online accounts.", {}},
        {4, "The attacker altered your computer or its contents to allow them to use it for "
            "their purposes without you knowing.", {}},
        {5, "The attacker manipulated your use of or understanding about a website.", {}},
        {6, "The attacker changed or intercepted information that you have on the Internet.", {}},
        {7, "The attacker made your computer operate inefficiently or not at all.", {}},
        {8, "Cluster labels for 6, 5, and 3", {6, 5, 3}},
        {9, "Cluster labels for 4, 7, and 2", {4, 7, 2}},
        {10, "Cluster labels for 2, 7, and 7", {2, 7}},
    };
}

int assign_combined_label(const std::vector<int>& raw_cluster_ids,
                          const std::vector<ConsequenceCluster>& taxonomy) {
    if (raw_cluster_ids.empty()) {
        throw std::invalid_argument("assign_combined_label: empty cluster id multiset");
    }
    for (int id : raw_cluster_ids) {
        if (id < 1 || id > 7) {
            throw std::invalid_argument("assign_combined_label: base cluster id " +
                                        std::to_string(id) + " outside 1..7");
        }
    }
    auto support = support_set(raw_cluster_ids);
    if (support.size() == 1) return *support.begin();
    for (const auto& cluster : taxonomy) {
        if (cluster.constituents.empty()) continue;
        if (support_set(cluster.constituents) == support) return cluster.id;
    }
    throw ValidationError("no combination cluster matches consequence clusters {" +
                          join_ints(support) + "}");
}

Dataset load_dataset(const std::string& path, DatasetFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open dataset file: " + path);
    Dataset dataset = format == DatasetFormat::json ? parse_json_dataset(in, path)
                                                    : parse_csv_dataset(in, path);
    validate_and_label(dataset);
    return dataset;
}

Dataset load_dataset(const std::string& path) {
    auto format = path.size() >= 4 && path.substr(path.size() - 4) == ".csv"
                      ? DatasetFormat::csv
                      : DatasetFormat::json;
    return load_dataset(path, format);
}

std::string dataset_to_json(const Dataset& dataset) {
    ordered_json root;
    root["taxonomy"] = ordered_json::array();
    for (const auto& cluster : dataset.taxonomy) {
        ordered_json t;
        t["id"] = cluster.id;
        t["label"] = cluster.label;
        t["constituents"] = cluster.constituents;
        root["taxonomy"].push_back(std::move(t));
    }
    root["records"] = ordered_json::array();
    for (const auto& rec : dataset.records) {
        ordered_json r;
        r["id"] = rec.id;
        r["name"] = rec.name;
        r["descriptions"] = rec.descriptions;
        r["consequences"] = rec.consequences;
        r["cluster_ids"] = rec.raw_cluster_ids;
        root["records"].push_back(std::move(r));
    }
    return root.dump(2) + "\n";
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write dataset file: " + path);
    out << dataset_to_json(dataset);
}

Dataset filter_rare_classes(const Dataset& dataset, int min_count) {
    if (min_count < 1) throw std::invalid_argument("filter_rare_classes: min_count must be >= 1");
    auto histogram = class_histogram(dataset);
    Dataset out;
    out.taxonomy = dataset.taxonomy;
    for (const auto& rec : dataset.records) {
        if (histogram.at(rec.cluster_label) >= min_count) out.records.push_back(rec);
    }
    if (out.records.empty() && !dataset.records.empty()) {
        throw ValidationError("filter_rare_classes: no class has " + std::to_string(min_count) +
                              " instances, result would be empty");
    }
    return out;
}

std::map<int, int> class_histogram(const Dataset& dataset) {
    std::map<int, int> counts;
    for (const auto& rec : dataset.records) ++counts[rec.cluster_label];
    return counts;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset, const SplitConfig& config) {
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
        throw std::invalid_argument("stratified_split: train_fraction must be in (0,1)");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        by_class[dataset.records[i].cluster_label].push_back(i);
    }
    for (const auto& [label, idx] : by_class) {
        if (idx.size() < 2) {
            throw ValidationError("stratified_split: class " + std::to_string(label) +
                                  " has fewer than 2 instances");
        }
    }
    std::vector<bool> in_train(dataset.records.size(), false);
    for (auto& [label, idx] : by_class) {
        Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(label)));
        rng.shuffle(idx);
        auto n = idx.size();
        auto want = static_cast<std::size_t>(
            std::floor(config.train_fraction * static_cast<double>(n) + 0.5));
        want = std::clamp<std::size_t>(want, 1, n - 1);
        for (std::size_t k = 0; k < want; ++k) in_train[idx[k]] = true;
    }
    Dataset train, test;
    train.taxonomy = dataset.taxonomy;
    test.taxonomy = dataset.taxonomy;
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        (in_train[i] ? train : test).records.push_back(dataset.records[i]);
    }
    return {std::move(train), std::move(test)};
}

std::string full_text(const AttackRecord& record) {
    std::string text;
    for (const auto& d : record.descriptions) {
        if (!text.empty()) text += ' ';
        text += d;
    }
    return text;
}

}  // namespace conseq

#include "conseq/artifact.hpp"

#include <bit>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include <openssl/evp.h>

#include "json.hpp"

namespace conseq {

namespace {

using json = nlohmann::json;

// --- base64 of little-endian float64 blocks ---------------------------------

constexpr char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string b64_encode(const std::string& bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                     (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                     static_cast<unsigned char>(bytes[i + 2]);
        out += kB64Alphabet[(v >> 18) & 63];
        out += kB64Alphabet[(v >> 12) & 63];
        out += kB64Alphabet[(v >> 6) & 63];
        out += kB64Alphabet[v & 63];
    }
    const std::size_t rest = bytes.size() - i;
    if (rest == 1) {
        unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
        out += kB64Alphabet[(v >> 18) & 63];
        out += kB64Alphabet[(v >> 12) & 63];
        out += "==";
    } else if (rest == 2) {
        unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                     (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out += kB64Alphabet[(v >> 18) & 63];
        out += kB64Alphabet[(v >> 12) & 63];
        out += kB64Alphabet[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}

std::string b64_decode(const std::string& text) {
    std::string out;
    int buffer = 0, bits = 0;
    for (char c : text) {
        if (c == '=') break;
        int v = b64_value(c);
        if (v < 0) throw ArtifactError("corrupt artifact: invalid base64 data");
        buffer = (buffer << 6) | v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out += static_cast<char>((buffer >> bits) & 0xFF);
        }
    }
    return out;
}

std::string encode_doubles(const std::vector<double>& values) {
    std::string bytes;
    bytes.reserve(values.size() * 8);
    for (double d : values) {
        auto u = std::bit_cast<std::uint64_t>(d);
        for (int k = 0; k < 8; ++k) bytes += static_cast<char>((u >> (8 * k)) & 0xFF);
    }
    return b64_encode(bytes);
}

std::vector<double> decode_doubles(const std::string& text) {
    std::string bytes = b64_decode(text);
    if (bytes.size() % 8 != 0) throw ArtifactError("corrupt artifact: bad float block length");
    std::vector<double> values(bytes.size() / 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t u = 0;
        for (int k = 0; k < 8; ++k) {
            u |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i * 8 + k]))
                 << (8 * k);
        }
        values[i] = std::bit_cast<double>(u);
    }
    return values;
}

// --- config serialization ----------------------------------------------------

json cleaning_to_json(const CleaningOptions& c) {
    return {{"lowercase", c.lowercase},
            {"strip_punctuation", c.strip_punctuation},
            {"strip_digits", c.strip_digits},
            {"remove_stopwords", c.remove_stopwords},
            {"stopwords", std::vector<std::string>(c.stopwords.begin(), c.stopwords.end())}};
}

CleaningOptions cleaning_from_json(const json& j) {
    CleaningOptions c;
    c.lowercase = j.at("lowercase").get<bool>();
    c.strip_punctuation = j.at("strip_punctuation").get<bool>();
    c.strip_digits = j.at("strip_digits").get<bool>();
    c.remove_stopwords = j.at("remove_stopwords").get<bool>();
    auto words = j.at("stopwords").get<std::vector<std::string>>();
    c.stopwords = std::set<std::string>(words.begin(), words.end());
    return c;
}

json tfidf_config_to_json(const TfidfConfig& c) {
    return {{"min_df", c.min_df},         {"max_df_ratio", c.max_df_ratio},
            {"ngram_min", c.ngram_min},   {"ngram_max", c.ngram_max},
            {"smooth_idf", c.smooth_idf}, {"l2_normalize", c.l2_normalize}};
}

TfidfConfig tfidf_config_from_json(const json& j) {
    TfidfConfig c;
    c.min_df = j.at("min_df").get<int>();
    c.max_df_ratio = j.at("max_df_ratio").get<double>();
    c.ngram_min = j.at("ngram_min").get<int>();
    c.ngram_max = j.at("ngram_max").get<int>();
    c.smooth_idf = j.at("smooth_idf").get<bool>();
    c.l2_normalize = j.at("l2_normalize").get<bool>();
    return c;
}

json doc2vec_config_to_json(const Doc2VecConfig& c) {
    return {{"dim", c.dim},
            {"learning_rate", c.learning_rate},
            {"min_learning_rate", c.min_learning_rate},
            {"epochs", c.epochs},
            {"mode", c.mode == Doc2VecMode::pv_dbow ? "pv_dbow" : "pv_dm"},
            {"window", c.window},
            {"negative_samples", c.negative_samples},
            {"min_word_count", c.min_word_count},
            {"seed", c.seed},
            {"infer_epochs", c.infer_epochs},
            {"threads", c.threads}};
}

Doc2VecConfig doc2vec_config_from_json(const json& j) {
    Doc2VecConfig c;
    c.dim = j.at("dim").get<int>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.min_learning_rate = j.at("min_learning_rate").get<double>();
    c.epochs = j.at("epochs").get<int>();
    c.mode = j.at("mode").get<std::string>() == "pv_dm" ? Doc2VecMode::pv_dm
                                                        : Doc2VecMode::pv_dbow;
    c.window = j.at("window").get<int>();
    c.negative_samples = j.at("negative_samples").get<int>();
    c.min_word_count = j.at("min_word_count").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.infer_epochs = j.at("infer_epochs").get<int>();
    c.threads = j.at("threads").get<int>();
    return c;
}

json pipeline_config_to_json(const PipelineConfig& c) {
    return {{"cleaning", cleaning_to_json(c.cleaning)},
            {"tfidf", tfidf_config_to_json(c.tfidf)},
            {"doc2vec", doc2vec_config_to_json(c.doc2vec)},
            {"split", {{"train_fraction", c.split.train_fraction}, {"seed", c.split.seed}}},
            {"min_count", c.min_count},
            {"linear_svc",
             {{"c", c.linear_svc.c},
              {"epochs", c.linear_svc.epochs},
              {"learning_rate", c.linear_svc.learning_rate},
              {"seed", c.linear_svc.seed}}},
            {"logistic_regression",
             {{"l2", c.logistic_regression.l2},
              {"epochs", c.logistic_regression.epochs},
              {"learning_rate", c.logistic_regression.learning_rate},
              {"seed", c.logistic_regression.seed}}},
            {"multinomial_nb", {{"alpha", c.multinomial_nb.alpha}}},
            {"gaussian_nb", {{"var_smoothing", c.gaussian_nb.var_smoothing}}},
            {"random_forest",
             {{"n_trees", c.random_forest.n_trees},
              {"max_features", c.random_forest.max_features},
              {"bootstrap", c.random_forest.bootstrap},
              {"seed", c.random_forest.seed},
              {"threads", c.random_forest.threads}}},
            {"mlp",
             {{"hidden_layers", c.mlp.hidden_layers},
              {"max_iter", c.mlp.max_iter},
              {"learning_rate", c.mlp.learning_rate},
              {"batch_size", c.mlp.batch_size},
              {"tol", c.mlp.tol},
              {"n_iter_no_change", c.mlp.n_iter_no_change},
              {"seed", c.mlp.seed}}},
            {"seed", c.seed}};
}

PipelineConfig pipeline_config_from_json(const json& j) {
    PipelineConfig c;
    c.cleaning = cleaning_from_json(j.at("cleaning"));
    c.tfidf = tfidf_config_from_json(j.at("tfidf"));
    c.doc2vec = doc2vec_config_from_json(j.at("doc2vec"));
    c.split.train_fraction = j.at("split").at("train_fraction").get<double>();
    c.split.seed = j.at("split").at("seed").get<std::uint64_t>();
    c.min_count = j.at("min_count").get<int>();
    const auto& svc = j.at("linear_svc");
    c.linear_svc = {svc.at("c").get<double>(), svc.at("epochs").get<int>(),
                    svc.at("learning_rate").get<double>(), svc.at("seed").get<std::uint64_t>()};
    const auto& lr = j.at("logistic_regression");
    c.logistic_regression = {lr.at("l2").get<double>(), lr.at("epochs").get<int>(),
                             lr.at("learning_rate").get<double>(),
                             lr.at("seed").get<std::uint64_t>()};
    c.multinomial_nb.alpha = j.at("multinomial_nb").at("alpha").get<double>();
    c.gaussian_nb.var_smoothing = j.at("gaussian_nb").at("var_smoothing").get<double>();
    const auto& rf = j.at("random_forest");
    c.random_forest = {rf.at("n_trees").get<int>(), rf.at("max_features").get<int>(),
                       rf.at("bootstrap").get<bool>(), rf.at("seed").get<std::uint64_t>(),
                       rf.at("threads").get<int>()};
    const auto& mlp = j.at("mlp");
    c.mlp = {mlp.at("hidden_layers").get<std::vector<int>>(),
             mlp.at("max_iter").get<int>(),
             mlp.at("learning_rate").get<double>(),
             mlp.at("batch_size").get<int>(),
             mlp.at("tol").get<double>(),
             mlp.at("n_iter_no_change").get<int>(),
             mlp.at("seed").get<std::uint64_t>()};
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

// --- model serialization -----------------------------------------------------

json tfidf_model_to_json(const TfidfModel& m) {
    return {{"config", tfidf_config_to_json(m.config)},
            {"terms", m.vocabulary.terms},
            {"doc_freqs", m.vocabulary.doc_freqs},
            {"n_docs", m.vocabulary.n_docs},
            {"idf", encode_doubles(m.idf)}};
}

TfidfModel tfidf_model_from_json(const json& j) {
    TfidfModel m;
    m.config = tfidf_config_from_json(j.at("config"));
    m.vocabulary.terms = j.at("terms").get<std::vector<std::string>>();
    m.vocabulary.doc_freqs = j.at("doc_freqs").get<std::vector<int>>();
    m.vocabulary.n_docs = j.at("n_docs").get<std::size_t>();
    for (std::size_t i = 0; i < m.vocabulary.terms.size(); ++i) {
        m.vocabulary.term_index.emplace(m.vocabulary.terms[i], i);
    }
    m.idf = decode_doubles(j.at("idf").get<std::string>());
    if (m.idf.size() != m.vocabulary.terms.size() ||
        m.vocabulary.doc_freqs.size() != m.vocabulary.terms.size()) {
        throw ArtifactError("corrupt artifact: tfidf model arrays misaligned");
    }
    return m;
}

json doc2vec_model_to_json(const Doc2VecModel& m) {
    return {{"config", doc2vec_config_to_json(m.config)},
            {"words", m.vocab.words},
            {"counts", m.vocab.counts},
            {"word_vectors", encode_doubles(m.word_vectors)},
            {"doc_vectors", encode_doubles(m.doc_vectors)},
            {"doc_tags", m.doc_tags},
            {"noise_distribution", encode_doubles(m.noise_distribution)},
            {"epoch_losses", encode_doubles(m.epoch_losses)}};
}

Doc2VecModel doc2vec_model_from_json(const json& j) {
    Doc2VecModel m;
    m.config = doc2vec_config_from_json(j.at("config"));
    m.vocab.words = j.at("words").get<std::vector<std::string>>();
    m.vocab.counts = j.at("counts").get<std::vector<std::int64_t>>();
    for (std::size_t i = 0; i < m.vocab.words.size(); ++i) {
        m.vocab.index.emplace(m.vocab.words[i], i);
    }
    m.word_vectors = decode_doubles(j.at("word_vectors").get<std::string>());
    m.doc_vectors = decode_doubles(j.at("doc_vectors").get<std::string>());
    m.doc_tags = j.at("doc_tags").get<std::vector<std::string>>();
    m.noise_distribution = decode_doubles(j.at("noise_distribution").get<std::string>());
    m.epoch_losses = decode_doubles(j.at("epoch_losses").get<std::string>());
    const auto dim = static_cast<std::size_t>(m.config.dim);
    if (m.word_vectors.size() != m.vocab.words.size() * dim ||
        m.doc_vectors.size() != m.doc_tags.size() * dim ||
        m.noise_distribution.size() != m.vocab.words.size()) {
        throw ArtifactError("corrupt artifact: doc2vec model arrays misaligned");
    }
    return m;
}

json classifier_to_json(const TrainedClassifier& c) {
    json j;
    j["kind"] = to_string(c.kind);
    j["classes"] = c.classes;
    if (const auto* p = std::get_if<LinearParams>(&c.params)) {
        j["params"] = {{"n_features", p->n_features}, {"weights", encode_doubles(p->weights)}};
    } else if (const auto* p = std::get_if<MultinomialNbParams>(&c.params)) {
        j["params"] = {{"n_features", p->n_features},
                       {"alpha", p->alpha},
                       {"class_log_prior", encode_doubles(p->class_log_prior)},
                       {"feature_log_prob", encode_doubles(p->feature_log_prob)}};
    } else if (const auto* p = std::get_if<GaussianNbParams>(&c.params)) {
        j["params"] = {{"n_features", p->n_features},
                       {"class_log_prior", encode_doubles(p->class_log_prior)},
                       {"means", encode_doubles(p->means)},
                       {"variances", encode_doubles(p->variances)}};
    } else if (const auto* p = std::get_if<RandomForestParams>(&c.params)) {
        json trees = json::array();
        for (const auto& tree : p->trees) {
            std::vector<int> features, lefts, rights, labels;
            std::vector<double> thresholds;
            for (const auto& node : tree.nodes) {
                features.push_back(node.feature);
                thresholds.push_back(node.threshold);
                lefts.push_back(node.left);
                rights.push_back(node.right);
                labels.push_back(node.label);
            }
            trees.push_back({{"features", features},
                             {"thresholds", encode_doubles(thresholds)},
                             {"lefts", lefts},
                             {"rights", rights},
                             {"labels", labels}});
        }
        j["params"] = {{"n_features", p->n_features}, {"trees", std::move(trees)}};
    } else if (const auto* p = std::get_if<MlpParams>(&c.params)) {
        json weights = json::array(), biases = json::array();
        for (const auto& w : p->weights) weights.push_back(encode_doubles(w));
        for (const auto& b : p->biases) biases.push_back(encode_doubles(b));
        j["params"] = {{"layer_sizes", p->layer_sizes},
                       {"weights", std::move(weights)},
                       {"biases", std::move(biases)},
                       {"loss_trace", encode_doubles(p->loss_trace)}};
    }
    return j;
}

TrainedClassifier classifier_from_json(const json& j) {
    TrainedClassifier c;
    c.kind = classifier_kind_from_string(j.at("kind").get<std::string>());
    c.classes = j.at("classes").get<std::vector<int>>();
    const auto& p = j.at("params");
    switch (c.kind) {
        case ClassifierKind::linear_svc:
        case ClassifierKind::logistic_regression: {
            LinearParams params;
            params.n_features = p.at("n_features").get<std::size_t>();
            params.weights = decode_doubles(p.at("weights").get<std::string>());
            c.params = std::move(params);
            break;
        }
        case ClassifierKind::multinomial_nb: {
            MultinomialNbParams params;
            params.n_features = p.at("n_features").get<std::size_t>();
            params.alpha = p.at("alpha").get<double>();
            params.class_log_prior = decode_doubles(p.at("class_log_prior").get<std::string>());
            params.feature_log_prob = decode_doubles(p.at("feature_log_prob").get<std::string>());
            c.params = std::move(params);
            break;
        }
        case ClassifierKind::gaussian_nb: {
            GaussianNbParams params;
            params.n_features = p.at("n_features").get<std::size_t>();
            params.class_log_prior = decode_doubles(p.at("class_log_prior").get<std::string>());
            params.means = decode_doubles(p.at("means").get<std::string>());
            params.variances = decode_doubles(p.at("variances").get<std::string>());
            c.params = std::move(params);
            break;
        }
        case ClassifierKind::random_forest: {
            RandomForestParams params;
            params.n_features = p.at("n_features").get<std::size_t>();
            for (const auto& t : p.at("trees")) {
                DecisionTree tree;
                auto features = t.at("features").get<std::vector<int>>();
                auto thresholds = decode_doubles(t.at("thresholds").get<std::string>());
                auto lefts = t.at("lefts").get<std::vector<int>>();
                auto rights = t.at("rights").get<std::vector<int>>();
                auto labels = t.at("labels").get<std::vector<int>>();
                if (features.size() != thresholds.size() || features.size() != lefts.size() ||
                    features.size() != rights.size() || features.size() != labels.size()) {
                    throw ArtifactError("corrupt artifact: forest arrays misaligned");
                }
                for (std::size_t i = 0; i < features.size(); ++i) {
                    tree.nodes.push_back(
                        {features[i], thresholds[i], lefts[i], rights[i], labels[i]});
                }
                params.trees.push_back(std::move(tree));
            }
            c.params = std::move(params);
            break;
        }
        case ClassifierKind::mlp: {
            MlpParams params;
            params.layer_sizes = p.at("layer_sizes").get<std::vector<std::size_t>>();
            for (const auto& w : p.at("weights")) {
                params.weights.push_back(decode_doubles(w.get<std::string>()));
            }
            for (const auto& b : p.at("biases")) {
                params.biases.push_back(decode_doubles(b.get<std::string>()));
            }
            params.loss_trace = decode_doubles(p.at("loss_trace").get<std::string>());
            c.params = std::move(params);
            break;
        }
    }
    return c;
}

}  // namespace

std::string pipeline_config_to_string(const PipelineConfig& config) {
    return pipeline_config_to_json(config).dump();
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string current_timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* pinned = std::getenv("SOURCE_DATE_EPOCH")) {
        t = static_cast<std::time_t>(std::strtoll(pinned, nullptr, 10));
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void save_artifact(const PipelineArtifact& artifact, const std::string& path) {
    json payload;
    payload["format_version"] = artifact.format_version;
    json featurizer;
    featurizer["type"] = to_string(artifact.featurizer.type);
    featurizer["cleaning"] = cleaning_to_json(artifact.featurizer.cleaning);
    if (artifact.featurizer.type == FeaturizerType::tfidf) {
        featurizer["model"] = tfidf_model_to_json(std::get<TfidfModel>(artifact.featurizer.model));
    } else {
        featurizer["model"] =
            doc2vec_model_to_json(std::get<Doc2VecModel>(artifact.featurizer.model));
    }
    payload["featurizer"] = std::move(featurizer);
    payload["classifier"] = classifier_to_json(artifact.classifier);
    json taxonomy = json::object();
    for (const auto& [id, label] : artifact.taxonomy) taxonomy[std::to_string(id)] = label;
    payload["taxonomy"] = std::move(taxonomy);
    payload["provenance"] = {{"dataset_sha256", artifact.dataset_sha256},
                             {"seed", artifact.seed},
                             {"configs", pipeline_config_to_json(artifact.config)},
                             {"timestamp", artifact.timestamp}};
    json envelope;
    envelope["digest"] = sha256_hex(payload.dump());
    envelope["payload"] = std::move(payload);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArtifactError("cannot write artifact file: " + path);
    out << envelope.dump(2) << "\n";
}

PipelineArtifact load_artifact(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArtifactError("cannot open artifact file: " + path);
    json envelope;
    try {
        envelope = json::parse(in);
    } catch (const json::exception& e) {
        throw ArtifactError("corrupt artifact file " + path + ": " + e.what());
    }
    try {
        if (!envelope.contains("digest") || !envelope.contains("payload")) {
            throw ArtifactError("corrupt artifact file " + path + ": missing envelope fields");
        }
        const json& payload = envelope.at("payload");
        if (envelope.at("digest").get<std::string>() != sha256_hex(payload.dump())) {
            throw ArtifactError("corrupt artifact file " + path + ": digest mismatch");
        }
        PipelineArtifact artifact;
        artifact.format_version = payload.at("format_version").get<int>();
        if (artifact.format_version != kArtifactFormatVersion) {
            throw ArtifactError("unsupported artifact format version " +
                                std::to_string(artifact.format_version) + " (supported: " +
                                std::to_string(kArtifactFormatVersion) + ")");
        }
        const json& featurizer = payload.at("featurizer");
        artifact.featurizer.type =
            featurizer_from_string(featurizer.at("type").get<std::string>());
        artifact.featurizer.cleaning = cleaning_from_json(featurizer.at("cleaning"));
        if (artifact.featurizer.type == FeaturizerType::tfidf) {
            artifact.featurizer.model = tfidf_model_from_json(featurizer.at("model"));
        } else {
            artifact.featurizer.model = doc2vec_model_from_json(featurizer.at("model"));
        }
        artifact.classifier = classifier_from_json(payload.at("classifier"));
        for (const auto& [key, value] : payload.at("taxonomy").items()) {
            artifact.taxonomy[std::stoi(key)] = value.get<std::string>();
        }
        const json& provenance = payload.at("provenance");
        artifact.dataset_sha256 = provenance.at("dataset_sha256").get<std::string>();
        artifact.seed = provenance.at("seed").get<std::uint64_t>();
        artifact.config = pipeline_config_from_json(provenance.at("configs"));
        artifact.timestamp = provenance.at("timestamp").get<std::string>();
        for (int cls : artifact.classifier.classes) {
            if (!artifact.taxonomy.count(cls)) {
                throw ArtifactError("corrupt artifact file " + path + ": taxonomy missing class " +
                                    std::to_string(cls));
            }
        }
        return artifact;
    } catch (const ArtifactError&) {
        throw;
    } catch (const std::exception& e) {
        throw ArtifactError("corrupt artifact file " + path + ": " + e.what());
    }
}

}  // namespace conseq

#include "conseq/cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "conseq/artifact.hpp"
#include "conseq/errors.hpp"
#include "conseq/eval.hpp"
#include "conseq/random.hpp"

namespace conseq {

namespace {

using json = nlohmann::json;

// --- flat key-value config file ----------------------------------------------

void apply_config_key(PipelineConfig& cfg, const std::string& key, const json& value) {
    auto as_bool = [&] { return value.get<bool>(); };
    auto as_int = [&] { return value.get<int>(); };
    auto as_double = [&] { return value.get<double>(); };
    auto as_u64 = [&] { return value.get<std::uint64_t>(); };

    if (key == "cleaning.lowercase") cfg.cleaning.lowercase = as_bool();
    else if (key == "cleaning.strip_punctuation") cfg.cleaning.strip_punctuation = as_bool();
    else if (key == "cleaning.strip_digits") cfg.cleaning.strip_digits = as_bool();
    else if (key == "cleaning.remove_stopwords") cfg.cleaning.remove_stopwords = as_bool();
    else if (key == "cleaning.stopwords_file") {
        cfg.cleaning.stopwords = load_stopwords(value.get<std::string>());
    }
    else if (key == "tfidf.min_df") cfg.tfidf.min_df = as_int();
    else if (key == "tfidf.max_df_ratio") cfg.tfidf.max_df_ratio = as_double();
    else if (key == "tfidf.ngram_min") cfg.tfidf.ngram_min = as_int();
    else if (key == "tfidf.ngram_max") cfg.tfidf.ngram_max = as_int();
    else if (key == "tfidf.smooth_idf") cfg.tfidf.smooth_idf = as_bool();
    else if (key == "tfidf.l2_normalize") cfg.tfidf.l2_normalize = as_bool();
    else if (key == "doc2vec.dim") cfg.doc2vec.dim = as_int();
    else if (key == "doc2vec.learning_rate") cfg.doc2vec.learning_rate = as_double();
    else if (key == "doc2vec.min_learning_rate") cfg.doc2vec.min_learning_rate = as_double();
    else if (key == "doc2vec.epochs") cfg.doc2vec.epochs = as_int();
    else if (key == "doc2vec.mode") {
        auto mode = value.get<std::string>();
        if (mode != "pv_dbow" && mode != "pv_dm") {
            throw std::invalid_argument("config: doc2vec.mode must be pv_dbow or pv_dm");
        }
        cfg.doc2vec.mode = mode == "pv_dm" ? Doc2VecMode::pv_dm : Doc2VecMode::pv_dbow;
    }
    else if (key == "doc2vec.window") cfg.doc2vec.window = as_int();
    else if (key == "doc2vec.negative_samples") cfg.doc2vec.negative_samples = as_int();
    else if (key == "doc2vec.min_word_count") cfg.doc2vec.min_word_count = as_int();
    else if (key == "doc2vec.infer_epochs") cfg.doc2vec.infer_epochs = as_int();
    else if (key == "doc2vec.threads") cfg.doc2vec.threads = as_int();
    else if (key == "doc2vec.seed") cfg.doc2vec.seed = as_u64();
    else if (key == "split.train_fraction") cfg.split.train_fraction = as_double();
    else if (key == "split.seed") cfg.split.seed = as_u64();
    else if (key == "min_count") cfg.min_count = as_int();
    else if (key == "linear_svc.c") cfg.linear_svc.c = as_double();
    else if (key == "linear_svc.epochs") cfg.linear_svc.epochs = as_int();
    else if (key == "linear_svc.learning_rate") cfg.linear_svc.learning_rate = as_double();
    else if (key == "linear_svc.seed") cfg.linear_svc.seed = as_u64();
    else if (key == "logreg.l2") cfg.logistic_regression.l2 = as_double();
    else if (key == "logreg.epochs") cfg.logistic_regression.epochs = as_int();
    else if (key == "logreg.learning_rate") cfg.logistic_regression.learning_rate = as_double();
    else if (key == "logreg.seed") cfg.logistic_regression.seed = as_u64();
    else if (key == "multinomial_nb.alpha") cfg.multinomial_nb.alpha = as_double();
    else if (key == "gaussian_nb.var_smoothing") cfg.gaussian_nb.var_smoothing = as_double();
    else if (key == "random_forest.n_trees") cfg.random_forest.n_trees = as_int();
    else if (key == "random_forest.max_features") cfg.random_forest.max_features = as_int();
    else if (key == "random_forest.bootstrap") cfg.random_forest.bootstrap = as_bool();
    else if (key == "random_forest.threads") cfg.random_forest.threads = as_int();
    else if (key == "random_forest.seed") cfg.random_forest.seed = as_u64();
    else if (key == "mlp.hidden_layers") cfg.mlp.hidden_layers = value.get<std::vector<int>>();
    else if (key == "mlp.max_iter") cfg.mlp.max_iter = as_int();
    else if (key == "mlp.learning_rate") cfg.mlp.learning_rate = as_double();
    else if (key == "mlp.batch_size") cfg.mlp.batch_size = as_int();
    else if (key == "mlp.tol") cfg.mlp.tol = as_double();
    else if (key == "mlp.n_iter_no_change") cfg.mlp.n_iter_no_change = as_int();
    else if (key == "mlp.seed") cfg.mlp.seed = as_u64();
    else if (key == "seed") cfg.seed = as_u64();  // applied by the caller
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

struct CliState {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string config_path;
    std::string format = "text";
    std::string average = "weighted";
    int min_count = 3;
    bool min_count_given = false;

    PipelineConfig build_config() const {
        PipelineConfig cfg;
        cfg.apply_seed(0);
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ParseError("cannot open config file: " + config_path);
            json root;
            try {
                root = json::parse(in);
            } catch (const json::exception& e) {
                throw ParseError("cannot parse config file " + config_path + ": " + e.what());
            }
            if (!root.is_object()) {
                throw ParseError("config file must hold a flat key-value object");
            }
            if (root.contains("seed")) cfg.apply_seed(root.at("seed").get<std::uint64_t>());
            for (const auto& [key, value] : root.items()) {
                if (key == "seed") continue;
                apply_config_key(cfg, key, value);
            }
        }
        if (const char* path = std::getenv("CONSEQ_STOPWORDS")) {
            cfg.cleaning.stopwords = load_stopwords(path);
        }
        if (seed_given) cfg.apply_seed(seed);
        if (min_count_given) cfg.min_count = min_count;
        return cfg;
    }
};

// --- output formatting ---------------------------------------------------------

std::string fmt(double v, int precision = 4) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(precision) << v;
    return ss.str();
}

void print_report(std::ostream& out, const EvaluationReport& report, const std::string& title,
                  const std::string& average = "weighted") {
    const bool macro = average == "macro";
    out << title << ": accuracy " << fmt(report.accuracy) << ", precision "
        << fmt(macro ? report.precision_macro : report.precision_weighted) << ", recall "
        << fmt(macro ? report.recall_macro : report.recall_weighted) << ", f1 "
        << fmt(macro ? report.f1_macro : report.f1_weighted) << " (" << average << ")\n";
}

void print_report_details(std::ostream& out, const EvaluationReport& report) {
    out << "per-class (precision / recall / f1 / support):\n";
    for (const auto& [cls, m] : report.per_class) {
        out << "  " << std::setw(3) << cls << ": " << fmt(m.precision) << " / " << fmt(m.recall)
            << " / " << fmt(m.f1) << " / " << m.support << "\n";
    }
    out << "confusion matrix (rows true, cols predicted; classes";
    for (int c : report.confusion.classes) out << " " << c;
    out << "):\n";
    for (const auto& row : report.confusion.counts) {
        out << " ";
        for (int c : row) out << " " << std::setw(4) << c;
        out << "\n";
    }
}

json report_to_json(const EvaluationReport& report) {
    json per_class = json::object();
    for (const auto& [cls, m] : report.per_class) {
        per_class[std::to_string(cls)] = {{"precision", m.precision},
                                          {"recall", m.recall},
                                          {"f1", m.f1},
                                          {"support", m.support}};
    }
    return {{"accuracy", report.accuracy},
            {"precision_weighted", report.precision_weighted},
            {"recall_weighted", report.recall_weighted},
            {"f1_weighted", report.f1_weighted},
            {"precision_macro", report.precision_macro},
            {"recall_macro", report.recall_macro},
            {"f1_macro", report.f1_macro},
            {"per_class", std::move(per_class)},
            {"confusion", {{"classes", report.confusion.classes},
                           {"counts", report.confusion.counts}}}};
}

// --- commands ------------------------------------------------------------------

int cmd_ingest(const std::string& input, const std::string& format, const std::string& out_path,
               std::ostream& out) {
    Dataset dataset;
    if (format == "csv") dataset = load_dataset(input, DatasetFormat::csv);
    else if (format == "json") dataset = load_dataset(input, DatasetFormat::json);
    else dataset = load_dataset(input);
    save_dataset(dataset, out_path);
    out << "ingested " << dataset.records.size() << " records -> " << out_path << "\n";
    return 0;
}

int cmd_inspect(const std::string& path, const CliState& state, std::ostream& out) {
    Dataset dataset = load_dataset(path);
    if (state.min_count_given) {
        try {
            dataset = filter_rare_classes(dataset, state.min_count);
        } catch (const ValidationError&) {
            out << "dataset is empty after filtering classes below " << state.min_count
                << " instances\n";
            return 0;
        }
    }
    auto histogram = class_histogram(dataset);
    std::size_t n_descriptions = 0, n_words = 0;
    for (const auto& rec : dataset.records) {
        for (const auto& d : rec.descriptions) {
            ++n_descriptions;
            std::istringstream ss(d);
            std::string w;
            while (ss >> w) ++n_words;
        }
    }
    double mean_words =
        n_descriptions > 0 ? static_cast<double>(n_words) / n_descriptions : 0.0;
    if (state.format == "json") {
        json hist = json::object();
        for (const auto& [label, count] : histogram) hist[std::to_string(label)] = count;
        out << json{{"records", dataset.records.size()},
                    {"classes", histogram.size()},
                    {"histogram", std::move(hist)},
                    {"mean_description_words", mean_words}}
                   .dump(2)
            << "\n";
        return 0;
    }
    out << "records: " << dataset.records.size() << "\n";
    out << "classes: " << histogram.size() << "\n";
    out << "class histogram:\n";
    for (const auto& [label, count] : histogram) {
        out << "  " << std::setw(3) << label << ": " << std::setw(3) << count << "  "
            << std::string(static_cast<std::size_t>(count), '#') << "\n";
    }
    out << "mean description length: " << fmt(mean_words, 1) << " words\n";
    return 0;
}

int cmd_split(const std::string& path, const std::string& train_out, const std::string& test_out,
              double fraction, const CliState& state, std::ostream& out) {
    auto cfg = state.build_config();
    if (fraction > 0.0) cfg.split.train_fraction = fraction;
    Dataset dataset = filter_rare_classes(load_dataset(path), cfg.min_count);
    auto [train, test] = stratified_split(dataset, cfg.split);
    save_dataset(train, train_out);
    save_dataset(test, test_out);
    out << "split " << dataset.records.size() << " records -> " << train.records.size()
        << " train (" << train_out << "), " << test.records.size() << " test (" << test_out
        << ")\n";
    return 0;
}

PipelineArtifact train_artifact(const std::string& dataset_path, FeaturizerType featurizer,
                                ClassifierKind kind, const PipelineConfig& cfg,
                                EvaluationReport* train_report, EvaluationReport* test_report,
                                std::size_t* n_train, std::size_t* n_test) {
    Dataset raw = load_dataset(dataset_path);
    const std::string dataset_hash = sha256_hex(dataset_to_json(raw));
    Dataset dataset = filter_rare_classes(raw, cfg.min_count);
    auto [train, test] = stratified_split(dataset, cfg.split);
    auto train_docs = tokenize_records(train, cfg.cleaning);
    auto test_docs = tokenize_records(test, cfg.cleaning);
    std::vector<std::string> train_tags;
    for (const auto& rec : train.records) train_tags.push_back(rec.id);

    auto fitted = fit_features(featurizer, train_docs, train_tags, cfg);
    auto classifier = train_kind(kind, fitted.train, labels_of(train), cfg);
    auto train_pred = classifier.predict(fitted.train);
    auto test_features = fitted.featurizer.transform(test_docs, mix_seed(cfg.seed, 0x7E57ULL));
    auto test_pred = classifier.predict(test_features);
    if (train_report) *train_report = evaluate(labels_of(train), train_pred);
    if (test_report) *test_report = evaluate(labels_of(test), test_pred);
    if (n_train) *n_train = train.records.size();
    if (n_test) *n_test = test.records.size();

    PipelineArtifact artifact;
    artifact.featurizer = std::move(fitted.featurizer);
    artifact.classifier = std::move(classifier);
    for (const auto& cluster : dataset.taxonomy) {
        artifact.taxonomy[cluster.id] = cluster.label;
    }
    artifact.dataset_sha256 = dataset_hash;
    artifact.seed = cfg.seed;
    artifact.config = cfg;
    artifact.timestamp = current_timestamp();
    return artifact;
}

int cmd_train(const std::string& dataset_path, const std::string& featurizer,
              const std::string& model, const std::string& out_path, const CliState& state,
              std::ostream& out) {
    auto cfg = state.build_config();
    EvaluationReport train_report, test_report;
    std::size_t n_train = 0, n_test = 0;
    auto artifact = train_artifact(dataset_path, featurizer_from_string(featurizer),
                                   classifier_kind_from_string(model), cfg, &train_report,
                                   &test_report, &n_train, &n_test);
    save_artifact(artifact, out_path);
    if (state.format == "json") {
        out << json{{"artifact", out_path},
                    {"n_train", n_train},
                    {"n_test", n_test},
                    {"train", report_to_json(train_report)},
                    {"test", report_to_json(test_report)}}
                   .dump(2)
            << "\n";
        return 0;
    }
    out << "trained " << featurizer << " + " << model << " on " << n_train << " records ("
        << n_test << " held out)\n";
    print_report(out, train_report, "train", state.average);
    print_report(out, test_report, "test", state.average);
    print_report_details(out, test_report);
    out << "artifact written to " << out_path << "\n";
    return 0;
}

std::vector<int> predict_texts(const PipelineArtifact& artifact,
                               const std::vector<std::string>& texts, std::uint64_t seed,
                               std::vector<bool>* low_signal) {
    std::vector<TokenizedDocument> docs;
    docs.reserve(texts.size());
    for (const auto& t : texts) docs.push_back(clean_and_tokenize(t, artifact.featurizer.cleaning));
    if (low_signal) low_signal->assign(docs.size(), false);

    FeatureMatrix features;
    if (artifact.featurizer.type == FeaturizerType::tfidf) {
        const auto& model = std::get<TfidfModel>(artifact.featurizer.model);
        std::vector<SparseVector> rows(docs.size());
        for (std::size_t i = 0; i < docs.size(); ++i) {
            rows[i] = model.transform(docs[i]);
            if (low_signal && rows[i].indices.empty()) (*low_signal)[i] = true;
        }
        features = FeatureMatrix::from_sparse(std::move(rows), model.vocabulary.size());
    } else {
        const auto& model = std::get<Doc2VecModel>(artifact.featurizer.model);
        const auto dim = static_cast<std::size_t>(model.config.dim);
        std::vector<double> data(docs.size() * dim, 0.0);
        for (std::size_t i = 0; i < docs.size(); ++i) {
            bool flag = false;
            auto vec =
                model.infer_vector(docs[i], model.config.infer_epochs, mix_seed(seed, i), &flag);
            if (low_signal && flag) (*low_signal)[i] = true;
            std::copy(vec.begin(), vec.end(), data.begin() + i * dim);
        }
        features = FeatureMatrix::from_dense(docs.size(), dim, std::move(data));
    }
    return artifact.classifier.predict(features);
}

int cmd_predict(const std::string& artifact_path, std::string text, const std::string& file,
                const CliState& state, std::ostream& out, std::ostream& err) {
    PipelineArtifact artifact = load_artifact(artifact_path);
    std::vector<std::string> texts;
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw ParseError("cannot open input file: " + file);
        std::string line;
        while (std::getline(in, line)) texts.push_back(line);
    } else {
        texts.push_back(std::move(text));
    }
    std::vector<bool> low_signal;
    auto predictions = predict_texts(artifact, texts, state.seed, &low_signal);
    json rows = json::array();
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        int cls = predictions[i];
        const auto it = artifact.taxonomy.find(cls);
        const std::string label = it != artifact.taxonomy.end() ? it->second : "";
        if (low_signal[i]) {
            err << "warning: input " << i + 1
                << " has no in-vocabulary terms; prediction is low-signal\n";
        }
        if (state.format == "json") {
            rows.push_back({{"input", texts[i]},
                            {"cluster", cls},
                            {"label", label},
                            {"low_signal", static_cast<bool>(low_signal[i])}});
        } else {
            out << "cluster " << cls << ": " << label << "\n";
        }
    }
    if (state.format == "json") out << rows.dump(2) << "\n";
    return 0;
}

int cmd_evaluate(const std::string& artifact_path, const std::string& dataset_path,
                 const CliState& state, std::ostream& out) {
    PipelineArtifact artifact = load_artifact(artifact_path);
    Dataset dataset = load_dataset(dataset_path);
    std::vector<std::string> texts;
    for (const auto& rec : dataset.records) texts.push_back(full_text(rec));
    auto predictions = predict_texts(artifact, texts, state.seed, nullptr);
    auto report = evaluate(labels_of(dataset), predictions);
    if (state.format == "json") {
        out << report_to_json(report).dump(2) << "\n";
        return 0;
    }
    print_report(out, report, "evaluation", state.average);
    print_report_details(out, report);
    return 0;
}

int cmd_compare(const std::string& dataset_path, const CliState& state, std::ostream& out) {
    auto cfg = state.build_config();
    Dataset dataset = filter_rare_classes(load_dataset(dataset_path), cfg.min_count);
    auto table = run_comparison(dataset, cfg);
    if (state.format == "json") {
        json rows = json::array();
        for (const auto& row : table.rows) {
            rows.push_back({{"featurizer", to_string(row.featurizer)},
                            {"model", to_string(row.model)},
                            {"accuracy", row.report.accuracy},
                            {"precision_weighted", row.report.precision_weighted},
                            {"recall_weighted", row.report.recall_weighted},
                            {"f1_weighted", row.report.f1_weighted}});
        }
        out << json{{"rows", std::move(rows)},
                    {"seed", table.seed},
                    {"n_train", table.n_train},
                    {"n_test", table.n_test},
                    {"test_majority_baseline", table.test_majority_baseline},
                    {"configs", json::parse(pipeline_config_to_string(table.config))}}
                   .dump(2)
            << "\n";
        return 0;
    }
    out << std::left << std::setw(11) << "featurizer" << std::setw(22) << "model"
        << std::right << std::setw(10) << "accuracy" << std::setw(11) << "precision"
        << std::setw(8) << "recall" << std::setw(10) << "f1" << "\n";
    const bool macro = state.average == "macro";
    for (const auto& row : table.rows) {
        const auto& r = row.report;
        out << std::left << std::setw(11) << to_string(row.featurizer) << std::setw(22)
            << to_string(row.model) << std::right << std::setw(10) << fmt(r.accuracy)
            << std::setw(11) << fmt(macro ? r.precision_macro : r.precision_weighted)
            << std::setw(8) << fmt(macro ? r.recall_macro : r.recall_weighted)
            << std::setw(10) << fmt(macro ? r.f1_macro : r.f1_weighted) << "\n";
    }
    out << "train/test: " << table.n_train << "/" << table.n_test
        << " records; test majority baseline " << fmt(table.test_majority_baseline) << "; seed "
        << table.seed << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cyber-attack consequence-cluster prediction toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    CliState state;
    auto* seed_opt = app.add_option("--seed", state.seed, "master seed for all random choices");
    app.add_option("--config", state.config_path, "flat key-value JSON config file");
    app.add_option("--format", state.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    auto* min_count_opt =
        app.add_option("--min-count", state.min_count, "drop classes with fewer instances");
    app.add_option("--average", state.average, "metric averaging mode")
        ->check(CLI::IsMember({"weighted", "macro"}));

    auto* ingest = app.add_subcommand("ingest", "normalize a dataset into canonical JSON");
    std::string in_path, in_format = "auto", out_path;
    ingest->add_option("input", in_path, "dataset file")->required();
    ingest->add_option("--input-format", in_format, "input format")
        ->check(CLI::IsMember({"auto", "csv", "json"}));
    ingest->add_option("--out", out_path, "output path")->required();

    auto* inspect = app.add_subcommand("inspect", "dataset summary and class histogram");
    std::string inspect_path;
    inspect->add_option("dataset", inspect_path, "dataset file")->required();

    auto* split = app.add_subcommand("split", "stratified train/test split");
    std::string split_path, train_out, test_out;
    double fraction = 0.0;
    split->add_option("dataset", split_path, "dataset file")->required();
    split->add_option("--train-out", train_out, "train output path")->required();
    split->add_option("--test-out", test_out, "test output path")->required();
    split->add_option("--fraction", fraction, "train fraction (default from config)");

    auto* train = app.add_subcommand("train", "train a featurizer + classifier pipeline");
    std::string train_path, featurizer = "tfidf", model = "linear_svc", artifact_out;
    train->add_option("dataset", train_path, "dataset file")->required();
    train->add_option("--featurizer", featurizer, "feature representation")
        ->check(CLI::IsMember({"tfidf", "doc2vec"}));
    train->add_option("--model", model, "classifier family")
        ->check(CLI::IsMember({"linear_svc", "logreg", "multinomial_nb", "gaussian_nb",
                               "random_forest", "mlp"}));
    train->add_option("--out", artifact_out, "artifact output path")->required();

    auto* evaluate_cmd = app.add_subcommand("evaluate", "evaluate an artifact against a dataset");
    std::string eval_artifact, eval_dataset;
    evaluate_cmd->add_option("artifact", eval_artifact, "artifact file")->required();
    evaluate_cmd->add_option("dataset", eval_dataset, "labeled dataset file")->required();

    auto* predict = app.add_subcommand("predict", "predict consequence clusters for new text");
    std::string predict_artifact, predict_text, predict_file;
    predict->add_option("artifact", predict_artifact, "artifact file")->required();
    predict->add_option("text", predict_text, "attack description text");
    predict->add_option("--file", predict_file, "file with one description per line");

    auto* compare = app.add_subcommand("compare", "featurizer x model comparison matrix");
    std::string compare_path;
    compare->add_option("dataset", compare_path, "dataset file")->required();

    std::vector<std::string> argv_list = args;
    try {
        std::vector<const char*> argv;
        argv.push_back("conseq");
        for (const auto& a : argv_list) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }
    state.seed_given = seed_opt->count() > 0;
    state.min_count_given = min_count_opt->count() > 0;

    try {
        if (*ingest) return cmd_ingest(in_path, in_format, out_path, out);
        if (*inspect) return cmd_inspect(inspect_path, state, out);
        if (*split) return cmd_split(split_path, train_out, test_out, fraction, state, out);
        if (*train) return cmd_train(train_path, featurizer, model, artifact_out, state, out);
        if (*evaluate_cmd) return cmd_evaluate(eval_artifact, eval_dataset, state, out);
        if (*predict) {
            if (predict_file.empty() && predict->count("text") == 0) {
                err << "error: predict needs a text argument or --file\n";
                return 1;
            }
            return cmd_predict(predict_artifact, predict_text, predict_file, state, out, err);
        }
        if (*compare) return cmd_compare(compare_path, state, out);
        err << "error: no command given\n";
        return 1;
    } catch (const ArtifactError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace conseq

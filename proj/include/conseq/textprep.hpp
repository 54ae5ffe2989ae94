#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace conseq {

/// Text normalization switches. The default stopword list is the bundled
/// English list (data/stopwords.txt ships the same words).
struct CleaningOptions {
    bool lowercase = true;
    bool strip_punctuation = true;
    bool strip_digits = true;
    bool remove_stopwords = true;
    std::set<std::string> stopwords;

    CleaningOptions();
    bool operator==(const CleaningOptions&) const = default;
};

struct TokenizedDocument {
    std::vector<std::string> tokens;

    bool empty() const { return tokens.empty(); }
    std::size_t size() const { return tokens.size(); }
    bool operator==(const TokenizedDocument&) const = default;
};

/// The bundled stopword list: lowercase, non-empty, punctuation-free words.
const std::set<std::string>& default_stopwords();

/// Reads a stopword file: one word per line, UTF-8, '#' starts a comment.
/// Entries are validated against the CleaningOptions invariants.
std::set<std::string> load_stopwords(const std::string& path);

/// Lowercases (when enabled), replaces punctuation and digits with spaces
/// (when enabled), splits on whitespace, and drops stopwords (when enabled).
/// Tokenization is byte-oriented ASCII; input order is preserved.
TokenizedDocument clean_and_tokenize(std::string_view text,
                                     const CleaningOptions& options = CleaningOptions());

/// Emits every contiguous n-token window for n in [n_min, n_max], tokens
/// joined by a single space, unigrams first. Requires 1 <= n_min <= n_max.
std::vector<std::string> ngrams(const TokenizedDocument& doc, int n_min, int n_max);

}  // namespace conseq

#include "conseq/textprep.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "conseq/errors.hpp"

namespace conseq {

namespace {

// clang-format off
const char* kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "ain", "all", "also",
    "am", "an", "and", "any", "are", "aren", "as", "at", "be", "because",
    "been", "before", "being", "below", "between", "both", "but", "by", "can",
    "cannot", "could", "couldn", "d", "dare", "did", "didn", "do", "does",
    "doesn", "doing", "don", "down", "during", "each", "either", "else",
    "ever", "every", "few", "for", "from", "further", "had", "hadn", "has",
    "hasn", "have", "haven", "having", "he", "her", "here", "hers", "herself",
    "him", "himself", "his", "how", "however", "i", "if", "in", "into", "is",
    "isn", "it", "its", "itself", "just", "ll", "m", "ma", "may", "me",
    "might", "mightn", "mine", "more", "most", "must", "mustn", "my",
    "myself", "need", "needn", "neither", "no", "nor", "not", "now", "o",
    "of", "off", "often", "on", "once", "only", "onto", "or", "other",
    "others", "ought", "our", "ours", "ourselves", "out", "over", "own", "re",
    "s", "same", "shall", "shan", "she", "should", "shouldn", "since", "so",
    "some", "such", "t", "than", "that", "the", "their", "theirs", "them",
    "themselves", "then", "there", "these", "they", "this", "those",
    "through", "thus", "to", "too", "under", "until", "up", "upon", "us",
    "ve", "very", "was", "wasn", "we", "were", "weren", "what", "when",
    "where", "whether", "which", "while", "who", "whom", "whose", "why",
    "will", "with", "within", "without", "won", "would", "wouldn", "y",
    "yet", "you", "your", "yours", "yourself", "yourselves",
};
// clang-format on

bool valid_stopword(const std::string& w) {
    if (w.empty()) return false;
    for (unsigned char c : w) {
        if (std::isupper(c) || std::ispunct(c)) return false;
    }
    return true;
}

}  // namespace

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words(std::begin(kStopwords), std::end(kStopwords));
    return words;
}

CleaningOptions::CleaningOptions() : stopwords(default_stopwords()) {}

std::set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open stopword file: " + path);
    std::set<std::string> words;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string word;
        while (ss >> word) {
            if (!valid_stopword(word)) {
                throw ValidationError("stopword file " + path + " line " +
                                      std::to_string(lineno) + ": invalid entry '" + word +
                                      "' (must be lowercase and punctuation-free)");
            }
            words.insert(word);
        }
    }
    return words;
}

TokenizedDocument clean_and_tokenize(std::string_view text, const CleaningOptions& options) {
    TokenizedDocument doc;
    std::string token;
    auto flush = [&] {
        if (!token.empty()) {
            if (!options.remove_stopwords || !options.stopwords.count(token)) {
                doc.tokens.push_back(token);
            }
            token.clear();
        }
    };
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (options.lowercase) c = static_cast<unsigned char>(std::tolower(c));
        bool separator = std::isspace(c) || (options.strip_punctuation && std::ispunct(c)) ||
                         (options.strip_digits && std::isdigit(c));
        if (separator) {
            flush();
        } else {
            token.push_back(static_cast<char>(c));
        }
    }
    flush();
    return doc;
}

std::vector<std::string> ngrams(const TokenizedDocument& doc, int n_min, int n_max) {
    if (n_min < 1 || n_min > n_max) {
        throw std::invalid_argument("ngrams: require 1 <= n_min <= n_max, got " +
                                    std::to_string(n_min) + ".." + std::to_string(n_max));
    }
    const auto& toks = doc.tokens;
    std::vector<std::string> out;
    for (int n = n_min; n <= n_max; ++n) {
        if (toks.size() < static_cast<std::size_t>(n)) continue;
        for (std::size_t i = 0; i + n <= toks.size(); ++i) {
            std::string term = toks[i];
            for (int k = 1; k < n; ++k) {
                term += ' ';
                term += toks[i + k];
            }
            out.push_back(std::move(term));
        }
    }
    return out;
}

}  // namespace conseq

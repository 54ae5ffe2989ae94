#pragma once

#include <stdexcept>
#include <string>

namespace conseq {

/// Input file could not be parsed (malformed CSV row, bad JSON, ...).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Input parsed but violates a dataset/schema invariant
/// (duplicate id, unknown cluster id, empty description, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace conseq

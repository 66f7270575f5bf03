#pragma once

#include <stdexcept>
#include <string>

namespace distne {

// Bad user-supplied parameter (flag value, config field).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

// Malformed input data (edge list, label file, segment file).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string &msg) : std::runtime_error(msg) {}
};

// A caller violated an API precondition (mismatched graph/assignment,
// out-of-range node id, wrong segment length).
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string &msg) : std::logic_error(msg) {}
};

// Pipeline data is inconsistent (duplicate segment, missing mandatory
// segment, lost intermediate file).
class IntegrityError : public std::runtime_error {
public:
    explicit IntegrityError(const std::string &msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace distne

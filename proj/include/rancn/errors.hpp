#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rancn {

// Contract violations surface as typed exceptions. Expected negative
// outcomes (infeasible embedding, rejected directive) are return values,
// not exceptions.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration: invalid region, odd fat-tree arity, unknown slice.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Argument outside an operation's mathematical domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// State inconsistency: oversubscribed cell, dangling link reference.
class IntegrityError : public Error {
public:
    explicit IntegrityError(const std::string& what) : Error(what) {}
};

class NotFoundError : public Error {
public:
    explicit NotFoundError(const std::string& what) : Error(what) {}
};

class DuplicateError : public Error {
public:
    explicit DuplicateError(const std::string& what) : Error(what) {}
};

// Text parse failure carrying the character position of the offending input.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_ = 0;
};

}  // namespace rancn

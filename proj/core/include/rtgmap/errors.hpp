#ifndef RTGMAP_ERRORS_HPP
#define RTGMAP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rtgmap {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Text could not be parsed (regex, grammar file, DTD, XML, op syntax).
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t line, std::size_t column)
        : Error(msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line(line), column(column) {}
    explicit SyntaxError(const std::string& msg, std::size_t offset = 0)
        : Error(msg + " (offset " + std::to_string(offset) + ")"), line(0), column(offset) {}

    std::size_t line;
    std::size_t column;
};

// A non-terminal is given two distinct terminal labels during normalization.
class ConflictingTerminal : public Error {
public:
    ConflictingTerminal(std::string nt, std::string a, std::string b)
        : Error("non-terminal " + nt + " maps to two terminals: " + a + " and " + b),
          nt(std::move(nt)), first(std::move(a)), second(std::move(b)) {}

    std::string nt;
    std::string first;
    std::string second;
};

// Reduction left no start symbol: the grammar generates nothing.
class EmptyLanguage : public Error {
public:
    EmptyLanguage() : Error("grammar generates the empty language") {}
};

// A non-terminal generates no finite terminal-only tree.
class Unproductive : public Error {
public:
    explicit Unproductive(std::string nt)
        : Error("non-terminal " + nt + " is unproductive"), nt(std::move(nt)) {}

    std::string nt;
};

// The edit operation's precondition fails on the given grammar.
class NotDefined : public Error {
public:
    NotDefined(std::string kind, std::string reason)
        : Error(kind + " not defined: " + reason),
          kind(std::move(kind)), reason(std::move(reason)) {}

    std::string kind;
    std::string reason;
};

// Index of the first failing op when folding a script.
class NotDefinedAt : public Error {
public:
    NotDefinedAt(std::size_t index, const std::string& inner)
        : Error("op " + std::to_string(index) + ": " + inner), index(index) {}

    std::size_t index;
};

// Deleting a rule would orphan occurrences of its non-terminal.
class DanglingReference : public Error {
public:
    explicit DanglingReference(std::string nt)
        : Error("deleting rule of " + nt + " would orphan occurrences in other rules"),
          nt(std::move(nt)) {}

    std::string nt;
};

// Composition endpoints do not agree.
class SchemaMismatch : public Error {
public:
    explicit SchemaMismatch(const std::string& detail)
        : Error("schema mismatch: " + detail) {}
};

// The document does not belong to the grammar's language.
class InvalidDocument : public Error {
public:
    explicit InvalidDocument(const std::string& detail)
        : Error("invalid document: " + detail) {}
};

// Every translation branch exceeded the threshold.
class NoSolution : public Error {
public:
    explicit NoSolution(const std::string& detail) : Error("no solution: " + detail) {}
};

// DTD construct outside the supported subset.
class UnsupportedFeature : public Error {
public:
    explicit UnsupportedFeature(const std::string& detail)
        : Error("unsupported feature: " + detail) {}
};

} // namespace rtgmap

#endif

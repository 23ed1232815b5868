#pragma once

/**
 * @file error.hpp
 * @brief Error codes and exception types shared by every mealyforge module.
 *
 * Library operations report contract violations by throwing `Error` (or one
 * of its subclasses). Validation of raw input is the one place where a full
 * list of problems is returned instead; see `validate()` in machine.hpp.
 */

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mealyforge {

enum class ErrorCode {
    MissingTransition,
    DuplicateTransition,
    UnknownSymbol,
    InvalidMachine,
    SignedStateOnNonInvertible,
    NotInvertible,
    NotReversible,
    NotRI,
    AlphabetMismatch,
    BudgetExceeded,
    OddLength,
    ParseError,
    NotAssociative,
    NoIdentity,
    NoInverse,
    InvalidArgument,
    PreconditionFailed,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingTransition: return "MissingTransition";
        case ErrorCode::DuplicateTransition: return "DuplicateTransition";
        case ErrorCode::UnknownSymbol: return "UnknownSymbol";
        case ErrorCode::InvalidMachine: return "InvalidMachine";
        case ErrorCode::SignedStateOnNonInvertible: return "SignedStateOnNonInvertible";
        case ErrorCode::NotInvertible: return "NotInvertible";
        case ErrorCode::NotReversible: return "NotReversible";
        case ErrorCode::NotRI: return "NotRI";
        case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::OddLength: return "OddLength";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NotAssociative: return "NotAssociative";
        case ErrorCode::NoIdentity: return "NoIdentity";
        case ErrorCode::NoInverse: return "NoInverse";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::string resource, std::size_t limit)
        : Error(ErrorCode::BudgetExceeded, resource + " exceeds budget of " + std::to_string(limit)),
          resource_(std::move(resource)), limit_(limit) {}

    const std::string& resource() const noexcept { return resource_; }
    std::size_t limit() const noexcept { return limit_; }

private:
    std::string resource_;
    std::size_t limit_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + reason),
          line_(line), reason_(reason) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

/// Size limits for the exponential constructions. Defaults can be raised
/// process-wide through the MEALYFORGE_BUDGET environment variable, which
/// overrides every state-count budget with a single number.
struct Budget {
    std::size_t power_states = 10'000'000;    // |Q|^k materialization
    std::size_t subset_states = 1'000'000;    // language inclusion
    std::size_t level_vertices = 10'000'000;  // level graphs
    std::size_t max_level = 20;
    std::size_t group_order = 1'000'000;      // permutation closure
    std::size_t group_size = 12;              // Cayley machine tables
    std::size_t enumeration = 10'000'000;     // word enumeration (ledger, scans)

    static Budget defaults() { return Budget{}; }

    static Budget from_env() {
        Budget b;
        if (const char* env = std::getenv("MEALYFORGE_BUDGET"); env != nullptr && *env != '\0') {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(env, &end, 10);
            if (end != env && v > 0) {
                const auto n = static_cast<std::size_t>(v);
                b.power_states = n;
                b.subset_states = n;
                b.level_vertices = n;
                b.group_order = n;
                b.enumeration = n;
            }
        }
        return b;
    }
};

}  // namespace mealyforge

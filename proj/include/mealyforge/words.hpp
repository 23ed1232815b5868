#pragma once

/**
 * @file words.hpp
 * @brief Alphabets, plain words, and words over involutive alphabets.
 *
 * Letters are dense indices into an `Alphabet`. A signed letter `a^-1` is the
 * formal inverse of `a`; signed alphabets of size 2n are encoded with the
 * positive letters first (`0..n-1`) and their inverses after (`n..2n-1`).
 */

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "error.hpp"

namespace mealyforge {

using Letter = std::uint32_t;
using State = std::uint32_t;
using Word = std::vector<Letter>;

inline constexpr std::string_view kInverseSuffix = "^-1";

class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
        if (symbols_.empty()) {
            throw Error(ErrorCode::InvalidArgument, "alphabet must be non-empty");
        }
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            if (symbols_[i].empty()) {
                throw Error(ErrorCode::InvalidArgument, "empty symbol name");
            }
            if (!index_.emplace(symbols_[i], static_cast<Letter>(i)).second) {
                throw Error(ErrorCode::InvalidArgument, "duplicate symbol '" + symbols_[i] + "'");
            }
        }
    }

    std::size_t size() const noexcept { return symbols_.size(); }
    const std::string& name(Letter a) const { return symbols_.at(a); }
    const std::vector<std::string>& symbols() const noexcept { return symbols_; }

    std::optional<Letter> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    Letter index(std::string_view name) const {
        if (auto a = find(name)) return *a;
        throw Error(ErrorCode::UnknownSymbol, "'" + std::string(name) + "'");
    }

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, Letter> index_;
};

struct SignedLetter {
    std::uint32_t base = 0;
    bool inverted = false;

    SignedLetter inverse() const { return {base, !inverted}; }
    int sign() const { return inverted ? -1 : 1; }

    /// Position in a signed alphabet of `n` positive letters.
    std::uint32_t encode(std::size_t n) const {
        return base + (inverted ? static_cast<std::uint32_t>(n) : 0U);
    }
    static SignedLetter decode(std::uint32_t code, std::size_t n) {
        if (code >= n) return {static_cast<std::uint32_t>(code - n), true};
        return {code, false};
    }

    auto operator<=>(const SignedLetter&) const = default;
};

using SignedWord = std::vector<SignedLetter>;

/// A word of states; signed entries act through the inverse machine.
using StateWord = std::vector<SignedLetter>;

inline SignedLetter pos(std::uint32_t a) { return {a, false}; }
inline SignedLetter neg(std::uint32_t a) { return {a, true}; }

inline StateWord positive_word(const Word& w) {
    StateWord out;
    out.reserve(w.size());
    for (Letter a : w) out.push_back(pos(a));
    return out;
}

/// Free reduction: cancels every factor `x x^-1`.
inline SignedWord reduce(const SignedWord& w) {
    SignedWord out;
    out.reserve(w.size());
    for (const auto& x : w) {
        if (!out.empty() && out.back() == x.inverse()) {
            out.pop_back();
        } else {
            out.push_back(x);
        }
    }
    return out;
}

inline bool is_reduced(const SignedWord& w) {
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i] == w[i - 1].inverse()) return false;
    }
    return true;
}

inline SignedWord inverse(const SignedWord& w) {
    SignedWord out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverse());
    return out;
}

inline SignedWord concat(SignedWord a, const SignedWord& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline Word concat(Word a, const Word& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline Word power(const Word& w, std::size_t exponent) {
    Word out;
    out.reserve(w.size() * exponent);
    for (std::size_t i = 0; i < exponent; ++i) out.insert(out.end(), w.begin(), w.end());
    return out;
}

inline StateWord power(const StateWord& w, std::size_t exponent) {
    StateWord out;
    out.reserve(w.size() * exponent);
    for (std::size_t i = 0; i < exponent; ++i) out.insert(out.end(), w.begin(), w.end());
    return out;
}

/// Path labels are read left to right, state words act rightmost first:
/// the path labelled g1...gm acts as the state word gm...g1.
inline StateWord path_to_state_word(const SignedWord& path) {
    return StateWord(path.rbegin(), path.rend());
}

// Names ----------------------------------------------------------------------

/// Formal inverse of a name; inverting twice gives the name back.
inline std::string inverse_name(const std::string& name) {
    if (name.size() > kInverseSuffix.size() && std::string_view(name).ends_with(kInverseSuffix)) {
        return name.substr(0, name.size() - kInverseSuffix.size());
    }
    return name + std::string(kInverseSuffix);
}

inline bool all_single_char(const std::vector<std::string>& names) {
    return std::all_of(names.begin(), names.end(), [](const std::string& s) { return s.size() == 1; });
}

/// Renders a word over `names`: plain concatenation when every symbol is a
/// single character, dot-separated otherwise. The empty word renders as "1".
inline std::string word_to_string(const Word& w, const std::vector<std::string>& names) {
    if (w.empty()) return "1";
    const bool compact = all_single_char(names);
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!compact && i > 0) out += '.';
        out += names.at(w[i]);
    }
    return out;
}

inline std::string signed_word_to_string(const SignedWord& w, const std::vector<std::string>& names) {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0) out += ' ';
        out += names.at(w[i].base);
        if (w[i].inverted) out += kInverseSuffix;
    }
    return out;
}

/// Parses one symbol, possibly carrying the `^-1` suffix.
inline SignedLetter parse_signed_symbol(std::string_view token, const Alphabet& alphabet) {
    if (token.size() > kInverseSuffix.size() && token.ends_with(kInverseSuffix)) {
        const auto base = token.substr(0, token.size() - kInverseSuffix.size());
        if (auto a = alphabet.find(base)) return neg(*a);
    }
    return pos(alphabet.index(token));
}

/// Splits text into symbol tokens. Tokens are separated by whitespace or
/// commas; a token that is not itself a symbol is split further on dots, and
/// over single-character alphabets an unseparated string is split per character
/// (so "0110" and "qq^-1e" both work).
inline std::vector<std::string> split_symbols(std::string_view text, const Alphabet& alphabet) {
    auto known = [&](const std::string& t) {
        if (alphabet.find(t)) return true;
        return t.size() > kInverseSuffix.size() && t.ends_with(kInverseSuffix) &&
               alphabet.find(std::string_view(t).substr(0, t.size() - kInverseSuffix.size()));
    };
    std::vector<std::string> coarse;
    std::string current;
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == ',') {
            if (!current.empty()) coarse.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) coarse.push_back(std::move(current));

    std::vector<std::string> tokens;
    for (const auto& tok : coarse) {
        if (known(tok)) {
            tokens.push_back(tok);
            continue;
        }
        if (tok.find('.') != std::string::npos) {
            std::string part;
            for (char c : tok) {
                if (c == '.') {
                    if (!part.empty()) tokens.push_back(std::move(part));
                    part.clear();
                } else {
                    part += c;
                }
            }
            if (!part.empty()) tokens.push_back(std::move(part));
            continue;
        }
        if (all_single_char(alphabet.symbols())) {
            for (std::size_t i = 0; i < tok.size(); ++i) {
                std::string sym(1, tok[i]);
                if (tok.compare(i + 1, kInverseSuffix.size(), kInverseSuffix) == 0) {
                    sym += kInverseSuffix;
                    i += kInverseSuffix.size();
                }
                tokens.push_back(std::move(sym));
            }
            continue;
        }
        tokens.push_back(tok);  // reported as unknown by the caller
    }
    return tokens;
}

inline Word parse_word(std::string_view text, const Alphabet& alphabet) {
    if (text == "1" && !alphabet.find("1")) return {};
    Word w;
    for (const auto& tok : split_symbols(text, alphabet)) w.push_back(alphabet.index(tok));
    return w;
}

inline SignedWord parse_signed_word(std::string_view text, const Alphabet& alphabet) {
    if (text == "1" && !alphabet.find("1")) return {};
    SignedWord w;
    for (const auto& tok : split_symbols(text, alphabet)) w.push_back(parse_signed_symbol(tok, alphabet));
    return w;
}

// Enumeration helpers ----------------------------------------------------------

/// Mixed-radix index of a word of fixed length over `n` letters, first letter
/// most significant.
inline std::size_t word_index(const Word& w, std::size_t n) {
    std::size_t idx = 0;
    for (Letter a : w) idx = idx * n + a;
    return idx;
}

inline Word word_from_index(std::size_t idx, std::size_t length, std::size_t n) {
    Word w(length);
    for (std::size_t i = length; i-- > 0;) {
        w[i] = static_cast<Letter>(idx % n);
        idx /= n;
    }
    return w;
}

inline std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t limit, const char* what) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && r > limit / base) throw BudgetExceeded(what, limit);
        r *= base;
    }
    if (r > limit) throw BudgetExceeded(what, limit);
    return r;
}

/// Calls `fn` on every reduced word of length 1..max_len over n letters, in
/// length-lexicographic order (signed codes ordered positive letters first).
inline void for_each_reduced_word(std::size_t n, std::size_t max_len,
                                  const std::function<void(const SignedWord&)>& fn) {
    SignedWord w;
    std::function<void(std::size_t)> extend = [&](std::size_t remaining) {
        if (remaining == 0) {
            fn(w);
            return;
        }
        for (std::uint32_t code = 0; code < 2 * n; ++code) {
            const auto x = SignedLetter::decode(code, n);
            if (!w.empty() && w.back() == x.inverse()) continue;
            w.push_back(x);
            extend(remaining - 1);
            w.pop_back();
        }
    };
    for (std::size_t len = 1; len <= max_len; ++len) extend(len);
}

struct WordHash {
    std::size_t operator()(const std::vector<std::uint32_t>& w) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (auto x : w) {
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

}  // namespace mealyforge

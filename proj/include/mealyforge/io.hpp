#pragma once

/**
 * @file io.hpp
 * @brief Text formats for machines and group tables, DOT export and JSON
 * reports.
 *
 * Machine files:
 *
 *     # odometer
 *     states: q e
 *     alphabet: 0 1
 *     q 0 -> e 1
 *     q 1 -> q 0
 *     e 0 -> e 0
 *     e 1 -> e 1
 *
 * Group files list the elements (identity first) and one multiplication row
 * per element, `g: g*e g*a ...`.
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "boundary.hpp"
#include "cayley.hpp"
#include "constructions.hpp"
#include "error.hpp"
#include "inverse_graphs.hpp"
#include "levels.hpp"
#include "machine.hpp"
#include "words.hpp"

namespace mealyforge {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string strip_comment(std::string line) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    return line;
}

inline std::vector<std::string> tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// "key: a b c" -> {a, b, c}; nullopt when the key does not match.
inline std::optional<std::vector<std::string>> header(const std::string& line, std::string_view key) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) return std::nullopt;
    const auto head = tokens(line.substr(0, colon));
    if (head.size() != 1 || head[0] != key) return std::nullopt;
    return tokens(line.substr(colon + 1));
}

inline std::string spaced_arrows(const std::string& line) {
    std::string out;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line.compare(i, 2, "->") == 0) {
            out += " -> ";
            ++i;
        } else {
            out += line[i];
        }
    }
    return out;
}

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace detail

// Machines ------------------------------------------------------------------------------------

inline RawMachine parse_raw_machine(std::string_view text) {
    RawMachine raw;
    bool have_states = false, have_alphabet = false;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        line = detail::strip_comment(line);
        if (detail::tokens(line).empty()) continue;
        if (auto s = detail::header(line, "states")) {
            if (have_states) throw ParseError(no, "repeated states line");
            if (s->empty()) throw ParseError(no, "no states listed");
            raw.states = std::move(*s);
            have_states = true;
            continue;
        }
        if (auto a = detail::header(line, "alphabet")) {
            if (have_alphabet) throw ParseError(no, "repeated alphabet line");
            if (a->empty()) throw ParseError(no, "no letters listed");
            raw.alphabet = std::move(*a);
            have_alphabet = true;
            continue;
        }
        if (!have_states || !have_alphabet) throw ParseError(no, "edge before the states and alphabet lines");
        const auto t = detail::tokens(detail::spaced_arrows(line));
        if (t.size() != 5 || t[2] != "->") throw ParseError(no, "expected 'FROM IN -> TO OUT'");
        raw.edges.push_back({t[0], t[1], t[3], t[4]});
    }
    if (!have_states) throw ParseError(no + 1, "missing states line");
    if (!have_alphabet) throw ParseError(no + 1, "missing alphabet line");
    return raw;
}

/// Throws ParseError on syntax, ValidationError on an ill-formed machine.
inline MealyMachine parse_machine(std::string_view text) { return validate_or_throw(parse_raw_machine(text)); }

inline std::string print_machine(const MealyMachine& m) {
    std::string out = "states:";
    for (const auto& q : m.state_names()) out += " " + q;
    out += "\nalphabet:";
    for (const auto& a : m.alphabet().symbols()) out += " " + a;
    out += "\n";
    for (State q = 0; q < m.num_states(); ++q) {
        for (Letter a = 0; a < m.num_letters(); ++a) {
            out += m.state_name(q) + " " + m.letter_name(a) + " -> " + m.state_name(m.next(q, a)) + " " +
                   m.letter_name(m.output(q, a)) + "\n";
        }
    }
    return out;
}

// Groups ---------------------------------------------------------------------------------------

inline GroupTable parse_group(std::string_view text, std::size_t max_order = Budget::defaults().group_size) {
    std::optional<std::vector<std::string>> elements;
    std::map<std::string, std::pair<std::size_t, std::vector<std::string>>> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        line = detail::strip_comment(line);
        if (detail::tokens(line).empty()) continue;
        if (auto e = detail::header(line, "elements")) {
            if (elements) throw ParseError(no, "repeated elements line");
            if (e->empty()) throw ParseError(no, "no elements listed");
            elements = std::move(*e);
            continue;
        }
        if (!elements) throw ParseError(no, "row before the elements line");
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError(no, "expected 'g: row'");
        const auto head = detail::tokens(line.substr(0, colon));
        if (head.size() != 1) throw ParseError(no, "expected a single element before ':'");
        auto row = detail::tokens(line.substr(colon + 1));
        if (row.size() != elements->size()) {
            throw ParseError(no, "row '" + head[0] + "' has " + std::to_string(row.size()) + " entries, expected " +
                                     std::to_string(elements->size()));
        }
        if (!rows.emplace(head[0], std::make_pair(no, std::move(row))).second) {
            throw ParseError(no, "repeated row '" + head[0] + "'");
        }
    }
    if (!elements) throw ParseError(no + 1, "missing elements line");
    const auto& names = *elements;
    std::map<std::string, Letter> index;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!index.emplace(names[i], static_cast<Letter>(i)).second) throw ParseError(1, "duplicate element '" + names[i] + "'");
    }
    for (const auto& [g, r] : rows) {
        if (!index.count(g)) throw ParseError(r.first, "unknown element '" + g + "'");
    }
    std::vector<Letter> table;
    for (const auto& g : names) {
        auto it = rows.find(g);
        if (it == rows.end()) throw ParseError(no + 1, "missing row for '" + g + "'");
        for (const auto& v : it->second.second) {
            auto f = index.find(v);
            if (f == index.end()) throw ParseError(it->second.first, "unknown element '" + v + "'");
            table.push_back(f->second);
        }
    }
    return group_from_table(names, table, max_order);
}

inline std::string print_group(const GroupTable& g) {
    std::string out = "elements:";
    for (const auto& e : g.elements().symbols()) out += " " + e;
    out += "\n";
    for (Letter a = 0; a < g.order(); ++a) {
        out += g.name(a) + ":";
        for (Letter b = 0; b < g.order(); ++b) out += " " + g.name(g.mul(a, b));
        out += "\n";
    }
    return out;
}

// DOT ----------------------------------------------------------------------------------------

/// One edge `p -> q [label="a|b"]` per transition, lines sorted.
inline std::string export_dot(const MealyMachine& m, const std::string& name = "mealy") {
    std::vector<std::string> lines;
    for (State q = 0; q < m.num_states(); ++q) lines.push_back("  " + detail::quote(m.state_name(q)) + ";");
    for (State q = 0; q < m.num_states(); ++q) {
        for (Letter a = 0; a < m.num_letters(); ++a) {
            lines.push_back("  " + detail::quote(m.state_name(q)) + " -> " + detail::quote(m.state_name(m.next(q, a))) +
                            " [label=" + detail::quote(m.letter_name(a) + "|" + m.letter_name(m.output(q, a))) + "];");
        }
    }
    std::sort(lines.begin(), lines.end());
    std::string out = "digraph " + detail::quote(name) + " {\n  rankdir=LR;\n";
    for (const auto& l : lines) out += l + "\n";
    return out + "}\n";
}

/// Positive edges only; the inverse of each edge is implied. The base is drawn doubled.
inline std::string export_dot(const InverseAutomaton& a, const std::string& name = "graph") {
    std::vector<std::string> lines;
    for (State v = 0; v < a.num_vertices(); ++v) {
        lines.push_back("  " + detail::quote(a.vertex_name(v)) + (v == a.base() ? " [shape=doublecircle];" : ";"));
    }
    for (const auto& e : a.positive_edges()) {
        lines.push_back("  " + detail::quote(a.vertex_name(e.source)) + " -> " + detail::quote(a.vertex_name(e.target)) +
                        " [label=" + detail::quote(a.labels().name(e.label)) + "];");
    }
    std::sort(lines.begin(), lines.end());
    std::string out = "digraph " + detail::quote(name) + " {\n";
    for (const auto& l : lines) out += l + "\n";
    return out + "}\n";
}

// JSON ---------------------------------------------------------------------------------------

/// FNV-1a, as 16 hex digits.
inline std::string text_hash(std::string_view text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string machine_hash(const MealyMachine& m) { return text_hash(print_machine(m)); }
inline std::string group_hash(const GroupTable& g) { return text_hash(print_group(g)); }

inline std::string big_to_string(const BigInt& n) { return n.str(); }

inline json to_json(const Budget& b) {
    return {{"power_states", b.power_states},   {"subset_states", b.subset_states}, {"level_vertices", b.level_vertices},
            {"max_level", b.max_level},         {"group_order", b.group_order},     {"group_size", b.group_size},
            {"enumeration", b.enumeration}};
}

inline json to_json(const MealyMachine& m) {
    json edges = json::array();
    for (State q = 0; q < m.num_states(); ++q) {
        for (Letter a = 0; a < m.num_letters(); ++a) {
            edges.push_back({m.state_name(q), m.letter_name(a), m.state_name(m.next(q, a)), m.letter_name(m.output(q, a))});
        }
    }
    return {{"states", m.state_names()}, {"alphabet", m.alphabet().symbols()}, {"edges", edges}};
}

inline json to_json(const InverseAutomaton& a) {
    json vertices = json::array();
    for (State v = 0; v < a.num_vertices(); ++v) vertices.push_back(a.vertex_name(v));
    json edges = json::array();
    for (const auto& e : a.positive_edges()) {
        edges.push_back({a.vertex_name(e.source), a.labels().name(e.label), a.vertex_name(e.target)});
    }
    return {{"vertices", vertices}, {"base", a.vertex_name(a.base())}, {"labels", a.labels().symbols()}, {"edges", edges}};
}

inline json signed_words_json(const std::vector<SignedWord>& ws, const std::vector<std::string>& names) {
    json out = json::array();
    for (const auto& w : ws) out.push_back(signed_word_to_string(w, names));
    return out;
}

inline json properties_json(const MealyMachine& m) {
    return {{"invertible", is_invertible(m)},
            {"reversible", is_reversible(m)},
            {"bireversible", is_bireversible(m)},
            {"ri", is_ri(m)}};
}

inline json to_json(const GrowthReport& r) {
    json sizes = json::array();
    for (const auto& level : r.sizes) {
        json s = json::object();
        for (const auto& [size, count] : level) s[std::to_string(size)] = count;
        sizes.push_back(s);
    }
    json j{{"chi", r.chi}, {"sizes", sizes}, {"monotone", r.monotone}, {"dual_norm", r.dual_norm}};
    j["stable_from"] = r.stable_from ? json(*r.stable_from) : json(nullptr);
    j["truncated"] = r.truncated;
    if (r.truncated) j["truncation_reason"] = r.truncation_reason;
    return j;
}

inline json to_json(const LevelGroup& g) {
    return {{"order", g.order}, {"cyclic", g.is_cyclic()}, {"cayley", to_json(g.cayley)}};
}

inline json to_json(const SchreierVerdict& v, const MealyMachine& m) {
    const auto& letters = m.alphabet().symbols();
    json j{{"types_explored", v.types_explored}};
    if (const auto* y = std::get_if<SchreierYes>(&v.result)) {
        j["verdict"] = "yes";
        j["x"] = word_to_string(y->x, letters);
        j["y"] = word_to_string(y->y, letters);
        j["size"] = y->size;
    } else if (const auto* n = std::get_if<SchreierNo>(&v.result)) {
        j["verdict"] = "no";
        j["level"] = n->level;
        j["chi"] = n->chi;
        j["chi_exact"] = n->chi_exact;
    } else {
        const auto& e = std::get<SchreierExhausted>(v.result);
        j["verdict"] = "exhausted";
        j["horizon"] = e.horizon;
        j["smallest_open"] = e.smallest_open;
        j["completion_horizon"] = big_to_string(e.completion_horizon);
    }
    return j;
}

inline json to_json(const FreeSemigroupVerdict& v, const MealyMachine& m) {
    json j{{"free_so_far", v.free_so_far}, {"words_checked", v.words_checked}};
    if (v.counterexample) {
        j["counterexample"] = json::array({signed_word_to_string(v.counterexample->first, m.state_names()),
                                           signed_word_to_string(v.counterexample->second, m.state_names())});
    }
    return j;
}

inline json to_json(const std::vector<TorsionWitness>& ws, const MealyMachine& m) {
    json out = json::array();
    for (const auto& w : ws) {
        out.push_back({{"u", word_to_string(w.u, m.state_names())}, {"index", w.index()}, {"period", w.period()}});
    }
    return out;
}

inline json to_json(const std::vector<PeriodicScanEntry>& entries, const MealyMachine& m) {
    json out = json::array();
    for (const auto& e : entries) {
        out.push_back({{"w", word_to_string(e.w, m.alphabet().symbols())},
                       {"tested", e.tested},
                       {"fixing", signed_words_json(e.fixing, m.state_names())},
                       {"nontrivial", signed_words_json(e.nontrivial, m.state_names())}});
    }
    return out;
}

inline json to_json(const RelationLedger& ledger, const GroupTable& g) {
    json levels = json::array();
    for (const auto& l : ledger.levels) {
        json rel = json::array(), inv = json::array();
        for (const auto& w : l.relations) rel.push_back(signed_word_to_string(w, g.elements().symbols()));
        for (const auto& w : l.invariant) inv.push_back(signed_word_to_string(w, g.elements().symbols()));
        levels.push_back({{"length", l.length}, {"verified", l.verified}, {"relations", rel}, {"invariant", inv}});
    }
    return {{"depth", ledger.depth}, {"levels", levels}};
}

/// Envelope shared by every report: what was run, on what, with which limits.
inline json make_report(const std::string& command, const std::string& input_hash, json parameters,
                        const Budget& budget, json result) {
    return {{"command", command},
            {"input_hash", input_hash},
            {"parameters", std::move(parameters)},
            {"budget", to_json(budget)},
            {"result", std::move(result)}};
}

}  // namespace mealyforge

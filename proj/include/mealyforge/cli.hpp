#pragma once

/**
 * @file cli.hpp
 * @brief The `mealyforge` command line. Each subcommand loads its input, calls
 * one library operation and prints the result as text, DOT or JSON.
 *
 * Exit codes: 0 success, 64 usage error, 65 malformed input, 66 unreadable
 * file, 3 budget exceeded. `decide-bounded` exits 0 / 1 / 2 for yes / no /
 * exhausted.
 */

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boundary.hpp"
#include "cayley.hpp"
#include "constructions.hpp"
#include "io.hpp"
#include "levels.hpp"
#include "machine.hpp"

namespace mealyforge {

inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitNoInput = 66;
inline constexpr int kExitBudget = 3;

namespace cli_detail {

class NoInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NoInput("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

enum class Format { Text, Json, Dot };

struct Output {
    bool json = false;
    bool dot = false;
    std::string file;

    Format format() const { return json ? Format::Json : dot ? Format::Dot : Format::Text; }
};

inline void add_output_flags(CLI::App* sub, Output& o, bool with_dot) {
    auto* j = sub->add_flag("--json", o.json, "Print a JSON report");
    if (with_dot) sub->add_flag("--dot", o.dot, "Print Graphviz DOT")->excludes(j);
    sub->add_option("-o,--output", o.file, "Write to FILE instead of stdout");
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string join(const std::vector<std::string>& xs, const std::string& sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
    return out;
}

}  // namespace cli_detail

/// Runs the command line; output goes to `out` (or the -o file), diagnostics to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    using namespace cli_detail;
    CLI::App app{"Mealy automata, their duals and the Schreier graphs of their groups", "mealyforge"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    unsigned seed = 1;
    unsigned threads = 1;
    app.add_option("--seed", seed, "Seed for randomized procedures")->capture_default_str();
    app.add_option("--threads", threads, "Parallelism hint; computations run on one thread")->capture_default_str();

    Output o;
    std::string file, file2, word, base, kind, phi;
    std::size_t k = 1, n = 8, limit = 1, horizon = 8, max_len = 4, depth = 8, max_exp = 16, max_period = 3,
                max_gen_len = 2, k_max = 2;
    bool stabilizer_basis = false;

    const Budget budget = Budget::from_env();
    std::function<int()> action;
    std::string command;
    json params = json::object();

    // Emits `text` / `dot` / `report` according to the selected format.
    auto emit = [&](const std::string& text, const std::function<std::string()>& dot, const json& report) {
        std::string payload;
        switch (o.format()) {
            case Format::Json: payload = report.dump(2) + "\n"; break;
            case Format::Dot: payload = dot ? dot() : text; break;
            case Format::Text: payload = text; break;
        }
        if (o.file.empty()) {
            out << payload;
        } else {
            std::ofstream f(o.file);
            if (!f) throw NoInput("cannot write '" + o.file + "'");
            f << payload;
        }
    };
    auto load_machine = [&](const std::string& path) { return parse_machine(read_file(path)); };
    auto load_group = [&](const std::string& path) { return parse_group(read_file(path), budget.group_size); };
    auto report = [&](const std::string& hash, json result) {
        params["seed"] = seed;
        params["threads"] = threads;
        return make_report(command, hash, params, budget, std::move(result));
    };
    auto machine_output = [&](const MealyMachine& m) {
        emit(print_machine(m), [&] { return export_dot(m); }, report(machine_hash(m), to_json(m)));
        return 0;
    };

    auto sub = [&](const char* name, const char* help, bool with_dot) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        add_output_flags(s, o, with_dot);
        return s;
    };

    // Constructions ----------------------------------------------------------------------------
    auto* props = sub("props", "Invertible / reversible / bireversible", false);
    props->add_option("FILE", file)->required();
    props->final_callback([&] {
        action = [&] {
            const auto m = load_machine(file);
            const auto p = properties_json(m);
            std::string text;
            for (const auto& [key, value] : p.items()) text += key + ": " + yes_no(value.get<bool>()) + "\n";
            emit(text, nullptr, report(machine_hash(m), p));
            return 0;
        };
    });

    for (const char* name : {"dual", "inverse", "enrich"}) {
        auto* s = sub(name, name == std::string("dual")      ? "Dual machine"
                            : name == std::string("inverse") ? "Inverse machine"
                                                             : "Enriched machine (reversed edges with formal inverses)",
                      true);
        s->add_option("FILE", file)->required();
        s->final_callback([&, name] {
            action = [&, name] {
                const auto m = load_machine(file);
                const std::string which = name;
                if (which == "dual") return machine_output(dual(m));
                if (which == "inverse") return machine_output(inverse_machine(m));
                return machine_output(enrich(m).machine);
            };
        });
    }

    auto* prod = sub("product", "Product machine; FILE1 reads first", true);
    prod->add_option("FILE1", file)->required();
    prod->add_option("FILE2", file2)->required();
    prod->final_callback([&] { action = [&] { return machine_output(product(load_machine(file), load_machine(file2))); }; });

    auto* pw = sub("power", "k-th power of a machine", true);
    pw->add_option("FILE", file)->required();
    pw->add_option("-k", k, "Exponent")->required()->check(CLI::PositiveNumber);
    pw->final_callback([&] {
        params["k"] = k;
        action = [&] { return machine_output(power(load_machine(file), k).materialize(budget.power_states)); };
    });

    // Level graphs -----------------------------------------------------------------------------
    auto* comp = sub("components", "Connected components of level k", true);
    comp->add_option("FILE", file)->required();
    comp->add_option("-k", k, "Level")->required();
    comp->add_option("--base", base, "Only the component of this word");
    comp->final_callback([&] {
        params["k"] = k;
        if (!base.empty()) params["base"] = base;
        action = [&] {
            const auto m = load_machine(file);
            const auto& letters = m.alphabet().symbols();
            if (!base.empty()) {
                const Word b = parse_word(base, m.alphabet());
                if (b.size() != k) throw Error(ErrorCode::InvalidArgument, "--base must have length k");
                const auto lg = level_graph(m, k, b, budget);
                std::vector<std::string> words;
                for (const auto& w : lg.words) words.push_back(word_to_string(w, letters));
                emit("size " + std::to_string(words.size()) + ": " + join(words) + "\n",
                     [&] { return export_dot(lg.graph, "component"); },
                     report(machine_hash(m), {{"components", json::array({words})}}));
                return 0;
            }
            const auto comps = level_components(m, k, budget);
            json all = json::array();
            std::string text;
            for (const auto& c : comps) {
                std::vector<std::string> words;
                for (auto idx : c) words.push_back(word_to_string(word_from_index(idx, k, m.num_letters()), letters));
                text += "size " + std::to_string(words.size()) + ": " + join(words) + "\n";
                all.push_back(words);
            }
            emit(text, [&] { return export_dot(level_graph(m, k, std::nullopt, budget).graph, "level"); },
                 report(machine_hash(m), {{"components", all}}));
            return 0;
        };
    });

    auto* sch = sub("schreier", "Schreier graph of the level word W", true);
    sch->add_option("FILE", file)->required();
    sch->add_option("--word", word, "Base word")->required();
    sch->add_flag("--stabilizer-basis", stabilizer_basis, "Also list stabilizer generators");
    sch->final_callback([&] {
        params["word"] = word;
        params["stabilizer_basis"] = stabilizer_basis;
        action = [&] {
            const auto m = load_machine(file);
            const auto lg = level_graph(m, parse_word(word, m.alphabet()).size(), parse_word(word, m.alphabet()), budget);
            json r{{"graph", to_json(lg.graph)}};
            std::string text = "vertices: " + std::to_string(lg.graph.num_vertices()) + "\n";
            for (const auto& e : lg.graph.positive_edges()) {
                text += lg.graph.vertex_name(e.source) + " -" + m.state_name(e.label) + "-> " +
                        lg.graph.vertex_name(e.target) + "\n";
            }
            if (stabilizer_basis) {
                const auto b = basis(lg.graph);
                r["stabilizer_basis"] = signed_words_json(b, m.state_names());
                text += "stabilizer basis:\n";
                for (const auto& w : b) text += "  " + signed_word_to_string(w, m.state_names()) + "\n";
            }
            emit(text, [&] { return export_dot(lg.graph, "schreier"); }, report(machine_hash(m), r));
            return 0;
        };
    });

    auto* lgrp = sub("level-group", "Group induced on words of length k", true);
    lgrp->add_option("FILE", file)->required();
    lgrp->add_option("-k", k, "Level")->required();
    lgrp->final_callback([&] {
        params["k"] = k;
        action = [&] {
            const auto m = load_machine(file);
            const auto g = level_group(m, k, budget);
            emit("order: " + std::to_string(g.order) + "\ncyclic: " + yes_no(g.is_cyclic()) + "\n",
                 [&] { return export_dot(g.cayley, "level_group"); }, report(machine_hash(m), to_json(g)));
            return 0;
        };
    });

    auto* gr = sub("growth", "Smallest component size chi(1..n)", false);
    gr->add_option("FILE", file)->required();
    gr->add_option("-n", n, "Last level")->required();
    gr->final_callback([&] {
        params["n"] = n;
        action = [&] {
            const auto m = load_machine(file);
            const auto r = growth_chi(m, n, budget);
            std::vector<std::string> chi;
            for (auto c : r.chi) chi.push_back(std::to_string(c));
            std::string text = "chi: " + join(chi, ",") + "\n";
            if (r.truncated) text += "truncated: " + r.truncation_reason + "\n";
            emit(text, nullptr, report(machine_hash(m), to_json(r)));
            return r.truncated ? kExitBudget : 0;
        };
    });

    // Boundary ----------------------------------------------------------------------------------
    auto* db = sub("decide-bounded", "Is some boundary Schreier graph of size at most L?", false);
    db->add_option("FILE", file)->required();
    db->add_option("--limit", limit, "Size bound L")->required();
    db->add_option("--horizon", horizon, "Exploration depth")->capture_default_str();
    db->final_callback([&] {
        params["limit"] = limit;
        params["horizon"] = horizon;
        action = [&] {
            const auto m = load_machine(file);
            const auto v = decide_bounded_schreier(m, limit, horizon, budget);
            const auto j = to_json(v, m);
            std::string text = "verdict: " + j["verdict"].get<std::string>() + "\n";
            for (const auto& [key, value] : j.items()) {
                if (key != "verdict") text += key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
            }
            emit(text, nullptr, report(machine_hash(m), j));
            return v.is_yes() ? 0 : v.is_no() ? 1 : 2;
        };
    });

    auto* rel = sub("relations", "Reduced words acting trivially up to a depth", false);
    rel->add_option("FILE", file)->required();
    rel->add_option("--max-len", max_len)->capture_default_str();
    rel->add_option("--depth", depth)->capture_default_str();
    rel->final_callback([&] {
        params["max_len"] = max_len;
        params["depth"] = depth;
        action = [&] {
            const auto m = load_machine(file);
            const auto ws = find_relations(m, max_len, depth, budget);
            std::string text;
            for (const auto& w : ws) text += signed_word_to_string(w, m.state_names()) + "\n";
            emit(text, nullptr, report(machine_hash(m), {{"relations", signed_words_json(ws, m.state_names())}}));
            return 0;
        };
    });

    auto* fc = sub("free-check", "Do positive words up to a length give distinct maps?", false);
    fc->add_option("FILE", file)->required();
    fc->add_option("--max-len", max_len)->capture_default_str();
    fc->final_callback([&] {
        params["max_len"] = max_len;
        action = [&] {
            const auto m = load_machine(file);
            const auto v = free_semigroup_check(m, max_len, budget);
            std::string text = "free so far: " + yes_no(v.free_so_far) + "\nwords: " + std::to_string(v.words_checked) + "\n";
            if (v.counterexample) {
                text += "relation: " + signed_word_to_string(v.counterexample->first, m.state_names()) + " = " +
                        signed_word_to_string(v.counterexample->second, m.state_names()) + "\n";
            }
            emit(text, nullptr, report(machine_hash(m), to_json(v, m)));
            return 0;
        };
    });

    auto* tor = sub("torsion", "Index and period of positive state words", false);
    tor->add_option("FILE", file)->required();
    tor->add_option("--max-len", max_len)->capture_default_str();
    tor->add_option("--max-exp", max_exp)->capture_default_str();
    tor->final_callback([&] {
        params["max_len"] = max_len;
        params["max_exp"] = max_exp;
        action = [&] {
            const auto m = load_machine(file);
            const auto ws = torsion_search(m, max_len, max_exp, budget);
            std::string text;
            for (const auto& w : ws) {
                text += word_to_string(w.u, m.state_names()) + ": index " + std::to_string(w.index()) + ", period " +
                        std::to_string(w.period()) + "\n";
            }
            emit(text, nullptr, report(machine_hash(m), {{"witnesses", to_json(ws, m)}}));
            return 0;
        };
    });

    auto* sp = sub("scan-periodic", "Generators fixing periodic points w^omega", false);
    sp->add_option("FILE", file)->required();
    sp->add_option("--max-period", max_period)->capture_default_str();
    sp->add_option("--max-gen-len", max_gen_len)->capture_default_str();
    sp->add_option("--depth", depth)->capture_default_str();
    sp->final_callback([&] {
        params["max_period"] = max_period;
        params["max_gen_len"] = max_gen_len;
        params["depth"] = depth;
        action = [&] {
            const auto m = load_machine(file);
            const auto entries = periodic_stabilizer_scan(m, max_period, max_gen_len, depth, budget);
            std::string text;
            for (const auto& e : entries) {
                text += word_to_string(e.w, m.alphabet().symbols()) + "^omega: " + std::to_string(e.fixing.size()) +
                        " fixing, " + std::to_string(e.nontrivial.size()) + " nontrivial\n";
            }
            emit(text, nullptr, report(machine_hash(m), {{"entries", to_json(entries, m)}}));
            return 0;
        };
    });

    // Groups ------------------------------------------------------------------------------------
    auto* cay = sub("cayley", "Cayley-type machine of a group table", true);
    cay->add_option("GROUPFILE", file)->required();
    cay->add_option("--kind", kind, "usual, palindrome, identity or phi")
        ->check(CLI::IsMember({"usual", "palindrome", "identity", "phi"}));
    cay->add_option("--phi", phi, "Images of the elements, in element order");
    cay->final_callback([&] {
        if (kind.empty()) kind = phi.empty() ? "usual" : "phi";
        if ((kind == "phi") != !phi.empty()) throw CLI::ValidationError("--phi", "--phi goes with --kind phi");
        params["kind"] = kind;
        if (!phi.empty()) params["phi"] = phi;
        action = [&] {
            const auto g = load_group(file);
            if (kind == "usual") return machine_output(cayley_machine(g));
            if (kind == "palindrome") return machine_output(palindrome_machine(g));
            if (kind == "identity") return machine_output(identity_machine_of(g));
            std::vector<Letter> images;
            for (const auto& t : detail::tokens(phi)) images.push_back(g.elements().index(t));
            return machine_output(phi_machine(g, images));
        };
    });

    auto* led = sub("ledger", "Relations of the dual Cayley machine by length", false);
    led->add_option("GROUPFILE", file)->required();
    led->add_option("--k-max", k_max)->capture_default_str();
    led->add_option("--depth", depth)->capture_default_str();
    led->final_callback([&] {
        params["k_max"] = k_max;
        params["depth"] = depth;
        action = [&] {
            const auto g = load_group(file);
            const auto l = relation_recursion(g, k_max, depth, budget);
            std::string text;
            for (const auto& level : l.levels) {
                text += "length " + std::to_string(level.length) + ": " + std::to_string(level.relations.size()) +
                        " relations, " + std::to_string(level.invariant.size()) + " invariant, verified " +
                        yes_no(level.verified) + "\n";
            }
            emit(text, nullptr, report(group_hash(g), to_json(l, g)));
            return 0;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }
    command = app.get_subcommands().front()->get_name();

    try {
        return action();
    } catch (const BudgetExceeded& e) {
        if (o.json) {
            json partial = report("", json(nullptr));
            partial["error"] = {{"code", "BudgetExceeded"}, {"resource", e.resource()}, {"limit", e.limit()}};
            out << partial.dump(2) << "\n";
        }
        err << "mealyforge: " << e.what() << "\n";
        return kExitBudget;
    } catch (const NoInput& e) {
        err << "mealyforge: " << e.what() << "\n";
        return kExitNoInput;
    } catch (const Error& e) {
        err << "mealyforge: " << e.what() << "\n";
        return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitData;
    }
}

}  // namespace mealyforge

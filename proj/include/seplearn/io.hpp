#pragma once

#include "seplearn/automata.hpp"
#include "seplearn/error.hpp"
#include "seplearn/kripke.hpp"
#include "seplearn/lasso.hpp"

#include "json.hpp"

#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace seplearn {

using Json = nlohmann::json;

/// Action name used for successor lists given without action labels.
inline const std::string kDefaultAction = "_";

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] inline void malformed(const std::string& where, const std::string& what) {
    throw Error(Errc::MalformedInput, where + ": " + what);
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) malformed(where, std::string("missing field '") + key + "'");
    return j.at(key);
}

template <typename T>
T get_as(const Json& j, const std::string& where) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception& e) {
        malformed(where, e.what());
    }
}

inline std::map<std::string, std::size_t> state_ids(const Json& states, const std::string& where) {
    if (!states.is_array() || states.empty()) malformed(where + "/states", "expected a nonempty array");
    std::map<std::string, std::size_t> ids;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& s = states[i];
        const std::string w = where + "/states/" + std::to_string(i);
        std::string id = s.is_object() && s.contains("id") ? (s["id"].is_string() ? s["id"].get<std::string>()
                                                                                  : s["id"].dump())
                                                           : std::to_string(i);
        if (!ids.emplace(id, i).second) malformed(w, "duplicate state id '" + id + "'");
    }
    return ids;
}

inline std::size_t resolve(const std::map<std::string, std::size_t>& ids, const Json& ref, const std::string& where) {
    const std::string key = ref.is_string() ? ref.get<std::string>() : ref.dump();
    auto it = ids.find(key);
    if (it == ids.end()) malformed(where, "unknown state '" + key + "'");
    return it->second;
}

inline std::vector<std::size_t> resolve_all(const std::map<std::string, std::size_t>& ids, const Json& refs,
                                            const std::string& where) {
    if (!refs.is_array()) malformed(where, "expected an array of state ids");
    std::vector<std::size_t> r;
    for (const auto& x : refs) r.push_back(resolve(ids, x, where));
    return r;
}

// succ is either {action: [ids]} or a plain list of ids (default action).
inline std::map<std::string, std::vector<std::size_t>> read_succ(const Json& s,
                                                                 const std::map<std::string, std::size_t>& ids,
                                                                 const std::string& where) {
    std::map<std::string, std::vector<std::size_t>> out;
    if (!s.is_object() || !s.contains("succ")) return out;
    const auto& succ = s["succ"];
    if (succ.is_array()) {
        out[kDefaultAction] = resolve_all(ids, succ, where + "/succ");
    } else if (succ.is_object()) {
        for (const auto& [a, targets] : succ.items()) out[a] = resolve_all(ids, targets, where + "/succ/" + a);
    } else {
        malformed(where + "/succ", "expected an object or an array");
    }
    return out;
}

inline std::vector<std::string> state_names(const Json& states) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& s = states[i];
        names.push_back(s.is_object() && s.contains("id")
                            ? (s["id"].is_string() ? s["id"].get<std::string>() : s["id"].dump())
                            : std::to_string(i));
    }
    return names;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Kripke structures
// ---------------------------------------------------------------------------

inline KripkeStructure kripke_from_json(const Json& j, const std::string& where = "") {
    const auto& states = detail::field(j, "states", where);
    const auto ids = detail::state_ids(states, where);
    std::vector<std::set<std::string>> labels;
    std::set<std::string> actions;
    std::vector<std::map<std::string, std::vector<std::size_t>>> succ;
    if (j.contains("actions")) {
        for (const auto& a : detail::get_as<std::vector<std::string>>(j["actions"], where + "/actions")) actions.insert(a);
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& s = states[i];
        const std::string w = where + "/states/" + std::to_string(i);
        std::set<std::string> l;
        if (s.is_object() && s.contains("label")) {
            for (const auto& p : detail::get_as<std::vector<std::string>>(s["label"], w + "/label")) l.insert(p);
        }
        labels.push_back(std::move(l));
        succ.push_back(detail::read_succ(s, ids, w));
        for (const auto& [a, _] : succ.back()) actions.insert(a);
    }
    if (actions.empty()) actions.insert(kDefaultAction);
    const auto init = detail::resolve_all(ids, detail::field(j, "initial", where), where + "/initial");
    try {
        KripkeStructure k(states.size(), init, {actions.begin(), actions.end()}, std::move(labels),
                          detail::state_names(states));
        for (std::size_t q = 0; q < succ.size(); ++q) {
            for (const auto& [a, targets] : succ[q]) {
                for (auto r : targets) k.add_edge(q, a, r);
            }
        }
        return k;
    } catch (const Error& e) {
        detail::malformed(where, e.what());
    }
}

inline Json kripke_to_json(const KripkeStructure& k) {
    Json states = Json::array();
    const bool actionless = k.actions().size() == 1 && k.actions()[0] == kDefaultAction;
    for (std::size_t q = 0; q < k.size(); ++q) {
        Json s;
        s["id"] = k.name(q);
        s["label"] = std::vector<std::string>(k.label(q).begin(), k.label(q).end());
        if (actionless) {
            Json targets = Json::array();
            for (auto r : k.successors(q, kDefaultAction)) targets.push_back(k.name(r));
            s["succ"] = targets;
        } else {
            Json m = Json::object();
            for (const auto& a : k.actions()) {
                Json targets = Json::array();
                for (auto r : k.successors(q, a)) targets.push_back(k.name(r));
                m[a] = targets;
            }
            s["succ"] = m;
        }
        states.push_back(s);
    }
    Json init = Json::array();
    k.initial().for_each([&](std::size_t q) { init.push_back(k.name(q)); });
    Json j;
    if (!actionless) j["actions"] = k.actions();
    j["states"] = states;
    j["initial"] = init;
    return j;
}

// ---------------------------------------------------------------------------
// Lasso words
// ---------------------------------------------------------------------------

inline LassoWord lasso_from_json(const Json& j, const std::string& where = "") {
    auto letters = [&](const char* key) {
        std::vector<Letter> out;
        if (!j.contains(key)) return out;
        for (const auto& l : detail::get_as<std::vector<std::vector<std::string>>>(j[key], where + "/" + key))
            out.emplace_back(l.begin(), l.end());
        return out;
    };
    if (!j.is_object()) detail::malformed(where, "expected an object with prefix/loop");
    try {
        return LassoWord(letters("prefix"), letters("loop"));
    } catch (const Error& e) {
        detail::malformed(where, e.what());
    }
}

inline Json lasso_to_json(const LassoWord& w) {
    auto conv = [](const std::vector<Letter>& ls) {
        Json a = Json::array();
        for (const auto& l : ls) a.push_back(std::vector<std::string>(l.begin(), l.end()));
        return a;
    };
    return Json{{"prefix", conv(w.prefix())}, {"loop", conv(w.loop())}};
}

// ---------------------------------------------------------------------------
// Automata
// ---------------------------------------------------------------------------

namespace detail {

template <typename Make>
auto automaton_from_json(const Json& j, const std::string& where, Make make) {
    const auto& states = field(j, "states", where);
    const auto ids = state_ids(states, where);
    const auto alphabet = get_as<std::vector<std::string>>(field(j, "alphabet", where), where + "/alphabet");
    const auto init = resolve_all(ids, field(j, "initial", where), where + "/initial");
    try {
        auto a = make(states, ids, alphabet, init);
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (const auto& [l, targets] : read_succ(states[i], ids, where + "/states/" + std::to_string(i))) {
                for (auto r : targets) a.add_edge(i, l, r);
            }
        }
        return a;
    } catch (const Error& e) {
        malformed(where, e.what());
    }
}

inline Json automaton_states_json(const Automaton& a, const std::function<void(Json&, std::size_t)>& extra) {
    Json states = Json::array();
    for (std::size_t q = 0; q < a.size(); ++q) {
        Json s;
        s["id"] = "q" + std::to_string(q);
        extra(s, q);
        Json m = Json::object();
        for (std::size_t l = 0; l < a.alphabet().size(); ++l) {
            Json t = Json::array();
            for (auto r : a.delta(q, l)) t.push_back("q" + std::to_string(r));
            m[a.alphabet()[l]] = t;
        }
        s["succ"] = m;
        states.push_back(s);
    }
    return states;
}

inline Json initial_json(const Automaton& a) {
    Json init = Json::array();
    a.initial().for_each([&](std::size_t q) { init.push_back("q" + std::to_string(q)); });
    return init;
}

}  // namespace detail

inline Nfa nfa_from_json(const Json& j, const std::string& where = "") {
    return detail::automaton_from_json(
        j, where, [&](const Json& states, const auto&, const auto& alphabet, const auto& init) {
            std::vector<std::size_t> fin;
            for (std::size_t i = 0; i < states.size(); ++i) {
                if (states[i].is_object() && states[i].value("final", false)) fin.push_back(i);
            }
            return Nfa(states.size(), alphabet, init, fin);
        });
}

inline ParityAutomaton parity_from_json(const Json& j, const std::string& where = "") {
    return detail::automaton_from_json(
        j, where, [&](const Json& states, const auto&, const auto& alphabet, const auto& init) {
            std::vector<int> prio;
            for (std::size_t i = 0; i < states.size(); ++i) {
                const std::string w = where + "/states/" + std::to_string(i);
                prio.push_back(detail::get_as<int>(detail::field(states[i], "priority", w), w + "/priority"));
            }
            return ParityAutomaton(states.size(), alphabet, init, prio);
        });
}

inline Json nfa_to_json(const Nfa& a) {
    return Json{{"alphabet", a.alphabet()},
                {"states", detail::automaton_states_json(a, [&](Json& s, std::size_t q) { s["final"] = a.finals().test(q); })},
                {"initial", detail::initial_json(a)}};
}

inline Json parity_to_json(const ParityAutomaton& a) {
    return Json{{"alphabet", a.alphabet()},
                {"states",
                 detail::automaton_states_json(a, [&](Json& s, std::size_t q) { s["priority"] = a.priority(q); })},
                {"initial", detail::initial_json(a)}};
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::MalformedInput, path.string() + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::MalformedInput,
                    path.string() + ":" + detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
    }
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::MalformedInput, path.string() + ": cannot write file");
    out << j.dump(2) << "\n";
}

/// A sample of models with the logic, fragment and options to learn with.
struct SampleFile {
    std::string logic;                                // ml | ltl-words | ctl | ltlp | nfa | parity
    std::optional<std::vector<std::string>> fragment;  // nullopt = full signature
    std::vector<Json> positives;                      // models with file references resolved
    std::vector<Json> negatives;
    std::optional<std::vector<std::string>> propositions;
    std::optional<std::vector<std::string>> actions;
    std::optional<int> max_k;
    std::optional<std::size_t> budget;
};

inline SampleFile sample_from_json(const Json& j, const std::filesystem::path& base = {},
                                   const std::string& where = "") {
    SampleFile s;
    if (!j.is_object()) detail::malformed(where, "sample must be an object");
    s.logic = detail::get_as<std::string>(detail::field(j, "logic", where), where + "/logic");
    static const std::set<std::string> logics = {"ml", "ltl-words", "ctl", "ltlp", "nfa", "parity"};
    if (!logics.count(s.logic)) detail::malformed(where + "/logic", "unknown logic '" + s.logic + "'");
    if (j.contains("fragment")) {
        const auto& f = j["fragment"];
        if (f.is_string()) {
            if (f.get<std::string>() != "full") detail::malformed(where + "/fragment", "expected \"full\" or a list");
        } else {
            s.fragment = detail::get_as<std::vector<std::string>>(f, where + "/fragment");
        }
    }
    auto models = [&](const char* key, std::vector<Json>& out) {
        if (!j.contains(key)) return;
        const auto& arr = j[key];
        if (!arr.is_array()) detail::malformed(where + "/" + key, "expected an array");
        for (const auto& m : arr) {
            if (m.is_object() && m.contains("file") && m.size() == 1) {
                out.push_back(read_json_file(base / m["file"].get<std::string>()));
            } else {
                out.push_back(m);
            }
        }
    };
    models("positives", s.positives);
    models("negatives", s.negatives);
    if (j.contains("propositions"))
        s.propositions = detail::get_as<std::vector<std::string>>(j["propositions"], where + "/propositions");
    if (j.contains("actions")) s.actions = detail::get_as<std::vector<std::string>>(j["actions"], where + "/actions");
    if (j.contains("options")) {
        const auto& o = j["options"];
        if (o.contains("max_k")) s.max_k = detail::get_as<int>(o["max_k"], where + "/options/max_k");
        if (o.contains("budget")) s.budget = detail::get_as<std::size_t>(o["budget"], where + "/options/budget");
    }
    return s;
}

inline SampleFile load_sample_file(const std::filesystem::path& path) {
    return sample_from_json(read_json_file(path), path.parent_path(), path.string());
}

inline Json sample_to_json(const SampleFile& s) {
    Json j;
    j["logic"] = s.logic;
    if (s.fragment) {
        j["fragment"] = *s.fragment;
    } else {
        j["fragment"] = "full";
    }
    if (s.propositions) j["propositions"] = *s.propositions;
    if (s.actions) j["actions"] = *s.actions;
    j["positives"] = s.positives;
    j["negatives"] = s.negatives;
    Json opts = Json::object();
    if (s.max_k) opts["max_k"] = *s.max_k;
    if (s.budget) opts["budget"] = *s.budget;
    if (!opts.empty()) j["options"] = opts;
    return j;
}

}  // namespace seplearn

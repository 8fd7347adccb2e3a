// seplearn: batch front end for separating-formula learning.
//
// Every command ends its output with one "RESULT key=value ..." line.
// Exit codes: 0 separable / holds / found, 1 not separable, 2 inconclusive, 3 malformed input.

#include "seplearn/seplearn.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace seplearn;

namespace {

constexpr int kExitYes = 0, kExitNo = 1, kExitInconclusive = 2, kExitMalformed = 3;

// Collected output of one command, printed as text lines or a JSON object.
class Report {
public:
    template <typename T>
    Report& add(const std::string& key, const T& value, bool summary = true) {
        Json v = value;
        fields_.emplace_back(key, v, summary);
        return *this;
    }

    void print(bool json) const {
        if (json) {
            Json j = Json::object();
            for (const auto& [k, v, _] : fields_) j[k] = v;
            std::cout << j.dump(2) << "\n";
        } else {
            for (const auto& [k, v, _] : fields_) std::cout << k << ": " << text(v) << "\n";
        }
        std::cout << "RESULT";
        for (const auto& [k, v, summary] : fields_) {
            if (!summary) continue;
            std::string t = text(v);
            if (t.find_first_of(" \t\"") != std::string::npos || t.empty()) t = Json(t).dump();
            std::cout << " " << k << "=" << t;
        }
        std::cout << std::endl;
    }

private:
    static std::string text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

    std::vector<std::tuple<std::string, Json, bool>> fields_;
};

std::string big(const BigInt& b) { return b.str(); }

// Flags shared by the sample-based commands.
struct SampleFlags {
    std::string path;
    std::vector<std::string> fragment;
    std::optional<std::size_t> budget;
    std::optional<int> max_k;

    SampleFile load() const {
        SampleFile s = load_sample_file(path);
        if (!fragment.empty()) s.fragment = fragment;
        if (budget) s.budget = budget;
        if (max_k) s.max_k = max_k;
        return s;
    }
};

template <typename A, typename Load>
std::vector<A> automata(const std::vector<Json>& js, const char* side, Load load) {
    std::vector<A> out;
    for (std::size_t i = 0; i < js.size(); ++i) out.push_back(load(js[i], std::string("/") + side + "/" + std::to_string(i)));
    return out;
}

// ---------------------------------------------------------------------------
// Word separation
// ---------------------------------------------------------------------------

int report_nfa(const std::vector<Nfa>& p, const std::vector<Nfa>& n, std::optional<std::size_t> budget, bool json) {
    const auto r = nfa_separate(p, n, budget);
    Report rep;
    rep.add("separable", r.word.has_value());
    if (r.word) rep.add("word", word_text(*r.word)).add("length", r.word->size());
    rep.add("total_states", r.total_states).add("entries", r.entries).add("bound", big(r.bound));
    rep.print(json);
    return r.word ? kExitYes : kExitNo;
}

int report_parity(const std::vector<ParityAutomaton>& p, const std::vector<ParityAutomaton>& n,
                  std::optional<std::size_t> budget, bool json) {
    const auto r = parity_separate(p, n, budget);
    Report rep;
    rep.add("separable", r.lasso.has_value());
    if (r.lasso) rep.add("prefix", word_text(r.lasso->first)).add("period", word_text(r.lasso->second));
    rep.add("n", r.n).add("k", r.k).add("prefix_entries", r.prefix_entries).add("period_entries", r.period_entries);
    rep.print(json);
    return r.lasso ? kExitYes : kExitNo;
}

int word_sample(const SampleFile& s, bool json) {
    if (s.logic == "nfa") {
        return report_nfa(automata<Nfa>(s.positives, "positives", nfa_from_json),
                          automata<Nfa>(s.negatives, "negatives", nfa_from_json), s.budget, json);
    }
    return report_parity(automata<ParityAutomaton>(s.positives, "positives", parity_from_json),
                         automata<ParityAutomaton>(s.negatives, "negatives", parity_from_json), s.budget, json);
}

bool is_word_logic(const std::string& l) { return l == "nfa" || l == "parity"; }

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_learn(const SampleFlags& f, bool json) {
    const SampleFile s = f.load();
    if (is_word_logic(s.logic)) return word_sample(s, json);
    return with_instance(s, [&](const auto& inst) {
        const auto r = learn(inst, LearnOptions{s.budget});
        Report rep;
        rep.add("verdict", verdict_name(r.verdict));
        if (r.verdict == Verdict::Separable) {
            rep.add("formula", render(*r.dag, r.formula)).add("dag_size", r.dag_size).add("tree_size", r.tree_size);
        }
        rep.add("bound", big(r.bound)).add("entries", r.entries).add("rounds", r.rounds);
        rep.add("truncated", r.truncated, false).add("seconds", r.seconds, false);
        rep.print(json);
        switch (r.verdict) {
            case Verdict::Separable: return kExitYes;
            case Verdict::NotSeparable: return kExitNo;
            case Verdict::Inconclusive: break;
        }
        return kExitInconclusive;
    });
}

int cmd_bound(const SampleFlags& f, bool json) {
    const SampleFile s = f.load();
    BigInt b;
    if (s.logic == "nfa") {
        b = size_bound(FwInstance(automata<Nfa>(s.positives, "positives", nfa_from_json),
                                  automata<Nfa>(s.negatives, "negatives", nfa_from_json)));
    } else if (s.logic == "parity") {
        b = size_bound(PwInstance(automata<ParityAutomaton>(s.positives, "positives", parity_from_json),
                                  automata<ParityAutomaton>(s.negatives, "negatives", parity_from_json)));
    } else {
        b = with_instance(s, [](const auto& inst) { return size_bound(inst); });
    }
    Report().add("bound", big(b)).print(json);
    return kExitYes;
}

int cmd_oracle(const SampleFlags& f, std::optional<std::uint64_t> cap, bool json) {
    const SampleFile s = f.load();
    return with_instance(s, [&](const auto& inst) {
        const BigInt bound = size_bound(inst);
        const std::uint64_t c =
            cap ? *cap : (bound > BigInt(UINT64_MAX) ? UINT64_MAX : static_cast<std::uint64_t>(bound));
        const auto r = enumerate_min_formula(inst, c);
        Report rep;
        rep.add("status", oracle_status_name(r.status));
        if (r.separable()) rep.add("tree_size", r.tree_size).add("dag_size", r.dag_size).add("formula", render(*r.dag, r.formula));
        rep.add("classes", r.classes).add("explored_size", r.explored_size).add("cap", c);
        rep.print(json);
        switch (r.status) {
            case OracleStatus::Found: return kExitYes;
            case OracleStatus::Exhausted: return kExitNo;
            case OracleStatus::CapExceeded: break;
        }
        return kExitInconclusive;
    });
}

// Atom names in formula text: identifiers that are not operators, with glued unary prefixes ("XXq") removed.
std::set<std::string> formula_atoms(std::string text, const LogicSignature& base, const std::set<std::string>& known) {
    text = std::regex_replace(text, std::regex(R"(<[^>]*>>=[0-9]+|\[[^\]]*\])"), " ");
    std::set<std::string> reserved, unary;
    for (const auto& o : base.operators()) {
        if (o.arity == 0) continue;
        reserved.insert(o.name);
        reserved.insert(o.symbol);
        if (o.arity == 1 && !o.symbol.empty() && (std::isalpha(static_cast<unsigned char>(o.symbol[0])) != 0))
            unary.insert(o.symbol);
    }
    std::set<std::string> atoms;
    const std::regex ident("[A-Za-z_][A-Za-z0-9_]*");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), ident); it != std::sregex_iterator(); ++it) {
        std::string t = it->str();
        while (!known.count(t) && !reserved.count(t)) {
            std::string best;
            for (const auto& u : unary) {
                if (u.size() < t.size() && t.compare(0, u.size(), u) == 0 && u.size() > best.size()) best = u;
            }
            if (best.empty()) break;
            t = t.substr(best.size());
        }
        if (reserved.count(t)) continue;
        if (!known.count(t) && t.size() > 4 && t.ends_with("_bar")) t = t.substr(0, t.size() - 4);
        atoms.insert(t);
    }
    return atoms;
}

int formula_max_k(const std::string& text) {
    int k = 1;
    const std::regex re(">>=([0-9]+)");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it)
        k = std::max(k, std::stoi((*it)[1].str()));
    return k;
}

std::set<std::string> formula_actions(const std::string& text) {
    std::set<std::string> acts;
    const std::regex re(R"(<([^>]*)>>=|\[([^\]]*)\])");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it)
        acts.insert((*it)[1].matched ? (*it)[1].str() : (*it)[2].str());
    return acts;
}

LogicSignature base_signature(const std::string& logic) {
    if (logic == "ml") return ml_signature({"__"}, {"__"}, 1);
    if (logic == "ctl") return ctl_signature({"__"});
    if (logic == "ltlp") return ltlp_signature({"__"});
    if (logic == "ltl-words") return ltl_signature({"__"});
    throw Error(Errc::InvalidArgument, "no model checker for logic '" + logic + "'");
}

int cmd_modelcheck(std::string logic, const std::string& path, const std::string& formula, std::optional<int> max_k,
                   bool json) {
    const Json j = read_json_file(path);
    SampleFile s;
    const bool sample = j.is_object() && j.contains("logic");
    if (sample) {
        s = sample_from_json(j, std::filesystem::path(path).parent_path(), path);
        if (!logic.empty() && logic != s.logic)
            throw Error(Errc::InvalidArgument, "--logic " + logic + " does not match sample logic " + s.logic);
        s.fragment.reset();
    } else {
        if (logic.empty()) throw Error(Errc::InvalidArgument, "--logic is required for a single model");
        s.logic = logic;
        s.positives.push_back(j);
    }
    if (is_word_logic(s.logic)) throw Error(Errc::InvalidArgument, "model checking is defined for formula logics");

    // Extend the sample's own vocabulary with whatever the formula mentions.
    const auto full = full_signature(s);
    std::set<std::string> props, acts;
    for (const auto& o : full.operators()) {
        if (o.arity == 0 && !o.name.ends_with("_bar")) props.insert(o.name);
        if (o.kind == OpKind::Box || o.kind == OpKind::Diamond) acts.insert(o.param);
    }
    for (const auto& a : formula_atoms(formula, base_signature(s.logic), props)) props.insert(a);
    s.propositions = std::vector<std::string>(props.begin(), props.end());
    if (s.logic == "ml") {
        for (const auto& a : formula_actions(formula)) acts.insert(a);
        s.actions = std::vector<std::string>(acts.begin(), acts.end());
        int k = formula_max_k(formula);
        for (const auto& o : full.operators()) k = std::max(k, o.k);
        s.max_k = max_k ? std::max(*max_k, k) : k;
    }
    if (s.logic == "ltl-words") s.fragment = [&] {
        std::vector<std::string> all;
        for (const auto& o : ltl_signature(*s.propositions, true).operators()) all.push_back(o.name);
        return all;
    }();

    return with_instance(s, [&](const auto& inst) {
        FormulaDag dag(inst.signature());
        const FormulaId id = parse(dag, formula);
        bool holds_all = true, separates = true;
        Json per = Json::array();
        for (std::size_t m = 0; m < inst.model_count(); ++m) {
            const bool h = inst.model_check(m, dag, id);
            per.push_back(h);
            holds_all = holds_all && h;
            separates = separates && h == inst.is_positive(m);
        }
        Report rep;
        rep.add("formula", render(dag, id), false).add("per_model", per, false);
        if (sample) {
            rep.add("separates", separates);
            rep.print(json);
            return separates ? kExitYes : kExitNo;
        }
        rep.add("holds", holds_all);
        rep.print(json);
        return holds_all ? kExitYes : kExitNo;
    });
}

int cmd_separate_words(const std::string& mode, const std::vector<std::string>& pos, const std::vector<std::string>& neg,
                       std::optional<std::size_t> budget, bool json) {
    auto load = [](const std::vector<std::string>& files) {
        std::vector<Json> out;
        for (const auto& f : files) out.push_back(read_json_file(f));
        return out;
    };
    if (mode == "nfa") {
        return report_nfa(automata<Nfa>(load(pos), "positives", nfa_from_json),
                          automata<Nfa>(load(neg), "negatives", nfa_from_json), budget, json);
    }
    return report_parity(automata<ParityAutomaton>(load(pos), "positives", parity_from_json),
                         automata<ParityAutomaton>(load(neg), "negatives", parity_from_json), budget, json);
}

struct GenFlags {
    std::string kind;
    std::size_t n = 2;
    std::string lattice = "and";
    std::size_t shift = 0;
    std::uint64_t seed = 1;
    std::string automaton;
    std::vector<std::size_t> z;
    std::string variant = "box";
    std::string out;
};

int cmd_gen_sample(const GenFlags& g, bool json) {
    SampleFile s;
    if (g.kind == "prime") {
        s = prime_sample_file(g.n, g.lattice == "or" ? Lattice::Or : Lattice::And, g.shift);
    } else if (g.kind == "random-ml") {
        s = random_ml_sample_file(g.seed);
    } else {
        Nfa a;
        if (g.automaton.empty()) {
            Rng rng(g.seed);
            a = random_nfa(rng, g.n, {"a", "b"});
        } else {
            a = nfa_from_json(read_json_file(g.automaton), g.automaton);
        }
        std::vector<std::size_t> z = g.z;
        if (z.empty()) a.initial().for_each([&](std::size_t q) { z.push_back(q); });
        s = gadget_sample_file(a, z, g.variant == "diamond");
    }
    const Json j = sample_to_json(s);
    Report rep;
    rep.add("logic", s.logic).add("positives", s.positives.size()).add("negatives", s.negatives.size());
    if (g.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_json_file(g.out, j);
        rep.add("written", g.out);
    }
    rep.print(json && !g.out.empty());
    return kExitYes;
}

int cmd_translate_lx(const std::string& text, bool json) {
    const auto atoms = formula_atoms(text, ltl_signature({"__"}), {});
    if (atoms.empty()) throw Error(Errc::SyntaxError, "formula mentions no propositions");
    const std::vector<std::string> props(atoms.begin(), atoms.end());
    FormulaDag src(ltl_signature(props));
    const FormulaId f = parse(src, text);
    FormulaDag dst(ltlp_signature(props));
    const auto r = translate_lx(src, f, dst);
    Report().add("input", render(src, f), false).add("formula", render(dst, r.formula))
        .add("dag_size", r.dag_size).add("tree_size", r.tree_size).print(json);
    return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learn separating formulas from positive and negative models"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    SampleFlags sf;
    std::optional<std::uint64_t> cap;
    auto sample_opts = [&](CLI::App* c) {
        c->add_option("sample", sf.path, "Sample file (JSON)")->required();
        c->add_option("--fragment", sf.fragment, "Operator names to keep")->delimiter(',');
        c->add_option("--budget", sf.budget, "Closure entry budget");
        c->add_option("--max-k", sf.max_k, "Largest graded diamond for ML");
    };

    auto* learn_cmd = app.add_subcommand("learn", "Decide separability and print a witness");
    sample_opts(learn_cmd);
    auto* bound_cmd = app.add_subcommand("bound", "Print the witness size bound");
    sample_opts(bound_cmd);
    auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate a minimum-size separating formula");
    sample_opts(oracle_cmd);
    oracle_cmd->add_option("--cap", cap, "Largest tree size to try");

    std::string logic, model, formula;
    std::optional<int> mc_max_k;
    auto* mc_cmd = app.add_subcommand("modelcheck", "Check a formula on a model or on every model of a sample");
    mc_cmd->add_option("--logic", logic, "ml | ctl | ltlp | ltl-words")
        ->check(CLI::IsMember({"ml", "ctl", "ltlp", "ltl-words"}));
    mc_cmd->add_option("model", model, "Model or sample file")->required();
    mc_cmd->add_option("formula", formula, "Formula text")->required();
    mc_cmd->add_option("--max-k", mc_max_k, "Largest graded diamond for ML");

    std::string mode = "nfa";
    std::vector<std::string> pos, neg;
    std::optional<std::size_t> sw_budget;
    auto* sw_cmd = app.add_subcommand("separate-words", "Separate automata by a finite or lasso word");
    sw_cmd->add_option("--mode", mode, "nfa | parity")->check(CLI::IsMember({"nfa", "parity"}));
    sw_cmd->add_option("--positive", pos, "Automata that must accept");
    sw_cmd->add_option("--negative", neg, "Automata that must reject");
    sw_cmd->add_option("--budget", sw_budget, "Closure entry budget");

    GenFlags gf;
    auto* gen_cmd = app.add_subcommand("gen-sample", "Write a generated sample file");
    gen_cmd->add_option("kind", gf.kind, "prime | random-ml | gadget")
        ->required()
        ->check(CLI::IsMember({"prime", "random-ml", "gadget"}));
    gen_cmd->add_option("--n", gf.n, "Prime count, or NFA size for a random gadget");
    gen_cmd->add_option("--lattice", gf.lattice, "and | or")->check(CLI::IsMember({"and", "or"}));
    gen_cmd->add_option("--shift", gf.shift, "Suffix shift of every word");
    gen_cmd->add_option("--seed", gf.seed, "Random seed");
    gen_cmd->add_option("--automaton", gf.automaton, "NFA file for gadget samples");
    gen_cmd->add_option("--z", gf.z, "Start states for gadget samples")->delimiter(',');
    gen_cmd->add_option("--variant", gf.variant, "box | diamond")->check(CLI::IsMember({"box", "diamond"}));
    gen_cmd->add_option("-o,--output", gf.out, "Output file (default stdout)");

    std::string lx;
    auto* tr_cmd = app.add_subcommand("translate-lx", "Translate a next-only LTL formula to LTL_P");
    tr_cmd->add_option("formula", lx, "Formula text")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMalformed;
    }

    const bool json = format == "json";
    try {
        if (*learn_cmd) return cmd_learn(sf, json);
        if (*bound_cmd) return cmd_bound(sf, json);
        if (*oracle_cmd) return cmd_oracle(sf, cap, json);
        if (*mc_cmd) return cmd_modelcheck(logic, model, formula, mc_max_k, json);
        if (*sw_cmd) return cmd_separate_words(mode, pos, neg, sw_budget, json);
        if (*gen_cmd) return cmd_gen_sample(gf, json);
        if (*tr_cmd) return cmd_translate_lx(lx, json);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMalformed;
    }
    return kExitMalformed;
}

#pragma once

#include "seplearn/automata.hpp"
#include "seplearn/ctl.hpp"
#include "seplearn/engine.hpp"
#include "seplearn/io.hpp"
#include "seplearn/ltl.hpp"
#include "seplearn/ltlp.hpp"
#include "seplearn/ml.hpp"
#include "seplearn/random.hpp"
#include "seplearn/samples.hpp"
#include "seplearn/signature.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace seplearn {

// Builds the instance a sample file describes and hands it to a callback.

namespace detail {

template <typename Model, typename Load>
std::pair<std::vector<Model>, std::vector<Model>> load_models(const SampleFile& s, Load load) {
    std::vector<Model> p, n;
    for (std::size_t i = 0; i < s.positives.size(); ++i) p.push_back(load(s.positives[i], "/positives/" + std::to_string(i)));
    for (std::size_t i = 0; i < s.negatives.size(); ++i) n.push_back(load(s.negatives[i], "/negatives/" + std::to_string(i)));
    return {std::move(p), std::move(n)};
}

inline std::vector<std::string> kripke_props(const SampleFile& s, const std::vector<KripkeStructure>& ks) {
    if (s.propositions) return *s.propositions;
    std::set<std::string> ps;
    for (const auto& k : ks) ps.insert(k.propositions().begin(), k.propositions().end());
    return {ps.begin(), ps.end()};
}

inline LogicSignature apply_fragment(const SampleFile& s, const LogicSignature& full) {
    if (!s.fragment) return full;
    return restrict_fragment(full, std::set<std::string>(s.fragment->begin(), s.fragment->end()));
}

inline bool wants_duals(const SampleFile& s) {
    if (!s.fragment) return false;
    return std::any_of(s.fragment->begin(), s.fragment->end(),
                       [](const std::string& n) { return n.size() > 4 && n.ends_with("_bar"); });
}

}  // namespace detail

/// Full signature of the sample's logic before fragment restriction.
inline LogicSignature full_signature(const SampleFile& s) {
    if (s.logic == "nfa" || s.logic == "parity") {
        std::set<std::string> alpha;
        for (const auto& m : s.positives) {
            for (const auto& a : m.value("alphabet", std::vector<std::string>{})) alpha.insert(a);
        }
        for (const auto& m : s.negatives) {
            for (const auto& a : m.value("alphabet", std::vector<std::string>{})) alpha.insert(a);
        }
        std::vector<std::string> v(alpha.begin(), alpha.end());
        return s.logic == "nfa" ? fw_signature(v) : pw_signature(v);
    }
    if (s.logic == "ltl-words") {
        std::set<std::string> ps;
        if (s.propositions) {
            ps.insert(s.propositions->begin(), s.propositions->end());
        } else {
            for (const auto* side : {&s.positives, &s.negatives}) {
                for (std::size_t i = 0; i < side->size(); ++i) {
                    const auto w = lasso_from_json((*side)[i]);
                    for (std::size_t j = 0; j < w.size(); ++j) ps.insert(w.at(j).begin(), w.at(j).end());
                }
            }
        }
        return ltl_signature({ps.begin(), ps.end()}, detail::wants_duals(s));
    }
    auto [p, n] = detail::load_models<KripkeStructure>(
        s, [](const Json& j, const std::string& w) { return kripke_from_json(j, w); });
    std::vector<KripkeStructure> all = p;
    all.insert(all.end(), n.begin(), n.end());
    const auto props = detail::kripke_props(s, all);
    if (s.logic == "ctl") return ctl_signature(props);
    if (s.logic == "ltlp") return ltlp_signature(props);
    std::set<std::string> acts;
    if (s.actions) {
        acts.insert(s.actions->begin(), s.actions->end());
    } else {
        for (const auto& k : all) acts.insert(k.actions().begin(), k.actions().end());
    }
    std::size_t maxq = 1;
    for (const auto& k : all) maxq = std::max(maxq, k.size());
    return ml_signature(props, {acts.begin(), acts.end()}, s.max_k ? *s.max_k : static_cast<int>(maxq));
}

/// Calls f(instance) with the instance for the sample's logic.
template <typename F>
decltype(auto) with_instance(const SampleFile& s, F&& f) {
    const LogicSignature sig = detail::apply_fragment(s, full_signature(s));
    auto kripke = [](const Json& j, const std::string& w) { return kripke_from_json(j, w); };
    if (s.logic == "ml") {
        auto [p, n] = detail::load_models<KripkeStructure>(s, kripke);
        return f(MlInstance(sig, std::move(p), std::move(n)));
    }
    if (s.logic == "ctl") {
        auto [p, n] = detail::load_models<KripkeStructure>(s, kripke);
        return f(CtlInstance(sig, std::move(p), std::move(n)));
    }
    if (s.logic == "ltlp") {
        auto [p, n] = detail::load_models<KripkeStructure>(s, kripke);
        return f(LtlpInstance(sig, std::move(p), std::move(n)));
    }
    if (s.logic == "ltl-words") {
        auto [p, n] = detail::load_models<LassoWord>(
            s, [](const Json& j, const std::string& w) { return lasso_from_json(j, w); });
        return f(LtlInstance(sig, std::move(p), std::move(n)));
    }
    throw Error(Errc::InvalidArgument, "logic '" + s.logic + "' has no formula instance");
}

// ---------------------------------------------------------------------------
// Sample generators
// ---------------------------------------------------------------------------

/// Prime sample over {x, y} with the matching monotone fragment.
inline SampleFile prime_sample_file(std::size_t n, Lattice l, std::size_t shift = 0) {
    const auto s = gen_prime_sample(n, l, shift);
    SampleFile f;
    f.logic = "ltl-words";
    f.fragment = std::vector<std::string>{"x", "y", l == Lattice::And ? "&" : "|", "X", "F", "G"};
    f.propositions = std::vector<std::string>{"x", "y"};
    for (const auto& w : s.positives) f.positives.push_back(lasso_to_json(w));
    for (const auto& w : s.negatives) f.negatives.push_back(lasso_to_json(w));
    return f;
}

/// Up to three random structures over {p} and action a, at most six states in total.
inline SampleFile random_ml_sample_file(std::uint64_t seed) {
    Rng rng(seed);
    SampleFile f;
    f.logic = "ml";
    f.propositions = std::vector<std::string>{"p"};
    f.actions = std::vector<std::string>{"a"};
    const std::size_t count = uniform(rng, 1, 3);
    std::size_t left = 6;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t sz = uniform(rng, 1, std::min<std::size_t>(3, left - (count - i - 1)));
        left -= sz;
        auto k = kripke_to_json(random_kripke(rng, sz, {"p"}, {"a"}, 0.45));
        (coin(rng) ? f.positives : f.negatives).push_back(std::move(k));
    }
    return f;
}

/// Box or diamond gadget sample for an automaton and a set of start states.
inline SampleFile gadget_sample_file(const Nfa& a, const std::vector<std::size_t>& z, bool diamond) {
    const auto s = diamond ? diamond_gadget_sample(a, z) : box_gadget_sample(a, z);
    SampleFile f;
    f.logic = "ml";
    f.propositions = std::vector<std::string>{"p"};
    f.actions = a.alphabet();
    for (const auto& k : s.positives) f.positives.push_back(kripke_to_json(k));
    for (const auto& k : s.negatives) f.negatives.push_back(kripke_to_json(k));
    return f;
}

}  // namespace seplearn

#pragma once

#include "seplearn/automata.hpp"
#include "seplearn/formula.hpp"
#include "seplearn/kripke.hpp"
#include "seplearn/lasso.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace seplearn {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// Random structure with n states; edges present with probability `density`.
inline KripkeStructure random_kripke(Rng& rng, std::size_t n, const std::vector<std::string>& props,
                                     const std::vector<std::string>& actions, double density = 0.4,
                                     bool nonblocking = false) {
    std::vector<std::set<std::string>> labels(n);
    for (auto& l : labels) {
        for (const auto& p : props) {
            if (coin(rng)) l.insert(p);
        }
    }
    std::vector<std::size_t> init;
    for (std::size_t q = 0; q < n; ++q) {
        if (coin(rng, 0.4)) init.push_back(q);
    }
    if (init.empty()) init.push_back(uniform(rng, 0, n - 1));
    KripkeStructure k(n, init, actions, std::move(labels));
    for (const auto& a : actions) {
        for (std::size_t q = 0; q < n; ++q) {
            for (std::size_t r = 0; r < n; ++r) {
                if (coin(rng, density)) k.add_edge(q, a, r);
            }
        }
    }
    if (nonblocking) {
        for (std::size_t q = 0; q < n; ++q) {
            if (k.successors(q).empty()) k.add_edge(q, actions[uniform(rng, 0, actions.size() - 1)], uniform(rng, 0, n - 1));
        }
    }
    return k;
}

inline LassoWord random_lasso(Rng& rng, std::size_t max_len, const std::vector<std::string>& props,
                              bool allow_finite = true) {
    const std::size_t len = uniform(rng, 1, max_len);
    const std::size_t loop = allow_finite ? uniform(rng, 0, len) : uniform(rng, 1, len);
    std::vector<Letter> u, v;
    for (std::size_t i = 0; i < len; ++i) {
        Letter l;
        for (const auto& p : props) {
            if (coin(rng)) l.insert(p);
        }
        (i < len - loop ? u : v).push_back(std::move(l));
    }
    return LassoWord(std::move(u), std::move(v));
}

inline Nfa random_nfa(Rng& rng, std::size_t n, const std::vector<std::string>& alphabet, double density = 0.35) {
    std::vector<std::size_t> init, fin;
    for (std::size_t q = 0; q < n; ++q) {
        if (coin(rng, 0.35)) init.push_back(q);
        if (coin(rng, 0.4)) fin.push_back(q);
    }
    if (init.empty()) init.push_back(0);
    Nfa a(n, alphabet, init, fin);
    for (const auto& x : alphabet) {
        for (std::size_t q = 0; q < n; ++q) {
            for (std::size_t r = 0; r < n; ++r) {
                if (coin(rng, density)) a.add_edge(q, x, r);
            }
        }
    }
    return a;
}

/// Priorities drawn from {base, base + 1}.
inline ParityAutomaton random_parity(Rng& rng, std::size_t n, const std::vector<std::string>& alphabet,
                                     double density = 0.4) {
    const int base = static_cast<int>(uniform(rng, 0, 1));
    std::vector<int> prio(n);
    for (auto& p : prio) p = base + static_cast<int>(uniform(rng, 0, 1));
    std::vector<std::size_t> init;
    for (std::size_t q = 0; q < n; ++q) {
        if (coin(rng, 0.35)) init.push_back(q);
    }
    if (init.empty()) init.push_back(0);
    ParityAutomaton a(n, alphabet, init, prio);
    for (const auto& x : alphabet) {
        for (std::size_t q = 0; q < n; ++q) {
            for (std::size_t r = 0; r < n; ++r) {
                if (coin(rng, density)) a.add_edge(q, x, r);
            }
        }
    }
    return a;
}

namespace detail {

// Smallest tree size of a formula of each type using only `ops`.
inline std::vector<std::size_t> min_sizes(const LogicSignature& sig, const std::vector<OpIndex>& ops) {
    constexpr std::size_t inf = std::numeric_limits<std::size_t>::max() / 4;
    std::vector<std::size_t> best(sig.type_count(), inf);
    for (bool changed = true; changed;) {
        changed = false;
        for (OpIndex i : ops) {
            const auto& o = sig.op(i);
            std::size_t sz = 1;
            for (const auto& ts : o.arg_types) {
                std::size_t m = inf;
                for (TypeId t : ts) m = std::min(m, best[t]);
                sz += m;
            }
            if (sz < best[o.result_type]) {
                best[o.result_type] = sz;
                changed = true;
            }
        }
    }
    return best;
}

}  // namespace detail

/**
 * @brief Random well-typed formula of type `want` with tree size at most `max_size`.
 *
 * Only the named operators are used. Throws when no such formula fits the size.
 */
inline FormulaId random_formula(Rng& rng, FormulaDag& dag, const std::vector<std::string>& ops, std::size_t max_size,
                                TypeId want) {
    const auto& sig = dag.signature();
    std::vector<OpIndex> idx;
    for (const auto& n : ops) idx.push_back(sig.index_of(n));
    const auto best = detail::min_sizes(sig, idx);

    auto rec = [&](auto&& self, std::size_t budget, TypeId t) -> FormulaId {
        std::vector<std::pair<OpIndex, std::vector<TypeId>>> leaves, inner;
        for (OpIndex i : idx) {
            const auto& o = sig.op(i);
            if (o.result_type != t) continue;
            if (o.arity == 0) {
                leaves.push_back({i, {}});
                continue;
            }
            // Pick argument types that fit, one per argument.
            std::vector<TypeId> args;
            std::size_t need = 1;
            for (const auto& ts : o.arg_types) {
                std::vector<TypeId> fit;
                for (TypeId a : ts) {
                    if (best[a] < budget) fit.push_back(a);
                }
                if (fit.empty()) {
                    need = budget + 1;
                    break;
                }
                const TypeId a = fit[uniform(rng, 0, fit.size() - 1)];
                args.push_back(a);
                need += best[a];
            }
            if (need <= budget) inner.push_back({i, args});
        }
        if (leaves.empty() && inner.empty()) throw Error(Errc::InvalidArgument, "no formula of this type fits");
        if (inner.empty() || (!leaves.empty() && coin(rng, 0.3))) {
            return dag.intern(leaves[uniform(rng, 0, leaves.size() - 1)].first, {});
        }
        const auto& [oi, args] = inner[uniform(rng, 0, inner.size() - 1)];
        if (args.size() == 1) return dag.intern(oi, {self(self, budget - 1, args[0])});
        const std::size_t room = budget - 1;
        const std::size_t left = uniform(rng, best[args[0]], room - best[args[1]]);
        const FormulaId a = self(self, left, args[0]);
        const FormulaId b = self(self, room - left, args[1]);
        return dag.intern(oi, {a, b});
    };
    return rec(rec, max_size, want);
}

}  // namespace seplearn

#pragma once

#include "seplearn/automata.hpp"
#include "seplearn/bigint.hpp"
#include "seplearn/error.hpp"
#include "seplearn/formula.hpp"
#include "seplearn/kripke.hpp"
#include "seplearn/lasso.hpp"
#include "seplearn/ltl.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace seplearn {

// ---------------------------------------------------------------------------
// Prime samples
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxPrimeSampleN = 6;

/// The first n primes (sieve).
inline std::vector<std::size_t> first_primes(std::size_t n) {
    std::vector<std::size_t> out;
    std::size_t limit = 16;
    while (out.size() < n) {
        out.clear();
        std::vector<char> composite(limit + 1, 0);
        for (std::size_t i = 2; i <= limit && out.size() < n; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (std::size_t j = i * i; j <= limit; j += i) composite[j] = 1;
        }
        limit *= 2;
    }
    return out;
}

/// k_n = p_1 * ... * p_n - 1.
inline BigInt separability_threshold(std::size_t n) {
    if (n < 1) throw Error(Errc::InvalidArgument, "n must be at least 1");
    BigInt prod = 1;
    for (auto p : first_primes(n)) prod *= p;
    return prod - 1;
}

/// w_m(x) = ({y}^(m-1) {x})^omega.
inline LassoWord prime_word(std::size_t m, const std::string& x = "x", const std::string& y = "y") {
    std::vector<Letter> v(m, Letter{y});
    v.back() = Letter{x};
    return LassoWord({}, std::move(v));
}

/// w_4'(x) = {y}{x} . w_4(x).
inline LassoWord prime_word_shifted4(const std::string& x = "x", const std::string& y = "y") {
    return LassoWord({Letter{y}, Letter{x}}, prime_word(4, x, y).loop());
}

enum class Lattice { And, Or };

struct LassoSample {
    std::vector<LassoWord> positives;
    std::vector<LassoWord> negatives;
};

/**
 * @brief P = {w_p[j:] : p among the first n primes} + {w_4'[j:]}, N = {w_4[j:]}.
 *
 * The And variant returns (P, N), the Or variant (N, P).
 */
inline LassoSample gen_prime_sample(std::size_t n, Lattice variant, std::size_t j = 0) {
    if (n < 1) throw Error(Errc::InvalidArgument, "n must be at least 1");
    if (n > kMaxPrimeSampleN) throw Error(Errc::InputTooLarge, "prime samples are limited to n <= 6");
    std::vector<LassoWord> p, q;
    for (auto prime : first_primes(n)) p.push_back(prime_word(prime).suffix(j));
    p.push_back(prime_word_shifted4().suffix(j));
    q.push_back(prime_word(4).suffix(j));
    if (variant == Lattice::And) return {std::move(p), std::move(q)};
    return {std::move(q), std::move(p)};
}

// ---------------------------------------------------------------------------
// Dualization of monotone formulas
// ---------------------------------------------------------------------------

/**
 * @brief Swaps atoms with their duals, & with |, F with G; X is kept.
 *
 * `atom_map` overrides the dual of an atom (e.g. x <-> y on words where exactly one of them
 * holds at each position); unmapped atoms p go to p_bar and p_bar to p. `dst` must declare
 * the target operators.
 */
inline FormulaId dualize(const FormulaDag& src, FormulaId id, Lattice from, FormulaDag& dst,
                         const std::map<std::string, std::string>& atom_map = {}) {
    const OpKind lattice = from == Lattice::And ? OpKind::And : OpKind::Or;
    const std::string target = from == Lattice::And ? "|" : "&";
    std::map<FormulaId, FormulaId> memo;
    auto rec = [&](auto&& self, FormulaId x) -> FormulaId {
        if (auto it = memo.find(x); it != memo.end()) return it->second;
        const auto& o = src.op(x);
        FormulaId r;
        switch (o.kind) {
            case OpKind::Atom: {
                auto it = atom_map.find(o.name);
                r = dst.intern(it != atom_map.end() ? it->second : dual_name(o.param));
                break;
            }
            case OpKind::DualAtom: {
                auto it = atom_map.find(o.name);
                r = dst.intern(it != atom_map.end() ? it->second : o.param);
                break;
            }
            case OpKind::Next: r = dst.intern("X", {self(self, src.child(x, 0))}); break;
            case OpKind::Finally: r = dst.intern("G", {self(self, src.child(x, 0))}); break;
            case OpKind::Globally: r = dst.intern("F", {self(self, src.child(x, 0))}); break;
            case OpKind::And:
            case OpKind::Or:
                if (o.kind != lattice) throw Error(Errc::NotMonotone, "unexpected lattice operator " + o.name);
                r = dst.intern(target, {self(self, src.child(x, 0)), self(self, src.child(x, 1))});
                break;
            default: throw Error(Errc::NotMonotone, "operator " + o.name + " is not allowed");
        }
        memo.emplace(x, r);
        return r;
    };
    return rec(rec, id);
}

// ---------------------------------------------------------------------------
// Automaton to Kripke gadgets
// ---------------------------------------------------------------------------

/// Copy of A with initial states Z and letters as actions; finals labeled P, others {p}\P.
inline KripkeStructure automaton_to_kripke(const Nfa& a, const std::vector<std::size_t>& z, bool p_on_finals,
                                           const std::string& p = "p") {
    std::vector<std::set<std::string>> labels(a.size());
    for (std::size_t q = 0; q < a.size(); ++q) {
        const bool fin = a.finals().test(q);
        if (fin == p_on_finals) labels[q].insert(p);
    }
    KripkeStructure k(a.size(), z, a.alphabet(), std::move(labels));
    for (std::size_t l = 0; l < a.alphabet().size(); ++l) {
        for (std::size_t q = 0; q < a.size(); ++q) {
            for (auto r : a.delta(q, l)) k.add_edge(q, a.alphabet()[l], r);
        }
    }
    return k;
}

/// States q_idle (initial, labeled P) and q_loop (labeled {p}\P); idle -> {idle, loop}, loop -> {loop}.
inline KripkeStructure idle_gadget(bool p_in_P, const std::vector<std::string>& actions, const std::string& p = "p") {
    std::vector<std::set<std::string>> labels(2);
    if (p_in_P) {
        labels[0].insert(p);
    } else {
        labels[1].insert(p);
    }
    KripkeStructure k(2, {0}, actions, std::move(labels), {"q_idle", "q_loop"});
    for (const auto& act : actions) {
        k.add_edge(0, act, 0);
        k.add_edge(0, act, 1);
        k.add_edge(1, act, 1);
    }
    return k;
}

struct KripkeSample {
    std::vector<KripkeStructure> positives;
    std::vector<KripkeStructure> negatives;
};

/// ({K^Z(empty)}, {K(empty)}).
inline KripkeSample box_gadget_sample(const Nfa& a, const std::vector<std::size_t>& z) {
    return {{automaton_to_kripke(a, z, false)}, {idle_gadget(false, a.alphabet())}};
}

/// ({K({p})}, {K^{q}({p}) : q in Z}).
inline KripkeSample diamond_gadget_sample(const Nfa& a, const std::vector<std::size_t>& z) {
    KripkeSample s;
    s.positives.push_back(idle_gadget(true, a.alphabet()));
    for (auto q : z) s.negatives.push_back(automaton_to_kripke(a, {q}, true));
    return s;
}

}  // namespace seplearn

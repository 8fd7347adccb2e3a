#pragma once

// Shared fixtures and brute-force oracles for the unit tests and the acceptance runner.

#include "seplearn/seplearn.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace seplearn::testing {

inline Bits bits_of(std::size_t n, std::initializer_list<std::size_t> xs) {
    Bits b(n);
    for (auto x : xs) b.set(x);
    return b;
}

/// Actionless structure with edges under the default action.
inline KripkeStructure actionless(std::size_t n, std::vector<std::size_t> init,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                  std::vector<std::set<std::string>> labels) {
    KripkeStructure k(n, std::move(init), {kDefaultAction}, std::move(labels));
    for (auto [q, r] : edges) k.add_edge(q, kDefaultAction, r);
    return k;
}

/// The two-state structure q1 -a-> q2 -a-> q2 with p at q2 and I = {q1}.
inline KripkeStructure two_state_ml() {
    KripkeStructure k(2, {0}, {"a"}, {{}, {"p"}}, {"q1", "q2"});
    k.add_edge(0, "a", 1);
    k.add_edge(1, "a", 1);
    return k;
}

// ---------------------------------------------------------------------------
// Exhaustive families of small structures
// ---------------------------------------------------------------------------

/// Every non-blocking actionless structure with 1..max_states states over `props`.
inline std::vector<KripkeStructure> all_nonblocking(std::size_t max_states, const std::vector<std::string>& props) {
    std::vector<KripkeStructure> out;
    for (std::size_t n = 1; n <= max_states; ++n) {
        const std::size_t subsets = std::size_t{1} << n;
        const std::size_t labelings = std::size_t{1} << (n * props.size());
        std::size_t succ_choices = 1;
        for (std::size_t q = 0; q < n; ++q) succ_choices *= subsets - 1;
        for (std::size_t lab = 0; lab < labelings; ++lab) {
            for (std::size_t init = 1; init < subsets; ++init) {
                for (std::size_t sc = 0; sc < succ_choices; ++sc) {
                    std::vector<std::set<std::string>> labels(n);
                    for (std::size_t q = 0; q < n; ++q) {
                        for (std::size_t p = 0; p < props.size(); ++p) {
                            if (lab >> (q * props.size() + p) & 1) labels[q].insert(props[p]);
                        }
                    }
                    std::vector<std::size_t> iv;
                    for (std::size_t q = 0; q < n; ++q) {
                        if (init >> q & 1) iv.push_back(q);
                    }
                    KripkeStructure k(n, iv, {kDefaultAction}, labels);
                    std::size_t rest = sc;
                    for (std::size_t q = 0; q < n; ++q) {
                        const std::size_t mask = rest % (subsets - 1) + 1;
                        rest /= subsets - 1;
                        for (std::size_t r = 0; r < n; ++r) {
                            if (mask >> r & 1) k.add_edge(q, kDefaultAction, r);
                        }
                    }
                    out.push_back(std::move(k));
                }
            }
        }
    }
    return out;
}

/// Every path of `len` states from an initial state, as a finite word of labels.
inline std::vector<LassoWord> finite_paths(const KripkeStructure& k, std::size_t len) {
    std::vector<LassoWord> out;
    std::vector<Letter> cur;
    auto rec = [&](auto&& self, std::size_t q) -> void {
        cur.push_back(k.label(q));
        if (cur.size() == len) {
            out.emplace_back(cur, std::vector<Letter>{});
        } else {
            for (auto r : k.successors(q)) self(self, r);
        }
        cur.pop_back();
    };
    k.initial().for_each([&](std::size_t q) { rec(rec, q); });
    return out;
}

/// Every lasso path q0..qm (m < max_len) from `start` closing with an edge qm -> qj.
inline std::vector<LassoWord> lasso_paths(const KripkeStructure& k, std::size_t start, std::size_t max_len) {
    std::vector<LassoWord> out;
    std::vector<std::size_t> path;
    auto rec = [&](auto&& self, std::size_t q) -> void {
        path.push_back(q);
        const auto succ = k.successors(q);
        for (std::size_t j = 0; j < path.size(); ++j) {
            if (std::find(succ.begin(), succ.end(), path[j]) == succ.end()) continue;
            std::vector<Letter> u, v;
            for (std::size_t i = 0; i < path.size(); ++i) (i < j ? u : v).push_back(k.label(path[i]));
            out.emplace_back(std::move(u), std::move(v));
        }
        if (path.size() < max_len) {
            for (auto r : succ) self(self, r);
        }
        path.pop_back();
    };
    rec(rec, start);
    return out;
}

// ---------------------------------------------------------------------------
// LTL_P to LTL (for comparing against lasso evaluation)
// ---------------------------------------------------------------------------

inline FormulaId ltlp_to_ltl(const FormulaDag& src, FormulaId id, FormulaDag& dst) {
    const auto& o = src.op(id);
    auto c = [&](int i) { return ltlp_to_ltl(src, src.child(id, i), dst); };
    switch (o.kind) {
        case OpKind::Atom: return dst.intern(o.param);
        case OpKind::Not: return dst.intern("!", {c(0)});
        case OpKind::And: return dst.intern("&", {c(0), c(1)});
        case OpKind::Or: return dst.intern("|", {c(0), c(1)});
        case OpKind::Inject: return c(0);
        case OpKind::Next: return dst.intern("X", {c(0)});
        case OpKind::Globally: return dst.intern("G", {c(0)});
        case OpKind::Finally: return dst.intern("F", {c(0)});
        case OpKind::Until: return dst.intern("U", {c(0), c(1)});
        default: throw Error(Errc::UnknownOperator, o.name);
    }
}

/// Structure with a single path 0 -> 1 -> ... -> n-1 -> loop_start, and the matching lasso word.
inline std::pair<KripkeStructure, LassoWord> single_cycle(const std::vector<Letter>& labels, std::size_t loop_start) {
    const std::size_t n = labels.size();
    std::vector<std::set<std::string>> ls(labels.begin(), labels.end());
    KripkeStructure k(n, {0}, {kDefaultAction}, ls);
    for (std::size_t q = 0; q + 1 < n; ++q) k.add_edge(q, kDefaultAction, q + 1);
    k.add_edge(n - 1, kDefaultAction, loop_start);
    std::vector<Letter> u(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(loop_start));
    std::vector<Letter> v(labels.begin() + static_cast<std::ptrdiff_t>(loop_start), labels.end());
    return {std::move(k), LassoWord(std::move(u), std::move(v))};
}

// ---------------------------------------------------------------------------
// A 3-state structure where universal-path LTL values are not inductive for !, | and F
// ---------------------------------------------------------------------------

struct InductiveFailure {
    KripkeStructure k;
    // Values as state masks, in the order Xa, b, !Xa, !b, Xa|Xb, b|Xb, FXa, Fb.
    std::vector<unsigned> masks;
};

namespace detail {

struct Tiny {
    unsigned succ[3];
    unsigned ax(unsigned s) const {
        unsigned r = 0;
        for (int q = 0; q < 3; ++q) {
            if ((succ[q] & ~s) == 0) r |= 1u << q;
        }
        return r;
    }
    unsigned af(unsigned s) const {
        unsigned z = s;
        for (;;) {
            const unsigned nz = s | ax(z);
            if (nz == z) return z;
            z = nz;
        }
    }
};

}  // namespace detail

/// Searches all 3-state non-blocking structures over {a, b}; the first hit in enumeration order.
inline std::optional<InductiveFailure> find_inductive_failure() {
    constexpr unsigned all = 7;
    for (unsigned lab = 0; lab < 64; ++lab) {
        unsigned a = 0, b = 0;
        for (int q = 0; q < 3; ++q) {
            if (lab >> (2 * q) & 1) a |= 1u << q;
            if (lab >> (2 * q + 1) & 1) b |= 1u << q;
        }
        if (b != 2) continue;  // b holds exactly at q2
        for (unsigned s0 = 1; s0 <= all; ++s0) {
            for (unsigned s1 = 1; s1 <= all; ++s1) {
                for (unsigned s2 = 1; s2 <= all; ++s2) {
                    const detail::Tiny t{{s0, s1, s2}};
                    const unsigned xa = t.ax(a);
                    const unsigned not_xa = t.ax(all & ~a);
                    const unsigned xa_or_xb = t.ax(a | b);
                    const unsigned b_or_xb = b | t.ax(b);
                    const unsigned fxa = t.ax(t.af(a));
                    const unsigned fb = t.af(b);
                    if (xa != b || (all & ~b) != 5 || xa_or_xb != all) continue;
                    if (not_xa == (all & ~b) || b_or_xb == xa_or_xb || fxa == fb) continue;
                    std::vector<std::set<std::string>> labels(3);
                    for (int q = 0; q < 3; ++q) {
                        if (a >> q & 1) labels[q].insert("a");
                        if (b >> q & 1) labels[q].insert("b");
                    }
                    KripkeStructure k(3, {0}, {kDefaultAction}, labels, {"q1", "q2", "q3"});
                    for (int q = 0; q < 3; ++q) {
                        for (int r = 0; r < 3; ++r) {
                            if (t.succ[q] >> r & 1) k.add_edge(q, kDefaultAction, r);
                        }
                    }
                    return InductiveFailure{std::move(k), {xa, b, not_xa, all & ~b, xa_or_xb, b_or_xb, fxa, fb}};
                }
            }
        }
    }
    return std::nullopt;
}

/// The same eight values recomputed as {q : every lasso path from q satisfies the formula}.
inline std::vector<unsigned> inductive_failure_by_paths(const KripkeStructure& k) {
    FormulaDag d(ltl_signature({"a", "b"}));
    const auto fs = {"X a", "b", "!X a", "!b", "(X a | X b)", "(b | X b)", "F X a", "F b"};
    std::vector<unsigned> out;
    for (const char* text : fs) {
        const FormulaId f = parse(d, text);
        unsigned mask = 0;
        for (std::size_t q = 0; q < k.size(); ++q) {
            bool all = true;
            for (const auto& w : lasso_paths(k, q, 3 * k.size())) all = all && ltl_eval_naive(w, d, f);
            if (all) mask |= 1u << q;
        }
        out.push_back(mask);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Automata oracles
// ---------------------------------------------------------------------------

/// Shortest separating word length by BFS over tuples of reachable-state sets, if any.
inline std::optional<std::size_t> nfa_separation_bfs(const std::vector<Nfa>& pos, const std::vector<Nfa>& neg) {
    std::vector<const Nfa*> all;
    for (const auto& a : pos) all.push_back(&a);
    for (const auto& a : neg) all.push_back(&a);
    using Tuple = std::vector<std::vector<char>>;
    auto accepts = [&](const Tuple& t, std::size_t m) {
        for (std::size_t q = 0; q < t[m].size(); ++q) {
            if (t[m][q] && all[m]->finals().test(q)) return true;
        }
        return false;
    };
    Tuple start;
    for (auto* a : all) {
        std::vector<char> s(a->size(), 0);
        a->initial().for_each([&](std::size_t q) { s[q] = 1; });
        start.push_back(std::move(s));
    }
    std::map<Tuple, std::size_t> dist{{start, 0}};
    std::deque<Tuple> queue{start};
    const auto& alpha = all.front()->alphabet();
    while (!queue.empty()) {
        Tuple t = queue.front();
        queue.pop_front();
        bool sep = true;
        for (std::size_t m = 0; m < all.size() && sep; ++m) sep = accepts(t, m) == (m < pos.size());
        if (sep) return dist[t];
        for (const auto& x : alpha) {
            Tuple nt;
            for (std::size_t m = 0; m < all.size(); ++m) {
                std::vector<char> s(all[m]->size(), 0);
                for (std::size_t q = 0; q < s.size(); ++q) {
                    if (!t[m][q]) continue;
                    for (auto r : all[m]->delta(q, x)) s[r] = 1;
                }
                nt.push_back(std::move(s));
            }
            if (dist.emplace(nt, dist[t] + 1).second) queue.push_back(std::move(nt));
        }
    }
    return std::nullopt;
}

/// Direct run-set simulation of a word.
inline Bits nfa_run(const Nfa& a, const Word& w) {
    std::vector<char> cur(a.size(), 0);
    a.initial().for_each([&](std::size_t q) { cur[q] = 1; });
    for (const auto& x : w) {
        std::vector<char> nxt(a.size(), 0);
        for (std::size_t q = 0; q < a.size(); ++q) {
            if (cur[q]) {
                for (auto r : a.delta(q, x)) nxt[r] = 1;
            }
        }
        cur = std::move(nxt);
    }
    Bits b(a.size());
    for (std::size_t q = 0; q < a.size(); ++q) {
        if (cur[q]) b.set(q);
    }
    return b;
}

/**
 * Acceptance of u.v^omega: build the product of the automaton with the lasso positions and,
 * for each even priority d, look for a strongly connected component of the subgraph of
 * nodes with priority <= d that is reachable, contains a node of priority d and has an edge.
 */
inline bool lasso_accepted_scc(const ParityAutomaton& a, const Word& u, const Word& v) {
    const std::size_t n = a.size(), len = u.size() + v.size(), total = n * len;
    auto at = [&](std::size_t i) { return i < u.size() ? u[i] : v[i - u.size()]; };
    std::vector<std::vector<std::size_t>> succ(total);
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t ni = i + 1 < len ? i + 1 : u.size();
        for (std::size_t q = 0; q < n; ++q) {
            for (auto r : a.delta(q, at(i))) succ[i * n + q].push_back(ni * n + r);
        }
    }
    std::vector<char> reach(total, 0);
    std::vector<std::size_t> stack;
    a.initial().for_each([&](std::size_t q) {
        reach[q] = 1;
        stack.push_back(q);
    });
    while (!stack.empty()) {
        const auto x = stack.back();
        stack.pop_back();
        for (auto y : succ[x]) {
            if (!reach[y]) {
                reach[y] = 1;
                stack.push_back(y);
            }
        }
    }
    auto prio = [&](std::size_t x) { return a.priority(x % n); };
    for (int d : a.levels()) {
        if (d % 2 != 0) continue;
        auto in = [&](std::size_t x) { return reach[x] && prio(x) <= d; };
        // Kosaraju on the restricted graph.
        std::vector<std::vector<std::size_t>> pred(total);
        for (std::size_t x = 0; x < total; ++x) {
            if (!in(x)) continue;
            for (auto y : succ[x]) {
                if (in(y)) pred[y].push_back(x);
            }
        }
        std::vector<char> seen(total, 0);
        std::vector<std::size_t> order;
        for (std::size_t s = 0; s < total; ++s) {
            if (!in(s) || seen[s]) continue;
            std::vector<std::pair<std::size_t, std::size_t>> st{{s, 0}};
            seen[s] = 1;
            while (!st.empty()) {
                auto& [x, i] = st.back();
                if (i < succ[x].size()) {
                    const auto y = succ[x][i++];
                    if (in(y) && !seen[y]) {
                        seen[y] = 1;
                        st.push_back({y, 0});
                    }
                } else {
                    order.push_back(x);
                    st.pop_back();
                }
            }
        }
        std::vector<long> comp(total, -1);
        long c = 0;
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            if (comp[*it] != -1) continue;
            std::vector<std::size_t> st{*it};
            comp[*it] = c;
            while (!st.empty()) {
                const auto x = st.back();
                st.pop_back();
                for (auto y : pred[x]) {
                    if (comp[y] == -1) {
                        comp[y] = c;
                        st.push_back(y);
                    }
                }
            }
            ++c;
        }
        for (std::size_t x = 0; x < total; ++x) {
            if (!in(x) || prio(x) != d) continue;
            for (auto y : succ[x]) {
                if (in(y) && comp[y] == comp[x]) return true;
            }
        }
    }
    return false;
}

/// All words over `alpha` of length lo..hi.
inline std::vector<Word> all_words(const std::vector<std::string>& alpha, std::size_t lo, std::size_t hi) {
    std::vector<Word> out;
    Word cur;
    auto rec = [&](auto&& self) -> void {
        if (cur.size() >= lo) out.push_back(cur);
        if (cur.size() == hi) return;
        for (const auto& x : alpha) {
            cur.push_back(x);
            self(self);
            cur.pop_back();
        }
    };
    rec(rec);
    return out;
}

// ---------------------------------------------------------------------------
// Random samples
// ---------------------------------------------------------------------------

/// Up to 3 structures over {p} and action a, total states <= 6, random split into P and N.
inline std::pair<std::vector<KripkeStructure>, std::vector<KripkeStructure>> random_ml_sample(Rng& rng) {
    const std::size_t count = uniform(rng, 1, 3);
    std::size_t budget = 6;
    std::vector<KripkeStructure> p, n;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t left = count - i - 1;
        const std::size_t sz = uniform(rng, 1, std::min<std::size_t>(3, budget - left));
        budget -= sz;
        auto k = random_kripke(rng, sz, {"p"}, {"a"}, 0.45);
        (coin(rng) ? p : n).push_back(std::move(k));
    }
    return {std::move(p), std::move(n)};
}

/// The monotone formula ops over a prime-sample word signature for a lattice.
inline std::vector<std::string> monotone_ops(Lattice l) {
    return {"x", "y", l == Lattice::And ? "&" : "|", "X", "F", "G"};
}

}  // namespace seplearn::testing

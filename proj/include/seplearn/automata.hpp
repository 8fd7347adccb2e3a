#pragma once

#include "seplearn/bigint.hpp"
#include "seplearn/bits.hpp"
#include "seplearn/engine.hpp"
#include "seplearn/error.hpp"
#include "seplearn/formula.hpp"
#include "seplearn/signature.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace seplearn {

using Word = std::vector<std::string>;

/// States, alphabet, initial states and transitions shared by both automaton kinds.
class Automaton {
public:
    Automaton() = default;
    Automaton(std::size_t n, std::vector<std::string> alphabet, const std::vector<std::size_t>& initial)
        : n_(n), alphabet_(std::move(alphabet)), initial_(n) {
        std::sort(alphabet_.begin(), alphabet_.end());
        alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
        if (alphabet_.empty()) throw Error(Errc::EmptyAlphabet, "automaton alphabet is empty");
        for (auto q : initial) {
            if (q >= n_) throw Error(Errc::InvalidModel, "initial state out of range");
            initial_.set(q);
        }
        delta_.assign(alphabet_.size(), std::vector<std::vector<std::size_t>>(n_));
    }

    void add_edge(std::size_t q, const std::string& a, std::size_t r) {
        if (q >= n_ || r >= n_) throw Error(Errc::InvalidModel, "transition endpoint out of range");
        auto& v = delta_[letter_index(a)][q];
        if (std::find(v.begin(), v.end(), r) == v.end()) {
            v.push_back(r);
            std::sort(v.begin(), v.end());
        }
    }

    std::size_t size() const noexcept { return n_; }
    const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
    const Bits& initial() const noexcept { return initial_; }
    std::size_t letter_index(const std::string& a) const {
        auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), a);
        if (it == alphabet_.end() || *it != a) throw Error(Errc::UnknownLetter, a);
        return static_cast<std::size_t>(it - alphabet_.begin());
    }
    const std::vector<std::size_t>& delta(std::size_t q, std::size_t letter) const { return delta_[letter][q]; }
    const std::vector<std::size_t>& delta(std::size_t q, const std::string& a) const {
        return delta_[letter_index(a)][q];
    }

    friend bool operator==(const Automaton&, const Automaton&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::string> alphabet_;
    Bits initial_;
    std::vector<std::vector<std::vector<std::size_t>>> delta_;  // [letter][state]
};

class Nfa : public Automaton {
public:
    Nfa() = default;
    Nfa(std::size_t n, std::vector<std::string> alphabet, const std::vector<std::size_t>& initial,
        const std::vector<std::size_t>& finals)
        : Automaton(n, std::move(alphabet), initial), final_(n) {
        for (auto q : finals) {
            if (q >= n) throw Error(Errc::InvalidModel, "final state out of range");
            final_.set(q);
        }
    }
    const Bits& finals() const noexcept { return final_; }
    friend bool operator==(const Nfa&, const Nfa&) = default;

private:
    Bits final_;
};

class ParityAutomaton : public Automaton {
public:
    ParityAutomaton() = default;
    ParityAutomaton(std::size_t n, std::vector<std::string> alphabet, const std::vector<std::size_t>& initial,
                    std::vector<int> priority)
        : Automaton(n, std::move(alphabet), initial), priority_(std::move(priority)) {
        if (priority_.size() != n) throw Error(Errc::InvalidModel, "priority must cover every state");
        for (int p : priority_) {
            if (p < 0) throw Error(Errc::InvalidModel, "negative priority");
        }
        levels_ = priority_;
        std::sort(levels_.begin(), levels_.end());
        levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
    }
    int priority(std::size_t q) const { return priority_.at(q); }
    const std::vector<int>& priorities() const noexcept { return priority_; }
    /// pi(Q) in ascending order.
    const std::vector<int>& levels() const noexcept { return levels_; }
    std::size_t level_of(int p) const {
        return static_cast<std::size_t>(std::lower_bound(levels_.begin(), levels_.end(), p) - levels_.begin());
    }
    /// The underlying transition system with no final states.
    Nfa as_nfa() const {
        std::vector<std::size_t> init;
        initial().for_each([&](std::size_t q) { init.push_back(q); });
        Nfa a(size(), alphabet(), init, {});
        for (std::size_t l = 0; l < alphabet().size(); ++l) {
            for (std::size_t q = 0; q < size(); ++q) {
                for (auto r : delta(q, l)) a.add_edge(q, alphabet()[l], r);
            }
        }
        return a;
    }
    friend bool operator==(const ParityAutomaton&, const ParityAutomaton&) = default;

private:
    std::vector<int> priority_;
    std::vector<int> levels_;
};

template <typename A>
void check_alphabets(const std::vector<A>& as) {
    for (const auto& a : as) {
        if (a.alphabet() != as.front().alphabet()) throw Error(Errc::AlphabetMismatch, "automata alphabets differ");
    }
}

/// Reads the word off a chain formula of Epsilon/Letter seeds and Append steps.
inline Word word_of(const FormulaDag& dag, FormulaId id) {
    Word w;
    for (;;) {
        const auto& o = dag.op(id);
        if (o.kind == OpKind::Epsilon) break;
        w.push_back(o.param);
        if (o.kind == OpKind::Letter) break;
        id = dag.child(id, 0);
    }
    std::reverse(w.begin(), w.end());
    return w;
}

inline std::string word_text(const Word& w) {
    std::string s;
    for (const auto& a : w) s += a;
    return s.empty() ? "eps" : s;
}

// ---------------------------------------------------------------------------
// Finite words: values are reachable state sets
// ---------------------------------------------------------------------------

inline LogicSignature fw_signature(const std::vector<std::string>& alphabet) {
    if (alphabet.empty()) throw Error(Errc::EmptyAlphabet, "empty alphabet");
    std::vector<OperatorDecl> ops;
    ops.push_back({"eps", OpKind::Epsilon, "eps", 0, 0, {}, "", 0});
    for (const auto& a : alphabet) ops.push_back({"." + a, OpKind::Append, "." + a, 1, 0, {{0}}, a, 0});
    return LogicSignature({"word"}, {0}, std::move(ops));
}

inline Bits nfa_extend(const Automaton& a, const Bits& s, const std::string& letter) {
    const std::size_t l = a.letter_index(letter);
    Bits r(a.size());
    s.for_each([&](std::size_t q) {
        for (auto x : a.delta(q, l)) r.set(x);
    });
    return r;
}

/// Direct forward simulation.
inline bool nfa_accepts(const Nfa& a, const Word& w) {
    std::set<std::size_t> cur;
    a.initial().for_each([&](std::size_t q) { cur.insert(q); });
    for (const auto& letter : w) {
        const std::size_t l = a.letter_index(letter);
        std::set<std::size_t> nxt;
        for (auto q : cur) nxt.insert(a.delta(q, l).begin(), a.delta(q, l).end());
        cur = std::move(nxt);
    }
    for (auto q : cur) {
        if (a.finals().test(q)) return true;
    }
    return false;
}

class FwInstance : public SampleBase<Nfa> {
public:
    using value_type = Bits;

    FwInstance(std::vector<Nfa> positives, std::vector<Nfa> negatives)
        : SampleBase(std::move(positives), std::move(negatives)) {
        if (models_.empty()) throw Error(Errc::InvalidArgument, "no automata");
        check_alphabets(models_);
        sig_ = fw_signature(models_.front().alphabet());
    }

    const LogicSignature& signature() const noexcept { return sig_; }
    std::vector<OpIndex> relevant_operators() const {
        std::vector<OpIndex> r;
        for (OpIndex i = 0; i < sig_.size(); ++i) r.push_back(i);
        return r;
    }
    Bits atom(std::size_t m, const OperatorDecl&) const { return models_[m].initial(); }
    Bits apply(std::size_t m, const OperatorDecl& o, const Bits& s) const { return nfa_extend(models_[m], s, o.param); }
    Bits apply(std::size_t, const OperatorDecl& o, const Bits&, const Bits&) const {
        throw Error(Errc::UnknownOperator, o.name);
    }
    bool sat(std::size_t m, const Bits& v) const { return v.intersects(models_[m].finals()); }
    BigInt value_space_size(std::size_t m, TypeId) const { return pow2(models_[m].size()); }
    bool model_check(std::size_t m, const FormulaDag& dag, FormulaId id) const {
        return nfa_accepts(models_[m], word_of(dag, id));
    }

private:
    LogicSignature sig_;
};

struct NfaSeparation {
    std::optional<Word> word;
    std::size_t total_states = 0;
    std::size_t entries = 0;
    BigInt bound = 0;
};

/// A word accepted by every positive and rejected by every negative automaton, if one exists.
inline NfaSeparation nfa_separate(const std::vector<Nfa>& positives, const std::vector<Nfa>& negatives,
                                  std::optional<std::size_t> budget = std::nullopt) {
    FwInstance inst(positives, negatives);
    NfaSeparation r;
    for (const auto& a : inst.models()) r.total_states += a.size();
    const auto res = learn(inst, LearnOptions{budget});
    r.entries = res.entries;
    r.bound = res.bound;
    if (res.verdict == Verdict::Inconclusive) throw Error(Errc::BudgetExceeded, "finite-word closure truncated");
    if (res.verdict == Verdict::Separable) r.word = word_of(*res.dag, res.formula);
    return r;
}

// ---------------------------------------------------------------------------
// Periodic words: values are priority summaries Q -> 2^(Q x pi(Q))
// ---------------------------------------------------------------------------

/// Bit layout of a summary: (q, q2, level) -> (q * n + q2) * levels + level.
inline std::size_t summary_bit(const ParityAutomaton& a, std::size_t q, std::size_t q2, std::size_t level) {
    return (q * a.size() + q2) * a.levels().size() + level;
}

inline std::size_t summary_size(const ParityAutomaton& a) { return a.size() * a.size() * a.levels().size(); }

/// h_a(q) = {(q2, max(pi(q), pi(q2))) : q2 in delta(q, a)}.
inline Bits pw_seed(const ParityAutomaton& a, const std::string& letter) {
    const std::size_t l = a.letter_index(letter);
    Bits h(summary_size(a));
    for (std::size_t q = 0; q < a.size(); ++q) {
        for (auto q2 : a.delta(q, l))
            h.set(summary_bit(a, q, q2, a.level_of(std::max(a.priority(q), a.priority(q2)))));
    }
    return h;
}

/// h'(q) = {(q2, max(pi(q2), n)) : (q1, n) in h(q), q2 in delta(q1, a)}.
inline Bits pw_extend(const ParityAutomaton& a, const Bits& h, const std::string& letter) {
    const std::size_t l = a.letter_index(letter);
    const std::size_t n = a.size(), nl = a.levels().size();
    Bits r(summary_size(a));
    h.for_each([&](std::size_t bit) {
        const std::size_t lev = bit % nl;
        const std::size_t q1 = (bit / nl) % n;
        const std::size_t q = bit / nl / n;
        for (auto q2 : a.delta(q1, l))
            r.set(summary_bit(a, q, q2, a.level_of(std::max(a.priority(q2), a.levels()[lev]))));
    });
    return r;
}

struct SummaryEdge {
    std::size_t from, to;
    int label;
};

inline std::vector<SummaryEdge> summary_edges(const ParityAutomaton& a, const Bits& h) {
    const std::size_t n = a.size(), nl = a.levels().size();
    std::vector<SummaryEdge> e;
    h.for_each([&](std::size_t bit) { e.push_back({bit / nl / n, (bit / nl) % n, a.levels()[bit % nl]}); });
    return e;
}

/// Labels n for which some infinite path from `start` has n as its largest recurring edge label.
inline std::set<int> achievable_limsups(const ParityAutomaton& a, const Bits& start, const Bits& h) {
    const std::size_t n = a.size();
    const auto edges = summary_edges(a, h);
    auto reach = [&](const Bits& from, int max_label) {
        Bits seen = from;
        std::deque<std::size_t> queue;
        from.for_each([&](std::size_t q) { queue.push_back(q); });
        while (!queue.empty()) {
            const auto x = queue.front();
            queue.pop_front();
            for (const auto& e : edges) {
                if (e.from == x && e.label <= max_label && !seen.test(e.to)) {
                    seen.set(e.to);
                    queue.push_back(e.to);
                }
            }
        }
        return seen;
    };
    const Bits live = reach(start, std::numeric_limits<int>::max());
    std::set<int> out;
    for (const auto& e : edges) {
        if (out.count(e.label) || !live.test(e.from)) continue;
        Bits one(n);
        one.set(e.to);
        // The edge lies on a cycle of the label-bounded graph iff its target reaches its source there.
        if (reach(one, e.label).test(e.from)) out.insert(e.label);
    }
    return out;
}

inline bool parity_accepts_summary(const ParityAutomaton& a, const Bits& start, const Bits& h) {
    for (int l : achievable_limsups(a, start, h)) {
        if (l % 2 == 0) return true;
    }
    return false;
}

/// Summary of v computed by enumerating every run on v.
inline Bits pw_summary_bruteforce(const ParityAutomaton& a, const Word& v) {
    Bits h(summary_size(a));
    std::vector<std::size_t> ls;
    for (const auto& x : v) ls.push_back(a.letter_index(x));
    auto dfs = [&](auto&& self, std::size_t origin, std::size_t q, std::size_t i, int mx) -> void {
        if (i == ls.size()) {
            h.set(summary_bit(a, origin, q, a.level_of(mx)));
            return;
        }
        for (auto r : a.delta(q, ls[i])) self(self, origin, r, i + 1, std::max(mx, a.priority(r)));
    };
    if (!v.empty()) {
        for (std::size_t q = 0; q < a.size(); ++q) dfs(dfs, q, q, 0, a.priority(q));
    }
    return h;
}

/// Acceptance of u.v^omega via the product of the automaton with the lasso's positions.
inline bool parity_accepts_lasso(const ParityAutomaton& a, const Word& u, const Word& v) {
    if (v.empty()) throw Error(Errc::InvalidArgument, "period must be nonempty");
    const std::size_t len = u.size() + v.size(), n = a.size();
    auto letter = [&](std::size_t i) { return a.letter_index(i < u.size() ? u[i] : v[i - u.size()]); };
    auto next_pos = [&](std::size_t i) { return i + 1 < len ? i + 1 : u.size(); };
    auto node = [&](std::size_t q, std::size_t i) { return i * n + q; };
    const std::size_t total = len * n;
    std::vector<std::vector<std::size_t>> succ(total);
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t q = 0; q < n; ++q) {
            for (auto r : a.delta(q, letter(i))) succ[node(q, i)].push_back(node(r, next_pos(i)));
        }
    }
    auto prio = [&](std::size_t x) { return a.priority(x % n); };
    std::vector<char> reachable(total, 0);
    std::deque<std::size_t> queue;
    a.initial().for_each([&](std::size_t q) {
        reachable[node(q, 0)] = 1;
        queue.push_back(node(q, 0));
    });
    while (!queue.empty()) {
        const auto x = queue.front();
        queue.pop_front();
        for (auto y : succ[x]) {
            if (!reachable[y]) {
                reachable[y] = 1;
                queue.push_back(y);
            }
        }
    }
    // Some reachable node of even priority p returns to itself through nodes of priority <= p.
    for (std::size_t x = 0; x < total; ++x) {
        if (!reachable[x] || prio(x) % 2 != 0) continue;
        std::vector<char> seen(total, 0);
        std::deque<std::size_t> q2;
        for (auto y : succ[x]) {
            if (prio(y) <= prio(x) && !seen[y]) {
                seen[y] = 1;
                q2.push_back(y);
            }
        }
        while (!q2.empty()) {
            const auto y = q2.front();
            q2.pop_front();
            if (y == x) return true;
            for (auto z : succ[y]) {
                if (prio(z) <= prio(x) && !seen[z]) {
                    seen[z] = 1;
                    q2.push_back(z);
                }
            }
        }
    }
    return false;
}

inline LogicSignature pw_signature(const std::vector<std::string>& alphabet) {
    if (alphabet.empty()) throw Error(Errc::EmptyAlphabet, "empty alphabet");
    std::vector<OperatorDecl> ops;
    for (const auto& a : alphabet) ops.push_back({a, OpKind::Letter, a, 0, 0, {}, a, 0});
    for (const auto& a : alphabet) ops.push_back({"." + a, OpKind::Append, "." + a, 1, 0, {{0}}, a, 0});
    return LogicSignature({"period"}, {0}, std::move(ops));
}

/// Separation of the periodic words v^omega; values are priority summaries.
class PwInstance : public SampleBase<ParityAutomaton> {
public:
    using value_type = Bits;

    PwInstance(std::vector<ParityAutomaton> positives, std::vector<ParityAutomaton> negatives)
        : SampleBase(std::move(positives), std::move(negatives)) {
        if (models_.empty()) throw Error(Errc::InvalidArgument, "no automata");
        check_alphabets(models_);
        sig_ = pw_signature(models_.front().alphabet());
    }

    const LogicSignature& signature() const noexcept { return sig_; }
    std::vector<OpIndex> relevant_operators() const {
        std::vector<OpIndex> r;
        for (OpIndex i = 0; i < sig_.size(); ++i) r.push_back(i);
        return r;
    }
    Bits atom(std::size_t m, const OperatorDecl& o) const { return pw_seed(models_[m], o.param); }
    Bits apply(std::size_t m, const OperatorDecl& o, const Bits& h) const { return pw_extend(models_[m], h, o.param); }
    Bits apply(std::size_t, const OperatorDecl& o, const Bits&, const Bits&) const {
        throw Error(Errc::UnknownOperator, o.name);
    }
    bool sat(std::size_t m, const Bits& h) const {
        return parity_accepts_summary(models_[m], models_[m].initial(), h);
    }
    /// 2^(|Q|^2 * |pi(Q)|)
    BigInt value_space_size(std::size_t m, TypeId) const { return pow2(summary_size(models_[m])); }
    bool model_check(std::size_t m, const FormulaDag& dag, FormulaId id) const {
        return parity_accepts_lasso(models_[m], {}, word_of(dag, id));
    }

private:
    LogicSignature sig_;
};

struct ParitySeparation {
    std::optional<std::pair<Word, Word>> lasso;  // (u, v)
    std::size_t n = 0;                           // sum of |Q|
    std::size_t k = 0;                           // sum of |Q|^2 * |pi(Q)|
    std::size_t prefix_entries = 0;
    std::size_t period_entries = 0;
};

/**
 * @brief A lasso u.v^omega accepted by every positive and rejected by every negative parity automaton.
 *
 * Prefix candidates are the reachable-state tuples of the finite-word closure, period
 * candidates the summary tuples of the periodic-word closure. A pair (X, h) separates when,
 * for each automaton, some state of X has an even achievable lim-sup under h exactly for the
 * positives.
 */
inline ParitySeparation parity_separate(const std::vector<ParityAutomaton>& positives,
                                        const std::vector<ParityAutomaton>& negatives,
                                        std::optional<std::size_t> budget = std::nullopt) {
    std::vector<ParityAutomaton> all = positives;
    all.insert(all.end(), negatives.begin(), negatives.end());
    if (all.empty()) throw Error(Errc::InvalidArgument, "no automata");
    check_alphabets(all);

    ParitySeparation r;
    std::vector<Nfa> nfas;
    for (const auto& a : all) {
        r.n += a.size();
        r.k += summary_size(a);
        nfas.push_back(a.as_nfa());
    }
    const FwInstance fw(nfas, {});
    const PwInstance pw(positives, negatives);
    const auto prefixes = closure(fw, budget);
    const auto periods = closure(pw, budget);
    r.prefix_entries = prefixes.size();
    r.period_entries = periods.size();

    const std::size_t npos = positives.size();
    for (std::size_t j = 0; j < periods.size(); ++j) {
        std::vector<Bits> good;  // per automaton: states with an even lim-sup under h
        for (std::size_t m = 0; m < all.size(); ++m) {
            Bits g(all[m].size());
            for (std::size_t q = 0; q < all[m].size(); ++q) {
                Bits s(all[m].size());
                s.set(q);
                g.set(q, parity_accepts_summary(all[m], s, periods[j].values[m]));
            }
            good.push_back(std::move(g));
        }
        for (std::size_t i = 0; i < prefixes.size(); ++i) {
            bool ok = true;
            for (std::size_t m = 0; m < all.size() && ok; ++m)
                ok = prefixes[i].values[m].intersects(good[m]) == (m < npos);
            if (!ok) continue;
            FormulaDag du(fw.signature()), dv(pw.signature());
            const Word u = word_of(du, witness(prefixes, i, du));
            const Word v = word_of(dv, witness(periods, j, dv));
            for (std::size_t m = 0; m < all.size(); ++m) {
                if (parity_accepts_lasso(all[m], u, v) != (m < npos))
                    throw std::logic_error("lasso failed independent acceptance check");
            }
            r.lasso = std::make_pair(u, v);
            return r;
        }
    }
    if (prefixes.truncated() || periods.truncated()) throw Error(Errc::BudgetExceeded, "closure truncated");
    return r;
}

}  // namespace seplearn

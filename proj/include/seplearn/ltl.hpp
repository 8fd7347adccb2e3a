#pragma once

#include "seplearn/bigint.hpp"
#include "seplearn/bits.hpp"
#include "seplearn/engine.hpp"
#include "seplearn/formula.hpp"
#include "seplearn/lasso.hpp"
#include "seplearn/signature.hpp"

#include <map>
#include <string>
#include <vector>

namespace seplearn {

inline std::string dual_name(const std::string& p) { return p + "_bar"; }

/// Single final type; atoms (optionally dual atoms p_bar), !, &, |, X, F, G, U.
inline LogicSignature ltl_signature(const std::vector<std::string>& props, bool with_duals = false) {
    if (props.empty()) throw Error(Errc::EmptyAlphabet, "LTL signature needs propositions");
    std::vector<OperatorDecl> ops;
    for (const auto& p : props) ops.push_back({p, OpKind::Atom, p, 0, 0, {}, p, 0});
    if (with_duals) {
        for (const auto& p : props) ops.push_back({dual_name(p), OpKind::DualAtom, dual_name(p), 0, 0, {}, p, 0});
    }
    ops.push_back({"!", OpKind::Not, "!", 1, 0, {{0}}, "", 0});
    ops.push_back({"&", OpKind::And, "&", 2, 0, {{0}, {0}}, "", 0});
    ops.push_back({"|", OpKind::Or, "|", 2, 0, {{0}, {0}}, "", 0});
    ops.push_back({"X", OpKind::Next, "X", 1, 0, {{0}}, "", 0});
    ops.push_back({"F", OpKind::Finally, "F", 1, 0, {{0}}, "", 0});
    ops.push_back({"G", OpKind::Globally, "G", 1, 0, {{0}}, "", 0});
    ops.push_back({"U", OpKind::Until, "U", 2, 0, {{0}, {0}}, "", 0});
    return LogicSignature({"path"}, {0}, std::move(ops));
}

inline Bits ltl_sem_atom(const LassoWord& w, const OperatorDecl& o) {
    Bits r(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const bool has = w.at(i).count(o.param) != 0;
        r.set(i, o.kind == OpKind::DualAtom ? !has : has);
    }
    return r;
}

inline Bits ltl_apply(const PositionTables& t, const OperatorDecl& o, const Bits& s) {
    const std::size_t n = t.size();
    Bits r(n);
    switch (o.kind) {
        case OpKind::Not: return ~s;
        case OpKind::Next:
            for (std::size_t i = 0; i < n; ++i) {
                const auto j = t.succ(i);
                r.set(i, j && s.test(*j));
            }
            return r;
        case OpKind::Finally:
            for (std::size_t i = 0; i < n; ++i) r.set(i, t.after(i).intersects(s));
            return r;
        case OpKind::Globally:
            for (std::size_t i = 0; i < n; ++i) r.set(i, t.after(i).subset_of(s));
            return r;
        default: throw Error(Errc::UnknownOperator, "not a unary LTL operator: " + o.name);
    }
}

inline Bits ltl_apply(const PositionTables& t, const OperatorDecl& o, const Bits& a, const Bits& b) {
    switch (o.kind) {
        case OpKind::And: return a & b;
        case OpKind::Or: return a | b;
        case OpKind::Until: {
            Bits r(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) {
                bool ok = false;
                (t.after(i) & b).for_each([&](std::size_t k) { ok = ok || t.between(i, k).subset_of(a); });
                r.set(i, ok);
            }
            return r;
        }
        default: throw Error(Errc::UnknownOperator, "not a binary LTL operator: " + o.name);
    }
}

inline Bits ltl_apply(const LassoWord& w, const OperatorDecl& o, const Bits& s) {
    return ltl_apply(PositionTables(w), o, s);
}
inline Bits ltl_apply(const LassoWord& w, const OperatorDecl& o, const Bits& a, const Bits& b) {
    return ltl_apply(PositionTables(w), o, a, b);
}

inline bool ltl_sat(const LassoWord&, const Bits& s) { return s.size() > 0 && s.test(0); }

namespace detail {

// Evaluates suffixes w[i:] by walking the word itself; no position tables involved.
class LtlNaiveEvaluator {
public:
    LtlNaiveEvaluator(const LassoWord& w, const FormulaDag& dag) : w_(w), dag_(dag) {}

    bool at(FormulaId id, std::size_t i) {
        const auto key = std::make_pair(id, i);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const auto& o = dag_.op(id);
        bool r = false;
        switch (o.kind) {
            case OpKind::Atom: r = w_.at(i).count(o.param) != 0; break;
            case OpKind::DualAtom: r = w_.at(i).count(o.param) == 0; break;
            case OpKind::Not: r = !at(dag_.child(id, 0), i); break;
            case OpKind::And: r = at(dag_.child(id, 0), i) && at(dag_.child(id, 1), i); break;
            case OpKind::Or: r = at(dag_.child(id, 0), i) || at(dag_.child(id, 1), i); break;
            case OpKind::Next: {
                const auto j = w_.next(i);
                r = j && at(dag_.child(id, 0), *j);
                break;
            }
            case OpKind::Finally:
                r = false;
                walk(i, [&](std::size_t j) {
                    if (at(dag_.child(id, 0), j)) r = true;
                    return !r;
                });
                break;
            case OpKind::Globally:
                r = true;
                walk(i, [&](std::size_t j) {
                    if (!at(dag_.child(id, 0), j)) r = false;
                    return r;
                });
                break;
            case OpKind::Until:
                r = false;
                walk(i, [&](std::size_t j) {
                    if (at(dag_.child(id, 1), j)) {
                        r = true;
                        return false;
                    }
                    return at(dag_.child(id, 0), j);
                });
                break;
            default: throw Error(Errc::UnknownOperator, "not an LTL operator: " + o.name);
        }
        memo_.emplace(key, r);
        return r;
    }

private:
    // Visits i, next(i), ... until the word ends, a position repeats, or f returns false.
    template <typename F>
    void walk(std::size_t i, F&& f) const {
        std::vector<char> seen(w_.size(), 0);
        std::optional<std::size_t> j = i;
        while (j && !seen[*j]) {
            seen[*j] = 1;
            if (!f(*j)) return;
            j = w_.next(*j);
        }
    }

    const LassoWord& w_;
    const FormulaDag& dag_;
    std::map<std::pair<FormulaId, std::size_t>, bool> memo_;
};

}  // namespace detail

inline bool ltl_eval_naive(const LassoWord& w, const FormulaDag& dag, FormulaId id, std::size_t pos = 0) {
    return detail::LtlNaiveEvaluator(w, dag).at(id, pos);
}

inline Bits ltl_positions_naive(const LassoWord& w, const FormulaDag& dag, FormulaId id) {
    detail::LtlNaiveEvaluator ev(w, dag);
    Bits r(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) r.set(i, ev.at(id, i));
    return r;
}

class LtlInstance : public SampleBase<LassoWord> {
public:
    using value_type = Bits;

    LtlInstance(LogicSignature sig, std::vector<LassoWord> positives, std::vector<LassoWord> negatives)
        : SampleBase(std::move(positives), std::move(negatives)), sig_(std::move(sig)) {
        for (const auto& w : models_) tables_.emplace_back(w);
    }

    const LogicSignature& signature() const noexcept { return sig_; }
    std::vector<OpIndex> relevant_operators() const {
        std::vector<OpIndex> r;
        for (OpIndex i = 0; i < sig_.size(); ++i) r.push_back(i);
        return r;
    }
    Bits atom(std::size_t m, const OperatorDecl& o) const { return ltl_sem_atom(models_[m], o); }
    Bits apply(std::size_t m, const OperatorDecl& o, const Bits& a) const { return ltl_apply(tables_[m], o, a); }
    Bits apply(std::size_t m, const OperatorDecl& o, const Bits& a, const Bits& b) const {
        return ltl_apply(tables_[m], o, a, b);
    }
    bool sat(std::size_t m, const Bits& v) const { return ltl_sat(models_[m], v); }
    BigInt value_space_size(std::size_t m, TypeId) const { return pow2(models_[m].size()); }
    bool model_check(std::size_t m, const FormulaDag& dag, FormulaId id) const {
        return ltl_eval_naive(models_[m], dag, id);
    }
    Bits independent_value(std::size_t m, const FormulaDag& dag, FormulaId id) const {
        return ltl_positions_naive(models_[m], dag, id);
    }

private:
    LogicSignature sig_;
    std::vector<PositionTables> tables_;
};

}  // namespace seplearn

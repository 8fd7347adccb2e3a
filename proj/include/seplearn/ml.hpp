#pragma once

#include "seplearn/bigint.hpp"
#include "seplearn/bits.hpp"
#include "seplearn/engine.hpp"
#include "seplearn/formula.hpp"
#include "seplearn/kripke.hpp"
#include "seplearn/signature.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace seplearn {

/// Single final type; atoms, !, [a], <a>>=k for k <= max_k, &, |.
inline LogicSignature ml_signature(const std::vector<std::string>& props, const std::vector<std::string>& actions,
                                   int max_k) {
    if (props.empty() || actions.empty()) throw Error(Errc::EmptyAlphabet, "modal signature needs propositions and actions");
    if (max_k < 1) throw Error(Errc::InvalidK, "max_k must be at least 1");
    std::vector<OperatorDecl> ops;
    for (const auto& p : props) ops.push_back({p, OpKind::Atom, p, 0, 0, {}, p, 0});
    ops.push_back({"!", OpKind::Not, "!", 1, 0, {{0}}, "", 0});
    for (const auto& a : actions) {
        ops.push_back({"[" + a + "]", OpKind::Box, "[" + a + "]", 1, 0, {{0}}, a, 0});
        for (int k = 1; k <= max_k; ++k) {
            const std::string s = "<" + a + ">>=" + std::to_string(k);
            ops.push_back({s, OpKind::Diamond, s, 1, 0, {{0}}, a, k});
        }
    }
    ops.push_back({"&", OpKind::And, "&", 2, 0, {{0}, {0}}, "", 0});
    ops.push_back({"|", OpKind::Or, "|", 2, 0, {{0}, {0}}, "", 0});
    return LogicSignature({"state"}, {0}, std::move(ops));
}

inline Bits ml_sem_atom(const KripkeStructure& k, const std::string& p) { return k.prop_set(p); }

inline Bits ml_apply(const KripkeStructure& k, const OperatorDecl& o, const Bits& s) {
    Bits r(k.size());
    switch (o.kind) {
        case OpKind::Not: return ~s;
        case OpKind::Box:
            for (std::size_t q = 0; q < k.size(); ++q) {
                const auto& d = k.successors(q, o.param);
                r.set(q, std::all_of(d.begin(), d.end(), [&](std::size_t x) { return s.test(x); }));
            }
            return r;
        case OpKind::Diamond:
            for (std::size_t q = 0; q < k.size(); ++q) {
                const auto& d = k.successors(q, o.param);
                const auto c = std::count_if(d.begin(), d.end(), [&](std::size_t x) { return s.test(x); });
                r.set(q, c >= o.k);
            }
            return r;
        default: throw Error(Errc::UnknownOperator, "not a unary modal operator: " + o.name);
    }
}

inline Bits ml_apply(const KripkeStructure&, const OperatorDecl& o, const Bits& a, const Bits& b) {
    switch (o.kind) {
        case OpKind::And: return a & b;
        case OpKind::Or: return a | b;
        default: throw Error(Errc::UnknownOperator, "not a binary modal operator: " + o.name);
    }
}

inline bool ml_sat(const KripkeStructure& k, const Bits& s) { return k.initial().subset_of(s); }

namespace detail {

// Per-state satisfaction following the inductive definition directly.
class MlStateEvaluator {
public:
    MlStateEvaluator(const KripkeStructure& k, const FormulaDag& dag) : k_(k), dag_(dag) {}

    bool holds(FormulaId id, std::size_t q) {
        const auto key = std::make_pair(id, q);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const auto& o = dag_.op(id);
        bool r = false;
        switch (o.kind) {
            case OpKind::Atom: r = k_.label(q).count(o.param) != 0; break;
            case OpKind::Not: r = !holds(dag_.child(id, 0), q); break;
            case OpKind::And: r = holds(dag_.child(id, 0), q) && holds(dag_.child(id, 1), q); break;
            case OpKind::Or: r = holds(dag_.child(id, 0), q) || holds(dag_.child(id, 1), q); break;
            case OpKind::Box: {
                r = true;
                for (auto x : k_.successors(q, o.param)) r = r && holds(dag_.child(id, 0), x);
                break;
            }
            case OpKind::Diamond: {
                int c = 0;
                for (auto x : k_.successors(q, o.param)) c += holds(dag_.child(id, 0), x) ? 1 : 0;
                r = c >= o.k;
                break;
            }
            default: throw Error(Errc::UnknownOperator, "not a modal operator: " + o.name);
        }
        memo_.emplace(key, r);
        return r;
    }

private:
    const KripkeStructure& k_;
    const FormulaDag& dag_;
    std::map<std::pair<FormulaId, std::size_t>, bool> memo_;
};

}  // namespace detail

/// {q : q satisfies phi}, computed state by state.
inline Bits ml_states(const KripkeStructure& k, const FormulaDag& dag, FormulaId id) {
    detail::MlStateEvaluator ev(k, dag);
    Bits r(k.size());
    for (std::size_t q = 0; q < k.size(); ++q) r.set(q, ev.holds(id, q));
    return r;
}

inline bool ml_modelcheck(const KripkeStructure& k, const FormulaDag& dag, FormulaId id) {
    detail::MlStateEvaluator ev(k, dag);
    bool ok = true;
    k.initial().for_each([&](std::size_t q) { ok = ok && ev.holds(id, q); });
    return ok;
}

/// All operators of `sig`, except diamonds whose threshold exceeds the largest state count.
inline std::vector<OpIndex> ml_relevant_operators(const LogicSignature& sig, const std::vector<KripkeStructure>& sample) {
    std::size_t maxq = 0;
    for (const auto& k : sample) maxq = std::max(maxq, k.size());
    std::vector<OpIndex> r;
    for (OpIndex i = 0; i < sig.size(); ++i) {
        const auto& o = sig.op(i);
        if (o.kind == OpKind::Diamond && static_cast<std::size_t>(o.k) > maxq) continue;
        r.push_back(i);
    }
    return r;
}

class MlInstance : public SampleBase<KripkeStructure> {
public:
    using value_type = Bits;

    MlInstance(LogicSignature sig, std::vector<KripkeStructure> positives, std::vector<KripkeStructure> negatives)
        : SampleBase(std::move(positives), std::move(negatives)), sig_(std::move(sig)) {}

    const LogicSignature& signature() const noexcept { return sig_; }
    std::vector<OpIndex> relevant_operators() const { return ml_relevant_operators(sig_, models_); }
    Bits atom(std::size_t m, const OperatorDecl& o) const { return ml_sem_atom(models_[m], o.param); }
    Bits apply(std::size_t m, const OperatorDecl& o, const Bits& a) const { return ml_apply(models_[m], o, a); }
    Bits apply(std::size_t m, const OperatorDecl& o, const Bits& a, const Bits& b) const {
        return ml_apply(models_[m], o, a, b);
    }
    bool sat(std::size_t m, const Bits& v) const { return ml_sat(models_[m], v); }
    BigInt value_space_size(std::size_t m, TypeId) const { return pow2(models_[m].size()); }
    bool model_check(std::size_t m, const FormulaDag& dag, FormulaId id) const {
        return ml_modelcheck(models_[m], dag, id);
    }
    Bits independent_value(std::size_t m, const FormulaDag& dag, FormulaId id) const {
        return ml_states(models_[m], dag, id);
    }

private:
    LogicSignature sig_;
};

}  // namespace seplearn

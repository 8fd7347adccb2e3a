#pragma once

#include "seplearn/bigint.hpp"
#include "seplearn/bits.hpp"
#include "seplearn/engine.hpp"
#include "seplearn/formula.hpp"
#include "seplearn/kripke.hpp"
#include "seplearn/signature.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace seplearn {

/// Single final type; atoms, !, EX, AX, EF, AF, EG, AG, &, |, EU, AU.
inline LogicSignature ctl_signature(const std::vector<std::string>& props) {
    if (props.empty()) throw Error(Errc::EmptyAlphabet, "CTL signature needs propositions");
    std::vector<OperatorDecl> ops;
    for (const auto& p : props) ops.push_back({p, OpKind::Atom, p, 0, 0, {}, p, 0});
    ops.push_back({"!", OpKind::Not, "!", 1, 0, {{0}}, "", 0});
    const std::pair<const char*, OpKind> unary[] = {{"EX", OpKind::EX}, {"AX", OpKind::AX}, {"EF", OpKind::EF},
                                                    {"AF", OpKind::AF}, {"EG", OpKind::EG}, {"AG", OpKind::AG}};
    for (const auto& [n, k] : unary) ops.push_back({n, k, n, 1, 0, {{0}}, "", 0});
    ops.push_back({"&", OpKind::And, "&", 2, 0, {{0}, {0}}, "", 0});
    ops.push_back({"|", OpKind::Or, "|", 2, 0, {{0}, {0}}, "", 0});
    ops.push_back({"EU", OpKind::EU, "EU", 2, 0, {{0}, {0}}, "", 0});
    ops.push_back({"AU", OpKind::AU, "AU", 2, 0, {{0}, {0}}, "", 0});
    return LogicSignature({"state"}, {0}, std::move(ops));
}

namespace detail {

inline Bits pre_exists(const SuccessorGraph& g, const Bits& s) {
    Bits r(g.succ.size());
    for (std::size_t q = 0; q < g.succ.size(); ++q) {
        for (auto x : g.succ[q]) {
            if (s.test(x)) {
                r.set(q);
                break;
            }
        }
    }
    return r;
}

inline Bits pre_forall(const SuccessorGraph& g, const Bits& s) {
    Bits r(g.succ.size());
    for (std::size_t q = 0; q < g.succ.size(); ++q) {
        bool all = true;
        for (auto x : g.succ[q]) all = all && s.test(x);
        r.set(q, all);
    }
    return r;
}

}  // namespace detail

/// Fixpoint characterizations over the actionless successor relation.
inline Bits ctl_apply(const SuccessorGraph& g, const OperatorDecl& o, const Bits& s) {
    const std::size_t n = g.succ.size();
    switch (o.kind) {
        case OpKind::Not: return ~s;
        case OpKind::EX: return detail::pre_exists(g, s);
        case OpKind::AX: return detail::pre_forall(g, s);
        case OpKind::EG:
        case OpKind::AG: {
            Bits z = s;
            for (;;) {
                Bits nz = s & (o.kind == OpKind::EG ? detail::pre_exists(g, z) : detail::pre_forall(g, z));
                if (nz == z) return z;
                z = std::move(nz);
            }
        }
        case OpKind::EF:
        case OpKind::AF: {
            const Bits all = Bits::full(n);
            Bits z(n);
            for (;;) {
                Bits nz = s | (all & (o.kind == OpKind::EF ? detail::pre_exists(g, z) : detail::pre_forall(g, z)));
                if (nz == z) return z;
                z = std::move(nz);
            }
        }
        default: throw Error(Errc::UnknownOperator, "not a unary CTL operator: " + o.name);
    }
}

inline Bits ctl_apply(const SuccessorGraph& g, const OperatorDecl& o, const Bits& a, const Bits& b) {
    switch (o.kind) {
        case OpKind::And: return a & b;
        case OpKind::Or: return a | b;
        case OpKind::EU:
        case OpKind::AU: {
            Bits z(g.succ.size());
            for (;;) {
                Bits nz = b | (a & (o.kind == OpKind::EU ? detail::pre_exists(g, z) : detail::pre_forall(g, z)));
                if (nz == z) return z;
                z = std::move(nz);
            }
        }
        default: throw Error(Errc::UnknownOperator, "not a binary CTL operator: " + o.name);
    }
}

inline Bits ctl_apply(const KripkeStructure& k, const OperatorDecl& o, const Bits& s) {
    validate_nonblocking(k);
    return ctl_apply(SuccessorGraph(k), o, s);
}
inline Bits ctl_apply(const KripkeStructure& k, const OperatorDecl& o, const Bits& a, const Bits& b) {
    validate_nonblocking(k);
    return ctl_apply(SuccessorGraph(k), o, a, b);
}

inline bool ctl_sat(const KripkeStructure& k, const Bits& s) { return k.initial().subset_of(s); }

namespace detail {

// Graph-search model checker: backward reachability and successor counters.
class CtlChecker {
public:
    explicit CtlChecker(const KripkeStructure& k) : g_(k), n_(k.size()), k_(k) {}

    Bits eval(const FormulaDag& dag, FormulaId id) {
        if (auto it = memo_.find(id); it != memo_.end()) return it->second;
        const auto& o = dag.op(id);
        Bits r(n_);
        auto arg = [&](int i) { return eval(dag, dag.child(id, i)); };
        switch (o.kind) {
            case OpKind::Atom: r = k_.prop_set(o.param); break;
            case OpKind::Not: r = ~arg(0); break;
            case OpKind::And: r = arg(0) & arg(1); break;
            case OpKind::Or: r = arg(0) | arg(1); break;
            case OpKind::EX: {
                const Bits s = arg(0);
                s.for_each([&](std::size_t x) {
                    for (auto p : g_.pred[x]) r.set(p);
                });
                break;
            }
            case OpKind::AX: {
                const Bits s = arg(0);
                for (std::size_t q = 0; q < n_; ++q) {
                    std::size_t bad = 0;
                    for (auto x : g_.succ[q]) bad += s.test(x) ? 0 : 1;
                    r.set(q, bad == 0);
                }
                break;
            }
            case OpKind::EF: r = backward_reach(g_, Bits::full(n_), arg(0)); break;
            case OpKind::EU: r = backward_reach(g_, arg(0), arg(1)); break;
            case OpKind::AF: r = forall_reach(g_, Bits::full(n_), arg(0)); break;
            case OpKind::AU: r = forall_reach(g_, arg(0), arg(1)); break;
            case OpKind::AG: r = ~backward_reach(g_, Bits::full(n_), ~arg(0)); break;
            case OpKind::EG: r = exists_prune(g_, arg(0)); break;
            default: throw Error(Errc::UnknownOperator, "not a CTL operator: " + o.name);
        }
        memo_.emplace(id, r);
        return r;
    }

private:
    SuccessorGraph g_;
    std::size_t n_;
    const KripkeStructure& k_;
    std::unordered_map<FormulaId, Bits> memo_;
};

}  // namespace detail

inline Bits ctl_states(const KripkeStructure& k, const FormulaDag& dag, FormulaId id) {
    validate_nonblocking(k);
    return detail::CtlChecker(k).eval(dag, id);
}

inline bool ctl_modelcheck(const KripkeStructure& k, const FormulaDag& dag, FormulaId id) {
    return k.initial().subset_of(ctl_states(k, dag, id));
}

class CtlInstance : public SampleBase<KripkeStructure> {
public:
    using value_type = Bits;

    CtlInstance(LogicSignature sig, std::vector<KripkeStructure> positives, std::vector<KripkeStructure> negatives)
        : SampleBase(std::move(positives), std::move(negatives)), sig_(std::move(sig)) {
        for (const auto& k : models_) graphs_.emplace_back(validate_nonblocking(k));
    }

    const LogicSignature& signature() const noexcept { return sig_; }
    std::vector<OpIndex> relevant_operators() const {
        std::vector<OpIndex> r;
        for (OpIndex i = 0; i < sig_.size(); ++i) r.push_back(i);
        return r;
    }
    Bits atom(std::size_t m, const OperatorDecl& o) const { return models_[m].prop_set(o.param); }
    Bits apply(std::size_t m, const OperatorDecl& o, const Bits& a) const { return ctl_apply(graphs_[m], o, a); }
    Bits apply(std::size_t m, const OperatorDecl& o, const Bits& a, const Bits& b) const {
        return ctl_apply(graphs_[m], o, a, b);
    }
    bool sat(std::size_t m, const Bits& v) const { return ctl_sat(models_[m], v); }
    BigInt value_space_size(std::size_t m, TypeId) const { return pow2(models_[m].size()); }
    bool model_check(std::size_t m, const FormulaDag& dag, FormulaId id) const {
        return ctl_modelcheck(models_[m], dag, id);
    }
    Bits independent_value(std::size_t m, const FormulaDag& dag, FormulaId id) const {
        return ctl_states(models_[m], dag, id);
    }

private:
    LogicSignature sig_;
    std::vector<SuccessorGraph> graphs_;
};

}  // namespace seplearn

#pragma once

#include "seplearn/bigint.hpp"
#include "seplearn/bits.hpp"
#include "seplearn/engine.hpp"
#include "seplearn/formula.hpp"
#include "seplearn/kripke.hpp"
#include "seplearn/signature.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace seplearn {

inline constexpr TypeId kPropType = 0;
inline constexpr TypeId kPathType = 1;

/**
 * @brief Two final types: propositional (0) and temporal (1).
 *
 * Propositional layer: atoms, !, and_p, or_p. Temporal layer: inject, &, | (propositional
 * left argument), X, G, F (propositional argument), U (propositional right argument).
 */
inline LogicSignature ltlp_signature(const std::vector<std::string>& props) {
    if (props.empty()) throw Error(Errc::EmptyAlphabet, "LTL_P signature needs propositions");
    const TypeId P = kPropType, T = kPathType;
    std::vector<OperatorDecl> ops;
    for (const auto& p : props) ops.push_back({p, OpKind::Atom, p, 0, P, {}, p, 0});
    ops.push_back({"!", OpKind::Not, "!", 1, P, {{P}}, "", 0});
    ops.push_back({"and_p", OpKind::And, "&", 2, P, {{P}, {P}}, "", 0});
    ops.push_back({"or_p", OpKind::Or, "|", 2, P, {{P}, {P}}, "", 0});
    ops.push_back({"inject", OpKind::Inject, "", 1, T, {{P}}, "", 0});
    ops.push_back({"&", OpKind::And, "&", 2, T, {{T}, {T}}, "", 0});
    ops.push_back({"|", OpKind::Or, "|", 2, T, {{P}, {T}}, "", 0});
    ops.push_back({"X", OpKind::Next, "X", 1, T, {{T}}, "", 0});
    ops.push_back({"G", OpKind::Globally, "G", 1, T, {{T}}, "", 0});
    ops.push_back({"F", OpKind::Finally, "F", 1, T, {{P}}, "", 0});
    ops.push_back({"U", OpKind::Until, "U", 2, T, {{T}, {P}}, "", 0});
    return LogicSignature({"prop", "path"}, {P, T}, std::move(ops));
}

/// Universal-path fixpoint semantics on a non-blocking structure.
inline Bits ltlp_apply(const SuccessorGraph& g, const OperatorDecl& o, const Bits& s) {
    switch (o.kind) {
        case OpKind::Not: return ~s;
        case OpKind::Inject: return s;
        case OpKind::Next: return detail::pre_forall(g, s);
        case OpKind::Globally: {
            Bits z = s;
            for (;;) {
                Bits nz = s & detail::pre_forall(g, z);
                if (nz == z) return z;
                z = std::move(nz);
            }
        }
        case OpKind::Finally: {
            Bits z = s;
            for (;;) {
                Bits nz = s | detail::pre_forall(g, z);
                if (nz == z) return z;
                z = std::move(nz);
            }
        }
        default: throw Error(Errc::UnknownOperator, "not a unary LTL_P operator: " + o.name);
    }
}

inline Bits ltlp_apply(const SuccessorGraph& g, const OperatorDecl& o, const Bits& a, const Bits& b) {
    switch (o.kind) {
        case OpKind::And: return a & b;
        case OpKind::Or: return a | b;
        case OpKind::Until: {
            Bits z = b;
            for (;;) {
                Bits nz = b | (a & detail::pre_forall(g, z));
                if (nz == z) return z;
                z = std::move(nz);
            }
        }
        default: throw Error(Errc::UnknownOperator, "not a binary LTL_P operator: " + o.name);
    }
}

inline Bits ltlp_apply(const KripkeStructure& k, const OperatorDecl& o, const Bits& s) {
    return ltlp_apply(SuccessorGraph(validate_nonblocking(k)), o, s);
}
inline Bits ltlp_apply(const KripkeStructure& k, const OperatorDecl& o, const Bits& a, const Bits& b) {
    return ltlp_apply(SuccessorGraph(validate_nonblocking(k)), o, a, b);
}

/// Bottom-up over the DAG with successor counters; O(dag_size * |Q|^2).
inline Bits ltlp_states(const KripkeStructure& k, const FormulaDag& dag, FormulaId root) {
    const SuccessorGraph g(validate_nonblocking(k));
    const std::size_t n = k.size();
    std::vector<Bits> val(root + 1);
    for (FormulaId id : dag.subformulas(root)) {
        const auto& o = dag.op(id);
        auto arg = [&](int i) -> const Bits& { return val[dag.child(id, i)]; };
        Bits r(n);
        switch (o.kind) {
            case OpKind::Atom: r = k.prop_set(o.param); break;
            case OpKind::Not: r = ~arg(0); break;
            case OpKind::Inject: r = arg(0); break;
            case OpKind::And: r = arg(0) & arg(1); break;
            case OpKind::Or: r = arg(0) | arg(1); break;
            case OpKind::Next:
                for (std::size_t q = 0; q < n; ++q) {
                    std::size_t bad = 0;
                    for (auto x : g.succ[q]) bad += arg(0).test(x) ? 0 : 1;
                    r.set(q, bad == 0);
                }
                break;
            case OpKind::Globally: r = ~detail::backward_reach(g, Bits::full(n), ~arg(0)); break;
            case OpKind::Finally: r = detail::forall_reach(g, Bits::full(n), arg(0)); break;
            case OpKind::Until: r = detail::forall_reach(g, arg(0), arg(1)); break;
            default: throw Error(Errc::UnknownOperator, "not an LTL_P operator: " + o.name);
        }
        val[id] = std::move(r);
    }
    return val[root];
}

inline bool ltlp_modelcheck(const KripkeStructure& k, const FormulaDag& dag, FormulaId id) {
    return k.initial().subset_of(ltlp_states(k, dag, id));
}

class LtlpInstance : public SampleBase<KripkeStructure> {
public:
    using value_type = Bits;

    LtlpInstance(LogicSignature sig, std::vector<KripkeStructure> positives, std::vector<KripkeStructure> negatives)
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
    Bits apply(std::size_t m, const OperatorDecl& o, const Bits& a) const { return ltlp_apply(graphs_[m], o, a); }
    Bits apply(std::size_t m, const OperatorDecl& o, const Bits& a, const Bits& b) const {
        return ltlp_apply(graphs_[m], o, a, b);
    }
    bool sat(std::size_t m, const Bits& v) const { return models_[m].initial().subset_of(v); }
    BigInt value_space_size(std::size_t m, TypeId) const { return pow2(models_[m].size()); }
    bool model_check(std::size_t m, const FormulaDag& dag, FormulaId id) const {
        return ltlp_modelcheck(models_[m], dag, id);
    }
    Bits independent_value(std::size_t m, const FormulaDag& dag, FormulaId id) const {
        return ltlp_states(models_[m], dag, id);
    }

private:
    LogicSignature sig_;
    std::vector<SuccessorGraph> graphs_;
};

// ---------------------------------------------------------------------------
// Translation of the next-only fragment (atoms, !, &, |, X) into LTL_P
// ---------------------------------------------------------------------------

inline constexpr std::size_t kTranslateMaxInput = 20;

struct TranslateResult {
    FormulaId formula;
    std::size_t dag_size;
    std::uint64_t tree_size;
};

namespace detail {

struct XLiteral {
    std::size_t depth;
    std::string prop;
    bool negated;
    auto operator<=>(const XLiteral&) const = default;
};
using XClause = std::vector<XLiteral>;
using XCnf = std::vector<XClause>;

inline XCnf lx_cnf(const FormulaDag& src, FormulaId id, bool neg, std::size_t depth) {
    const auto& o = src.op(id);
    switch (o.kind) {
        case OpKind::Atom: return {{XLiteral{depth, o.param, neg}}};
        case OpKind::Not: return lx_cnf(src, src.child(id, 0), !neg, depth);
        case OpKind::Next: return lx_cnf(src, src.child(id, 0), neg, depth + 1);
        case OpKind::And:
        case OpKind::Or: {
            XCnf a = lx_cnf(src, src.child(id, 0), neg, depth);
            XCnf b = lx_cnf(src, src.child(id, 1), neg, depth);
            const bool conj = (o.kind == OpKind::And) != neg;
            if (conj) {
                a.insert(a.end(), b.begin(), b.end());
                return a;
            }
            XCnf r;
            for (const auto& ca : a) {
                for (const auto& cb : b) {
                    XClause c = ca;
                    c.insert(c.end(), cb.begin(), cb.end());
                    r.push_back(std::move(c));
                }
            }
            return r;
        }
        default: throw Error(Errc::NotInLxFragment, "operator " + o.name + " is not allowed");
    }
}

}  // namespace detail

/**
 * @brief Rewrites an L_X formula as an equivalent LTL_P formula.
 *
 * Negations are pushed to atoms (X commutes with !), the result is put in conjunctive normal
 * form over literals X^k l, and each clause X^k1 l1 | ... | X^km lm (sorted by k) becomes
 * X^k1 (l1 | X^(k2-k1) (l2 | ...)).
 */
inline TranslateResult translate_lx(const FormulaDag& src, FormulaId id, FormulaDag& dst) {
    if (src.dag_size(id) > kTranslateMaxInput)
        throw Error(Errc::InputTooLarge, "input DAG size " + std::to_string(src.dag_size(id)) + " exceeds " +
                                             std::to_string(kTranslateMaxInput));
    detail::XCnf cnf = detail::lx_cnf(src, id, false, 0);

    auto literal = [&](const detail::XLiteral& l) {
        FormulaId a = dst.intern(l.prop);
        if (l.negated) a = dst.intern("!", {a});
        return a;
    };
    auto next_n = [&](FormulaId f, std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) f = dst.intern("X", {f});
        return f;
    };

    std::vector<FormulaId> clauses;
    for (auto& c : cnf) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        FormulaId acc = dst.intern("inject", {literal(c.back())});
        for (std::size_t j = c.size() - 1; j-- > 0;) {
            acc = next_n(acc, c[j + 1].depth - c[j].depth);
            acc = dst.intern("|", {literal(c[j]), acc});
        }
        clauses.push_back(next_n(acc, c.front().depth));
    }
    FormulaId r = clauses.front();
    for (std::size_t i = 1; i < clauses.size(); ++i) r = dst.intern("&", {r, clauses[i]});
    return {r, dst.dag_size(r), dst.tree_size(r)};
}

}  // namespace seplearn

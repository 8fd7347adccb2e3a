#pragma once

#include "seplearn/error.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace seplearn {

using TypeId = std::uint32_t;
using OpIndex = std::uint32_t;

/// Semantic role of an operator; concrete logics dispatch on it.
enum class OpKind {
    Atom,       // proposition p
    DualAtom,   // p_bar, true where p does not hold
    Not,
    And,
    Or,
    Box,        // [a]
    Diamond,    // <a>>=k
    Next,
    Finally,
    Globally,
    Until,
    EX, AX, EF, AF, EG, AG, EU, AU,
    Inject,     // identity from the propositional type into the temporal type
    Epsilon,    // empty word
    Append,     // u.a
    Letter,     // single-letter word
};

struct OperatorDecl {
    std::string name;    // unique within a signature
    OpKind kind;
    std::string symbol;  // surface form used by render/parse
    int arity = 0;
    TypeId result_type = 0;
    std::vector<std::vector<TypeId>> arg_types;
    std::string param;   // proposition, action or letter
    int k = 0;           // diamond threshold

    bool accepts(int i, TypeId t) const {
        const auto& ts = arg_types[static_cast<std::size_t>(i)];
        return std::find(ts.begin(), ts.end(), t) != ts.end();
    }
};

class LogicSignature {
public:
    LogicSignature() = default;

    LogicSignature(std::vector<std::string> types, std::vector<TypeId> final_types, std::vector<OperatorDecl> ops)
        : types_(std::move(types)), final_(types_.size(), false), ops_(std::move(ops)) {
        if (types_.empty()) throw Error(Errc::InvalidSignature, "no types");
        if (final_types.empty()) throw Error(Errc::InvalidSignature, "no final types");
        for (TypeId t : final_types) {
            if (t >= types_.size()) throw Error(Errc::InvalidSignature, "final type out of range");
            final_[t] = true;
        }
        bool nullary = false;
        for (OpIndex i = 0; i < ops_.size(); ++i) {
            const auto& o = ops_[i];
            if (o.arity < 0 || o.arity > 2) throw Error(Errc::InvalidSignature, "bad arity for " + o.name);
            if (o.arg_types.size() != static_cast<std::size_t>(o.arity))
                throw Error(Errc::InvalidSignature, "argument type count differs from arity for " + o.name);
            if (o.result_type >= types_.size()) throw Error(Errc::InvalidSignature, "bad result type for " + o.name);
            for (const auto& ts : o.arg_types) {
                if (ts.empty()) throw Error(Errc::InvalidSignature, "empty argument type set for " + o.name);
                for (TypeId t : ts) {
                    if (t >= types_.size()) throw Error(Errc::InvalidSignature, "bad argument type for " + o.name);
                }
            }
            if (!by_name_.emplace(o.name, i).second) throw Error(Errc::InvalidSignature, "duplicate operator " + o.name);
            nullary = nullary || o.arity == 0;
        }
        if (!nullary) throw Error(Errc::EmptyNullaryLayer, "signature has no arity-0 operator");
    }

    const std::vector<std::string>& types() const noexcept { return types_; }
    std::size_t type_count() const noexcept { return types_.size(); }
    bool is_final(TypeId t) const { return final_.at(t); }
    const std::string& type_name(TypeId t) const { return types_.at(t); }

    const std::vector<OperatorDecl>& operators() const noexcept { return ops_; }
    const OperatorDecl& op(OpIndex i) const { return ops_.at(i); }
    std::size_t size() const noexcept { return ops_.size(); }

    bool has(const std::string& name) const { return by_name_.count(name) != 0; }
    OpIndex index_of(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) throw Error(Errc::UnknownOperator, name);
        return it->second;
    }

private:
    std::vector<std::string> types_;
    std::vector<bool> final_;
    std::vector<OperatorDecl> ops_;
    std::unordered_map<std::string, OpIndex> by_name_;
};

/// Same types, operators filtered to `allowed` (declaration order is kept).
inline LogicSignature restrict_fragment(const LogicSignature& sig, const std::set<std::string>& allowed) {
    for (const auto& n : allowed) {
        if (!sig.has(n)) throw Error(Errc::UnknownOperator, n);
    }
    std::vector<OperatorDecl> ops;
    for (const auto& o : sig.operators()) {
        if (allowed.count(o.name)) ops.push_back(o);
    }
    std::vector<TypeId> finals;
    for (TypeId t = 0; t < sig.type_count(); ++t) {
        if (sig.is_final(t)) finals.push_back(t);
    }
    return LogicSignature(sig.types(), finals, std::move(ops));
}

/// Monotone fragments: no negation and at most one of the two lattice operators.
inline bool is_monotone(const LogicSignature& sig) {
    bool has_and = false, has_or = false;
    for (const auto& o : sig.operators()) {
        if (o.kind == OpKind::Not) return false;
        has_and = has_and || o.kind == OpKind::And;
        has_or = has_or || o.kind == OpKind::Or;
    }
    return !(has_and && has_or);
}

}  // namespace seplearn

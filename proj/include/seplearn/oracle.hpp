#pragma once

#include "seplearn/engine.hpp"
#include "seplearn/formula.hpp"

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

namespace seplearn {

/// Instances that can evaluate a formula to its per-model value without the engine's apply path.
template <typename I>
concept IndependentlyEvaluable =
    LogicInstance<I> && requires(const I& inst, std::size_t m, const FormulaDag& dag, FormulaId id) {
        { inst.independent_value(m, dag, id) } -> std::convertible_to<typename I::value_type>;
    };

enum class OracleStatus { Found, Exhausted, CapExceeded };

inline const char* oracle_status_name(OracleStatus s) {
    switch (s) {
        case OracleStatus::Found: return "found";
        case OracleStatus::Exhausted: return "exhausted";
        case OracleStatus::CapExceeded: return "cap_exceeded";
    }
    return "unknown";
}

struct OracleResult {
    OracleStatus status = OracleStatus::CapExceeded;
    std::shared_ptr<FormulaDag> dag;
    FormulaId formula = 0;
    std::uint64_t tree_size = 0;
    std::size_t dag_size = 0;
    std::size_t classes = 0;  // distinct semantic tuples met
    std::uint64_t explored_size = 0;

    /// Exhaustion and hitting the cap both count as "no separator".
    bool separable() const noexcept { return status == OracleStatus::Found; }
};

/**
 * @brief Smallest-tree-size separating formula by bottom-up syntactic enumeration.
 *
 * Formulas of tree size s are built from the kept formulas of smaller sizes, in operator
 * declaration order. A formula is kept only if its tuple of independently computed values
 * (per model, over all states or positions) is new. Since each operator's result depends
 * only on its arguments' values, dropping the larger of two equal-valued formulas loses no
 * minimal separator. If sizes m+1 .. 2m+1 yield nothing new, where m is the largest size
 * that did, no larger size can either and the search reports exhaustion.
 */
template <IndependentlyEvaluable I>
OracleResult enumerate_min_formula(const I& inst, std::uint64_t cap) {
    using Value = typename I::value_type;
    if (cap < 1) throw Error(Errc::InvalidArgument, "cap must be at least 1");
    const auto& sig = inst.signature();
    OracleResult r;
    r.dag = std::make_shared<FormulaDag>(sig);
    auto& dag = *r.dag;

    struct Key {
        TypeId type;
        std::vector<Value> values;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::size_t h = k.type;
            std::hash<Value> hv;
            for (const auto& v : k.values) h = (h ^ hv(v)) * 0x100000001b3ULL + (h >> 13);
            return h;
        }
    };
    std::unordered_map<Key, FormulaId, KeyHash> seen;
    std::vector<std::vector<FormulaId>> layer(1);
    std::uint64_t last_new = 0;

    // Returns true when `id` separates the sample.
    auto consider = [&](FormulaId id, std::uint64_t size) {
        Key k{dag.type_of(id), {}};
        for (std::size_t m = 0; m < inst.model_count(); ++m) k.values.push_back(inst.independent_value(m, dag, id));
        if (!seen.emplace(std::move(k), id).second) return false;
        layer[size].push_back(id);
        if (!sig.is_final(dag.type_of(id))) return false;
        for (std::size_t m = 0; m < inst.model_count(); ++m) {
            if (inst.model_check(m, dag, id) != inst.is_positive(m)) return false;
        }
        return true;
    };
    auto found = [&](FormulaId id, std::uint64_t size) {
        r.status = OracleStatus::Found;
        r.formula = id;
        r.tree_size = size;
        r.dag_size = dag.dag_size(id);
        r.classes = seen.size();
        r.explored_size = size;
        return r;
    };

    for (std::uint64_t s = 1; s <= cap; ++s) {
        layer.emplace_back();
        for (OpIndex oi = 0; oi < sig.size(); ++oi) {
            const auto& o = sig.op(oi);
            if (o.arity == 0 && s == 1) {
                const FormulaId id = dag.intern(oi, {});
                if (consider(id, s)) return found(id, s);
            } else if (o.arity == 1 && s >= 2) {
                const auto& prev = layer[s - 1];
                for (std::size_t i = 0; i < prev.size(); ++i) {
                    const FormulaId c = prev[i];
                    if (!o.accepts(0, dag.type_of(c))) continue;
                    const FormulaId id = dag.intern(oi, {c});
                    if (consider(id, s)) return found(id, s);
                }
            } else if (o.arity == 2 && s >= 3) {
                for (std::uint64_t s1 = 1; s1 + 1 < s; ++s1) {
                    const std::uint64_t s2 = s - 1 - s1;
                    const auto& left = layer[s1];
                    const auto& right = layer[s2];
                    for (FormulaId a : left) {
                        if (!o.accepts(0, dag.type_of(a))) continue;
                        for (FormulaId b : right) {
                            if (!o.accepts(1, dag.type_of(b))) continue;
                            const FormulaId id = dag.intern(oi, {a, b});
                            if (consider(id, s)) return found(id, s);
                        }
                    }
                }
            }
        }
        r.explored_size = s;
        if (!layer[s].empty()) {
            last_new = s;
        } else if (s >= 2 * last_new + 1) {
            r.status = OracleStatus::Exhausted;
            r.classes = seen.size();
            return r;
        }
    }
    r.status = OracleStatus::CapExceeded;
    r.classes = seen.size();
    return r;
}

}  // namespace seplearn

#pragma once

#include "seplearn/bigint.hpp"
#include "seplearn/error.hpp"
#include "seplearn/formula.hpp"
#include "seplearn/signature.hpp"

#include <chrono>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace seplearn {

/**
 * @brief A logic instantiated over an ordered sample (positives first, then negatives).
 *
 * `apply` must depend only on the operator and the argument values, and `sat` only on the
 * value. `model_check` must be an evaluation path that does not go through `apply`; the
 * engine uses it to verify witnesses.
 */
template <typename I>
concept LogicInstance = requires(const I& inst, std::size_t m, const OperatorDecl& o,
                                 const typename I::value_type& v, const FormulaDag& dag, FormulaId id, TypeId t) {
    typename I::value_type;
    { inst.signature() } -> std::convertible_to<const LogicSignature&>;
    { inst.model_count() } -> std::convertible_to<std::size_t>;
    { inst.is_positive(m) } -> std::convertible_to<bool>;
    { inst.relevant_operators() } -> std::convertible_to<std::vector<OpIndex>>;
    { inst.atom(m, o) } -> std::convertible_to<typename I::value_type>;
    { inst.apply(m, o, v) } -> std::convertible_to<typename I::value_type>;
    { inst.apply(m, o, v, v) } -> std::convertible_to<typename I::value_type>;
    { inst.sat(m, v) } -> std::convertible_to<bool>;
    { inst.value_space_size(m, t) } -> std::convertible_to<BigInt>;
    { inst.model_check(m, dag, id) } -> std::convertible_to<bool>;
};

/// Helper base for instances whose sample is a positive and a negative model list.
template <typename Model>
class SampleBase {
public:
    SampleBase(std::vector<Model> positives, std::vector<Model> negatives) : npos_(positives.size()) {
        models_ = std::move(positives);
        for (auto& m : negatives) models_.push_back(std::move(m));
    }
    std::size_t model_count() const noexcept { return models_.size(); }
    bool is_positive(std::size_t m) const noexcept { return m < npos_; }
    std::size_t positive_count() const noexcept { return npos_; }
    const Model& model(std::size_t m) const { return models_.at(m); }
    const std::vector<Model>& models() const noexcept { return models_; }

protected:
    std::vector<Model> models_;
    std::size_t npos_;
};

/// n = sum over types of the product over models of |SEM_M(type)|.
template <LogicInstance I>
BigInt size_bound(const I& inst) {
    BigInt total = 0;
    for (TypeId t = 0; t < inst.signature().type_count(); ++t) {
        BigInt prod = 1;
        for (std::size_t m = 0; m < inst.model_count(); ++m) prod *= BigInt(inst.value_space_size(m, t));
        total += prod;
    }
    return total;
}

inline constexpr std::size_t kDefaultBudgetCap = std::size_t{1} << 24;

template <LogicInstance I>
std::size_t default_budget(const I& inst) {
    const BigInt b = size_bound(inst);
    return b <= BigInt(kDefaultBudgetCap) ? static_cast<std::size_t>(b) : kDefaultBudgetCap;
}

template <typename Value>
class SemanticTable {
public:
    static constexpr std::uint32_t kNoArg = 0xffffffffu;

    struct Entry {
        TypeId type;
        std::vector<Value> values;
        OpIndex op;
        std::uint8_t arity;
        std::uint32_t args[2];
    };

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const Entry& operator[](std::size_t i) const { return entries_.at(i); }
    std::size_t round_count() const noexcept { return rounds_; }
    bool truncated() const noexcept { return truncated_; }

    std::optional<std::size_t> find(TypeId type, const std::vector<Value>& values) const {
        const std::size_t h = hash(type, values);
        auto [b, e] = index_.equal_range(h);
        for (auto it = b; it != e; ++it) {
            const auto& en = entries_[it->second];
            if (en.type == type && en.values == values) return it->second;
        }
        return std::nullopt;
    }

    // Construction interface used by closure().

    /// Returns false when the tuple is new but the budget is exhausted.
    bool add(TypeId type, std::vector<Value>&& values, OpIndex op, std::uint8_t arity, std::uint32_t a,
             std::uint32_t b, std::size_t budget) {
        const std::size_t h = hash(type, values);
        auto [lo, hi] = index_.equal_range(h);
        for (auto it = lo; it != hi; ++it) {
            const auto& en = entries_[it->second];
            if (en.type == type && en.values == values) return true;
        }
        if (entries_.size() >= budget) {
            truncated_ = true;
            return false;
        }
        index_.emplace(h, static_cast<std::uint32_t>(entries_.size()));
        entries_.push_back(Entry{type, std::move(values), op, arity, {a, b}});
        return true;
    }
    void begin_round() noexcept { ++rounds_; }

private:
    static std::size_t hash(TypeId type, const std::vector<Value>& values) {
        std::size_t h = 0xcbf29ce484222325ULL ^ type;
        std::hash<Value> hv;
        for (const auto& v : values) h = (h ^ hv(v)) * 0x100000001b3ULL + (h >> 17);
        return h;
    }

    std::vector<Entry> entries_;
    std::unordered_multimap<std::size_t, std::uint32_t> index_;
    std::size_t rounds_ = 0;
    bool truncated_ = false;
};

/**
 * @brief Least set of value tuples containing the nullary seeds and closed under the relevant operators.
 *
 * Operators are applied in declaration order; unary operators to entries new in the previous
 * round, binary operators to index pairs (lexicographic) where at least one side is new.
 */
template <LogicInstance I>
SemanticTable<typename I::value_type> closure(const I& inst, std::optional<std::size_t> budget = std::nullopt) {
    using Value = typename I::value_type;
    SemanticTable<Value> table;
    const std::size_t cap = budget ? *budget : default_budget(inst);
    const auto& sig = inst.signature();
    const std::size_t nm = inst.model_count();
    const std::vector<OpIndex> ops = inst.relevant_operators();

    for (OpIndex oi : ops) {
        const auto& o = sig.op(oi);
        if (o.arity != 0) continue;
        std::vector<Value> vals;
        vals.reserve(nm);
        for (std::size_t m = 0; m < nm; ++m) vals.push_back(inst.atom(m, o));
        if (!table.add(o.result_type, std::move(vals), oi, 0, table.kNoArg, table.kNoArg, cap)) return table;
    }

    std::size_t old_end = 0;
    while (old_end < table.entries().size()) {
        const std::size_t new_begin = old_end;
        const std::size_t cur_end = table.entries().size();
        table.begin_round();
        for (OpIndex oi : ops) {
            const auto& o = sig.op(oi);
            if (o.arity == 1) {
                for (std::size_t i = new_begin; i < cur_end; ++i) {
                    if (!o.accepts(0, table.entries()[i].type)) continue;
                    std::vector<Value> vals;
                    vals.reserve(nm);
                    for (std::size_t m = 0; m < nm; ++m) vals.push_back(inst.apply(m, o, table.entries()[i].values[m]));
                    if (!table.add(o.result_type, std::move(vals), oi, 1, static_cast<std::uint32_t>(i), table.kNoArg,
                                   cap))
                        return table;
                }
            } else if (o.arity == 2) {
                for (std::size_t i = 0; i < cur_end; ++i) {
                    if (!o.accepts(0, table.entries()[i].type)) continue;
                    for (std::size_t j = i < new_begin ? new_begin : 0; j < cur_end; ++j) {
                        if (!o.accepts(1, table.entries()[j].type)) continue;
                        std::vector<Value> vals;
                        vals.reserve(nm);
                        for (std::size_t m = 0; m < nm; ++m)
                            vals.push_back(inst.apply(m, o, table.entries()[i].values[m], table.entries()[j].values[m]));
                        if (!table.add(o.result_type, std::move(vals), oi, 2, static_cast<std::uint32_t>(i),
                                       static_cast<std::uint32_t>(j), cap))
                            return table;
                    }
                }
            }
        }
        old_end = cur_end;
    }
    return table;
}

template <LogicInstance I>
bool separates(const I& inst, const std::vector<typename I::value_type>& values) {
    for (std::size_t m = 0; m < inst.model_count(); ++m) {
        if (inst.sat(m, values[m]) != inst.is_positive(m)) return false;
    }
    return true;
}

/// Index of the first final-type entry that separates the sample.
template <LogicInstance I>
std::optional<std::size_t> check_separable(const SemanticTable<typename I::value_type>& table, const I& inst) {
    const auto& sig = inst.signature();
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& e = table[i];
        if (sig.is_final(e.type) && separates(inst, e.values)) return i;
    }
    if (table.truncated()) throw Error(Errc::PartialTableInconclusive, "budget-truncated table has no separating entry");
    return std::nullopt;
}

/// Rebuilds a formula for entry `index` from first-producer provenance.
template <typename Value>
FormulaId witness(const SemanticTable<Value>& table, std::size_t index, FormulaDag& dag) {
    if (index >= table.size()) throw Error(Errc::TupleNotInTable, "entry " + std::to_string(index));
    std::unordered_map<std::size_t, FormulaId> memo;
    auto rec = [&](auto&& self, std::size_t i) -> FormulaId {
        if (auto it = memo.find(i); it != memo.end()) return it->second;
        const auto& e = table[i];
        std::vector<FormulaId> ch;
        for (int a = 0; a < e.arity; ++a) ch.push_back(self(self, e.args[a]));
        const FormulaId r = dag.intern(e.op, ch);
        memo.emplace(i, r);
        return r;
    };
    return rec(rec, index);
}

template <typename Value>
FormulaId witness(const SemanticTable<Value>& table, TypeId type, const std::vector<Value>& values, FormulaDag& dag) {
    const auto idx = table.find(type, values);
    if (!idx) throw Error(Errc::TupleNotInTable, "tuple not produced by the closure");
    return witness(table, *idx, dag);
}

/// Re-evaluates `id` bottom-up through the instance's apply functions.
template <LogicInstance I>
std::vector<typename I::value_type> evaluate_tuple(const I& inst, const FormulaDag& dag, FormulaId id) {
    using Value = typename I::value_type;
    std::vector<Value> out;
    for (std::size_t m = 0; m < inst.model_count(); ++m) {
        std::unordered_map<FormulaId, Value> memo;
        auto rec = [&](auto&& self, FormulaId x) -> Value {
            if (auto it = memo.find(x); it != memo.end()) return it->second;
            const auto& o = dag.op(x);
            Value v;
            if (o.arity == 0) {
                v = inst.atom(m, o);
            } else if (o.arity == 1) {
                v = inst.apply(m, o, self(self, dag.child(x, 0)));
            } else {
                v = inst.apply(m, o, self(self, dag.child(x, 0)), self(self, dag.child(x, 1)));
            }
            memo.emplace(x, v);
            return v;
        };
        out.push_back(rec(rec, id));
    }
    return out;
}

enum class Verdict { Separable, NotSeparable, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Separable: return "separable";
        case Verdict::NotSeparable: return "not_separable";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

struct LearnOptions {
    std::optional<std::size_t> budget;
};

struct LearnResult {
    Verdict verdict = Verdict::NotSeparable;
    std::shared_ptr<FormulaDag> dag;  // set when separable
    FormulaId formula = 0;
    std::size_t dag_size = 0;
    std::uint64_t tree_size = 0;
    BigInt bound = 0;
    std::size_t entries = 0;
    std::size_t rounds = 0;
    bool truncated = false;
    double seconds = 0.0;
};

/// Called after every learn run; used by test harnesses to audit size bounds.
inline std::function<void(const LearnResult&)>& learn_observer() {
    static std::function<void(const LearnResult&)> f;
    return f;
}

template <LogicInstance I>
LearnResult learn(const I& inst, const LearnOptions& opts = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    LearnResult r;
    r.bound = size_bound(inst);
    const auto table = closure(inst, opts.budget);
    r.entries = table.size();
    r.rounds = table.round_count();
    r.truncated = table.truncated();
    std::optional<std::size_t> hit;
    try {
        hit = check_separable(table, inst);
    } catch (const Error& e) {
        if (e.code() != Errc::PartialTableInconclusive) throw;
        r.verdict = Verdict::Inconclusive;
    }
    if (hit) {
        r.dag = std::make_shared<FormulaDag>(inst.signature());
        r.formula = witness(table, *hit, *r.dag);
        r.dag_size = r.dag->dag_size(r.formula);
        r.tree_size = r.dag->tree_size(r.formula);
        for (std::size_t m = 0; m < inst.model_count(); ++m) {
            if (inst.model_check(m, *r.dag, r.formula) != inst.is_positive(m))
                throw std::logic_error("witness failed independent model check");
        }
        r.verdict = Verdict::Separable;
    } else if (r.verdict != Verdict::Inconclusive) {
        r.verdict = Verdict::NotSeparable;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (learn_observer()) learn_observer()(r);
    return r;
}

}  // namespace seplearn

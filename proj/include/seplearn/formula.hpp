#pragma once

#include "seplearn/error.hpp"
#include "seplearn/signature.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace seplearn {

using FormulaId = std::uint32_t;

/// Hash-consed syntax DAG over one signature. Children always precede parents.
class FormulaDag {
public:
    explicit FormulaDag(LogicSignature sig) : sig_(std::make_shared<const LogicSignature>(std::move(sig))) {}
    explicit FormulaDag(std::shared_ptr<const LogicSignature> sig) : sig_(std::move(sig)) {}

    const LogicSignature& signature() const noexcept { return *sig_; }
    std::shared_ptr<const LogicSignature> signature_ptr() const noexcept { return sig_; }

    FormulaId intern(const std::string& op, std::vector<FormulaId> children = {}) {
        return intern(sig_->index_of(op), children);
    }

    FormulaId intern(OpIndex op, const std::vector<FormulaId>& children) {
        if (op >= sig_->size()) throw Error(Errc::UnknownOperator, "operator index " + std::to_string(op));
        const auto& decl = sig_->op(op);
        if (children.size() != static_cast<std::size_t>(decl.arity))
            throw Error(Errc::ArityMismatch, decl.name + " expects " + std::to_string(decl.arity) + " arguments, got " +
                                                 std::to_string(children.size()));
        for (std::size_t i = 0; i < children.size(); ++i) {
            check(children[i]);
            const TypeId t = nodes_[children[i]].type;
            if (!decl.accepts(static_cast<int>(i), t))
                throw Error(Errc::TypeMismatch, decl.name + " argument " + std::to_string(i) + " has type " +
                                                    sig_->type_name(t));
        }
        Key key{op, children.size() > 0 ? children[0] : kNone, children.size() > 1 ? children[1] : kNone};
        if (auto it = index_.find(key); it != index_.end()) return it->second;

        Node n;
        n.op = op;
        n.arity = static_cast<std::uint8_t>(children.size());
        n.child[0] = key.a;
        n.child[1] = key.b;
        n.type = decl.result_type;
        std::uint64_t ts = 1;
        for (FormulaId c : children) ts = sat_add(ts, nodes_[c].tree_size);
        n.tree_size = ts;
        const auto id = static_cast<FormulaId>(nodes_.size());
        nodes_.push_back(n);
        nodes_.back().dag_size = count_reachable(id);
        index_.emplace(key, id);
        return id;
    }

    std::size_t node_count() const noexcept { return nodes_.size(); }

    OpIndex op_index(FormulaId id) const { return node(id).op; }
    const OperatorDecl& op(FormulaId id) const { return sig_->op(node(id).op); }
    TypeId type_of(FormulaId id) const { return node(id).type; }
    std::span<const FormulaId> children(FormulaId id) const {
        const auto& n = node(id);
        return {n.child, n.arity};
    }
    FormulaId child(FormulaId id, int i) const { return node(id).child[i]; }

    /// |Sub(phi)|, cached at interning time.
    std::size_t dag_size(FormulaId id) const { return node(id).dag_size; }
    /// Number of nodes of the unfolded syntax tree (saturates at 2^64-1).
    std::uint64_t tree_size(FormulaId id) const { return node(id).tree_size; }

    /// Distinct reachable ids, recomputed by plain recursion.
    std::vector<FormulaId> subformulas(FormulaId id) const {
        check(id);
        std::vector<char> seen(id + 1, 0);
        std::vector<FormulaId> out;
        collect(id, seen, out);
        return out;
    }

    bool valid(FormulaId id) const noexcept { return id < nodes_.size(); }

private:
    static constexpr FormulaId kNone = std::numeric_limits<FormulaId>::max();

    struct Node {
        OpIndex op = 0;
        std::uint8_t arity = 0;
        FormulaId child[2] = {kNone, kNone};
        TypeId type = 0;
        std::size_t dag_size = 1;
        std::uint64_t tree_size = 1;
    };
    struct Key {
        OpIndex op;
        FormulaId a, b;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::uint64_t h = k.op;
            h = h * 0x9e3779b97f4a7c15ULL ^ k.a;
            h = h * 0x9e3779b97f4a7c15ULL ^ k.b;
            return static_cast<std::size_t>(h ^ (h >> 31));
        }
    };

    static std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
        return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
    }

    void check(FormulaId id) const {
        if (id >= nodes_.size()) throw Error(Errc::InvalidId, "formula id " + std::to_string(id));
    }
    const Node& node(FormulaId id) const {
        check(id);
        return nodes_[id];
    }

    std::size_t count_reachable(FormulaId root) const {
        std::vector<char> seen(root + 1, 0);
        std::vector<FormulaId> stack{root};
        std::size_t count = 0;
        seen[root] = 1;
        while (!stack.empty()) {
            const FormulaId x = stack.back();
            stack.pop_back();
            ++count;
            const auto& n = nodes_[x];
            for (int i = 0; i < n.arity; ++i) {
                if (!seen[n.child[i]]) {
                    seen[n.child[i]] = 1;
                    stack.push_back(n.child[i]);
                }
            }
        }
        return count;
    }

    void collect(FormulaId id, std::vector<char>& seen, std::vector<FormulaId>& out) const {
        if (seen[id]) return;
        seen[id] = 1;
        for (FormulaId c : children(id)) collect(c, seen, out);
        out.push_back(id);
    }

    std::shared_ptr<const LogicSignature> sig_;
    std::vector<Node> nodes_;
    std::unordered_map<Key, FormulaId, KeyHash> index_;
};

inline TypeId type_of(const LogicSignature& sig, const FormulaDag& dag, FormulaId id) {
    const TypeId t = dag.type_of(id);
    if (t >= sig.type_count()) throw Error(Errc::TypeMismatch, "type outside signature");
    return t;
}

/// Copies the formula rooted at `id` into `dst`, matching operators by name.
inline FormulaId transfer(const FormulaDag& src, FormulaId id, FormulaDag& dst) {
    std::unordered_map<FormulaId, FormulaId> memo;
    auto rec = [&](auto&& self, FormulaId x) -> FormulaId {
        if (auto it = memo.find(x); it != memo.end()) return it->second;
        std::vector<FormulaId> ch;
        for (FormulaId c : src.children(x)) ch.push_back(self(self, c));
        const FormulaId r = dst.intern(src.op(x).name, ch);
        memo.emplace(x, r);
        return r;
    };
    return rec(rec, id);
}

}  // namespace seplearn

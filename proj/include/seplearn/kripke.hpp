#pragma once

#include "seplearn/bits.hpp"
#include "seplearn/error.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace seplearn {

/// Kripke structure (Q, I, A, delta, P, pi). Missing (q, a) transitions are empty.
class KripkeStructure {
public:
    KripkeStructure() = default;

    /// States are 0..n-1; `names` may be empty (defaults to "q<i>").
    KripkeStructure(std::size_t n, std::vector<std::size_t> initial, std::vector<std::string> actions,
                    std::vector<std::set<std::string>> labels, std::vector<std::string> names = {})
        : n_(n), initial_(n), actions_(std::move(actions)), labels_(std::move(labels)), names_(std::move(names)) {
        if (n_ == 0) throw Error(Errc::InvalidModel, "structure has no states");
        if (labels_.size() != n_) throw Error(Errc::InvalidModel, "labeling must cover every state");
        if (initial.empty()) throw Error(Errc::InvalidModel, "empty initial set");
        for (auto q : initial) {
            if (q >= n_) throw Error(Errc::InvalidModel, "initial state out of range");
            initial_.set(q);
        }
        if (names_.empty()) {
            for (std::size_t q = 0; q < n_; ++q) names_.push_back("q" + std::to_string(q));
        }
        if (names_.size() != n_) throw Error(Errc::InvalidModel, "state name count mismatch");
        std::sort(actions_.begin(), actions_.end());
        actions_.erase(std::unique(actions_.begin(), actions_.end()), actions_.end());
        succ_.assign(actions_.size(), std::vector<std::vector<std::size_t>>(n_));
        for (std::size_t q = 0; q < n_; ++q) {
            for (const auto& p : labels_[q]) props_.insert(p);
        }
        for (const auto& p : props_) {
            Bits b(n_);
            for (std::size_t q = 0; q < n_; ++q) {
                if (labels_[q].count(p)) b.set(q);
            }
            prop_sets_.emplace(p, std::move(b));
        }
    }

    void add_edge(std::size_t q, const std::string& action, std::size_t r) {
        if (q >= n_ || r >= n_) throw Error(Errc::InvalidModel, "transition endpoint out of range");
        const std::size_t a = action_index(action);
        auto& v = succ_[a][q];
        if (std::find(v.begin(), v.end(), r) == v.end()) {
            v.push_back(r);
            std::sort(v.begin(), v.end());
        }
    }

    std::size_t size() const noexcept { return n_; }
    const Bits& initial() const noexcept { return initial_; }
    const std::vector<std::string>& actions() const noexcept { return actions_; }
    const std::set<std::string>& propositions() const noexcept { return props_; }
    const std::set<std::string>& label(std::size_t q) const { return labels_.at(q); }
    const std::string& name(std::size_t q) const { return names_.at(q); }

    bool has_action(const std::string& a) const { return std::binary_search(actions_.begin(), actions_.end(), a); }
    std::size_t action_index(const std::string& a) const {
        auto it = std::lower_bound(actions_.begin(), actions_.end(), a);
        if (it == actions_.end() || *it != a) throw Error(Errc::UnknownAction, a);
        return static_cast<std::size_t>(it - actions_.begin());
    }

    /// delta(q, a); empty when the action is absent from this structure.
    const std::vector<std::size_t>& successors(std::size_t q, const std::string& a) const {
        static const std::vector<std::size_t> none;
        if (!has_action(a)) return none;
        return succ_[action_index(a)][q];
    }
    const std::vector<std::size_t>& successors_by_index(std::size_t a, std::size_t q) const { return succ_[a][q]; }

    /// Union of delta(q, a) over all actions (actionless reading).
    std::vector<std::size_t> successors(std::size_t q) const {
        std::vector<std::size_t> r;
        for (std::size_t a = 0; a < actions_.size(); ++a) r.insert(r.end(), succ_[a][q].begin(), succ_[a][q].end());
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        return r;
    }

    /// States labeled with p; empty when p is not among this structure's propositions.
    Bits prop_set(const std::string& p) const {
        auto it = prop_sets_.find(p);
        return it == prop_sets_.end() ? Bits(n_) : it->second;
    }

    bool nonblocking() const {
        for (std::size_t q = 0; q < n_; ++q) {
            if (successors(q).empty()) return false;
        }
        return true;
    }

    friend bool operator==(const KripkeStructure& a, const KripkeStructure& b) {
        return a.n_ == b.n_ && a.initial_ == b.initial_ && a.actions_ == b.actions_ && a.labels_ == b.labels_ &&
               a.names_ == b.names_ && a.succ_ == b.succ_;
    }

private:
    std::size_t n_ = 0;
    Bits initial_;
    std::vector<std::string> actions_;
    std::vector<std::set<std::string>> labels_;
    std::vector<std::string> names_;
    std::vector<std::vector<std::vector<std::size_t>>> succ_;  // [action][state]
    std::set<std::string> props_;
    std::map<std::string, Bits> prop_sets_;
};

/// Successor lists of the actionless reading, precomputed.
struct SuccessorGraph {
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::vector<std::size_t>> pred;

    explicit SuccessorGraph(const KripkeStructure& k) : succ(k.size()), pred(k.size()) {
        for (std::size_t q = 0; q < k.size(); ++q) {
            succ[q] = k.successors(q);
            for (auto r : succ[q]) pred[r].push_back(q);
        }
    }
};

namespace detail {

/// States with a path staying in `through` until it reaches `target` (backward search).
inline Bits backward_reach(const SuccessorGraph& g, const Bits& through, const Bits& target) {
    Bits r = target;
    std::deque<std::size_t> queue;
    target.for_each([&](std::size_t q) { queue.push_back(q); });
    while (!queue.empty()) {
        const auto x = queue.front();
        queue.pop_front();
        for (auto p : g.pred[x]) {
            if (!r.test(p) && through.test(p)) {
                r.set(p);
                queue.push_back(p);
            }
        }
    }
    return r;
}

/// States all of whose paths stay in `through` until reaching `target` (successor counters).
inline Bits forall_reach(const SuccessorGraph& g, const Bits& through, const Bits& target) {
    const std::size_t n = g.succ.size();
    std::vector<std::size_t> missing(n);
    for (std::size_t q = 0; q < n; ++q) missing[q] = g.succ[q].size();
    Bits r = target;
    std::deque<std::size_t> queue;
    target.for_each([&](std::size_t q) { queue.push_back(q); });
    while (!queue.empty()) {
        const auto x = queue.front();
        queue.pop_front();
        for (auto p : g.pred[x]) {
            if (--missing[p] == 0 && !r.test(p) && through.test(p)) {
                r.set(p);
                queue.push_back(p);
            }
        }
    }
    return r;
}

/// Largest subset of s in which every state keeps a successor inside the subset.
inline Bits exists_prune(const SuccessorGraph& g, const Bits& s) {
    const std::size_t n = g.succ.size();
    Bits r = s;
    std::vector<std::size_t> inside(n, 0);
    std::deque<std::size_t> queue;
    for (std::size_t q = 0; q < n; ++q) {
        for (auto x : g.succ[q]) inside[q] += s.test(x) ? 1 : 0;
        if (r.test(q) && inside[q] == 0) {
            r.reset(q);
            queue.push_back(q);
        }
    }
    while (!queue.empty()) {
        const auto x = queue.front();
        queue.pop_front();
        for (auto p : g.pred[x]) {
            if (r.test(p) && --inside[p] == 0) {
                r.reset(p);
                queue.push_back(p);
            }
        }
    }
    return r;
}

}  // namespace detail

/// Rejects structures with a state that has no successor.
inline const KripkeStructure& validate_nonblocking(const KripkeStructure& k) {
    for (std::size_t q = 0; q < k.size(); ++q) {
        if (k.successors(q).empty()) throw Error(Errc::BlockingState, "state " + k.name(q) + " has no successor");
    }
    return k;
}

}  // namespace seplearn

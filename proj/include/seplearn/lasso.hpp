#pragma once

#include "seplearn/bits.hpp"
#include "seplearn/error.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace seplearn {

using Letter = std::set<std::string>;

/// Ultimately periodic word u.v^omega; an empty loop denotes the finite word u.
class LassoWord {
public:
    LassoWord() = default;
    LassoWord(std::vector<Letter> prefix, std::vector<Letter> loop) : u_(std::move(prefix)), v_(std::move(loop)) {
        if (u_.empty() && v_.empty()) throw Error(Errc::InvalidModel, "lasso word must be nonempty");
    }

    const std::vector<Letter>& prefix() const noexcept { return u_; }
    const std::vector<Letter>& loop() const noexcept { return v_; }
    bool finite() const noexcept { return v_.empty(); }
    /// |u| + |v|: the number of canonical positions.
    std::size_t size() const noexcept { return u_.size() + v_.size(); }
    std::size_t loop_start() const noexcept { return u_.size(); }

    const Letter& at(std::size_t i) const { return i < u_.size() ? u_[i] : v_[i - u_.size()]; }

    /// Canonical position reached from canonical position i in one step, if any.
    std::optional<std::size_t> next(std::size_t i) const {
        if (i + 1 < size()) return i + 1;
        if (finite()) return std::nullopt;
        return u_.size();
    }

    /// Letter at absolute index j of the (possibly infinite) word.
    const Letter& letter(std::size_t j) const {
        if (j < u_.size()) return u_[j];
        if (finite()) throw Error(Errc::InvalidArgument, "index past the end of a finite word");
        return v_[(j - u_.size()) % v_.size()];
    }

    /// Suffix w[j:], with the loop rotated when j reaches into it.
    LassoWord suffix(std::size_t j) const {
        if (j < u_.size()) return LassoWord({u_.begin() + static_cast<std::ptrdiff_t>(j), u_.end()}, v_);
        if (finite()) throw Error(Errc::InvalidArgument, "suffix past the end of a finite word");
        const std::size_t r = (j - u_.size()) % v_.size();
        std::vector<Letter> rot(v_.begin() + static_cast<std::ptrdiff_t>(r), v_.end());
        rot.insert(rot.end(), v_.begin(), v_.begin() + static_cast<std::ptrdiff_t>(r));
        return LassoWord({}, std::move(rot));
    }

    /// The same infinite word presented as (u.v, v).
    LassoWord unrolled() const {
        std::vector<Letter> u = u_;
        u.insert(u.end(), v_.begin(), v_.end());
        return LassoWord(std::move(u), v_);
    }

    friend bool operator==(const LassoWord&, const LassoWord&) = default;

private:
    std::vector<Letter> u_;
    std::vector<Letter> v_;
};

/// Succ, After and Between over the canonical positions of a lasso.
class PositionTables {
public:
    explicit PositionTables(const LassoWord& w) : n_(w.size()), lu_(w.loop_start()), finite_(w.finite()) {
        after_.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            Bits a(n_);
            for (std::size_t j = std::min(i, lu_); j < n_; ++j) a.set(j);
            after_.push_back(std::move(a));
        }
        between_.assign(n_, std::vector<Bits>(n_, Bits(n_)));
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < n_; ++k) {
                Bits& b = between_[i][k];
                if (i <= k) {
                    for (std::size_t j = i; j < k; ++j) b.set(j);
                } else {
                    for (std::size_t j = i; j < n_; ++j) b.set(j);
                    for (std::size_t j = lu_; j < k; ++j) b.set(j);
                }
            }
        }
    }

    std::size_t size() const noexcept { return n_; }
    std::optional<std::size_t> succ(std::size_t i) const {
        if (i + 1 < n_) return i + 1;
        if (finite_) return std::nullopt;
        return lu_;
    }
    const Bits& after(std::size_t i) const { return after_.at(i); }
    /// Positions strictly before k on the way from i; meaningful for k in After(i).
    const Bits& between(std::size_t i, std::size_t k) const { return between_.at(i).at(k); }

private:
    std::size_t n_;
    std::size_t lu_;
    bool finite_;
    std::vector<Bits> after_;
    std::vector<std::vector<Bits>> between_;
};

}  // namespace seplearn

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace seplearn {

/// Fixed-length bit vector used for state sets, position sets and summaries.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n, bool value = false) : size_(n), words_((n + 63) / 64, value ? ~0ULL : 0ULL) {
        trim();
    }

    static Bits full(std::size_t n) { return Bits(n, true); }

    std::size_t size() const noexcept { return size_; }

    bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
    void set(std::size_t i, bool v = true) noexcept {
        if (v) {
            words_[i >> 6] |= 1ULL << (i & 63);
        } else {
            words_[i >> 6] &= ~(1ULL << (i & 63));
        }
    }
    void reset(std::size_t i) noexcept { set(i, false); }

    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool any() const noexcept {
        for (auto w : words_) {
            if (w) return true;
        }
        return false;
    }
    bool none() const noexcept { return !any(); }
    bool all() const noexcept { return count() == size_; }

    Bits& operator&=(const Bits& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    Bits& operator|=(const Bits& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bits& operator-=(const Bits& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }
    friend Bits operator&(Bits a, const Bits& b) noexcept { return a &= b; }
    friend Bits operator|(Bits a, const Bits& b) noexcept { return a |= b; }
    friend Bits operator-(Bits a, const Bits& b) noexcept { return a -= b; }

    Bits operator~() const {
        Bits r = *this;
        for (auto& w : r.words_) w = ~w;
        r.trim();
        return r;
    }

    bool subset_of(const Bits& o) const noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & ~o.words_[i]) return false;
        }
        return true;
    }
    bool intersects(const Bits& o) const noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & o.words_[i]) return true;
        }
        return false;
    }

    /// Calls f(i) for every set bit in ascending order.
    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t x = words_[w];
            while (x) {
                const int b = std::countr_zero(x);
                f(w * 64 + static_cast<std::size_t>(b));
                x &= x - 1;
            }
        }
    }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> r;
        for_each([&](std::size_t i) { r.push_back(i); });
        return r;
    }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for_each([&](std::size_t i) {
            if (!first) s += ",";
            s += std::to_string(i);
            first = false;
        });
        return s + "}";
    }

    std::size_t hash() const noexcept {
        std::size_t h = size_ * 0x9e3779b97f4a7c15ULL;
        for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
        return h;
    }

    friend bool operator==(const Bits&, const Bits&) = default;
    friend auto operator<=>(const Bits&, const Bits&) = default;

private:
    void trim() noexcept {
        if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (1ULL << (size_ % 64)) - 1;
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace seplearn

template <>
struct std::hash<seplearn::Bits> {
    std::size_t operator()(const seplearn::Bits& b) const noexcept { return b.hash(); }
};

// ============================================================================
// bits.hpp — small dynamic bitset used by the type-elimination engine
// ============================================================================

#ifndef MODALK_SRC_BITS_HPP
#define MODALK_SRC_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace modalk::detail {

class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const noexcept { return n_; }

    void set(std::size_t i) { w_[i >> 6] |= (1ull << (i & 63)); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(1ull << (i & 63)); }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

    bool subset_of(const Bits& o) const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & ~o.w_[k]) return false;
        return true;
    }

    bool intersects(const Bits& o) const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & o.w_[k]) return true;
        return false;
    }

    bool any() const {
        for (auto w : w_)
            if (w) return true;
        return false;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    Bits& operator|=(const Bits& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
        return *this;
    }

    Bits& operator&=(const Bits& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
        return *this;
    }

    void clear() {
        for (auto& w : w_) w = 0;
    }

    // iterate set bits in ascending order
    template <typename F>
    void for_each(F&& fn) const {
        for (std::size_t k = 0; k < w_.size(); ++k) {
            std::uint64_t w = w_[k];
            while (w) {
                unsigned bit = static_cast<unsigned>(__builtin_ctzll(w));
                fn(k * 64 + bit);
                w &= w - 1;
            }
        }
    }

    friend bool operator==(const Bits& a, const Bits& b) { return a.n_ == b.n_ && a.w_ == b.w_; }
    friend bool operator<(const Bits& a, const Bits& b) {
        // ascending as unsigned bit patterns (most significant word first)
        for (std::size_t k = a.w_.size(); k-- > 0;)
            if (a.w_[k] != b.w_[k]) return a.w_[k] < b.w_[k];
        return false;
    }

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ull;
        for (auto w : w_) h = (h ^ w) * 1099511628211ull;
        return h;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

}  // namespace modalk::detail

#endif  // MODALK_SRC_BITS_HPP

#pragma once

// Fixed-length bit vectors used as genotypes of pseudo-boolean functions.
//
// Variable indexing convention: variables are numbered 1..n in every external
// representation (text formats, printed masks). Internally positions are
// 0-based, so variable i lives at bit i-1. In the string form "101" the
// leftmost character is variable 1.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace graybox {

class BitVector {
public:
    BitVector() = default;

    explicit BitVector(int n) : n_(check_size(n)), words_((n + 63) / 64, 0) {}

    // Builds from the external string form, leftmost character = variable 1.
    static BitVector from_string(const std::string& s) {
        BitVector x(static_cast<int>(s.size()));
        for (int i = 0; i < x.n_; ++i) {
            char c = s[static_cast<size_t>(i)];
            if (c == '1') {
                x.set(i, true);
            } else if (c != '0') {
                throw std::invalid_argument("BitVector: string must be over {0,1}: " + s);
            }
        }
        return x;
    }

    int size() const { return n_; }

    bool get(int pos) const { return (words_[static_cast<size_t>(pos) >> 6] >> (pos & 63)) & 1u; }

    void set(int pos, bool v) {
        uint64_t m = uint64_t{1} << (pos & 63);
        if (v) {
            words_[static_cast<size_t>(pos) >> 6] |= m;
        } else {
            words_[static_cast<size_t>(pos) >> 6] &= ~m;
        }
    }

    void flip(int pos) { words_[static_cast<size_t>(pos) >> 6] ^= uint64_t{1} << (pos & 63); }

    int popcount() const {
        int c = 0;
        for (uint64_t w : words_) c += __builtin_popcountll(w);
        return c;
    }

    int hamming(const BitVector& o) const {
        require_same_size(o);
        int c = 0;
        for (size_t i = 0; i < words_.size(); ++i) c += __builtin_popcountll(words_[i] ^ o.words_[i]);
        return c;
    }

    // 0-based positions where the two vectors differ, ascending.
    std::vector<int> diff_positions(const BitVector& o) const {
        require_same_size(o);
        std::vector<int> d;
        for (size_t i = 0; i < words_.size(); ++i) {
            uint64_t w = words_[i] ^ o.words_[i];
            while (w) {
                d.push_back(static_cast<int>(i * 64) + __builtin_ctzll(w));
                w &= w - 1;
            }
        }
        return d;
    }

    BitVector complemented() const {
        BitVector r(*this);
        for (auto& w : r.words_) w = ~w;
        r.mask_tail();
        return r;
    }

    // Index into a 2^n value table; variable i maps to table bit i-1. Only
    // meaningful for toy sizes (n <= 25 or so).
    uint32_t table_index() const { return static_cast<uint32_t>(words_.empty() ? 0 : words_[0]); }

    static BitVector from_table_index(uint32_t idx, int n) {
        BitVector x(n);
        if (!x.words_.empty()) x.words_[0] = idx;
        x.mask_tail();
        return x;
    }

    std::string to_string() const {
        std::string s(static_cast<size_t>(n_), '0');
        for (int i = 0; i < n_; ++i)
            if (get(i)) s[static_cast<size_t>(i)] = '1';
        return s;
    }

    bool operator==(const BitVector& o) const { return n_ == o.n_ && words_ == o.words_; }
    bool operator!=(const BitVector& o) const { return !(*this == o); }
    bool operator<(const BitVector& o) const {
        if (n_ != o.n_) return n_ < o.n_;
        return words_ < o.words_;
    }

    size_t hash() const {
        size_t h = static_cast<size_t>(n_);
        for (uint64_t w : words_) h = h * 0x9E3779B97F4A7C15ull + static_cast<size_t>(w);
        return h;
    }

private:
    static int check_size(int n) {
        if (n < 0) throw std::invalid_argument("BitVector: negative size");
        return n;
    }

    void require_same_size(const BitVector& o) const {
        if (n_ != o.n_) throw std::invalid_argument("BitVector: size mismatch");
    }

    void mask_tail() {
        if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (uint64_t{1} << (n_ % 64)) - 1;
    }

    int n_ = 0;
    std::vector<uint64_t> words_;
};

struct BitVectorHash {
    size_t operator()(const BitVector& x) const { return x.hash(); }
};

}  // namespace graybox

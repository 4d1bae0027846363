#include "graybox/walsh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace graybox {

namespace {

bool mask_less(const Mask& a, const Mask& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

void check_mask(const Mask& m, int n) {
    for (size_t i = 0; i < m.size(); ++i) {
        if (static_cast<int>(m[i]) >= n)
            throw std::invalid_argument("WalshExpansion: mask index out of range");
        if (i > 0 && m[i] <= m[i - 1])
            throw std::invalid_argument("WalshExpansion: mask indices must be strictly ascending");
    }
}

void check_toy(int n, const char* what) {
    if (n > kToyLimit)
        throw std::invalid_argument(std::string(what) + ": n exceeds the enumeration limit of " +
                                    std::to_string(kToyLimit));
}

}  // namespace

WalshExpansion::WalshExpansion(int n, std::vector<WalshTerm> terms) : n_(n), terms_(std::move(terms)) {
    if (n < 0) throw std::invalid_argument("WalshExpansion: negative dimension");
    for (auto& t : terms_) check_mask(t.mask, n);
    std::sort(terms_.begin(), terms_.end(),
              [](const WalshTerm& a, const WalshTerm& b) { return mask_less(a.mask, b.mask); });
    // Duplicate masks merge by coefficient addition; exact zeros are dropped.
    std::vector<WalshTerm> unique;
    unique.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!unique.empty() && unique.back().mask == t.mask)
            unique.back().w += t.w;
        else
            unique.push_back(std::move(t));
    }
    std::erase_if(unique, [](const WalshTerm& t) { return t.w == 0.0; });
    terms_ = std::move(unique);
    freeze();
}

void WalshExpansion::freeze() {
    offsets_.clear();
    flat_.clear();
    coef_.clear();
    offsets_.reserve(terms_.size() + 1);
    coef_.reserve(terms_.size());
    offsets_.push_back(0);
    for (const auto& t : terms_) {
        flat_.insert(flat_.end(), t.mask.begin(), t.mask.end());
        offsets_.push_back(static_cast<uint32_t>(flat_.size()));
        coef_.push_back(t.w);
    }
}

double WalshExpansion::evaluate(const BitVector& x) const {
    if (x.size() != n_) throw std::invalid_argument("WalshExpansion::evaluate: size mismatch");
    double s = 0.0;
    for (size_t t = 0; t < coef_.size(); ++t) {
        int ones = 0;
        for (uint32_t k = offsets_[t]; k < offsets_[t + 1]; ++k) ones ^= x.get(flat_[k]) ? 1 : 0;
        s += ones ? -coef_[t] : coef_[t];
    }
    return s;
}

WalshExpansion WalshExpansion::merged(const WalshExpansion& other) const {
    if (n_ != other.n_) throw std::invalid_argument("WalshExpansion::merged: dimension mismatch");
    WalshBuilder b(n_);
    for (const auto& t : terms_) b.add_term(t);
    for (const auto& t : other.terms_) b.add_term(t);
    return b.build();
}

std::vector<double> WalshExpansion::value_table() const {
    check_toy(n_, "WalshExpansion::value_table");
    std::vector<double> t(size_t{1} << n_, 0.0);
    for (const auto& term : terms_) {
        uint32_t bits = 0;
        for (uint16_t i : term.mask) bits |= uint32_t{1} << i;
        t[bits] = term.w;
    }
    walsh_hadamard(t);
    return t;
}

namespace {

std::vector<BitVector> extreme_points(const std::vector<double>& table, int n, bool maximize) {
    double best = table[0];
    for (double v : table) {
        if (maximize ? v > best : v < best) best = v;
    }
    std::vector<BitVector> out;
    for (uint32_t i = 0; i < table.size(); ++i)
        if (table[i] == best) out.push_back(BitVector::from_table_index(i, n));
    return out;
}

}  // namespace

std::vector<BitVector> WalshExpansion::global_optima() const {
    check_toy(n_, "WalshExpansion::global_optima");
    return extreme_points(value_table(), n_, true);
}

std::vector<BitVector> WalshExpansion::global_minima() const {
    check_toy(n_, "WalshExpansion::global_minima");
    return extreme_points(value_table(), n_, false);
}

double WalshExpansion::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::fabs(t.w));
    return m;
}

void WalshBuilder::add(Mask m, double w) {
    check_mask(m, n_);
    acc_[std::move(m)] += w;
}

WalshExpansion WalshBuilder::build(double prune_rel) const {
    double floor = 0.0;
    if (prune_rel > 0.0) {
        double mx = 0.0;
        for (const auto& [m, w] : acc_) mx = std::max(mx, std::fabs(w));
        floor = prune_rel * std::max(1.0, mx);
    }
    std::vector<WalshTerm> terms;
    terms.reserve(acc_.size());
    for (const auto& [m, w] : acc_) {
        if (w == 0.0 || std::fabs(w) < floor) continue;
        terms.push_back({m, w});
    }
    return WalshExpansion(n_, std::move(terms));
}

void walsh_hadamard(std::vector<double>& t) {
    size_t n = t.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("walsh_hadamard: table size must be a power of two");
    for (size_t h = 1; h < n; h <<= 1) {
        for (size_t i = 0; i < n; i += h << 1) {
            for (size_t j = i; j < i + h; ++j) {
                double a = t[j], b = t[j + h];
                t[j] = a + b;
                t[j + h] = a - b;
            }
        }
    }
}

WalshExpansion wht_full(const std::function<double(const BitVector&)>& f, int n) {
    check_toy(n, "wht_full");
    if (n < 0) throw std::invalid_argument("wht_full: negative dimension");
    std::vector<double> t(size_t{1} << n);
    for (uint32_t i = 0; i < t.size(); ++i) t[i] = f(BitVector::from_table_index(i, n));
    walsh_hadamard(t);
    double scale = 1.0 / static_cast<double>(size_t{1} << n);
    WalshBuilder b(n);
    for (uint32_t bits = 0; bits < t.size(); ++bits) {
        double w = t[bits] * scale;
        if (w == 0.0) continue;
        Mask m;
        for (int i = 0; i < n; ++i)
            if ((bits >> i) & 1u) m.push_back(static_cast<uint16_t>(i));
        b.add(std::move(m), w);
    }
    return b.build(kPruneRel);
}

WalshExpansion from_additive(const AdditiveFunction& f) {
    if (f.n < 0) throw std::invalid_argument("from_additive: negative dimension");
    WalshBuilder b(f.n);
    for (const auto& sub : f.subs) {
        int k = static_cast<int>(sub.vars.size());
        check_toy(k, "from_additive subfunction");
        if (sub.table.size() != (size_t{1} << k))
            throw std::invalid_argument("from_additive: table size must be 2^|vars|");
        std::vector<double> t = sub.table;
        walsh_hadamard(t);
        double scale = 1.0 / static_cast<double>(size_t{1} << k);
        for (uint32_t bits = 0; bits < t.size(); ++bits) {
            double w = t[bits] * scale;
            if (w == 0.0) continue;
            Mask m;
            for (int j = 0; j < k; ++j)
                if ((bits >> j) & 1u) m.push_back(sub.vars[static_cast<size_t>(j)]);
            std::sort(m.begin(), m.end());
            b.add(std::move(m), w);
        }
    }
    return b.build(kPruneRel);
}

std::string write_walsh_text(const WalshExpansion& e) {
    std::string out = "# n=" + std::to_string(e.n()) + "\n";
    char buf[64];
    for (const auto& t : e.terms()) {
        if (t.mask.empty()) {
            out += "const";
        } else {
            for (size_t i = 0; i < t.mask.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(t.mask[i] + 1);
            }
        }
        std::snprintf(buf, sizeof buf, ":%.17e\n", t.w);
        out += buf;
    }
    return out;
}

WalshExpansion read_walsh_text(const std::string& text, int n) {
    int n_comment = -1;
    int max_index = 0;
    struct Raw {
        Mask mask;
        double w;
    };
    std::vector<Raw> raws;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) {
            // "# n=<n>" records the dimension; other comments are ignored.
            size_t at = line.find("n=", hash);
            if (at != std::string::npos && n_comment < 0) n_comment = std::atoi(line.c_str() + at + 2);
            line = line.substr(0, hash);
        }
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t z = line.find_last_not_of(" \t\r");
        line = line.substr(a, z - a + 1);

        size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("walsh text line " + std::to_string(lineno) + ": missing ':'");
        std::string head = line.substr(0, colon);
        std::string tail = line.substr(colon + 1);
        char* end = nullptr;
        double w = std::strtod(tail.c_str(), &end);
        if (end == tail.c_str())
            throw std::invalid_argument("walsh text line " + std::to_string(lineno) + ": bad coefficient");

        Mask m;
        if (head != "const") {
            std::istringstream hs(head);
            std::string tok;
            while (std::getline(hs, tok, ',')) {
                int idx = std::atoi(tok.c_str());
                if (idx < 1)
                    throw std::invalid_argument("walsh text line " + std::to_string(lineno) +
                                                ": variable indices are 1-based");
                if (!m.empty() && idx - 1 <= m.back())
                    throw std::invalid_argument("walsh text line " + std::to_string(lineno) +
                                                ": indices must be ascending");
                m.push_back(static_cast<uint16_t>(idx - 1));
                max_index = std::max(max_index, idx);
            }
        }
        raws.push_back({std::move(m), w});
    }
    int dim = n >= 0 ? n : (n_comment >= 0 ? n_comment : max_index);
    WalshBuilder b(dim);
    for (auto& r : raws) b.add(std::move(r.mask), r.w);
    return b.build();
}

}  // namespace graybox

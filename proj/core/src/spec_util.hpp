#pragma once

// Internal helpers shared by the "family:key=value,..." spec-string parsers.
// Not installed with the public headers.

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace graybox::detail {

[[noreturn]] inline void fail(const std::string& msg) { throw std::invalid_argument(msg); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
}

inline std::string fmt_u64(uint64_t v) {
    char b[32];
    std::snprintf(b, sizeof b, "%llu", static_cast<unsigned long long>(v));
    return b;
}

inline std::string fmt_short(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%g", v);
    return b;
}

// Shortest representation that round-trips exactly; used for CSV cells.
inline std::string fmt_double(double v) {
    char b[64];
    auto [end, ec] = std::to_chars(b, b + sizeof b, v);
    (void)ec;
    return std::string(b, end);
}

using KvMap = std::map<std::string, std::string>;

inline KvMap parse_kv(const std::string& s, const std::string& ctx) {
    KvMap kv;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t comma = s.find(',', pos);
        std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        size_t eq = item.find('=');
        require(eq != std::string::npos && eq > 0 && eq + 1 < item.size(),
                ctx + ": expected key=value, got '" + item + "'");
        std::string key = item.substr(0, eq);
        require(!kv.count(key), ctx + ": duplicate key '" + key + "'");
        kv[key] = item.substr(eq + 1);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return kv;
}

inline long long parse_ll(const std::string& v, const std::string& ctx) {
    errno = 0;
    char* end = nullptr;
    long long r = std::strtoll(v.c_str(), &end, 10);
    require(errno == 0 && end != v.c_str() && *end == '\0', ctx + ": not an integer: '" + v + "'");
    return r;
}

inline uint64_t parse_u64(const std::string& v, const std::string& ctx) {
    require(!v.empty() && v[0] != '-', ctx + ": not a non-negative integer: '" + v + "'");
    errno = 0;
    char* end = nullptr;
    unsigned long long r = std::strtoull(v.c_str(), &end, 10);
    require(errno == 0 && end != v.c_str() && *end == '\0',
            ctx + ": not a non-negative integer: '" + v + "'");
    return r;
}

inline double parse_double(const std::string& v, const std::string& ctx) {
    errno = 0;
    char* end = nullptr;
    double r = std::strtod(v.c_str(), &end);
    require(errno == 0 && end != v.c_str() && *end == '\0' && std::isfinite(r),
            ctx + ": not a finite number: '" + v + "'");
    return r;
}

inline std::string take(KvMap& kv, const std::string& key, const std::string& ctx) {
    auto it = kv.find(key);
    require(it != kv.end(), ctx + ": missing key '" + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
}

inline int take_int(KvMap& kv, const std::string& key, const std::string& ctx) {
    long long v = parse_ll(take(kv, key, ctx), ctx + " " + key);
    require(v >= std::numeric_limits<int>::min() && v <= std::numeric_limits<int>::max(),
            ctx + ": " + key + " out of range");
    return static_cast<int>(v);
}

inline void expect_empty(const KvMap& kv, const std::string& ctx) {
    if (!kv.empty()) fail(ctx + ": unknown key '" + kv.begin()->first + "'");
}

}  // namespace graybox::detail

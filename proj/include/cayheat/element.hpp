#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cayheat {

using Int = std::int64_t;
using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;  // row-major, rows of length d

struct OverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in add");
    return r;
}

inline Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in sub");
    return r;
}

inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in mul");
    return r;
}

/// Group element of an extension of a finite group F by Z^d: a lattice
/// vector together with an index into F. All arithmetic is exact; overflow
/// of the 64-bit coordinates is a hard error.
struct Element {
    IntVec vec;
    int fidx = 0;

    Element() = default;
    Element(IntVec v, int f) : vec(std::move(v)), fidx(f) {}

    bool operator==(const Element& o) const { return fidx == o.fidx && vec == o.vec; }
    bool operator!=(const Element& o) const { return !(*this == o); }
};

/// Lexicographic order on (vec, fidx); used for deterministic enumeration.
inline bool lex_less(const Element& a, const Element& b) {
    if (a.vec != b.vec) return a.vec < b.vec;
    return a.fidx < b.fidx;
}

struct ElementHash {
    std::size_t operator()(const Element& e) const {
        std::size_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t x) {
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        };
        for (Int v : e.vec) mix(static_cast<std::uint64_t>(v));
        mix(static_cast<std::uint64_t>(e.fidx));
        return h;
    }
};

inline Element identity_element(int d) { return Element(IntVec(static_cast<std::size_t>(d), 0), 0); }

inline std::string to_string(const Element& e) {
    std::string s = "(";
    for (std::size_t i = 0; i < e.vec.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(e.vec[i]);
    }
    s += "|" + std::to_string(e.fidx) + ")";
    return s;
}

/// y = M x with checked arithmetic.
inline IntVec mat_apply(const IntMat& m, const IntVec& x) {
    IntVec y(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        Int acc = 0;
        for (std::size_t j = 0; j < x.size(); ++j)
            acc = checked_add(acc, checked_mul(m[i][j], x[j]));
        y[i] = acc;
    }
    return y;
}

inline IntVec vec_add(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_add(a[i], b[i]);
    return r;
}

inline IntVec vec_neg(const IntVec& a) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_sub(0, a[i]);
    return r;
}

}  // namespace cayheat

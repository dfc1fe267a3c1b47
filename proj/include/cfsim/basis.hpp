#pragma once

#include <array>
#include <cstdint>

#include "cfsim/errors.hpp"

namespace cfsim {

// The three circuit modes: two transmons and the coupler.
enum class Mode : int { Q1 = 0, Q2 = 1, Coupler = 2 };

inline int mode_index(Mode m) { return static_cast<int>(m); }

// Level counts per mode; fixes the tensor-product ordering.
struct ModeDims {
    int d1 = 0, d2 = 0, dc = 0;

    int total() const { return d1 * d2 * dc; }
    int dim(Mode m) const {
        switch (m) {
            case Mode::Q1: return d1;
            case Mode::Q2: return d2;
            case Mode::Coupler: return dc;
        }
        throw ConfigError("invalid mode");
    }
};

// Occupation triple (q1, q2, r) with its flat index into the tensor basis.
// Ordering is fixed row-major with q1 slowest:
//   flat = q1*d2*dc + q2*dc + r
struct BasisIndex {
    int q1 = 0, q2 = 0, r = 0;
    int flat = 0;
};

inline int flat_index(int q1, int q2, int r, const ModeDims& d) {
    return (q1 * d.d2 + q2) * d.dc + r;
}

inline BasisIndex make_basis_index(int q1, int q2, int r, const ModeDims& d) {
    if (q1 < 0 || q1 >= d.d1 || q2 < 0 || q2 >= d.d2 || r < 0 || r >= d.dc)
        throw ConfigError("occupation numbers outside the truncated basis");
    return BasisIndex{q1, q2, r, flat_index(q1, q2, r, d)};
}

inline BasisIndex unflatten(int flat, const ModeDims& d) {
    BasisIndex b;
    b.flat = flat;
    b.r = flat % d.dc;
    flat /= d.dc;
    b.q2 = flat % d.d2;
    b.q1 = flat / d.d2;
    return b;
}

inline int occupation(const BasisIndex& b, Mode m) {
    switch (m) {
        case Mode::Q1: return b.q1;
        case Mode::Q2: return b.q2;
        case Mode::Coupler: return b.r;
    }
    throw ConfigError("invalid mode");
}

}  // namespace cfsim

// Sylvester Hadamard matrices and the fast Walsh-Hadamard transform.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <span>

#include "scbcs/errors.hpp"

namespace scbcs {

inline bool is_power_of_two(long long v) { return v >= 1 && (v & (v - 1)) == 0; }

inline int integer_sqrt(int v) {
    int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v))));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Dense Sylvester-construction Hadamard matrix of order m (+-1 entries),
// satisfying H * H^T = m * I.
inline Eigen::MatrixXd hadamard(int m) {
    if (!is_power_of_two(m)) throw InvalidOrder("Hadamard order must be a power of 2");
    Eigen::MatrixXd h(1, 1);
    h(0, 0) = 1.0;
    for (int k = 1; k < m; k *= 2) {
        Eigen::MatrixXd next(2 * k, 2 * k);
        next.topLeftCorner(k, k) = h;
        next.topRightCorner(k, k) = h;
        next.bottomLeftCorner(k, k) = h;
        next.bottomRightCorner(k, k) = -h;
        h.swap(next);
    }
    return h;
}

// In-place unnormalized fast Walsh-Hadamard transform: v <- H * v for the
// Sylvester H of matching order. O(n log n) butterfly.
inline void fwht_inplace(std::span<double> v) {
    size_t n = v.size();
    if (!is_power_of_two(static_cast<long long>(n)))
        throw InvalidLength("fwht length must be a power of 2");
    for (size_t len = 1; len < n; len <<= 1) {
        for (size_t base = 0; base < n; base += 2 * len) {
            for (size_t i = base; i < base + len; ++i) {
                double a = v[i];
                double b = v[i + len];
                v[i] = a + b;
                v[i + len] = a - b;
            }
        }
    }
}

inline Eigen::VectorXd fwht(const Eigen::VectorXd& v) {
    Eigen::VectorXd out = v;
    fwht_inplace(std::span<double>(out.data(), static_cast<size_t>(out.size())));
    return out;
}

}  // namespace scbcs

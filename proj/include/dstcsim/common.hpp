#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace dstcsim {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// sum_i conj(a_i) * b_i
inline Complex hdot(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size())
        throw ModelError("hdot: length mismatch");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += std::conj(a[i]) * b[i];
    return acc;
}

// sum_i a_i * b_i (no conjugation)
inline Complex tdot(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size())
        throw ModelError("tdot: length mismatch");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] * b[i];
    return acc;
}

inline double norm_sq(std::span<const Complex> a) {
    double acc = 0.0;
    for (const Complex& x : a)
        acc += std::norm(x);
    return acc;
}

}  // namespace dstcsim

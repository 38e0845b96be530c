#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dstcsim/common.hpp"
#include "dstcsim/linalg.hpp"
#include "dstcsim/signal_model.hpp"

namespace dstcsim {

// Linear receive filter for one (user, link).
struct ReceiveFilter {
    CVec w;
    int user = 0;
    int link = 0;
};

// Matched filter: weights are the link's effective signature.
inline ReceiveFilter rake_filter(const EffectiveSignature& sig, int user = 0, int link = 0) {
    return ReceiveFilter{sig.v, user, link};
}

// w = (sum_k h_k h_k^H + sigma^2 I)^-1 h_target. The signature list defines
// the interference the filter sees; callers pass whatever streams share the
// observation.
inline ReceiveFilter mmse_filter(std::span<const EffectiveSignature> sigs, int target,
                                 double noise_var, int user = 0, int link = 0) {
    if (!(noise_var > 0.0))
        throw ModelError("mmse_filter: noise variance must be positive");
    if (sigs.empty() || target < 0 || target >= static_cast<int>(sigs.size()))
        throw ModelError("mmse_filter: bad target index");
    const int n = sigs[target].length();
    CMatrix cov(n, n);
    for (const EffectiveSignature& s : sigs) {
        if (s.length() != n)
            throw ModelError("mmse_filter: signature length mismatch");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                cov.at(i, j) += s.v[i] * std::conj(s.v[j]);
    }
    for (int i = 0; i < n; ++i)
        cov.at(i, i) += noise_var;
    return ReceiveFilter{solve(cov, sigs[target].v), user, link};
}

// Factorizes one link covariance and solves for all users at once.
inline std::vector<ReceiveFilter> mmse_filters_for_link(std::span<const EffectiveSignature> sigs,
                                                        double noise_var, int link = 0) {
    if (!(noise_var > 0.0))
        throw ModelError("mmse_filters_for_link: noise variance must be positive");
    if (sigs.empty())
        throw ModelError("mmse_filters_for_link: no signatures");
    const int n = sigs.front().length();
    CMatrix cov(n, n);
    std::vector<CVec> rhs;
    rhs.reserve(sigs.size());
    for (const EffectiveSignature& s : sigs) {
        if (s.length() != n)
            throw ModelError("mmse_filters_for_link: signature length mismatch");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                cov.at(i, j) += s.v[i] * std::conj(s.v[j]);
        rhs.push_back(s.v);
    }
    for (int i = 0; i < n; ++i)
        cov.at(i, i) += noise_var;
    std::vector<CVec> sols = solve_multi(cov, std::move(rhs));
    std::vector<ReceiveFilter> filters(sols.size());
    for (std::size_t k = 0; k < sols.size(); ++k)
        filters[k] = ReceiveFilter{std::move(sols[k]), static_cast<int>(k), link};
    return filters;
}

// BPSK decision; the Re(z) = 0 tie maps to +1.
inline double slicer(Complex z) {
    return z.real() >= 0.0 ? 1.0 : -1.0;
}

inline Complex filter_output(const ReceiveFilter& filter, std::span<const Complex> y) {
    return hdot(filter.w, y);
}

inline double linear_detect(const ReceiveFilter& filter, std::span<const Complex> y) {
    return slicer(filter_output(filter, y));
}

// Alamouti combining over one two-slot epoch:
//   soft_m = h_m^H y1 + h_n^T conj(y2)
//   soft_n = h_n^H y1 - h_m^T conj(y2)
// For BPSK this attains the exhaustive minimum-distance decision.
inline std::pair<Complex, Complex> alamouti_combine(const EffectiveSignature& h_m,
                                                    const EffectiveSignature& h_n,
                                                    std::span<const Complex> y1,
                                                    std::span<const Complex> y2) {
    const std::size_t n = h_m.v.size();
    if (h_n.v.size() != n || y1.size() != n || y2.size() != n)
        throw ModelError("alamouti_combine: dimension mismatch");
    Complex soft_m{0.0, 0.0};
    Complex soft_n{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const Complex y2c = std::conj(y2[i]);
        soft_m += std::conj(h_m.v[i]) * y1[i] + h_n.v[i] * y2c;
        soft_n += std::conj(h_n.v[i]) * y1[i] - h_m.v[i] * y2c;
    }
    return {soft_m, soft_n};
}

inline std::pair<double, double> ml_alamouti_detect(const EffectiveSignature& h_m,
                                                    const EffectiveSignature& h_n,
                                                    std::span<const Complex> y1,
                                                    std::span<const Complex> y2) {
    const auto [soft_m, soft_n] = alamouti_combine(h_m, h_n, y1, y2);
    return {slicer(soft_m), slicer(soft_n)};
}

}  // namespace dstcsim

#pragma once

#include <cmath>
#include <stdexcept>

namespace envtool {

// Shared tolerance policy. eps_zero drives rank and zero decisions through
// nearZero, eps_class is the band around classification-set boundaries, and
// eps_residual is what verification residuals are held to.
struct Tolerances {
    double eps_zero = 1e-9;
    double eps_class = 1e-8;
    double eps_residual = 1e-8;

    void validate() const {
        if (!(eps_zero > 0.0) || !(eps_class > 0.0) || !(eps_residual > 0.0))
            throw std::invalid_argument("tolerances must be strictly positive");
        if (eps_zero > eps_class)
            throw std::invalid_argument("eps_zero must not exceed eps_class");
    }
};

// Scale-relative zero test with an additive guard so it stays meaningful
// near the origin of parameter space: |q| <= eps_zero * (1 + scale).
inline bool nearZero(double q, double scale, const Tolerances& tol) {
    return std::abs(q) <= tol.eps_zero * (1.0 + scale);
}

}  // namespace envtool

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "stochmem/error.hpp"

namespace stochmem {

inline double binomial(unsigned n, unsigned k) {
    double r = 1.0;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Polynomial in Bernstein form with coefficients in [0, 1], so every
/// coefficient is directly generable as a stochastic stream.
struct BernsteinPoly {
    std::vector<double> coeffs;
    double max_fit_error = 0.0;

    unsigned degree() const noexcept { return static_cast<unsigned>(coeffs.size()) - 1; }

    double operator()(double x) const {
        const unsigned n = degree();
        double sum = 0.0;
        for (unsigned k = 0; k <= n; ++k)
            sum += binomial(n, k) * std::pow(x, k) * std::pow(1.0 - x, n - k) * coeffs[k];
        return sum;
    }
};

inline constexpr int kBernsteinFitGrid = 1001;

/// Least-squares Bernstein fit on a uniform 1001-point grid over [0, 1] with
/// coefficients constrained to [0, 1]. Out-of-range coefficients are clipped
/// to the violated bound and frozen, and the free ones are refit, until the
/// solution is feasible.
inline BernsteinPoly fit_bernstein(const std::function<double(double)>& target, unsigned degree) {
    if (degree < 1) throw DomainError("Bernstein degree must be >= 1");
    const int m = kBernsteinFitGrid;
    const int n = static_cast<int>(degree) + 1;

    Eigen::MatrixXd basis(m, n);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
        const double x = static_cast<double>(i) / (m - 1);
        const double t = target(x);
        if (!(t >= 0.0 && t <= 1.0)) throw DomainError("Bernstein target leaves [0, 1]");
        y(i) = t;
        for (int k = 0; k < n; ++k)
            basis(i, k) = binomial(degree, k) * std::pow(x, k) * std::pow(1.0 - x, degree - k);
    }

    std::vector<double> coeffs(n, 0.0);
    std::vector<bool> fixed(n, false);
    for (;;) {
        std::vector<int> free_idx;
        Eigen::VectorXd rhs = y;
        for (int k = 0; k < n; ++k) {
            if (fixed[k])
                rhs -= basis.col(k) * coeffs[k];
            else
                free_idx.push_back(k);
        }
        if (free_idx.empty()) break;

        Eigen::MatrixXd sub(m, static_cast<Eigen::Index>(free_idx.size()));
        for (std::size_t j = 0; j < free_idx.size(); ++j) sub.col(j) = basis.col(free_idx[j]);
        const Eigen::VectorXd sol = sub.colPivHouseholderQr().solve(rhs);

        bool feasible = true;
        for (std::size_t j = 0; j < free_idx.size(); ++j) {
            const int k = free_idx[j];
            coeffs[k] = sol(static_cast<Eigen::Index>(j));
            if (coeffs[k] < 0.0 || coeffs[k] > 1.0) {
                coeffs[k] = std::clamp(coeffs[k], 0.0, 1.0);
                fixed[k] = true;
                feasible = false;
            }
        }
        if (feasible) break;
    }

    const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), n);
    const double err = (basis * c - y).cwiseAbs().maxCoeff();
    return BernsteinPoly{std::move(coeffs), err};
}

inline BernsteinPoly fit_gamma(double exponent = 0.45, unsigned degree = 6) {
    return fit_bernstein([exponent](double x) { return std::pow(x, exponent); }, degree);
}

} // namespace stochmem

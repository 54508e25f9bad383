// Test-only eigenvalue oracle, independent of the Jacobi path in the library:
// characteristic-polynomial coefficients via Faddeev-LeVerrier, roots of the
// resulting real polynomial (all real for Hermitian input) by bracketed
// bisection between the stationary points of the polynomial.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ppqkd/qmath.hpp"

namespace ppqkd::testing {

// Monic characteristic polynomial coefficients c so that
// det(xI - M) = x^n + c[0] x^(n-1) + ... + c[n-1].
inline std::vector<double> char_poly(const ComplexMatrix& m) {
    const int n = m.dim();
    ComplexMatrix mk = m;  // M * B_{k-1}, with B_0 = I
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        const double ck = -mk.trace().real() / k;
        c[static_cast<std::size_t>(k - 1)] = ck;
        if (k == n) break;
        ComplexMatrix bk = mk + Complex{ck, 0.0} * ComplexMatrix::identity(n);
        mk = m * bk;
    }
    return c;
}

inline double eval_poly(const std::vector<double>& c, double x) {
    double y = 1.0;
    for (double ck : c) y = y * x + ck;
    return y;
}

inline std::vector<double> derivative(const std::vector<double>& c) {
    // input is monic of degree n with trailing coefficients c[0..n-1]
    const int n = static_cast<int>(c.size());
    std::vector<double> d(static_cast<std::size_t>(n));
    d[0] = static_cast<double>(n);  // leading coefficient of p'
    for (int k = 1; k < n; ++k) {
        d[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k - 1)] * (n - k);
    }
    // d now encodes p'(x) = d[0] x^(n-1) + d[1] x^(n-2) + ... + d[n-1]
    return d;
}

inline double eval_nonmonic(const std::vector<double>& d, double x) {
    double y = 0.0;
    for (double dk : d) y = y * x + dk;
    return y;
}

// All real roots of a monic polynomial with exclusively real roots, by
// recursive stationary-point bracketing. Degree at most 4 here.
inline std::vector<double> real_roots(const std::vector<double>& c, double lo, double hi) {
    const int n = static_cast<int>(c.size());
    if (n == 1) return {-c[0]};

    // stationary points: roots of the derivative (degree n-1, also all real
    // because p has only real roots)
    std::vector<double> dc = derivative(c);
    for (auto& x : dc) x /= static_cast<double>(n);  // make monic
    std::vector<double> crit = real_roots(std::vector<double>(dc.begin() + 1, dc.end()), lo, hi);
    std::sort(crit.begin(), crit.end());

    std::vector<double> nodes{lo};
    for (double x : crit)
        if (x > lo && x < hi) nodes.push_back(x);
    nodes.push_back(hi);

    std::vector<double> roots;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        double a = nodes[k], b = nodes[k + 1];
        double fa = eval_poly(c, a), fb = eval_poly(c, b);
        if (fa == 0.0) {
            roots.push_back(a);
            continue;
        }
        if (fa * fb > 0.0) {
            // no sign change: possible double root pinned at the right node
            if (std::abs(fb) < 1e-11) roots.push_back(b);
            continue;
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            const double fm = eval_poly(c, mid);
            if (fm == 0.0 || (b - a) < 1e-15) {
                a = b = mid;
                break;
            }
            if (fa * fm < 0.0) {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        roots.push_back(0.5 * (a + b));
    }
    return roots;
}

// Eigenvalues of a Hermitian matrix from characteristic-polynomial roots,
// descending. Assumes no highly degenerate clusters (test inputs are generic).
inline std::vector<double> eigenvalues_via_char_poly(const ComplexMatrix& m) {
    if (!m.is_hermitian(1e-10)) throw std::invalid_argument("oracle expects Hermitian input");
    // Gershgorin bound
    double radius = 0.0;
    for (int r = 0; r < m.dim(); ++r) {
        double row = 0.0;
        for (int c = 0; c < m.dim(); ++c) row += std::abs(m.at(r, c));
        radius = std::max(radius, row);
    }
    radius += 1.0;
    std::vector<double> roots = real_roots(char_poly(m), -radius, radius);
    std::sort(roots.begin(), roots.end(), std::greater<double>());
    return roots;
}

}  // namespace ppqkd::testing

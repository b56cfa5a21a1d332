#include "cr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cr {

namespace {

// Golub-Welsch: eigenvalues of the Jacobi matrix are the nodes, squared
// first eigenvector components (times mu0) the weights. Symmetric
// tridiagonal QL with implicit shifts, rotating the z-vector along.
void solve_jacobi(std::vector<double>& d, std::vector<double>& e,
                  std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    e.resize(n, 0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (++iter > 100) throw std::runtime_error("jacobi eigensolve stalled");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0 ? r : -r));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

GaussRule golub_welsch(std::vector<double> diag, std::vector<double> off, double mu0) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;
    solve_jacobi(diag, off, z);

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return diag[a] < diag[b]; });

    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.x[i] = diag[idx[i]];
        rule.w[i] = mu0 * z[idx[i]] * z[idx[i]];
    }
    return rule;
}

}  // namespace

GaussRule gauss_laguerre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_laguerre: need n >= 1");
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) d[i] = 2.0 * i + 1.0;
    for (int i = 1; i < n; ++i) e[i - 1] = static_cast<double>(i);
    return golub_welsch(std::move(d), std::move(e), 1.0);
}

GaussRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: need n >= 1");
    std::vector<double> d(n, 0.0), e(n > 1 ? n - 1 : 0);
    for (int i = 1; i < n; ++i) e[i - 1] = std::sqrt(i / 2.0);
    return golub_welsch(std::move(d), std::move(e), std::sqrt(std::numbers::pi));
}

}  // namespace cr

#pragma once

#include <vector>

namespace cr {

// Nodes and weights of a Gauss rule: sum_i w_i f(x_i) ~ int f(x) W(x) dx.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
    int size() const { return static_cast<int>(x.size()); }
};

// Weight e^{-x} on (0, inf). Exact for polynomials of degree <= 2n-1.
GaussRule gauss_laguerre(int n);

// Weight e^{-x^2} on (-inf, inf). Exact for polynomials of degree <= 2n-1.
GaussRule gauss_hermite(int n);

}  // namespace cr

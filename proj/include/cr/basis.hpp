#pragma once

#include <complex>

#include "cr/modes.hpp"

namespace cr {

using cplx = std::complex<double>;

// Laguerre polynomial L_k^{(0)}(x) by the three-term recurrence.
double laguerre_eval(int k, double x);

// Generalized Laguerre polynomial L_k^{(a)}(x), integer a >= 0.
double laguerre_assoc_eval(int k, int a, double x);

// Real radial profile R_{n,m}(r) of phi_{n,m} = R_{n,m}(r) e^{i m theta}.
// Convention: modes are built from the Gaussian by the raising operators
// with positive real normalization, which gives
//   R_{n,m}(r) = (-1)^k sqrt(k!/(k+|m|)!) / sqrt(pi)
//                * r^{|m|} L_k^{(|m|)}(r^2) e^{-r^2/2},   k = (n-|m|)/2.
double radial_profile(const ModeIndex& q, double r);

// phi_{n,m} at a point given in polar coordinates.
cplx special_hermite_eval(const ModeIndex& q, double r, double theta);

// phi_{n,m} at a Cartesian point.
cplx special_hermite_eval_xy(const ModeIndex& q, double x, double y);

struct ModeEigendata {
    double h_eigenvalue;  // 2(n+1)
    int l_eigenvalue;     // m
    cplx fourier_phase;   // e^{-i n pi/2}
};

ModeEigendata mode_eigendata(const ModeIndex& q);

enum class Ladder { a_d, a_g, a_d_dag, a_g_dag };

// Coefficient produced when `op` maps mode q to its image mode; the image
// label is written to `out`. Returns 0 when q is annihilated (no image).
double ladder_coefficient(Ladder op, const ModeIndex& q, ModeIndex& out);

}  // namespace cr

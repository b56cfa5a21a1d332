#pragma once

#include <array>
#include <vector>

#include "cr/dynamics.hpp"
#include "cr/state.hpp"

namespace cr {

// ---- closed forms on the eigenspaces E0 and E1 -------------------------

// Solution c(t) of the flow restricted to E0: c(t) = e^{-i (pi/2) |c0|^2 t} c0.
cplx e0_solution(cplx c0, double t);

// Two-phase closed form on E1; returns (c1(t), c_{-1}(t)).
std::array<cplx, 2> e1_solution(cplx c1, cplx cm1, double t);

// ---- gauged dynamics on E2 ---------------------------------------------

// Gauged E2 coordinates d_i(tau) = e^{4 i M tau} c_i(t), tau = (pi/16) t.
// M_d = |d2|^2+|d0|^2+|dm2|^2 and P_d = |d2|^2-|dm2|^2 are conserved.
struct E2State {
    cplx d2, d0, dm2;
    double tau = 0.0;

    double mass() const;
    double momentum() const;
};

// Physical E2 coefficients (c_{2,2}, c_{2,0}, c_{2,-2}) at time t -> gauge.
E2State to_gauged(cplx c2, cplx c0, cplx cm2, double t);
// Gauge -> physical coefficients and time.
void from_gauged(const E2State& s, cplx& c2, cplx& c0, cplx& cm2, double& t);

// The three cubic equations of the gauged system; returns d(d_i)/d tau.
E2State e2_rhs(const E2State& s);

// Fixed-step RK4 flow of the gauged system.
E2State e2_evolve(E2State s, double tau_end, double h);

// ---- reduced planar system ----------------------------------------------

// Chart (C, xi) with C = |d0|, xi = arg(d2) + arg(dm2) - 2 arg(d0);
// A = sqrt((M+P-C^2)/2), B = sqrt((M-P-C^2)/2) are eliminated moduli.
struct ReducedE2State {
    double C = 0;   // >= 0
    double xi = 0;
    double M = 1;
    double P = 0;

    double A() const;
    double B() const;
};

struct ReducedDeriv {
    double dC, dxi;
};

// dC/dtau = 4ABC sin xi; dxi/dtau = -A^2-B^2-2(BC^2/A + AC^2/B - 4AB) cos xi.
// Throws SingularChartError when A = 0 or B = 0.
ReducedDeriv e2_reduced_rhs(const ReducedE2State& s);

ReducedE2State e2_reduced_evolve(ReducedE2State s, double tau_end, double h);

// ---- stationary-wave catalogue ------------------------------------------

enum class WaveKind { a, b, c, d, e, f, g, h, catalogue_free };

struct WaveParams {
    cplx z = 1.0;       // kinds a-d, g: first amplitude; kind h: real z
    cplx z2 = 1.0;      // kinds d, g: second amplitude
    double lambda = 1;  // kinds e, f: scale
    double beta1 = 0;   // kinds e, f, h: phases
    double beta2 = 0;
    double mu = 0;      // kind h: gauge frequency, range-checked
    int sign = +1;      // kinds e, f, h: sign of the d0 branch
};

// A parameterized exact solution: coefficients at t=0 (physical gauge),
// the physical frequency omega and rotation rate alpha of the
// R_{-alpha omega t} e^{-i omega t} phi ansatz, and the gauge data.
struct StationaryWave {
    WaveKind kind = WaveKind::catalogue_free;
    cplx d2, d0, dm2;   // gauged amplitudes at tau = 0 (= physical at t = 0)
    double omega = 0;    // physical frequency
    double rot_rate = 0; // alpha
    double mu_gauge = 0; // e^{i mu tau} frequency of the gauged orbit
    double nu_gauge = 0; // kind h splitting, 0 otherwise

    // Embed into a full-basis state of the given cutoff (>= 2) at t = 0.
    SpectralState state(int cutoff = 2) const;
};

StationaryWave stationary_wave(WaveKind kind, const WaveParams& p);

// || omega phi + alpha omega L phi - T(phi,phi,phi) || for the wave's
// parameters, with T evaluated through the given resonant table.
double el_residual(const SpectralState& phi, const CouplingTable& table,
                   double omega, double alpha);

// ---- Gaussian symmetry orbit on the radial chain ------------------------

// Coefficients c_0..c_{n_max} of e^{i theta} e^{i nu H} e^{i mu |x|^2}
// S_lambda h_0 on the radial modes:
// c_n = -e^{i theta} e^{i nu (4n+2)} lambda ((1-lambda^2)/2 + i mu)^n
//       / (-(1+lambda^2)/2 + i mu)^{n+1}.
std::vector<cplx> orbit_gaussian(double theta, double nu, double mu,
                                 double lambda, int n_max);

struct OrbitFit {
    double distance = 0;  // best L^2 distance found (upper bound)
    double theta = 0, nu = 0, mu = 0, lambda = 1;
};

// Multi-start Nelder-Mead over (theta, nu, mu, log lambda); upper bound on
// the distance from a radial coefficient vector to the Gaussian orbit.
OrbitFit distance_to_gaussian_orbit(const std::vector<cplx>& radial_coeffs,
                                    int starts = 16, unsigned seed = 7);

}  // namespace cr

#pragma once

#include <vector>

#include "cr/dynamics.hpp"
#include "cr/state.hpp"
#include "cr/table.hpp"

namespace cr {

// sqrt( sum (2(n+1))^s |c_{n,m}|^2 ): harmonic Sobolev norm of the truncation.
double hs_norm(const SpectralState& state, double s);

// Interaction-picture coefficients g of the trapped equation together with
// the Sobolev index used for error reporting.
struct NlsProfile {
    SpectralState state;
    double s = 1.5;  // > 1
};

// Right-hand side of i dg/dt = sum e^{2 i t omega} alpha' g g conj(g) over
// all m-admissible quadruples, alpha' = alpha / pi^2. Returns dg/dt.
// Requires a full-product table covering the state.
SpectralState nls_rhs(const NlsProfile& profile, double t, const CouplingTable& full_table);
void nls_rhs(const ApplyPlan& plan, double t, const std::vector<cplx>& g,
             std::vector<cplx>& out);

// Fixed-step RK4 flow of the interaction-picture equation, landing exactly
// on each requested time.
std::vector<SpectralState> nls_evolve(const NlsProfile& profile, const CouplingTable& full_table,
                                      const std::vector<double>& t_grid, double h);

struct CompareRow {
    double B = 0;
    double t = 0;
    double error_hs = 0;  // || g(t) - f(t/pi^2) ||_{H^s}
    double bound_B3 = 0;  // B^3 reference column
};

struct CompareOptions {
    double h_nls = 0.01;  // step of the full flow
    double h_cr = 0.001;  // step of the resonant flow
};

// For each amplitude B, evolve g (full flow) and f (resonant flow) from
// B u0 and report the H^s error at each time; the resonant flow is read at
// rescaled time t/pi^2.
std::vector<CompareRow> compare_flows(const SpectralState& u0, double s,
                                      const std::vector<double>& t_grid,
                                      const std::vector<double>& B_list,
                                      const CouplingTable& full_table,
                                      const CouplingTable& resonant_table,
                                      const CompareOptions& opts = {});

void write_compare_csv(const std::vector<CompareRow>& rows, const std::string& path);

}  // namespace cr

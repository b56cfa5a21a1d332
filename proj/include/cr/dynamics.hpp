#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cr/state.hpp"
#include "cr/table.hpp"

namespace cr {

// Table entries unpacked against a fixed mode set: every ordered
// contribution is folded into flat term lists, so one right-hand-side or
// Hamiltonian evaluation is a single scan with no searching.
class ApplyPlan {
  public:
    ApplyPlan(const CouplingTable& table, const ModeSet& set);

    const ModeSet& set() const { return set_; }
    Family family() const { return family_; }

    // T_q(c) = sum alpha c c conj(c): the trilinear form, i dc/dt = T.
    void trilinear(const std::vector<cplx>& c, std::vector<cplx>& out) const;
    std::vector<cplx> trilinear(const std::vector<cplx>& c) const;

    // E(c) = sum over ordered resonant quadruples alpha c c conj(c) conj(c).
    double hamiltonian(const std::vector<cplx>& c) const;

    struct Term {
        int out, i1, i2, i3;
        double w;      // alpha x input-pair multiplicity
        int omega;     // frequency mismatch (0 on resonant families)
    };
    const std::vector<Term>& terms() const { return terms_; }

    struct ETerm {
        int i1, i2, i3, i4;
        double w;  // alpha x full ordered multiplicity
    };
    const std::vector<ETerm>& energy_terms() const { return energy_terms_; }

  private:
    ModeSet set_;
    Family family_;
    std::vector<Term> terms_;
    std::vector<ETerm> energy_terms_;
};

// Derivative dc/dt with i dc/dt = T(c): returns a state-shaped vector.
// Requires a resonant-family table compatible with (and covering) the
// state's mode set.
SpectralState apply_T(const SpectralState& state, const CouplingTable& table);
void apply_T(const ApplyPlan& plan, const SpectralState& state, SpectralState& dstate);

double hamiltonian(const SpectralState& state, const CouplingTable& table);

// Checks family/cutoff compatibility and builds the plan.
ApplyPlan make_plan(const CouplingTable& table, const ModeSet& set);

// c_{n,m} -> e^{-i n pi/2} c_{n,m}.
SpectralState fourier_map(const SpectralState& state);

enum class Integrator { rk4, rk45 };

struct EvolveOptions {
    Integrator integrator = Integrator::rk4;
    double step = 1e-3;         // rk4 step size
    double tolerance = 1e-10;   // rk45 error tolerance
    int sample_stride = 0;      // record every k-th step; 0 = endpoints only
};

struct TrajectorySample {
    SpectralState state;
    ConservedSet invariants;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    bool aborted_nonfinite = false;  // stopped at the last finite sample
};

// Deterministic time integration of i dc/dt = T(c) from state.time to t_end.
Trajectory evolve(const SpectralState& state, const CouplingTable& table,
                  double t_end, const EvolveOptions& opts = {});

// CSV: header t,M,P,E,Hexp, then re_n_m,im_n_m per mode; one row per sample.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

// Generic fixed-step RK4 over a flat complex vector (shared by the NLS
// side, whose right-hand side is time dependent).
using RhsFn = std::function<void(double t, const std::vector<cplx>&, std::vector<cplx>&)>;
void rk4_advance(const RhsFn& rhs, std::vector<cplx>& y, double& t, double h);

}  // namespace cr

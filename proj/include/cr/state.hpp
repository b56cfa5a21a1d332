#pragma once

#include <complex>
#include <vector>

#include "cr/basis.hpp"
#include "cr/modes.hpp"

namespace cr {

// Finite coefficient vector c_{n,m} over a mode set, the unknown of the
// truncated system. Coefficients of invalid labels are structurally absent.
struct SpectralState {
    ModeSet set;
    std::vector<cplx> c;
    double time = 0.0;

    explicit SpectralState(ModeSet s) : set(std::move(s)), c(set.size()) {}
    SpectralState(Basis basis, int cutoff) : SpectralState(ModeSet(basis, cutoff)) {}

    cplx& operator[](const ModeIndex& q) { return c[set.id(q)]; }
    const cplx& operator[](const ModeIndex& q) const { return c[set.id(q)]; }

    // Coefficient of (n, m), zero when absent from the set.
    cplx at(int n, int m) const {
        auto id = set.find(n, m);
        return id ? c[*id] : cplx(0.0);
    }

    double mass() const;
    bool finite() const;
};

// Scalar invariants of the flow evaluated on a state. The Hamiltonian E
// needs a coupling table and is filled by the dynamics layer (NaN here).
struct ConservedSet {
    double mass = 0;        // M = sum |c|^2
    double momentum = 0;    // P = sum m |c|^2
    double hamiltonian = 0; // E, set by the caller when a table is at hand
    double h_expect = 0;    // <Hu, u> = sum 2(n+1)|c|^2
    cplx ad_expect;         // <a_d u, u>
    cplx ag_expect;         // <a_g u, u>
    double zsq_expect = 0;  // int |z|^2 |u|^2
    cplx dilation;          // <x . grad u, u>
};

// All quantities except the Hamiltonian (filled with NaN).
ConservedSet conserved(const SpectralState& state);

// Ladder operator applied to a state. Raising operators write into a state
// of cutoff target_cutoff and fail when a populated mode would be pushed
// above it; lowering operators keep the cutoff.
SpectralState ladder_apply(Ladder op, const SpectralState& state, int target_cutoff);
SpectralState ladder_apply(Ladder op, const SpectralState& state);

}  // namespace cr

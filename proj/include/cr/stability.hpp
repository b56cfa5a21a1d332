#pragma once

#include <optional>
#include <vector>

#include "cr/dynamics.hpp"
#include "cr/state.hpp"
#include "cr/table.hpp"

namespace cr {

// 2x2 block of the linearization around the LLL wave phi_N, coupling the
// coefficients c_k and c_{2N-k}:
//   A = alpha_{k,2N-k,N,N}, B = alpha_{kNkN}, C = alpha_{2N-k,N,2N-k,N},
//   omega = alpha_{NNNN}, delta = 4(A^2 - (B+C-omega)^2).
struct LinearBlock {
    int N = 0;
    int k = 0;
    double A = 0, B = 0, C = 0, omega = 0;
    double delta = 0;
};

struct LllLinearization {
    std::vector<LinearBlock> blocks;  // k = 0..N-1, pairing k with 2N-k
    double self_omega = 0;            // k = N equation: growth at most linear
    // k >= 2N+1 modes decouple into pure phase rotations c_k e^{-2 i B_k t};
    // represented by their rates.
    std::vector<double> decoupled_rates_sample;  // first few k > 2N
};

LllLinearization lll_linearization(int N, int decoupled_sample = 4);

// Discriminant Delta(N, k), computed in the cancellation-safe factored form
// 4 (A - (B+C-omega)) (A + (B+C-omega)). Positive iff the block has an
// exponentially growing mode. Valid for 0 <= k <= 2N, k != N.
double discriminant(int N, int k);

// #{k in 0..N-1 : Delta(N,k) > 0}.
int unstable_mode_count(int N);

// ---- constrained extremization -------------------------------------------

struct StationarySearchOptions {
    double mass = 1.0;          // constraint level mu0
    double alpha = 0.0;         // constrain M + alpha P (alpha = 0: mass only)
    bool maximize = false;
    unsigned seed = 1;
    int max_iters = 200000;
    double residual_tol = 1e-10;
    std::optional<std::vector<cplx>> initial;  // overrides the random seed
};

struct FoundWave {
    explicit FoundWave(ModeSet set) : state(std::move(set)) {}

    SpectralState state;     // phase-gauged: largest coefficient real positive
    double omega = 0;        // Lagrange multiplier of M
    double rot_rate = 0;     // alpha recovered from the P multiplier
    double residual = 0;     // Euler-Lagrange residual
    double energy = 0;       // E at the wave
    bool converged = false;  // false: iteration cap hit, best iterate returned
    int iterations = 0;
};

// Projected-gradient ascent/descent of E on the constraint surface,
// deterministic for a fixed seed.
FoundWave find_stationary(const CouplingTable& table, const StationarySearchOptions& opts);

// ---- decay diagnostic ------------------------------------------------------

enum class DecayFitStatus { ok, compact_support };

struct DecayFit {
    double mu_hat = 0;     // -slope of log|c| against sqrt(2n+2); > 0: decay
    double r_squared = 0;
    int points = 0;
    DecayFitStatus status = DecayFitStatus::ok;
};

// Least-squares fit over modes above the noise floor 1e-13. States with
// too few usable modes or levels to fit are an InsufficientDataError,
// except when their support ends strictly below the cutoff (a zero tail),
// which is reported as compact_support instead.
DecayFit decay_fit(const SpectralState& state);

}  // namespace cr

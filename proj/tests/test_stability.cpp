#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cr/dynamics.hpp"
#include "cr/stability.hpp"
#include "cr/subspaces.hpp"
#include "cr/table.hpp"

using namespace cr;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("linearization blocks at small N") {
    LllLinearization l0 = lll_linearization(0);
    CHECK(l0.blocks.empty());
    CHECK(l0.self_omega == doctest::Approx(kPi / 2));

    LllLinearization l1 = lll_linearization(1);
    REQUIRE(l1.blocks.size() == 1);
    const LinearBlock& b = l1.blocks[0];
    CHECK(b.A == doctest::Approx(kPi / (4 * std::numbers::sqrt2)).epsilon(1e-14));
    CHECK(b.B == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(b.C == doctest::Approx(3 * kPi / 16).epsilon(1e-14));
    CHECK(b.omega == doctest::Approx(kPi / 4).epsilon(1e-14));

    LllLinearization l2 = lll_linearization(2);
    CHECK(l2.blocks.size() == 2);
    CHECK(l2.blocks[0].k == 0);
    CHECK(l2.blocks[1].k == 1);

    // decoupled modes rotate at 2 alpha_{kNkN}
    REQUIRE(!l1.decoupled_rates_sample.empty());
    CHECK(l1.decoupled_rates_sample[0] ==
          doctest::Approx(2 * lll_coeff(3, 1, 3, 1)).epsilon(1e-14));
}

TEST_CASE("discriminant signs and values") {
    // Delta(1,0) = 4(pi^2/32 - 9 pi^2/256) = -pi^2/64
    CHECK(discriminant(1, 0) < 0);
    CHECK(discriminant(1, 0) == doctest::Approx(-kPi * kPi / 64).epsilon(1e-12));
    // Delta(2,0): A=0.2405, B=0.3927, C=0.3682, omega=0.5890
    CHECK(discriminant(2, 0) > 0);
    CHECK(discriminant(2, 0) == doctest::Approx(0.113299).epsilon(1e-4));
    // interior lambda = 1/2 regime is stable for large N
    CHECK(discriminant(40, 20) < 0);

    CHECK_THROWS_AS(discriminant(3, 3), Error);   // k = N excluded
    CHECK_THROWS_AS(discriminant(3, 7), Error);   // out of range
}

TEST_CASE("discriminant symmetry k <-> 2N-k") {
    for (int N = 1; N <= 30; ++N)
        for (int k = 0; k <= 2 * N; ++k) {
            if (k == N) continue;
            CHECK(discriminant(N, k) == discriminant(N, 2 * N - k));
        }
}

TEST_CASE("unstable mode counts") {
    CHECK(unstable_mode_count(0) == 0);
    CHECK(unstable_mode_count(1) == 0);
    CHECK(unstable_mode_count(2) >= 1);
    CHECK(discriminant(2, 0) > 0);

    // Delta(N, N-2) > 0 for N in [2, 20]
    for (int N = 2; N <= 20; ++N) CHECK(discriminant(N, N - 2) > 0);

    // empirical probe of the o(N) claim
    double prev = 1.0;
    for (int N : {10, 20, 40, 80}) {
        double frac = static_cast<double>(unstable_mode_count(N)) / N;
        CHECK(frac < prev);
        prev = frac;
    }
}

TEST_CASE("omega_N asymptotics") {
    // alpha_NNNN ~ (sqrt(pi)/2) / sqrt(N)
    double w200 = lll_coeff(200, 200, 200, 200);
    double target = std::sqrt(kPi) / 2;
    CHECK(std::abs(w200 * std::sqrt(200.0) - target) / target < 0.02);
}

TEST_CASE("A,B,C decay exponentially while omega decays like 1/sqrt(N)") {
    for (double lam : {0.3, 0.5, 0.7}) {
        // log-linear fits over N in [50, 200]
        double sxA = 0, syA = 0, sxxA = 0, sxyA = 0, nA = 0;
        double sxw = 0, syw = 0, sxxw = 0, sxyw = 0, nw = 0;
        double syB = 0, sxyB = 0, syC = 0, sxyC = 0;
        for (int N = 50; N <= 200; N += 10) {
            int k = static_cast<int>(std::lround(lam * N));
            double logA = log_lll_coeff(k, 2 * N - k, N, N);
            double logB = log_lll_coeff(k, N, k, N);
            double logC = log_lll_coeff(2 * N - k, N, 2 * N - k, N);
            double logw = log_lll_coeff(N, N, N, N);
            double x = N, lx = std::log(static_cast<double>(N));
            sxA += x; sxxA += x * x; nA += 1;
            syA += logA; sxyA += x * logA;
            syB += logB; sxyB += x * logB;
            syC += logC; sxyC += x * logC;
            sxw += lx; sxxw += lx * lx; nw += 1;
            syw += logw; sxyw += lx * logw;
        }
        auto slope = [](double n, double sx, double sy, double sxx, double sxy) {
            return (n * sxy - sx * sy) / (n * sxx - sx * sx);
        };
        // exponential decay in N: negative slope of log alpha against N
        CHECK(slope(nA, sxA, syA, sxxA, sxyA) < -1e-3);
        CHECK(slope(nA, sxA, syB, sxxA, sxyB) < -1e-3);
        CHECK(slope(nA, sxA, syC, sxxA, sxyC) < -1e-3);
        // omega ~ N^{-1/2}: slope of log omega against log N near -1/2
        double sw = slope(nw, sxw, syw, sxxw, sxyw);
        CHECK(std::abs(sw + 0.5) < 0.05);
    }
}

TEST_CASE("find_stationary on E1 recovers the equal-modulus maximizer") {
    CouplingTable g1 = build_table(Family::general2d, 1);
    CouplingTable e1 = restrict_to_level(g1, 1);
    StationarySearchOptions o;
    o.mass = 1.0;
    o.maximize = true;
    o.seed = 3;
    FoundWave w = find_stationary(e1, o);
    CHECK(w.converged);
    CHECK(w.residual < 1e-9);
    CHECK(std::abs(std::abs(w.state[ModeIndex(1, 1)]) - 1 / std::numbers::sqrt2) < 1e-7);
    CHECK(std::abs(std::abs(w.state[ModeIndex(1, -1)]) - 1 / std::numbers::sqrt2) < 1e-7);
    // rate (pi/4)(3/2) of the degenerate M-stationary family
    CHECK(w.omega == doctest::Approx(kPi * 3 / 8).epsilon(1e-6));
}

TEST_CASE("find_stationary on E2 reaches the catalogue extremizers") {
    CouplingTable g2 = build_table(Family::general2d, 2);
    CouplingTable e2 = restrict_to_level(g2, 2);

    // max: wave (f) moduli, found from every seed
    StationarySearchOptions mx;
    mx.mass = 1.0;
    mx.maximize = true;
    mx.seed = 17;
    FoundWave wf = find_stationary(e2, mx);
    CHECK(wf.converged);
    CHECK(std::abs(std::abs(wf.state[ModeIndex(2, 2)]) - std::sqrt(2.0 / 7)) < 1e-6);
    CHECK(std::abs(std::abs(wf.state[ModeIndex(2, 0)]) - std::sqrt(3.0 / 7)) < 1e-6);
    CHECK(std::abs(std::abs(wf.state[ModeIndex(2, -2)]) - std::sqrt(2.0 / 7)) < 1e-6);
    CHECK(wf.energy == doctest::Approx(9 * kPi / 28).epsilon(1e-8));

    // min: wave (e) is a local minimizer with a real basin; the global
    // minimizers are the pure m = +-2 modes. Scan seeds until the (e)
    // pattern shows up.
    bool found_e = false;
    for (unsigned seed = 1; seed <= 8 && !found_e; ++seed) {
        StationarySearchOptions mn;
        mn.mass = 1.0;
        mn.seed = seed;
        FoundWave we = find_stationary(e2, mn);
        CHECK(we.converged);
        CHECK(we.residual < 1e-9);
        if (std::abs(std::abs(we.state[ModeIndex(2, 0)]) - std::sqrt(5.0 / 9)) < 1e-6 &&
            std::abs(std::abs(we.state[ModeIndex(2, 2)]) - std::sqrt(2.0 / 9)) < 1e-6)
            found_e = true;
    }
    CHECK(found_e);
}

TEST_CASE("found waves evolve with constant moduli") {
    CouplingTable g2 = build_table(Family::general2d, 2);
    CouplingTable e2 = restrict_to_level(g2, 2);
    StationarySearchOptions mx;
    mx.mass = 1.0;
    mx.maximize = true;
    mx.seed = 4;
    FoundWave w = find_stationary(e2, mx);
    REQUIRE(w.converged);

    EvolveOptions opts;
    opts.step = 1e-3;
    opts.sample_stride = 1000;
    Trajectory traj = evolve(w.state, g2, 10.0, opts);
    for (const auto& s : traj.samples)
        for (int i = 0; i < s.state.set.size(); ++i)
            CHECK(std::abs(std::abs(s.state.c[i]) - std::abs(w.state.c[i])) < 1e-7);
}

TEST_CASE("find_stationary under an M + alpha P constraint") {
    CouplingTable g1 = build_table(Family::general2d, 1);
    CouplingTable e1 = restrict_to_level(g1, 1);
    StationarySearchOptions o;
    o.mass = 1.0;
    o.alpha = 0.2;   // |alpha| < 1/3: nondegenerate maximizer
    o.maximize = true;
    o.seed = 9;
    FoundWave w = find_stationary(e1, o);
    CHECK(w.converged);
    CHECK(w.residual < 1e-9);
    // the recovered rotation rate matches the constraint multiplier ratio
    CHECK(std::abs(w.rot_rate - o.alpha) < 1e-6);
    // Euler-Lagrange residual in the subspaces sense agrees
    CHECK(el_residual(w.state, g1, w.omega, w.rot_rate) < 1e-9);
}

TEST_CASE("decay_fit statuses") {
    // pure mode: one usable point at the cutoff
    SpectralState pure(Basis::full, 3);
    pure[ModeIndex(3, 1)] = 1.0;
    CHECK_THROWS_AS(decay_fit(pure), InsufficientDataError);

    // orbit coefficients decay geometrically: fitted slope matches the
    // closed-form moduli |c_n|^2 = (4/5) (1/5)^n
    auto orbit = orbit_gaussian(0, 0, 0.5, 1.0, 60);
    SpectralState radial(Basis::radial, 60);
    for (int k = 0; k <= 60; ++k) radial.c[k] = orbit[k];
    DecayFit fit = decay_fit(radial);
    CHECK(fit.status == DecayFitStatus::ok);
    CHECK(fit.mu_hat > 0);
    CHECK(fit.r_squared > 0.9);
    // compute the expected least-squares slope from the exact moduli
    double sx = 0, sy = 0, sxx = 0, sxy = 0, np = 0;
    for (int k = 0; k <= 60; ++k) {
        double a = std::abs(orbit[k]);
        if (a <= 1e-13) continue;
        double x = std::sqrt(2.0 * (2 * k + 1));  // sqrt(2(n+1)), n = 2k
        double y = std::log(a);
        sx += x; sy += y; sxx += x * x; sxy += x * y; np += 1;
    }
    double slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    CHECK(fit.mu_hat == doctest::Approx(-slope).epsilon(1e-10));

    // compactly supported state embedded below its cutoff
    SpectralState e2wave(Basis::full, 12);
    e2wave[ModeIndex(2, 2)] = std::sqrt(2.0 / 7);
    e2wave[ModeIndex(2, 0)] = std::sqrt(3.0 / 7);
    e2wave[ModeIndex(2, -2)] = std::sqrt(2.0 / 7);
    DecayFit flat = decay_fit(e2wave);
    CHECK(flat.status == DecayFitStatus::compact_support);
}

#include "cr/subspaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

namespace cr {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);
}  // namespace

cplx e0_solution(cplx c0, double t) {
    return std::exp(-kI * (kPi / 2.0) * std::norm(c0) * t) * c0;
}

std::array<cplx, 2> e1_solution(cplx c1, cplx cm1, double t) {
    const double p1 = std::norm(c1), pm1 = std::norm(cm1);
    return {std::exp(-kI * (kPi / 4.0) * (p1 + 2.0 * pm1) * t) * c1,
            std::exp(-kI * (kPi / 4.0) * (2.0 * p1 + pm1) * t) * cm1};
}

// ---- E2 gauge ------------------------------------------------------------
//
// With tau = (pi/16) t and d_i(tau) = e^{4 i M tau} c_i(t), the cubic system
// on E2 takes the constant-coefficient form implemented in e2_rhs.

double E2State::mass() const { return std::norm(d2) + std::norm(d0) + std::norm(dm2); }
double E2State::momentum() const { return std::norm(d2) - std::norm(dm2); }

E2State to_gauged(cplx c2, cplx c0, cplx cm2, double t) {
    const double M = std::norm(c2) + std::norm(c0) + std::norm(cm2);
    const double tau = kPi * t / 16.0;
    const cplx ph = std::exp(kI * 4.0 * M * tau);
    return {ph * c2, ph * c0, ph * cm2, tau};
}

void from_gauged(const E2State& s, cplx& c2, cplx& c0, cplx& cm2, double& t) {
    const double M = s.mass();
    const cplx ph = std::exp(-kI * 4.0 * M * s.tau);
    c2 = ph * s.d2;
    c0 = ph * s.d0;
    cm2 = ph * s.dm2;
    t = 16.0 * s.tau / kPi;
}

E2State e2_rhs(const E2State& s) {
    E2State d;
    d.d2 = -kI * (-std::norm(s.d2) * s.d2 + 2.0 * std::norm(s.dm2) * s.d2 +
                  2.0 * std::conj(s.dm2) * s.d0 * s.d0);
    d.dm2 = -kI * (-std::norm(s.dm2) * s.dm2 + 2.0 * std::norm(s.d2) * s.dm2 +
                   2.0 * std::conj(s.d2) * s.d0 * s.d0);
    d.d0 = -kI * (4.0 * s.d2 * s.dm2 * std::conj(s.d0));
    d.tau = 1.0;
    return d;
}

E2State e2_evolve(E2State s, double tau_end, double h) {
    auto add = [](const E2State& a, const E2State& b, double w) {
        return E2State{a.d2 + w * b.d2, a.d0 + w * b.d0, a.dm2 + w * b.dm2,
                       a.tau + w * b.tau};
    };
    while (s.tau < tau_end - 1e-15 * std::max(1.0, std::abs(tau_end))) {
        const double hs = std::min(h, tau_end - s.tau);
        E2State k1 = e2_rhs(s);
        E2State k2 = e2_rhs(add(s, k1, hs / 2));
        E2State k3 = e2_rhs(add(s, k2, hs / 2));
        E2State k4 = e2_rhs(add(s, k3, hs));
        s.d2 += (hs / 6) * (k1.d2 + 2.0 * k2.d2 + 2.0 * k3.d2 + k4.d2);
        s.d0 += (hs / 6) * (k1.d0 + 2.0 * k2.d0 + 2.0 * k3.d0 + k4.d0);
        s.dm2 += (hs / 6) * (k1.dm2 + 2.0 * k2.dm2 + 2.0 * k3.dm2 + k4.dm2);
        s.tau += hs;
    }
    return s;
}

// ---- reduced planar system -------------------------------------------------

double ReducedE2State::A() const {
    const double v = (M + P - C * C) / 2.0;
    if (v < -1e-12) throw ParameterRangeError("reduced chart needs C^2 <= M+P");
    return std::sqrt(std::max(v, 0.0));
}

double ReducedE2State::B() const {
    const double v = (M - P - C * C) / 2.0;
    if (v < -1e-12) throw ParameterRangeError("reduced chart needs C^2 <= M-P");
    return std::sqrt(std::max(v, 0.0));
}

ReducedDeriv e2_reduced_rhs(const ReducedE2State& s) {
    const double A = s.A(), B = s.B(), C = s.C;
    if (A <= 1e-14 || B <= 1e-14)
        throw SingularChartError("reduced (C, xi) chart breaks down at A=0 or B=0");
    ReducedDeriv d;
    d.dC = 4.0 * A * B * C * std::sin(s.xi);
    d.dxi = -A * A - B * B -
            2.0 * (B * C * C / A + A * C * C / B - 4.0 * A * B) * std::cos(s.xi);
    return d;
}

ReducedE2State e2_reduced_evolve(ReducedE2State s, double tau_end, double h) {
    double tau = 0.0;
    while (tau < tau_end - 1e-15 * std::max(1.0, std::abs(tau_end))) {
        const double hs = std::min(h, tau_end - tau);
        auto step = [&](const ReducedDeriv& k, double w) {
            ReducedE2State n = s;
            n.C = s.C + w * k.dC;
            n.xi = s.xi + w * k.dxi;
            return n;
        };
        ReducedDeriv k1 = e2_reduced_rhs(s);
        ReducedDeriv k2 = e2_reduced_rhs(step(k1, hs / 2));
        ReducedDeriv k3 = e2_reduced_rhs(step(k2, hs / 2));
        ReducedDeriv k4 = e2_reduced_rhs(step(k3, hs));
        s.C += (hs / 6) * (k1.dC + 2 * k2.dC + 2 * k3.dC + k4.dC);
        s.xi += (hs / 6) * (k1.dxi + 2 * k2.dxi + 2 * k3.dxi + k4.dxi);
        tau += hs;
    }
    return s;
}

// ---- stationary-wave catalogue ----------------------------------------------

namespace {

StationaryWave finish(WaveKind kind, cplx d2, cplx d0, cplx dm2, double mu, double nu) {
    StationaryWave w;
    w.kind = kind;
    w.d2 = d2;
    w.d0 = d0;
    w.dm2 = dm2;
    w.mu_gauge = mu;
    w.nu_gauge = nu;
    const double M = std::norm(d2) + std::norm(d0) + std::norm(dm2);
    // physical rates of c_m(t) = e^{-i(omega + m alpha omega) t} c_m(0)
    w.omega = (4.0 * M - mu) * kPi / 16.0;
    const double alpha_omega = -nu * kPi / 32.0;
    w.rot_rate = w.omega != 0.0 ? alpha_omega / w.omega : 0.0;
    return w;
}

}  // namespace

StationaryWave stationary_wave(WaveKind kind, const WaveParams& p) {
    switch (kind) {
        case WaveKind::a:
            return finish(kind, p.z, 0.0, 0.0, std::norm(p.z), 0.0);
        case WaveKind::b:
            return finish(kind, 0.0, 0.0, p.z, std::norm(p.z), 0.0);
        case WaveKind::c:
            return finish(kind, 0.0, p.z, 0.0, 0.0, 0.0);
        case WaveKind::d: {
            if (std::abs(std::abs(p.z) - std::abs(p.z2)) > 1e-12)
                throw ParameterRangeError("kind d requires |z| = |z2| (unequal moduli is kind g)");
            return finish(kind, p.z, 0.0, p.z2, -std::norm(p.z), 0.0);
        }
        case WaveKind::e: {
            const double l = p.lambda;
            const cplx half = std::exp(kI * (p.beta1 + p.beta2) / 2.0);
            return finish(kind, l * std::sqrt(2.0 / 9) * std::exp(kI * p.beta1),
                          static_cast<double>(p.sign) * kI * l * std::sqrt(5.0 / 9) * half,
                          l * std::sqrt(2.0 / 9) * std::exp(kI * p.beta2),
                          (8.0 / 9) * l * l, 0.0);
        }
        case WaveKind::f: {
            const double l = p.lambda;
            const cplx half = std::exp(kI * (p.beta1 + p.beta2) / 2.0);
            return finish(kind, l * std::sqrt(2.0 / 7) * std::exp(kI * p.beta1),
                          static_cast<double>(p.sign) * l * std::sqrt(3.0 / 7) * half,
                          l * std::sqrt(2.0 / 7) * std::exp(kI * p.beta2),
                          -(8.0 / 7) * l * l, 0.0);
        }
        case WaveKind::g: {
            const double z1 = std::norm(p.z), z2 = std::norm(p.z2);
            if (z1 == 0.0 || z2 == 0.0)
                throw ParameterRangeError("kind g needs both amplitudes nonzero");
            if (std::abs(std::sqrt(z1) - std::sqrt(z2)) <= 1e-12)
                throw ParameterRangeError("kind g requires |z| != |z2| (equal moduli is kind d)");
            // gauged rates mu + (m/2) nu reproduce d2: |z|^2-2|z2|^2,
            // dm2: |z2|^2-2|z|^2
            const double mu = -(z1 + z2) / 2.0;
            const double nu = 1.5 * (z1 - z2);
            return finish(kind, p.z, 0.0, p.z2, mu, nu);
        }
        case WaveKind::h: {
            const double z = std::abs(p.z);
            if (z == 0.0) throw ParameterRangeError("kind h needs z != 0");
            const double z2 = z * z, mu = p.mu;
            if (!(mu <= -(8.0 / 3) * z2 || (mu >= (8.0 / 5) * z2 && mu < 8.0 * z2)))
                throw ParameterRangeError(
                    "kind h requires mu in (-inf, -(8/3) z^2] U [(8/5) z^2, 8 z^2)");
            const double q8 = 8.0 * z2 - mu;      // > 0 on the admissible range
            const double q83 = 8.0 * z2 - 3 * mu; // sign varies
            const double nu2 = q83 * q83 * (mu * mu / (q8 * q8) - 1.0 / 16);
            const double nu = std::sqrt(std::max(nu2, 0.0));
            const double x2 = mu * (mu / q8 - nu / q83);
            const double y2 = mu * (mu / q8 + nu / q83);
            const double x = std::sqrt(std::max(x2, 0.0));
            const double y = std::sqrt(std::max(y2, 0.0));
            const cplx eps = mu > 0 ? static_cast<double>(p.sign) * kI
                                    : cplx(static_cast<double>(p.sign));
            const cplx half = std::exp(kI * (p.beta1 + p.beta2) / 2.0);
            return finish(kind, x * std::exp(kI * p.beta1), eps * z * half,
                          y * std::exp(kI * p.beta2), mu, nu);
        }
        case WaveKind::catalogue_free:
            throw Error("catalogue-free waves come from find_stationary");
    }
    throw Error("unreachable");
}

SpectralState StationaryWave::state(int cutoff) const {
    if (cutoff < 2) throw Error("stationary wave needs cutoff >= 2");
    SpectralState s(Basis::full, cutoff);
    s[ModeIndex(2, 2)] = d2;
    s[ModeIndex(2, 0)] = d0;
    s[ModeIndex(2, -2)] = dm2;
    return s;
}

double el_residual(const SpectralState& phi, const CouplingTable& table, double omega,
                   double alpha) {
    ApplyPlan plan = make_plan(table, phi.set);
    std::vector<cplx> T = plan.trilinear(phi.c);
    double r2 = 0;
    for (int id = 0; id < phi.set.size(); ++id) {
        const int m = phi.set.mode(id).m;
        r2 += std::norm(T[id] - (omega + alpha * omega * m) * phi.c[id]);
    }
    return std::sqrt(r2);
}

// ---- Gaussian orbit ----------------------------------------------------------

std::vector<cplx> orbit_gaussian(double theta, double nu, double mu, double lambda,
                                 int n_max) {
    if (!(lambda > 0)) throw ParameterRangeError("orbit_gaussian needs lambda > 0");
    const cplx s((1.0 - lambda * lambda) / 2.0, mu);
    const cplx w(-(1.0 + lambda * lambda) / 2.0, mu);
    std::vector<cplx> c(n_max + 1);
    cplx ratio = s / w;
    cplx cur = -std::exp(kI * theta) * std::exp(kI * 2.0 * nu) * lambda / w;
    for (int n = 0; n <= n_max; ++n) {
        c[n] = cur;
        cur *= ratio * std::exp(kI * 4.0 * nu);
    }
    return c;
}

namespace {

double orbit_distance_sq(const std::vector<cplx>& v, double theta, double nu, double mu,
                         double lambda) {
    const std::vector<cplx> o =
        orbit_gaussian(theta, nu, mu, lambda, static_cast<int>(v.size()) - 1);
    double d2 = 0;
    for (std::size_t i = 0; i < v.size(); ++i) d2 += std::norm(v[i] - o[i]);
    return d2;
}

using Point4 = std::array<double, 4>;

// plain Nelder-Mead on R^4
Point4 nelder_mead(const std::function<double(const Point4&)>& f, Point4 start,
                   double scale, int max_iter, double* fbest) {
    constexpr int n = 4;
    std::array<Point4, n + 1> sim;
    std::array<double, n + 1> fv;
    sim[0] = start;
    fv[0] = f(start);
    for (int i = 0; i < n; ++i) {
        sim[i + 1] = start;
        sim[i + 1][i] += scale;
        fv[i + 1] = f(sim[i + 1]);
    }
    auto order = [&] {
        std::array<int, n + 1> idx;
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        std::array<Point4, n + 1> s2;
        std::array<double, n + 1> f2;
        for (int i = 0; i <= n; ++i) {
            s2[i] = sim[idx[i]];
            f2[i] = fv[idx[i]];
        }
        sim = s2;
        fv = f2;
    };
    for (int it = 0; it < max_iter; ++it) {
        order();
        if (fv[n] - fv[0] < 1e-16 * (1.0 + std::abs(fv[0]))) break;
        Point4 centroid{};
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < n; ++d) centroid[d] += sim[i][d] / n;
        auto blend = [&](double w) {
            Point4 p;
            for (int d = 0; d < n; ++d) p[d] = centroid[d] + w * (centroid[d] - sim[n][d]);
            return p;
        };
        Point4 xr = blend(1.0);
        double fr = f(xr);
        if (fr < fv[0]) {
            Point4 xe = blend(2.0);
            double fe = f(xe);
            if (fe < fr) {
                sim[n] = xe;
                fv[n] = fe;
            } else {
                sim[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            sim[n] = xr;
            fv[n] = fr;
        } else {
            Point4 xc = blend(fr < fv[n] ? 0.5 : -0.5);
            double fc = f(xc);
            if (fc < std::min(fr, fv[n])) {
                sim[n] = xc;
                fv[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    for (int d = 0; d < n; ++d)
                        sim[i][d] = sim[0][d] + 0.5 * (sim[i][d] - sim[0][d]);
                    fv[i] = f(sim[i]);
                }
            }
        }
    }
    order();
    *fbest = fv[0];
    return sim[0];
}

}  // namespace

OrbitFit distance_to_gaussian_orbit(const std::vector<cplx>& radial_coeffs, int starts,
                                    unsigned seed) {
    auto objective = [&](const Point4& p) {
        return orbit_distance_sq(radial_coeffs, p[0], p[1], p[2], std::exp(p[3]));
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uth(-kPi, kPi), unu(-0.8, 0.8), umu(-1.5, 1.5),
        ull(-0.5, 0.5);

    OrbitFit best;
    double best_sq = std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; ++s) {
        Point4 start = s == 0 ? Point4{0, 0, 0, 0}
                              : Point4{uth(rng), unu(rng), umu(rng), ull(rng)};
        double f1;
        Point4 p = nelder_mead(objective, start, 0.25, 1500, &f1);
        double f2;
        p = nelder_mead(objective, p, 0.02, 1500, &f2);  // restart tightens the simplex
        if (f2 < best_sq) {
            best_sq = f2;
            best.distance = std::sqrt(std::max(f2, 0.0));
            best.theta = p[0];
            best.nu = p[1];
            best.mu = p[2];
            best.lambda = std::exp(p[3]);
        }
    }
    return best;
}

}  // namespace cr

#include "cr/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace cr {

namespace {

LinearBlock make_block(int N, int k) {
    LinearBlock b;
    b.N = N;
    b.k = k;
    b.A = lll_coeff(k, 2 * N - k, N, N);
    b.B = lll_coeff(k, N, k, N);
    b.C = lll_coeff(2 * N - k, N, 2 * N - k, N);
    b.omega = lll_coeff(N, N, N, N);
    // factored to avoid cancellation when A is close to B+C-omega
    const double s = b.B + b.C - b.omega;
    b.delta = 4.0 * (b.A - s) * (b.A + s);
    return b;
}

}  // namespace

LllLinearization lll_linearization(int N, int decoupled_sample) {
    if (N < 0) throw Error("lll_linearization: N must be nonnegative");
    LllLinearization lin;
    lin.self_omega = lll_coeff(N, N, N, N);
    for (int k = 0; k < N; ++k) lin.blocks.push_back(make_block(N, k));
    for (int k = 2 * N + 1; k <= 2 * N + decoupled_sample; ++k)
        lin.decoupled_rates_sample.push_back(2.0 * lll_coeff(k, N, k, N));
    return lin;
}

double discriminant(int N, int k) {
    if (N < 0 || k < 0 || k > 2 * N || k == N)
        throw Error("discriminant: need 0 <= k <= 2N, k != N");
    return make_block(N, std::min(k, 2 * N - k)).delta;
}

int unstable_mode_count(int N) {
    int count = 0;
    for (int k = 0; k < N; ++k)
        if (discriminant(N, k) > 0) ++count;
    return count;
}

// ---- constrained extremization -----------------------------------------------

FoundWave find_stationary(const CouplingTable& table, const StationarySearchOptions& opts) {
    if (!table.resonant_family())
        throw TableMismatchError("find_stationary needs a resonant-family table");
    if (!(opts.mass > 0)) throw ParameterRangeError("constraint level must be positive");

    const ModeSet set(basis_of(table.family()), table.cutoff());
    const ApplyPlan plan(table, set);
    const int dim = set.size();

    // constraint Q(c) = sum (1 + alpha m) |c|^2
    std::vector<double> wq(dim);
    for (int i = 0; i < dim; ++i) {
        wq[i] = 1.0 + opts.alpha * set.mode(i).m;
        if (wq[i] <= 0)
            throw ParameterRangeError("constraint M + alpha P is not positive definite "
                                      "at this cutoff");
    }
    auto qval = [&](const std::vector<cplx>& c) {
        double q = 0;
        for (int i = 0; i < dim; ++i) q += wq[i] * std::norm(c[i]);
        return q;
    };
    auto renorm = [&](std::vector<cplx>& c) {
        const double scale = std::sqrt(opts.mass / qval(c));
        for (auto& v : c) v *= scale;
    };

    // modes the table actually couples; anything else is dead weight that
    // would soak up constraint mass
    std::vector<bool> coupled(dim, false);
    for (const auto& t : plan.terms()) {
        coupled[t.out] = true;
        coupled[t.i1] = coupled[t.i2] = coupled[t.i3] = true;
    }

    std::vector<cplx> c(dim);
    if (opts.initial) {
        if (static_cast<int>(opts.initial->size()) != dim)
            throw Error("initial guess has wrong dimension");
        c = *opts.initial;
    } else {
        std::mt19937_64 rng(opts.seed);
        std::normal_distribution<double> g(0.0, 1.0);
        for (int i = 0; i < dim; ++i)
            if (coupled[i]) c[i] = cplx(g(rng), g(rng));
    }
    renorm(c);

    const double sense = opts.maximize ? 1.0 : -1.0;
    std::vector<cplx> T(dim), tangent(dim), trial(dim);
    double eta = 0.05;

    FoundWave best(set);
    best.residual = std::numeric_limits<double>::infinity();

    // Stationarity for the chosen constraint: T = theta (1 + alpha m) c with
    // a single multiplier theta (so omega = theta, rotation rate = alpha).
    auto multiplier = [&](const std::vector<cplx>& x, const std::vector<cplx>& Tx) {
        double num = 0, den = 0;
        for (int i = 0; i < dim; ++i) {
            num += wq[i] * (Tx[i] * std::conj(x[i])).real();
            den += wq[i] * wq[i] * std::norm(x[i]);
        }
        return num / den;
    };

    int it = 0;
    bool polishing = false;   // Armijo cannot certify gains below the E
    double polish_eta = 0.05; // rounding floor; finish with fixed steps
    double prev_res = std::numeric_limits<double>::infinity();
    int rises = 0;
    for (; it < opts.max_iters; ++it) {
        plan.trilinear(c, T);
        const double theta = multiplier(c, T);
        double r2sum = 0;
        for (int i = 0; i < dim; ++i) {
            tangent[i] = T[i] - theta * wq[i] * c[i];
            r2sum += std::norm(tangent[i]);
        }
        const double res = std::sqrt(r2sum);

        if (res < best.residual) {
            best.residual = res;
            best.state.c = c;
            best.omega = theta;
            best.rot_rate = opts.alpha;
            best.iterations = it;
        }
        if (res < opts.residual_tol) {
            best.converged = true;
            break;
        }

        // the projected gradient of E is 4x the residual vector
        double slope = 0;
        for (int i = 0; i < dim; ++i) {
            tangent[i] *= 4.0;
            slope += std::norm(tangent[i]);
        }
        if (slope == 0) break;

        if (!polishing) {
            const double e0 = plan.hamiltonian(c);
            bool moved = false;
            for (int back = 0; back < 80; ++back) {
                for (int i = 0; i < dim; ++i) trial[i] = c[i] + sense * eta * tangent[i];
                renorm(trial);
                const double e1 = plan.hamiltonian(trial);
                if (sense * (e1 - e0) >= 1e-4 * eta * slope) {
                    c = trial;
                    eta = std::min(eta * 1.25, 10.0);
                    moved = true;
                    break;
                }
                eta *= 0.5;
                if (eta < 1e-18) break;
            }
            if (moved) continue;
            polishing = true;
            prev_res = res;
        }

        // fixed-step contraction toward the stationary point, adapting the
        // step to keep the residual falling
        if (res > 2.0 * prev_res && ++rises > 3) {
            polish_eta *= 0.5;
            rises = 0;
            if (polish_eta < 1e-13) break;
        }
        prev_res = res;
        for (int i = 0; i < dim; ++i) c[i] += sense * polish_eta * tangent[i];
        renorm(c);
    }

    // phase gauge: largest-modulus coefficient real positive
    int imax = 0;
    for (int i = 1; i < dim; ++i)
        if (std::abs(best.state.c[i]) > std::abs(best.state.c[imax])) imax = i;
    if (std::abs(best.state.c[imax]) > 0) {
        const cplx ph = std::polar(1.0, -std::arg(best.state.c[imax]));
        for (auto& v : best.state.c) v *= ph;
    }
    best.energy = plan.hamiltonian(best.state.c);
    best.iterations = it;
    return best;
}

// ---- decay diagnostic -----------------------------------------------------------

DecayFit decay_fit(const SpectralState& state) {
    constexpr double kFloor = 1e-13;
    struct Pt {
        double x, y;
        int n;
    };
    std::vector<Pt> pts;
    int max_usable_n = -1;
    for (int i = 0; i < state.set.size(); ++i) {
        const double a = std::abs(state.c[i]);
        if (a <= kFloor) continue;
        const int n = state.set.mode(i).n;
        pts.push_back({std::sqrt(2.0 * (n + 1)), std::log(a), n});
        max_usable_n = std::max(max_usable_n, n);
    }
    if (pts.empty()) throw InsufficientDataError("decay_fit: state below the noise floor");

    std::map<int, int> levels;
    for (const auto& p : pts) ++levels[p.n];

    if (static_cast<int>(pts.size()) < 4 || levels.size() < 4) {
        // finite-support states (zero tail below the cutoff) are flagged, a
        // genuinely tiny sample is an error
        if (max_usable_n < state.set.cutoff() && pts.size() >= 2) {
            DecayFit f;
            f.status = DecayFitStatus::compact_support;
            f.points = static_cast<int>(pts.size());
            return f;
        }
        throw InsufficientDataError("decay_fit: fewer than 4 usable modes/levels");
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = static_cast<double>(pts.size());
    for (const auto& p : pts) {
        sx += p.x;
        sy += p.y;
        sxx += p.x * p.x;
        sxy += p.x * p.y;
        syy += p.y * p.y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double num = (n * sxy - sx * sy);
    const double den = (n * sxx - sx * sx) * (n * syy - sy * sy);
    DecayFit f;
    f.mu_hat = -slope;
    f.r_squared = den > 0 ? num * num / den : 1.0;
    f.points = static_cast<int>(pts.size());
    return f;
}

}  // namespace cr

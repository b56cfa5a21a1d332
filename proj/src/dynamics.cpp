#include "cr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <tuple>

namespace cr {

ApplyPlan::ApplyPlan(const CouplingTable& table, const ModeSet& set)
    : set_(set), family_(table.family()) {
    for (const auto& e : table.entries()) {
        auto a = set_.find(e.quad[0].n, e.quad[0].m);
        auto b = set_.find(e.quad[1].n, e.quad[1].m);
        auto c = set_.find(e.quad[2].n, e.quad[2].m);
        auto d = set_.find(e.quad[3].n, e.quad[3].m);
        if (!a || !b || !c || !d) continue;  // entry above the state cutoff

        const double alpha = e.value;
        const int omega = e.quad.omega();
        const bool in_equal = (*a == *b);
        const bool out_equal = (*c == *d);
        const bool pairs_equal = (*a == *c && *b == *d);

        auto emit = [&](int i1, int i2, int i3, int out, double w, int om) {
            terms_.push_back({out, i1, i2, i3, w, om});
        };
        // inputs (a,b), outputs (c,d)
        const double s_in = in_equal ? 1.0 : 2.0;
        emit(*a, *b, *c, *d, s_in * alpha, omega);
        if (!out_equal) emit(*a, *b, *d, *c, s_in * alpha, omega);
        // half-swapped quadruples: inputs (c,d), outputs (a,b)
        if (!pairs_equal) {
            const double s_out = out_equal ? 1.0 : 2.0;
            emit(*c, *d, *a, *b, s_out * alpha, -omega);
            if (!in_equal) emit(*c, *d, *b, *a, s_out * alpha, -omega);
        }

        if (omega == 0) {
            const double mult =
                (in_equal ? 1.0 : 2.0) * (out_equal ? 1.0 : 2.0) * (pairs_equal ? 1.0 : 2.0);
            energy_terms_.push_back({*a, *b, *c, *d, mult * alpha});
        }
    }
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) {
        return std::tie(x.out, x.i1, x.i2, x.i3) < std::tie(y.out, y.i1, y.i2, y.i3);
    });
}

void ApplyPlan::trilinear(const std::vector<cplx>& c, std::vector<cplx>& out) const {
    out.assign(set_.size(), cplx(0.0));
    for (const auto& t : terms_)
        out[t.out] += t.w * c[t.i1] * c[t.i2] * std::conj(c[t.i3]);
}

std::vector<cplx> ApplyPlan::trilinear(const std::vector<cplx>& c) const {
    std::vector<cplx> out;
    trilinear(c, out);
    return out;
}

double ApplyPlan::hamiltonian(const std::vector<cplx>& c) const {
    double e = 0;
    for (const auto& t : energy_terms_)
        e += t.w * (c[t.i1] * c[t.i2] * std::conj(c[t.i3] * c[t.i4])).real();
    return e;
}

ApplyPlan make_plan(const CouplingTable& table, const ModeSet& set) {
    if (basis_of(table.family()) != set.basis())
        throw TableMismatchError("table family " + to_string(table.family()) +
                                 " does not match state basis " + to_string(set.basis()));
    if (table.cutoff() < set.cutoff())
        throw TableMismatchError("table cutoff " + std::to_string(table.cutoff()) +
                                 " below state cutoff " + std::to_string(set.cutoff()));
    return ApplyPlan(table, set);
}

void apply_T(const ApplyPlan& plan, const SpectralState& state, SpectralState& dstate) {
    // i dc/dt = T(c)  =>  dc/dt = -i T(c)
    plan.trilinear(state.c, dstate.c);
    for (auto& v : dstate.c) v *= cplx(0.0, -1.0);
    dstate.time = state.time;
}

SpectralState apply_T(const SpectralState& state, const CouplingTable& table) {
    if (!table.resonant_family())
        throw TableMismatchError("apply_T needs a resonant-family table");
    ApplyPlan plan = make_plan(table, state.set);
    SpectralState d(state.set);
    apply_T(plan, state, d);
    return d;
}

double hamiltonian(const SpectralState& state, const CouplingTable& table) {
    if (!table.resonant_family())
        throw TableMismatchError("hamiltonian needs a resonant-family table");
    return make_plan(table, state.set).hamiltonian(state.c);
}

SpectralState fourier_map(const SpectralState& state) {
    static const cplx phases[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    SpectralState out = state;
    for (int id = 0; id < out.set.size(); ++id)
        out.c[id] *= phases[out.set.mode(id).n % 4];
    return out;
}

void rk4_advance(const RhsFn& rhs, std::vector<cplx>& y, double& t, double h) {
    const std::size_t n = y.size();
    static thread_local std::vector<cplx> k1, k2, k3, k4, tmp;
    k1.resize(n); k2.resize(n); k3.resize(n); k4.resize(n); tmp.resize(n);
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t += h;
}

namespace {

bool all_finite(const std::vector<cplx>& y) {
    for (const auto& v : y)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

// Dormand-Prince 5(4) embedded step. Returns the error estimate.
double dopri_step(const RhsFn& rhs, const std::vector<cplx>& y, double t, double h,
                  std::vector<cplx>& out) {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = y.size();
    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n);
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + h / 5, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + 3 * h / 10, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + 4 * h / 5, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + 8 * h / 9, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                             a65 * k5[i]);
    rhs(t + h, tmp, k6);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, out, k7);

    double err = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cplx de = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                       e7 * k7[i]);
        double scale = 1.0 + std::max(std::abs(y[i]), std::abs(out[i]));
        err = std::max(err, std::abs(de) / scale);
    }
    return err;
}

}  // namespace

Trajectory evolve(const SpectralState& state, const CouplingTable& table, double t_end,
                  const EvolveOptions& opts) {
    if (!table.resonant_family())
        throw TableMismatchError("evolve needs a resonant-family table");
    if (!(t_end > state.time)) throw Error("evolve: t_end must exceed state.time");
    ApplyPlan plan = make_plan(table, state.set);

    RhsFn rhs = [&plan](double, const std::vector<cplx>& y, std::vector<cplx>& dy) {
        plan.trilinear(y, dy);
        for (auto& v : dy) v *= cplx(0.0, -1.0);
    };

    Trajectory traj;
    SpectralState cur = state;
    auto record = [&](const SpectralState& s) {
        ConservedSet inv = conserved(s);
        inv.hamiltonian = plan.hamiltonian(s.c);
        traj.samples.push_back({s, inv});
    };
    record(cur);

    const int stride = opts.sample_stride;
    long step_count = 0;

    if (opts.integrator == Integrator::rk4) {
        const double h = opts.step;
        if (!(h > 0)) throw Error("evolve: rk4 needs a positive step");
        double t = cur.time;
        std::vector<cplx> y = cur.c;
        while (t < t_end - 1e-14 * std::max(1.0, std::abs(t_end))) {
            double hs = std::min(h, t_end - t);
            rk4_advance(rhs, y, t, hs);
            ++step_count;
            if (!all_finite(y)) {
                traj.aborted_nonfinite = true;
                return traj;
            }
            cur.c = y;
            cur.time = t;
            if (stride > 0 && step_count % stride == 0 && t < t_end) record(cur);
        }
        record(cur);
    } else {
        const double tol = opts.tolerance;
        double t = cur.time;
        double h = std::min(opts.step > 0 ? opts.step : 1e-2, t_end - t);
        std::vector<cplx> y = cur.c, ynew;
        while (t < t_end - 1e-14 * std::max(1.0, std::abs(t_end))) {
            h = std::min(h, t_end - t);
            if (h < 1e-14 * std::max(1.0, std::abs(t)))
                throw StepUnderflowError("rk45 step size underflow at t=" + std::to_string(t));
            double err = dopri_step(rhs, y, t, h, ynew);
            if (err <= tol) {
                t += h;
                y = ynew;
                ++step_count;
                if (!all_finite(y)) {
                    traj.aborted_nonfinite = true;
                    return traj;
                }
                cur.c = y;
                cur.time = t;
                if (stride > 0 && step_count % stride == 0 && t < t_end) record(cur);
            }
            double factor = err > 0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
            h *= std::clamp(factor, 0.1, 5.0);
        }
        record(cur);
    }
    return traj;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    if (traj.samples.empty()) return;
    const ModeSet& set = traj.samples.front().state.set;
    os << "t,M,P,E,Hexp";
    for (const auto& q : set.modes())
        os << ",re_" << q.n << "_" << q.m << ",im_" << q.n << "_" << q.m;
    os << "\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << buf;
    };
    for (const auto& s : traj.samples) {
        put(s.state.time);
        os << ',';
        put(s.invariants.mass);
        os << ',';
        put(s.invariants.momentum);
        os << ',';
        put(s.invariants.hamiltonian);
        os << ',';
        put(s.invariants.h_expect);
        for (const auto& v : s.state.c) {
            os << ',';
            put(v.real());
            os << ',';
            put(v.imag());
        }
        os << "\n";
    }
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_trajectory_csv(traj, os);
}

}  // namespace cr

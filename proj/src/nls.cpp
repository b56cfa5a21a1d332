#include "cr/nls.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace cr {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);
}  // namespace

double hs_norm(const SpectralState& state, double s) {
    if (s < 0) throw Error("hs_norm: s must be nonnegative");
    double sum = 0;
    for (int i = 0; i < state.set.size(); ++i)
        sum += std::pow(2.0 * (state.set.mode(i).n + 1), s) * std::norm(state.c[i]);
    return std::sqrt(sum);
}

void nls_rhs(const ApplyPlan& plan, double t, const std::vector<cplx>& g,
             std::vector<cplx>& out) {
    out.assign(plan.set().size(), cplx(0.0));
    // phases e^{2 i t omega} cached per integer omega
    const int omax = 2 * plan.set().cutoff();
    std::vector<cplx> phase(2 * omax + 1);
    for (int o = -omax; o <= omax; ++o) phase[o + omax] = std::exp(kI * (2.0 * t * o));

    const double inv_pi2 = 1.0 / (kPi * kPi);
    for (const auto& term : plan.terms())
        out[term.out] += (term.w * inv_pi2) * phase[term.omega + omax] * g[term.i1] *
                         g[term.i2] * std::conj(g[term.i3]);
    for (auto& v : out) v *= -kI;  // i dg/dt = N_t(g)
}

SpectralState nls_rhs(const NlsProfile& profile, double t, const CouplingTable& full_table) {
    if (full_table.family() != Family::full_product)
        throw TableMismatchError("nls_rhs needs a full-product table");
    ApplyPlan plan = make_plan(full_table, profile.state.set);
    SpectralState d(profile.state.set);
    nls_rhs(plan, t, profile.state.c, d.c);
    d.time = t;
    return d;
}

std::vector<SpectralState> nls_evolve(const NlsProfile& profile,
                                      const CouplingTable& full_table,
                                      const std::vector<double>& t_grid, double h) {
    if (full_table.family() != Family::full_product)
        throw TableMismatchError("nls_evolve needs a full-product table");
    if (!(h > 0)) throw Error("nls_evolve: need a positive step");
    ApplyPlan plan = make_plan(full_table, profile.state.set);
    RhsFn rhs = [&plan](double t, const std::vector<cplx>& y, std::vector<cplx>& dy) {
        nls_rhs(plan, t, y, dy);
    };

    std::vector<SpectralState> out;
    SpectralState cur = profile.state;
    std::vector<cplx> y = cur.c;
    double t = cur.time;
    for (double target : t_grid) {
        if (target < t - 1e-12) throw Error("nls_evolve: t_grid must be nondecreasing");
        while (t < target - 1e-14 * std::max(1.0, std::abs(target))) {
            const double hs = std::min(h, target - t);
            rk4_advance(rhs, y, t, hs);
        }
        cur.c = y;
        cur.time = t;
        if (!cur.finite()) throw Error("nls_evolve: state became nonfinite");
        out.push_back(cur);
    }
    return out;
}

std::vector<CompareRow> compare_flows(const SpectralState& u0, double s,
                                      const std::vector<double>& t_grid,
                                      const std::vector<double>& B_list,
                                      const CouplingTable& full_table,
                                      const CouplingTable& resonant_table,
                                      const CompareOptions& opts) {
    if (!(s > 1)) throw Error("compare_flows: needs s > 1 (algebra norm regime)");
    if (!resonant_table.resonant_family())
        throw TableMismatchError("compare_flows: second table must be resonant");

    ApplyPlan cr_plan = make_plan(resonant_table, u0.set);
    RhsFn cr_rhs = [&cr_plan](double, const std::vector<cplx>& y, std::vector<cplx>& dy) {
        cr_plan.trilinear(y, dy);
        for (auto& v : dy) v *= -kI;
    };

    std::vector<CompareRow> rows;
    for (double B : B_list) {
        SpectralState g0 = u0;
        for (auto& v : g0.c) v *= B;

        NlsProfile prof{g0, s};
        std::vector<SpectralState> g_states = nls_evolve(prof, full_table, t_grid, opts.h_nls);

        // resonant flow read at rescaled time t / pi^2
        std::vector<cplx> f = g0.c;
        double tf = 0;
        SpectralState diff = g0;
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const double target = t_grid[i] / (kPi * kPi);
            while (tf < target - 1e-15 * std::max(1.0, target)) {
                const double hs = std::min(opts.h_cr, target - tf);
                rk4_advance(cr_rhs, f, tf, hs);
            }
            for (int j = 0; j < diff.set.size(); ++j) diff.c[j] = g_states[i].c[j] - f[j];
            rows.push_back({B, t_grid[i], hs_norm(diff, s), B * B * B});
        }
    }
    return rows;
}

void write_compare_csv(const std::vector<CompareRow>& rows, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << "B,t,error_hs,bound_B3\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << buf;
    };
    for (const auto& r : rows) {
        put(r.B);
        os << ',';
        put(r.t);
        os << ',';
        put(r.error_hs);
        os << ',';
        put(r.bound_B3);
        os << "\n";
    }
}

}  // namespace cr

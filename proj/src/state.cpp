#include "cr/state.hpp"

#include <cmath>
#include <limits>

namespace cr {

double SpectralState::mass() const {
    double m = 0;
    for (const auto& v : c) m += std::norm(v);
    return m;
}

bool SpectralState::finite() const {
    for (const auto& v : c)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

ConservedSet conserved(const SpectralState& state) {
    ConservedSet out;
    out.hamiltonian = std::numeric_limits<double>::quiet_NaN();
    const auto& set = state.set;
    for (int id = 0; id < set.size(); ++id) {
        const ModeIndex& q = set.mode(id);
        const cplx v = state.c[id];
        const double p = std::norm(v);
        out.mass += p;
        out.momentum += q.m * p;
        out.h_expect += 2.0 * (q.n + 1) * p;
        out.zsq_expect += (q.n + 1) * p;
        out.dilation -= p;

        // <a_d u, u> = sum sqrt((n+m+2)/2) c_{n+1,m+1} conj(c_{n,m})
        out.ad_expect += std::sqrt((q.n + q.m + 2) / 2.0) *
                         state.at(q.n + 1, q.m + 1) * std::conj(v);
        out.ag_expect += std::sqrt((q.n - q.m + 2) / 2.0) *
                         state.at(q.n + 1, q.m - 1) * std::conj(v);

        // off-diagonal (n, n-2) parts of |z|^2 and the dilation
        if (q.n >= 2 && std::abs(q.m) <= q.n - 2) {
            const double w =
                std::sqrt(static_cast<double>(q.n) * q.n - static_cast<double>(q.m) * q.m) / 2.0;
            const cplx lower = state.at(q.n - 2, q.m);
            out.zsq_expect += w * 2.0 * (v * std::conj(lower)).real();
            out.dilation += w * (v * std::conj(lower) - std::conj(v) * lower);
        }
    }
    return out;
}

SpectralState ladder_apply(Ladder op, const SpectralState& state, int target_cutoff) {
    if (state.set.basis() != Basis::full)
        throw Error("ladder_apply: ladder images leave the lll/radial chains; "
                    "use a full-basis state");
    const bool raising = (op == Ladder::a_d_dag || op == Ladder::a_g_dag);
    SpectralState out(state.set.basis(), target_cutoff);
    out.time = state.time;
    for (int id = 0; id < state.set.size(); ++id) {
        const cplx v = state.c[id];
        if (v == cplx(0.0)) continue;
        ModeIndex img;
        double w = ladder_coefficient(op, state.set.mode(id), img);
        if (w == 0.0) continue;
        auto dest = out.set.find(img.n, img.m);
        if (!dest) {
            if (raising)
                throw CutoffExceededError(
                    "raising operator would create mode (" + std::to_string(img.n) + "," +
                    std::to_string(img.m) + ") above target cutoff " +
                    std::to_string(target_cutoff));
            continue;
        }
        out.c[*dest] += w * v;
    }
    return out;
}

SpectralState ladder_apply(Ladder op, const SpectralState& state) {
    return ladder_apply(op, state, state.set.cutoff());
}

}  // namespace cr

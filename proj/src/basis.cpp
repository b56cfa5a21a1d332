#include "cr/basis.hpp"

#include <cmath>
#include <numbers>

namespace cr {

std::string to_string(Basis b) {
    switch (b) {
        case Basis::full: return "full";
        case Basis::lll: return "lll";
        case Basis::radial: return "radial";
    }
    return "?";
}

ModeSet::ModeSet(Basis basis, int cutoff) : basis_(basis), cutoff_(cutoff) {
    if (cutoff < 0) throw Error("cutoff must be nonnegative");
    switch (basis) {
        case Basis::full:
            for (int n = 0; n <= cutoff; ++n)
                for (int m = -n; m <= n; m += 2) modes_.emplace_back(n, m);
            break;
        case Basis::lll:
            for (int j = 0; j <= cutoff; ++j) modes_.emplace_back(j, j);
            break;
        case Basis::radial:
            for (int k = 0; k <= cutoff; ++k) modes_.emplace_back(2 * k, 0);
            break;
    }
}

std::optional<int> ModeSet::find(int n, int m) const {
    if (n < 0 || std::abs(m) > n || ((n + m) & 1)) return std::nullopt;
    switch (basis_) {
        case Basis::full:
            if (n > cutoff_) return std::nullopt;
            return n * (n + 1) / 2 + (n + m) / 2;
        case Basis::lll:
            if (m != n || n > cutoff_) return std::nullopt;
            return n;
        case Basis::radial:
            if (m != 0 || (n & 1) || n / 2 > cutoff_) return std::nullopt;
            return n / 2;
    }
    return std::nullopt;
}

int ModeSet::id(const ModeIndex& q) const {
    auto i = find(q.n, q.m);
    if (!i)
        throw Error("mode (" + std::to_string(q.n) + "," + std::to_string(q.m) +
                    ") not in " + to_string(basis_) + " set at cutoff " +
                    std::to_string(cutoff_));
    return *i;
}

double laguerre_eval(int k, double x) { return laguerre_assoc_eval(k, 0, x); }

double laguerre_assoc_eval(int k, int a, double x) {
    if (k < 0) throw Error("laguerre: negative degree");
    if (k == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + a - x;
    for (int j = 1; j < k; ++j) {
        double lp1 = ((2.0 * j + 1.0 + a - x) * l - (j + a) * lm1) / (j + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

double radial_profile(const ModeIndex& q, double r) {
    const int a = std::abs(q.m);
    const int k = q.k();
    // sqrt(k!/(k+a)!) through log-gamma; exact sign (-1)^k from the ladder
    // construction.
    double lognorm = 0.5 * (std::lgamma(k + 1.0) - std::lgamma(k + a + 1.0));
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    double rho = r * r;
    double val = std::exp(lognorm - 0.5 * rho) * laguerre_assoc_eval(k, a, rho) /
                 std::sqrt(std::numbers::pi);
    if (a > 0) val *= std::pow(r, a);
    return sign * val;
}

cplx special_hermite_eval(const ModeIndex& q, double r, double theta) {
    return radial_profile(q, r) * std::polar(1.0, q.m * theta);
}

cplx special_hermite_eval_xy(const ModeIndex& q, double x, double y) {
    return special_hermite_eval(q, std::hypot(x, y), std::atan2(y, x));
}

ModeEigendata mode_eigendata(const ModeIndex& q) {
    // e^{-i n pi/2} cycles through 1, -i, -1, i.
    static const cplx phases[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    return {2.0 * (q.n + 1), q.m, phases[q.n % 4]};
}

double ladder_coefficient(Ladder op, const ModeIndex& q, ModeIndex& out) {
    switch (op) {
        case Ladder::a_d:  // c_{n,m} -> (n-1, m-1), factor sqrt((n+m)/2)
            if (q.n + q.m == 0) return 0.0;
            out = ModeIndex(q.n - 1, q.m - 1);
            return std::sqrt((q.n + q.m) / 2.0);
        case Ladder::a_g:
            if (q.n - q.m == 0) return 0.0;
            out = ModeIndex(q.n - 1, q.m + 1);
            return std::sqrt((q.n - q.m) / 2.0);
        case Ladder::a_d_dag:
            out = ModeIndex(q.n + 1, q.m + 1);
            return std::sqrt((q.n + q.m + 2) / 2.0);
        case Ladder::a_g_dag:
            out = ModeIndex(q.n + 1, q.m - 1);
            return std::sqrt((q.n - q.m + 2) / 2.0);
    }
    return 0.0;
}

}  // namespace cr

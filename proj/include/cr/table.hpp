#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cr/modes.hpp"

namespace cr {

using Rational = boost::multiprecision::cpp_rational;

enum class Family { lll, radial, general2d, full_product };

std::string to_string(Family f);
Family family_from_string(const std::string& s);
Basis basis_of(Family f);

// Index quadruple of a quartic-form entry. Resonant families enforce
// n1+n2 = n3+n4 and m1+m2 = m3+m4; the full-product family only the
// m-selection rule.
struct ResonantQuadruple {
    std::array<ModeIndex, 4> q;

    const ModeIndex& operator[](int i) const { return q[i]; }
    ModeIndex& operator[](int i) { return q[i]; }

    int omega() const { return q[0].n + q[1].n - q[2].n - q[3].n; }
    bool m_admissible() const { return q[0].m + q[1].m == q[2].m + q[3].m; }
    bool resonant() const { return omega() == 0 && m_admissible(); }

    // Canonical form: q1 <= q2, q3 <= q4, (q1,q2) <= (q3,q4) lexicographically.
    ResonantQuadruple canonical() const;

    friend auto operator<=>(const ResonantQuadruple&, const ResonantQuadruple&) = default;
};

// Closed LLL form: (pi/2) (n1+n2)! / (2^{n1+n2} sqrt(n1! n2! n3! n4!)) on
// n1+n2 = n3+n4, else 0. Evaluated through log-gamma.
double lll_coeff(long n1, long n2, long n3, long n4);

// log of the LLL coefficient (no exponentiation; for asymptotic fits).
double log_lll_coeff(long n1, long n2, long n3, long n4);

// Radial coefficient as an exact rational multiple of pi:
// pi * int_0^inf L_{k1} L_{k2} L_{k3} L_{k4}(rho) e^{-2 rho} d rho on
// k1+k2 = k3+k4, else 0.
Rational radial_coeff_rational(int k1, int k2, int k3, int k4);
double radial_coeff(int k1, int k2, int k3, int k4);

// pi^2 int phi_{q1} phi_{q2} conj(phi_{q3} phi_{q4}) dx by angular reduction
// and 1D Gauss-Laguerre quadrature in rho = r^2, with a node-doubling
// convergence check. Returns exactly 0 when m1+m2 != m3+m4.
double general_coeff(const ResonantQuadruple& q);

// Independent oracle: the same integral on a 2D tensor Gauss-Hermite grid,
// with no angular reduction. Used by `coeffs --verify-oracle` and the tests.
double oracle_coeff_2d(const ResonantQuadruple& q, int nodes_per_axis = 0);

struct TableEntry {
    ResonantQuadruple quad;  // stored canonically
    double value = 0;
};

// Immutable map from canonical index quadruples to real coupling values.
class CouplingTable {
  public:
    CouplingTable(Family family, int cutoff, std::vector<TableEntry> entries);

    Family family() const { return family_; }
    int cutoff() const { return cutoff_; }
    bool resonant_family() const { return family_ != Family::full_product; }
    const std::vector<TableEntry>& entries() const { return entries_; }

    // Value on an arbitrary (ordered) quadruple; exactly 0 when the
    // quadruple is not stored (non-resonant lookups in resonant families).
    double lookup(const ResonantQuadruple& q) const;

  private:
    Family family_;
    int cutoff_;
    std::vector<TableEntry> entries_;  // sorted by canonical quadruple
};

struct BuildOptions {
    std::size_t entry_cap = 5'000'000;  // resource guard
    int jobs = 1;                       // worker threads for the quadratures
};

// Enumerate and evaluate all quadruples of the family up to the cutoff.
// For lll/radial the cutoff bounds the family index (j resp. k); for
// general2d/full-product it bounds the oscillator level n.
CouplingTable build_table(Family family, int cutoff, const BuildOptions& opts = {});

// Slice of a general2d table whose entries live entirely on the oscillator
// eigenspace E_n (the closed subsystem spanned by the level-n modes).
CouplingTable restrict_to_level(const CouplingTable& table, int n);

// Line-oriented text format, FNV-1a checksum over the body. Round-trips
// values bitwise.
void save_table(const CouplingTable& table, const std::string& path);
CouplingTable load_table(const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace cr

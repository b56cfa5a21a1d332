#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "cr/errors.hpp"

namespace cr {

// Label (n, m) of a special Hermite function: n is the oscillator level
// (H-eigenvalue 2(n+1)), m the angular momentum (L-eigenvalue).
// Valid labels satisfy |m| <= n and n + m even.
struct ModeIndex {
    int n = 0;
    int m = 0;

    ModeIndex() = default;
    ModeIndex(int n_, int m_) : n(n_), m(m_) {
        if (n < 0 || std::abs(m) > n || ((n + m) & 1))
            throw Error("invalid mode (" + std::to_string(n_) + "," +
                        std::to_string(m_) + "): need n>=0, |m|<=n, n+m even");
    }

    // Radial quantum number: number of radial nodes of the profile.
    int k() const { return (n - std::abs(m)) / 2; }

    friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

// Radial mode h_k = phi_{2k,0}, H-eigenvalue 4k+2.
struct RadialIndex {
    int k = 0;
    explicit RadialIndex(int k_) : k(k_) {
        if (k < 0) throw Error("radial index must be nonnegative");
    }
    ModeIndex mode() const { return ModeIndex(2 * k, 0); }
};

// The three index sets states and tables live on.
enum class Basis {
    full,    // all valid (n, m) with n <= cutoff
    lll,     // Bargmann-Fock chain (j, j), j <= cutoff
    radial,  // radial chain (2k, 0), k <= cutoff
};

std::string to_string(Basis b);

// Dense index set for one basis at a cutoff, with O(1) id lookups.
class ModeSet {
  public:
    ModeSet(Basis basis, int cutoff);

    Basis basis() const { return basis_; }
    int cutoff() const { return cutoff_; }
    int size() const { return static_cast<int>(modes_.size()); }
    const std::vector<ModeIndex>& modes() const { return modes_; }
    const ModeIndex& mode(int id) const { return modes_[id]; }

    // Id of (n, m) in this set, or nullopt when the mode is absent
    // (invalid label, outside the family chain, or above the cutoff).
    std::optional<int> find(int n, int m) const;
    std::optional<int> find(const ModeIndex& q) const { return find(q.n, q.m); }

    // Id lookup that must succeed.
    int id(const ModeIndex& q) const;

  private:
    Basis basis_;
    int cutoff_;
    std::vector<ModeIndex> modes_;
};

}  // namespace cr

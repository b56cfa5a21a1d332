#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "cr/table.hpp"

using namespace cr;
namespace {
constexpr double kPi = std::numbers::pi;

ResonantQuadruple quad(int n1, int m1, int n2, int m2, int n3, int m3, int n4, int m4) {
    return {{ModeIndex(n1, m1), ModeIndex(n2, m2), ModeIndex(n3, m3), ModeIndex(n4, m4)}};
}

}  // namespace

TEST_CASE("lll closed form") {
    CHECK(std::abs(lll_coeff(0, 0, 0, 0) - kPi / 2) < 1e-14);
    CHECK(lll_coeff(1, 0, 0, 0) == 0.0);
    CHECK(std::abs(lll_coeff(2, 0, 1, 1) - kPi / (4 * std::numbers::sqrt2)) < 1e-14);
    // no overflow far beyond factorial range
    CHECK(std::isfinite(lll_coeff(200, 200, 200, 200)));
    CHECK(lll_coeff(200, 200, 200, 200) > 0);
}

TEST_CASE("radial exact rationals") {
    CHECK(radial_coeff_rational(0, 0, 0, 0) == Rational(1, 2));
    CHECK(radial_coeff_rational(1, 1, 1, 1) == Rational(1, 4));
    CHECK(radial_coeff_rational(1, 1, 2, 0) == Rational(1, 8));
    CHECK(radial_coeff_rational(1, 0, 0, 0) == 0);
    CHECK(std::abs(radial_coeff(0, 0, 0, 0) - kPi / 2) < 1e-15);

    // positivity of every resonant radial quadruple up to cutoff 8
    for (int a = 0; a <= 8; ++a)
        for (int b = 0; b <= 8; ++b)
            for (int c = 0; c <= 8; ++c) {
                int d = a + b - c;
                if (d < 0 || d > 8) continue;
                CHECK(radial_coeff_rational(a, b, c, d) > 0);
            }
}

TEST_CASE("general coefficient anchors") {
    CHECK(std::abs(general_coeff(quad(0, 0, 0, 0, 0, 0, 0, 0)) - kPi / 2) < 1e-10);
    CHECK(std::abs(general_coeff(quad(1, 1, 1, 1, 1, 1, 1, 1)) - kPi / 4) < 1e-10);
    CHECK(std::abs(general_coeff(quad(2, 2, 2, -2, 2, 0, 2, 0)) - kPi / 8) < 1e-10);
    // angular selection: m mismatch is an exact zero
    CHECK(general_coeff(quad(2, 2, 2, -2, 2, 2, 2, 0)) == 0.0);
}

TEST_CASE("cross-family agreement") {
    // Bargmann chain (n, n)
    for (int n1 = 0; n1 <= 5; ++n1)
        for (int n2 = 0; n2 <= 5; ++n2)
            for (int n3 = 0; n3 <= 5; ++n3) {
                int n4 = n1 + n2 - n3;
                if (n4 < 0 || n4 > 5) continue;
                double g = general_coeff(quad(n1, n1, n2, n2, n3, n3, n4, n4));
                CHECK(std::abs(g - lll_coeff(n1, n2, n3, n4)) < 1e-10);
            }
    // radial chain (2k, 0)
    for (int k1 = 0; k1 <= 4; ++k1)
        for (int k2 = 0; k2 <= 4; ++k2)
            for (int k3 = 0; k3 <= 4; ++k3) {
                int k4 = k1 + k2 - k3;
                if (k4 < 0 || k4 > 4) continue;
                double g = general_coeff(quad(2 * k1, 0, 2 * k2, 0, 2 * k3, 0, 2 * k4, 0));
                CHECK(std::abs(g - radial_coeff(k1, k2, k3, k4)) < 1e-10);
            }
}

TEST_CASE("tensor-grid oracle agrees on resonant quadruples up to n=3") {
    ModeSet set(Basis::full, 3);
    int checked = 0;
    for (const auto& q1 : set.modes())
        for (const auto& q2 : set.modes())
            for (const auto& q3 : set.modes()) {
                int n4 = q1.n + q2.n - q3.n;
                int m4 = q1.m + q2.m - q3.m;
                if (n4 < 0 || n4 > 3 || std::abs(m4) > n4 || ((n4 + m4) & 1)) continue;
                ResonantQuadruple q{{q1, q2, q3, ModeIndex(n4, m4)}};
                CHECK(std::abs(general_coeff(q) - oracle_coeff_2d(q)) < 1e-8);
                ++checked;
            }
    CHECK(checked > 100);
}

TEST_CASE("build lll table at cutoff 1 has six ordered entries") {
    CouplingTable t = build_table(Family::lll, 1);
    // canonical entries expand into ordered quadruples via pair multiplicities
    std::size_t ordered = 0;
    for (const auto& e : t.entries()) {
        std::size_t mult = 1;
        if (!(e.quad[0] == e.quad[1])) mult *= 2;
        if (!(e.quad[2] == e.quad[3])) mult *= 2;
        bool pairs_equal = e.quad[0] == e.quad[2] && e.quad[1] == e.quad[3];
        if (!pairs_equal) mult *= 2;
        ordered += mult;
    }
    CHECK(ordered == 6);
    CHECK(t.lookup(quad(0, 0, 1, 1, 1, 1, 0, 0)) ==
          doctest::Approx(lll_coeff(0, 1, 1, 0)).epsilon(1e-15));
}

TEST_CASE("radial table at cutoff 0") {
    CouplingTable t = build_table(Family::radial, 0);
    REQUIRE(t.entries().size() == 1);
    CHECK(t.entries()[0].value == doctest::Approx(kPi / 2).epsilon(1e-15));
}

TEST_CASE("general2d table reproduces the level-2 hamiltonian expansion") {
    CouplingTable t = build_table(Family::general2d, 2);
    auto coeff = [&](const ResonantQuadruple& q) { return t.lookup(q); };
    const double u = kPi / 4;
    CHECK(std::abs(coeff(quad(2, 2, 2, 2, 2, 2, 2, 2)) - u * 3 / 4) < 1e-10);
    CHECK(std::abs(coeff(quad(2, -2, 2, -2, 2, -2, 2, -2)) - u * 3 / 4) < 1e-10);
    CHECK(std::abs(coeff(quad(2, 0, 2, 0, 2, 0, 2, 0)) - u) < 1e-10);
    // |c2|^2 |c-2|^2 coefficient 3u comes from 4 ordered copies
    CHECK(std::abs(4 * coeff(quad(2, 2, 2, -2, 2, 2, 2, -2)) - u * 3) < 1e-10);
    // |c0|^2 |c+-2|^2 coefficients 2u from 4 ordered copies
    CHECK(std::abs(4 * coeff(quad(2, 2, 2, 0, 2, 2, 2, 0)) - u * 2) < 1e-10);
    CHECK(std::abs(4 * coeff(quad(2, -2, 2, 0, 2, -2, 2, 0)) - u * 2) < 1e-10);
    // c2 c-2 conj(c0)^2 coefficient u from 2 ordered copies
    CHECK(std::abs(2 * coeff(quad(2, 2, 2, -2, 2, 0, 2, 0)) - u) < 1e-10);
}

TEST_CASE("stored entries satisfy the quartic-form symmetries") {
    CouplingTable t = build_table(Family::general2d, 3);
    CHECK(t.entries().size() > 20);
    for (const auto& e : t.entries()) {
        const auto& q = e.quad;
        CHECK(q.resonant());
        CHECK(!(q[1] < q[0]));
        CHECK(!(q[3] < q[2]));
        // evaluator is symmetric under the stored permutations
        ResonantQuadruple swapped{{q[1], q[0], q[3], q[2]}};
        CHECK(t.lookup(swapped) == e.value);
        ResonantQuadruple across{{q[2], q[3], q[0], q[1]}};
        CHECK(t.lookup(across) == e.value);
    }
}

TEST_CASE("lll positivity up to cutoff 8") {
    CouplingTable t = build_table(Family::lll, 8);
    for (const auto& e : t.entries()) CHECK(e.value > 0);
}

TEST_CASE("full-product table carries frequency mismatches") {
    CouplingTable t = build_table(Family::full_product, 2);
    bool has_offresonant = false;
    for (const auto& e : t.entries())
        if (e.quad.omega() != 0) has_offresonant = true;
    CHECK(has_offresonant);
    // the resonant slice matches the general2d table
    CouplingTable g = build_table(Family::general2d, 2);
    for (const auto& e : g.entries())
        CHECK(t.lookup(e.quad) == doctest::Approx(e.value).epsilon(1e-12));
    // sign of a known off-resonant product: pi^2 int phi00^3 phi20
    // = pi * int (rho - 1) e^{-2 rho} d rho = -pi/4
    CHECK(t.lookup(quad(0, 0, 0, 0, 0, 0, 2, 0)) ==
          doctest::Approx(-kPi / 4).epsilon(1e-10));
}

TEST_CASE("table file round trip and failure modes") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "cr_table_test";
    fs::create_directories(dir);
    fs::path path = dir / "t.crt";

    CouplingTable t = build_table(Family::lll, 8);
    save_table(t, path.string());
    CouplingTable loaded = load_table(path.string());
    REQUIRE(loaded.entries().size() == t.entries().size());
    CHECK(loaded.family() == Family::lll);
    CHECK(loaded.cutoff() == 8);
    for (std::size_t i = 0; i < t.entries().size(); ++i) {
        CHECK(loaded.entries()[i].quad == t.entries()[i].quad);
        // bitwise round trip
        CHECK(loaded.entries()[i].value == t.entries()[i].value);
    }

    // truncated body
    {
        std::ifstream in(path);
        std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::ofstream out(dir / "trunc.crt", std::ios::binary);
        out << all.substr(0, all.size() * 2 / 3);
    }
    CHECK_THROWS_AS(load_table((dir / "trunc.crt").string()), Error);

    // version bump
    {
        std::ifstream in(path);
        std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        auto pos = all.find("v1");
        all.replace(pos, 2, "v0");
        std::ofstream out(dir / "v0.crt", std::ios::binary);
        out << all;
    }
    CHECK_THROWS_AS(load_table((dir / "v0.crt").string()), VersionMismatchError);

    // flipped digit in the body
    {
        std::ifstream in(path);
        std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        auto pos = all.rfind('7');
        if (pos == std::string::npos) pos = all.size() - 3;
        all[pos] = all[pos] == '7' ? '8' : '7';
        std::ofstream out(dir / "bad.crt", std::ios::binary);
        out << all;
    }
    CHECK_THROWS_AS(load_table((dir / "bad.crt").string()), ChecksumMismatchError);

    fs::remove_all(dir);
}

TEST_CASE("entry cap raises a resource error") {
    BuildOptions opts;
    opts.entry_cap = 10;
    CHECK_THROWS_AS(build_table(Family::lll, 8, opts), ResourceError);
}

TEST_CASE("parallel build matches serial") {
    BuildOptions par;
    par.jobs = 4;
    CouplingTable a = build_table(Family::general2d, 3);
    CouplingTable b = build_table(Family::general2d, 3, par);
    REQUIRE(a.entries().size() == b.entries().size());
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        CHECK(a.entries()[i].value == b.entries()[i].value);
}

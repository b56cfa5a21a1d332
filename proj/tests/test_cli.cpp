#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / "cr_cli_test";
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args, const fs::path& cwd) {
    std::string cmd = "cd " + cwd.string() + " && CR_TABLE_CACHE=" + cwd.string() +
                      " " + CR_CLI_PATH + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(is)),
                       std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("coeffs writes the documented header and values") {
    TempDir dir;
    REQUIRE(run("coeffs lll 8 t.crt", dir.path) == 0);
    std::string contents = slurp(dir.path / "t.crt");
    CHECK(contents.rfind("CRTABLE v1 family=lll cutoff=8", 0) == 0);

    REQUIRE(run("coeffs radial 0 r.crt", dir.path) == 0);
    std::string radial = slurp(dir.path / "r.crt");
    CHECK(radial.find("0 0 0 0 0 0 0 0 1.5707963267948966") != std::string::npos);
}

TEST_CASE("coeffs --verify-oracle succeeds on general2d") {
    TempDir dir;
    CHECK(run("coeffs general2d 2 --verify-oracle", dir.path) == 0);
}

TEST_CASE("simulate is deterministic and hits the closed-form phase") {
    TempDir dir;
    {
        std::ofstream cfg(dir.path / "sim.cfg");
        cfg << "family = general2d\ncutoff = 2\nstep = 1e-3\nt_end = 1\n"
               "preset = pure-mode\npreset.n = 0\npreset.m = 0\n"
               "out = a.csv\nseed = 7\n";
    }
    REQUIRE(run("simulate --config sim.cfg", dir.path) == 0);
    REQUIRE(run("simulate --config sim.cfg --out b.csv", dir.path) == 0);
    CHECK(slurp(dir.path / "a.csv") == slurp(dir.path / "b.csv"));

    // final row carries c_00 ~ e^{-i pi/2} = -i
    std::string csv = slurp(dir.path / "a.csv");
    auto last = csv.find_last_of('\n', csv.size() - 2);
    std::string row = csv.substr(last + 1);
    CHECK(row.find(",-1") != std::string::npos);
}

TEST_CASE("stationary reports a converged wave") {
    TempDir dir;
    CHECK(run("stationary --family general2d --cutoff 2 --level 2 --sense max "
              "--seed 3 --out w.txt",
              dir.path) == 0);
    std::string wave = slurp(dir.path / "w.txt");
    CHECK(wave.rfind("CRWAVE v1", 0) == 0);
}

TEST_CASE("compare-nls writes the error report") {
    TempDir dir;
    {
        std::ofstream cfg(dir.path / "cmp.cfg");
        cfg << "cutoff = 2\ns = 1.5\nB_list = 0.2,0.1\nt_grid = 1\n"
               "preset = random-seeded\nseed = 5\nh_nls = 0.005\nh_cr = 0.002\n"
               "out = cmp.csv\n";
    }
    REQUIRE(run("compare-nls --config cmp.cfg", dir.path) == 0);
    std::string csv = slurp(dir.path / "cmp.csv");
    CHECK(csv.rfind("B,t,error_hs,bound_B3", 0) == 0);
}

TEST_CASE("stability csv has the documented columns") {
    TempDir dir;
    REQUIRE(run("stability --n-min 1 --n-max 2 --out s.csv", dir.path) == 0);
    std::string csv = slurp(dir.path / "s.csv");
    CHECK(csv.rfind("N,k,Delta,count", 0) == 0);
    CHECK(csv.find("1,0,-0.15421") != std::string::npos);
}

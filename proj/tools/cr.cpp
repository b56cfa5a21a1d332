// Command-line front end: coefficient tables, simulations, stability
// reports, stationary-wave searches, and the trapped-NLS comparison.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "cr/dynamics.hpp"
#include "cr/nls.hpp"
#include "cr/stability.hpp"
#include "cr/subspaces.hpp"
#include "cr/table.hpp"

namespace fs = std::filesystem;
using namespace cr;

namespace {

// Flat key=value configuration, one pair per line, '#' comments.
struct Config {
    std::map<std::string, std::string> kv;

    static Config parse_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw Error("cannot open config file " + path);
        Config c;
        std::string line;
        while (std::getline(is, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const char* ws = " \t\r";
                s.erase(0, s.find_first_not_of(ws));
                auto end = s.find_last_not_of(ws);
                s.erase(end == std::string::npos ? 0 : end + 1);
                return s;
            };
            std::string key = trim(line.substr(0, eq));
            std::string val = trim(line.substr(eq + 1));
            if (!key.empty()) c.kv[key] = val;
        }
        return c;
    }

    bool has(const std::string& k) const { return kv.count(k) > 0; }
    std::string str(const std::string& k, const std::string& dflt = "") const {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    }
    double num(const std::string& k, double dflt) const {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : std::stod(it->second);
    }
    long integer(const std::string& k, long dflt) const {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : std::stol(it->second);
    }
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

std::string cache_dir() {
    const char* env = std::getenv("CR_TABLE_CACHE");
    return env && *env ? std::string(env) : std::string(".");
}

// Load the named table, or find/build it in the cache directory.
CouplingTable obtain_table(const std::string& table_path, Family family, int cutoff,
                           int jobs) {
    if (!table_path.empty()) return load_table(table_path);
    fs::path cached = fs::path(cache_dir()) /
                      (to_string(family) + "_" + std::to_string(cutoff) + ".crt");
    if (fs::exists(cached)) {
        CouplingTable t = load_table(cached.string());
        if (t.family() == family && t.cutoff() == cutoff) return t;
    }
    BuildOptions opts;
    opts.jobs = jobs;
    CouplingTable t = build_table(family, cutoff, opts);
    std::error_code ec;
    fs::create_directories(cached.parent_path(), ec);
    save_table(t, cached.string());
    return t;
}

SpectralState initial_state(const Config& cfg, Family family, int cutoff, unsigned seed) {
    const std::string preset = cfg.str("preset", "pure-mode");
    if (preset == "pure-mode") {
        SpectralState s(basis_of(family), cutoff);
        ModeIndex q(static_cast<int>(cfg.integer("preset.n", 0)),
                    static_cast<int>(cfg.integer("preset.m", 0)));
        s[q] = cplx(cfg.num("preset.re", 1.0), cfg.num("preset.im", 0.0));
        return s;
    }
    if (preset == "e2-catalogue") {
        if (basis_of(family) != Basis::full || cutoff < 2)
            throw Error("e2-catalogue preset needs a general2d table with cutoff >= 2");
        std::string kind = cfg.str("preset.kind", "e");
        if (kind.size() != 1 || kind[0] < 'a' || kind[0] > 'h')
            throw Error("preset.kind must be one of a..h");
        WaveParams p;
        p.z = cplx(cfg.num("preset.z_re", 1.0), cfg.num("preset.z_im", 0.0));
        p.z2 = cplx(cfg.num("preset.z2_re", 1.0), cfg.num("preset.z2_im", 0.0));
        p.lambda = cfg.num("preset.lambda", 1.0);
        p.beta1 = cfg.num("preset.beta1", 0.0);
        p.beta2 = cfg.num("preset.beta2", 0.0);
        p.mu = cfg.num("preset.mu", 0.0);
        p.sign = static_cast<int>(cfg.integer("preset.sign", 1));
        StationaryWave w =
            stationary_wave(static_cast<WaveKind>(kind[0] - 'a'), p);
        return w.state(cutoff);
    }
    if (preset == "gaussian-orbit") {
        if (basis_of(family) != Basis::radial)
            throw Error("gaussian-orbit preset needs the radial family");
        auto c = orbit_gaussian(cfg.num("preset.theta", 0.0), cfg.num("preset.nu", 0.0),
                                cfg.num("preset.mu", 0.0), cfg.num("preset.lambda", 1.0),
                                cutoff);
        SpectralState s(Basis::radial, cutoff);
        s.c = c;
        return s;
    }
    if (preset == "random-seeded") {
        SpectralState s(basis_of(family), cutoff);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g;
        for (auto& v : s.c) v = cplx(g(rng), g(rng));
        double mass = cfg.num("preset.mass", 1.0);
        double scale = std::sqrt(mass / s.mass());
        for (auto& v : s.c) v *= scale;
        return s;
    }
    throw Error("unknown preset: " + preset);
}

int cmd_coeffs(const std::string& family_str, int cutoff, const std::string& out,
               bool verify_oracle, int jobs, std::size_t cap, unsigned seed) {
    Family family = family_from_string(family_str);
    BuildOptions opts;
    opts.jobs = jobs;
    opts.entry_cap = cap;
    CouplingTable t = build_table(family, cutoff, opts);
    std::cout << "built " << t.entries().size() << " entries (family "
              << to_string(family) << ", cutoff " << cutoff << ")\n";

    if (verify_oracle) {
        // quadrature oracle on a random 5% sample of the stored entries
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::size_t checked = 0;
        double worst = 0;
        for (const auto& e : t.entries()) {
            if (u(rng) > 0.05) continue;
            ++checked;
            double ref = oracle_coeff_2d(e.quad);
            worst = std::max(worst, std::abs(ref - e.value));
            if (std::abs(ref - e.value) > 1e-8) {
                std::cerr << "oracle mismatch: stored " << e.value << " vs " << ref
                          << "\n";
                return 1;
            }
        }
        if (checked == 0 && !t.entries().empty()) {
            // tiny tables: check everything rather than nothing
            for (const auto& e : t.entries()) {
                ++checked;
                double ref = oracle_coeff_2d(e.quad);
                worst = std::max(worst, std::abs(ref - e.value));
                if (std::abs(ref - e.value) > 1e-8) {
                    std::cerr << "oracle mismatch\n";
                    return 1;
                }
            }
        }
        std::cout << "oracle: " << checked << " entries checked, max |diff| = "
                  << worst << "\n";
    }

    if (!out.empty()) {
        save_table(t, out);
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int cmd_simulate(const Config& cfg) {
    Family family = family_from_string(cfg.str("family", "general2d"));
    int cutoff = static_cast<int>(cfg.integer("cutoff", 4));
    unsigned seed = static_cast<unsigned>(cfg.integer("seed", 1));
    int jobs = static_cast<int>(cfg.integer("jobs", 1));
    CouplingTable table = obtain_table(cfg.str("table"), family, cutoff, jobs);

    SpectralState s = initial_state(cfg, family, cutoff, seed);

    EvolveOptions opts;
    opts.integrator = cfg.str("integrator", "rk4") == "rk45" ? Integrator::rk45
                                                             : Integrator::rk4;
    opts.step = cfg.num("step", 1e-3);
    opts.tolerance = cfg.num("tol", 1e-10);
    opts.sample_stride = static_cast<int>(cfg.integer("sample_stride", 0));
    double t_end = cfg.num("t_end", 1.0);

    Trajectory traj = evolve(s, table, t_end, opts);
    std::string out = cfg.str("out", "trajectory.csv");
    write_trajectory_csv(traj, out);
    std::cout << "wrote " << out << " (" << traj.samples.size() << " samples)\n";
    if (traj.aborted_nonfinite) {
        std::cerr << "aborted on nonfinite state; last good sample kept\n";
        return 1;
    }
    return 0;
}

int cmd_stability(int n_min, int n_max, const std::string& out) {
    std::ofstream os;
    std::ostream* sink = &std::cout;
    if (!out.empty()) {
        os.open(out, std::ios::binary);
        if (!os) throw Error("cannot open " + out);
        sink = &os;
    }
    char buf[64];
    (*sink) << "N,k,Delta,count\n";
    for (int N = n_min; N <= n_max; ++N) {
        int count = unstable_mode_count(N);
        for (int k = 0; k < N; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", discriminant(N, k));
            (*sink) << N << ',' << k << ',' << buf << ',' << count << "\n";
        }
        if (N == 0) (*sink) << "0,,," << count << "\n";
    }
    return 0;
}

int cmd_stationary(const std::string& table_path, const std::string& family_str,
                   int cutoff, int level, double mass, double alpha, bool maximize,
                   unsigned seed, int jobs, const std::string& out) {
    Family family = family_from_string(family_str);
    CouplingTable table = obtain_table(table_path, family, cutoff, jobs);
    if (level >= 0) table = restrict_to_level(table, level);

    StationarySearchOptions opts;
    opts.mass = mass;
    opts.alpha = alpha;
    opts.maximize = maximize;
    opts.seed = seed;
    FoundWave w = find_stationary(table, opts);

    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", w.residual);
    std::cout << (w.converged ? "converged" : "NOT converged") << " in "
              << w.iterations << " iterations, residual " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", w.omega);
    std::cout << "omega " << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", w.rot_rate);
    std::cout << " rot_rate " << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", w.energy);
    std::cout << " energy " << buf << "\n";

    if (!out.empty()) {
        std::ofstream os(out, std::ios::binary);
        if (!os) throw Error("cannot open " + out);
        os << "CRWAVE v1 family=" << to_string(table.family())
           << " cutoff=" << table.cutoff() << " omega=";
        std::snprintf(buf, sizeof(buf), "%.17g", w.omega);
        os << buf << " rot_rate=";
        std::snprintf(buf, sizeof(buf), "%.17g", w.rot_rate);
        os << buf << " residual=";
        std::snprintf(buf, sizeof(buf), "%.17g", w.residual);
        os << buf << "\n";
        for (int i = 0; i < w.state.set.size(); ++i) {
            const ModeIndex& q = w.state.set.mode(i);
            char re[64], im[64];
            std::snprintf(re, sizeof(re), "%.17g", w.state.c[i].real());
            std::snprintf(im, sizeof(im), "%.17g", w.state.c[i].imag());
            os << q.n << ' ' << q.m << ' ' << re << ' ' << im << "\n";
        }
        std::cout << "wrote " << out << "\n";
    }
    return w.converged ? 0 : 1;
}

int cmd_compare_nls(const Config& cfg) {
    int cutoff = static_cast<int>(cfg.integer("cutoff", 8));
    double s = cfg.num("s", 1.5);
    int jobs = static_cast<int>(cfg.integer("jobs", 1));
    unsigned seed = static_cast<unsigned>(cfg.integer("seed", 1));

    CouplingTable full =
        obtain_table(cfg.str("table"), Family::full_product, cutoff, jobs);
    CouplingTable res =
        obtain_table(cfg.str("res_table"), Family::general2d, cutoff, jobs);

    std::vector<double> B_list = parse_list(cfg.str("B_list", "0.1,0.05"));
    std::vector<double> t_grid = parse_list(cfg.str("t_grid", "0.5,1"));
    if (B_list.empty() || t_grid.empty()) throw Error("empty B_list or t_grid");

    SpectralState u0 = initial_state(cfg, Family::general2d, cutoff, seed);

    CompareOptions co;
    co.h_nls = cfg.num("h_nls", 0.01);
    co.h_cr = cfg.num("h_cr", 0.001);
    auto rows = compare_flows(u0, s, t_grid, B_list, full, res, co);
    std::string out = cfg.str("out", "compare.csv");
    write_compare_csv(rows, out);
    std::cout << "wrote " << out << " (" << rows.size() << " rows)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-resonant spectral toolkit"};
    app.require_subcommand(1);

    // coeffs
    std::string co_family, co_out;
    int co_cutoff = 0, co_jobs = 1;
    unsigned co_seed = 1;
    std::size_t co_cap = 5'000'000;
    bool co_oracle = false;
    auto* coeffs = app.add_subcommand("coeffs", "build a coupling table");
    coeffs->add_option("family", co_family, "lll | radial | general2d | full-product")
        ->required();
    coeffs->add_option("cutoff", co_cutoff, "index cutoff")->required();
    coeffs->add_option("out", co_out, "output table file");
    coeffs->add_flag("--verify-oracle", co_oracle,
                     "cross-check a 5% sample against the 2d tensor-grid oracle");
    coeffs->add_option("--jobs,-j", co_jobs, "worker threads");
    coeffs->add_option("--cap", co_cap, "entry cap");
    coeffs->add_option("--seed", co_seed, "oracle sampling seed");

    // simulate
    std::string sim_config;
    std::map<std::string, std::string> sim_overrides;
    std::string sim_table, sim_integrator, sim_out;
    double sim_step = -1, sim_tol = -1, sim_tend = -1;
    long sim_seed = -1, sim_cutoff = -1, sim_jobs = -1;
    auto* simulate = app.add_subcommand("simulate", "integrate the truncated flow");
    simulate->add_option("--config", sim_config, "flat key=value config file")
        ->required();
    simulate->add_option("--table", sim_table, "coupling table file");
    simulate->add_option("--cutoff", sim_cutoff, "cutoff override");
    simulate->add_option("--integrator", sim_integrator, "rk4 | rk45");
    simulate->add_option("--step", sim_step, "rk4 step");
    simulate->add_option("--tol", sim_tol, "rk45 tolerance");
    simulate->add_option("--t-end", sim_tend, "final time");
    simulate->add_option("--seed", sim_seed, "seed override");
    simulate->add_option("--jobs", sim_jobs, "worker threads for table building");
    simulate->add_option("--out", sim_out, "trajectory csv path");

    // stability
    int st_min = 0, st_max = 10;
    std::string st_out;
    auto* stability = app.add_subcommand("stability", "LLL discriminant report");
    stability->add_option("--n-min", st_min, "first wave index");
    stability->add_option("--n-max", st_max, "last wave index");
    stability->add_option("--out", st_out, "csv path (default stdout)");

    // stationary
    std::string wa_table, wa_family = "general2d", wa_out, wa_sense = "min";
    int wa_cutoff = 2, wa_level = -1, wa_jobs = 1;
    double wa_mass = 1.0, wa_alpha = 0.0;
    unsigned wa_seed = 1;
    auto* stationary = app.add_subcommand("stationary", "constrained extremizer search");
    stationary->add_option("--table", wa_table, "coupling table file");
    stationary->add_option("--family", wa_family, "table family when building");
    stationary->add_option("--cutoff", wa_cutoff, "table cutoff when building");
    stationary->add_option("--level", wa_level, "restrict to the eigenspace E_n");
    stationary->add_option("--mass", wa_mass, "constraint level");
    stationary->add_option("--alpha", wa_alpha, "constrain M + alpha P");
    stationary->add_option("--sense", wa_sense, "min | max");
    stationary->add_option("--seed", wa_seed, "search seed");
    stationary->add_option("--jobs", wa_jobs, "worker threads for table building");
    stationary->add_option("--out", wa_out, "wave file path");

    // compare-nls
    std::string cn_config;
    auto* compare = app.add_subcommand("compare-nls", "trapped-NLS approximation error");
    compare->add_option("--config", cn_config, "flat key=value config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (coeffs->parsed())
            return cmd_coeffs(co_family, co_cutoff, co_out, co_oracle, co_jobs, co_cap,
                              co_seed);
        if (simulate->parsed()) {
            Config cfg = Config::parse_file(sim_config);
            if (!sim_table.empty()) cfg.kv["table"] = sim_table;
            if (sim_cutoff >= 0) cfg.kv["cutoff"] = std::to_string(sim_cutoff);
            if (!sim_integrator.empty()) cfg.kv["integrator"] = sim_integrator;
            if (sim_step > 0) cfg.kv["step"] = std::to_string(sim_step);
            if (sim_tol > 0) cfg.kv["tol"] = std::to_string(sim_tol);
            if (sim_tend > 0) cfg.kv["t_end"] = std::to_string(sim_tend);
            if (sim_seed >= 0) cfg.kv["seed"] = std::to_string(sim_seed);
            if (sim_jobs > 0) cfg.kv["jobs"] = std::to_string(sim_jobs);
            if (!sim_out.empty()) cfg.kv["out"] = sim_out;
            return cmd_simulate(cfg);
        }
        if (stability->parsed()) return cmd_stability(st_min, st_max, st_out);
        if (stationary->parsed())
            return cmd_stationary(wa_table, wa_family, wa_cutoff, wa_level, wa_mass,
                                  wa_alpha, wa_sense == "max", wa_seed, wa_jobs, wa_out);
        if (compare->parsed()) return cmd_compare_nls(Config::parse_file(cn_config));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

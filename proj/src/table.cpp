#include "cr/table.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "cr/basis.hpp"
#include "cr/quadrature.hpp"

namespace cr {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string to_string(Family f) {
    switch (f) {
        case Family::lll: return "lll";
        case Family::radial: return "radial";
        case Family::general2d: return "general2d";
        case Family::full_product: return "full-product";
    }
    return "?";
}

Family family_from_string(const std::string& s) {
    if (s == "lll") return Family::lll;
    if (s == "radial") return Family::radial;
    if (s == "general2d") return Family::general2d;
    if (s == "full-product") return Family::full_product;
    throw Error("unknown coefficient family: " + s);
}

Basis basis_of(Family f) {
    switch (f) {
        case Family::lll: return Basis::lll;
        case Family::radial: return Basis::radial;
        default: return Basis::full;
    }
}

ResonantQuadruple ResonantQuadruple::canonical() const {
    ResonantQuadruple r = *this;
    if (r.q[1] < r.q[0]) std::swap(r.q[0], r.q[1]);
    if (r.q[3] < r.q[2]) std::swap(r.q[2], r.q[3]);
    if (std::make_pair(r.q[2], r.q[3]) < std::make_pair(r.q[0], r.q[1])) {
        std::swap(r.q[0], r.q[2]);
        std::swap(r.q[1], r.q[3]);
    }
    return r;
}

double log_lll_coeff(long n1, long n2, long n3, long n4) {
    if (n1 + n2 != n3 + n4)
        throw Error("log_lll_coeff: non-resonant quadruple has no finite log");
    const double s = static_cast<double>(n1 + n2);
    return std::log(kPi / 2) + std::lgamma(s + 1.0) - s * std::numbers::ln2 -
           0.5 * (std::lgamma(n1 + 1.0) + std::lgamma(n2 + 1.0) +
                  std::lgamma(n3 + 1.0) + std::lgamma(n4 + 1.0));
}

double lll_coeff(long n1, long n2, long n3, long n4) {
    if (n1 < 0 || n2 < 0 || n3 < 0 || n4 < 0) throw Error("lll_coeff: negative index");
    if (n1 + n2 != n3 + n4) return 0.0;
    return std::exp(log_lll_coeff(n1, n2, n3, n4));
}

// ---- exact radial integrals -------------------------------------------------

namespace {

using BigInt = boost::multiprecision::cpp_int;

// Coefficients of L_k^{(0)}: c_i = (-1)^i C(k,i)/i!.
std::vector<Rational> laguerre_poly(int k) {
    std::vector<Rational> c(k + 1);
    c[0] = 1;
    for (int i = 1; i <= k; ++i)
        c[i] = c[i - 1] * Rational(-(k - i + 1), static_cast<long>(i) * i);
    return c;
}

std::vector<Rational> poly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    std::vector<Rational> out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

BigInt factorial(unsigned j) {
    BigInt f = 1;
    for (unsigned i = 2; i <= j; ++i) f *= i;
    return f;
}

}  // namespace

Rational radial_coeff_rational(int k1, int k2, int k3, int k4) {
    if (k1 < 0 || k2 < 0 || k3 < 0 || k4 < 0) throw Error("radial_coeff: negative index");
    if (k1 + k2 != k3 + k4) return 0;
    auto p = poly_mul(poly_mul(laguerre_poly(k1), laguerre_poly(k2)),
                      poly_mul(laguerre_poly(k3), laguerre_poly(k4)));
    // int_0^inf x^j e^{-2x} dx = j! / 2^{j+1}
    Rational sum = 0;
    for (std::size_t j = 0; j < p.size(); ++j)
        sum += p[j] * Rational(factorial(static_cast<unsigned>(j)), BigInt(1) << (j + 1));
    return sum;
}

double radial_coeff(int k1, int k2, int k3, int k4) {
    return kPi * static_cast<double>(radial_coeff_rational(k1, k2, k3, k4));
}

// ---- general quadruples by angular reduction --------------------------------

namespace {

// int_0^inf rho^A prod_i L_{k_i}^{(a_i)}(rho) e^{-2 rho} d rho with the given
// Gauss-Laguerre rule (substitution sigma = 2 rho).
double radial_product_integral(const ResonantQuadruple& q, const GaussRule& rule) {
    const int A = (std::abs(q[0].m) + std::abs(q[1].m) + std::abs(q[2].m) + std::abs(q[3].m)) / 2;
    double sum = 0;
    for (int i = 0; i < rule.size(); ++i) {
        const double rho = 0.5 * rule.x[i];
        double g = A > 0 ? std::pow(rho, A) : 1.0;
        for (int j = 0; j < 4; ++j)
            g *= laguerre_assoc_eval(q[j].k(), std::abs(q[j].m), rho);
        sum += rule.w[i] * g;
    }
    return 0.5 * sum;
}

double general_coeff_with_nodes(const ResonantQuadruple& q, int nodes) {
    if (!q.m_admissible()) return 0.0;
    double norm = 1.0, lognorm = 0.0;
    for (int j = 0; j < 4; ++j) {
        const int k = q[j].k(), a = std::abs(q[j].m);
        lognorm += 0.5 * (std::lgamma(k + 1.0) - std::lgamma(k + a + 1.0));
        if (k & 1) norm = -norm;
    }
    const double scale = kPi * norm * std::exp(lognorm);
    const double a1 = scale * radial_product_integral(q, gauss_laguerre(nodes));
    const double a2 = scale * radial_product_integral(q, gauss_laguerre(2 * nodes));
    if (std::abs(a2 - a1) > 1e-10 * std::max(1.0, std::abs(a2)))
        throw QuadratureError("quadrature did not converge for quadruple at " +
                              std::to_string(nodes) + " nodes");
    return a2;
}

}  // namespace

double general_coeff(const ResonantQuadruple& q) {
    const int nodes = 2 * (q[0].n + q[1].n) + 8;
    const int nodes34 = 2 * (q[2].n + q[3].n) + 8;
    return general_coeff_with_nodes(q, std::max(nodes, nodes34));
}

double oracle_coeff_2d(const ResonantQuadruple& q, int nodes_per_axis) {
    if (!q.m_admissible()) return 0.0;
    int deg = q[0].n + q[1].n + q[2].n + q[3].n;
    int nodes = nodes_per_axis > 0 ? nodes_per_axis : deg / 2 + 8;
    // x = u / sqrt(2) turns the product's e^{-2|x|^2} into the e^{-u^2-v^2}
    // Gauss-Hermite weight; the leftover exponentials cancel pointwise.
    const GaussRule gh = gauss_hermite(nodes);
    double sum = 0;
    for (int i = 0; i < gh.size(); ++i) {
        const double u = gh.x[i];
        for (int j = 0; j < gh.size(); ++j) {
            const double v = gh.x[j];
            const double x = u / std::numbers::sqrt2;
            const double y = v / std::numbers::sqrt2;
            cplx prod = special_hermite_eval_xy(q[0], x, y) *
                        special_hermite_eval_xy(q[1], x, y) *
                        std::conj(special_hermite_eval_xy(q[2], x, y) *
                                  special_hermite_eval_xy(q[3], x, y));
            sum += gh.w[i] * gh.w[j] * (prod * std::exp(u * u + v * v)).real();
        }
    }
    return kPi * kPi * 0.5 * sum;
}

// ---- table construction ------------------------------------------------------

CouplingTable::CouplingTable(Family family, int cutoff, std::vector<TableEntry> entries)
    : family_(family), cutoff_(cutoff), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const TableEntry& a, const TableEntry& b) { return a.quad < b.quad; });
}

double CouplingTable::lookup(const ResonantQuadruple& q) const {
    ResonantQuadruple key = q.canonical();
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const TableEntry& e, const ResonantQuadruple& k) {
                                   return e.quad < k;
                               });
    if (it != entries_.end() && it->quad == key) return it->value;
    return 0.0;
}

CouplingTable build_table(Family family, int cutoff, const BuildOptions& opts) {
    if (cutoff < 0) throw Error("build_table: cutoff must be nonnegative");
    const ModeSet set(basis_of(family), cutoff);
    const auto& modes = set.modes();
    const int M = set.size();

    // canonical pairs in lexicographic order, bucketed by selection key
    struct Pair {
        int i, j, nsum, msum;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(M) * (M + 1) / 2);
    for (int i = 0; i < M; ++i)
        for (int j = i; j < M; ++j)
            pairs.push_back({i, j, modes[i].n + modes[j].n, modes[i].m + modes[j].m});

    const bool full = (family == Family::full_product);
    std::map<std::pair<int, int>, std::vector<int>> buckets;
    for (int p = 0; p < static_cast<int>(pairs.size()); ++p) {
        std::pair<int, int> key = full ? std::make_pair(pairs[p].msum, 0)
                                       : std::make_pair(pairs[p].nsum, pairs[p].msum);
        buckets[key].push_back(p);
    }

    std::size_t projected = 0;
    for (const auto& [key, list] : buckets)
        projected += list.size() * (list.size() + 1) / 2;
    if (projected > opts.entry_cap)
        throw ResourceError("projected " + std::to_string(projected) +
                            " table entries exceed cap " + std::to_string(opts.entry_cap) +
                            " (family " + to_string(family) + ", cutoff " +
                            std::to_string(cutoff) + ")");

    std::vector<ResonantQuadruple> quads;
    quads.reserve(projected);
    for (const auto& [key, list] : buckets)
        for (std::size_t a = 0; a < list.size(); ++a)
            for (std::size_t b = a; b < list.size(); ++b) {
                const Pair& pa = pairs[list[a]];
                const Pair& pb = pairs[list[b]];
                quads.push_back({{modes[pa.i], modes[pa.j], modes[pb.i], modes[pb.j]}});
            }

    std::vector<double> values(quads.size());
    auto eval = [&](const ResonantQuadruple& q) -> double {
        switch (family) {
            case Family::lll:
                return lll_coeff(q[0].n, q[1].n, q[2].n, q[3].n);
            case Family::radial:
                return radial_coeff(q[0].k(), q[1].k(), q[2].k(), q[3].k());
            default:
                return general_coeff(q);
        }
    };

    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < quads.size(); ++i) values[i] = eval(quads[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        std::atomic<bool> failed{false};
        std::string error_msg;
        std::mutex error_mutex;
        for (int w = 0; w < jobs; ++w)
            workers.emplace_back([&] {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= quads.size() || failed.load()) return;
                    try {
                        values[i] = eval(quads[i]);
                    } catch (const std::exception& e) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        failed = true;
                        error_msg = e.what();
                        return;
                    }
                }
            });
        for (auto& t : workers) t.join();
        if (failed) throw Error("build_table worker failed: " + error_msg);
    }

    std::vector<TableEntry> entries;
    entries.reserve(quads.size());
    for (std::size_t i = 0; i < quads.size(); ++i)
        if (std::abs(values[i]) > 1e-13) entries.push_back({quads[i], values[i]});
    return CouplingTable(family, cutoff, std::move(entries));
}

CouplingTable restrict_to_level(const CouplingTable& table, int n) {
    if (table.family() != Family::general2d)
        throw TableMismatchError("restrict_to_level needs a general2d table");
    if (n > table.cutoff())
        throw TableMismatchError("level exceeds the table cutoff");
    std::vector<TableEntry> kept;
    for (const auto& e : table.entries()) {
        bool on_level = true;
        for (int i = 0; i < 4; ++i)
            if (e.quad[i].n != n) on_level = false;
        if (on_level) kept.push_back(e);
    }
    return CouplingTable(table.family(), table.cutoff(), std::move(kept));
}

// ---- file format --------------------------------------------------------------

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void save_table(const CouplingTable& table, const std::string& path) {
    std::ostringstream body;
    char buf[64];
    for (const auto& e : table.entries()) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.value);
        body << e.quad[0].n << ' ' << e.quad[0].m << ' ' << e.quad[1].n << ' '
             << e.quad[1].m << ' ' << e.quad[2].n << ' ' << e.quad[2].m << ' '
             << e.quad[3].n << ' ' << e.quad[3].m << ' ' << buf;
        if (table.family() == Family::full_product) body << " omega=" << e.quad.omega();
        body << '\n';
    }
    std::string body_str = body.str();
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(body_str)));

    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << "CRTABLE v1 family=" << to_string(table.family())
       << " cutoff=" << table.cutoff() << " entries=" << table.entries().size()
       << " checksum=" << buf << '\n'
       << body_str;
    if (!os) throw Error("write failed: " + path);
}

namespace {

std::string header_field(const std::string& header, const std::string& key) {
    auto pos = header.find(key + "=");
    if (pos == std::string::npos)
        throw MalformedFileError("table header missing field " + key);
    pos += key.size() + 1;
    auto end = header.find(' ', pos);
    return header.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

}  // namespace

CouplingTable load_table(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open table file " + path);
    std::string header;
    if (!std::getline(is, header)) throw MalformedFileError("empty table file " + path);

    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "CRTABLE") throw MalformedFileError("not a CRTABLE file: " + path);
    if (version != "v1") throw VersionMismatchError("unsupported table version " + version);

    const Family family = family_from_string(header_field(header, "family"));
    const int cutoff = std::stoi(header_field(header, "cutoff"));
    const std::size_t count = std::stoul(header_field(header, "entries"));
    const std::string checksum = header_field(header, "checksum");

    std::string body((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(body)));
    if (checksum != buf)
        throw ChecksumMismatchError("table body checksum mismatch in " + path);

    std::vector<TableEntry> entries;
    entries.reserve(count);
    std::istringstream bs(body);
    std::string line;
    while (std::getline(bs, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int n[4], m[4];
        double value;
        for (int i = 0; i < 4; ++i)
            if (!(ls >> n[i] >> m[i])) throw MalformedFileError("bad table row: " + line);
        if (!(ls >> value)) throw MalformedFileError("bad table row: " + line);
        ResonantQuadruple q{{ModeIndex(n[0], m[0]), ModeIndex(n[1], m[1]),
                             ModeIndex(n[2], m[2]), ModeIndex(n[3], m[3])}};
        std::string tail;
        if (ls >> tail) {
            if (tail.rfind("omega=", 0) != 0)
                throw MalformedFileError("unexpected trailing token: " + line);
            if (std::stoi(tail.substr(6)) != q.omega())
                throw MalformedFileError("omega column disagrees with indices: " + line);
        }
        entries.push_back({q, value});
    }
    if (entries.size() != count)
        throw MalformedFileError("table has " + std::to_string(entries.size()) +
                                 " rows, header promised " + std::to_string(count));
    return CouplingTable(family, cutoff, std::move(entries));
}

}  // namespace cr

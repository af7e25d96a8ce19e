#include "hartree/riesz.hpp"

#include "hartree/model.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hartree {

namespace {

struct GaussRule {
    std::vector<double> x, w;  // on [0, 1]
};

const GaussRule& gauss_rule(int n) {
    static std::mutex mtx;
    static std::map<int, GaussRule> rules;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = rules.find(n);
    if (it != rules.end()) return it->second;
    std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
    GaussRule rule;
    for (double z : zeros) {
        double dp = boost::math::legendre_p_prime(n, z);
        double wt = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.x.push_back(0.5 * (1.0 + z));
        rule.w.push_back(0.5 * wt);
        if (z != 0.0) {
            rule.x.push_back(0.5 * (1.0 - z));
            rule.w.push_back(0.5 * wt);
        }
    }
    return rules.emplace(n, std::move(rule)).first->second;
}

double ipow(double x, int k) {
    double r = 1.0;
    bool neg = k < 0;
    unsigned e = static_cast<unsigned>(neg ? -k : k);
    while (e) {
        if (e & 1u) r *= x;
        x *= x;
        e >>= 1u;
    }
    return neg ? 1.0 / r : r;
}

// x^β with a fast path for integer and half-integer β.
struct Power {
    explicit Power(double beta) : beta(beta) {
        double twice = 2.0 * beta;
        half_integer = std::abs(twice - std::round(twice)) < 1e-14;
        if (half_integer) {
            long t = std::lround(twice);
            odd = (t % 2) != 0;
            whole = static_cast<int>(std::floor(t / 2.0));
        }
    }
    double operator()(double x) const {
        if (!half_integer) return std::pow(x, beta);
        double v = ipow(x, whole);
        return odd ? v * std::sqrt(x) : v;
    }
    double beta;
    bool half_integer = false;
    bool odd = false;
    int whole = 0;
};

double average_impl(double r, double s, int N, const Power& pw, int m, int points) {
    const double pi = std::numbers::pi;
    const GaussRule& g = gauss_rule(points);
    const double d2 = (r - s) * (r - s);
    const double rs4 = 4.0 * r * s;
    auto integrand = [&](double theta) {
        double sh = std::sin(0.5 * theta), ch = std::cos(0.5 * theta);
        double D = d2 + rs4 * sh * sh;
        double val = pw(D) * ipow(2.0 * sh * ch, N - 2);
        if (m == 1) val *= 2.0 * sh * sh;
        return val;
    };
    auto panel = [&](double a, double b) {
        double sum = 0;
        for (std::size_t k = 0; k < g.x.size(); ++k) sum += g.w[k] * integrand(a + (b - a) * g.x[k]);
        return sum * (b - a);
    };
    double theta_c = std::abs(r - s) / std::sqrt(r * s);
    double total = 0;
    double b1;
    if (theta_c == 0.0) {
        // r = s: the integrand behaves like θ^γ near 0; θ = b t^{1/(γ+1)} makes it smooth.
        b1 = pi / 1024.0;
        double gamma = 2.0 * pw.beta + 2.0 * m + (N - 2);
        double q = gamma + 1.0;
        if (!(q > 0)) throw std::domain_error("angular integrand not integrable at r = s");
        double sum = 0;
        for (std::size_t k = 0; k < g.x.size(); ++k) {
            double t = g.x[k];
            double th = b1 * std::pow(t, 1.0 / q);
            sum += g.w[k] * integrand(th) * b1 / q * std::pow(t, 1.0 / q - 1.0);
        }
        total += sum;
    } else {
        b1 = std::min(theta_c, pi);
        total += panel(0.0, b1);
    }
    for (double a = b1; a < pi;) {
        double b = std::min(2.0 * a, pi);
        if (pi - b < 1e-3 * (b - a)) b = pi;
        total += panel(a, b);
        a = b;
    }
    return total * sphere_area(N - 1) / sphere_area(N);
}

}  // namespace

double angular_average(double r, double s, int N, double beta, int m, int points) {
    if (N < 2) throw std::invalid_argument("angular average needs N ≥ 2");
    if (m != 0 && m != 1) throw std::invalid_argument("angular average supports m ∈ {0, 1}");
    return average_impl(r, s, N, Power(beta), m, points);
}

RieszKernel::RieszKernel(const RadialGrid& grid, double alpha, KernelOptions opts, std::vector<double> core)
    : grid_(std::make_shared<RadialGrid>(grid)), alpha_(alpha), opts_(opts), core_(std::move(core)) {
    if (core_.size() != grid.r.size() * grid.r.size()) throw std::invalid_argument("kernel size mismatch");
}

RealField RieszKernel::apply(const RealField& f) const {
    const std::size_t n = size();
    if (f.size() != n) throw std::invalid_argument("field size does not match kernel");
    RealField wf(n), out(n);
    for (std::size_t j = 0; j < n; ++j) wf[j] = grid_->w[j] * f[j];
    cblas_dsymv(CblasRowMajor, CblasUpper, static_cast<int>(n), 1.0, core_.data(), static_cast<int>(n), wf.data(), 1,
                0.0, out.data(), 1);
    return out;
}

namespace {

constexpr char kMagic[8] = {'H', 'R', 'Z', 'K', 'E', 'R', 'N', '1'};
constexpr std::uint32_t kVersion = 1;

struct Header {
    char magic[8];
    std::uint32_t version;
    std::int32_t N;
    double alpha;
    std::int64_t M;
    double r_max;
    std::int32_t grading;
    std::int32_t angular_points;
    double stretch;
    std::int32_t near_factor;
    std::int32_t near_band;
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

Header make_header(const RadialGrid& grid, double alpha, const KernelOptions& opts) {
    Header h;
    std::memset(&h, 0, sizeof h);
    std::memcpy(h.magic, kMagic, sizeof kMagic);
    h.version = kVersion;
    h.N = grid.N();
    h.alpha = alpha;
    h.M = grid.M();
    h.r_max = grid.r_max();
    h.grading = static_cast<std::int32_t>(grid.spec.grading);
    h.stretch = grid.spec.grading == Grading::geometric ? grid.spec.stretch : 0.0;
    h.angular_points = opts.angular_points;
    h.near_factor = opts.near_factor;
    h.near_band = opts.near_band;
    return h;
}

}  // namespace

void RieszKernel::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write kernel cache " + path);
    Header h = make_header(*grid_, alpha_, opts_);
    os.write(reinterpret_cast<const char*>(&h), sizeof h);
    const std::size_t n = size();
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) row[j] = core_[i * n + j];
        os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(n * sizeof(double)));
    }
    if (!os) throw std::runtime_error("failed writing kernel cache " + path);
}

RieszKernel RieszKernel::load(const std::string& path, const RadialGrid& grid, double alpha, KernelOptions opts) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read kernel cache " + path);
    Header h;
    std::memset(&h, 0, sizeof h);
    is.read(reinterpret_cast<char*>(&h), sizeof h);
    Header want = make_header(grid, alpha, opts);
    if (!is || std::memcmp(&h, &want, sizeof h) != 0) throw std::runtime_error("kernel cache header mismatch: " + path);
    const std::size_t n = grid.r.size();
    std::vector<double> core(n * n);
    is.read(reinterpret_cast<char*>(core.data()), static_cast<std::streamsize>(core.size() * sizeof(double)));
    if (!is) throw std::runtime_error("truncated kernel cache " + path);
    return RieszKernel(grid, alpha, opts, std::move(core));
}

RieszKernel build_kernel(const RadialGrid& grid, double alpha, KernelOptions opts) {
    const int N = grid.N();
    if (!(alpha > 1.0)) throw DomainError("kernel needs α > 1: the angular integrand behaves like θ^{α−2} at r = s");
    if (!(alpha < N)) throw DomainError("kernel needs α < N");
    if (opts.angular_points < 2) throw std::invalid_argument("angular_points must be ≥ 2");
    const double c = riesz_constant(N, alpha);
    const Power pw(0.5 * (alpha - N));
    const std::size_t n = grid.r.size();
    std::vector<double> core(n * n);
    unsigned nt = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = std::min<unsigned>(nt, static_cast<unsigned>(n));
    auto work = [&](unsigned tid) {
        for (std::size_t i = tid; i < n; i += nt) {
            for (std::size_t j = i; j < n; ++j) {
                bool near = j - i <= static_cast<std::size_t>(opts.near_band);
                int pts = near ? opts.angular_points * opts.near_factor : opts.angular_points;
                double v = c * average_impl(grid.r[i], grid.r[j], N, pw, 0, pts);
                core[i * n + j] = v;
                core[j * n + i] = v;
            }
        }
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    return RieszKernel(grid, alpha, opts, std::move(core));
}

std::string kernel_cache_name(const RadialGrid& grid, double alpha, const KernelOptions& opts) {
    std::ostringstream key;
    key << std::setprecision(17) << "N=" << grid.N() << ";alpha=" << alpha << ";M=" << grid.M()
        << ";rmax=" << grid.r_max() << ";grading=" << grid.grading_tag() << ";Q=" << opts.angular_points
        << ";near=" << opts.near_factor << "x" << opts.near_band << ";v=" << kVersion;
    std::ostringstream name;
    name << "riesz_" << std::hex << std::setw(16) << std::setfill('0') << fnv1a(key.str()) << ".bin";
    return name.str();
}

RieszKernel load_or_build_kernel(const RadialGrid& grid, double alpha, const KernelOptions& opts,
                                 const std::string& cache_dir) {
    if (cache_dir.empty()) return build_kernel(grid, alpha, opts);
    namespace fs = std::filesystem;
    fs::path path = fs::path(cache_dir) / kernel_cache_name(grid, alpha, opts);
    if (fs::exists(path)) {
        try {
            return RieszKernel::load(path.string(), grid, alpha, opts);
        } catch (const std::runtime_error&) {
            // Stale or foreign file: rebuild below and overwrite.
        }
    }
    RieszKernel k = build_kernel(grid, alpha, opts);
    fs::create_directories(cache_dir);
    fs::path tmp = path;
    tmp += ".tmp";
    k.save(tmp.string());
    fs::rename(tmp, path);
    return k;
}

RealField hartree_potential(const RieszKernel& kernel, const Field& u, double p) {
    if (u.size() != kernel.size()) throw std::invalid_argument("field size does not match kernel");
    RealField f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        f[i] = std::pow(std::abs(u[i]), p);
        if (!std::isfinite(f[i])) throw std::runtime_error("non-finite |u|^p in Hartree potential");
    }
    return kernel.apply(f);
}

double hartree_energy(const RieszKernel& kernel, const Field& u, double p) {
    RealField V = hartree_potential(kernel, u, p);
    const RadialGrid& g = kernel.grid();
    double s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) s += g.w[i] * V[i] * std::pow(std::abs(u[i]), p);
    return s;
}

double gaussian_hartree_energy(int N, double alpha, double p) {
    // ∫∫ f(x−y)e^{−p|x|²−p|y|²} = (π/2p)^{N/2} ∫ f(z)e^{−p|z|²/2} dz.
    const double radial = 0.5 * std::tgamma(0.5 * alpha) * std::pow(2.0 / p, 0.5 * alpha);
    return riesz_constant(N, alpha) * std::pow(std::numbers::pi / (2 * p), 0.5 * N) * sphere_area(N) * radial;
}

}  // namespace hartree

#pragma once

// Radial Riesz potential I_α∗f as a dense matrix.
//
// For radial f, (I_α∗f)(r) = c_{N,α} ∫ k̄(r,s) f(s) dμ(s), where k̄ is the
// average of |x−y|^{α−N} over the sphere |y| = s. The angular average is
// computed by Gauss–Legendre panels that double in width away from the
// near-singular angle θ_c = |r−s|/√(rs).

#include "hartree/radial_domain.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hartree {

struct KernelOptions {
    int angular_points = 16;   ///< Gauss–Legendre points per panel
    int near_factor = 4;       ///< oversampling for |i−j| ≤ near_band
    int near_band = 2;
    unsigned threads = 0;      ///< 0: hardware concurrency
};

/// Sphere average of D^β·(1−cosθ)^m over the angle between x and y, |x|=r, |y|=s,
/// D = |x−y|². m ∈ {0, 1}. Requires the integrand at r = s to be integrable.
double angular_average(double r, double s, int N, double beta, int m, int points);

class RieszKernel {
public:
    RieszKernel(const RadialGrid& grid, double alpha, KernelOptions opts, std::vector<double> core);

    const RadialGrid& grid() const { return *grid_; }
    double alpha() const { return alpha_; }
    const KernelOptions& options() const { return opts_; }
    std::size_t size() const { return grid_->r.size(); }

    /// K_ij = c k̄(r_i, r_j) w_j.
    double entry(std::size_t i, std::size_t j) const { return core_[i * size() + j] * grid_->w[j]; }
    /// Symmetric part c k̄(r_i, r_j).
    double core(std::size_t i, std::size_t j) const { return core_[i * size() + j]; }

    RealField apply(const RealField& f) const;

    void save(const std::string& path) const;
    static RieszKernel load(const std::string& path, const RadialGrid& grid, double alpha, KernelOptions opts);

private:
    std::shared_ptr<const RadialGrid> grid_;
    double alpha_;
    KernelOptions opts_;
    std::vector<double> core_;  // row-major, symmetric
};

/// Rejects α ≤ 1.
RieszKernel build_kernel(const RadialGrid& grid, double alpha, KernelOptions opts = {});

/// Content hash of every parameter that changes the kernel.
std::string kernel_cache_name(const RadialGrid& grid, double alpha, const KernelOptions& opts);

/// Loads from `cache_dir` when a matching file exists, otherwise builds and stores it.
/// An empty directory disables caching.
RieszKernel load_or_build_kernel(const RadialGrid& grid, double alpha, const KernelOptions& opts,
                                 const std::string& cache_dir);

/// V = I_α∗|u|^p.
RealField hartree_potential(const RieszKernel& kernel, const Field& u, double p);

/// ∫ (I_α∗|u|^p)|u|^p.
double hartree_energy(const RieszKernel& kernel, const Field& u, double p);

/// Closed form of ∫(I_α∗|u|^p)|u|^p for u = e^{−r²} in ℝ^N.
double gaussian_hartree_energy(int N, double alpha, double p);

}  // namespace hartree

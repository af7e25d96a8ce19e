#pragma once

// Eigendecomposition of the discrete radial Laplacian.
//
// L is self-adjoint for ⟨u,v⟩_W = Σ w_i u_i v_i, so T = W^{1/2} L W^{−1/2} is
// symmetric tridiagonal with T = Q Λ Qᵀ. A field u has coefficients
// c = Qᵀ W^{1/2} u; in these coordinates ‖u‖² = Σ|c_k|², Δu ↔ λ_k c_k and
// Δ²u ↔ λ_k² c_k.

#include "hartree/radial_domain.hpp"

#include <memory>
#include <vector>

namespace hartree {

class SpectralBasis {
public:
    explicit SpectralBasis(const RadialGrid& grid);

    const RadialGrid& grid() const { return *grid_; }
    std::size_t size() const { return lambda_.size(); }
    /// Eigenvalues of L (non-positive), ascending.
    const std::vector<double>& lambda() const { return lambda_; }

    Field forward(const Field& u) const;
    Field backward(const Field& c) const;
    RealField forward(const RealField& u) const;
    RealField backward(const RealField& c) const;

    /// Applies W^{−1/2} Q diag(m) Qᵀ W^{1/2} for a real multiplier m_k = f(λ_k).
    Field apply_multiplier(const Field& u, const std::vector<Complex>& m) const;

private:
    void transform(const double* in, double* out, int ncol, bool transpose) const;

    std::shared_ptr<const RadialGrid> grid_;
    std::vector<double> lambda_;
    std::vector<double> q_;       // column-major M×M
    std::vector<double> sqrt_w_;
};

}  // namespace hartree

#include "hartree/spectral.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <cmath>
#include <stdexcept>

namespace hartree {

SpectralBasis::SpectralBasis(const RadialGrid& grid) : grid_(std::make_shared<RadialGrid>(grid)) {
    const OperatorSet ops = build_operators(*grid_);
    const int n = grid_->M();
    sqrt_w_.resize(n);
    for (int i = 0; i < n; ++i) sqrt_w_[i] = std::sqrt(grid_->w[i]);
    std::vector<double> d(ops.lap.diag), e(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) e[i] = ops.lap.upper[i] * sqrt_w_[i] / sqrt_w_[i + 1];
    lambda_.assign(n, 0.0);
    q_.assign(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<lapack_int> isuppz(2 * n);
    lapack_int found = 0;
    lapack_logical tryrac = 1;
    lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0, 0, 0, 0, &found,
                                     lambda_.data(), q_.data(), n, n, isuppz.data(), &tryrac);
    if (info != 0 || found != n) {
        // MRRR may refuse; divide and conquer is slower but robust.
        d = ops.lap.diag;
        for (int i = 0; i + 1 < n; ++i) e[i] = ops.lap.upper[i] * sqrt_w_[i] / sqrt_w_[i + 1];
        info = LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', n, d.data(), e.data(), q_.data(), n);
        if (info != 0) throw std::runtime_error("tridiagonal eigensolver failed, info = " + std::to_string(info));
        lambda_ = d;
    }
}

void SpectralBasis::transform(const double* in, double* out, int ncol, bool transpose) const {
    const int n = static_cast<int>(lambda_.size());
    if (ncol == 1) {
        cblas_dgemv(CblasColMajor, transpose ? CblasTrans : CblasNoTrans, n, n, 1.0, q_.data(), n, in, 1, 0.0, out, 1);
    } else {
        cblas_dgemm(CblasColMajor, transpose ? CblasTrans : CblasNoTrans, CblasNoTrans, n, ncol, n, 1.0, q_.data(), n,
                    in, n, 0.0, out, n);
    }
}

Field SpectralBasis::forward(const Field& u) const {
    const std::size_t n = size();
    if (u.size() != n) throw std::invalid_argument("field size does not match basis");
    std::vector<double> in(2 * n), out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        in[i] = sqrt_w_[i] * u[i].real();
        in[n + i] = sqrt_w_[i] * u[i].imag();
    }
    transform(in.data(), out.data(), 2, true);
    Field c(n);
    for (std::size_t k = 0; k < n; ++k) c[k] = Complex(out[k], out[n + k]);
    return c;
}

Field SpectralBasis::backward(const Field& c) const {
    const std::size_t n = size();
    if (c.size() != n) throw std::invalid_argument("coefficient size does not match basis");
    std::vector<double> in(2 * n), out(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        in[k] = c[k].real();
        in[n + k] = c[k].imag();
    }
    transform(in.data(), out.data(), 2, false);
    Field u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = Complex(out[i], out[n + i]) / sqrt_w_[i];
    return u;
}

RealField SpectralBasis::forward(const RealField& u) const {
    const std::size_t n = size();
    if (u.size() != n) throw std::invalid_argument("field size does not match basis");
    RealField in(n), out(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = sqrt_w_[i] * u[i];
    transform(in.data(), out.data(), 1, true);
    return out;
}

RealField SpectralBasis::backward(const RealField& c) const {
    const std::size_t n = size();
    if (c.size() != n) throw std::invalid_argument("coefficient size does not match basis");
    RealField out(n);
    transform(c.data(), out.data(), 1, false);
    for (std::size_t i = 0; i < n; ++i) out[i] /= sqrt_w_[i];
    return out;
}

Field SpectralBasis::apply_multiplier(const Field& u, const std::vector<Complex>& m) const {
    if (m.size() != size()) throw std::invalid_argument("multiplier size does not match basis");
    Field c = forward(u);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= m[k];
    return backward(c);
}

}  // namespace hartree

#pragma once
// Shared fixtures for the unit tests and the acceptance runner.

#include "hartree/radial_domain.hpp"

#include <cmath>
#include <random>

namespace hartree::testing {

/// Smooth, rapidly decaying radial field (c₀ + c₁r² + c₂r⁴)e^{−βr²}·e^{iκr²} with random coefficients.
inline Field random_smooth_field(const RadialGrid& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double c0 = 0.2 + 2 * U(rng), c1 = 2 * U(rng) - 1, c2 = 0.5 * U(rng);
    const double beta = 0.4 + 1.6 * U(rng), kappa = 0.5 * (U(rng) - 0.5);
    return sample_complex(grid, [=](double r) {
        double r2 = r * r;
        return std::polar((c0 + c1 * r2 + c2 * r2 * r2) * std::exp(-beta * r2), kappa * r2);
    });
}

inline Field gaussian_field(const RadialGrid& grid, double amplitude = 1.0, double width = 1.0) {
    return sample_complex(grid, [=](double r) { return Complex(amplitude * std::exp(-r * r / (width * width)), 0.0); });
}

}  // namespace hartree::testing

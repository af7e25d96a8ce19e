#pragma once

// Exponent bookkeeping for i u_t + Δ²u + ε(I_α∗|u|^p)|u|^{p−2}u = 0.
// Nothing here touches a grid.

#include <boost/rational.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hartree {

/// Thrown when parameters fall outside the supported region.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Real number that stays an exact rational as long as every operand was one.
 * Infinity is carried explicitly (needed for p^* when N ≤ 4 and q = ∞).
 */
class Number {
public:
    using Rational = boost::rational<long long>;

    Number() : Number(Rational(0)) {}
    Number(int v) : Number(Rational(v)) {}
    Number(Rational q);
    /// Recovers a rational when `v` is exactly the double nearest some p/q, q ≤ 10^6.
    Number(double v);

    static Number infinity();
    /// Accepts "2.5", "5/2", "inf", "1e-3".
    static Number parse(std::string_view text);

    double value() const { return value_; }
    bool is_exact() const { return exact_.has_value(); }
    bool is_infinite() const { return infinite_; }
    const std::optional<Rational>& exact() const { return exact_; }
    std::string str() const;

    friend Number operator+(const Number& a, const Number& b);
    friend Number operator-(const Number& a, const Number& b);
    friend Number operator*(const Number& a, const Number& b);
    friend Number operator/(const Number& a, const Number& b);
    Number operator-() const;

    friend bool operator==(const Number& a, const Number& b);
    friend bool operator<(const Number& a, const Number& b);
    friend bool operator<=(const Number& a, const Number& b) { return a < b || a == b; }
    friend bool operator>(const Number& a, const Number& b) { return b < a; }
    friend bool operator>=(const Number& a, const Number& b) { return b <= a; }

private:
    Number(double v, std::optional<Rational> q, bool inf) : value_(v), exact_(q), infinite_(inf) {}
    double value_ = 0.0;
    std::optional<Rational> exact_;
    bool infinite_ = false;
};

struct ModelParams {
    int N = 5;
    Number alpha = 2;
    Number p = 3;
    int epsilon = 1;           ///< +1 defocusing, −1 focusing
    bool allow_p_below_2 = false;  ///< expert override: accept p_* < p < 2
};

struct DerivedExponents {
    Number s_c;
    Number p_star;   ///< mass-critical power
    Number p_upper;  ///< energy-critical power, infinite for N ≤ 4
    Number B;
    Number A;
    Number a_strichartz;
    Number r_strichartz;
    bool mass_supercritical = false;   ///< p > p_*
    bool energy_subcritical = false;   ///< p < p^*
    bool intercritical = false;
    bool sctr2_dim_ok = false;         ///< (24+α)/5 < N
};

struct AdmissiblePair {
    Number q;
    Number r;
};

struct StrichartzPairs {
    AdmissiblePair qr;   ///< (4p/B, 2Np/(α+N))
    AdmissiblePair qr1;  ///< (4p/((N−2)p−(α+N)), 2Np/(2(α+N)−p(N−4)))
    Number a;
    Number m;            ///< 1/a + 1/m = 2/q
};

struct AbsorptionResult {
    double x_star = 0;
    double a_max = 0;
    double bound = 0;
    bool applicable = false;
};

/// Throws DomainError naming the first violated inequality.
void validate(const ModelParams& params);

DerivedExponents derive_exponents(const ModelParams& params);

/// c_{N,α} = Γ((N−α)/2) / (Γ(α/2) π^{N/2} 2^α).
double riesz_constant(int N, double alpha);

/// |S^{N−1}| = 2π^{N/2}/Γ(N/2).
double sphere_area(int N);

bool admissible(const Number& q, const Number& r, int N);

StrichartzPairs strichartz_pairs(const ModelParams& params);

/// For X ≤ a + bX^θ: reports the smallness condition and resulting bound.
AbsorptionResult absorption_threshold(double a, double b, double theta);

/// Table of every derived quantity, keyed by name, values in str() form.
std::map<std::string, std::string> exponent_table(const ModelParams& params);

}  // namespace hartree

#include "hartree/model.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hartree {

namespace {

using Rational = Number::Rational;

double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

// Best rational approximation with bounded denominator (continued fractions).
std::optional<Rational> recover_rational(double v) {
    if (!std::isfinite(v) || std::abs(v) > 1e12) return std::nullopt;
    constexpr long long max_den = 1000000;
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double x = v;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(x);
        long long a = static_cast<long long>(fl);
        long long h2 = a * h1 + h0;
        long long k2 = a * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        if (static_cast<double>(h1) / static_cast<double>(k1) == v) return Rational(h1, k1);
        double frac = x - fl;
        if (frac == 0.0) break;
        x = 1.0 / frac;
    }
    return std::nullopt;
}

bool both_exact(const Number& a, const Number& b) {
    return a.is_exact() && b.is_exact();
}

}  // namespace

Number::Number(Rational q) : value_(to_double(q)), exact_(q), infinite_(false) {}

Number::Number(double v) : value_(v), exact_(recover_rational(v)), infinite_(std::isinf(v)) {}

Number Number::infinity() {
    return Number(std::numeric_limits<double>::infinity(), std::nullopt, true);
}

Number Number::parse(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text == "inf" || text == "infinity" || text == "∞") return infinity();
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        long long num = 0, den = 0;
        auto a = text.substr(0, slash), b = text.substr(slash + 1);
        auto r1 = std::from_chars(a.data(), a.data() + a.size(), num);
        auto r2 = std::from_chars(b.data(), b.data() + b.size(), den);
        if (r1.ec != std::errc() || r2.ec != std::errc() || r1.ptr != a.data() + a.size() ||
            r2.ptr != b.data() + b.size() || den == 0)
            throw DomainError("cannot parse rational '" + std::string(text) + "'");
        return Number(Rational(num, den));
    }
    // Plain decimals are exact: 2.2 means 11/5, not the nearest double.
    std::string s(text);
    bool decimal = !s.empty() && s.find_first_not_of("+-0123456789.") == std::string::npos &&
                   s.find('.') == s.rfind('.');
    if (decimal && s.find_first_of("0123456789") != std::string::npos) {
        std::size_t dot = s.find('.');
        std::string digits = s;
        long long den = 1;
        if (dot != std::string::npos) {
            std::size_t frac_len = s.size() - dot - 1;
            if (frac_len <= 12) {
                digits.erase(dot, 1);
                for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
            } else {
                digits.clear();
            }
        }
        long long num = 0;
        if (!digits.empty()) {
            auto res = std::from_chars(digits.data() + (digits[0] == '+'), digits.data() + digits.size(), num);
            if (res.ec == std::errc() && res.ptr == digits.data() + digits.size()) return Number(Rational(num, den));
        }
    }
    double v = 0;
    try {
        std::size_t pos = 0;
        v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw DomainError("cannot parse number '" + s + "'");
    }
    return Number(v);
}

std::string Number::str() const {
    if (infinite_) return value_ > 0 ? "inf" : "-inf";
    std::ostringstream os;
    if (exact_) {
        os << exact_->numerator();
        if (exact_->denominator() != 1) os << '/' << exact_->denominator();
    } else {
        os.precision(17);
        os << value_;
    }
    return os.str();
}

Number operator+(const Number& a, const Number& b) {
    if (a.infinite_ || b.infinite_) return Number(a.value_ + b.value_);
    if (both_exact(a, b)) return Number(*a.exact_ + *b.exact_);
    return Number(a.value_ + b.value_, std::nullopt, false);
}

Number operator-(const Number& a, const Number& b) { return a + (-b); }

Number Number::operator-() const {
    if (exact_) return Number(-*exact_);
    return Number(-value_, std::nullopt, infinite_);
}

Number operator*(const Number& a, const Number& b) {
    if (a.infinite_ || b.infinite_) return Number(a.value_ * b.value_);
    if (both_exact(a, b)) return Number(*a.exact_ * *b.exact_);
    return Number(a.value_ * b.value_, std::nullopt, false);
}

Number operator/(const Number& a, const Number& b) {
    if (b.infinite_ && !a.infinite_) return Number(0);
    if (a.infinite_) return Number(a.value_ / b.value_);
    if (b.value_ == 0.0) throw DomainError("division by zero in exponent arithmetic");
    if (both_exact(a, b)) return Number(*a.exact_ / *b.exact_);
    return Number(a.value_ / b.value_, std::nullopt, false);
}

bool operator==(const Number& a, const Number& b) {
    if (a.infinite_ || b.infinite_) return a.value_ == b.value_;
    if (both_exact(a, b)) return *a.exact_ == *b.exact_;
    return a.value_ == b.value_;
}

bool operator<(const Number& a, const Number& b) {
    if (a.infinite_ || b.infinite_) return a.value_ < b.value_;
    if (both_exact(a, b)) return *a.exact_ < *b.exact_;
    return a.value_ < b.value_;
}

namespace {

Number p_star_of(int N, const Number& alpha) { return Number(1) + (alpha + Number(4)) / Number(N); }

Number p_upper_of(int N, const Number& alpha) {
    if (N <= 4) return Number::infinity();
    return Number(1) + (Number(4) + alpha) / Number(N - 4);
}

}  // namespace

void validate(const ModelParams& prm) {
    if (prm.N < 1) throw DomainError("N ≥ 1 violated");
    if (!(prm.alpha > Number(0))) throw DomainError("0 < α violated");
    if (!(prm.alpha < Number(prm.N))) throw DomainError("α < N violated");
    if (!(Number(prm.N) < Number(8) + prm.alpha)) throw DomainError("N < 8 + α violated");
    if (prm.epsilon != 1 && prm.epsilon != -1) throw DomainError("ε ∈ {+1, −1} violated");
    Number ps = p_star_of(prm.N, prm.alpha);
    Number pu = p_upper_of(prm.N, prm.alpha);
    if (!(prm.p < pu)) throw DomainError("p < p^* = " + pu.str() + " violated");
    if (prm.allow_p_below_2) {
        if (prm.p < Number(2) && !(prm.p > ps)) throw DomainError("p > p_* = " + ps.str() + " violated");
    } else if (prm.p < Number(2)) {
        throw DomainError("p ≥ 2 violated (set the expert override to go down to p_*)");
    }
}

DerivedExponents derive_exponents(const ModelParams& prm) {
    validate(prm);
    const Number N(prm.N), a = prm.alpha, p = prm.p;
    DerivedExponents d;
    d.p_star = p_star_of(prm.N, a);
    d.p_upper = p_upper_of(prm.N, a);
    d.s_c = N / Number(2) - (Number(4) + a) / (Number(2) * (p - Number(1)));
    d.B = (N * p - N - a) / Number(2);
    d.A = Number(2) * p - d.B;
    Number den = Number(2) * p - d.B;
    if (den == Number(0)) throw DomainError("2p = B: Strichartz exponent a undefined");
    d.a_strichartz = Number(4) * p * (p - Number(1)) / den;
    d.r_strichartz = Number(2) * N * p / (a + N);
    d.mass_supercritical = p > d.p_star;
    d.energy_subcritical = p < d.p_upper;
    d.intercritical = d.mass_supercritical && d.energy_subcritical;
    d.sctr2_dim_ok = (Number(24) + a) / Number(5) < N;
    return d;
}

double riesz_constant(int N, double alpha) {
    if (!(alpha > 0 && alpha < N)) throw DomainError("0 < α < N violated");
    using boost::math::tgamma;
    return tgamma(0.5 * (N - alpha)) / (tgamma(0.5 * alpha) * std::pow(std::numbers::pi, 0.5 * N) * std::pow(2.0, alpha));
}

double sphere_area(int N) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / boost::math::tgamma(0.5 * N);
}

bool admissible(const Number& q, const Number& r, int N) {
    if (r < Number(2)) return false;
    if (N > 4 && !(r < Number(2 * N) / Number(N - 4))) return false;
    if (r.is_infinite()) return false;
    Number lhs = Number(N) * (Number(1) / Number(2) - Number(1) / r);
    Number rhs = q.is_infinite() ? Number(0) : Number(4) / q;
    if (lhs.is_exact() && rhs.is_exact()) return lhs == rhs;
    return std::abs(lhs.value() - rhs.value()) <= 1e-12 * std::max(1.0, std::abs(rhs.value()));
}

StrichartzPairs strichartz_pairs(const ModelParams& prm) {
    DerivedExponents d = derive_exponents(prm);
    if (!d.intercritical) throw DomainError("Strichartz pairs need p_* < p < p^*");
    const Number N(prm.N), a = prm.alpha, p = prm.p;
    StrichartzPairs s;
    auto require_positive = [](const Number& x, const char* what) {
        if (!(x > Number(0))) throw DomainError(std::string("degenerate denominator in ") + what);
    };
    require_positive(d.B, "q = 4p/B");
    s.qr = {Number(4) * p / d.B, d.r_strichartz};
    Number dq1 = (N - Number(2)) * p - (a + N);
    Number dr1 = Number(2) * (a + N) - p * (N - Number(4));
    require_positive(dq1, "q₁");
    require_positive(dr1, "r₁");
    s.qr1 = {Number(4) * p / dq1, Number(2) * N * p / dr1};
    s.a = d.a_strichartz;
    Number inv_m = Number(2) / s.qr.q - Number(1) / s.a;
    require_positive(inv_m, "m");
    s.m = Number(1) / inv_m;
    if (!admissible(s.qr.q, s.qr.r, prm.N)) throw DomainError("(q, r) failed admissibility");
    if (!admissible(s.qr1.q, s.qr1.r, prm.N)) throw DomainError("(q₁, r₁) failed admissibility");
    return s;
}

AbsorptionResult absorption_threshold(double a, double b, double theta) {
    if (!(theta > 1)) throw DomainError("θ > 1 violated");
    if (!(a > 0 && b > 0)) throw DomainError("a, b > 0 violated");
    AbsorptionResult res;
    res.x_star = std::pow(theta * b, 1.0 / (1.0 - theta));
    res.a_max = (1.0 - 1.0 / theta) * res.x_star;
    res.bound = theta * a / (theta - 1.0);
    res.applicable = a < res.a_max;
    return res;
}

std::map<std::string, std::string> exponent_table(const ModelParams& prm) {
    DerivedExponents d = derive_exponents(prm);
    std::map<std::string, std::string> t;
    t["N"] = std::to_string(prm.N);
    t["alpha"] = prm.alpha.str();
    t["p"] = prm.p.str();
    t["s_c"] = d.s_c.str();
    t["p_star"] = d.p_star.str();
    t["p_upper"] = d.p_upper.str();
    t["B"] = d.B.str();
    t["A"] = d.A.str();
    t["a"] = d.a_strichartz.str();
    t["r"] = d.r_strichartz.str();
    t["mass_supercritical"] = d.mass_supercritical ? "true" : "false";
    t["energy_subcritical"] = d.energy_subcritical ? "true" : "false";
    t["sctr2_dim_ok"] = d.sctr2_dim_ok ? "true" : "false";
    if (d.intercritical) {
        StrichartzPairs s = strichartz_pairs(prm);
        t["q"] = s.qr.q.str();
        t["q1"] = s.qr1.q.str();
        t["r1"] = s.qr1.r.str();
        t["m"] = s.m.str();
    }
    return t;
}

}  // namespace hartree

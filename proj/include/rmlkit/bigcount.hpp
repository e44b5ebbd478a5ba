#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace rmlkit {

/// Exact signed integer; all counts and Whitney numbers use it.
using BigInt = boost::multiprecision::cpp_int;
/// Nonnegative exact count (same representation, separate name for intent).
using BigCount = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt ipow(const BigInt& base, unsigned e) {
    BigInt r = 1;
    BigInt b = base;
    while (e != 0) {
        if (e & 1U) r *= b;
        e >>= 1U;
        if (e != 0) b *= b;
    }
    return r;
}

/// C(n, 2) as used in q-exponents; zero for n < 2.
constexpr long long choose2(long long n) { return n < 2 ? 0 : n * (n - 1) / 2; }

/// Gaussian binomial [n choose k]_Q. Zero outside 0 <= k <= n.
inline BigCount gaussian_binomial(long long n, long long k, const BigInt& Q) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (Q < 2) throw InvalidParameter("gaussian_binomial: base must be at least 2");
    BigInt num = 1;
    BigInt den = 1;
    for (long long i = 0; i < k; ++i) {
        num *= ipow(Q, static_cast<unsigned>(n - i)) - 1;
        den *= ipow(Q, static_cast<unsigned>(i + 1)) - 1;
    }
    return num / den;
}

/// |GL_n(Q)| = prod_{j<n} (Q^n - Q^j).
inline BigCount gl_order(unsigned n, const BigInt& Q) {
    BigInt r = 1;
    const BigInt top = ipow(Q, n);
    for (unsigned j = 0; j < n; ++j) r *= top - ipow(Q, j);
    return r;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t result = n;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

constexpr bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Splits q = p^h; empty if q is not a prime power.
inline std::optional<std::pair<unsigned, unsigned>> prime_power(std::uint64_t q) {
    if (q < 2) return std::nullopt;
    std::uint64_t p = 2;
    while (q % p != 0) ++p;
    unsigned h = 0;
    while (q % p == 0) {
        q /= p;
        ++h;
    }
    if (q != 1) return std::nullopt;
    return std::make_pair(static_cast<unsigned>(p), h);
}

inline std::string to_string(const BigInt& v) { return v.str(); }

/// Decimal rendering with the given number of significant digits.
inline std::string to_decimal(const Rational& r, int significant = 12) {
    using Dec = boost::multiprecision::cpp_dec_float_50;
    Dec num(boost::multiprecision::numerator(r));
    Dec den(boost::multiprecision::denominator(r));
    Dec v = num / den;
    return v.str(significant, std::ios_base::fmtflags(0));
}

/// "a/b", or "a" when b = 1.
inline std::string to_fraction(const Rational& r) {
    if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

/// Dense univariate polynomial over Z, coefficient i multiplies q^i.
/// Only what the symbolic degree checks need.
class IntPoly {
   public:
    IntPoly() = default;
    explicit IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }
    static IntPoly constant(const BigInt& c) { return IntPoly({c}); }
    /// c * q^e
    static IntPoly monomial(const BigInt& c, unsigned e) {
        std::vector<BigInt> v(e + 1, 0);
        v[e] = c;
        return IntPoly(std::move(v));
    }
    /// q^a - q^b
    static IntPoly binomial_diff(unsigned a, unsigned b) { return monomial(1, a) - monomial(1, b); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const BigInt& leading() const { return c_.back(); }
    const std::vector<BigInt>& coeffs() const { return c_; }

    BigInt evaluate(const BigInt& x) const {
        BigInt r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        std::vector<BigInt> v(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
        return IntPoly(std::move(v));
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
        std::vector<BigInt> v(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] -= b.c_[i];
        return IntPoly(std::move(v));
    }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<BigInt> v(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        return IntPoly(std::move(v));
    }

    /// Exact division; throws if the divisor does not divide or leading terms are not integral.
    IntPoly divide_exact(const IntPoly& d) const {
        if (d.is_zero()) throw InvalidParameter("IntPoly: division by zero polynomial");
        std::vector<BigInt> rem = c_;
        if (degree() < d.degree()) {
            if (is_zero()) return {};
            throw InvalidParameter("IntPoly: inexact division");
        }
        std::vector<BigInt> quo(c_.size() - d.c_.size() + 1, 0);
        for (int i = static_cast<int>(quo.size()) - 1; i >= 0; --i) {
            const BigInt& top = rem[i + d.c_.size() - 1];
            if (top % d.leading() != 0) throw InvalidParameter("IntPoly: inexact division");
            BigInt f = top / d.leading();
            quo[i] = f;
            for (std::size_t j = 0; j < d.c_.size(); ++j) rem[i + j] -= f * d.c_[j];
        }
        for (const auto& r : rem)
            if (r != 0) throw InvalidParameter("IntPoly: inexact division");
        return IntPoly(std::move(quo));
    }

   private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<BigInt> c_;
};

}  // namespace rmlkit

#pragma once

/**
 * @file field.hpp
 * @brief Finite fields F_{p^d} and the relative tower F_q < F_{q^m}.
 *
 * Elements are integer codes: the polynomial-basis digits over F_p packed base p,
 * so code = sum_i d_i p^i with every d_i < p. The zero element has code 0 and the
 * one element has code 1.
 *
 * Each field uses the monic irreducible modulus whose lower coefficients, read as a
 * base-p integer, are smallest. Fields of order at most 2^16 multiply through
 * log/antilog tables; larger ones (up to the 2^20 envelope) use schoolbook
 * multiplication with reduction.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bigcount.hpp"
#include "error.hpp"
#include "json.hpp"

namespace rmlkit {

using Code = std::uint32_t;

/// Largest field order accepted anywhere in the library.
inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kTableFieldOrder = std::uint64_t{1} << 16;
inline constexpr unsigned kMaxDegree = 20;

namespace detail {

using PolyFp = std::vector<unsigned>;  // coefficients low -> high

inline void poly_trim(PolyFp& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

/// Remainder of f modulo monic g over F_p.
inline PolyFp poly_rem(PolyFp f, const PolyFp& g, unsigned p) {
    const std::size_t dg = g.size() - 1;
    poly_trim(f);
    while (f.size() > dg) {
        const unsigned c = f.back();
        const std::size_t shift = f.size() - 1 - dg;
        for (std::size_t j = 0; j <= dg; ++j) f[shift + j] = (f[shift + j] + (p - c) * g[j]) % p;
        poly_trim(f);
    }
    return f;
}

/// Trial division by every monic polynomial of degree 1 .. deg/2.
inline bool is_irreducible(const PolyFp& f, unsigned p) {
    const std::size_t d = f.size() - 1;
    if (d == 0 || f.back() != 1) return false;
    if (d == 1) return true;
    for (std::size_t dg = 1; dg <= d / 2; ++dg) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < dg; ++i) count *= p;
        PolyFp g(dg + 1, 0);
        g[dg] = 1;
        for (std::uint64_t c = 0; c < count; ++c) {
            std::uint64_t t = c;
            for (std::size_t i = 0; i < dg; ++i) {
                g[i] = static_cast<unsigned>(t % p);
                t /= p;
            }
            if (poly_rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

inline PolyFp lowest_irreducible(unsigned p, unsigned d) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    PolyFp f(d + 1, 0);
    f[d] = 1;
    for (std::uint64_t c = 0; c < count; ++c) {
        std::uint64_t t = c;
        for (unsigned i = 0; i < d; ++i) {
            f[i] = static_cast<unsigned>(t % p);
            t /= p;
        }
        if (is_irreducible(f, p)) return f;
    }
    throw InvalidParameter("no irreducible polynomial found");  // unreachable for d >= 1
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace detail

/// The finite field F_{p^d} = F_p[x]/(modulus).
class GaloisField {
   public:
    GaloisField(unsigned p, unsigned degree) : GaloisField(p, detail::lowest_irreducible(check_p(p), degree), 0) {}

    /// Explicit monic modulus, coefficients low -> high; must be irreducible.
    GaloisField(unsigned p, std::vector<unsigned> modulus) : GaloisField(check_p(p), std::move(modulus), 0) {}

    unsigned characteristic() const { return p_; }
    unsigned degree() const { return d_; }
    Code order() const { return order_; }
    const std::vector<unsigned>& modulus() const { return modulus_; }
    bool uses_tables() const { return !exp_.empty(); }

    Code add(Code a, Code b) const {
        if (p_ == 2) return a ^ b;
        if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * order_ + b];
        return add_digits(a, b);
    }
    Code neg(Code a) const {
        if (p_ == 2) return a;
        return neg_[a];
    }
    Code sub(Code a, Code b) const { return add(a, neg(b)); }

    Code mul(Code a, Code b) const {
        if (a == 0 || b == 0) return 0;
        if (!exp_.empty()) return exp_[log_[a] + log_[b]];
        return mul_schoolbook(a, b);
    }

    Code inv(Code a) const {
        if (a == 0) throw DivisionByZero();
        if (!exp_.empty()) return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
        return pow(a, order_ - 2);
    }
    Code div(Code a, Code b) const { return mul(a, inv(b)); }

    /// Square-and-multiply (or a single table lookup when logs are available).
    Code pow(Code a, std::uint64_t e) const {
        if (a == 0) return e == 0 ? 1 : 0;
        if (!exp_.empty()) {
            const std::uint64_t n1 = order_ - 1;
            return exp_[static_cast<std::size_t>((static_cast<std::uint64_t>(log_[a]) * (e % n1)) % n1)];
        }
        Code r = 1;
        Code b = a;
        while (e != 0) {
            if (e & 1U) r = mul_schoolbook(r, b);
            e >>= 1U;
            if (e != 0) b = mul_schoolbook(b, b);
        }
        return r;
    }

    /// Discrete log base the stored primitive element; requires tables and a != 0.
    std::uint32_t log(Code a) const { return log_[a]; }
    Code primitive_element() const { return primitive_; }

    /// The class of x modulo the modulus.
    Code x() const {
        if (d_ >= 2) return p_;
        return neg_or_self(modulus_[0] % p_);
    }

    std::vector<unsigned> digits(Code a) const {
        std::vector<unsigned> out(d_);
        for (unsigned i = 0; i < d_; ++i) {
            out[i] = a % p_;
            a /= p_;
        }
        return out;
    }
    Code from_digits(std::span<const unsigned> dg) const {
        Code r = 0;
        for (std::size_t i = dg.size(); i-- > 0;) r = r * p_ + (dg[i] % p_);
        return r;
    }
    /// Embeds a prime-field value.
    Code from_int(long long v) const {
        long long r = v % static_cast<long long>(p_);
        if (r < 0) r += p_;
        return static_cast<Code>(r);
    }

   private:
    static unsigned check_p(unsigned p) {
        if (!is_prime(p)) throw InvalidParameter("characteristic " + std::to_string(p) + " is not prime");
        return p;
    }

    GaloisField(unsigned p, std::vector<unsigned> modulus, int) : p_(p), modulus_(std::move(modulus)) {
        if (modulus_.size() < 2) throw InvalidParameter("modulus must have degree >= 1");
        d_ = static_cast<unsigned>(modulus_.size() - 1);
        if (d_ > kMaxDegree) throw InvalidParameter("field degree exceeds supported envelope");
        for (auto& c : modulus_) {
            if (c >= p_) throw InvalidParameter("modulus coefficient out of range");
        }
        std::uint64_t n = 1;
        for (unsigned i = 0; i < d_; ++i) n *= p_;
        if (n > kMaxFieldOrder)
            throw InvalidParameter("field order " + std::to_string(n) + " exceeds the supported envelope 2^20");
        if (!detail::is_irreducible(modulus_, p_)) throw InvalidParameter("modulus is not irreducible");
        order_ = static_cast<Code>(n);
        pw_.resize(d_ + 1);
        pw_[0] = 1;
        for (unsigned i = 1; i <= d_; ++i) pw_[i] = pw_[i - 1] * p_;

        if (p_ != 2) {
            neg_.resize(order_);
            for (Code a = 0; a < order_; ++a) {
                Code r = 0;
                Code t = a;
                for (unsigned i = 0; i < d_; ++i) {
                    r += ((p_ - t % p_) % p_) * pw_[i];
                    t /= p_;
                }
                neg_[a] = r;
            }
            if (order_ <= 1024) {
                add_table_.resize(static_cast<std::size_t>(order_) * order_);
                for (Code a = 0; a < order_; ++a)
                    for (Code b = 0; b < order_; ++b)
                        add_table_[static_cast<std::size_t>(a) * order_ + b] = add_digits(a, b);
            }
        }
        find_primitive();
        if (order_ <= kTableFieldOrder) build_tables();
    }

    Code neg_or_self(Code a) const { return p_ == 2 ? a : (a == 0 ? 0 : p_ - a); }

    Code add_digits(Code a, Code b) const {
        Code r = 0;
        for (unsigned i = 0; i < d_; ++i) {
            r += ((a % p_ + b % p_) % p_) * pw_[i];
            a /= p_;
            b /= p_;
        }
        return r;
    }

    Code mul_schoolbook(Code a, Code b) const {
        std::array<unsigned, 2 * kMaxDegree> prod{};
        std::array<unsigned, kMaxDegree> da{};
        std::array<unsigned, kMaxDegree> db{};
        for (unsigned i = 0; i < d_; ++i) {
            da[i] = a % p_;
            a /= p_;
            db[i] = b % p_;
            b /= p_;
        }
        for (unsigned i = 0; i < d_; ++i) {
            if (da[i] == 0) continue;
            for (unsigned j = 0; j < d_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        }
        for (unsigned k = 2 * d_ - 1; k-- > d_;) {
            const unsigned c = prod[k];
            if (c == 0) continue;
            for (unsigned j = 0; j <= d_; ++j)
                prod[k - d_ + j] = (prod[k - d_ + j] + (p_ - c) * modulus_[j]) % p_;
        }
        Code r = 0;
        for (unsigned i = d_; i-- > 0;) r = r * p_ + prod[i];
        return r;
    }

    Code pow_schoolbook(Code a, std::uint64_t e) const {
        Code r = 1;
        while (e != 0) {
            if (e & 1U) r = mul_schoolbook(r, a);
            e >>= 1U;
            if (e != 0) a = mul_schoolbook(a, a);
        }
        return r;
    }

    void find_primitive() {
        if (order_ == 2) {
            primitive_ = 1;
            return;
        }
        const auto factors = detail::prime_factors(order_ - 1);
        for (Code g = 2; g < order_; ++g) {
            bool ok = true;
            for (auto f : factors) {
                if (pow_schoolbook(g, (order_ - 1) / f) == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                primitive_ = g;
                return;
            }
        }
        throw InvalidParameter("no primitive element");  // unreachable for an irreducible modulus
    }

    void build_tables() {
        const std::size_t n1 = order_ - 1;
        exp_.assign(2 * n1 + 1, 0);
        log_.assign(order_, 0);
        Code v = 1;
        for (std::size_t i = 0; i < n1; ++i) {
            exp_[i] = v;
            exp_[i + n1] = v;
            log_[v] = static_cast<std::uint32_t>(i);
            v = mul_schoolbook(v, primitive_);
        }
        exp_[2 * n1] = 1;
    }

    unsigned p_ = 2;
    unsigned d_ = 1;
    Code order_ = 2;
    std::vector<unsigned> modulus_;
    std::vector<Code> pw_;
    Code primitive_ = 1;
    std::vector<Code> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<Code> neg_;
    std::vector<Code> add_table_;
};

/// Incremental row-echelon basis over a field; rows are normalized at their pivot.
class EchelonBasis {
   public:
    EchelonBasis(const GaloisField& field, std::size_t width) : f_(&field), width_(width) {}

    std::size_t dim() const { return pivots_.size(); }
    std::size_t width() const { return width_; }

    /// Reduces v in place against the basis; returns true if v became zero.
    bool reduce(std::span<Code> v) const {
        for (std::size_t r = 0; r < pivots_.size(); ++r) {
            const Code c = v[pivots_[r]];
            if (c == 0) continue;
            const Code* row = &rows_[r * width_];
            for (std::size_t j = pivots_[r]; j < width_; ++j)
                if (row[j] != 0) v[j] = f_->sub(v[j], f_->mul(c, row[j]));
        }
        return std::all_of(v.begin(), v.end(), [](Code x) { return x == 0; });
    }

    bool contains(std::span<const Code> v) const {
        std::vector<Code> tmp(v.begin(), v.end());
        return reduce(tmp);
    }

    /// Adds v if independent; returns whether the dimension grew.
    bool insert(std::span<const Code> v) {
        std::vector<Code> tmp(v.begin(), v.end());
        if (reduce(tmp)) return false;
        std::size_t piv = 0;
        while (tmp[piv] == 0) ++piv;
        const Code inv = f_->inv(tmp[piv]);
        for (std::size_t j = piv; j < width_; ++j) tmp[j] = f_->mul(tmp[j], inv);
        pivots_.push_back(piv);
        rows_.insert(rows_.end(), tmp.begin(), tmp.end());
        return true;
    }

   private:
    const GaloisField* f_;
    std::size_t width_;
    std::vector<std::size_t> pivots_;
    std::vector<Code> rows_;
};

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

/**
 * F_q < F_{q^m} with q = p^h.
 *
 * The F_q-basis of F_{q^m} used for coordinates is the polynomial basis
 * 1, x, ..., x^{m-1} of the big field; for h = 1 the coordinates of an
 * element are exactly its base-p digits.
 */
class FieldTower {
   public:
    FieldTower(unsigned p, unsigned h, unsigned m) : FieldTower(GaloisField(p, h), GaloisField(p, h * check_hm(p, h, m))) {}

    FieldTower(unsigned p, unsigned h, unsigned m, std::vector<unsigned> modulus_small,
               std::vector<unsigned> modulus_big)
        : FieldTower(GaloisField(p, std::move(modulus_small)), GaloisField(p, std::move(modulus_big))) {
        if (base_.degree() != h || ext_.degree() != h * m)
            throw InvalidParameter("modulus degrees do not match (p, h, m)");
    }

    static TowerPtr make(unsigned p, unsigned h, unsigned m) { return std::make_shared<const FieldTower>(p, h, m); }
    /// Tower for a prime power q and extension degree m.
    static TowerPtr for_q(std::uint64_t q, unsigned m) {
        auto pp = prime_power(q);
        if (!pp) throw InvalidParameter("q = " + std::to_string(q) + " is not a prime power");
        return make(pp->first, pp->second, m);
    }

    unsigned p() const { return base_.characteristic(); }
    unsigned h() const { return base_.degree(); }
    unsigned m() const { return m_; }
    Code q() const { return base_.order(); }
    Code qm() const { return ext_.order(); }

    const GaloisField& base() const { return base_; }
    const GaloisField& ext() const { return ext_; }

    Code embed(Code small) const { return embed_[small]; }
    bool in_base(Code a) const { return restrict_[a] >= 0; }
    std::optional<Code> restrict_to_base(Code a) const {
        if (restrict_[a] < 0) return std::nullopt;
        return static_cast<Code>(restrict_[a]);
    }

    /// a -> a^{q^i}.
    Code frobenius(Code a, unsigned i) const {
        i %= m_;
        if (i == 0 || a == 0) return a;
        std::uint64_t e = 1;
        for (unsigned k = 0; k < i; ++k) e *= q();
        return ext_.pow(a, e);
    }

    /// N_{q^m/q}(a) = a^{(q^m-1)/(q-1)}, returned as an element of the big field.
    Code rel_norm(Code a) const { return ext_.pow(a, (static_cast<std::uint64_t>(qm()) - 1) / (q() - 1)); }

    const std::vector<Code>& polynomial_basis() const { return basis_; }

    /// F_q-coordinates (base-field codes) of a in the polynomial basis.
    void coordinates(Code a, std::span<Code> out) const {
        if (h() == 1) {
            const Code p = this->p();
            for (unsigned i = 0; i < m_; ++i) {
                out[i] = a % p;
                a /= p;
            }
            return;
        }
        const auto* c = &coords_[static_cast<std::size_t>(a) * m_];
        std::copy(c, c + m_, out.begin());
    }
    std::vector<Code> coordinates(Code a) const {
        std::vector<Code> out(m_);
        coordinates(a, out);
        return out;
    }

    Code from_coordinates(std::span<const Code> c) const {
        Code r = 0;
        for (unsigned i = 0; i < m_; ++i)
            if (c[i] != 0) r = ext_.add(r, ext_.mul(embed_[c[i]], basis_[i]));
        return r;
    }

    /// dim_{F_q} of the F_q-span of the given elements (the rank weight of the vector).
    unsigned fq_rank(std::span<const Code> v) const { return fq_rank_bounded(v, m_); }

    /// min(fq_rank(v), cap), stopping as soon as the rank reaches `cap`.
    unsigned fq_rank_bounded(std::span<const Code> v, unsigned cap) const {
        if (cap == 0) return 0;
        if (p() == 2 && h() == 1) {
            std::array<Code, kMaxDegree> basis{};
            unsigned r = 0;
            for (Code x : v) {
                for (unsigned i = 0; i < r; ++i) x = std::min(x, x ^ basis[i]);
                if (x != 0) {
                    basis[r++] = x;
                    if (r >= cap) return r;
                }
            }
            return r;
        }
        std::array<std::array<Code, kMaxDegree>, kMaxDegree> rows{};
        std::array<unsigned, kMaxDegree> piv{};
        unsigned r = 0;
        std::array<Code, kMaxDegree> c{};
        const GaloisField& F = base_;
        for (Code x : v) {
            if (x == 0) continue;
            coordinates(x, std::span<Code>(c.data(), m_));
            for (unsigned i = 0; i < r; ++i) {
                const Code t = c[piv[i]];
                if (t == 0) continue;
                for (unsigned j = piv[i]; j < m_; ++j)
                    if (rows[i][j] != 0) c[j] = F.sub(c[j], F.mul(t, rows[i][j]));
            }
            unsigned pv = 0;
            while (pv < m_ && c[pv] == 0) ++pv;
            if (pv == m_) continue;
            const Code inv = F.inv(c[pv]);
            for (unsigned j = pv; j < m_; ++j) rows[r][j] = F.mul(c[j], inv);
            for (unsigned j = 0; j < pv; ++j) rows[r][j] = 0;
            piv[r] = pv;
            if (++r >= cap) return r;
        }
        return r;
    }

    nlohmann::json to_json() const {
        return {{"p", p()}, {"h", h()}, {"m", m()}, {"modulus_small", base_.modulus()}, {"modulus_big", ext_.modulus()}};
    }
    static TowerPtr from_json(const nlohmann::json& j) {
        return std::make_shared<const FieldTower>(j.at("p").get<unsigned>(), j.at("h").get<unsigned>(),
                                                  j.at("m").get<unsigned>(),
                                                  j.at("modulus_small").get<std::vector<unsigned>>(),
                                                  j.at("modulus_big").get<std::vector<unsigned>>());
    }

    bool same_as(const FieldTower& o) const {
        return this == &o || (base_.modulus() == o.base_.modulus() && ext_.modulus() == o.ext_.modulus() &&
                              p() == o.p() && m_ == o.m_);
    }

   private:
    static unsigned check_hm(unsigned p, unsigned h, unsigned m) {
        if (h == 0 || m == 0) throw InvalidParameter("h and m must be positive");
        std::uint64_t n = 1;
        for (unsigned i = 0; i < h * m; ++i) {
            n *= p;
            if (n > kMaxFieldOrder)
                throw InvalidParameter("q^m exceeds the supported envelope 2^20 for exhaustive modes");
        }
        return m;
    }

    FieldTower(GaloisField base, GaloisField ext) : base_(std::move(base)), ext_(std::move(ext)) {
        if (ext_.degree() % base_.degree() != 0) throw InvalidParameter("base degree must divide extension degree");
        m_ = ext_.degree() / base_.degree();
        // Root of the base modulus inside the big field, smallest code first.
        const auto& mod = base_.modulus();
        Code beta = 0;
        bool found = false;
        for (Code c = 0; c < ext_.order() && !found; ++c) {
            Code acc = 0;
            for (std::size_t i = mod.size(); i-- > 0;) acc = ext_.add(ext_.mul(acc, c), mod[i]);
            if (acc == 0) {
                beta = c;
                found = true;
            }
        }
        if (!found) throw InvalidParameter("base modulus has no root in the extension");
        embed_.resize(base_.order());
        restrict_.assign(ext_.order(), -1);
        for (Code s = 0; s < base_.order(); ++s) {
            Code acc = 0;
            Code pw = 1;
            Code t = s;
            for (unsigned i = 0; i < base_.degree(); ++i) {
                const Code d = t % p();
                t /= p();
                if (d != 0) acc = ext_.add(acc, ext_.mul(d, pw));
                pw = ext_.mul(pw, beta);
            }
            embed_[s] = acc;
            restrict_[acc] = static_cast<std::int32_t>(s);
        }
        basis_.resize(m_);
        const Code x = ext_.x();
        Code pw = 1;
        for (unsigned i = 0; i < m_; ++i) {
            basis_[i] = pw;
            pw = ext_.mul(pw, x);
        }
        if (h() > 1) build_coordinate_table();
    }

    void build_coordinate_table() {
        coords_.assign(static_cast<std::size_t>(ext_.order()) * m_, 0);
        std::vector<Code> c(m_, 0);
        const std::size_t total = ext_.order();
        std::vector<bool> seen(total, false);
        for (std::size_t idx = 0; idx < total; ++idx) {
            const Code a = from_coordinates(c);
            if (seen[a]) throw InvalidParameter("polynomial basis is not an F_q-basis");
            seen[a] = true;
            std::copy(c.begin(), c.end(), coords_.begin() + static_cast<std::ptrdiff_t>(a) * m_);
            for (unsigned i = 0; i < m_; ++i) {
                if (++c[i] < q()) break;
                c[i] = 0;
            }
        }
    }

    GaloisField base_;
    GaloisField ext_;
    unsigned m_ = 1;
    std::vector<Code> embed_;
    std::vector<std::int32_t> restrict_;
    std::vector<Code> basis_;
    std::vector<Code> coords_;
};

/// Coordinates with respect to an arbitrary F_q-basis of F_{q^m}.
class FqBasis {
   public:
    FqBasis(const FieldTower& tower, std::vector<Code> basis) : t_(&tower), basis_(std::move(basis)) {
        const unsigned m = tower.m();
        if (basis_.size() != m) throw DependentBasis("basis must have exactly m elements");
        // Columns of B are polynomial-basis coordinates of the basis elements; invert B.
        const GaloisField& F = tower.base();
        std::vector<Code> aug(static_cast<std::size_t>(m) * 2 * m, 0);
        for (unsigned j = 0; j < m; ++j) {
            auto c = tower.coordinates(basis_[j]);
            for (unsigned i = 0; i < m; ++i) aug[i * 2 * m + j] = c[i];
        }
        for (unsigned i = 0; i < m; ++i) aug[i * 2 * m + m + i] = 1;
        for (unsigned col = 0; col < m; ++col) {
            unsigned piv = col;
            while (piv < m && aug[piv * 2 * m + col] == 0) ++piv;
            if (piv == m) throw DependentBasis("elements are not an F_q-basis of F_{q^m}");
            for (unsigned j = 0; j < 2 * m; ++j) std::swap(aug[col * 2 * m + j], aug[piv * 2 * m + j]);
            const Code inv = F.inv(aug[col * 2 * m + col]);
            for (unsigned j = 0; j < 2 * m; ++j) aug[col * 2 * m + j] = F.mul(aug[col * 2 * m + j], inv);
            for (unsigned r = 0; r < m; ++r) {
                if (r == col) continue;
                const Code f = aug[r * 2 * m + col];
                if (f == 0) continue;
                for (unsigned j = 0; j < 2 * m; ++j)
                    aug[r * 2 * m + j] = F.sub(aug[r * 2 * m + j], F.mul(f, aug[col * 2 * m + j]));
            }
        }
        inverse_.resize(static_cast<std::size_t>(m) * m);
        for (unsigned i = 0; i < m; ++i)
            for (unsigned j = 0; j < m; ++j) inverse_[i * m + j] = aug[i * 2 * m + m + j];
    }

    const std::vector<Code>& elements() const { return basis_; }

    std::vector<Code> coordinates(Code a) const {
        const unsigned m = t_->m();
        const GaloisField& F = t_->base();
        const auto c = t_->coordinates(a);
        std::vector<Code> out(m, 0);
        for (unsigned i = 0; i < m; ++i)
            for (unsigned j = 0; j < m; ++j) out[i] = F.add(out[i], F.mul(inverse_[i * m + j], c[j]));
        return out;
    }

    Code combine(std::span<const Code> coords) const {
        Code r = 0;
        for (std::size_t i = 0; i < basis_.size(); ++i)
            r = t_->ext().add(r, t_->ext().mul(t_->embed(coords[i]), basis_[i]));
        return r;
    }

   private:
    const FieldTower* t_;
    std::vector<Code> basis_;
    std::vector<Code> inverse_;
};

/// Coordinates of a over F_q in `basis`; throws DependentBasis for a non-basis.
inline std::vector<Code> fq_coordinates(const FieldTower& tower, Code a, const std::vector<Code>& basis) {
    return FqBasis(tower, basis).coordinates(a);
}

}  // namespace rmlkit

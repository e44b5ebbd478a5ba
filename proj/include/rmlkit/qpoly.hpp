#pragma once

/**
 * @file qpoly.hpp
 * @brief Linearized polynomials L_{m,q}[x] and L_{m,q}[x_1, ..., x_l].
 *
 * A QPolynomial stores exactly m coefficients; coefficient i multiplies x^{q^i},
 * so every value is already reduced modulo x^{q^m} - x.
 */

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "linalg.hpp"

namespace rmlkit {

class QPolynomial {
   public:
    QPolynomial(TowerPtr tower, std::vector<Code> coeffs) : t_(std::move(tower)), c_(std::move(coeffs)) {
        if (c_.size() != t_->m()) throw DimensionMismatch("q-polynomial needs exactly m coefficients");
        for (Code c : c_)
            if (c >= t_->qm()) throw InvalidParameter("coefficient outside F_{q^m}");
    }

    static QPolynomial zero(TowerPtr t) {
        const unsigned m = t->m();
        return {std::move(t), std::vector<Code>(m, 0)};
    }
    /// a * x^{q^i}
    static QPolynomial monomial(TowerPtr t, Code a, unsigned i) {
        std::vector<Code> c(t->m(), 0);
        c[i % t->m()] = a;
        return {std::move(t), std::move(c)};
    }
    static QPolynomial identity(TowerPtr t) { return monomial(std::move(t), 1, 0); }
    /// x + x^q + ... + x^{q^{m-1}}
    static QPolynomial trace(TowerPtr t) {
        const unsigned m = t->m();
        return {std::move(t), std::vector<Code>(m, 1)};
    }

    /// The unique q-polynomial with f(b_j) = images[j] on the polynomial basis (Moore-matrix solve).
    static QPolynomial interpolate(TowerPtr t, const std::vector<Code>& images) {
        const unsigned m = t->m();
        const GaloisField& F = t->ext();
        const auto& b = t->polynomial_basis();
        Matrix A(m, m + 1);
        for (unsigned j = 0; j < m; ++j) {
            for (unsigned i = 0; i < m; ++i) A(j, i) = t->frobenius(b[j], i);
            A(j, m) = images.at(j);
        }
        rref_in_place(A, F);
        std::vector<Code> c(m, 0);
        for (unsigned i = 0; i < m; ++i) c[i] = A(i, m);
        return {std::move(t), std::move(c)};
    }

    const FieldTower& tower() const { return *t_; }
    const TowerPtr& tower_ptr() const { return t_; }
    const std::vector<Code>& coeffs() const { return c_; }
    Code coeff(unsigned i) const { return c_[i]; }
    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](Code x) { return x == 0; });
    }

    Code operator()(Code a) const {
        const GaloisField& F = t_->ext();
        Code r = 0;
        for (unsigned i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) r = F.add(r, F.mul(c_[i], t_->frobenius(a, i)));
        return r;
    }

    QPolynomial scaled(Code a) const {
        std::vector<Code> c(c_);
        for (auto& x : c) x = t_->ext().mul(a, x);
        return {t_, std::move(c)};
    }

    friend QPolynomial operator+(const QPolynomial& f, const QPolynomial& g) {
        f.check_same(g);
        std::vector<Code> c(f.c_);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.t_->ext().add(c[i], g.c_[i]);
        return {f.t_, std::move(c)};
    }
    friend QPolynomial operator-(const QPolynomial& f, const QPolynomial& g) {
        f.check_same(g);
        std::vector<Code> c(f.c_);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.t_->ext().sub(c[i], g.c_[i]);
        return {f.t_, std::move(c)};
    }
    bool operator==(const QPolynomial& o) const { return t_->same_as(*o.t_) && c_ == o.c_; }

    void check_same(const QPolynomial& o) const {
        if (!t_->same_as(*o.t_)) throw TowerMismatch();
    }

    /// "c0*x + c1*x^q + c2*x^q^2", zero terms omitted; the zero polynomial prints as "0".
    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (unsigned i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!first) os << " + ";
            first = false;
            os << c_[i] << "*x";
            if (i == 1) os << "^q";
            if (i >= 2) os << "^q^" << i;
        }
        if (first) os << "0";
        return os.str();
    }

    static QPolynomial parse(TowerPtr t, const std::string& text) {
        std::vector<Code> c(t->m(), 0);
        std::string s;
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
        if (s.rfind("f=", 0) == 0) s = s.substr(2);
        if (s == "0") return {std::move(t), std::move(c)};
        std::size_t pos = 0;
        while (pos < s.size()) {
            std::size_t end = s.find('+', pos);
            if (end == std::string::npos) end = s.size();
            const std::string term = s.substr(pos, end - pos);
            const auto star = term.find("*x");
            if (star == std::string::npos) throw FormatError("bad q-polynomial term: " + term);
            const unsigned long coef = std::stoul(term.substr(0, star));
            const std::string rest = term.substr(star + 2);
            unsigned e = 0;
            if (rest.empty()) {
                e = 0;
            } else if (rest == "^q") {
                e = 1;
            } else if (rest.rfind("^q^", 0) == 0) {
                e = static_cast<unsigned>(std::stoul(rest.substr(3)));
            } else {
                throw FormatError("bad q-polynomial exponent: " + rest);
            }
            if (e >= t->m() || coef >= t->qm()) throw FormatError("q-polynomial term out of range: " + term);
            c[e] = t->ext().add(c[e], static_cast<Code>(coef));
            pos = end + 1;
        }
        return {std::move(t), std::move(c)};
    }

    nlohmann::json to_json() const { return c_; }
    static QPolynomial from_json(TowerPtr t, const nlohmann::json& j) {
        return {std::move(t), j.get<std::vector<Code>>()};
    }

   private:
    TowerPtr t_;
    std::vector<Code> c_;
};

/// f o g via a x^{q^i} o b x^{q^j} = a b^{q^i} x^{q^{(i+j) mod m}}.
inline QPolynomial compose(const QPolynomial& f, const QPolynomial& g) {
    f.check_same(g);
    const FieldTower& t = f.tower();
    const GaloisField& F = t.ext();
    const unsigned m = t.m();
    std::vector<Code> c(m, 0);
    for (unsigned i = 0; i < m; ++i) {
        if (f.coeff(i) == 0) continue;
        for (unsigned j = 0; j < m; ++j) {
            if (g.coeff(j) == 0) continue;
            const unsigned k = (i + j) % m;
            c[k] = F.add(c[k], F.mul(f.coeff(i), t.frobenius(g.coeff(j), i)));
        }
    }
    return {f.tower_ptr(), std::move(c)};
}

/// Matrix over F_q of a -> f(a); column j holds the coordinates of f(basis_j).
inline Matrix to_matrix(const QPolynomial& f, const FqBasis& basis) {
    const unsigned m = f.tower().m();
    Matrix M(m, m);
    for (unsigned j = 0; j < m; ++j) {
        const auto c = basis.coordinates(f(basis.elements()[j]));
        for (unsigned i = 0; i < m; ++i) M(i, j) = c[i];
    }
    return M;
}

inline Matrix to_matrix(const QPolynomial& f) {
    return to_matrix(f, FqBasis(f.tower(), f.tower().polynomial_basis()));
}

/// dim_{F_q} Im(f).
inline unsigned poly_rank(const QPolynomial& f) {
    const auto& b = f.tower().polynomial_basis();
    std::vector<Code> img(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) img[j] = f(b[j]);
    return f.tower().fq_rank(img);
}

inline bool is_invertible(const QPolynomial& f) { return poly_rank(f) == f.tower().m(); }

/// d_L(f, g) = dim Im(f - g).
inline unsigned rank_distance(const QPolynomial& f, const QPolynomial& g) { return poly_rank(f - g); }

/// f^rho with rho = (a -> a^{p^e}) applied to every coefficient.
inline QPolynomial semilinear_twist(const QPolynomial& f, unsigned rho_exponent) {
    const FieldTower& t = f.tower();
    std::uint64_t e = 1;
    const unsigned total_degree = t.h() * t.m();
    for (unsigned i = 0; i < rho_exponent % total_degree; ++i) e *= t.p();
    std::vector<Code> c(f.coeffs());
    for (auto& x : c) x = t.ext().pow(x, e);
    return {f.tower_ptr(), std::move(c)};
}

/**
 * Element of L_{m,q}[x_1, ..., x_l]: coeff(v, i) multiplies x_v^{q^i}.
 */
class MultiQPolynomial {
   public:
    MultiQPolynomial(TowerPtr tower, unsigned ell, std::vector<Code> coeffs)
        : t_(std::move(tower)), ell_(ell), c_(std::move(coeffs)) {
        if (ell_ == 0) throw InvalidParameter("need at least one variable");
        if (c_.size() != static_cast<std::size_t>(ell_) * t_->m())
            throw DimensionMismatch("multivariate q-polynomial needs ell*m coefficients");
    }
    explicit MultiQPolynomial(const QPolynomial& f) : MultiQPolynomial(f.tower_ptr(), 1, f.coeffs()) {}

    static MultiQPolynomial zero(TowerPtr t, unsigned ell) {
        const std::size_t n = static_cast<std::size_t>(ell) * t->m();
        return {std::move(t), ell, std::vector<Code>(n, 0)};
    }
    /// a * x_v^{q^i}
    static MultiQPolynomial monomial(TowerPtr t, unsigned ell, unsigned v, Code a, unsigned i) {
        auto z = zero(std::move(t), ell);
        z.c_[static_cast<std::size_t>(v) * z.t_->m() + i % z.t_->m()] = a;
        return z;
    }
    /// x_v
    static MultiQPolynomial variable(TowerPtr t, unsigned ell, unsigned v) { return monomial(std::move(t), ell, v, 1, 0); }

    const FieldTower& tower() const { return *t_; }
    const TowerPtr& tower_ptr() const { return t_; }
    unsigned ell() const { return ell_; }
    Code coeff(unsigned v, unsigned i) const { return c_[static_cast<std::size_t>(v) * t_->m() + i]; }
    const std::vector<Code>& coeffs() const { return c_; }

    Code operator()(std::span<const Code> a) const {
        if (a.size() != ell_) throw DimensionMismatch("point has wrong number of coordinates");
        const GaloisField& F = t_->ext();
        Code r = 0;
        for (unsigned v = 0; v < ell_; ++v)
            for (unsigned i = 0; i < t_->m(); ++i) {
                const Code c = coeff(v, i);
                if (c != 0) r = F.add(r, F.mul(c, t_->frobenius(a[v], i)));
            }
        return r;
    }

    friend MultiQPolynomial operator+(const MultiQPolynomial& f, const MultiQPolynomial& g) {
        if (!f.t_->same_as(*g.t_)) throw TowerMismatch();
        if (f.ell_ != g.ell_) throw DimensionMismatch("variable count mismatch");
        std::vector<Code> c(f.c_);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.t_->ext().add(c[i], g.c_[i]);
        return {f.t_, f.ell_, std::move(c)};
    }
    MultiQPolynomial scaled(Code a) const {
        std::vector<Code> c(c_);
        for (auto& x : c) x = t_->ext().mul(a, x);
        return {t_, ell_, std::move(c)};
    }
    bool operator==(const MultiQPolynomial& o) const { return t_->same_as(*o.t_) && ell_ == o.ell_ && c_ == o.c_; }

    nlohmann::json to_json() const {
        nlohmann::json rows = nlohmann::json::array();
        for (unsigned v = 0; v < ell_; ++v)
            rows.push_back(std::vector<Code>(c_.begin() + static_cast<std::ptrdiff_t>(v * t_->m()),
                                             c_.begin() + static_cast<std::ptrdiff_t>((v + 1) * t_->m())));
        return rows;
    }

   private:
    TowerPtr t_;
    unsigned ell_;
    std::vector<Code> c_;
};

/// f o (g_1, ..., g_l): substitutes g_v for x_v.
inline MultiQPolynomial compose(const MultiQPolynomial& f, const std::vector<MultiQPolynomial>& g) {
    if (g.size() != f.ell()) throw DimensionMismatch("substitution needs one polynomial per variable");
    const FieldTower& t = f.tower();
    const unsigned m = t.m();
    const unsigned ell2 = g.front().ell();
    std::vector<Code> c(static_cast<std::size_t>(ell2) * m, 0);
    for (unsigned v = 0; v < f.ell(); ++v) {
        if (!t.same_as(g[v].tower())) throw TowerMismatch();
        if (g[v].ell() != ell2) throw DimensionMismatch("substituted polynomials disagree on variable count");
        for (unsigned i = 0; i < m; ++i) {
            const Code a = f.coeff(v, i);
            if (a == 0) continue;
            for (unsigned w = 0; w < ell2; ++w)
                for (unsigned j = 0; j < m; ++j) {
                    const Code b = g[v].coeff(w, j);
                    if (b == 0) continue;
                    auto& slot = c[static_cast<std::size_t>(w) * m + (i + j) % m];
                    slot = t.ext().add(slot, t.ext().mul(a, t.frobenius(b, i)));
                }
        }
    }
    return {f.tower_ptr(), ell2, std::move(c)};
}

using EvaluationBasis = std::vector<std::vector<Code>>;

/// (b_1 e_1, ..., b_m e_1, b_1 e_2, ...) with (b_i) the polynomial basis.
inline EvaluationBasis default_evaluation_basis(const FieldTower& t, unsigned ell) {
    EvaluationBasis B;
    for (unsigned v = 0; v < ell; ++v)
        for (Code b : t.polynomial_basis()) {
            std::vector<Code> a(ell, 0);
            a[v] = b;
            B.push_back(std::move(a));
        }
    return B;
}

/// Throws DependentBasis unless B is an F_q-basis of F_{q^m}^l.
inline void check_evaluation_basis(const FieldTower& t, unsigned ell, const EvaluationBasis& B) {
    const unsigned m = t.m();
    if (B.size() != static_cast<std::size_t>(ell) * m) throw DependentBasis("evaluation basis must have l*m vectors");
    EchelonBasis E(t.base(), static_cast<std::size_t>(ell) * m);
    std::vector<Code> row(static_cast<std::size_t>(ell) * m);
    for (const auto& a : B) {
        if (a.size() != ell) throw DimensionMismatch("evaluation point has wrong length");
        for (unsigned v = 0; v < ell; ++v) t.coordinates(a[v], std::span<Code>(row.data() + v * m, m));
        if (!E.insert(row)) throw DependentBasis("evaluation points are F_q-dependent");
    }
}

/// ev_B(f) = (f(a_1), ..., f(a_{lm})).
inline std::vector<Code> evaluation_map(const MultiQPolynomial& f, const EvaluationBasis& B) {
    check_evaluation_basis(f.tower(), f.ell(), B);
    std::vector<Code> out;
    out.reserve(B.size());
    for (const auto& a : B) out.push_back(f(a));
    return out;
}

/// dim_{F_q} Im(f) computed from the images of an F_q-basis of the domain.
inline unsigned poly_rank(const MultiQPolynomial& f) {
    std::vector<Code> img;
    for (const auto& a : default_evaluation_basis(f.tower(), f.ell())) img.push_back(f(a));
    return f.tower().fq_rank(img);
}

}  // namespace rmlkit

#pragma once

/**
 * @file codes.hpp
 * @brief F_{q^m}-linear rank-metric codes in vector and q-polynomial form.
 */

#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bigcount.hpp"
#include "error.hpp"
#include "field.hpp"
#include "linalg.hpp"
#include "qpoly.hpp"

namespace rmlkit {

/// dim_{F_q} of the span of the entries of v.
inline unsigned rank_weight(const FieldTower& t, std::span<const Code> v) { return t.fq_rank(v); }

namespace detail {

/**
 * Visits one representative per 1-dimensional subspace of the row space of the
 * k x n generator matrix G (coefficient vector with leading 1). Rows with a later
 * leading coefficient come first, so the basis rows themselves are visited before
 * any combination. fn(span<const Code>) returns false to stop; the function returns
 * false iff it was stopped.
 */
template <class Fn>
bool for_each_projective_codeword(const GaloisField& F, const Matrix& G, Fn&& fn) {
    const std::size_t k = G.rows;
    const std::size_t n = G.cols;
    const Code Q = F.order();
    std::vector<Code> coef(k, 0);
    std::vector<Code> word(n, 0);
    for (std::size_t lead = k; lead-- > 0;) {
        std::fill(coef.begin(), coef.end(), 0);
        coef[lead] = 1;
        while (true) {
            for (std::size_t j = 0; j < n; ++j) word[j] = G(lead, j);
            for (std::size_t i = lead + 1; i < k; ++i) {
                const Code c = coef[i];
                if (c == 0) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    const Code g = G(i, j);
                    if (g != 0) word[j] = F.add(word[j], F.mul(c, g));
                }
            }
            if (!fn(std::span<const Code>(word))) return false;
            std::size_t i = k;
            bool carry = true;
            while (carry && i-- > lead + 1) {
                if (++coef[i] < Q) carry = false;
                else coef[i] = 0;
            }
            if (carry) break;
        }
    }
    return true;
}

/// True iff every nonzero codeword of the row space of G has rank weight >= d.
inline bool min_distance_at_least(const FieldTower& t, const Matrix& G, unsigned d) {
    if (d == 0) return true;
    return for_each_projective_codeword(t.ext(), G, [&](std::span<const Code> w) {
        return t.fq_rank_bounded(w, d) >= d;
    });
}

}  // namespace detail

class RankMetricCode {
   public:
    RankMetricCode(TowerPtr tower, Matrix generators) : t_(std::move(tower)), cache_(std::make_shared<Cache>()) {
        for (Code c : generators.data)
            if (c >= t_->qm()) throw InvalidParameter("generator entry outside F_{q^m}");
        gen_ = Subspace::span(std::move(generators), t_->ext());
        if (gen_.dim() == 0) throw InvalidParameter("a rank-metric code must have dimension >= 1");
    }
    RankMetricCode(TowerPtr tower, Subspace generators) : RankMetricCode(std::move(tower), generators.basis()) {}

    const FieldTower& tower() const { return *t_; }
    const TowerPtr& tower_ptr() const { return t_; }
    std::size_t n() const { return gen_.ambient_dim(); }
    std::size_t k() const { return gen_.dim(); }
    const Subspace& generator() const { return gen_; }

    bool contains(std::span<const Code> v) const { return gen_.contains(v, t_->ext()); }

    /// Visits one codeword per projective point of the code (see detail::for_each_projective_codeword).
    template <class Fn>
    bool for_each_projective_codeword(Fn&& fn) const {
        return detail::for_each_projective_codeword(t_->ext(), gen_.basis(), std::forward<Fn>(fn));
    }

    unsigned min_distance() const {
        std::call_once(cache_->dist_once, [&] {
            unsigned d = t_->m() + 1;
            for_each_projective_codeword([&](std::span<const Code> w) {
                d = std::min(d, t_->fq_rank(w));
                return d > 1;
            });
            cache_->distance = d;
        });
        return cache_->distance;
    }

    bool min_distance_at_least(unsigned d) const { return detail::min_distance_at_least(*t_, gen_.basis(), d); }

    /// A_r = number of codewords of rank weight r, r = 0 .. m.
    std::vector<BigCount> weight_distribution() const {
        std::call_once(cache_->dist_wd_once, [&] {
            std::vector<std::uint64_t> proj(t_->m() + 1, 0);
            for_each_projective_codeword([&](std::span<const Code> w) {
                ++proj[t_->fq_rank(w)];
                return true;
            });
            std::vector<BigCount> out(proj.size());
            for (std::size_t r = 0; r < proj.size(); ++r) out[r] = BigCount(proj[r]) * (t_->qm() - 1);
            out[0] = 1;
            cache_->weights = std::move(out);
        });
        return cache_->weights;
    }

    std::string weight_distribution_csv() const {
        std::ostringstream os;
        os << "rank,count\n";
        const auto wd = weight_distribution();
        for (std::size_t r = 0; r < wd.size(); ++r) os << r << "," << wd[r].str() << "\n";
        return os.str();
    }

    nlohmann::json to_json() const {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t r = 0; r < k(); ++r) {
            auto row = gen_.basis().row(r);
            rows.push_back(std::vector<Code>(row.begin(), row.end()));
        }
        return {{"tower", t_->to_json()}, {"n", n()}, {"k", k()}, {"generator_rows", rows}};
    }

    static RankMetricCode from_json(const nlohmann::json& j) {
        auto t = FieldTower::from_json(j.at("tower"));
        auto rows = j.at("generator_rows").get<std::vector<std::vector<Code>>>();
        RankMetricCode C(t, Matrix::from_rows(rows));
        if (C.n() != j.at("n").get<std::size_t>() || C.k() != j.at("k").get<std::size_t>())
            throw FormatError("code file n/k disagree with generator rows");
        return C;
    }

   private:
    struct Cache {
        std::once_flag dist_once;
        std::once_flag dist_wd_once;
        unsigned distance = 0;
        std::vector<BigCount> weights;
    };
    TowerPtr t_;
    Subspace gen_;
    std::shared_ptr<Cache> cache_;
};

/// d = n - k + 1; only defined for n <= m.
inline bool is_mrd(const RankMetricCode& C) {
    if (C.n() > C.tower().m()) throw UnsupportedShape("MRD test requires n <= m");
    return C.min_distance_at_least(static_cast<unsigned>(C.n() - C.k() + 1));
}

/// F_{q^m}-subspace of L_{m,q}[x_1..x_l] given by spanning q-polynomials.
class PolyCode {
   public:
    PolyCode(TowerPtr tower, std::vector<MultiQPolynomial> gens) : t_(std::move(tower)), gens_(std::move(gens)) {
        if (gens_.empty()) throw InvalidParameter("a code needs at least one generator");
        ell_ = gens_.front().ell();
        Matrix M(0, static_cast<std::size_t>(ell_) * t_->m());
        for (const auto& g : gens_) {
            if (!t_->same_as(g.tower())) throw TowerMismatch();
            if (g.ell() != ell_) throw DimensionMismatch("generators disagree on variable count");
            M.append_row(g.coeffs());
        }
        coeff_space_ = Subspace::span(std::move(M), t_->ext());
        if (coeff_space_.dim() == 0) throw InvalidParameter("a rank-metric code must have dimension >= 1");
    }
    static PolyCode univariate(TowerPtr tower, const std::vector<QPolynomial>& gens) {
        std::vector<MultiQPolynomial> g;
        for (const auto& f : gens) g.emplace_back(f);
        return {std::move(tower), std::move(g)};
    }

    const FieldTower& tower() const { return *t_; }
    const TowerPtr& tower_ptr() const { return t_; }
    unsigned ell() const { return ell_; }
    std::size_t k() const { return coeff_space_.dim(); }
    const std::vector<MultiQPolynomial>& generators() const { return gens_; }
    /// The code as a subspace of F_{q^m}^{l m} in coefficient coordinates.
    const Subspace& coefficient_space() const { return coeff_space_; }

    bool contains(const MultiQPolynomial& f) const { return coeff_space_.contains(f.coeffs(), t_->ext()); }
    bool contains(const QPolynomial& f) const { return contains(MultiQPolynomial(f)); }

    RankMetricCode to_vector_code(const EvaluationBasis& B) const {
        Matrix G(0, B.size());
        for (const auto& g : gens_) G.append_row(evaluation_map(g, B));
        return {t_, std::move(G)};
    }
    RankMetricCode to_vector_code() const { return to_vector_code(default_evaluation_basis(*t_, ell_)); }

    bool operator==(const PolyCode& o) const { return t_->same_as(*o.t_) && coeff_space_ == o.coeff_space_; }

   private:
    TowerPtr t_;
    std::vector<MultiQPolynomial> gens_;
    unsigned ell_ = 1;
    Subspace coeff_space_;
};

inline bool is_mrd(const PolyCode& C) { return is_mrd(C.to_vector_code()); }

/// G_{k,s,m} = <x, x^{q^s}, ..., x^{q^{s(k-1)}}>.
inline PolyCode gabidulin(TowerPtr t, unsigned k, unsigned s) {
    const unsigned m = t->m();
    if (k == 0 || k > m) throw InvalidParameter("Gabidulin code needs 1 <= k <= m");
    if (std::gcd(s, m) != 1) throw InvalidParameter("Gabidulin code needs gcd(s, m) = 1");
    std::vector<QPolynomial> g;
    for (unsigned i = 0; i < k; ++i) g.push_back(QPolynomial::monomial(t, 1, (s * i) % m));
    return PolyCode::univariate(std::move(t), g);
}

enum class TwistVariant { definition, cz_form };

/**
 * Generalized twisted Gabidulin code.
 *
 * definition: <x^{q^s}, ..., x^{q^{s(k-1)}}, x + delta x^{q^{sk}}>, requiring N(delta) != (-1)^{mk}.
 * cz_form (k = 2, s = 1, m = 4 only): <x, x^q + delta x^{q^3}>, requiring N(delta) != 1.
 * The result is always checked with is_mrd; a failure raises ConstructionFailed.
 */
inline PolyCode twisted_gabidulin(TowerPtr t, unsigned k, unsigned s, Code delta, TwistVariant variant) {
    const unsigned m = t->m();
    if (k == 0 || k > m) throw InvalidParameter("twisted Gabidulin code needs 1 <= k <= m");
    if (std::gcd(s, m) != 1) throw InvalidParameter("twisted Gabidulin code needs gcd(s, m) = 1");
    if (delta >= t->qm()) throw InvalidParameter("delta outside F_{q^m}");
    const GaloisField& F = t->ext();
    const Code norm = t->rel_norm(delta);
    std::vector<QPolynomial> g;
    if (variant == TwistVariant::cz_form) {
        if (k != 2 || s != 1 || m != 4) throw InvalidParameter("cz_form is defined only for k = 2, s = 1, m = 4");
        if (norm == 1) throw InvalidDelta("N(delta) = 1 is excluded");
        g.push_back(QPolynomial::identity(t));
        g.push_back(QPolynomial::monomial(t, 1, 1) + QPolynomial::monomial(t, delta, 3));
    } else {
        const Code forbidden = (static_cast<std::uint64_t>(m) * k) % 2 == 0 ? Code{1} : F.neg(1);
        if (norm == forbidden) throw InvalidDelta("N(delta) = (-1)^{mk} is excluded");
        for (unsigned i = 1; i < k; ++i) g.push_back(QPolynomial::monomial(t, 1, (s * i) % m));
        g.push_back(QPolynomial::identity(t) + QPolynomial::monomial(t, delta, (s * k) % m));
    }
    PolyCode C = PolyCode::univariate(t, g);
    if (C.k() != k || !is_mrd(C)) throw ConstructionFailed("twisted Gabidulin construction is not an MRD code");
    return C;
}

/// Generator (I_k | a I_k | ... | a^{m-1} I_k); requires F_q(a) = F_{q^m}.
inline RankMetricCode one_weight_code(TowerPtr t, unsigned k, Code alpha) {
    const unsigned m = t->m();
    if (k == 0) throw InvalidParameter("one-weight code needs k >= 1");
    std::vector<Code> powers(m);
    Code pw = 1;
    for (unsigned b = 0; b < m; ++b) {
        powers[b] = pw;
        pw = t->ext().mul(pw, alpha);
    }
    if (t->fq_rank(powers) != m) throw NotPrimitiveElement("alpha does not generate F_{q^m} over F_q");
    Matrix G(k, static_cast<std::size_t>(m) * k);
    for (unsigned r = 0; r < k; ++r)
        for (unsigned b = 0; b < m; ++b) G(r, b * k + r) = powers[b];
    return {std::move(t), std::move(G)};
}

/// <x_1, ..., x_k> inside L_{m,q}[x_1..x_k].
inline PolyCode one_weight_poly_code(TowerPtr t, unsigned k) {
    std::vector<MultiQPolynomial> g;
    for (unsigned v = 0; v < k; ++v) g.push_back(MultiQPolynomial::variable(t, k, v));
    return {std::move(t), std::move(g)};
}

/// F_q-row space of the expansion of X's basis (dim supp of a single word = its rank weight).
inline Subspace support(const FieldTower& t, const Subspace& X) {
    const std::size_t n = X.ambient_dim();
    const unsigned m = t.m();
    Matrix S(0, n);
    std::vector<Code> c(m);
    for (std::size_t r = 0; r < X.dim(); ++r) {
        Matrix block(m, n);
        for (std::size_t j = 0; j < n; ++j) {
            t.coordinates(X.basis()(r, j), c);
            for (unsigned i = 0; i < m; ++i) block(i, j) = c[i];
        }
        for (unsigned i = 0; i < m; ++i) S.append_row(block.row(i));
    }
    if (S.rows == 0) return Subspace::zero(n, t.base());
    return Subspace::span(std::move(S), t.base());
}

namespace detail {

/// Embedded product v * A for v over F_{q^m} and A over F_q.
inline void mul_by_base_matrix(const FieldTower& t, std::span<const Code> v, const Matrix& A, std::span<Code> out) {
    const GaloisField& F = t.ext();
    std::fill(out.begin(), out.end(), 0);
    for (std::size_t r = 0; r < A.rows; ++r) {
        if (v[r] == 0) continue;
        for (std::size_t j = 0; j < A.cols; ++j) {
            const Code a = A(r, j);
            if (a != 0) out[j] = F.add(out[j], F.mul(v[r], t.embed(a)));
        }
    }
}

/// Calls fn(const Matrix&) for every invertible n x n matrix over F.
template <class Fn>
void for_each_invertible_matrix(const GaloisField& F, std::size_t n, Fn&& fn) {
    std::uint64_t vectors = 1;
    for (std::size_t i = 0; i < n; ++i) vectors *= F.order();
    Matrix A(n, n);
    std::vector<EchelonBasis> stack;
    stack.emplace_back(F, n);
    std::vector<Code> col(n);
    auto rec = [&](auto&& self, std::size_t j) -> void {
        if (j == n) {
            fn(static_cast<const Matrix&>(A));
            return;
        }
        for (std::uint64_t v = 1; v < vectors; ++v) {
            std::uint64_t t = v;
            for (std::size_t i = 0; i < n; ++i) {
                col[i] = static_cast<Code>(t % F.order());
                t /= F.order();
            }
            EchelonBasis next = stack.back();
            if (!next.insert(col)) continue;
            for (std::size_t i = 0; i < n; ++i) A(i, j) = col[i];
            stack.push_back(std::move(next));
            self(self, j + 1);
            stack.pop_back();
        }
    };
    rec(rec, 0);
}

}  // namespace detail

/// Work budget for exhaustive sweeps over GL_n(q).
inline constexpr std::uint64_t kMaxGroupSweep = 20'000'000;

/// |{A in GL_n(q) : C A = C}| by sweeping GL_n(q) (the vector form of the right idealizer).
inline BigCount linear_automorphism_count(const RankMetricCode& C) {
    const FieldTower& t = C.tower();
    const std::size_t n = C.n();
    const BigCount order = gl_order(static_cast<unsigned>(n), BigInt(t.q()));
    if (order > kMaxGroupSweep)
        throw ResourceBudgetExceeded("|GL_" + std::to_string(n) + "(" + std::to_string(t.q()) +
                                     ")| = " + order.str() + " exceeds the sweep budget");
    std::uint64_t count = 0;
    std::vector<Code> img(n);
    detail::for_each_invertible_matrix(t.base(), n, [&](const Matrix& A) {
        for (std::size_t r = 0; r < C.k(); ++r) {
            detail::mul_by_base_matrix(t, C.generator().basis().row(r), A, img);
            if (!C.contains(img)) return;
        }
        ++count;
    });
    return count;
}

/// dim_{F_q} of the algebra {A in F_q^{n x n} : C A <= C} for C the row space of the RREF matrix G.
inline unsigned idealizer_dimension(const FieldTower& t, const Matrix& G) {
    const GaloisField& F = t.ext();
    const std::size_t n = G.cols;
    const std::size_t k = G.rows;
    const unsigned m = t.m();
    std::vector<std::size_t> piv(k);
    std::vector<bool> is_piv(n, false);
    for (std::size_t r = 0; r < k; ++r) {
        std::size_t c = 0;
        while (G(r, c) == 0) ++c;
        piv[r] = c;
        is_piv[c] = true;
    }
    // parity checks h with G h^T = 0, one per non-pivot column c
    std::vector<std::vector<Code>> H;
    for (std::size_t c = 0; c < n; ++c) {
        if (is_piv[c]) continue;
        std::vector<Code> h(n, 0);
        h[c] = 1;
        for (std::size_t i = 0; i < k; ++i) h[piv[i]] = F.neg(G(i, c));
        H.push_back(std::move(h));
    }
    if (H.empty()) return static_cast<unsigned>(n * n);
    // sum_{r,j} h_j G_{ir} A_{rj} = 0 for every (i, h), expanded over F_q
    Matrix sys(k * H.size() * m, n * n);
    std::vector<Code> c(m);
    std::size_t row = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (const auto& h : H) {
            for (std::size_t r = 0; r < n; ++r) {
                const Code g = G(i, r);
                if (g == 0) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    if (h[j] == 0) continue;
                    t.coordinates(F.mul(h[j], g), c);
                    for (unsigned s = 0; s < m; ++s) sys(row + s, r * n + j) = c[s];
                }
            }
            row += m;
        }
    return static_cast<unsigned>(n * n - rank(std::move(sys), t.base()));
}

inline unsigned idealizer_dimension(const RankMetricCode& C) { return idealizer_dimension(C.tower(), C.generator().basis()); }

enum class AutMode { exhaustive, monomial };

/// Invertible monomials a x^{q^i} with C o (a x^{q^i}) = C (univariate codes only).
inline std::vector<QPolynomial> monomial_automorphisms(const PolyCode& C) {
    if (C.ell() != 1) throw UnsupportedShape("monomial mode is defined for univariate codes");
    const FieldTower& t = C.tower();
    std::vector<QPolynomial> out;
    for (unsigned i = 0; i < t.m(); ++i)
        for (Code a = 1; a < t.qm(); ++a) {
            const QPolynomial g = QPolynomial::monomial(C.tower_ptr(), a, i);
            bool ok = true;
            for (const auto& f : C.generators()) {
                const QPolynomial fu(C.tower_ptr(), f.coeffs());
                if (!C.contains(compose(fu, g))) {
                    ok = false;
                    break;
                }
            }
            if (ok) out.push_back(g);
        }
    return out;
}

/// |Autlin(C)|: exhaustive sweeps GL_{lm}(q) through the evaluation isomorphism; monomial restricts to a x^{q^i}.
inline BigCount linear_automorphism_count(const PolyCode& C, AutMode mode) {
    if (mode == AutMode::monomial) return BigCount(monomial_automorphisms(C).size());
    return linear_automorphism_count(C.to_vector_code());
}

}  // namespace rmlkit

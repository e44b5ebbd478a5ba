#pragma once

/**
 * @file lattice.hpp
 * @brief Rank-metric lattices L_i(n, m; q): brute-force construction, Moebius values,
 * Whitney numbers and the closed formulas / recursion they are checked against.
 */

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bigcount.hpp"
#include "codes.hpp"
#include "error.hpp"
#include "field.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

namespace rmlkit {

struct LatticeParams {
    unsigned i = 1;
    unsigned n = 1;
    unsigned m = 1;
    std::uint64_t q = 2;

    void validate() const {
        if (i < 1 || i > n) throw InvalidParameter("lattice needs 1 <= i <= n");
        if (m < 1) throw InvalidParameter("lattice needs m >= 1");
        if (!prime_power(q)) throw InvalidParameter("q must be a prime power");
    }
    nlohmann::json to_json() const { return {{"i", i}, {"n", n}, {"m", m}, {"q", q}}; }
    std::string label() const {
        return "L_" + std::to_string(i) + "(" + std::to_string(n) + "," + std::to_string(m) + ";" + std::to_string(q) + ")";
    }
    bool operator==(const LatticeParams&) const = default;
};

/// Number of subspaces of F_{q^m}^n, the enumeration cost of build_lattice.
inline BigCount lattice_build_estimate(const LatticeParams& p) {
    const BigInt Q = ipow(BigInt(p.q), p.m);
    BigCount total = 0;
    for (unsigned k = 0; k <= p.n; ++k) total += gaussian_binomial(p.n, k, Q);
    return total;
}

inline constexpr std::uint64_t kLatticeBudget = 10'000'000;

/// Elements of one rank of the lattice, stored as flat RREF matrices, with an open-addressing index.
class LatticeLayer {
   public:
    LatticeLayer(std::size_t dim, std::size_t n) : dim_(dim), n_(n) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return count_; }
    std::size_t stride() const { return dim_ * n_; }

    std::span<const Code> element(std::size_t idx) const { return {data_.data() + idx * stride(), stride()}; }
    Matrix matrix(std::size_t idx) const {
        Matrix M(dim_, n_);
        auto e = element(idx);
        std::copy(e.begin(), e.end(), M.data.begin());
        return M;
    }
    Subspace subspace(std::size_t idx, Code field_order) const { return Subspace::from_rref(matrix(idx), field_order); }

    void append(std::span<const Code> rref) {
        data_.insert(data_.end(), rref.begin(), rref.end());
        ++count_;
    }

    void build_index() {
        std::size_t cap = 16;
        while (cap < 2 * count_ + 1) cap <<= 1;
        slots_.assign(cap, kEmpty);
        for (std::size_t i = 0; i < count_; ++i) {
            std::size_t s = hash(element(i)) & (cap - 1);
            while (slots_[s] != kEmpty) s = (s + 1) & (cap - 1);
            slots_[s] = static_cast<std::uint32_t>(i);
        }
    }

    /// Index of the element with exactly this RREF, if present. Thread-safe after build_index.
    std::optional<std::size_t> find(std::span<const Code> rref) const {
        if (slots_.empty()) return std::nullopt;
        const std::size_t mask = slots_.size() - 1;
        std::size_t s = hash(rref) & mask;
        while (slots_[s] != kEmpty) {
            auto e = element(slots_[s]);
            if (std::equal(e.begin(), e.end(), rref.begin())) return slots_[s];
            s = (s + 1) & mask;
        }
        return std::nullopt;
    }

    // Moebius values: int64 unless the layer overflowed, then BigInt.
    bool big() const { return big_; }
    std::int64_t mu_small(std::size_t idx) const { return mu_small_[idx]; }
    BigInt mu(std::size_t idx) const { return big_ ? mu_big_[idx] : BigInt(mu_small_[idx]); }
    bool has_mobius() const { return has_mu_; }

    void set_mobius_small(std::vector<std::int64_t> v) {
        mu_small_ = std::move(v);
        mu_big_.clear();
        big_ = false;
        has_mu_ = true;
    }
    void set_mobius_big(std::vector<BigInt> v) {
        mu_big_ = std::move(v);
        mu_small_.clear();
        big_ = true;
        has_mu_ = true;
    }

    BigInt mobius_sum() const {
        BigInt s = 0;
        if (big_)
            for (const auto& v : mu_big_) s += v;
        else
            for (auto v : mu_small_) s += v;
        return s;
    }

   private:
    static constexpr std::uint32_t kEmpty = 0xFFFFFFFFU;
    static std::size_t hash(std::span<const Code> v) {
        std::uint64_t h = 1469598103934665603ULL;
        for (Code c : v) h = (h ^ c) * 1099511628211ULL;
        return static_cast<std::size_t>(h ^ (h >> 29));
    }

    std::size_t dim_;
    std::size_t n_;
    std::size_t count_ = 0;
    std::vector<Code> data_;
    std::vector<std::uint32_t> slots_;
    bool has_mu_ = false;
    bool big_ = false;
    std::vector<std::int64_t> mu_small_;
    std::vector<BigInt> mu_big_;
};

struct WhitneyVector {
    std::vector<BigInt> first_kind;    ///< w_0 .. w_N
    std::vector<BigCount> second_kind; ///< W_0 .. W_N
    /// chi(L; lambda) = sum_j w_j lambda^{N-j}; entry e is the coefficient of lambda^e.
    std::vector<BigInt> characteristic_polynomial() const {
        const std::size_t N = first_kind.size() - 1;
        std::vector<BigInt> c(N + 1);
        for (std::size_t j = 0; j <= N; ++j) c[N - j] = first_kind[j];
        return c;
    }
    nlohmann::json to_json() const {
        auto strs = [](const std::vector<BigInt>& v) {
            std::vector<std::string> s;
            for (const auto& x : v) s.push_back(x.str());
            return s;
        };
        return {{"first_kind", strs(first_kind)},
                {"second_kind", strs(second_kind)},
                {"characteristic_polynomial", strs(characteristic_polynomial())}};
    }
};

class RankMetricLattice {
   public:
    RankMetricLattice(LatticeParams params, TowerPtr tower) : params_(params), t_(std::move(tower)) {
        for (unsigned k = 0; k <= params_.n; ++k) layers_.emplace_back(k, params_.n);
    }

    const LatticeParams& params() const { return params_; }
    const FieldTower& tower() const { return *t_; }
    const TowerPtr& tower_ptr() const { return t_; }
    /// Rank of the lattice (dimension of its top element).
    unsigned rank() const { return params_.n; }
    const LatticeLayer& layer(std::size_t k) const { return layers_.at(k); }
    LatticeLayer& layer_mut(std::size_t k) { return layers_.at(k); }
    std::size_t element_count() const {
        std::size_t c = 0;
        for (const auto& l : layers_) c += l.size();
        return c;
    }
    bool has_mobius() const {
        return std::all_of(layers_.begin(), layers_.end(), [](const LatticeLayer& l) { return l.has_mobius(); });
    }

    /// Index of X within its layer, if X is a lattice element.
    std::optional<std::size_t> find(const Subspace& X) const {
        if (X.ambient_dim() != params_.n) return std::nullopt;
        return layers_.at(X.dim()).find(X.basis().data);
    }
    bool contains(const Subspace& X) const { return find(X).has_value(); }

    BigInt mu(const Subspace& X) const {
        auto idx = find(X);
        if (!idx) throw InvalidParameter("subspace is not an element of the lattice");
        return layers_[X.dim()].mu(*idx);
    }

   private:
    LatticeParams params_;
    TowerPtr t_;
    std::vector<LatticeLayer> layers_;
};

namespace detail {

/// The rank-<=i vectors of the row space of G (RREF, k rows) span it.
inline bool spanned_by_low_rank(const FieldTower& t, const Matrix& G, unsigned i) {
    const std::size_t k = G.rows;
    if (k == 0) return true;
    EchelonBasis span(t.ext(), G.cols);
    for_each_projective_codeword(t.ext(), G, [&](std::span<const Code> w) {
        if (t.fq_rank_bounded(w, i + 1) <= i) span.insert(w);
        return span.dim() < k;
    });
    return span.dim() == k;
}

}  // namespace detail

/// X is an element of L_i(n, m; q): its rank-<=i vectors span it.
inline bool is_lattice_element(const FieldTower& t, const Subspace& X, unsigned i) {
    return detail::spanned_by_low_rank(t, X.basis(), i);
}

/// Span of the rank-<=i vectors of X (the largest lattice element below X).
inline Subspace lattice_interior(const FieldTower& t, const Subspace& X, unsigned i) {
    Matrix S(0, X.ambient_dim());
    if (X.dim() > 0) {
        EchelonBasis span(t.ext(), X.ambient_dim());
        detail::for_each_projective_codeword(t.ext(), X.basis(), [&](std::span<const Code> w) {
            if (t.fq_rank_bounded(w, i + 1) <= i && span.insert(w)) S.append_row(w);
            return span.dim() < X.dim();
        });
    }
    if (S.rows == 0) return Subspace::zero(X.ambient_dim(), t.ext());
    return Subspace::span(std::move(S), t.ext());
}

inline Subspace lattice_join(const RankMetricLattice& L, const Subspace& X, const Subspace& Y) {
    return join(X, Y, L.tower().ext());
}
inline Subspace lattice_meet(const RankMetricLattice& L, const Subspace& X, const Subspace& Y) {
    return lattice_interior(L.tower(), meet(X, Y, L.tower().ext()), L.params().i);
}

struct BuildOptions {
    unsigned threads = 1;
    std::uint64_t shard_block = 4096;
    std::uint64_t budget = kLatticeBudget;
};

inline TowerPtr lattice_tower(const LatticeParams& p) { return FieldTower::for_q(p.q, p.m); }

/// Filters every subspace of F_{q^m}^n by the membership test; layer order is enumeration order.
inline RankMetricLattice build_lattice(const LatticeParams& p, const BuildOptions& opt = {}) {
    p.validate();
    const BigCount est = lattice_build_estimate(p);
    if (est > opt.budget)
        throw ResourceBudgetExceeded(p.label() + " needs " + est.str() + " subspaces, budget " +
                                     std::to_string(opt.budget));
    RankMetricLattice L(p, lattice_tower(p));
    const FieldTower& t = L.tower();
    for (unsigned k = 0; k <= p.n; ++k) {
        SubspaceEnumerator en(p.n, k, t.qm());
        const auto shards = en.shards(opt.shard_block);
        std::vector<std::vector<Code>> found(shards.size());
        parallel_for(shards.size(), opt.threads, [&](std::size_t s, unsigned) {
            en.for_each_in(shards[s], [&](const Matrix& M) {
                if (detail::spanned_by_low_rank(t, M, p.i)) found[s].insert(found[s].end(), M.data.begin(), M.data.end());
            });
        });
        LatticeLayer& layer = L.layer_mut(k);
        if (k == 0) {
            layer.append({});  // the bottom has an empty basis
        } else {
            const std::size_t stride = layer.stride();
            for (const auto& f : found)
                for (std::size_t off = 0; off < f.size(); off += stride) layer.append(std::span<const Code>(f.data() + off, stride));
        }
        layer.build_index();
    }
    return L;
}

namespace detail {

struct OverflowError {};

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError{};
    return r;
}

/// Coefficient RREFs for d-dimensional subspaces of F^k, keyed (d, k).
class CoefficientCache {
   public:
    explicit CoefficientCache(Code Q) : Q_(Q) {}
    const std::vector<Matrix>& get(std::size_t d, std::size_t k) {
        auto key = std::make_pair(d, k);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(key, SubspaceEnumerator(k, d, Q_).collect()).first->second;
    }

   private:
    Code Q_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Matrix>> cache_;
};

/// Y = C * B; RREF whenever C and B are (pivot columns of B carry C).
inline void coefficient_product(const GaloisField& F, const Matrix& C, std::span<const Code> B, std::size_t n,
                                std::vector<Code>& out) {
    out.assign(C.rows * n, 0);
    for (std::size_t r = 0; r < C.rows; ++r)
        for (std::size_t s = 0; s < C.cols; ++s) {
            const Code c = C(r, s);
            if (c == 0) continue;
            const Code* brow = B.data() + s * n;
            Code* orow = out.data() + r * n;
            if (c == 1) {
                for (std::size_t j = 0; j < n; ++j)
                    if (brow[j] != 0) orow[j] = F.add(orow[j], brow[j]);
            } else {
                for (std::size_t j = 0; j < n; ++j)
                    if (brow[j] != 0) orow[j] = F.add(orow[j], F.mul(c, brow[j]));
            }
        }
}

/// Calls fn(d, index) for every lattice element strictly below element `idx` of layer k (k < n).
template <class Fn>
void for_each_lower(const RankMetricLattice& L, CoefficientCache& cache, std::size_t k, std::size_t idx, Fn&& fn) {
    const std::size_t n = L.params().n;
    const auto B = L.layer(k).element(idx);
    std::vector<Code> buf;
    fn(std::size_t{0}, std::size_t{0});
    for (std::size_t d = 1; d < k; ++d) {
        const LatticeLayer& lower = L.layer(d);
        if (lower.size() == 0) continue;
        for (const Matrix& C : cache.get(d, k)) {
            coefficient_product(L.tower().ext(), C, B, n, buf);
            if (auto j = lower.find(buf)) fn(d, *j);
        }
    }
}

}  // namespace detail

/// Lattice elements below X per dimension (X need not be a lattice element).
inline std::vector<std::size_t> interval_rank_profile(const RankMetricLattice& L, const Subspace& X) {
    const std::size_t n = L.params().n;
    std::vector<std::size_t> counts(X.dim() + 1, 0);
    detail::CoefficientCache cache(L.tower().qm());
    std::vector<Code> buf;
    for (std::size_t d = 0; d <= X.dim(); ++d)
        for (const Matrix& C : cache.get(d, X.dim())) {
            detail::coefficient_product(L.tower().ext(), C, X.basis().data, n, buf);
            counts[d] += L.layer(d).find(buf).has_value();
        }
    return counts;
}

/**
 * Fills the Moebius values bottom-up: mu(0) = 1, mu(X) = -sum_{Y < X} mu(Y).
 * The top element (full space) sums over every other element directly. Each layer is
 * computed in int64 and redone with big integers if any sum overflows.
 */
inline void compute_mobius(RankMetricLattice& L, unsigned threads = 1) {
    const std::size_t n = L.params().n;
    const Code Q = L.tower().qm();
    L.layer_mut(0).set_mobius_small({1});
    bool big_mode = false;
    for (std::size_t k = 1; k <= n; ++k) {
        LatticeLayer& layer = L.layer_mut(k);
        const std::size_t N = layer.size();
        if (k == n) {
            BigInt s = 0;
            for (std::size_t d = 0; d < n; ++d) s += L.layer(d).mobius_sum();
            std::vector<BigInt> v(N, -s);
            if (!big_mode && N > 0 && -s >= std::numeric_limits<std::int64_t>::min() &&
                -s <= std::numeric_limits<std::int64_t>::max())
                layer.set_mobius_small(std::vector<std::int64_t>(N, static_cast<std::int64_t>(-s)));
            else
                layer.set_mobius_big(std::move(v));
            continue;
        }
        std::vector<detail::CoefficientCache> caches(std::max(1U, threads), detail::CoefficientCache(Q));
        if (!big_mode) {
            std::vector<std::int64_t> mu(N, 0);
            std::atomic<bool> overflow{false};
            parallel_for(N, threads, [&](std::size_t x, unsigned w) {
                if (overflow) return;
                std::int64_t s = 0;
                try {
                    detail::for_each_lower(L, caches[w], k, x,
                                           [&](std::size_t d, std::size_t j) { s = detail::checked_add(s, L.layer(d).mu_small(j)); });
                    if (s == std::numeric_limits<std::int64_t>::min()) throw detail::OverflowError{};
                    mu[x] = -s;
                } catch (const detail::OverflowError&) {
                    overflow = true;
                }
            });
            if (!overflow) {
                layer.set_mobius_small(std::move(mu));
                continue;
            }
            big_mode = true;
        }
        std::vector<BigInt> mu(N);
        parallel_for(N, threads, [&](std::size_t x, unsigned w) {
            BigInt s = 0;
            detail::for_each_lower(L, caches[w], k, x, [&](std::size_t d, std::size_t j) { s += L.layer(d).mu(j); });
            mu[x] = -s;
        });
        layer.set_mobius_big(std::move(mu));
    }
}

inline WhitneyVector whitney_numbers(const RankMetricLattice& L) {
    if (!L.has_mobius()) throw InvalidParameter("Moebius values have not been computed");
    WhitneyVector w;
    for (std::size_t k = 0; k <= L.rank(); ++k) {
        w.first_kind.push_back(L.layer(k).mobius_sum());
        w.second_kind.push_back(BigCount(L.layer(k).size()));
    }
    return w;
}

/// Computes the Moebius values if needed, then the Whitney numbers.
inline WhitneyVector mobius_and_whitney(RankMetricLattice& L, unsigned threads = 1) {
    if (!L.has_mobius()) compute_mobius(L, threads);
    return whitney_numbers(L);
}

/// For every non-bottom element X: sum_{Y <= X} mu(Y) = 0. Returns the number of violations.
inline std::size_t mobius_identity_violations(const RankMetricLattice& L, unsigned threads = 1) {
    const std::size_t n = L.params().n;
    std::atomic<std::size_t> bad{0};
    for (std::size_t k = 1; k <= n; ++k) {
        const LatticeLayer& layer = L.layer(k);
        if (k == n) {
            BigInt s = 0;
            for (std::size_t d = 0; d <= n; ++d) s += L.layer(d).mobius_sum();
            if (layer.size() > 0 && s != 0) ++bad;
            continue;
        }
        std::vector<detail::CoefficientCache> caches(std::max(1U, threads), detail::CoefficientCache(L.tower().qm()));
        parallel_for(layer.size(), threads, [&](std::size_t x, unsigned w) {
            BigInt s = layer.mu(x);
            detail::for_each_lower(L, caches[w], k, x, [&](std::size_t d, std::size_t j) { s += L.layer(d).mu(j); });
            if (s != 0) ++bad;
        });
    }
    return bad;
}

struct LatticeSanity {
    std::size_t elements = 0;
    std::size_t atomistic_failures = 0;
    std::size_t pairs_sampled = 0;
    std::size_t semimodular_failures = 0;
    std::size_t join_closure_failures = 0;
    bool ok() const { return atomistic_failures == 0 && semimodular_failures == 0 && join_closure_failures == 0; }
    nlohmann::json to_json() const {
        return {{"elements", elements},
                {"atomistic_failures", atomistic_failures},
                {"pairs_sampled", pairs_sampled},
                {"semimodular_failures", semimodular_failures},
                {"join_closure_failures", join_closure_failures},
                {"ok", ok()}};
    }
};

/**
 * Atomisticity on every element (the join of the atoms below X is X), plus closure under
 * join and the semimodular inequality on `pairs` seeded random pairs.
 */
inline LatticeSanity check_geometric(const RankMetricLattice& L, std::size_t pairs, std::uint64_t seed) {
    LatticeSanity r;
    const FieldTower& t = L.tower();
    const GaloisField& F = t.ext();
    const std::size_t n = L.params().n;
    const Code Q = t.qm();
    const LatticeLayer& atoms = L.layer(1);
    for (std::size_t k = 0; k <= n; ++k) {
        const LatticeLayer& layer = L.layer(k);
        for (std::size_t x = 0; x < layer.size(); ++x) {
            ++r.elements;
            const Subspace X = layer.subspace(x, Q);
            EchelonBasis span(F, n);
            detail::for_each_projective_codeword(F, X.basis(), [&](std::span<const Code> w) {
                if (atoms.find(Subspace::span(Matrix::from_rows({{w.begin(), w.end()}}), F).basis().data)) span.insert(w);
                return span.dim() < X.dim();
            });
            if (span.dim() != X.dim()) ++r.atomistic_failures;
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> index;
    for (std::size_t k = 0; k <= n; ++k)
        for (std::size_t x = 0; x < L.layer(k).size(); ++x) index.emplace_back(k, x);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, index.size() - 1);
    for (std::size_t s = 0; s < pairs; ++s) {
        const auto [ka, xa] = index[pick(rng)];
        const auto [kb, xb] = index[pick(rng)];
        const Subspace A = L.layer(ka).subspace(xa, Q);
        const Subspace B = L.layer(kb).subspace(xb, Q);
        const Subspace J = lattice_join(L, A, B);
        const Subspace M = lattice_meet(L, A, B);
        ++r.pairs_sampled;
        if (!L.contains(J) || !L.contains(M)) ++r.join_closure_failures;
        if (J.dim() + M.dim() > A.dim() + B.dim()) ++r.semimodular_failures;
    }
    return r;
}

// ---------------------------------------------------------------- formulas

/// Whitney numbers of the first kind of the full subspace lattice of F_Q^n: (-1)^j Q^{C(j,2)} [n choose j]_Q.
inline BigInt subspace_lattice_whitney(unsigned n, unsigned j, const BigInt& Q) {
    BigInt v = ipow(Q, static_cast<unsigned>(choose2(j))) * gaussian_binomial(n, j, Q);
    return j % 2 == 0 ? v : BigInt(-v);
}

namespace detail {
inline BigInt sign(long long e) { return e % 2 == 0 ? BigInt(1) : BigInt(-1); }
}  // namespace detail

/**
 * The printed closed expression for w_j(2, n, 3; q), n in {4, 5, 6}, transcribed term by term.
 * It is evaluated as written; see verify_whitney for how it compares with the Moebius values.
 */
inline BigInt closed_formula_i2m3(unsigned n, unsigned j, std::uint64_t q) {
    if (n < 4 || n > 6) throw InvalidParameter("closed formula is stated for n in {4, 5, 6}");
    if (j < 1 || j > n) throw InvalidParameter("closed formula needs 1 <= j <= n");
    const BigInt Q(q);
    const BigInt Q3 = ipow(Q, 3);
    const long long J = j;
    if (n <= 5) {
        return gaussian_binomial(n, 3, Q) * gaussian_binomial(n - 1, J - 1, Q3) * (Q3 - Q) * (Q3 - Q * Q) *
               detail::sign(J - 1) * ipow(Q, static_cast<unsigned>(3 * choose2(J - 1)));
    }
    const BigInt Q6 = ipow(Q, 6);
    BigInt first = gaussian_binomial(6, 3, Q) * gaussian_binomial(5, J - 1, Q3) * (Q3 - Q) * (Q3 - Q * Q) *
                   detail::sign(J - 1) * ipow(Q, static_cast<unsigned>(choose2(J - 1)));
    BigInt second = 0;
    if (J >= 2)
        second = gaussian_binomial(4, J - 2, Q3) * (Q6 - Q) * (Q6 - ipow(Q, 2)) * (Q6 - ipow(Q, 4)) *
                 (Q6 - ipow(Q, 5)) * detail::sign(J - 2) * ipow(Q, static_cast<unsigned>(3 * choose2(J - 2)));
    return first + second;
}

/**
 * w_j(i, n, m; q) = sum_{s=1}^{ij} [n s]_q sum_{t=1}^{s} w_j(i, t, m; q) [s t]_q q^{C(s-t,2)} (-1)^{s-t}.
 * `base` must hold w_j(i, t, m; q) for 1 <= t <= ij. Only defined here for n > ij, where it is
 * not circular.
 */
inline BigInt whitney_recursion(unsigned i, unsigned n, unsigned m, std::uint64_t q, unsigned j,
                                const std::map<unsigned, BigInt>& base) {
    (void)m;
    const unsigned top = i * j;
    if (j < 1) throw InvalidParameter("recursion needs j >= 1");
    if (n <= top) throw InvalidParameter("recursion is used only for n > ij");
    const BigInt Q(q);
    BigInt total = 0;
    for (unsigned s = 1; s <= top; ++s) {
        BigInt inner = 0;
        for (unsigned t = 1; t <= s; ++t) {
            auto it = base.find(t);
            if (it == base.end()) throw InvalidParameter("missing base value w_j(i," + std::to_string(t) + ",m;q)");
            inner += it->second * gaussian_binomial(s, t, Q) * ipow(Q, static_cast<unsigned>(choose2(s - t))) *
                     detail::sign(static_cast<long long>(s) - t);
        }
        total += gaussian_binomial(n, s, Q) * inner;
    }
    return total;
}

// ---------------------------------------------------------------- cache file

inline constexpr const char* kLatticeCacheMagic = "rmlkit-lattice";
inline constexpr int kLatticeCacheVersion = 1;

inline std::string lattice_cache_name(const LatticeParams& p) {
    return "lattice_i" + std::to_string(p.i) + "_n" + std::to_string(p.n) + "_m" + std::to_string(p.m) + "_q" +
           std::to_string(p.q) + ".txt";
}

/// Header, tower JSON, then per layer "layer d count" followed by "codes... : mu" lines.
inline void save_lattice(const RankMetricLattice& L, const std::filesystem::path& file) {
    std::ofstream os(file);
    if (!os) throw FormatError("cannot write lattice cache " + file.string());
    const auto& p = L.params();
    os << kLatticeCacheMagic << " " << kLatticeCacheVersion << "\n";
    os << "params " << p.i << " " << p.n << " " << p.m << " " << p.q << "\n";
    os << "tower " << L.tower().to_json().dump() << "\n";
    os << "mobius " << (L.has_mobius() ? 1 : 0) << "\n";
    for (std::size_t k = 0; k <= p.n; ++k) {
        const LatticeLayer& layer = L.layer(k);
        os << "layer " << k << " " << layer.size() << "\n";
        for (std::size_t x = 0; x < layer.size(); ++x) {
            auto e = layer.element(x);
            for (std::size_t c = 0; c < e.size(); ++c) os << (c ? " " : "") << e[c];
            if (L.has_mobius()) os << " : " << layer.mu(x).str();
            os << "\n";
        }
    }
    os << "end\n";
    if (!os) throw FormatError("failed writing lattice cache " + file.string());
}

inline RankMetricLattice load_lattice(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw FormatError("cannot read lattice cache " + file.string());
    std::string word;
    int version = 0;
    if (!(is >> word >> version) || word != kLatticeCacheMagic) throw FormatError("not a lattice cache file");
    if (version != kLatticeCacheVersion) throw FormatError("unsupported lattice cache version " + std::to_string(version));
    LatticeParams p;
    if (!(is >> word >> p.i >> p.n >> p.m >> p.q) || word != "params") throw FormatError("bad params line");
    std::string tower_json;
    if (!(is >> word) || word != "tower") throw FormatError("bad tower line");
    std::getline(is, tower_json);
    auto tower = FieldTower::from_json(nlohmann::json::parse(tower_json));
    int has_mu = 0;
    if (!(is >> word >> has_mu) || word != "mobius") throw FormatError("bad mobius line");
    RankMetricLattice L(p, tower);
    bool big = false;
    std::vector<std::vector<BigInt>> mus(p.n + 1);
    for (std::size_t k = 0; k <= p.n; ++k) {
        std::size_t d = 0, count = 0;
        if (!(is >> word >> d >> count) || word != "layer" || d != k) throw FormatError("bad layer header");
        LatticeLayer& layer = L.layer_mut(k);
        std::vector<Code> row(layer.stride());
        for (std::size_t x = 0; x < count; ++x) {
            for (auto& c : row)
                if (!(is >> c)) throw FormatError("truncated lattice cache");
            layer.append(row);
            if (has_mu) {
                std::string colon, val;
                if (!(is >> colon >> val) || colon != ":") throw FormatError("missing mobius value");
                mus[k].emplace_back(val);
                if (val.size() > 18) big = true;
            }
        }
        layer.build_index();
    }
    if (!(is >> word) || word != "end") throw FormatError("lattice cache has no end marker");
    if (has_mu)
        for (std::size_t k = 0; k <= p.n; ++k) {
            if (big) {
                L.layer_mut(k).set_mobius_big(std::move(mus[k]));
            } else {
                std::vector<std::int64_t> v;
                for (const auto& b : mus[k]) v.push_back(static_cast<std::int64_t>(b));
                L.layer_mut(k).set_mobius_small(std::move(v));
            }
        }
    return L;
}

/// Loads params' lattice from `dir` when cached there, otherwise builds it, computes mu and saves it.
inline RankMetricLattice cached_lattice(const LatticeParams& p, const std::optional<std::filesystem::path>& dir,
                                        const BuildOptions& opt = {}) {
    if (dir) {
        const auto file = *dir / lattice_cache_name(p);
        if (std::filesystem::exists(file)) {
            RankMetricLattice L = load_lattice(file);
            if (!(L.params() == p)) throw FormatError("cache file parameters do not match");
            if (!L.has_mobius()) compute_mobius(L, opt.threads);
            return L;
        }
    }
    RankMetricLattice L = build_lattice(p, opt);
    compute_mobius(L, opt.threads);
    if (dir) {
        std::filesystem::create_directories(*dir);
        save_lattice(L, *dir / lattice_cache_name(p));
    }
    return L;
}

// ---------------------------------------------------------------- verification

struct VerificationRecord {
    LatticeParams params;
    unsigned j = 0;
    BigInt brute_force = 0;
    std::optional<BigInt> recursion;
    std::optional<BigInt> closed_formula;
    std::optional<BigInt> subspace_lattice_formula;
    std::map<unsigned, BigInt> recursion_base;
    std::vector<std::string> agreements;
    std::vector<std::string> discrepancies;
    std::vector<std::string> notes;

    bool mismatch() const { return !discrepancies.empty(); }

    nlohmann::json to_json() const {
        auto opt = [](const std::optional<BigInt>& v) -> nlohmann::json {
            return v ? nlohmann::json(v->str()) : nlohmann::json(nullptr);
        };
        nlohmann::json base = nlohmann::json::object();
        for (const auto& [t, v] : recursion_base) base[std::to_string(t)] = v.str();
        return {{"params", params.to_json()},
                {"j", j},
                {"brute_force", brute_force.str()},
                {"recursion", opt(recursion)},
                {"recursion_base", base},
                {"closed_formula", opt(closed_formula)},
                {"subspace_lattice_formula", opt(subspace_lattice_formula)},
                {"agreements", agreements},
                {"discrepancies", discrepancies},
                {"notes", notes},
                {"mismatch", mismatch()}};
    }
};

struct VerifyOptions {
    BuildOptions build;
    std::optional<std::filesystem::path> cache_dir;
    bool subspace_lattice = true;
    bool closed_formula = true;
    bool recursion = true;
};

/**
 * Brute force is ground truth; every applicable formula is evaluated independently and
 * compared. Nothing is adjusted to agree.
 */
inline VerificationRecord verify_whitney(const RankMetricLattice& L, unsigned j, const VerifyOptions& opt = {}) {
    const LatticeParams& p = L.params();
    if (j > p.n) throw InvalidParameter("j exceeds the lattice rank");
    VerificationRecord rec;
    rec.params = p;
    rec.j = j;
    rec.brute_force = L.layer(j).mobius_sum();
    auto compare = [&](const std::string& name, const BigInt& v) {
        const std::string line = name + " = " + v.str() + ", brute_force = " + rec.brute_force.str();
        (v == rec.brute_force ? rec.agreements : rec.discrepancies).push_back(line);
    };
    if (opt.subspace_lattice && p.i >= std::min(p.n, p.m)) {
        rec.subspace_lattice_formula = subspace_lattice_whitney(p.n, j, ipow(BigInt(p.q), p.m));
        compare("subspace_lattice_formula", *rec.subspace_lattice_formula);
    }
    if (opt.closed_formula && p.i == 2 && p.m == 3 && p.n >= 4 && p.n <= 6 && j >= 1) {
        rec.closed_formula = closed_formula_i2m3(p.n, j, p.q);
        compare("closed_formula", *rec.closed_formula);
    }
    if (opt.recursion && j >= 1 && p.n > p.i * j) {
        for (unsigned t = 1; t <= p.i * j; ++t) {
            LatticeParams bp = p;
            bp.n = t;
            if (bp.i > t) bp.i = t;
            // L_i(t, m; q) with i >= t is the full lattice; the effective i is min(i, t)
            RankMetricLattice B = cached_lattice(bp, opt.cache_dir, opt.build);
            rec.recursion_base[t] = j <= t ? B.layer(j).mobius_sum() : BigInt(0);
        }
        rec.recursion = whitney_recursion(p.i, p.n, p.m, p.q, j, rec.recursion_base);
        compare("recursion", *rec.recursion);
    } else if (opt.recursion && j >= 1) {
        rec.notes.push_back("recursion not applied: n <= ij");
    }
    return rec;
}

}  // namespace rmlkit

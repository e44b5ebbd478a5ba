#pragma once

/**
 * @file linalg.hpp
 * @brief Dense linear algebra over a GaloisField, canonical subspaces and their enumeration.
 */

#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bigcount.hpp"
#include "error.hpp"
#include "field.hpp"

namespace rmlkit {

/// Row-major matrix of field codes.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Code> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
    Matrix(std::size_t r, std::size_t c, std::vector<Code> d) : rows(r), cols(c), data(std::move(d)) {
        if (data.size() != r * c) throw DimensionMismatch("matrix entry count must equal rows*cols");
    }
    static Matrix from_rows(const std::vector<std::vector<Code>>& rs) {
        if (rs.empty()) return {};
        Matrix M(rs.size(), rs.front().size());
        for (std::size_t i = 0; i < rs.size(); ++i) {
            if (rs[i].size() != M.cols) throw DimensionMismatch("ragged rows");
            std::copy(rs[i].begin(), rs[i].end(), M.data.begin() + static_cast<std::ptrdiff_t>(i * M.cols));
        }
        return M;
    }
    static Matrix identity(std::size_t n) {
        Matrix M(n, n);
        for (std::size_t i = 0; i < n; ++i) M(i, i) = 1;
        return M;
    }

    Code& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    Code operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<Code> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const Code> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    void append_row(std::span<const Code> v) {
        if (rows == 0 && cols == 0) cols = v.size();
        if (v.size() != cols) throw DimensionMismatch("row length mismatch");
        data.insert(data.end(), v.begin(), v.end());
        ++rows;
    }

    bool operator==(const Matrix&) const = default;
};

/// Reduces M in place to reduced row echelon form and drops zero rows. Returns the rank.
inline std::size_t rref_in_place(Matrix& M, const GaloisField& F, std::vector<std::size_t>* pivots = nullptr) {
    std::size_t r = 0;
    if (pivots) pivots->clear();
    for (std::size_t c = 0; c < M.cols && r < M.rows; ++c) {
        std::size_t piv = r;
        while (piv < M.rows && M(piv, c) == 0) ++piv;
        if (piv == M.rows) continue;
        if (piv != r)
            for (std::size_t j = 0; j < M.cols; ++j) std::swap(M(r, j), M(piv, j));
        const Code inv = F.inv(M(r, c));
        if (inv != 1)
            for (std::size_t j = c; j < M.cols; ++j) M(r, j) = F.mul(M(r, j), inv);
        for (std::size_t i = 0; i < M.rows; ++i) {
            if (i == r) continue;
            const Code f = M(i, c);
            if (f == 0) continue;
            for (std::size_t j = c; j < M.cols; ++j)
                if (M(r, j) != 0) M(i, j) = F.sub(M(i, j), F.mul(f, M(r, j)));
        }
        if (pivots) pivots->push_back(c);
        ++r;
    }
    M.data.resize(r * M.cols);
    M.rows = r;
    return r;
}

inline Matrix rref(Matrix M, const GaloisField& F) {
    rref_in_place(M, F);
    return M;
}

inline std::size_t rank(Matrix M, const GaloisField& F) { return rref_in_place(M, F); }

inline Matrix multiply(const Matrix& A, const Matrix& B, const GaloisField& F) {
    if (A.cols != B.rows) throw DimensionMismatch("matrix product shape mismatch");
    Matrix C(A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            const Code a = A(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < B.cols; ++j)
                if (B(k, j) != 0) C(i, j) = F.add(C(i, j), F.mul(a, B(k, j)));
        }
    return C;
}

/// Row vector times matrix.
inline std::vector<Code> vec_mul(std::span<const Code> v, const Matrix& B, const GaloisField& F) {
    std::vector<Code> out(B.cols, 0);
    for (std::size_t k = 0; k < B.rows; ++k) {
        if (v[k] == 0) continue;
        for (std::size_t j = 0; j < B.cols; ++j)
            if (B(k, j) != 0) out[j] = F.add(out[j], F.mul(v[k], B(k, j)));
    }
    return out;
}

/**
 * Subspace of F^n stored by its RREF basis.
 *
 * `field_order` tags which field the entries live in (|F_q| or |F_{q^m}|).
 * Equality is equality of the RREF matrices.
 */
class Subspace {
   public:
    Subspace() = default;

    static Subspace span(Matrix gens, const GaloisField& F) {
        Subspace s;
        s.ambient_ = gens.cols;
        s.field_order_ = F.order();
        rref_in_place(gens, F, &s.pivots_);
        s.basis_ = std::move(gens);
        return s;
    }
    static Subspace zero(std::size_t n, const GaloisField& F) {
        Subspace s;
        s.ambient_ = n;
        s.field_order_ = F.order();
        s.basis_ = Matrix(0, n);
        return s;
    }
    static Subspace full(std::size_t n, const GaloisField& F) { return span(Matrix::identity(n), F); }
    /// Wraps a matrix already known to be in RREF (no zero rows).
    static Subspace from_rref(Matrix M, Code field_order) {
        Subspace s;
        s.ambient_ = M.cols;
        s.field_order_ = field_order;
        for (std::size_t r = 0; r < M.rows; ++r) {
            std::size_t c = 0;
            while (c < M.cols && M(r, c) == 0) ++c;
            s.pivots_.push_back(c);
        }
        s.basis_ = std::move(M);
        return s;
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.rows; }
    Code field_order() const { return field_order_; }
    const Matrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// Membership by reduction against the RREF pivots.
    bool contains(std::span<const Code> v, const GaloisField& F) const {
        if (v.size() != ambient_) throw DimensionMismatch("vector length differs from ambient dimension");
        std::vector<Code> w(v.begin(), v.end());
        for (std::size_t r = 0; r < basis_.rows; ++r) {
            const Code c = w[pivots_[r]];
            if (c == 0) continue;
            for (std::size_t j = 0; j < ambient_; ++j)
                if (basis_(r, j) != 0) w[j] = F.sub(w[j], F.mul(c, basis_(r, j)));
        }
        return std::all_of(w.begin(), w.end(), [](Code x) { return x == 0; });
    }

    bool contains(const Subspace& other, const GaloisField& F) const {
        for (std::size_t r = 0; r < other.dim(); ++r)
            if (!contains(other.basis().row(r), F)) return false;
        return true;
    }

    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && field_order_ == o.field_order_ && basis_ == o.basis_;
    }

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ULL ^ (ambient_ * 131 + basis_.rows);
        for (Code c : basis_.data) h = (h ^ c) * 1099511628211ULL;
        return h;
    }

   private:
    std::size_t ambient_ = 0;
    Code field_order_ = 0;
    Matrix basis_;
    std::vector<std::size_t> pivots_;
};

struct SubspaceHash {
    std::size_t operator()(const Subspace& s) const { return s.hash(); }
};

namespace detail {
inline void check_compatible(const Subspace& A, const Subspace& B, const GaloisField& F) {
    if (A.ambient_dim() != B.ambient_dim()) throw DimensionMismatch("subspaces have different ambient dimensions");
    if (A.field_order() != B.field_order() || A.field_order() != F.order())
        throw DimensionMismatch("subspaces live over different fields");
}
}  // namespace detail

inline Subspace join(const Subspace& A, const Subspace& B, const GaloisField& F) {
    detail::check_compatible(A, B, F);
    Matrix M(0, A.ambient_dim());
    for (std::size_t r = 0; r < A.dim(); ++r) M.append_row(A.basis().row(r));
    for (std::size_t r = 0; r < B.dim(); ++r) M.append_row(B.basis().row(r));
    return Subspace::span(std::move(M), F);
}

/// Intersection via the Zassenhaus block matrix [[A, A], [B, 0]].
inline Subspace meet(const Subspace& A, const Subspace& B, const GaloisField& F) {
    detail::check_compatible(A, B, F);
    const std::size_t n = A.ambient_dim();
    Matrix Z(A.dim() + B.dim(), 2 * n);
    for (std::size_t r = 0; r < A.dim(); ++r)
        for (std::size_t j = 0; j < n; ++j) Z(r, j) = Z(r, n + j) = A.basis()(r, j);
    for (std::size_t r = 0; r < B.dim(); ++r)
        for (std::size_t j = 0; j < n; ++j) Z(A.dim() + r, j) = B.basis()(r, j);
    rref_in_place(Z, F);
    Matrix I(0, n);
    for (std::size_t r = 0; r < Z.rows; ++r) {
        bool left_zero = true;
        for (std::size_t j = 0; j < n && left_zero; ++j) left_zero = Z(r, j) == 0;
        if (left_zero) I.append_row(std::span<const Code>(&Z.data[r * 2 * n + n], n));
    }
    return Subspace::span(std::move(I), F);
}

/// Contiguous block of enumeration indices inside one pivot profile.
struct Shard {
    std::size_t profile = 0;
    std::uint64_t begin = 0;
    std::uint64_t end = 0;
};

/**
 * Enumerates the k-dimensional subspaces of F^n, each exactly once, as RREF matrices.
 *
 * Order: pivot profiles in lexicographic order of their column sets, then the free
 * entries (row-major over non-pivot columns right of each pivot) as base-|F| digits,
 * first free entry most significant.
 */
class SubspaceEnumerator {
   public:
    SubspaceEnumerator(std::size_t n, std::size_t k, Code field_order) : n_(n), k_(k), Q_(field_order) {
        if (k > n) throw InvalidParameter("subspace dimension exceeds ambient dimension");
        std::vector<std::size_t> cols(k);
        for (std::size_t i = 0; i < k; ++i) cols[i] = i;
        while (true) {
            Profile pr;
            pr.pivots = cols;
            std::vector<bool> is_piv(n, false);
            for (auto c : cols) is_piv[c] = true;
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t c = cols[r] + 1; c < n; ++c)
                    if (!is_piv[c]) pr.free_slots.push_back(r * n + c);
            long double sz = 1;
            pr.size = 1;
            for (std::size_t i = 0; i < pr.free_slots.size(); ++i) {
                sz *= Q_;
                pr.size *= Q_;
            }
            if (sz > 9.2e18L) throw ResourceBudgetExceeded("subspace enumeration index space exceeds 64 bits");
            profiles_.push_back(std::move(pr));
            // next combination
            std::size_t i = k;
            while (i > 0 && cols[i - 1] == n - k + i - 1) --i;
            if (i == 0) break;
            ++cols[i - 1];
            for (std::size_t j = i; j < k; ++j) cols[j] = cols[j - 1] + 1;
        }
    }

    std::size_t ambient_dim() const { return n_; }
    std::size_t dim() const { return k_; }
    std::size_t profile_count() const { return profiles_.size(); }
    std::uint64_t profile_size(std::size_t p) const { return profiles_[p].size; }
    const std::vector<std::size_t>& profile_pivots(std::size_t p) const { return profiles_[p].pivots; }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (const auto& p : profiles_) t += p.size;
        return t;
    }

    /// Shards of at most `block` subspaces; deterministic for fixed (n, k, |F|, block).
    std::vector<Shard> shards(std::uint64_t block) const {
        if (block == 0) block = 1;
        std::vector<Shard> out;
        for (std::size_t p = 0; p < profiles_.size(); ++p)
            for (std::uint64_t b = 0; b < profiles_[p].size; b += block)
                out.push_back({p, b, std::min(profiles_[p].size, b + block)});
        return out;
    }

    /// Calls fn(const Matrix&) for each subspace in the shard.
    template <class Fn>
    void for_each_in(const Shard& s, Fn&& fn) const {
        const Profile& pr = profiles_[s.profile];
        Matrix M(k_, n_);
        for (std::size_t r = 0; r < k_; ++r) M(r, pr.pivots[r]) = 1;
        const std::size_t f = pr.free_slots.size();
        // decode begin, least significant digit = last free slot
        std::uint64_t t = s.begin;
        for (std::size_t i = f; i-- > 0;) {
            M.data[pr.free_slots[i]] = static_cast<Code>(t % Q_);
            t /= Q_;
        }
        for (std::uint64_t idx = s.begin; idx < s.end; ++idx) {
            fn(static_cast<const Matrix&>(M));
            for (std::size_t i = f; i-- > 0;) {
                Code& c = M.data[pr.free_slots[i]];
                if (++c < Q_) break;
                c = 0;
            }
        }
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t p = 0; p < profiles_.size(); ++p) for_each_in(Shard{p, 0, profiles_[p].size}, fn);
    }

    std::vector<Matrix> collect() const {
        std::vector<Matrix> out;
        for_each([&](const Matrix& M) { out.push_back(M); });
        return out;
    }

   private:
    struct Profile {
        std::vector<std::size_t> pivots;
        std::vector<std::size_t> free_slots;
        std::uint64_t size = 1;
    };
    std::size_t n_;
    std::size_t k_;
    Code Q_;
    std::vector<Profile> profiles_;
};

/// Calls fn(const Subspace&) for every k-dimensional subspace of F^n.
template <class Fn>
void enumerate_subspaces(std::size_t n, std::size_t k, const GaloisField& F, Fn&& fn) {
    SubspaceEnumerator(n, k, F.order()).for_each([&](const Matrix& M) { fn(Subspace::from_rref(M, F.order())); });
}

/// Text form: header "(ambient_dim, k, field_order)" then one line of codes per basis row.
inline std::string to_text(const Subspace& S) {
    std::ostringstream os;
    os << "(" << S.ambient_dim() << ", " << S.dim() << ", " << S.field_order() << ")\n";
    for (std::size_t r = 0; r < S.dim(); ++r) {
        for (std::size_t j = 0; j < S.ambient_dim(); ++j) os << (j ? " " : "") << S.basis()(r, j);
        os << "\n";
    }
    return os.str();
}

inline Subspace subspace_from_text(const std::string& text, const GaloisField& F) {
    std::istringstream is(text);
    char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    std::size_t n = 0, k = 0;
    Code order = 0;
    if (!(is >> c1 >> n >> c2 >> k >> c3 >> order >> c4) || c1 != '(' || c2 != ',' || c3 != ',' || c4 != ')')
        throw FormatError("bad subspace header");
    if (order != F.order()) throw FormatError("subspace field order does not match");
    Matrix M(k, n);
    for (auto& v : M.data) {
        if (!(is >> v) || v >= order) throw FormatError("bad subspace entry");
    }
    auto S = Subspace::span(M, F);
    if (S.dim() != k) throw FormatError("subspace rows are dependent");
    return S;
}

}  // namespace rmlkit

#pragma once

/**
 * @file geometry.hpp
 * @brief Linear sets in PG(1, q^m), hyperovals in PG(2, q) and the scattered/MRD bridge.
 */

#include <array>
#include <bit>
#include <map>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "codes.hpp"
#include "error.hpp"
#include "field.hpp"
#include "linalg.hpp"
#include "qpoly.hpp"

namespace rmlkit {

/// Homogeneous coordinates with the first nonzero entry equal to 1.
struct ProjectivePoint {
    std::vector<Code> coords;

    static ProjectivePoint normalized(const GaloisField& F, std::vector<Code> v) {
        std::size_t i = 0;
        while (i < v.size() && v[i] == 0) ++i;
        if (i == v.size()) throw InvalidParameter("the zero vector is not a projective point");
        const Code inv = F.inv(v[i]);
        for (auto& x : v) x = F.mul(x, inv);
        return {std::move(v)};
    }
    bool operator==(const ProjectivePoint&) const = default;
    auto operator<=>(const ProjectivePoint&) const = default;
};

struct LinearSetReport {
    unsigned rank = 0;
    /// (point, weight) sorted by point.
    std::vector<std::pair<ProjectivePoint, unsigned>> points;
    bool scattered = false;

    nlohmann::json to_json() const {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& [P, w] : points) pts.push_back({{"point", P.coords}, {"weight", w}});
        return {{"rank", rank}, {"points", pts}, {"scattered", scattered}};
    }
};

namespace detail {

/// Key of the PG(1, q^m) point of (a, b) != 0: b/a for a != 0, q^m for (0, 1).
inline Code pg1_key(const GaloisField& F, Code a, Code b) { return a == 0 ? F.order() : F.div(b, a); }

inline ProjectivePoint pg1_point(const GaloisField& F, Code key) {
    if (key == F.order()) return {{0, 1}};
    return {{1, key}};
}

/// Weight w with q^w - 1 == count.
inline unsigned weight_from_count(std::uint64_t count, Code q) {
    unsigned w = 0;
    std::uint64_t v = 1;
    while (v - 1 < count) {
        v *= q;
        ++w;
    }
    if (v - 1 != count) throw InvalidParameter("bucket size is not of the form q^w - 1");
    return w;
}

inline LinearSetReport report_from_buckets(const std::map<Code, std::uint64_t>& buckets, const FieldTower& t,
                                           unsigned rank) {
    LinearSetReport rep;
    rep.rank = rank;
    rep.scattered = true;
    for (const auto& [key, cnt] : buckets) {
        const unsigned w = weight_from_count(cnt, t.q());
        rep.points.emplace_back(pg1_point(t.ext(), key), w);
        if (w != 1) rep.scattered = false;
    }
    std::sort(rep.points.begin(), rep.points.end());
    return rep;
}

}  // namespace detail

/**
 * L_U for U the F_q-span of the rows of `U` (each row a vector of F_{q^m}^2).
 * Rows must be F_q-independent; dependent rows raise DependentBasis.
 */
inline LinearSetReport linear_set(const FieldTower& t, const Matrix& U) {
    if (U.cols != 2) throw DimensionMismatch("linear sets live in F_{q^m}^2");
    const unsigned m = t.m();
    const std::size_t r = U.rows;
    // independence over F_q via the 2m-column expansion
    Matrix X(r, 2 * m);
    std::vector<Code> c(m);
    for (std::size_t i = 0; i < r; ++i)
        for (unsigned j = 0; j < 2; ++j) {
            t.coordinates(U(i, j), c);
            for (unsigned s = 0; s < m; ++s) X(i, j * m + s) = c[s];
        }
    if (r > 0 && rank(X, t.base()) != r) throw DependentBasis("linear set generators are F_q-dependent");
    const GaloisField& F = t.ext();
    std::map<Code, std::uint64_t> buckets;
    std::vector<Code> coef(r, 0);
    while (true) {
        std::size_t i = 0;
        while (i < r && ++coef[i] == t.q()) coef[i++] = 0;
        if (i == r) break;
        Code a = 0, b = 0;
        for (std::size_t k = 0; k < r; ++k) {
            if (coef[k] == 0) continue;
            const Code e = t.embed(coef[k]);
            a = F.add(a, F.mul(e, U(k, 0)));
            b = F.add(b, F.mul(e, U(k, 1)));
        }
        ++buckets[detail::pg1_key(F, a, b)];
    }
    return detail::report_from_buckets(buckets, t, static_cast<unsigned>(r));
}

/// U_{f1,f2} = {(f1(x), f2(x)) : x in F_{q^m}} as an F_q-basis matrix (images of the polynomial basis).
inline Matrix pair_subspace_basis(const QPolynomial& f1, const QPolynomial& f2) {
    f1.check_same(f2);
    const auto& b = f1.tower().polynomial_basis();
    Matrix U(b.size(), 2);
    for (std::size_t i = 0; i < b.size(); ++i) {
        U(i, 0) = f1(b[i]);
        U(i, 1) = f2(b[i]);
    }
    return U;
}

/// True iff ker f1 and ker f2 meet only in 0, i.e. U_{f1,f2} has F_q-dimension m.
inline bool pair_is_nondegenerate(const QPolynomial& f1, const QPolynomial& f2) {
    f1.check_same(f2);
    for (Code x = 1; x < f1.tower().qm(); ++x)
        if (f1(x) == 0 && f2(x) == 0) return false;
    return true;
}

/// L_{U_{f1,f2}} is scattered. Raises DegenerateSubspace if dim U < m.
inline bool is_scattered_pair(const QPolynomial& f1, const QPolynomial& f2) {
    f1.check_same(f2);
    const FieldTower& t = f1.tower();
    const GaloisField& F = t.ext();
    std::unordered_map<Code, std::uint64_t> seen;
    bool scattered = true;
    for (Code x = 1; x < t.qm(); ++x) {
        const Code a = f1(x);
        const Code b = f2(x);
        if (a == 0 && b == 0) throw DegenerateSubspace("ker f1 and ker f2 intersect nontrivially");
        if (++seen[detail::pg1_key(F, a, b)] > t.q() - 1) scattered = false;
    }
    return scattered;
}

/// Outcome of one pair in the scattered/MRD biconditional.
struct PairVerdict {
    bool code_two_dimensional = false;
    bool degenerate = false;
    bool scattered = false;  ///< scattered of rank m; false when degenerate
    bool mrd = false;
    bool agrees() const { return !code_two_dimensional || scattered == mrd; }
};

inline PairVerdict scattered_mrd_verdict(const QPolynomial& f1, const QPolynomial& f2) {
    PairVerdict v;
    const PolyCode C = PolyCode::univariate(f1.tower_ptr(), {f1, f2});
    v.code_two_dimensional = C.k() == 2;
    if (!v.code_two_dimensional) return v;
    v.degenerate = !pair_is_nondegenerate(f1, f2);
    v.scattered = !v.degenerate && is_scattered_pair(f1, f2);
    v.mrd = is_mrd(C);
    return v;
}

struct ScatteredMrdSweep {
    std::uint64_t q = 0;
    unsigned m = 0;
    std::string mode;
    std::uint64_t tested = 0;       ///< pairs spanning a 2-dimensional code
    std::uint64_t skipped = 0;      ///< pairs spanning fewer than 2 dimensions
    std::uint64_t degenerate = 0;
    std::uint64_t mrd = 0;
    std::uint64_t violations = 0;

    void add(const PairVerdict& v) {
        if (!v.code_two_dimensional) {
            ++skipped;
            return;
        }
        ++tested;
        degenerate += v.degenerate;
        mrd += v.mrd;
        violations += !v.agrees();
    }
    nlohmann::json to_json() const {
        return {{"q", q},           {"m", m},     {"mode", mode},          {"tested", tested},
                {"skipped", skipped}, {"mrd", mrd}, {"degenerate", degenerate}, {"violations", violations}};
    }
};

namespace detail {
inline QPolynomial poly_from_index(const TowerPtr& t, std::uint64_t idx) {
    std::vector<Code> c(t->m());
    for (auto& x : c) {
        x = static_cast<Code>(idx % t->qm());
        idx /= t->qm();
    }
    return {t, std::move(c)};
}
}  // namespace detail

/// Every ordered pair (f1, f2) with index(f1) < index(f2). Budget: (q^{m^2})^2 / 2 <= 5e5.
inline ScatteredMrdSweep scattered_mrd_exhaustive(const TowerPtr& t) {
    long double total = 1;
    for (unsigned i = 0; i < t->m(); ++i) total *= t->qm();
    if (total * total / 2 > 5e5L) throw ResourceBudgetExceeded("exhaustive pair sweep exceeds 5e5 pairs");
    const auto N = static_cast<std::uint64_t>(total);
    ScatteredMrdSweep out{t->q(), t->m(), "exhaustive"};
    for (std::uint64_t a = 0; a < N; ++a) {
        const QPolynomial f1 = detail::poly_from_index(t, a);
        for (std::uint64_t b = a + 1; b < N; ++b) out.add(scattered_mrd_verdict(f1, detail::poly_from_index(t, b)));
    }
    return out;
}

/// Random invertible q-polynomial (rejection sampling).
inline QPolynomial random_invertible(const TowerPtr& t, std::mt19937_64& rng) {
    std::uniform_int_distribution<Code> coef(0, t->qm() - 1);
    while (true) {
        std::vector<Code> c(t->m());
        for (auto& x : c) x = coef(rng);
        QPolynomial g(t, std::move(c));
        if (is_invertible(g)) return g;
    }
}

/**
 * Seeded sample of pairs. Even-indexed samples are uniform random pairs; odd-indexed ones
 * are a random F_{q^m}-basis of a Gabidulin code composed on the right with a random
 * invertible map, so that MRD pairs are well represented at small q.
 */
inline ScatteredMrdSweep scattered_mrd_random(const TowerPtr& t, std::uint64_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Code> coef(0, t->qm() - 1);
    ScatteredMrdSweep out{t->q(), t->m(), "random"};
    const GaloisField& F = t->ext();
    auto rand_poly = [&] {
        std::vector<Code> c(t->m());
        for (auto& x : c) x = coef(rng);
        return QPolynomial(t, std::move(c));
    };
    for (std::uint64_t s = 0; s < samples; ++s) {
        if (s % 2 == 0) {
            out.add(scattered_mrd_verdict(rand_poly(), rand_poly()));
            continue;
        }
        const QPolynomial g = random_invertible(t, rng);
        const QPolynomial e0 = compose(QPolynomial::identity(t), g);
        const QPolynomial e1 = compose(QPolynomial::monomial(t, 1, 1), g);
        Code a, b, c, d;
        do {
            a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng);
        } while (F.sub(F.mul(a, d), F.mul(b, c)) == 0);
        out.add(scattered_mrd_verdict(e0.scaled(a) + e1.scaled(b), e0.scaled(c) + e1.scaled(d)));
    }
    return out;
}

// ---------------------------------------------------------------- PG(2, q)

using PlanePoint = std::array<Code, 3>;

inline PlanePoint normalize_plane_point(const GaloisField& F, PlanePoint v) {
    std::size_t i = 0;
    while (i < 3 && v[i] == 0) ++i;
    if (i == 3) throw InvalidParameter("the zero vector is not a projective point");
    const Code inv = F.inv(v[i]);
    for (auto& x : v) x = F.mul(x, inv);
    return v;
}

inline Code det3(const GaloisField& F, const PlanePoint& a, const PlanePoint& b, const PlanePoint& c) {
    auto m = [&](Code x, Code y) { return F.mul(x, y); };
    Code pos = F.add(F.add(m(a[0], m(b[1], c[2])), m(a[1], m(b[2], c[0]))), m(a[2], m(b[0], c[1])));
    Code neg = F.add(F.add(m(a[2], m(b[1], c[0])), m(a[0], m(b[2], c[1]))), m(a[1], m(b[0], c[2])));
    return F.sub(pos, neg);
}

/// Normalized line through two distinct points (cross product).
inline PlanePoint line_through(const GaloisField& F, const PlanePoint& a, const PlanePoint& b) {
    auto m = [&](Code x, Code y) { return F.mul(x, y); };
    PlanePoint l{F.sub(m(a[1], b[2]), m(a[2], b[1])), F.sub(m(a[2], b[0]), m(a[0], b[2])),
                 F.sub(m(a[0], b[1]), m(a[1], b[0]))};
    return normalize_plane_point(F, l);
}

/// |points| = q + 2 and no three collinear: the C(n,2) pairs must span C(n,2) distinct lines.
inline bool is_hyperoval(const GaloisField& F, const std::vector<PlanePoint>& points) {
    const std::size_t q = F.order();
    if (points.size() != q + 2) return false;
    thread_local std::vector<std::uint8_t> mark;
    thread_local std::vector<std::size_t> touched;
    mark.assign(std::max(mark.size(), q * q * q), 0);
    touched.clear();
    auto key = [&](const PlanePoint& v) { return (static_cast<std::size_t>(v[0]) * q + v[1]) * q + v[2]; };
    auto release = [&] {
        for (auto k : touched) mark[k] = 0;
    };
    std::vector<PlanePoint> P;
    P.reserve(points.size());
    for (const auto& p : points) {
        const PlanePoint n = normalize_plane_point(F, p);
        const auto k = key(n);
        if (mark[k]) {
            release();
            return false;
        }
        mark[k] = 1;
        touched.push_back(k);
        P.push_back(n);
    }
    release();
    touched.clear();
    for (std::size_t i = 0; i < P.size(); ++i)
        for (std::size_t j = i + 1; j < P.size(); ++j) {
            const auto k = key(line_through(F, P[i], P[j]));
            if (mark[k]) {
                release();
                return false;
            }
            mark[k] = 1;
            touched.push_back(k);
        }
    release();
    return true;
}

/// Every line of PG(2, q) meets the set in 0 or 2 points.
inline bool meets_every_line_in_0_or_2(const GaloisField& F, const std::vector<PlanePoint>& points) {
    const Code q = F.order();
    std::vector<PlanePoint> lines;
    lines.push_back({0, 0, 1});
    for (Code b = 0; b < q; ++b) lines.push_back({0, 1, b});
    for (Code b = 0; b < q; ++b)
        for (Code c = 0; c < q; ++c) lines.push_back({1, b, c});
    for (const auto& l : lines) {
        unsigned cnt = 0;
        for (const auto& p : points) {
            const Code v = F.add(F.add(F.mul(l[0], p[0]), F.mul(l[1], p[1])), F.mul(l[2], p[2]));
            cnt += v == 0;
        }
        if (cnt != 0 && cnt != 2) return false;
    }
    return true;
}

/**
 * H_f = {(x, f(x), 1)} u {(1,0,0), (0,1,0)} for f an additive map of F_{2^h}, given as a
 * q-polynomial over the tower F_2 < F_{2^h} (so "x^q" means squaring).
 */
inline std::vector<PlanePoint> hyperoval_from_function(const QPolynomial& f) {
    const FieldTower& t = f.tower();
    if (t.p() != 2 || t.h() != 1) throw InvalidParameter("additive maps of F_{2^h} use the tower F_2 < F_{2^h}");
    std::vector<PlanePoint> pts;
    for (Code x = 0; x < t.qm(); ++x) pts.push_back({x, f(x), 1});
    pts.push_back({1, 0, 0});
    pts.push_back({0, 1, 0});
    return pts;
}

struct HyperovalClassification {
    Code q = 0;
    unsigned h = 0;
    std::uint64_t tested = 0;
    std::vector<std::vector<Code>> found;      ///< coefficient vectors (a_0, ..., a_{h-1}) of sum a_i x^{2^i}
    std::vector<std::vector<Code>> predicted;  ///< a x^{2^j}, a != 0, 1 <= j < h, gcd(j, h) = 1
    bool prediction_match = false;
    bool lines_0_or_2 = true;  ///< every found hyperoval meets every line in 0 or 2 points

    nlohmann::json to_json() const {
        return {{"q", q},
                {"tested", tested},
                {"hyperovals_found", found},
                {"predicted", predicted},
                {"prediction_match", prediction_match},
                {"lines_0_or_2", lines_0_or_2}};
    }
};

/// Sweeps all q^h additive maps of F_q, q = 2^h, h <= 5.
inline HyperovalClassification classify_translation_hyperovals(Code q) {
    auto pp = prime_power(q);
    if (!pp || pp->first != 2) throw InvalidParameter("translation hyperovals need q = 2^h");
    const unsigned h = pp->second;
    if (h > 5) throw ResourceBudgetExceeded("hyperoval sweep supports h <= 5");
    auto t = FieldTower::make(2, 1, h);
    const GaloisField& F = t->ext();
    HyperovalClassification rep;
    rep.q = q;
    rep.h = h;
    std::uint64_t total = 1;
    for (unsigned i = 0; i < h; ++i) total *= q;
    // frob[i][j] = b_i^{2^j} on the polynomial basis
    std::vector<std::vector<Code>> frob(h, std::vector<Code>(h));
    for (unsigned i = 0; i < h; ++i)
        for (unsigned j = 0; j < h; ++j) frob[i][j] = t->frobenius(t->polynomial_basis()[i], j);
    std::vector<Code> images(h);
    std::vector<PlanePoint> pts(q + 2);
    pts[q] = {1, 0, 0};
    pts[q + 1] = {0, 1, 0};
    std::vector<Code> c(h);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t v = idx;
        for (auto& x : c) {
            x = static_cast<Code>(v % q);
            v /= q;
        }
        ++rep.tested;
        for (unsigned i = 0; i < h; ++i) {
            Code y = 0;
            for (unsigned j = 0; j < h; ++j)
                if (c[j] != 0) y ^= F.mul(c[j], frob[i][j]);
            images[i] = y;
        }
        // a non-injective f puts two affine points on a line through (1,0,0)
        if (t->fq_rank(images) != h) continue;
        // x has digits over the polynomial basis, so f(x) is the XOR of the matching images
        pts[0] = {0, 0, 1};
        for (Code x = 1; x < q; ++x) {
            const unsigned low = static_cast<unsigned>(std::countr_zero(x));
            pts[x] = {x, pts[x & (x - 1)][1] ^ images[low], 1};
        }
        if (!is_hyperoval(F, pts)) continue;
        rep.found.push_back(c);
        if (!meets_every_line_in_0_or_2(F, pts)) rep.lines_0_or_2 = false;
    }
    for (unsigned j = 1; j < h; ++j) {
        if (std::gcd(j, h) != 1) continue;
        for (Code a = 1; a < q; ++a) {
            std::vector<Code> c(h, 0);
            c[j] = a;
            rep.predicted.push_back(c);
        }
    }
    std::sort(rep.found.begin(), rep.found.end());
    std::sort(rep.predicted.begin(), rep.predicted.end());
    rep.prediction_match = rep.found == rep.predicted;
    return rep;
}

}  // namespace rmlkit

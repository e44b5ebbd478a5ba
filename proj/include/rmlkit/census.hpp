#pragma once

/**
 * @file census.hpp
 * @brief Exhaustive and formula counts of MRD and one-weight codes, and their densities.
 */

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bigcount.hpp"
#include "codes.hpp"
#include "error.hpp"
#include "field.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

namespace rmlkit {

struct Density {
    Rational exact = 0;
    nlohmann::json to_json() const { return {{"exact", to_fraction(exact)}, {"decimal", to_decimal(exact)}}; }
};

struct ShardTrace {
    std::uint64_t shard_block = 0;
    std::size_t shards_total = 0;
    std::size_t shards_done = 0;
    std::size_t shards_resumed = 0;
    unsigned threads = 1;
    bool complete = true;
    nlohmann::json to_json() const {
        return {{"shard_block", shard_block}, {"shards_total", shards_total}, {"shards_done", shards_done},
                {"shards_resumed", shards_resumed}, {"threads", threads}, {"complete", complete}};
    }
};

struct CensusResult {
    std::uint64_t q = 0;
    unsigned m = 0, n = 0, k = 0, d = 0;
    std::optional<BigCount> exhaustive_count;
    std::optional<BigCount> formula_value;
    std::map<std::string, BigCount> formulas;  ///< every formula evaluated, by name
    std::optional<Density> density;
    std::string method;
    double elapsed_seconds = 0;
    std::uint64_t subspaces = 0;
    ShardTrace trace;
    /// idealizer algebra dimension -> number of codes
    std::map<unsigned, std::uint64_t> idealizer_classes;
    std::optional<bool> weight_distributions_identical;

    /// Both counts present and equal, and all named formulas agree with each other.
    bool match() const {
        if (exhaustive_count && formula_value && *exhaustive_count != *formula_value) return false;
        for (const auto& [name, v] : formulas) {
            if (formula_value && v != *formula_value) return false;
            if (exhaustive_count && v != *exhaustive_count) return false;
        }
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["parameters"] = {{"q", q}, {"m", m}, {"n", n}, {"k", k}, {"d", d}};
        j["exhaustive_count"] = exhaustive_count ? nlohmann::json(exhaustive_count->str()) : nlohmann::json(nullptr);
        j["formula_value"] = formula_value ? nlohmann::json(formula_value->str()) : nlohmann::json(nullptr);
        nlohmann::json f = nlohmann::json::object();
        for (const auto& [name, v] : formulas) f[name] = v.str();
        j["formulas"] = f;
        j["match"] = match();
        j["density"] = density ? density->to_json() : nlohmann::json(nullptr);
        j["method"] = method;
        j["elapsed_seconds"] = elapsed_seconds;
        j["subspaces"] = subspaces;
        j["shard_trace"] = trace.to_json();
        if (!idealizer_classes.empty()) {
            nlohmann::json c = nlohmann::json::object();
            for (const auto& [dim, cnt] : idealizer_classes)
                c[std::to_string(dim)] = {{"codes", cnt}, {"idealizer_units", (ipow(BigInt(q), dim) - 1).str()}};
            j["idealizer_classes"] = c;
        }
        if (weight_distributions_identical) j["weight_distributions_identical"] = *weight_distributions_identical;
        return j;
    }
};

inline Density make_density(const BigCount& count, unsigned n, unsigned k, std::uint64_t q, unsigned m) {
    return {Rational(count, gaussian_binomial(n, k, ipow(BigInt(q), m)))};
}

// ---------------------------------------------------------------- formulas

/// (phi(m)/2) |GL_m(2)| / (2^m - 1).
inline BigCount mrd_count_q2_family(unsigned m) {
    if (m < 2 || m > 8) throw UnsupportedShape("q = 2 family is evaluated for 2 <= m <= 8");
    Rational v = Rational(BigInt(euler_phi(m)), 2) * Rational(gl_order(m, 2), ipow(2, m) - 1);
    if (boost::multiprecision::denominator(v) != 1) throw ConstructionFailed("q = 2 family value is not an integer");
    return boost::multiprecision::numerator(v);
}

/// M(q) = (1/2) q^7 (q^3-1)(q^2-1)(q-1)(q^3-q^2-q-1).
inline BigCount mrd_count_m4_family(std::uint64_t q) {
    if (!prime_power(q) || q > 16) throw UnsupportedShape("m = 4 family is evaluated for prime powers q <= 16");
    const BigInt Q(q);
    BigInt v = ipow(Q, 7) * (ipow(Q, 3) - 1) * (Q * Q - 1) * (Q - 1) * (ipow(Q, 3) - Q * Q - Q - 1);
    if (v % 2 != 0) throw ConstructionFailed("M(q) is not an integer");
    return v / 2;
}

/// Orbit-stabilizer sum over the two linear-equivalence types at m = 4:
/// |GL_4(q)|/(q^4-1) + (q(q-1)/2 - 1) |GL_4(q)|/(q^2-1).
inline BigCount mrd_count_m4_orbit_stabilizer(std::uint64_t q) {
    const BigInt Q(q);
    const BigInt gl = gl_order(4, Q);
    return gl / (ipow(Q, 4) - 1) + (Q * (Q - 1) / 2 - 1) * gl / (Q * Q - 1);
}

/// Named formula values for 2-dimensional MRD codes in F_{q^m}^m.
inline std::map<std::string, BigCount> mrd_count_formulas(std::uint64_t q, unsigned m) {
    std::map<std::string, BigCount> out;
    if (q == 2) out["q2_family"] = mrd_count_q2_family(m);
    if (m == 4) {
        out["m4_family"] = mrd_count_m4_family(q);
        out["m4_orbit_stabilizer"] = mrd_count_m4_orbit_stabilizer(q);
    }
    if (out.empty()) throw UnsupportedShape("no MRD count formula for q = " + std::to_string(q) + ", m = " + std::to_string(m));
    return out;
}

/// |GL_{mk}(q)| / prod_{i<k} (q^{mk} - q^{mi}).
inline BigCount one_weight_count_formula(unsigned m, unsigned k, std::uint64_t q) {
    if (m < 1 || k < 1) throw InvalidParameter("one-weight formula needs m, k >= 1");
    const BigInt Q(q);
    BigInt den = 1;
    for (unsigned i = 0; i < k; ++i) den *= ipow(Q, m * k) - ipow(Q, m * i);
    return gl_order(m * k, Q) / den;
}

// ---------------------------------------------------------------- exhaustive MRD census

struct CensusOptions {
    unsigned threads = 1;
    std::uint64_t shard_block = 16384;
    std::optional<std::filesystem::path> checkpoint_dir;
    std::size_t checkpoint_every = 16;
    bool heavy = false;
    /// Stop after this many newly processed shards (testing resume); 0 means run to completion.
    std::size_t stop_after_shards = 0;
    bool idealizer_fingerprint = true;
};

/// Rank checks above this need the heavy flag.
inline constexpr double kLightCensusWork = 2e8;
/// Absolute ceiling on rank checks even with the heavy flag.
inline constexpr double kHeavyCensusWork = 1e11;

namespace detail {

struct ShardResult {
    std::uint64_t count = 0;
    std::uint64_t subspaces = 0;
    std::map<unsigned, std::uint64_t> classes;
};

inline nlohmann::json shard_result_json(const ShardResult& r) {
    nlohmann::json c = nlohmann::json::object();
    for (const auto& [d, n] : r.classes) c[std::to_string(d)] = n;
    return {{"count", r.count}, {"subspaces", r.subspaces}, {"classes", c}};
}

inline ShardResult shard_result_from_json(const nlohmann::json& j) {
    ShardResult r;
    r.count = j.at("count").get<std::uint64_t>();
    r.subspaces = j.at("subspaces").get<std::uint64_t>();
    for (const auto& [d, n] : j.at("classes").items()) r.classes[static_cast<unsigned>(std::stoul(d))] = n.get<std::uint64_t>();
    return r;
}

class CensusCheckpoint {
   public:
    CensusCheckpoint(std::filesystem::path file, nlohmann::json key) : file_(std::move(file)), key_(std::move(key)) {}

    std::map<std::size_t, ShardResult> load() const {
        std::map<std::size_t, ShardResult> done;
        if (!std::filesystem::exists(file_)) return done;
        std::ifstream is(file_);
        nlohmann::json j;
        try {
            is >> j;
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("unreadable checkpoint " + file_.string() + ": " + e.what());
        }
        if (j.value("format", "") != "rmlkit-census-checkpoint" || j.value("version", 0) != 1)
            throw FormatError("not a census checkpoint: " + file_.string());
        if (j.at("key") != key_) throw FormatError("checkpoint parameters do not match this run: " + file_.string());
        for (const auto& [idx, r] : j.at("done").items()) done[std::stoul(idx)] = shard_result_from_json(r);
        return done;
    }

    void save(const std::map<std::size_t, ShardResult>& done) const {
        nlohmann::json d = nlohmann::json::object();
        for (const auto& [idx, r] : done) d[std::to_string(idx)] = shard_result_json(r);
        nlohmann::json j = {{"format", "rmlkit-census-checkpoint"}, {"version", 1}, {"key", key_}, {"done", d}};
        const auto tmp = file_.string() + ".tmp";
        {
            std::ofstream os(tmp);
            os << j.dump() << "\n";
            if (!os) throw FormatError("cannot write checkpoint " + tmp);
        }
        std::filesystem::rename(tmp, file_);
    }

   private:
    std::filesystem::path file_;
    nlohmann::json key_;
};

}  // namespace detail

/// Work estimate: subspaces times projective codewords per subspace.
inline double mrd_census_work(std::uint64_t q, unsigned m, unsigned k) {
    const BigInt Q = ipow(BigInt(q), m);
    const BigCount subs = gaussian_binomial(m, k, Q);
    const BigCount words = (ipow(Q, k) - 1) / (Q - 1);
    return static_cast<double>(subs) * static_cast<double>(words);
}

/**
 * Counts the k-dimensional MRD codes in F_{q^m}^m by enumerating every subspace
 * (sharded by pivot profile), with early exit on the first low-rank codeword.
 */
inline CensusResult count_mrd_exhaustive(std::uint64_t q, unsigned m, const CensusOptions& opt = {}, unsigned k = 2) {
    const auto start = std::chrono::steady_clock::now();
    if (k < 1 || k > m) throw InvalidParameter("census needs 1 <= k <= m");
    auto tower = FieldTower::for_q(q, m);
    const double work = mrd_census_work(q, m, k);
    if (work > kHeavyCensusWork) throw ResourceBudgetExceeded("census work exceeds the absolute budget");
    if (work > kLightCensusWork && !opt.heavy)
        throw ResourceBudgetExceeded("census needs about " + std::to_string(static_cast<std::uint64_t>(work)) +
                                     " rank checks; rerun with the heavy flag");
    const unsigned n = m;
    const unsigned d = n - k + 1;
    SubspaceEnumerator en(n, k, tower->qm());
    const auto shards = en.shards(opt.shard_block);

    std::optional<detail::CensusCheckpoint> ckpt;
    std::map<std::size_t, detail::ShardResult> done;
    if (opt.checkpoint_dir) {
        std::filesystem::create_directories(*opt.checkpoint_dir);
        nlohmann::json key = {{"kind", "mrd"}, {"q", q}, {"m", m}, {"k", k}, {"shard_block", opt.shard_block},
                              {"shards", shards.size()}, {"idealizer", opt.idealizer_fingerprint}};
        ckpt.emplace(*opt.checkpoint_dir / ("census_mrd_q" + std::to_string(q) + "_m" + std::to_string(m) + "_k" +
                                            std::to_string(k) + ".json"),
                     key);
        done = ckpt->load();
    }
    const std::size_t resumed = done.size();
    std::vector<std::size_t> todo;
    for (std::size_t s = 0; s < shards.size(); ++s)
        if (!done.count(s)) todo.push_back(s);
    if (opt.stop_after_shards != 0 && todo.size() > opt.stop_after_shards) todo.resize(opt.stop_after_shards);

    std::mutex writer;
    std::size_t since_save = 0;
    const FieldTower& t = *tower;
    parallel_for(todo.size(), opt.threads, [&](std::size_t i, unsigned) {
        const std::size_t s = todo[i];
        detail::ShardResult r;
        en.for_each_in(shards[s], [&](const Matrix& G) {
            ++r.subspaces;
            if (!detail::min_distance_at_least(t, G, d)) return;
            ++r.count;
            if (opt.idealizer_fingerprint) ++r.classes[idealizer_dimension(t, G)];
        });
        std::lock_guard lock(writer);
        done[s] = std::move(r);
        if (ckpt && ++since_save >= opt.checkpoint_every) {
            ckpt->save(done);
            since_save = 0;
        }
    });
    if (ckpt) ckpt->save(done);

    CensusResult res;
    res.q = q;
    res.m = m;
    res.n = n;
    res.k = k;
    res.d = d;
    res.method = "exhaustive";
    BigCount total = 0;
    for (const auto& [s, r] : done) {
        total += r.count;
        res.subspaces += r.subspaces;
        for (const auto& [dim, c] : r.classes) res.idealizer_classes[dim] += c;
    }
    res.trace = {opt.shard_block, shards.size(), done.size(), resumed, opt.threads, done.size() == shards.size()};
    if (res.trace.complete) {
        res.exhaustive_count = total;
        res.density = make_density(total, n, k, q, m);
    }
    if (k == 2) {
        try {
            res.formulas = mrd_count_formulas(q, m);
            res.formula_value = res.formulas.begin()->second;
        } catch (const UnsupportedShape&) {
        }
    }
    res.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

/// Formula-only MRD count (k = 2).
inline CensusResult count_mrd_formula(std::uint64_t q, unsigned m) {
    CensusResult res;
    res.q = q;
    res.m = res.n = m;
    res.k = 2;
    res.d = m - 1;
    res.method = "formula";
    res.formulas = mrd_count_formulas(q, m);
    res.formula_value = res.formulas.begin()->second;
    res.density = make_density(*res.formula_value, m, 2, q, m);
    return res;
}

enum class CountMode { exhaustive, formula };

/// [mk, k, m] codes: every nonzero codeword has rank weight m.
inline CensusResult count_one_weight(unsigned m, unsigned k, std::uint64_t q, CountMode mode,
                                     const CensusOptions& opt = {}) {
    const auto start = std::chrono::steady_clock::now();
    CensusResult res;
    res.q = q;
    res.m = m;
    res.n = m * k;
    res.k = k;
    res.d = m;
    res.formula_value = one_weight_count_formula(m, k, q);
    res.formulas["one_weight"] = *res.formula_value;
    res.method = mode == CountMode::exhaustive ? "exhaustive" : "formula";
    if (mode == CountMode::exhaustive) {
        auto tower = FieldTower::for_q(q, m);
        const double work = static_cast<double>(gaussian_binomial(m * k, k, ipow(BigInt(q), m)));
        if (work > 1e7 && !opt.heavy) throw ResourceBudgetExceeded("one-weight census exceeds 1e7 subspaces");
        SubspaceEnumerator en(m * k, k, tower->qm());
        const auto shards = en.shards(opt.shard_block);
        std::vector<std::uint64_t> counts(shards.size(), 0);
        std::vector<std::vector<Matrix>> found(shards.size());
        parallel_for(shards.size(), opt.threads, [&](std::size_t s, unsigned) {
            en.for_each_in(shards[s], [&](const Matrix& G) {
                if (detail::min_distance_at_least(*tower, G, m)) {
                    ++counts[s];
                    found[s].push_back(G);
                }
            });
        });
        BigCount total = 0;
        for (auto c : counts) total += c;
        res.exhaustive_count = total;
        res.subspaces = en.total();
        res.trace = {opt.shard_block, shards.size(), shards.size(), 0, opt.threads, true};
        std::optional<std::vector<BigCount>> first;
        bool identical = true;
        for (const auto& f : found)
            for (const auto& G : f) {
                const auto wd = RankMetricCode(tower, G).weight_distribution();
                if (!first) first = wd;
                else if (wd != *first) identical = false;
            }
        res.weight_distributions_identical = identical;
    }
    res.density = make_density(res.exhaustive_count.value_or(*res.formula_value), m * k, k, q, m);
    res.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

// ---------------------------------------------------------------- densities

/// The printed closed form for the m = 4, k = 2, d = 3 density, evaluated at q.
inline Rational printed_density_m4(std::uint64_t q) {
    const BigInt Q(q);
    auto P = [&](unsigned e) { return ipow(Q, e); };
    BigInt num = P(7) * (P(3) - 1) * (P(2) - 1) * (Q - 1) * (P(3) - P(2) - Q - 1) * (P(8) - 1) * (P(4) - 1);
    BigInt den = (P(16) - 1) * (P(12) - 1);
    return Rational(num, 2 * den);
}

/// The printed closed form for the q = 2, k = 2, d = m - 1 density, evaluated at m.
/// 2^{m^2} prod_{j=1}^m (1 - 2^{-j}) is |GL_m(2)|, so the expression is exact.
inline Rational printed_density_q2(unsigned m) {
    Rational prod = 1;
    for (unsigned j = 1; j <= m; ++j) prod *= Rational(1) - Rational(1, ipow(2, j));
    Rational num = Rational(ipow(2, m * m)) * Rational(BigInt(euler_phi(m))) * prod * Rational(ipow(2, 2 * m) - 1);
    Rational den = Rational((ipow(2, m * m) - 1) * (ipow(2, m * m - m) - 1));
    return num / den;
}

/// The printed one-weight density expression at (m, k, q).
inline Rational printed_density_one_weight(unsigned m, unsigned k, std::uint64_t q) {
    const BigInt Q(q);
    BigInt den = 1;
    for (unsigned i = 0; i < k; ++i) den *= ipow(Q, m * k) - ipow(Q, m * i);
    return Rational(gl_order(m * k, Q), den * gaussian_binomial(m * k, k, ipow(Q, m)));
}

/// Degree and leading-coefficient comparison of a ratio scale * num(q) / den(q).
struct LimitCheck {
    int numerator_degree = 0;
    int denominator_degree = 0;
    Rational limit = 0;  ///< valid when degrees are equal
    bool degrees_equal() const { return numerator_degree == denominator_degree; }
    nlohmann::json to_json() const {
        return {{"numerator_degree", numerator_degree},
                {"denominator_degree", denominator_degree},
                {"degrees_equal", degrees_equal()},
                {"limit", degrees_equal() ? nlohmann::json(to_fraction(limit)) : nlohmann::json(nullptr)}};
    }
};

inline LimitCheck limit_check(const IntPoly& num, const IntPoly& den, const Rational& scale) {
    LimitCheck c;
    c.numerator_degree = num.degree();
    c.denominator_degree = den.degree();
    if (c.degrees_equal()) c.limit = scale * Rational(num.leading(), den.leading());
    return c;
}

/// |GL_n(q)| as a polynomial in q.
inline IntPoly gl_order_poly(unsigned n) {
    IntPoly r = IntPoly::constant(1);
    for (unsigned j = 0; j < n; ++j) r = r * IntPoly::binomial_diff(n, j);
    return r;
}

/// [n choose k]_{q^e} as a polynomial in q (exact division of the product formula).
inline IntPoly gaussian_binomial_poly(unsigned n, unsigned k, unsigned e) {
    IntPoly num = IntPoly::constant(1), den = IntPoly::constant(1);
    for (unsigned i = 0; i < k; ++i) {
        num = num * IntPoly::binomial_diff(e * (n - i), 0);
        den = den * IntPoly::binomial_diff(e * (i + 1), 0);
    }
    return num.divide_exact(den);
}

/// Printed m = 4 density as (1/2) * N(q) / D(q).
inline LimitCheck m4_density_limit() {
    auto d = [](unsigned a, unsigned b) { return IntPoly::binomial_diff(a, b); };
    IntPoly cubic({BigInt(-1), BigInt(-1), BigInt(-1), BigInt(1)});  // q^3 - q^2 - q - 1
    IntPoly num = IntPoly::monomial(1, 7) * d(3, 0) * d(2, 0) * d(1, 0) * cubic * d(8, 0) * d(4, 0);
    IntPoly den = d(16, 0) * d(12, 0);
    return limit_check(num, den, Rational(1, 2));
}

/// One-weight density |GL_{mk}(q)| / (prod_{i<k}(q^{mk} - q^{mi}) [mk choose k]_{q^m}).
inline LimitCheck one_weight_density_limit(unsigned m, unsigned k) {
    IntPoly den = gaussian_binomial_poly(m * k, k, m);
    for (unsigned i = 0; i < k; ++i) den = den * IntPoly::binomial_diff(m * k, m * i);
    return limit_check(gl_order_poly(m * k), den, Rational(1));
}

enum class DensityFamily { q2_mrd, m4_mrd, one_weight };

inline DensityFamily parse_density_family(const std::string& s) {
    if (s == "q2_mrd") return DensityFamily::q2_mrd;
    if (s == "m4_mrd") return DensityFamily::m4_mrd;
    if (s == "one_weight") return DensityFamily::one_weight;
    throw InvalidParameter("unknown density family '" + s + "'");
}

/**
 * Exact densities over a parameter range.
 *  q2_mrd:     m in [lo, hi], q = 2; also density * 2^{m^2-3m} / m and the printed expression.
 *  m4_mrd:     prime powers q in [lo, hi], m = 4; also the printed expression and its limit check.
 *  one_weight: prime powers q in [lo, hi] at (m, k); also the limit check.
 */
inline nlohmann::json asymptotic_report(DensityFamily family, unsigned lo, unsigned hi, unsigned m = 2, unsigned k = 2) {
    nlohmann::json rows = nlohmann::json::array();
    nlohmann::json rep;
    std::optional<Rational> prev;
    bool monotone_increasing = true, monotone_decreasing = true;
    auto track = [&](const Rational& v) {
        if (prev) {
            if (v < *prev) monotone_increasing = false;
            if (v > *prev) monotone_decreasing = false;
        }
        prev = v;
    };
    switch (family) {
        case DensityFamily::q2_mrd: {
            rep["family"] = "q2_mrd";
            for (unsigned mm = std::max(lo, 2U); mm <= std::min(hi, 8U); ++mm) {
                const BigCount c = mrd_count_q2_family(mm);
                const Density dn = make_density(c, mm, 2, 2, mm);
                const Rational envelope_ratio = dn.exact * Rational(ipow(2, mm * mm - 3 * mm)) / Rational(mm);
                const Rational printed = printed_density_q2(mm);
                track(envelope_ratio);
                rows.push_back({{"m", mm},
                                {"count", c.str()},
                                {"density", dn.to_json()},
                                {"envelope_ratio", to_decimal(envelope_ratio)},
                                {"printed_density", Density{printed}.to_json()},
                                {"printed_over_exact", to_fraction(printed / dn.exact)}});
            }
            rep["envelope_ratio_monotone_increasing"] = monotone_increasing;
            rep["envelope_ratio_monotone_decreasing"] = monotone_decreasing;
            break;
        }
        case DensityFamily::m4_mrd: {
            rep["family"] = "m4_mrd";
            for (unsigned q = std::max(lo, 2U); q <= std::min(hi, 16U); ++q) {
                if (!prime_power(q)) continue;
                const Density dn = make_density(mrd_count_m4_family(q), 4, 2, q, 4);
                const Rational printed = printed_density_m4(q);
                track(dn.exact);
                rows.push_back({{"q", q},
                                {"density", dn.to_json()},
                                {"printed_density", Density{printed}.to_json()},
                                {"printed_matches", printed == dn.exact}});
            }
            rep["limit_check"] = m4_density_limit().to_json();
            rep["density_monotone_increasing"] = monotone_increasing;
            break;
        }
        case DensityFamily::one_weight: {
            rep["family"] = "one_weight";
            rep["m"] = m;
            rep["k"] = k;
            for (unsigned q = std::max(lo, 2U); q <= std::min(hi, 16U); ++q) {
                if (!prime_power(q)) continue;
                const Density dn = make_density(one_weight_count_formula(m, k, q), m * k, k, q, m);
                const Rational printed = printed_density_one_weight(m, k, q);
                track(dn.exact);
                rows.push_back({{"q", q},
                                {"density", dn.to_json()},
                                {"printed_density", Density{printed}.to_json()},
                                {"printed_matches", printed == dn.exact}});
            }
            rep["limit_check"] = one_weight_density_limit(m, k).to_json();
            rep["density_monotone_increasing"] = monotone_increasing;
            break;
        }
    }
    rep["rows"] = rows;
    return rep;
}

}  // namespace rmlkit

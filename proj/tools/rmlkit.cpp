// rmlkit command-line front end. Exit codes: 0 all checks pass, 2 flagged mismatch, 1 error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rmlkit/rmlkit.hpp"

namespace {

using nlohmann::json;
using namespace rmlkit;

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitMismatch = 2;

void emit(const json& j, const std::string& out) {
    const std::string text = j.dump(2);
    if (out.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream os(out);
    if (!os) throw FormatError("cannot open " + out);
    os << text << "\n";
    std::cerr << "wrote " << out << "\n";
}

void write_csv(const std::string& file, const std::string& text) {
    if (file.empty()) return;
    std::ofstream os(file);
    if (!os) throw FormatError("cannot open " + file);
    os << text;
}

std::pair<unsigned, unsigned> parse_range(const std::string& r) {
    const auto colon = r.find(':');
    if (colon == std::string::npos) {
        const auto v = static_cast<unsigned>(std::stoul(r));
        return {v, v};
    }
    return {static_cast<unsigned>(std::stoul(r.substr(0, colon))), static_cast<unsigned>(std::stoul(r.substr(colon + 1)))};
}

struct CensusMrdArgs {
    std::uint64_t q = 2;
    unsigned m = 4, k = 2, threads = 1;
    bool heavy = false, formula_only = false;
    std::string checkpoint, out;
    std::uint64_t shard_block = 16384;
};

int run_census_mrd(const CensusMrdArgs& a) {
    CensusResult r;
    if (a.formula_only) {
        r = count_mrd_formula(a.q, a.m);
    } else {
        CensusOptions o;
        o.threads = a.threads;
        o.heavy = a.heavy;
        o.shard_block = a.shard_block;
        if (!a.checkpoint.empty()) o.checkpoint_dir = a.checkpoint;
        r = count_mrd_exhaustive(a.q, a.m, o, a.k);
    }
    emit(r.to_json(), a.out);
    return r.match() ? kExitPass : kExitMismatch;
}

struct CensusOneWeightArgs {
    std::uint64_t q = 2;
    unsigned m = 2, k = 2, threads = 1;
    std::string mode = "exhaustive", out;
    bool heavy = false;
};

int run_census_one_weight(const CensusOneWeightArgs& a) {
    CensusOptions o;
    o.threads = a.threads;
    o.heavy = a.heavy;
    const CountMode mode = a.mode == "formula" ? CountMode::formula : CountMode::exhaustive;
    const CensusResult r = count_one_weight(a.m, a.k, a.q, mode, o);
    emit(r.to_json(), a.out);
    const bool ok = r.match() && r.weight_distributions_identical.value_or(true);
    return ok ? kExitPass : kExitMismatch;
}

struct WhitneyArgs {
    unsigned i = 2, n = 4, m = 3, threads = 1;
    std::uint64_t q = 2;
    std::optional<unsigned> j;
    std::string method = "all", cache, out, csv;
    bool sanity = false;
};

int run_whitney(const WhitneyArgs& a) {
    const LatticeParams p{a.i, a.n, a.m, a.q};
    BuildOptions b;
    b.threads = a.threads;
    std::optional<std::filesystem::path> cache;
    if (!a.cache.empty()) cache = a.cache;
    RankMetricLattice L = cached_lattice(p, cache, b);
    const WhitneyVector w = whitney_numbers(L);

    VerifyOptions vo;
    vo.build = b;
    vo.cache_dir = cache;
    vo.subspace_lattice = a.method == "all" || a.method == "brute";
    vo.closed_formula = a.method == "all" || a.method == "closed";
    vo.recursion = a.method == "all" || a.method == "recursion";

    json records = json::array();
    bool mismatch = false;
    const unsigned lo = a.j ? *a.j : 0, hi = a.j ? *a.j : p.n;
    for (unsigned j = lo; j <= hi; ++j) {
        const VerificationRecord rec = verify_whitney(L, j, vo);
        mismatch = mismatch || rec.mismatch();
        records.push_back(rec.to_json());
    }
    const std::size_t mu_violations = mobius_identity_violations(L, a.threads);
    BigInt total = 0;
    for (const auto& v : w.first_kind) total += v;
    json out = {{"params", p.to_json()},
                {"elements", L.element_count()},
                {"whitney", w.to_json()},
                {"sum_first_kind", total.str()},
                {"mobius_identity_violations", mu_violations},
                {"method", a.method},
                {"verification", records},
                {"mismatch", mismatch}};
    if (a.sanity) {
        const LatticeSanity s = check_geometric(L, 2000, 1);
        out["geometric_sanity"] = s.to_json();
        mismatch = mismatch || !s.ok();
    }
    emit(out, a.out);
    if (!a.csv.empty()) {
        std::string text = "j,w_j,W_j\n";
        for (std::size_t j = 0; j < w.first_kind.size(); ++j)
            text += std::to_string(j) + "," + w.first_kind[j].str() + "," + w.second_kind[j].str() + "\n";
        write_csv(a.csv, text);
    }
    return (mismatch || mu_violations != 0) ? kExitMismatch : kExitPass;
}

int run_verify_hyperovals(std::uint64_t q, const std::string& out) {
    const HyperovalClassification r = classify_translation_hyperovals(static_cast<Code>(q));
    emit(r.to_json(), out);
    return r.prediction_match && r.lines_0_or_2 ? kExitPass : kExitMismatch;
}

struct ScatteredArgs {
    std::uint64_t q = 2, samples = 1000, seed = 1;
    unsigned m = 4;
    bool exhaustive = false;
    std::string out;
};

int run_verify_scattered(const ScatteredArgs& a) {
    auto t = FieldTower::for_q(a.q, a.m);
    const ScatteredMrdSweep s = a.exhaustive ? scattered_mrd_exhaustive(t) : scattered_mrd_random(t, a.samples, a.seed);
    json j = s.to_json();
    if (!a.exhaustive) j["seed"] = a.seed;
    emit(j, a.out);
    return s.violations == 0 ? kExitPass : kExitMismatch;
}

struct DensityArgs {
    std::string family, range = "2:8", out, csv;
    unsigned m = 2, k = 2;
};

int run_density(const DensityArgs& a) {
    const auto [lo, hi] = parse_range(a.range);
    const DensityFamily fam = parse_density_family(a.family);
    const json rep = asymptotic_report(fam, lo, hi, a.m, a.k);
    emit(rep, a.out);
    bool ok = true;
    std::string csv = fam == DensityFamily::q2_mrd ? "m,density,envelope_ratio,printed_over_exact\n" : "q,density,printed_matches\n";
    for (const auto& row : rep.at("rows")) {
        if (fam == DensityFamily::q2_mrd) {
            ok = ok && row.at("printed_over_exact") == "1";
            csv += std::to_string(row.at("m").get<unsigned>()) + "," + row.at("density").at("exact").get<std::string>() + "," +
                   row.at("envelope_ratio").get<std::string>() + "," + row.at("printed_over_exact").get<std::string>() + "\n";
        } else {
            ok = ok && row.at("printed_matches").get<bool>();
            csv += std::to_string(row.at("q").get<unsigned>()) + "," + row.at("density").at("exact").get<std::string>() + "," +
                   (row.at("printed_matches").get<bool>() ? "true" : "false") + "\n";
        }
    }
    if (rep.contains("limit_check")) ok = ok && rep.at("limit_check").at("degrees_equal").get<bool>();
    write_csv(a.csv, csv);
    return ok ? kExitPass : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmlkit: rank-metric codes, lattices and censuses"};
    app.require_subcommand(1);

    CensusMrdArgs cm;
    CensusOneWeightArgs cw;
    auto* census = app.add_subcommand("census", "count codes exhaustively and by formula");
    census->require_subcommand(1);
    auto* mrd = census->add_subcommand("mrd", "2-dimensional MRD codes in F_{q^m}^m");
    mrd->add_option("--q", cm.q, "base field order")->required();
    mrd->add_option("--m", cm.m, "extension degree")->required();
    mrd->add_option("--k", cm.k, "code dimension")->capture_default_str();
    mrd->add_flag("--heavy", cm.heavy, "allow runs beyond the light budget");
    mrd->add_flag("--formula-only", cm.formula_only, "skip enumeration");
    mrd->add_option("--threads", cm.threads)->capture_default_str();
    mrd->add_option("--shard-block", cm.shard_block)->capture_default_str();
    mrd->add_option("--checkpoint", cm.checkpoint, "checkpoint directory (resumes if present)");
    mrd->add_option("--out", cm.out, "write JSON here instead of stdout");

    auto* ow = census->add_subcommand("one-weight", "[mk, k, m] one-weight codes");
    ow->add_option("--q", cw.q)->required();
    ow->add_option("--m", cw.m)->required();
    ow->add_option("--k", cw.k)->required();
    ow->add_option("--mode", cw.mode)->check(CLI::IsMember({"exhaustive", "formula"}))->capture_default_str();
    ow->add_option("--threads", cw.threads)->capture_default_str();
    ow->add_flag("--heavy", cw.heavy);
    ow->add_option("--out", cw.out);

    WhitneyArgs wa;
    auto* wh = app.add_subcommand("whitney", "Whitney numbers of L_i(n, m; q)");
    wh->add_option("--i", wa.i)->required();
    wh->add_option("--n", wa.n)->required();
    wh->add_option("--m", wa.m)->required();
    wh->add_option("--q", wa.q)->required();
    wh->add_option("--j", wa.j, "single index (default: all)");
    wh->add_option("--method", wa.method, "formula checks against brute force")
        ->check(CLI::IsMember({"brute", "recursion", "closed", "all"}))
        ->capture_default_str();
    wh->add_option("--cache", wa.cache, "lattice cache directory");
    wh->add_option("--threads", wa.threads)->capture_default_str();
    wh->add_flag("--sanity", wa.sanity, "sampled atomistic/semimodular checks");
    wh->add_option("--out", wa.out);
    wh->add_option("--csv", wa.csv, "write j,w_j,W_j table");

    std::uint64_t hq = 4;
    std::string hout;
    ScatteredArgs sa;
    auto* verify = app.add_subcommand("verify", "property sweeps");
    verify->require_subcommand(1);
    auto* hyp = verify->add_subcommand("hyperovals", "classify hyperovals from additive maps of F_q");
    hyp->add_option("--q", hq)->required();
    hyp->add_option("--out", hout);
    auto* sc = verify->add_subcommand("scattered-mrd", "scattered linear set vs MRD biconditional");
    sc->add_option("--q", sa.q)->required();
    sc->add_option("--m", sa.m)->required();
    sc->add_option("--samples", sa.samples)->capture_default_str();
    sc->add_option("--seed", sa.seed)->capture_default_str();
    sc->add_flag("--exhaustive", sa.exhaustive, "every pair instead of samples");
    sc->add_option("--out", sa.out);

    DensityArgs da;
    auto* dn = app.add_subcommand("density", "exact densities over a parameter range");
    dn->add_option("--family", da.family)->required()->check(CLI::IsMember({"m4_mrd", "q2_mrd", "one_weight"}));
    dn->add_option("--range", da.range, "LO:HI over m (q2_mrd) or q (others)")->capture_default_str();
    dn->add_option("--m", da.m, "one_weight m")->capture_default_str();
    dn->add_option("--k", da.k, "one_weight k")->capture_default_str();
    dn->add_option("--out", da.out);
    dn->add_option("--csv", da.csv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitError;
    }

    try {
        if (*mrd) return run_census_mrd(cm);
        if (*ow) return run_census_one_weight(cw);
        if (*wh) return run_whitney(wa);
        if (*hyp) return run_verify_hyperovals(hq, hout);
        if (*sc) return run_verify_scattered(sa);
        if (*dn) return run_density(da);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

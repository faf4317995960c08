// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failed criteria.  Tolerances are pinned here and nowhere else.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lorcross/config.hpp"
#include "lorcross/io.hpp"
#include "lorcross/verify.hpp"

using namespace lorcross;
namespace fs = std::filesystem;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string sig(double x) { return format_sig(x); }

GridFunction random_zero_mean(std::uint64_t seed, int m, std::array<int, 3> dims, int band) {
    GridFunction f = make_from_generator(
        "gen:random-bandlimited:" + std::to_string(seed) + ":" + std::to_string(band), m, dims);
    return synthesize(zero_mean_project(analyze(f)));
}

std::vector<double> magnitudes_of(const GridFunction& f) {
    std::vector<double> v(f.samples.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(f.samples[i]);
    return v;
}

// ------------------------------------------------------------------ 1
Outcome criterion1() {
    auto t0 = clock_type::now();
    double worst = 0.0;
    for (double q : {2.0, 3.0}) {
        PhiFunction psi = PhiFunction::power(1.0 / q);
        for (int i = 0; i < 25; ++i) {
            GridFunction f1 = make_from_generator(
                "gen:random-bandlimited:" + std::to_string(101 + i) + ":5", 1, {256, 1, 1});
            double l1 = lebesgue_norm(f1, q);
            worst = std::max(worst, std::abs(lorentz_norm_iso(f1, psi, q) - l1) / l1);

            GridFunction f2 = make_from_generator(
                "gen:random-bandlimited:" + std::to_string(201 + i) + ":4", 2, {64, 64, 1});
            double l2 = lebesgue_norm(f2, q);
            worst = std::max(worst, std::abs(lorentz_norm_iso(f2, psi, q) - l2) / l2);
        }
    }
    double secs = seconds_since(t0);
    Outcome o;
    o.pass = worst < 1e-10 && secs < 10.0;
    o.detail = "max relative gap " + sig(worst) + " over 50 functions, q in {2,3}, " +
               sig(secs) + "s";
    return o;
}

// ------------------------------------------------------------------ 2
Outcome criterion2() {
    int bad_multiset = 0, bad_monotone = 0;
    for (int i = 0; i < 25; ++i) {
        GridFunction f1 = make_from_generator(
            "gen:random-bandlimited:" + std::to_string(301 + i) + ":5", 1, {256, 1, 1});
        GridFunction f2 = make_from_generator(
            "gen:random-bandlimited:" + std::to_string(401 + i) + ":4", 2, {64, 64, 1});
        for (const GridFunction* f : {&f1, &f2}) {
            std::vector<double> in = magnitudes_of(*f);
            IteratedRearrangement r = iterated_rearrangement(*f);
            std::vector<double> out = r.values;
            std::sort(in.begin(), in.end());
            std::sort(out.begin(), out.end());
            if (in != out) ++bad_multiset;  // exact multiset equality
        }
    }

    // indicator rearranges to the prefix indicator
    GridFunction box = make_from_generator("gen:rect:0.25", 1, {16, 1, 1});
    StepFunction s = rearrange_1d(magnitudes_of(box));
    bool indicator_ok = true;
    for (int i = 0; i < 16; ++i)
        indicator_ok = indicator_ok && s.values[static_cast<std::size_t>(i)] == (i < 4 ? 1.0 : 0.0);

    // exhaustive monotonicity on 4x4x4 random tables
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        SplitMix64 rng(seed);
        std::vector<double> vals(64);
        for (double& v : vals) v = rng.uniform01();
        IteratedRearrangement r = iterated_rearrangement(vals, 3, {4, 4, 4});
        for (int i3 = 0; i3 < 4; ++i3)
            for (int i2 = 0; i2 < 4; ++i2)
                for (int i1 = 0; i1 < 4; ++i1) {
                    std::size_t at = static_cast<std::size_t>(i1 + 4 * (i2 + 4 * i3));
                    if (i1 + 1 < 4 && r.values[at] < r.values[at + 1]) ++bad_monotone;
                    if (i2 + 1 < 4 && r.values[at] < r.values[at + 4]) ++bad_monotone;
                    if (i3 + 1 < 4 && r.values[at] < r.values[at + 16]) ++bad_monotone;
                }
    }

    Outcome o;
    o.pass = bad_multiset == 0 && indicator_ok && bad_monotone == 0;
    o.detail = "multiset mismatches " + std::to_string(bad_multiset) + ", indicator " +
               (indicator_ok ? "exact" : "wrong") + ", monotonicity violations " +
               std::to_string(bad_monotone);
    return o;
}

// ------------------------------------------------------------------ 3
Outcome criterion3() {
    double worst = 0.0;
    for (double q : {1.1, 2.0, 4.0, 10.0}) {
        DilationIndices d = dilation_indices(PhiFunction::power(1.0 / q));
        double want = std::pow(2.0, 1.0 / q);
        worst = std::max({worst, std::abs(d.alpha - want), std::abs(d.beta - want)});
    }
    Outcome o;
    o.pass = worst < 1e-12;
    o.detail = "max |index - 2^(1/q)| = " + sig(worst) + " over q in {1.1,2,4,10}";
    return o;
}

// ------------------------------------------------------------------ 4
Outcome criterion4() {
    auto t0 = clock_type::now();

    // shipped geometric instance with a closed-form ratio
    const int N = 30;
    std::vector<double> a(N + 1), b(N + 1);
    for (int k = 0; k <= N; ++k) {
        a[static_cast<std::size_t>(k)] = std::ldexp(1.0, k);
        b[static_cast<std::size_t>(k)] = std::ldexp(1.0, -2 * k);
    }
    double lhs_oracle =
        (4.0 / 3.0) * (2.0 - 3.0 * std::ldexp(1.0, -(N + 1)) + std::ldexp(1.0, -2 * (N + 1)));
    double rhs_oracle = 2.0 * (1.0 - std::ldexp(1.0, -(N + 1)));
    VerificationReport geo = hardy1_check(a, b, 1.0, 'a', "geo");
    double gap1 = std::abs(geo.rows()[0].ratio - lhs_oracle / rhs_oracle);

    // separable iterated instance: both sides factor per axis
    std::vector<double> u(6), v(5);
    for (int i = 0; i < 6; ++i) u[static_cast<std::size_t>(i)] = std::ldexp(1.0, -i);
    for (int j = 0; j < 5; ++j) v[static_cast<std::size_t>(j)] = std::pow(3.0, -j);
    std::vector<double> bb(30);
    for (int j = 0; j < 5; ++j)
        for (int i = 0; i < 6; ++i)
            bb[static_cast<std::size_t>(i + 6 * j)] =
                u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    auto fold1 = [](const std::vector<double>& x, double th, bool suffix) {
        std::vector<double> s(x.size());
        if (suffix) {
            long double run = 0.0L;
            for (std::size_t i = x.size(); i-- > 0;) s[i] = static_cast<double>(run += x[i]);
        } else {
            s = x;
        }
        long double acc = 0.0L;
        for (double t : s) acc += std::pow(t, th);
        return std::pow(static_cast<double>(acc), 1.0 / th);
    };
    std::vector<std::vector<double>> w{std::vector<double>(6, 1.0), std::vector<double>(5, 1.0)};
    std::vector<int> bdims{6, 5};
    std::vector<double> th{1.0, 2.0};
    VerificationReport sep = hardy6_check(w, bb, bdims, th, 'a', "sep");
    double sep_oracle = fold1(u, 1.0, true) * fold1(v, 2.0, true) /
                        (fold1(u, 1.0, false) * fold1(v, 2.0, false));
    double gap2 = std::abs(sep.rows()[0].ratio - sep_oracle);

    // 200 random premise-satisfying draws against (A theta)^theta
    SplitMix64 rng(4242);
    int over = 0, cases = 0;
    const double thetas[3] = {1.0, 1.5, 2.0};
    for (int d = 0; d < 200; ++d) {
        int len = 12 + static_cast<int>(rng.uniform01() * 28);
        std::vector<double> aa(static_cast<std::size_t>(len)), bbv(static_cast<std::size_t>(len));
        aa[0] = 1.0;
        for (int k = 1; k < len; ++k)
            aa[static_cast<std::size_t>(k)] =
                aa[static_cast<std::size_t>(k - 1)] * (1.3 + rng.uniform01());
        for (int k = 0; k < len; ++k)
            bbv[static_cast<std::size_t>(k)] =
                rng.uniform01() * std::pow(2.0, -rng.uniform01() * k);
        double theta = thetas[d % 3];
        double A = 0.0;
        long double run = 0.0L;
        for (int k = 0; k < len; ++k) {
            run += aa[static_cast<std::size_t>(k)];
            A = std::max(A, static_cast<double>(run) / aa[static_cast<std::size_t>(k)]);
        }
        VerificationReport rep = hardy1_check(aa, bbv, theta, 'a', "rnd");
        double ratio = rep.rows()[0].ratio;
        ++cases;
        if (std::isfinite(ratio) && ratio > std::pow(A * theta, theta) * (1.0 + 1e-9)) ++over;
    }
    // 50 iterated draws against prod_j A_j theta_j in norm scale
    for (int d = 0; d < 50; ++d) {
        int n1 = 6 + static_cast<int>(rng.uniform01() * 10);
        int n2 = 5 + static_cast<int>(rng.uniform01() * 8);
        std::vector<std::vector<double>> ax{std::vector<double>(static_cast<std::size_t>(n1)),
                                            std::vector<double>(static_cast<std::size_t>(n2))};
        double bound = 1.0;
        std::vector<double> tpair{thetas[d % 3], thetas[(d + 1) % 3]};
        for (int j = 0; j < 2; ++j) {
            auto& col = ax[static_cast<std::size_t>(j)];
            col[0] = 1.0;
            for (std::size_t k = 1; k < col.size(); ++k)
                col[k] = col[k - 1] * (1.3 + rng.uniform01());
            double A = 0.0;
            long double run = 0.0L;
            for (double x : col) {
                run += x;
                A = std::max(A, static_cast<double>(run) / x);
            }
            bound *= A * tpair[static_cast<std::size_t>(j)];
        }
        std::vector<double> box(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2));
        for (double& x : box) x = rng.uniform01();
        std::vector<int> bd{n1, n2};
        VerificationReport rep = hardy6_check(ax, box, bd, tpair, 'a', "rnd");
        double ratio = rep.rows()[0].ratio;
        ++cases;
        if (std::isfinite(ratio) && ratio > bound * (1.0 + 1e-9)) ++over;
    }

    double secs = seconds_since(t0);
    Outcome o;
    o.pass = gap1 < 1e-9 && gap2 < 1e-9 && over == 0 && secs < 5.0;
    o.detail = "oracle gaps " + sig(gap1) + "/" + sig(gap2) + ", " +
               std::to_string(over) + "/" + std::to_string(cases) +
               " draws over the premise bound, " + sig(secs) + "s";
    return o;
}

// ------------------------------------------------------------------ 5
Outcome criterion5() {
    PhiFunction psi = PhiFunction::power(0.55), phi = PhiFunction::power(0.7);
    auto spread = [](const VerificationReport& r) { return r.max_ratio() / r.min_ratio(); };

    VerificationReport l2 = lemma2_check(psi, 2.0, 30);
    VerificationReport l4 = lemma4_check(psi, phi, 2.0, 30);
    VerificationReport l5 = lemma5_check(psi, 2.0, 30);
    double s2 = spread(l2), s4 = spread(l4), s5 = spread(l5);
    bool clean = l2.clean() && l4.clean() && l5.clean();

    VerificationReport badrep = lemma4_check(PhiFunction::power(1.0), psi, 2.0, 30);
    double sbad = spread(badrep);
    bool flagged = !badrep.clean();

    Outcome o;
    o.pass = s2 < 20.0 && s4 < 20.0 && s5 < 20.0 && clean && flagged && sbad > 100.0;
    o.detail = "spreads " + sig(s2) + "/" + sig(s4) + "/" + sig(s5) +
               (clean ? ", clean" : ", unexpected flags") + "; degenerate pair " +
               (flagged ? "flagged" : "missed") + " with spread " + sig(sbad);
    return o;
}

// ------------------------------------------------------------------ 6
Outcome criterion6() {
    LorentzParams p = LorentzParams::uniform(PhiFunction::power(0.7), 2.0, 1);
    VerificationReport base = block_norm_check(p, 8, 1024);
    double bracket = base.max_ratio() / base.min_ratio();

    VerificationReport fine = block_norm_check(p, 8, 2048);
    double move = 0.0;
    std::map<double, double> by_scale;
    for (const ReportRow& r : base.rows()) by_scale[r.scale] = r.ratio;
    for (const ReportRow& r : fine.rows())
        if (auto it = by_scale.find(r.scale); it != by_scale.end())
            move = std::max(move, std::abs(r.ratio / it->second - 1.0));

    Outcome o;
    o.pass = bracket < 10.0 && move < 0.02 && base.clean();
    o.detail = "ratio bracket " + sig(bracket) + ", refinement move " + sig(move);
    return o;
}

// ------------------------------------------------------------------ 7
Outcome criterion7() {
    PhiFunction phi = PhiFunction::power(0.7);
    VerificationReport base = dirichlet_norm_check(phi, 2.0, 10);
    double growth = base.growth_factor();
    bool finite = std::isfinite(base.max_ratio());

    VerificationReport fine = dirichlet_norm_check(phi, 2.0, 10, 8);
    double move = 0.0;
    std::map<double, double> by_scale;
    for (const ReportRow& r : base.rows()) by_scale[r.scale] = r.ratio;
    for (const ReportRow& r : fine.rows())
        if (auto it = by_scale.find(r.scale); it != by_scale.end())
            move = std::max(move, std::abs(r.ratio / it->second - 1.0));

    Outcome o;
    o.pass = growth <= 1.0 + 1e-6 && finite && move < 0.02;
    o.detail = "growth " + sig(growth) + ", max ratio " + sig(base.max_ratio()) +
               ", oversampling move " + sig(move);
    return o;
}

// ------------------------------------------------------------------ 8
Outcome criterion8() {
    auto t0 = clock_type::now();
    LorentzParams target = LorentzParams::uniform(PhiFunction::power(0.55), 2.0, 1);
    LorentzParams space = LorentzParams::uniform(PhiFunction::power(0.7), 2.0, 1);
    LorentzParams target2 = LorentzParams::uniform(PhiFunction::power(0.55), 2.0, 2);
    LorentzParams space2 = LorentzParams::uniform(PhiFunction::power(0.7), 2.0, 2);

    std::array<double, 2> max_ratio{0.0, 0.0};
    bool clean = true;
    const int depths[2] = {4, 6};
    for (int d = 0; d < 2; ++d) {
        int S = depths[d];
        int N = 1 << (S + 1);
        for (int i = 0; i < 25; ++i) {
            GridFunction f1 = random_zero_mean(1000 + 37 * static_cast<std::uint64_t>(S) + i, 1,
                                               {N, 1, 1}, S);
            VerificationReport r1 = theorem2_check(f1, target, space, "m1", S);
            max_ratio[static_cast<std::size_t>(d)] =
                std::max(max_ratio[static_cast<std::size_t>(d)], r1.max_ratio());
            clean = clean && r1.clean();

            GridFunction f2 = random_zero_mean(2000 + 57 * static_cast<std::uint64_t>(S) + i, 2,
                                               {N, N, 1}, S);
            VerificationReport r2 = theorem2_check(f2, target2, space2, "m2", S);
            max_ratio[static_cast<std::size_t>(d)] =
                std::max(max_ratio[static_cast<std::size_t>(d)], r2.max_ratio());
            clean = clean && r2.clean();
        }
    }
    double growth = std::sqrt(max_ratio[1] / max_ratio[0]);
    double secs = seconds_since(t0);
    Outcome o;
    o.pass = growth < 1.1 && clean && secs < 120.0;
    o.detail = "max ratios " + sig(max_ratio[0]) + " (depth 4) vs " + sig(max_ratio[1]) +
               " (depth 6), growth/unit " + sig(growth) + ", " + sig(secs) + "s";
    return o;
}

// ------------------------------------------------------------------ 9
Outcome criterion9() {
    BesovParams bp;
    bp.space = LorentzParams::uniform(PhiFunction::power(0.7), 2.0, 1);
    bp.r = {0.5};
    bp.theta = {2.0};
    LorentzParams target = LorentzParams::uniform(PhiFunction::power(0.55), 2.0, 1);
    std::vector<double> gamma{1.0};

    // Order sharpness needs corpus members near the extremal profile: random
    // phases with per-block mass decaying like the bound's weight.  A flat
    // band-limited spectrum sits deep inside the ball at every scale and its
    // ratio column just climbs toward the bound instead of tracking it.
    std::vector<GridFunction> corpus;
    for (int i = 0; i < 6; ++i) {
        GridFunction f =
            random_zero_mean(3000 + static_cast<std::uint64_t>(i), 1, {256, 1, 1}, 6);
        SpectralFunction F = analyze(f);
        for (int k = -127; k <= 127; ++k) {
            if (k == 0) continue;
            double scale = std::pow(2.0, -0.85 * block_index_of(k));
            F.set({k, 0, 0}, F.at({k, 0, 0}) * scale);
        }
        corpus.push_back(synthesize(F));
    }
    VerificationReport rep = theorem5_check(bp, target, gamma, 1, 7, corpus);
    double growth = rep.growth_factor();

    std::vector<GridFunction> inside{make_from_generator("gen:block:1", 1, {256, 1, 1})};
    VerificationReport zero = theorem5_check(bp, target, gamma, 2, 2, inside);
    bool exact_zero = !zero.rows().empty() && zero.rows()[0].lhs == 0.0;

    Outcome o;
    o.pass = growth < 1.1 && std::isfinite(rep.max_ratio()) && exact_zero;
    o.detail = "growth/unit " + sig(growth) + ", max ratio " + sig(rep.max_ratio()) +
               ", in-cross residual " + (exact_zero ? "exactly 0" : "nonzero");
    return o;
}

// ------------------------------------------------------------------ 10
Outcome criterion10() {
    LorentzParams target = LorentzParams::uniform(PhiFunction::power(0.55), 2.0, 1);
    const double lam = 1.0 / std::log2(1.3);
    std::vector<double> lambda{lam};

    double min_ratio = std::numeric_limits<double>::infinity();
    double move = 0.0;
    bool clean = true;
    for (int i = 0; i < 8; ++i) {
        SplitMix64 rng(5000 + static_cast<std::uint64_t>(i));
        BlockSeries series;
        series.m = 1;
        for (int s = 1; s <= 6; ++s)
            series.terms.push_back({{s, 0, 0},
                                    (0.5 + rng.uniform01()) * std::pow(2.0, -0.8 * s)});
        VerificationReport r128 = theorem4_check(series, lambda, target, {128, 1, 1}, "lac");
        VerificationReport r256 = theorem4_check(series, lambda, target, {256, 1, 1}, "lac");
        min_ratio = std::min(min_ratio, r128.rows()[0].ratio);
        move = std::max(move, std::abs(r256.rows()[0].ratio / r128.rows()[0].ratio - 1.0));
        clean = clean && r128.clean() && r256.clean();
    }
    Outcome o;
    o.pass = min_ratio > 1e-3 && move < 0.05 && clean;
    o.detail = "min ratio " + sig(min_ratio) + ", refinement move " + sig(move);
    return o;
}

// ------------------------------------------------------------------ 11
Outcome criterion11() {
    LorentzParams l2 = LorentzParams::uniform(PhiFunction::power(0.5), 2.0, 1);
    LorentzParams skew = LorentzParams::uniform(PhiFunction::power(0.7), 3.0, 1);
    std::vector<double> gamma{1.0};
    HyperbolicCross cross = hyperbolic_cross(gamma, 3.0, 1);

    double l2_gap = 0.0;
    int worse = 0, strictly_better = 0;
    for (int i = 0; i < 10; ++i) {
        GridFunction f = make_from_generator(
            "gen:random-bandlimited:" + std::to_string(6000 + i) + ":6", 1, {64, 1, 1});
        RefineResult a = best_approx_refine(f, cross, l2, 40);
        l2_gap = std::max(l2_gap, std::abs(a.refined_error - a.initial_error) /
                                      std::max(a.initial_error, 1e-300));
        RefineResult b = best_approx_refine(f, cross, skew, 40);
        if (b.refined_error > b.initial_error * (1.0 + 1e-12)) ++worse;
        if (b.refined_error < b.initial_error * (1.0 - 1e-9)) ++strictly_better;
    }
    Outcome o;
    o.pass = l2_gap < 1e-8 && worse == 0 && strictly_better >= 1;
    o.detail = "square-norm gap " + sig(l2_gap) + ", regressions " + std::to_string(worse) +
               ", strict improvements " + std::to_string(strictly_better) + "/10";
    return o;
}

// ------------------------------------------------------------------ 12
Outcome criterion12() {
    fs::path base = fs::temp_directory_path() / "lorcross-acceptance";
    fs::remove_all(base);
    std::string common =
        "checks = hardy1, lemma7, theorem2, theorem5\n"
        "m = 1\ngrid = 64\ncorpus = 3\nn_max = 3\ndepth = 10\nseed = 77\n";
    ExperimentConfig a = parse_config(common + "out = " + (base / "a").string() + "\n");
    ExperimentConfig b = parse_config(common + "out = " + (base / "b").string() + "\n");
    run(a);
    run(b);

    int diffs = 0, files = 0;
    for (const std::string& id : {"hardy1", "lemma7", "theorem2", "theorem5"}) {
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        std::string ca = slurp(base / "a" / (id + ".csv"));
        std::string cb = slurp(base / "b" / (id + ".csv"));
        ++files;
        if (ca.empty() || ca != cb) ++diffs;
    }
    fs::remove_all(base);
    Outcome o;
    o.pass = diffs == 0;
    o.detail = std::to_string(files - diffs) + "/" + std::to_string(files) +
               " reports byte-identical across repeat runs";
    return o;
}

}  // namespace

int main() {
    Outcome (*checks[])() = {criterion1, criterion2, criterion3, criterion4,
                             criterion5, criterion6, criterion7, criterion8,
                             criterion9, criterion10, criterion11, criterion12};
    int failures = 0;
    for (int i = 0; i < 12; ++i) {
        Outcome o;
        try {
            o = checks[i]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::printf("criterion %d: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}

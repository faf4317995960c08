#include "lorcross/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <semaphore>
#include <sstream>
#include <stdexcept>

#include "lorcross/grid.hpp"
#include "lorcross/io.hpp"
#include "lorcross/phi.hpp"
#include "lorcross/verify.hpp"

namespace lorcross {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_list(std::string_view v) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        std::size_t comma = v.find(',', start);
        if (comma == std::string_view::npos) comma = v.size();
        out.emplace_back(trim(v.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

bool to_double(std::string_view v, double& out) {
    if (v == "inf") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    const char* end = v.data() + v.size();
    auto res = std::from_chars(v.data(), end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

bool to_int(std::string_view v, int& out) {
    const char* end = v.data() + v.size();
    auto res = std::from_chars(v.data(), end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

bool to_u64(std::string_view v, std::uint64_t& out) {
    const char* end = v.data() + v.size();
    auto res = std::from_chars(v.data(), end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return seed ^ h;
}

struct Entry {
    std::string value;
    int line = 0;
};

// Corpus of random band-limited functions (or the configured sources).
std::vector<GridFunction> make_corpus(const ExperimentConfig& cfg, std::string_view tag,
                                      bool zero_mean) {
    std::vector<GridFunction> out;
    if (!cfg.sources.empty()) {
        for (const std::string& src : cfg.sources)
            out.push_back(load_input(src, cfg.m, cfg.dims));
    } else {
        const std::uint64_t base = mix_seed(cfg.seed, tag);
        for (int i = 0; i < cfg.corpus; ++i) {
            std::string spec = "gen:random-bandlimited:" + std::to_string(base + i) + ":" +
                               std::to_string(cfg.band);
            out.push_back(make_from_generator(spec, cfg.m, cfg.dims));
        }
    }
    if (zero_mean)
        for (GridFunction& f : out) f = synthesize(zero_mean_project(analyze(f)));
    return out;
}

// Weight sequence with the head-sum (variant a) or tail-sum (variant b)
// premise satisfied by construction: successive ratios in [2,4] (growth) or
// [1/4,1/2] (decay), so the premise constant never exceeds 2.
std::vector<double> premise_sequence(SplitMix64& rng, int len, char variant) {
    std::vector<double> a(static_cast<std::size_t>(len));
    a[0] = 1.0;
    for (int k = 1; k < len; ++k) {
        double step = 2.0 + 2.0 * rng.uniform01();
        a[static_cast<std::size_t>(k)] =
            variant == 'a' ? a[static_cast<std::size_t>(k - 1)] * step
                           : a[static_cast<std::size_t>(k - 1)] / step;
    }
    return a;
}

VerificationReport run_hardy1(const ExperimentConfig& cfg) {
    SplitMix64 rng(mix_seed(cfg.seed, "hardy1"));
    const int len = cfg.n_max + 1;
    VerificationReport rep("hardy1");
    for (int i = 0; i < cfg.corpus; ++i) {
        std::vector<double> a = premise_sequence(rng, len, cfg.variant);
        std::vector<double> b(static_cast<std::size_t>(len));
        for (double& x : b) x = rng.uniform01();
        rep.append(hardy1_check(a, b, cfg.theta[0], cfg.variant, "f" + std::to_string(i)));
    }
    return rep;
}

VerificationReport run_hardy6(const ExperimentConfig& cfg) {
    SplitMix64 rng(mix_seed(cfg.seed, "hardy6"));
    const int len = cfg.n_max + 1;
    std::vector<int> bdims(static_cast<std::size_t>(cfg.m), len);
    std::size_t total = 1;
    for (int j = 0; j < cfg.m; ++j) total *= static_cast<std::size_t>(len);
    VerificationReport rep("hardy6");
    for (int i = 0; i < cfg.corpus; ++i) {
        std::vector<std::vector<double>> a;
        for (int j = 0; j < cfg.m; ++j) a.push_back(premise_sequence(rng, len, cfg.variant));
        std::vector<double> b(total);
        for (double& x : b) x = rng.uniform01();
        rep.append(hardy6_check(a, b, bdims, std::span<const double>(cfg.theta).first(cfg.m),
                                cfg.variant, "f" + std::to_string(i)));
    }
    return rep;
}

VerificationReport run_lemma7(const ExperimentConfig& cfg) {
    SplitMix64 rng(mix_seed(cfg.seed, "lemma7"));
    VerificationReport rep("lemma7");
    const LorentzParams space = cfg.space_params();
    for (int i = 0; i < cfg.corpus; ++i) {
        std::string spec = "gen:random-bandlimited:" +
                           std::to_string(mix_seed(cfg.seed, "lemma7-f") + i) + ":" +
                           std::to_string(cfg.band);
        GridFunction T = make_from_generator(spec, cfg.m, cfg.dims);
        std::vector<std::vector<std::uint8_t>> sets;
        for (int j = 0; j < cfg.m; ++j) {
            double density = 0.25 + 0.5 * rng.uniform01();
            std::vector<std::uint8_t> mask(static_cast<std::size_t>(cfg.dims[j]), 0);
            std::size_t kept = 0;
            for (auto& c : mask)
                if (rng.uniform01() < density) {
                    c = 1;
                    ++kept;
                }
            if (kept == 0) mask[rng.next() % mask.size()] = 1;
            sets.push_back(std::move(mask));
        }
        std::vector<int> e_axes;
        for (int j = 0; j < cfg.m; ++j)
            if (rng.next() & 1) e_axes.push_back(j);
        rep.append(lemma7_check(T, sets, e_axes, space, "f" + std::to_string(i)));
    }
    return rep;
}

VerificationReport run_theorem1(const ExperimentConfig& cfg) {
    VerificationReport rep("theorem1");
    const LorentzParams space = cfg.space_params();
    int cap = max_block_index(cfg.dims[0]);
    for (int j = 1; j < cfg.m; ++j) cap = std::min(cap, max_block_index(cfg.dims[j]));
    const int hi = std::min(cfg.n_max, cap);
    std::vector<GridFunction> corpus = make_corpus(cfg, "theorem1", true);
    for (std::size_t i = 0; i < corpus.size(); ++i)
        for (int n = cfg.n_min; n <= hi; ++n) {
            std::array<int, 3> nbar{n, n, n};
            rep.append(theorem1_check(corpus[i], std::span<const int>(nbar.data(), cfg.m), space,
                                      "f" + std::to_string(i) + ":n=" + std::to_string(n)));
        }
    rep.sort_rows();
    return rep;
}

VerificationReport run_theorem2(const ExperimentConfig& cfg) {
    VerificationReport rep("theorem2");
    const LorentzParams target = cfg.target_params(), space = cfg.space_params();
    const double scale = max_block_index(cfg.dims[0]);
    std::vector<GridFunction> corpus = make_corpus(cfg, "theorem2", true);
    for (std::size_t i = 0; i < corpus.size(); ++i)
        rep.append(theorem2_check(corpus[i], target, space, "f" + std::to_string(i), scale));
    return rep;
}

VerificationReport run_theorem3(const ExperimentConfig& cfg) {
    VerificationReport rep("theorem3");
    const LorentzParams target = cfg.target_params();
    const BesovParams bp = cfg.besov_params();
    const double scale = max_block_index(cfg.dims[0]);
    std::vector<GridFunction> corpus = make_corpus(cfg, "theorem3", true);
    for (std::size_t i = 0; i < corpus.size(); ++i)
        rep.append(theorem3_check(corpus[i], bp, target, "f" + std::to_string(i), scale));
    return rep;
}

VerificationReport run_theorem4(const ExperimentConfig& cfg) {
    SplitMix64 rng(mix_seed(cfg.seed, "theorem4"));
    VerificationReport rep("theorem4");
    const LorentzParams target = cfg.target_params();
    int cap = max_block_index(cfg.dims[0]);
    for (int j = 1; j < cfg.m; ++j) cap = std::min(cap, max_block_index(cfg.dims[j]));
    const int hi = std::min(cfg.n_max, cap);
    for (int i = 0; i < cfg.corpus; ++i) {
        BlockSeries series;
        series.m = cfg.m;
        for (int s = 1; s <= hi; ++s) {
            std::array<int, 3> sb{s, cfg.m > 1 ? s : 0, cfg.m > 2 ? s : 0};
            series.terms.emplace_back(sb, std::ldexp(0.5 + rng.uniform01(), -s));
        }
        rep.append(theorem4_check(series, std::span<const double>(cfg.lambda).first(cfg.m), target,
                                  cfg.dims, "f" + std::to_string(i)));
    }
    return rep;
}

VerificationReport run_theorem5(const ExperimentConfig& cfg) {
    const LorentzParams target = cfg.target_params();
    const BesovParams bp = cfg.besov_params();
    std::vector<GridFunction> corpus = make_corpus(cfg, "theorem5", true);
    return theorem5_check(bp, target, std::span<const double>(cfg.gamma).first(cfg.m), cfg.n_min,
                          cfg.n_max, corpus);
}

}  // namespace

LorentzParams ExperimentConfig::target_params() const {
    LorentzParams p;
    for (int j = 0; j < m; ++j) {
        p.psi.push_back(PhiFunction::parse(psi_specs[static_cast<std::size_t>(j)]));
        p.tau.push_back(tau[static_cast<std::size_t>(j)]);
    }
    return p;
}

LorentzParams ExperimentConfig::space_params() const {
    LorentzParams p;
    for (int j = 0; j < m; ++j) {
        p.psi.push_back(PhiFunction::parse(phi_specs[static_cast<std::size_t>(j)]));
        p.tau.push_back(eta[static_cast<std::size_t>(j)]);
    }
    return p;
}

BesovParams ExperimentConfig::besov_params() const {
    BesovParams bp;
    bp.space = space_params();
    for (int j = 0; j < m; ++j) {
        bp.r.push_back(r[static_cast<std::size_t>(j)]);
        bp.theta.push_back(theta[static_cast<std::size_t>(j)]);
    }
    return bp;
}

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> ids{
        "lemma2",    "lemma4",    "lemma5",    "relation9",  "relation5",
        "relation18", "hardy1",   "hardy6",    "lemma7",     "theorem1",
        "theorem2",  "theorem3",  "theorem4",  "theorem5"};
    return ids;
}

ExperimentConfig parse_config(std::string_view text, const std::string& origin) {
    ExperimentConfig cfg;
    std::vector<std::string> errors;
    auto fail = [&](int line, const std::string& msg) {
        errors.push_back(origin + ":" + std::to_string(line) + ": " + msg);
    };

    std::map<std::string, Entry> entries;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (std::size_t hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        std::string_view line = trim(raw);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(line_no, "expected key = value");
            continue;
        }
        std::string key{trim(line.substr(0, eq))};
        std::string value{trim(line.substr(eq + 1))};
        if (key.empty()) {
            fail(line_no, "empty key");
            continue;
        }
        if (key == "source") {
            cfg.sources.push_back(value);
            continue;
        }
        if (auto [it, fresh] = entries.insert({key, Entry{value, line_no}}); !fresh) {
            fail(line_no, "duplicate key '" + key + "'");
            continue;
        }
    }

    static const std::vector<std::string> keys{
        "m",     "grid",   "checks", "psi",    "phi",   "tau",     "eta",  "theta",
        "r",     "gamma",  "lambda", "n_min",  "n_max", "corpus",  "band", "depth",
        "q",     "variant", "seed",  "out",    "threads"};
    for (const auto& [key, e] : entries)
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            fail(e.line, "unknown key '" + key + "'");

    auto get_int = [&](const char* key, int& out, int lo) {
        auto it = entries.find(key);
        if (it == entries.end()) return;
        int v = 0;
        if (!to_int(it->second.value, v) || v < lo)
            fail(it->second.line, std::string("invalid value for '") + key + "'");
        else
            out = v;
    };

    get_int("m", cfg.m, 1);
    if (cfg.m > 3) fail(entries["m"].line, "m must be 1, 2 or 3");

    if (auto it = entries.find("grid"); it != entries.end()) {
        std::vector<std::string> toks = split_list(it->second.value);
        if (static_cast<int>(toks.size()) != cfg.m)
            fail(it->second.line, "grid needs exactly m entries");
        else {
            cfg.dims = {1, 1, 1};
            for (int j = 0; j < cfg.m; ++j) {
                int n = 0;
                if (!to_int(toks[static_cast<std::size_t>(j)], n) || n < 4 || (n & (n - 1)) != 0)
                    fail(it->second.line, "grid sides must be powers of two >= 4");
                else
                    cfg.dims[j] = n;
            }
        }
    } else if (cfg.m > 1) {
        for (int j = 0; j < cfg.m; ++j) cfg.dims[j] = 64;
    }

    if (auto it = entries.find("checks"); it != entries.end()) {
        for (const std::string& id : split_list(it->second.value)) {
            const auto& ids = known_checks();
            if (std::find(ids.begin(), ids.end(), id) == ids.end())
                fail(it->second.line, "unknown check '" + id + "'");
            else if (std::find(cfg.checks.begin(), cfg.checks.end(), id) != cfg.checks.end())
                fail(it->second.line, "duplicate check '" + id + "'");
            else
                cfg.checks.push_back(id);
        }
    }

    auto get_specs = [&](const char* key, std::vector<std::string>& out) {
        auto it = entries.find(key);
        if (it == entries.end()) {
            out.resize(static_cast<std::size_t>(cfg.m), out[0]);
            return;
        }
        std::vector<std::string> toks = split_list(it->second.value);
        if (static_cast<int>(toks.size()) != cfg.m) {
            fail(it->second.line, std::string(key) + " needs exactly m entries");
            return;
        }
        for (const std::string& spec : toks) {
            try {
                PhiFunction::parse(spec);
            } catch (const std::exception& e) {
                fail(it->second.line, e.what());
            }
        }
        out = std::move(toks);
    };
    get_specs("psi", cfg.psi_specs);
    get_specs("phi", cfg.phi_specs);

    auto fix_list = [&](const char* key, std::vector<double>& out) {
        auto it = entries.find(key);
        if (it == entries.end()) {
            out.resize(static_cast<std::size_t>(cfg.m), out[0]);  // default broadcast
            return;
        }
        std::vector<double> vs;
        for (const std::string& tok : split_list(it->second.value)) {
            double v = 0.0;
            if (!to_double(tok, v) || !(v > 0.0)) {
                fail(it->second.line, std::string("invalid value for '") + key + "'");
                return;
            }
            vs.push_back(v);
        }
        if (static_cast<int>(vs.size()) != cfg.m) {
            fail(it->second.line, std::string(key) + " needs exactly m entries");
            return;
        }
        out = std::move(vs);
    };
    fix_list("tau", cfg.tau);
    fix_list("eta", cfg.eta);
    fix_list("theta", cfg.theta);
    fix_list("r", cfg.r);
    fix_list("gamma", cfg.gamma);
    fix_list("lambda", cfg.lambda);

    get_int("n_min", cfg.n_min, 1);
    get_int("n_max", cfg.n_max, 1);
    if (cfg.n_max < cfg.n_min) {
        int line = entries.count("n_max") ? entries["n_max"].line
                                          : (entries.count("n_min") ? entries["n_min"].line : 0);
        fail(line, "need n_min <= n_max");
    }
    get_int("corpus", cfg.corpus, 1);
    get_int("band", cfg.band, 1);
    get_int("depth", cfg.depth, 1);
    get_int("threads", cfg.threads, 1);

    if (auto it = entries.find("q"); it != entries.end()) {
        double v = 0.0;
        if (!to_double(it->second.value, v) || !(v > 0.0))
            fail(it->second.line, "invalid value for 'q'");
        else
            cfg.q = v;
    }
    if (auto it = entries.find("variant"); it != entries.end()) {
        if (it->second.value != "a" && it->second.value != "b")
            fail(it->second.line, "variant must be a or b");
        else
            cfg.variant = it->second.value[0];
    }
    if (auto it = entries.find("seed"); it != entries.end()) {
        if (!to_u64(it->second.value, cfg.seed))
            fail(it->second.line, "invalid value for 'seed'");
        else
            cfg.seed_set = true;
    }
    if (auto it = entries.find("out"); it != entries.end()) cfg.out_dir = it->second.value;

    // A generated corpus needs the seed to be reproducible.
    auto uses_rng = [&](const std::string& id) {
        if (id == "hardy1" || id == "hardy6" || id == "lemma7" || id == "theorem4") return true;
        bool grid_check = id == "theorem1" || id == "theorem2" || id == "theorem3" ||
                          id == "theorem5";
        return grid_check && cfg.sources.empty();
    };
    if (!cfg.seed_set)
        for (const std::string& id : cfg.checks)
            if (uses_rng(id)) {
                fail(0, "seed required by check '" + id + "'");
                break;
            }

    if (!errors.empty()) {
        std::string joined;
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (i) joined += '\n';
            joined += errors[i];
        }
        throw std::invalid_argument(joined);
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

VerificationReport run_check(const ExperimentConfig& cfg, const std::string& check_id) {
    if (check_id == "lemma2")
        return lemma2_check(PhiFunction::parse(cfg.psi_specs[0]), cfg.q, cfg.depth);
    if (check_id == "lemma4")
        return lemma4_check(PhiFunction::parse(cfg.psi_specs[0]),
                            PhiFunction::parse(cfg.phi_specs[0]), cfg.theta[0], cfg.depth);
    if (check_id == "lemma5")
        return lemma5_check(PhiFunction::parse(cfg.psi_specs[0]), cfg.theta[0], cfg.depth);
    if (check_id == "relation9")
        return relation9_check(PhiFunction::parse(cfg.psi_specs[0]), cfg.depth);
    if (check_id == "relation5")
        return dirichlet_norm_check(PhiFunction::parse(cfg.phi_specs[0]), cfg.eta[0], cfg.n_max);
    if (check_id == "relation18")
        return block_norm_check(cfg.target_params(), max_block_index(cfg.dims[0]), cfg.dims[0]);
    if (check_id == "hardy1") return run_hardy1(cfg);
    if (check_id == "hardy6") return run_hardy6(cfg);
    if (check_id == "lemma7") return run_lemma7(cfg);
    if (check_id == "theorem1") return run_theorem1(cfg);
    if (check_id == "theorem2") return run_theorem2(cfg);
    if (check_id == "theorem3") return run_theorem3(cfg);
    if (check_id == "theorem4") return run_theorem4(cfg);
    if (check_id == "theorem5") return run_theorem5(cfg);
    throw std::invalid_argument("unknown check '" + check_id + "'");
}

int run(const ExperimentConfig& cfg) {
    if (cfg.checks.empty()) return 0;
    std::filesystem::create_directories(cfg.out_dir);

    std::vector<VerificationReport> reports;
    reports.reserve(cfg.checks.size());
    if (cfg.threads <= 1) {
        for (const std::string& id : cfg.checks) reports.push_back(run_check(cfg, id));
    } else {
        std::counting_semaphore<64> slots(std::min(cfg.threads, 64));
        std::vector<std::future<VerificationReport>> futures;
        for (const std::string& id : cfg.checks)
            futures.push_back(std::async(std::launch::async, [&cfg, &slots, id] {
                slots.acquire();
                try {
                    VerificationReport rep = run_check(cfg, id);
                    slots.release();
                    return rep;
                } catch (...) {
                    slots.release();
                    throw;
                }
            }));
        for (auto& fut : futures) reports.push_back(fut.get());
    }

    bool clean = true;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        reports[i].write_csv(std::filesystem::path(cfg.out_dir) / (cfg.checks[i] + ".csv"));
        clean = clean && reports[i].clean();
    }
    return clean ? 0 : 1;
}

}  // namespace lorcross

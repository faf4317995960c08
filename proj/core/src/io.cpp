#include "lorcross/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace lorcross {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

double parse_double_at(const std::string& tok, const std::string& where) {
    const std::string t = trim(tok);
    double v = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size())
        throw std::invalid_argument(where + ": expected a number, got '" + tok + "'");
    return v;
}

long parse_int_at(const std::string& tok, const std::string& where) {
    const std::string t = trim(tok);
    long v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size())
        throw std::invalid_argument(where + ": expected an integer, got '" + tok + "'");
    return v;
}

// Seeds span the full unsigned 64-bit range, so they get their own parser.
std::uint64_t parse_u64_at(const std::string& tok, const std::string& where) {
    const std::string t = trim(tok);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size())
        throw std::invalid_argument(where + ": expected an unsigned integer, got '" + tok + "'");
    return v;
}

std::string loc(const std::string& origin, int line) {
    return origin + ":" + std::to_string(line);
}

}  // namespace

GridFunction read_grid_samples(std::istream& in, const std::string& origin) {
    std::string line;
    int lineno = 0;

    // Header.
    int m = 0;
    std::array<int, 3> dims{1, 1, 1};
    bool complex_kind = false;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] != '#')
            throw std::invalid_argument(loc(origin, lineno) + ": missing '# m=... dims=... kind=...' header");
        std::istringstream hs(t.substr(1));
        std::string tok;
        bool have_m = false, have_dims = false, have_kind = false;
        while (hs >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(loc(origin, lineno) + ": malformed header token '" + tok + "'");
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (key == "m") {
                m = static_cast<int>(parse_int_at(val, loc(origin, lineno)));
                have_m = true;
            } else if (key == "dims") {
                auto parts = split(val, ',');
                if (parts.size() > 3)
                    throw std::invalid_argument(loc(origin, lineno) + ": at most three grid sizes");
                for (std::size_t j = 0; j < parts.size(); ++j)
                    dims[j] = static_cast<int>(parse_int_at(parts[j], loc(origin, lineno)));
                have_dims = true;
            } else if (key == "kind") {
                if (val == "real")
                    complex_kind = false;
                else if (val == "complex")
                    complex_kind = true;
                else
                    throw std::invalid_argument(loc(origin, lineno) + ": kind must be real or complex");
                have_kind = true;
            } else {
                throw std::invalid_argument(loc(origin, lineno) + ": unknown header key '" + key + "'");
            }
        }
        if (!have_m || !have_dims || !have_kind)
            throw std::invalid_argument(loc(origin, lineno) + ": header needs m=, dims= and kind=");
        have_header = true;
        break;
    }
    if (!have_header) throw std::invalid_argument(origin + ": empty input");

    validate_dims(m, dims);
    GridFunction f = GridFunction::zeros(m, dims);

    std::size_t got = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (got >= f.total())
            throw std::invalid_argument(loc(origin, lineno) + ": more samples than dims allow");
        if (complex_kind) {
            auto parts = split(t, ',');
            if (parts.size() != 2)
                throw std::invalid_argument(loc(origin, lineno) + ": expected 're,im'");
            f.samples[got] = cplx{parse_double_at(parts[0], loc(origin, lineno)),
                                  parse_double_at(parts[1], loc(origin, lineno))};
        } else {
            f.samples[got] = cplx{parse_double_at(t, loc(origin, lineno)), 0.0};
        }
        ++got;
    }
    if (got != f.total())
        throw std::invalid_argument(origin + ": expected " + std::to_string(f.total()) +
                                    " samples, got " + std::to_string(got));
    return f;
}

GridFunction read_grid_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file '" + path.string() + "'");
    return read_grid_samples(in, path.string());
}

namespace {

GridFunction gen_block(const std::string& arg, int m, std::array<int, 3> dims) {
    auto parts = split(arg, ',');
    if (static_cast<int>(parts.size()) != m)
        throw std::invalid_argument("gen:block needs " + std::to_string(m) + " block indices");
    std::array<int, 3> s{0, 0, 0};
    for (int j = 0; j < m; ++j) {
        s[j] = static_cast<int>(parse_int_at(parts[static_cast<std::size_t>(j)], "gen:block"));
        if (s[j] < 0) throw std::invalid_argument("gen:block: indices must be >= 0");
        if (s[j] > max_block_index(dims[j]))
            throw std::invalid_argument("gen:block: index exceeds the Nyquist band of the grid");
    }
    SpectralFunction F = SpectralFunction::zeros(m, dims);
    for (const auto& k : rho_block(std::span<const int>(s.data(), 3), m)) F.set(k, cplx{1.0, 0.0});
    return synthesize(F);
}

GridFunction gen_random_bandlimited(const std::string& seed_s, const std::string& band_s, int m,
                                    std::array<int, 3> dims) {
    const auto seed = parse_u64_at(seed_s, "gen:random-bandlimited");
    const int L = static_cast<int>(parse_int_at(band_s, "gen:random-bandlimited"));
    if (L < 0 || L > 20) throw std::invalid_argument("gen:random-bandlimited: band exponent out of range");

    std::array<int, 3> B{0, 0, 0};
    for (int j = 0; j < m; ++j) B[j] = std::min((1 << L) - 1, dims[j] / 2 - 1);

    SpectralFunction F = SpectralFunction::zeros(m, dims);
    SplitMix64 rng(seed);
    // Fill conjugate-symmetric pairs in a fixed order so the result is real.
    for (int k3 = (m > 2 ? -B[2] : 0); k3 <= (m > 2 ? B[2] : 0); ++k3)
        for (int k2 = (m > 1 ? -B[1] : 0); k2 <= (m > 1 ? B[1] : 0); ++k2)
            for (int k1 = -B[0]; k1 <= B[0]; ++k1) {
                const bool positive = k3 > 0 || (k3 == 0 && (k2 > 0 || (k2 == 0 && k1 > 0)));
                if (k1 == 0 && k2 == 0 && k3 == 0) {
                    F.set({0, 0, 0}, cplx{rng.sym(), 0.0});
                } else if (positive) {
                    cplx v{rng.sym(), rng.sym()};
                    F.set({k1, k2, k3}, v);
                    F.set({-k1, -k2, -k3}, std::conj(v));
                }
            }
    return synthesize(F);
}

GridFunction gen_rect(const std::string& arg, int m, std::array<int, 3> dims) {
    auto parts = split(arg, ',');
    if (static_cast<int>(parts.size()) != m)
        throw std::invalid_argument("gen:rect needs " + std::to_string(m) + " side lengths");
    std::array<double, 3> a{1.0, 1.0, 1.0};
    for (int j = 0; j < m; ++j) {
        a[j] = parse_double_at(parts[static_cast<std::size_t>(j)], "gen:rect");
        if (!(a[j] > 0.0) || a[j] > 1.0)
            throw std::invalid_argument("gen:rect: side lengths must lie in (0, 1]");
    }
    GridFunction f = GridFunction::zeros(m, dims);
    for (int i3 = 0; i3 < dims[2]; ++i3)
        for (int i2 = 0; i2 < dims[1]; ++i2)
            for (int i1 = 0; i1 < dims[0]; ++i1) {
                std::array<int, 3> i{i1, i2, i3};
                bool inside = true;
                for (int j = 0; j < m; ++j)
                    if (!(static_cast<double>(i[j]) < a[j] * dims[j] - 1e-12)) inside = false;
                f.samples[f.index(i)] = cplx{inside ? 1.0 : 0.0, 0.0};
            }
    return f;
}

}  // namespace

GridFunction make_from_generator(const std::string& spec, int m, std::array<int, 3> dims) {
    validate_dims(m, dims);
    auto parts = split(spec, ':');
    if (parts.size() < 2 || parts[0] != "gen")
        throw std::invalid_argument("generator spec must start with 'gen:'");
    const std::string& kind = parts[1];
    if (kind == "block") {
        if (parts.size() != 3) throw std::invalid_argument("usage: gen:block:<s1[,s2[,s3]]>");
        return gen_block(parts[2], m, dims);
    }
    if (kind == "random-bandlimited") {
        if (parts.size() != 4) throw std::invalid_argument("usage: gen:random-bandlimited:<seed>:<L>");
        return gen_random_bandlimited(parts[2], parts[3], m, dims);
    }
    if (kind == "rect") {
        if (parts.size() != 3) throw std::invalid_argument("usage: gen:rect:<a1[,a2[,a3]]>");
        return gen_rect(parts[2], m, dims);
    }
    throw std::invalid_argument("unknown generator '" + kind + "'");
}

GridFunction load_input(const std::string& source, int m, std::array<int, 3> dims) {
    if (source.rfind("gen:", 0) == 0) return make_from_generator(source, m, dims);
    return read_grid_file(source);
}

}  // namespace lorcross

#include "lorcross/phi.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lorcross {

namespace {

constexpr int kProbeDepthMax = 60;    // probe grid t = 2^-j, j = 0..60
constexpr double kTinyT = 0x1p-60;    // quadrature floor
constexpr double kEnvelopeKMax = 100.0;

double parse_double(std::string_view s, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("bad ") + what + " in phi spec: '" +
                                    std::string(s) + "'");
    return v;
}

// Midpoint rule in log coordinates: int_lo^hi f(t) dt/t with 8 subintervals.
template <class F>
double log_midpoint(F&& f, double lo, double hi) {
    const int n = 8;
    const double ulo = std::log(lo), uhi = std::log(hi);
    const double du = (uhi - ulo) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += f(std::exp(ulo + (i + 0.5) * du));
    return acc * du;
}

// int_lo^hi f(t) dt/t over dyadic segments; lo = 0 descends to kTinyT and
// appends a geometric tail estimate from the last two segments.
template <class F>
double log_integral(F&& f, double lo, double hi) {
    if (lo > 0.0) {
        // Split [lo,hi] at powers of two of the ratio so no segment spans
        // more than one octave.
        double acc = 0.0;
        double a = lo;
        while (a < hi) {
            double b = std::min(hi, a * 2.0);
            acc += log_midpoint(f, a, b);
            a = b;
        }
        return acc;
    }
    double acc = 0.0, prev = 0.0, last = 0.0;
    int segments = 0;
    double b = hi;
    while (b > kTinyT) {
        double a = std::max(b * 0.5, kTinyT);
        double seg = log_midpoint(f, a, b);
        acc += seg;
        prev = last;
        last = seg;
        ++segments;
        b = a;
    }
    // Geometric tail below kTinyT.
    if (segments >= 2 && prev > 0.0 && last > 0.0 && last < prev) {
        double rho = last / prev;
        acc += last * rho / (1.0 - rho);
    }
    return acc;
}

}  // namespace

PhiFunction PhiFunction::power(double a) {
    if (!(a > 0.0) || a > 1.0) throw std::domain_error("pow:<a> requires a in (0,1]");
    PhiFunction f;
    f.family_ = Family::power;
    f.a_ = a;
    return f;
}

double PhiFunction::eval_raw(double t) const {
    switch (family_) {
        case Family::power:
            return std::pow(t, a_);
        case Family::power_log:
            return t == 0.0 ? 0.0 : std::pow(t, a_) * std::pow(1.0 + std::log(1.0 / t), b_);
        case Family::envelope: {
            if (t <= 0.0) return 0.0;
            if (t >= knots_.back()) return values_.back();
            auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
            std::size_t i = static_cast<std::size_t>(it - knots_.begin());  // knots_[i-1] <= t < knots_[i]
            double t0 = knots_[i - 1], t1 = knots_[i];
            double v0 = values_[i - 1], v1 = values_[i];
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        }
        case Family::tilde_wrap:
            return t == 0.0 ? 0.0 : t / (*base_)(t);
    }
    return 0.0;
}

double PhiFunction::operator()(double t) const {
    if (!(t >= 0.0) || t > 1.0) throw std::domain_error("phi evaluated outside [0,1]");
    return eval_raw(t);
}

PhiFunction PhiFunction::power_log(double a, double b) {
    if (!(a > 0.0) || a > 1.0) throw std::domain_error("powlog:<a>:<b> requires a in (0,1]");
    PhiFunction f;
    f.family_ = Family::power_log;
    f.a_ = a;
    f.b_ = b;
    if (b == 0.0) return power(a);
    // The raw formula can lose monotonicity (b > 0, near t = 1) or concavity
    // (b < 0).  Probe on the dyadic grid and fall back to the concave
    // envelope of the table when either fails.
    std::vector<double> t(kProbeDepthMax + 1), g(kProbeDepthMax + 1);
    for (int j = 0; j <= kProbeDepthMax; ++j) {
        t[j] = std::ldexp(1.0, -(kProbeDepthMax - j));
        g[j] = f.eval_raw(t[j]);
        if (!(g[j] > 0.0))
            throw std::domain_error("powlog:" + std::to_string(a) + ":" + std::to_string(b) +
                                    " degenerates to 0 on (0,1]");
    }
    bool monotone = true, concave = true;
    double prev_slope = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        double slope = (g[i + 1] - g[i]) / (t[i + 1] - t[i]);
        if (g[i + 1] < g[i] * (1.0 - 1e-12)) monotone = false;
        if (slope > prev_slope * (1.0 + 1e-9) + 1e-300) concave = false;
        prev_slope = slope;
    }
    if (monotone && concave) return f;
    EnvelopeResult env = concave_envelope(t, g);
    env.envelope.spec_override_ = "powlog:" + std::to_string(a) + ":" + std::to_string(b);
    return env.envelope;
}

PhiFunction PhiFunction::parse(std::string_view spec) {
    if (spec.rfind("pow:", 0) == 0) return power(parse_double(spec.substr(4), "exponent"));
    if (spec.rfind("powlog:", 0) == 0) {
        std::string_view rest = spec.substr(7);
        auto colon = rest.find(':');
        if (colon == std::string_view::npos)
            throw std::invalid_argument("powlog spec needs two parameters: '" + std::string(spec) +
                                        "'");
        return power_log(parse_double(rest.substr(0, colon), "exponent"),
                         parse_double(rest.substr(colon + 1), "log exponent"));
    }
    throw std::invalid_argument("unknown phi spec '" + std::string(spec) +
                                "' (expected pow:<a> or powlog:<a>:<b>)");
}

std::string PhiFunction::spec() const {
    if (!spec_override_.empty()) return spec_override_;
    switch (family_) {
        case Family::power:
            return "pow:" + format_sig(a_);
        case Family::power_log:
            return "powlog:" + format_sig(a_) + ":" + format_sig(b_);
        case Family::envelope:
            return "envelope[" + std::to_string(knots_.size()) + " knots]";
        case Family::tilde_wrap:
            return "tilde(" + base_->spec() + ")";
    }
    return "?";
}

PhiFunction tilde(const PhiFunction& phi) {
    if (phi.family_ == PhiFunction::Family::tilde_wrap) return *phi.base_;  // involution
    if (phi.is_power()) {
        if (phi.a_ < 1.0) return PhiFunction::power(1.0 - phi.a_);
        PhiFunction f;  // t/t = 1 on (0,1]: monotone and concave but not continuous at 0
        f.family_ = PhiFunction::Family::tilde_wrap;
        f.base_ = std::make_shared<const PhiFunction>(phi);
        f.non_phi_ = true;
        return f;
    }
    PhiFunction f;
    f.family_ = PhiFunction::Family::tilde_wrap;
    f.base_ = std::make_shared<const PhiFunction>(phi);
    // Discontinuity at 0 shows up as t/phi(t) not vanishing along the probes.
    f.non_phi_ = f.eval_raw(kTinyT) > 1e-6;
    return f;
}

DilationIndices dilation_indices(const PhiFunction& phi, int probe_depth) {
    if (probe_depth < 4) throw std::invalid_argument("dilation_indices needs probe_depth >= 4");
    DilationIndices out;
    out.probe_depth = probe_depth;
    int first = probe_depth - probe_depth / 4 + 1;  // deepest quartile of probes
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int j = first; j <= probe_depth; ++j) {
        double denom = phi(std::ldexp(1.0, -j));
        double numer = phi(std::ldexp(1.0, -j + 1));
        if (!(denom > 0.0))
            throw std::domain_error("dilation_indices: phi vanishes at positive t (degenerate)");
        double r = numer / denom;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    out.alpha = lo;
    out.beta = hi;
    return out;
}

EnvelopeResult concave_envelope(std::span<const double> t, std::span<const double> g) {
    if (t.size() != g.size() || t.empty())
        throw std::invalid_argument("concave_envelope: table sizes mismatch or empty");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || t[i] > 1.0) throw std::domain_error("concave_envelope: t outside (0,1]");
        if (i > 0 && !(t[i] > t[i - 1]))
            throw std::invalid_argument("concave_envelope: t not strictly increasing");
        if (!(g[i] > 0.0)) throw std::domain_error("concave_envelope: non-positive table value");
    }

    // Upper hull of {(0,0)} U {(t_j,g_j)} by monotone chain: keep slopes
    // strictly decreasing left to right.
    std::vector<double> hx{0.0}, hy{0.0};
    for (std::size_t i = 0; i < t.size(); ++i) {
        while (hx.size() >= 2) {
            std::size_t n = hx.size();
            double cross = (hx[n - 1] - hx[n - 2]) * (g[i] - hy[n - 2]) -
                           (t[i] - hx[n - 2]) * (hy[n - 1] - hy[n - 2]);
            if (cross >= 0.0) {  // middle point is on or below the chord: drop it
                hx.pop_back();
                hy.pop_back();
            } else {
                break;
            }
        }
        hx.push_back(t[i]);
        hy.push_back(g[i]);
    }

    // Flatten after the peak so the majorant is non-decreasing.
    std::size_t peak = 0;
    for (std::size_t i = 1; i < hy.size(); ++i)
        if (hy[i] > hy[peak]) peak = i;
    if (peak + 1 < hx.size()) {
        hx.resize(peak + 1);
        hy.resize(peak + 1);
        if (hx.back() < t.back()) {
            hx.push_back(t.back());
            hy.push_back(hy[peak]);
        }
    }

    EnvelopeResult out;
    out.envelope.family_ = PhiFunction::Family::envelope;
    out.envelope.knots_ = std::move(hx);
    out.envelope.values_ = std::move(hy);
    out.K = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        out.K = std::max(out.K, out.envelope.eval_raw(t[i]) / g[i]);
    out.failure = out.K > kEnvelopeKMax;
    return out;
}

double weight_integral(const PhiFunction& psi, double tau, double lo, double hi) {
    if (!(tau > 0.0)) throw std::domain_error("weight_integral: tau must be positive");
    if (!(lo >= 0.0) || !(hi > lo) || hi > 1.0)
        throw std::domain_error("weight_integral: need 0 <= lo < hi <= 1");
    if (psi.is_power()) {
        double p = psi.power_exponent() * tau;
        return (std::pow(hi, p) - std::pow(lo, p)) / p;
    }
    return log_integral([&](double t) { return std::pow(psi.eval_raw(t), tau); }, lo, hi);
}

double inverse_weight_integral(const PhiFunction& psi, double q, double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo) || hi > 1.0)
        throw std::domain_error("inverse_weight_integral: need 0 < lo < hi <= 1");
    if (psi.is_power()) {
        double p = psi.power_exponent() * q;
        return (std::pow(lo, -p) - std::pow(hi, -p)) / p;
    }
    return log_integral([&](double t) { return std::pow(psi.eval_raw(t), -q); }, lo, hi);
}

std::vector<std::string> phi_invariant_violations(const PhiFunction& phi) {
    std::vector<std::string> out;
    if (phi(0.0) != 0.0) out.push_back("phi(0) != 0");
    double prev_t = 0.0, prev_v = 0.0;
    double prev_slope = std::numeric_limits<double>::infinity();
    bool monotone = true, concave = true, positive = true;
    for (int j = kProbeDepthMax; j >= 0; --j) {
        double t = std::ldexp(1.0, -j);
        double v = phi(t);
        if (!(v > 0.0)) positive = false;
        if (v < prev_v * (1.0 - 1e-12)) monotone = false;
        double slope = (v - prev_v) / (t - prev_t);
        if (slope > prev_slope * (1.0 + 1e-9) + 1e-300) concave = false;
        prev_slope = slope;
        prev_t = t;
        prev_v = v;
    }
    if (!positive) out.push_back("phi not positive on (0,1]");
    if (!monotone) out.push_back("phi not non-decreasing");
    if (!concave) out.push_back("phi not concave");
    if (phi.non_phi()) out.push_back("phi discontinuous at 0");
    return out;
}

bool phi_chain_ok(const PhiFunction& phi) {
    DilationIndices di = dilation_indices(phi);
    return di.alpha > 1.0 + 1e-6 && di.beta < 2.0 - 1e-6;
}

void flag_phi_chain(VerificationReport& rep, const PhiFunction& phi, const std::string& label) {
    DilationIndices di = dilation_indices(phi);
    if (!(di.alpha > 1.0 + 1e-6) || !(di.beta < 2.0 - 1e-6))
        rep.flag(label + " index precondition violated (alpha=" + format_sig(di.alpha) +
                 ", beta=" + format_sig(di.beta) + ")");
}

namespace {

// Index-chain precondition shared by the lemma checks, 1 < alpha <= beta < 2
// with a strict margin mirroring the estimator's resolution.
void flag_index_chain(VerificationReport& rep, const PhiFunction& psi, const char* name) {
    flag_phi_chain(rep, psi, name);
}

}  // namespace

VerificationReport lemma2_check(const PhiFunction& psi, double q, int depth) {
    if (!(q > 0.0)) throw std::domain_error("lemma2_check: q must be positive");
    if (depth < 1) throw std::invalid_argument("lemma2_check: depth must be >= 1");
    VerificationReport rep("lemma2");
    flag_index_chain(rep, psi, "psi");
    for (int n = 1; n <= depth; ++n) {
        double x = std::ldexp(1.0, -n);
        double pq = std::pow(psi(x), q);
        rep.add_row("ratio1", n, weight_integral(psi, q, 0.0, x), pq);
        rep.add_row("ratio2", n, inverse_weight_integral(psi, q, x, 1.0), 1.0 / pq);
    }
    rep.sort_rows();
    return rep;
}

VerificationReport lemma4_check(const PhiFunction& psi, const PhiFunction& phi, double theta,
                                int n_max) {
    if (!(theta > 0.0)) throw std::domain_error("lemma4_check: theta must be positive");
    VerificationReport rep("lemma4");
    DilationIndices dpsi = dilation_indices(psi), dphi = dilation_indices(phi);
    if (!(dpsi.alpha > 1.0 + 1e-6) || !(dpsi.beta < dphi.alpha - 1e-6) ||
        !(dphi.beta < 2.0 - 1e-6))
        rep.flag("index chain 1 < alpha_psi <= beta_psi < alpha_phi <= beta_phi < 2 violated"
                 " (alpha_psi=" + format_sig(dpsi.alpha) + ", beta_psi=" + format_sig(dpsi.beta) +
                 ", alpha_phi=" + format_sig(dphi.alpha) + ", beta_phi=" + format_sig(dphi.beta) +
                 ")");
    auto mu = [&](int s) {
        double t = std::ldexp(1.0, -s);
        return psi(t) / phi(t);
    };
    double acc = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        acc += std::pow(mu(n), theta);
        if (n >= 1) rep.add_row("ratio", n, acc, std::pow(mu(n), theta));
    }
    return rep;
}

VerificationReport lemma5_check(const PhiFunction& psi, double theta, int n_max) {
    if (!(theta > 0.0)) throw std::domain_error("lemma5_check: theta must be positive");
    constexpr int kSMax = 64;
    if (n_max >= kSMax) throw std::invalid_argument("lemma5_check: n_max must be < 64");
    VerificationReport rep("lemma5");
    flag_index_chain(rep, psi, "psi");
    auto term = [&](int s) { return std::pow(psi(std::ldexp(1.0, -s)), theta); };
    // Tail beyond S_max bounded geometrically by the last observed ratio.
    double last = term(kSMax), prev = term(kSMax - 1);
    double tail = 0.0;
    if (last > 0.0 && last < prev) {
        double rho = last / prev;
        tail = last * rho / (1.0 - rho);
    } else if (last > 0.0) {
        rep.flag("tail beyond S_max=64 not summable at the observed decay rate");
    }
    for (int n = 1; n <= n_max; ++n) {
        double acc = tail;
        for (int s = kSMax; s >= n; --s) acc += term(s);
        rep.add_row("ratio", n, acc, term(n));
    }
    return rep;
}

VerificationReport relation9_check(const PhiFunction& psi, int n_max) {
    VerificationReport rep("relation9");
    for (int n = 0; n <= n_max; ++n) {
        double hi = std::ldexp(1.0, -n);
        rep.add_row("ratio", n, weight_integral(psi, 1.0, hi * 0.5, hi), psi(hi));
    }
    return rep;
}

}  // namespace lorcross

#include "lorcross/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lorcross {

namespace {

void require_tau(double tau) {
    if (!(tau > 0.0)) throw std::domain_error("integral exponent must be positive");
}

std::vector<double> magnitudes(const GridFunction& f) {
    std::vector<double> mag(f.samples.size());
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(f.samples[i]);
    return mag;
}

// Cell weights int_{i/N}^{(i+1)/N} psi^tau dt/t for i = 0..N-1.
std::vector<double> cell_weights(const PhiFunction& psi, double tau, int N) {
    std::vector<double> w(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i)
        w[static_cast<std::size_t>(i)] =
            weight_integral(psi, tau, static_cast<double>(i) / N, static_cast<double>(i + 1) / N);
    return w;
}

// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(n - 1 - i)] = z;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
    }
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// int_lo^hi t^{e-1} dt, lo > 0.
double power_cell(double e, double lo, double hi) {
    if (std::abs(e) < 1e-12) return std::log(hi / lo);
    return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

}  // namespace

LorentzParams LorentzParams::uniform(const PhiFunction& p, double t, int m) {
    LorentzParams out;
    out.psi.assign(static_cast<std::size_t>(m), p);
    out.tau.assign(static_cast<std::size_t>(m), t);
    return out;
}

double lorentz_norm_iso(const GridFunction& f, const PhiFunction& psi, double tau) {
    require_tau(tau);
    StepFunction s = rearrange_1d(magnitudes(f));
    const int N = static_cast<int>(s.values.size());

    long double acc = 0.0L;
    for (int i = 0; i < N; ++i) {
        double v = s.values[static_cast<std::size_t>(i)];
        if (v == 0.0) break;  // non-increasing, the rest are zero too
        acc += static_cast<long double>(std::pow(v, tau)) *
               weight_integral(psi, tau, static_cast<double>(i) / N, static_cast<double>(i + 1) / N);
    }
    return std::pow(static_cast<double>(acc), 1.0 / tau);
}

double lorentz_norm_aniso(const IteratedRearrangement& r, const LorentzParams& p) {
    if (p.m() != r.m) throw std::invalid_argument("parameter count does not match dimension");
    if (static_cast<int>(p.tau.size()) != r.m)
        throw std::invalid_argument("need one exponent per axis");
    for (double t : p.tau) require_tau(t);

    std::vector<double> cur = r.values;
    std::array<int, 3> d = r.dims;
    for (int axis = 0; axis < r.m; ++axis) {
        const int n = d[0];  // the axis being folded is always fastest
        const std::size_t fibers = cur.size() / static_cast<std::size_t>(n);
        std::vector<double> wts = cell_weights(p.psi[static_cast<std::size_t>(axis)],
                                               p.tau[static_cast<std::size_t>(axis)], n);
        // Inner level integrates |f|^tau_1; later levels raise the previous
        // integral to tau_j / tau_{j-1} under the new weight.
        const double expo = (axis == 0)
                                ? p.tau[0]
                                : p.tau[static_cast<std::size_t>(axis)] /
                                      p.tau[static_cast<std::size_t>(axis - 1)];
        std::vector<double> next(fibers);
        for (std::size_t fb = 0; fb < fibers; ++fb) {
            long double acc = 0.0L;
            for (int i = 0; i < n; ++i) {
                double v = cur[fb * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
                if (v != 0.0) acc += static_cast<long double>(std::pow(v, expo)) *
                                     wts[static_cast<std::size_t>(i)];
            }
            next[fb] = static_cast<double>(acc);
        }
        cur = std::move(next);
        d = {d[1], d[2], 1};
    }
    return std::pow(cur[0], 1.0 / p.tau[static_cast<std::size_t>(r.m - 1)]);
}

double lorentz_norm_aniso(const GridFunction& f, const LorentzParams& p) {
    return lorentz_norm_aniso(iterated_rearrangement(f), p);
}

double lebesgue_norm(const GridFunction& f, double q) {
    require_tau(q);
    long double acc = 0.0L;
    for (const cplx& c : f.samples) acc += std::pow(std::abs(c), static_cast<long double>(q));
    acc /= static_cast<long double>(f.total());
    return static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(q)));
}

double classical_lorentz_norm(const GridFunction& f, double q, double tau) {
    require_tau(q);
    require_tau(tau);
    StepFunction s = rearrange_1d(magnitudes(f));
    const int N = static_cast<int>(s.values.size());
    if (s.values[0] == 0.0) return 0.0;

    // integral_0^1 A(t)^tau t^{tau/q - tau - 1} dt with A(t) = int_0^t f*.
    // A is piecewise linear with slope v_i on cell i, so A(t) = alpha_i + v_i t
    // there, alpha_i >= 0.
    const double c1 = tau / q - tau;  // cell integrand is (alpha + v t)^tau t^{c1 - 1}
    const bool integer_tau = std::abs(tau - std::round(tau)) < 1e-12 && tau <= 40.5;
    const int itau = static_cast<int>(std::round(tau));

    static thread_local std::vector<double> gx, gw;
    if (!integer_tau && gx.empty()) gauss_legendre(16, gx, gw);

    long double total = 0.0L;
    // First cell: A(t) = v_0 t exactly.
    total += static_cast<long double>(std::pow(s.values[0], tau)) *
             std::pow(1.0 / N, tau / q) / (tau / q);

    long double A = static_cast<long double>(s.values[0]) / N;
    for (int i = 1; i < N; ++i) {
        double v = s.values[static_cast<std::size_t>(i)];
        double t0 = static_cast<double>(i) / N, t1 = static_cast<double>(i + 1) / N;
        double alpha = static_cast<double>(A) - v * t0;
        if (integer_tau) {
            long double cell = 0.0L;
            for (int k = 0; k <= itau; ++k) {
                double coef = binom(itau, k) * std::pow(alpha, itau - k) * std::pow(v, k);
                if (coef != 0.0) cell += static_cast<long double>(coef) * power_cell(k + c1, t0, t1);
            }
            total += cell;
        } else {
            long double cell = 0.0L;
            const double half = 0.5 * (t1 - t0), mid = 0.5 * (t0 + t1);
            for (std::size_t g = 0; g < gx.size(); ++g) {
                double t = mid + half * gx[g];
                cell += static_cast<long double>(gw[g]) * std::pow(alpha + v * t, tau) *
                        std::pow(t, c1 - 1.0);
            }
            total += cell * half;
        }
        A += static_cast<long double>(v) / N;
    }
    return std::pow(static_cast<double>(total) * (tau / q), 1.0 / tau);
}

VerificationReport block_norm_check(const LorentzParams& p, int s_max, int N) {
    const int m = p.m();
    VerificationReport rep("relation18");
    std::array<int, 3> dims{1, 1, 1};
    for (int j = 0; j < m; ++j) {
        dims[j] = N;
        flag_phi_chain(rep, p.psi[static_cast<std::size_t>(j)],
                       "psi[" + std::to_string(j + 1) + "]");
    }
    validate_dims(m, dims);
    if (s_max > max_block_index(N))
        throw std::invalid_argument("block scale exceeds the Nyquist band of the grid");

    for (int s = 0; s <= s_max; ++s) {
        std::array<int, 3> sb{0, 0, 0};
        for (int j = 0; j < m; ++j) sb[j] = s;
        SpectralFunction F = SpectralFunction::zeros(m, dims);
        for (const auto& k : rho_block(std::span<const int>(sb.data(), 3), m))
            F.set(k, cplx{1.0, 0.0});
        double lhs = lorentz_norm_aniso(synthesize(F), p);
        double rhs = 1.0;
        for (int j = 0; j < m; ++j)
            rhs *= std::ldexp(1.0, s) * p.psi[static_cast<std::size_t>(j)](std::ldexp(1.0, -s));
        rep.add_row("s=" + std::to_string(s), s, lhs, rhs);
    }
    return rep;
}

VerificationReport dirichlet_norm_check(const PhiFunction& phi, double eta, int n_max,
                                        int oversample) {
    require_tau(eta);
    if (n_max < 1) throw std::invalid_argument("need at least one kernel degree");
    if (oversample < 4 || (oversample & (oversample - 1)) != 0)
        throw std::invalid_argument("oversample must be a power of two >= 4");

    PhiFunction pt = tilde(phi);
    VerificationReport rep("relation5");
    flag_phi_chain(rep, pt, "phi~");
    if (pt.non_phi()) rep.flag("phi~ fails the Phi invariants (phi close to pow:1)");

    for (int j = 1; j <= n_max; ++j) {
        const int n = 1 << j;
        const int N = oversample * n;
        GridFunction D = dirichlet_kernel(n, N);
        double lhs = lorentz_norm_iso(D, pt, eta);
        double rhs = n * pt(1.0 / n);
        rep.add_row("n=" + std::to_string(n), j, lhs, rhs);
    }
    return rep;
}

}  // namespace lorcross

#include "lorcross/besov.hpp"

#include <cmath>
#include <stdexcept>

namespace lorcross {

namespace {

double ell_norm(std::span<const double> v, double theta) {
    if (theta == kEllSup) {
        double peak = 0.0;
        for (double x : v) peak = std::max(peak, x);
        return peak;
    }
    long double acc = 0.0L;
    for (double x : v)
        if (x != 0.0) acc += std::pow(static_cast<long double>(x), static_cast<long double>(theta));
    return static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(theta)));
}

void check_besov_params(const BesovParams& bp) {
    const int m = bp.m();
    if (static_cast<int>(bp.r.size()) != m || static_cast<int>(bp.theta.size()) != m)
        throw std::invalid_argument("need one smoothness and one summation exponent per axis");
    for (double r : bp.r)
        if (!(r > 0.0)) throw std::domain_error("smoothness exponents must be positive");
    for (double t : bp.theta)
        if (!(t > 0.0)) throw std::domain_error("summation exponents must be positive");
}

}  // namespace

double mixed_ell_norm(std::span<const double> values, std::span<const int> dims,
                      std::span<const double> thetas) {
    if (dims.size() != thetas.size()) throw std::invalid_argument("one exponent per axis");
    std::size_t total = 1;
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("box sides must be >= 1");
        total *= static_cast<std::size_t>(d);
    }
    if (values.size() != total) throw std::invalid_argument("value count does not match box");
    for (double t : thetas)
        if (!(t > 0.0)) throw std::domain_error("sequence exponents must be positive");
    for (double v : values)
        if (!(v >= 0.0)) throw std::domain_error("sequence norm requires non-negative entries");

    std::vector<double> cur(values.begin(), values.end());
    for (std::size_t axis = 0; axis < dims.size(); ++axis) {
        const std::size_t n = static_cast<std::size_t>(dims[axis]);
        const std::size_t fibers = cur.size() / n;
        std::vector<double> next(fibers);
        for (std::size_t f = 0; f < fibers; ++f)
            next[f] = ell_norm(std::span<const double>(cur.data() + f * n, n), thetas[axis]);
        cur = std::move(next);
    }
    return cur[0];
}

double besov_seminorm(const GridFunction& f, const BesovParams& bp) {
    check_besov_params(bp);
    const int m = bp.m();
    if (m != f.m) throw std::invalid_argument("parameter count does not match dimension");

    SpectralFunction F = analyze(f);
    if (!is_zero_mean(F))
        throw std::domain_error(
            "seminorm needs a zero-mean spectrum (every coefficient with some k_j = 0 must vanish)");

    std::array<int, 3> S{1, 1, 1};
    for (int j = 0; j < m; ++j) S[j] = max_block_index(f.dims[j]);

    std::vector<int> box(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) box[static_cast<std::size_t>(j)] = S[j];

    std::vector<double> u;
    u.reserve(static_cast<std::size_t>(S[0]) * S[1] * S[2]);
    std::array<int, 3> s{1, 1, 1};
    for (s[2] = 1; s[2] <= (m > 2 ? S[2] : 1); ++s[2])
        for (s[1] = 1; s[1] <= (m > 1 ? S[1] : 1); ++s[1])
            for (s[0] = 1; s[0] <= S[0]; ++s[0]) {
                std::array<int, 3> sb{s[0], m > 1 ? s[1] : 0, m > 2 ? s[2] : 0};
                double nb = lorentz_norm_aniso(
                    dyadic_block(F, std::span<const int>(sb.data(), 3)), bp.space);
                double w = 1.0;
                for (int j = 0; j < m; ++j)
                    w *= std::pow(2.0, bp.r[static_cast<std::size_t>(j)] * sb[j]);
                u.push_back(w * nb);
            }
    return mixed_ell_norm(u, box, bp.theta);
}

double besov_class_norm(const GridFunction& f, const BesovParams& bp) {
    return lorentz_norm_aniso(f, bp.space) + besov_seminorm(f, bp);
}

GridFunction normalize_to_ball(const GridFunction& f, const BesovParams& bp) {
    double n = besov_class_norm(f, bp);
    if (!(n > 0.0)) throw std::domain_error("zero function cannot be normalised to the class ball");
    GridFunction out = f;
    for (cplx& c : out.samples) c /= n;
    return out;
}

std::vector<double> mu_weights(const PhiFunction& psi, const PhiFunction& phi, int s_max) {
    if (s_max < 0) throw std::invalid_argument("need s_max >= 0");
    std::vector<double> mu(static_cast<std::size_t>(s_max) + 1);
    for (int s = 0; s <= s_max; ++s) {
        double t = std::ldexp(1.0, -s);
        mu[static_cast<std::size_t>(s)] = psi(t) / phi(t);
    }
    return mu;
}

Condition13 condition13_eval(const PhiFunction& psi, const PhiFunction& phi, double r, double tau,
                             double theta, int s_max) {
    if (!(r > 0.0) || !(tau > 0.0) || !(theta > 0.0))
        throw std::domain_error("exponents must be positive");
    if (s_max < 8) throw std::invalid_argument("need s_max >= 8");

    Condition13 out;
    if (theta == kEllSup)
        out.epsilon = tau;
    else if (theta > tau)
        out.epsilon = tau * theta / (theta - tau);
    else
        out.epsilon = kEllSup;

    std::vector<double> mu = mu_weights(psi, phi, s_max);
    std::vector<double> w(mu.size());
    for (int s = 0; s <= s_max; ++s)
        w[static_cast<std::size_t>(s)] = mu[static_cast<std::size_t>(s)] * std::pow(2.0, -r * s);

    const double rho = w[w.size() - 1] > 0.0 && w[w.size() - 2] > 0.0
                           ? w[w.size() - 1] / w[w.size() - 2]
                           : 0.0;

    if (out.epsilon == kEllSup) {
        double peak = 0.0;
        for (double x : w) peak = std::max(peak, x);
        out.value = peak;
        out.finite = rho <= 1.0 + 1e-9;
    } else {
        long double acc = 0.0L;
        for (double x : w)
            if (x > 0.0) acc += std::pow(static_cast<long double>(x),
                                         static_cast<long double>(out.epsilon));
        const double rho_e = std::pow(rho, out.epsilon);
        if (rho < 1.0 - 1e-9 && rho_e < 1.0) {
            long double last = std::pow(static_cast<long double>(w.back()),
                                        static_cast<long double>(out.epsilon));
            acc += last * rho_e / (1.0 - rho_e);
            out.finite = true;
        } else {
            out.finite = false;
        }
        out.value = static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(out.epsilon)));
    }
    return out;
}

}  // namespace lorcross

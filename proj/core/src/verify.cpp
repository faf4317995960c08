#include "lorcross/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lorcross {

namespace {

constexpr double kPremiseCap = 1e6;

void require_positive_weights(std::span<const double> a) {
    for (double x : a)
        if (!(x > 0.0)) throw std::domain_error("weight sequences must be strictly positive");
}

void require_non_negative(std::span<const double> b) {
    for (double x : b)
        if (!(x >= 0.0)) throw std::domain_error("summand sequences must be non-negative");
}

// Premise constant: head (variant 'a') or tail (variant 'b') partial sums of
// the weights, divided by the weight itself, maximised over the index range.
double premise_constant(std::span<const double> a, char variant) {
    long double run = 0.0L;
    double A = 0.0;
    if (variant == 'a') {
        for (std::size_t n = 0; n < a.size(); ++n) {
            run += a[n];
            A = std::max(A, static_cast<double>(run) / a[n]);
        }
    } else {
        for (std::size_t n = a.size(); n-- > 0;) {
            run += a[n];
            A = std::max(A, static_cast<double>(run) / a[n]);
        }
    }
    return A;
}

void check_variant(char variant) {
    if (variant != 'a' && variant != 'b')
        throw std::invalid_argument("variant must be 'a' or 'b'");
}

// Cumulative sums of a box array along one axis (suffix for variant 'a',
// prefix for variant 'b'), layout axis 1 fastest.
void cumulate_axis(std::vector<double>& data, const std::array<int, 3>& dims, int axis,
                   char variant) {
    const int n = dims[axis];
    if (n == 1) return;
    std::size_t stride = 1;
    for (int a = 0; a < axis; ++a) stride *= static_cast<std::size_t>(dims[a]);
    const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    const std::size_t fibers = total / static_cast<std::size_t>(n);
    for (std::size_t f = 0; f < fibers; ++f) {
        std::size_t lo = f % stride;
        std::size_t hi = f / stride;
        std::size_t base = lo + hi * stride * static_cast<std::size_t>(n);
        if (variant == 'a') {
            for (int i = n - 2; i >= 0; --i)
                data[base + static_cast<std::size_t>(i) * stride] +=
                    data[base + (static_cast<std::size_t>(i) + 1) * stride];
        } else {
            for (int i = 1; i < n; ++i)
                data[base + static_cast<std::size_t>(i) * stride] +=
                    data[base + (static_cast<std::size_t>(i) - 1) * stride];
        }
    }
}

// Weighted fold sum_{n_m} a_m [ ... [ sum_{n_1} a_1 V^{theta_1} ]^{theta_2/theta_1} ... ],
// rooted by 1/theta_m.
double weighted_fold(std::vector<double> vals, const std::vector<std::vector<double>>& a,
                     std::span<const double> theta) {
    const std::size_t m = a.size();
    for (std::size_t axis = 0; axis < m; ++axis) {
        const std::size_t n = a[axis].size();
        const std::size_t fibers = vals.size() / n;
        const double expo = axis == 0 ? theta[0] : theta[axis] / theta[axis - 1];
        std::vector<double> next(fibers);
        for (std::size_t f = 0; f < fibers; ++f) {
            long double acc = 0.0L;
            for (std::size_t i = 0; i < n; ++i) {
                double v = vals[f * n + i];
                if (v != 0.0)
                    acc += static_cast<long double>(a[axis][i]) * std::pow(v, expo);
            }
            next[f] = static_cast<double>(acc);
        }
        vals = std::move(next);
    }
    return std::pow(vals[0], 1.0 / theta[m - 1]);
}

// 1 < alpha_psi <= beta_psi < alpha_phi <= beta_phi < 2 with margins, flagged
// per axis.
void flag_pair_chain(VerificationReport& rep, const PhiFunction& psi, const PhiFunction& phi,
                     int axis) {
    DilationIndices dp = dilation_indices(psi), df = dilation_indices(phi);
    if (!(dp.alpha > 1.0 + 1e-6) || !(dp.beta < df.alpha - 1e-6) || !(df.beta < 2.0 - 1e-6))
        rep.flag("axis " + std::to_string(axis + 1) +
                 ": index chain 1 < alpha_psi <= beta_psi < alpha_phi <= beta_phi < 2 violated"
                 " (alpha_psi=" + format_sig(dp.alpha) + ", beta_psi=" + format_sig(dp.beta) +
                 ", alpha_phi=" + format_sig(df.alpha) + ", beta_phi=" + format_sig(df.beta) + ")");
}

// Norms of every dyadic block with s_j in 1..S_j, row-major (s_1 fastest).
std::vector<double> block_norm_box(const SpectralFunction& F, const std::array<int, 3>& S,
                                   const LorentzParams& p) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(S[0]) * S[1] * S[2]);
    std::array<int, 3> s{0, 0, 0};
    const int m = F.m;
    for (s[2] = 1; s[2] <= S[2]; ++s[2])
        for (s[1] = 1; s[1] <= S[1]; ++s[1])
            for (s[0] = 1; s[0] <= S[0]; ++s[0]) {
                std::array<int, 3> sb{s[0], m > 1 ? s[1] : 0, m > 2 ? s[2] : 0};
                out.push_back(lorentz_norm_aniso(
                    dyadic_block(F, std::span<const int>(sb.data(), 3)), p));
            }
    return out;
}

double max_abs_coeff(const SpectralFunction& F) {
    double peak = 0.0;
    for (const cplx& c : F.coeff) peak = std::max(peak, std::abs(c));
    return peak;
}

}  // namespace

GridFunction BlockSeries::realize(std::array<int, 3> dims) const {
    validate_dims(m, dims);
    SpectralFunction F = SpectralFunction::zeros(m, dims);
    for (const auto& [s, w] : terms) {
        for (int j = 0; j < m; ++j)
            if (s[j] > max_block_index(dims[j]))
                throw std::invalid_argument("series block exceeds the Nyquist band of the grid");
        for (const auto& k : rho_block(std::span<const int>(s.data(), 3), m))
            F.set(k, F.at(k) + cplx{w, 0.0});
    }
    return synthesize(F);
}

int BlockSeries::max_scale() const {
    int peak = 0;
    for (const auto& [s, w] : terms)
        for (int j = 0; j < m; ++j) peak = std::max(peak, s[j]);
    return peak;
}

VerificationReport hardy1_check(std::span<const double> a, std::span<const double> b, double theta,
                                char variant, const std::string& label) {
    check_variant(variant);
    if (!(theta > 0.0)) throw std::domain_error("theta must be positive");
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("need matching sequences of length >= 2");
    require_positive_weights(a);
    require_non_negative(b);

    const std::size_t n = a.size();
    const double A = premise_constant(a, variant);

    std::vector<double> S(n);
    long double run = 0.0L;
    if (variant == 'a') {
        for (std::size_t i = n; i-- > 0;) {
            run += b[i];
            S[i] = static_cast<double>(run);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            run += b[i];
            S[i] = static_cast<double>(run);
        }
    }

    long double lhs = 0.0L, rhs = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        if (S[i] > 0.0) lhs += static_cast<long double>(a[i]) * std::pow(S[i], theta);
        if (b[i] > 0.0) rhs += static_cast<long double>(a[i]) * std::pow(b[i], theta);
    }

    VerificationReport rep("hardy1");
    if (A > kPremiseCap) rep.flag("premise constant exceeds 1e6 (A=" + format_sig(A) + ")");
    rep.add_row(label + " A=" + format_sig(A), static_cast<double>(n - 1),
                static_cast<double>(lhs), static_cast<double>(rhs));
    return rep;
}

VerificationReport hardy6_check(const std::vector<std::vector<double>>& a,
                                std::span<const double> b, std::span<const int> bdims,
                                std::span<const double> theta, char variant,
                                const std::string& label) {
    check_variant(variant);
    const int m = static_cast<int>(bdims.size());
    if (m < 1 || m > 3) throw std::invalid_argument("box rank must be 1, 2 or 3");
    if (static_cast<int>(a.size()) != m || static_cast<int>(theta.size()) != m)
        throw std::invalid_argument("need one weight sequence and one exponent per axis");

    std::array<int, 3> dims{1, 1, 1};
    std::size_t total = 1;
    for (int j = 0; j < m; ++j) {
        if (bdims[j] < 2) throw std::invalid_argument("box sides must be >= 2");
        if (static_cast<int>(a[static_cast<std::size_t>(j)].size()) != bdims[j])
            throw std::invalid_argument("weight length must match the box side");
        require_positive_weights(a[static_cast<std::size_t>(j)]);
        dims[j] = bdims[j];
        total *= static_cast<std::size_t>(bdims[j]);
        if (!(theta[j] > 0.0)) throw std::domain_error("theta must be positive");
    }
    if (b.size() != total) throw std::invalid_argument("value count does not match box");
    require_non_negative(b);

    std::vector<double> T(b.begin(), b.end());
    for (int axis = 0; axis < m; ++axis) cumulate_axis(T, dims, axis, variant);

    const double lhs = weighted_fold(T, a, theta);
    const double rhs = weighted_fold(std::vector<double>(b.begin(), b.end()), a, theta);

    VerificationReport rep("hardy6");
    std::string id = label;
    int peak = 0;
    for (int j = 0; j < m; ++j) {
        double A = premise_constant(a[static_cast<std::size_t>(j)], variant);
        id += std::string(" A") + std::to_string(j + 1) + "=" + format_sig(A);
        if (A > kPremiseCap)
            rep.flag("axis " + std::to_string(j + 1) + ": premise constant exceeds 1e6 (A=" +
                     format_sig(A) + ")");
        peak = std::max(peak, bdims[j] - 1);
    }
    rep.add_row(id, peak, lhs, rhs);
    return rep;
}

VerificationReport lemma7_check(const GridFunction& T,
                                const std::vector<std::vector<std::uint8_t>>& sets,
                                std::span<const int> e_axes, const LorentzParams& space,
                                const std::string& label) {
    const int m = T.m;
    if (space.m() != m) throw std::invalid_argument("parameter count does not match dimension");
    if (static_cast<int>(sets.size()) != m) throw std::invalid_argument("need one set per axis");

    VerificationReport rep("lemma7");
    for (int j = 0; j < m; ++j)
        flag_phi_chain(rep, space.psi[static_cast<std::size_t>(j)],
                       "axis " + std::to_string(j + 1) + " phi");

    std::array<bool, 3> in_e{false, false, false};
    for (int ax : e_axes) {
        if (ax < 0 || ax >= m) throw std::invalid_argument("split axis out of range");
        in_e[ax] = true;
    }

    std::array<double, 3> measure{1.0, 1.0, 1.0};
    for (int j = 0; j < m; ++j) {
        if (static_cast<int>(sets[static_cast<std::size_t>(j)].size()) != T.dims[j])
            throw std::invalid_argument("set mask must match the grid");
        std::size_t kept = 0;
        for (std::uint8_t c : sets[static_cast<std::size_t>(j)])
            if (c) ++kept;
        if (kept == 0) {
            rep.flag("axis " + std::to_string(j + 1) + " set is empty; row skipped");
            return rep;
        }
        measure[j] = static_cast<double>(kept) / T.dims[j];
    }

    // Kernel degree per axis from the spectrum.
    SpectralFunction F = analyze(T);
    const double bar = 1e-13 * std::max(max_abs_coeff(F), 1e-300);
    std::array<int, 3> deg{1, 1, 1};
    std::array<int, 3> d = F.dims;
    for (int i3 = 0; i3 < d[2]; ++i3)
        for (int i2 = 0; i2 < d[1]; ++i2)
            for (int i1 = 0; i1 < d[0]; ++i1) {
                std::size_t idx = static_cast<std::size_t>(i1) +
                                  static_cast<std::size_t>(d[0]) *
                                      (i2 + static_cast<std::size_t>(d[1]) * i3);
                if (std::abs(F.coeff[idx]) <= bar) continue;
                std::array<int, 3> nu{i1, i2, i3};
                for (int j = 0; j < m; ++j) {
                    int k = nu[j] < d[j] / 2 ? nu[j] : nu[j] - d[j];
                    deg[j] = std::max(deg[j], std::abs(k));
                }
            }

    // Left side: torus integral of |T| over the box.
    long double integral = 0.0L;
    for (int i3 = 0; i3 < T.dims[2]; ++i3)
        for (int i2 = 0; i2 < T.dims[1]; ++i2)
            for (int i1 = 0; i1 < T.dims[0]; ++i1) {
                bool keep = sets[0][static_cast<std::size_t>(i1)] != 0;
                if (m > 1) keep = keep && sets[1][static_cast<std::size_t>(i2)] != 0;
                if (m > 2) keep = keep && sets[2][static_cast<std::size_t>(i3)] != 0;
                if (keep)
                    integral += std::abs(T.samples[T.index({i1, i2, i3})]);
            }
    double cell = 1.0;
    for (int j = 0; j < m; ++j) cell *= 2.0 * std::numbers::pi / T.dims[j];
    const double lhs = static_cast<double>(integral) * cell;

    double rhs = lorentz_norm_aniso(T, space);
    int peak_deg = 1;
    for (int j = 0; j < m; ++j) {
        const PhiFunction& phi = space.psi[static_cast<std::size_t>(j)];
        if (in_e[j])
            rhs *= measure[j] / phi(1.0 / deg[j]);
        else
            rhs *= tilde(phi)(measure[j]);
        peak_deg = std::max(peak_deg, deg[j]);
    }

    rep.add_row(label, peak_deg, lhs, rhs);
    return rep;
}

VerificationReport theorem1_check(const GridFunction& f, std::span<const int> nbar,
                                  const LorentzParams& space, const std::string& label) {
    const int m = f.m;
    if (space.m() != m) throw std::invalid_argument("parameter count does not match dimension");
    if (static_cast<int>(nbar.size()) < m) throw std::invalid_argument("need one scale per axis");

    VerificationReport rep("theorem1");
    std::array<int, 3> S{1, 1, 1};
    std::array<double, 3> t{1.0, 1.0, 1.0};
    for (int j = 0; j < m; ++j) {
        S[j] = max_block_index(f.dims[j]);
        if (nbar[j] < 1 || nbar[j] > S[j])
            throw std::invalid_argument("scale outside the grid resolution");
        t[j] = std::ldexp(1.0, -nbar[j]);
        flag_phi_chain(rep, space.psi[static_cast<std::size_t>(j)],
                       "axis " + std::to_string(j + 1) + " phi");
    }

    const double lhs = maximal_average(f, std::span<const double>(t.data(), 3));

    SpectralFunction F = analyze(f);
    if (!is_zero_mean(F))
        rep.flag("spectrum has components outside every dyadic block (non-zero axis means)");

    std::vector<double> dn = block_norm_box(F, S, space);
    auto at = [&](int s1, int s2, int s3) {
        return dn[static_cast<std::size_t>(s1 - 1) +
                  static_cast<std::size_t>(S[0]) *
                      (static_cast<std::size_t>(s2 - 1) +
                       static_cast<std::size_t>(S[1]) * static_cast<std::size_t>(s3 - 1))];
    };

    std::array<std::vector<double>, 3> phi_at;  // phi_j(2^-s) for s = 0..S_j
    for (int j = 0; j < m; ++j) {
        phi_at[j].resize(static_cast<std::size_t>(S[j]) + 1);
        for (int s = 0; s <= S[j]; ++s)
            phi_at[j][static_cast<std::size_t>(s)] =
                space.psi[static_cast<std::size_t>(j)](std::ldexp(1.0, -s));
    }

    double inv_phi_n = 1.0;
    for (int j = 0; j < m; ++j) inv_phi_n /= space.psi[static_cast<std::size_t>(j)](t[j]);

    // High tail: every s_j > n_j.
    long double tail = 0.0L;
    {
        std::array<int, 3> lo{1, 1, 1}, hi{1, 1, 1};
        bool empty = false;
        for (int j = 0; j < m; ++j) {
            lo[j] = nbar[j] + 1;
            hi[j] = S[j];
            if (lo[j] > hi[j]) empty = true;
        }
        if (!empty)
            for (int s3 = lo[2]; s3 <= hi[2]; ++s3)
                for (int s2 = lo[1]; s2 <= hi[1]; ++s2)
                    for (int s1 = lo[0]; s1 <= hi[0]; ++s1) tail += at(s1, s2, s3);
    }
    double rhs = inv_phi_n * static_cast<double>(tail);

    // Split terms over every axis subset: s_j <= n_j inside e (with the
    // block-level weight), s_j > n_j outside e (with the scale-level weight).
    for (int mask = 0; mask < (1 << m); ++mask) {
        std::array<int, 3> lo{1, 1, 1}, hi{1, 1, 1};
        bool empty = false;
        double outer = 1.0;
        for (int j = 0; j < m; ++j) {
            if (mask & (1 << j)) {
                lo[j] = 1;
                hi[j] = std::min(nbar[j], S[j]);
            } else {
                lo[j] = nbar[j] + 1;
                hi[j] = S[j];
                outer /= space.psi[static_cast<std::size_t>(j)](t[j]);
            }
            if (lo[j] > hi[j]) empty = true;
        }
        if (empty) continue;
        long double sum = 0.0L;
        for (int s3 = lo[2]; s3 <= hi[2]; ++s3)
            for (int s2 = lo[1]; s2 <= hi[1]; ++s2)
                for (int s1 = lo[0]; s1 <= hi[0]; ++s1) {
                    double w = 1.0;
                    std::array<int, 3> sb{s1, s2, s3};
                    for (int j = 0; j < m; ++j)
                        if (mask & (1 << j)) w /= phi_at[j][static_cast<std::size_t>(sb[j])];
                    sum += w * at(s1, s2, s3);
                }
        rhs += outer * static_cast<double>(sum);
    }

    int peak_n = 0;
    for (int j = 0; j < m; ++j) peak_n = std::max(peak_n, nbar[j]);
    rep.add_row(label, peak_n, lhs, rhs);
    return rep;
}

VerificationReport theorem2_check(const GridFunction& f, const LorentzParams& target,
                                  const LorentzParams& space, const std::string& label,
                                  double scale) {
    const int m = f.m;
    if (target.m() != m || space.m() != m)
        throw std::invalid_argument("parameter count does not match dimension");

    VerificationReport rep("theorem2");
    for (int j = 0; j < m; ++j) {
        flag_pair_chain(rep, target.psi[static_cast<std::size_t>(j)],
                        space.psi[static_cast<std::size_t>(j)], j);
        if (target.tau[static_cast<std::size_t>(j)] < 1.0)
            rep.flag("axis " + std::to_string(j + 1) + ": tau below 1");
    }

    SpectralFunction F = analyze(f);
    if (!is_zero_mean(F))
        rep.flag("spectrum has components outside every dyadic block (non-zero axis means)");

    std::array<int, 3> S{1, 1, 1};
    for (int j = 0; j < m; ++j) S[j] = max_block_index(f.dims[j]);
    std::vector<double> dn = block_norm_box(F, S, space);

    std::vector<double> vals(dn.size());
    std::size_t idx = 0;
    for (int s3 = 1; s3 <= S[2]; ++s3)
        for (int s2 = 1; s2 <= S[1]; ++s2)
            for (int s1 = 1; s1 <= S[0]; ++s1, ++idx) {
                std::array<int, 3> sb{s1, s2, s3};
                double w = 1.0;
                for (int j = 0; j < m; ++j) {
                    double tt = std::ldexp(1.0, -sb[j]);
                    w *= target.psi[static_cast<std::size_t>(j)](tt) /
                         space.psi[static_cast<std::size_t>(j)](tt);
                }
                vals[idx] = w * dn[idx];
            }

    std::vector<int> box(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) box[static_cast<std::size_t>(j)] = S[j];
    const double rhs = mixed_ell_norm(vals, box, std::span<const double>(target.tau));
    const double lhs = lorentz_norm_aniso(f, target);
    rep.add_row(label, scale, lhs, rhs);
    return rep;
}

VerificationReport theorem3_check(const GridFunction& f, const BesovParams& bp,
                                  const LorentzParams& target, const std::string& label,
                                  double scale) {
    const int m = f.m;
    if (bp.m() != m || target.m() != m)
        throw std::invalid_argument("parameter count does not match dimension");

    VerificationReport rep("theorem3");
    bool all_lt = true, all_ge = true;
    for (int j = 0; j < m; ++j) {
        flag_pair_chain(rep, target.psi[static_cast<std::size_t>(j)],
                        bp.space.psi[static_cast<std::size_t>(j)], j);
        double tau = target.tau[static_cast<std::size_t>(j)];
        double theta = bp.theta[static_cast<std::size_t>(j)];
        if (tau < 1.0) rep.flag("axis " + std::to_string(j + 1) + ": tau below 1");
        if (theta < 1.0) rep.flag("axis " + std::to_string(j + 1) + ": theta below 1");
        if (!(tau < theta)) all_lt = false;
        if (!(theta <= tau)) all_ge = false;

        Condition13 cond = condition13_eval(target.psi[static_cast<std::size_t>(j)],
                                            bp.space.psi[static_cast<std::size_t>(j)],
                                            bp.r[static_cast<std::size_t>(j)], tau, theta);
        if (!cond.finite)
            rep.flag("axis " + std::to_string(j + 1) + ": summability condition divergent");
    }

    SpectralFunction F = analyze(f);
    if (!is_zero_mean(F)) {
        rep.flag("spectrum not zero-mean; rows skipped");
        return rep;
    }

    const double lhs = lorentz_norm_aniso(f, target);
    const double cls = besov_class_norm(f, bp);
    rep.add_row(label + ":embed", scale, lhs, cls);

    // Interior split: sigma = mixed ell_tau norm of the mu-weighted blocks.
    std::array<int, 3> S{1, 1, 1};
    for (int j = 0; j < m; ++j) S[j] = max_block_index(f.dims[j]);
    std::vector<double> dn = block_norm_box(F, S, bp.space);
    std::vector<double> vals(dn.size());
    std::size_t idx = 0;
    for (int s3 = 1; s3 <= S[2]; ++s3)
        for (int s2 = 1; s2 <= S[1]; ++s2)
            for (int s1 = 1; s1 <= S[0]; ++s1, ++idx) {
                std::array<int, 3> sb{s1, s2, s3};
                double w = 1.0;
                for (int j = 0; j < m; ++j) {
                    double tt = std::ldexp(1.0, -sb[j]);
                    w *= target.psi[static_cast<std::size_t>(j)](tt) /
                         bp.space.psi[static_cast<std::size_t>(j)](tt);
                }
                vals[idx] = w * dn[idx];
            }
    std::vector<int> box(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) box[static_cast<std::size_t>(j)] = S[j];
    const double sigma = mixed_ell_norm(vals, box, std::span<const double>(target.tau));
    const double semi = besov_seminorm(f, bp);

    if (all_lt) {
        double gate = 1.0;
        for (int j = 0; j < m; ++j)
            gate *= condition13_eval(target.psi[static_cast<std::size_t>(j)],
                                     bp.space.psi[static_cast<std::size_t>(j)],
                                     bp.r[static_cast<std::size_t>(j)],
                                     target.tau[static_cast<std::size_t>(j)],
                                     bp.theta[static_cast<std::size_t>(j)])
                        .value;
        rep.add_row(label + ":route14", scale, sigma, gate * semi);
    } else if (all_ge) {
        double gate = 1.0;
        for (int j = 0; j < m; ++j) {
            double peak = 0.0;
            for (int s = 0; s <= 48; ++s) {
                double tt = std::ldexp(1.0, -s);
                double w = target.psi[static_cast<std::size_t>(j)](tt) /
                           bp.space.psi[static_cast<std::size_t>(j)](tt) *
                           std::pow(2.0, -bp.r[static_cast<std::size_t>(j)] * s);
                peak = std::max(peak, w);
            }
            gate *= peak;
        }
        rep.add_row(label + ":route15", scale, sigma, gate * semi);
    }
    return rep;
}

VerificationReport theorem4_check(const BlockSeries& series, std::span<const double> lambda,
                                  const LorentzParams& target, std::array<int, 3> dims,
                                  const std::string& label) {
    const int m = series.m;
    if (target.m() != m || static_cast<int>(lambda.size()) < m)
        throw std::invalid_argument("parameter count does not match dimension");

    VerificationReport rep("theorem4");
    LorentzParams lam;
    for (int j = 0; j < m; ++j) {
        if (!(lambda[j] >= 1.0)) throw std::domain_error("lambda must be >= 1");
        lam.psi.push_back(PhiFunction::power(1.0 / lambda[j]));
        lam.tau.push_back(target.tau[static_cast<std::size_t>(j)]);

        DilationIndices di = dilation_indices(target.psi[static_cast<std::size_t>(j)]);
        const double gate = std::pow(2.0, 1.0 / lambda[j]);
        if (!(gate + 1e-6 < di.alpha) || !(di.beta < 2.0 - 1e-6))
            rep.flag("axis " + std::to_string(j + 1) +
                     ": window 1 < 2^(1/lambda) < alpha_psi <= beta_psi < 2 violated (2^(1/lambda)=" +
                     format_sig(gate) + ", alpha_psi=" + format_sig(di.alpha) +
                     ", beta_psi=" + format_sig(di.beta) + ")");
        if (!(target.tau[static_cast<std::size_t>(j)] > 1.0))
            rep.flag("axis " + std::to_string(j + 1) + ": tau must exceed 1");
    }

    GridFunction f = series.realize(dims);
    const double lhs = lorentz_norm_aniso(f, target);

    SpectralFunction F = analyze(f);
    std::array<int, 3> S{1, 1, 1};
    for (int j = 0; j < m; ++j) S[j] = max_block_index(dims[j]);
    std::vector<double> dn = block_norm_box(F, S, lam);

    std::vector<double> vals(dn.size());
    std::size_t idx = 0;
    for (int s3 = 1; s3 <= S[2]; ++s3)
        for (int s2 = 1; s2 <= S[1]; ++s2)
            for (int s1 = 1; s1 <= S[0]; ++s1, ++idx) {
                std::array<int, 3> sb{s1, s2, s3};
                double w = 1.0;
                for (int j = 0; j < m; ++j)
                    w *= std::pow(2.0, sb[j] / lambda[j]) *
                         target.psi[static_cast<std::size_t>(j)](std::ldexp(1.0, -sb[j]));
                vals[idx] = w * dn[idx];
            }
    std::vector<int> box(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) box[static_cast<std::size_t>(j)] = S[j];
    const double rhs = mixed_ell_norm(vals, box, std::span<const double>(target.tau));

    rep.add_row(label, series.max_scale(), lhs, rhs);
    return rep;
}

VerificationReport theorem5_check(const BesovParams& bp, const LorentzParams& target,
                                  std::span<const double> gamma, int n_min, int n_max,
                                  const std::vector<GridFunction>& corpus) {
    const int m = bp.m();
    if (target.m() != m) throw std::invalid_argument("parameter count does not match dimension");
    if (static_cast<int>(gamma.size()) < m) throw std::invalid_argument("gamma tuple shorter than m");
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("need 1 <= n_min <= n_max");
    if (corpus.empty()) throw std::invalid_argument("corpus is empty");

    bool all_lt = true, all_ge = true;
    for (int j = 0; j < m; ++j) {
        if (!(target.tau[static_cast<std::size_t>(j)] <
              bp.theta[static_cast<std::size_t>(j)]))
            all_lt = false;
        if (!(bp.theta[static_cast<std::size_t>(j)] <=
              target.tau[static_cast<std::size_t>(j)]))
            all_ge = false;
    }
    if (!all_lt && !all_ge)
        throw std::invalid_argument(
            "exponents must satisfy tau_j < theta_j on every axis or theta_j <= tau_j on every axis");

    VerificationReport rep("theorem5");
    std::vector<double> eps(static_cast<std::size_t>(m), 0.0);
    for (int j = 0; j < m; ++j) {
        double tau = target.tau[static_cast<std::size_t>(j)];
        double theta = bp.theta[static_cast<std::size_t>(j)];
        Condition13 cond = condition13_eval(target.psi[static_cast<std::size_t>(j)],
                                            bp.space.psi[static_cast<std::size_t>(j)],
                                            bp.r[static_cast<std::size_t>(j)], tau, theta);
        eps[static_cast<std::size_t>(j)] = cond.epsilon;
        if (!cond.finite)
            rep.flag("axis " + std::to_string(j + 1) + ": summability condition divergent");
        flag_pair_chain(rep, target.psi[static_cast<std::size_t>(j)],
                        bp.space.psi[static_cast<std::size_t>(j)], j);
    }

    // Normalised corpus spectra; all members must share one grid so the
    // Nyquist truncation below is well defined.
    const std::array<int, 3> dims = corpus.front().dims;
    std::vector<SpectralFunction> spectra;
    spectra.reserve(corpus.size());
    for (const GridFunction& f : corpus) {
        if (f.m != m || f.dims != dims)
            throw std::invalid_argument("corpus members must share one grid");
        spectra.push_back(analyze(normalize_to_ball(f, bp)));
    }

    // Weight table w_j(s) = 2^{-s r_j} mu_j(s) up to one step past the
    // deepest block the grid holds.
    std::array<int, 3> S{0, 0, 0};
    std::array<std::vector<double>, 3> w{};
    for (int j = 0; j < m; ++j) {
        S[j] = max_block_index(dims[j]);
        w[j].resize(static_cast<std::size_t>(S[j]) + 2);
        for (int s = 0; s <= S[j] + 1; ++s) {
            double tt = std::ldexp(1.0, -s);
            w[j][static_cast<std::size_t>(s)] =
                std::pow(2.0, -bp.r[static_cast<std::size_t>(j)] * s) *
                target.psi[static_cast<std::size_t>(j)](tt) /
                bp.space.psi[static_cast<std::size_t>(j)](tt);
        }
    }

    // Per-axis tail of the weight sequence past the Nyquist block, and its
    // norm over the whole axis; both bound the truncated part of the
    // complementary-set norm through a geometric estimate.
    std::array<double, 3> tail_j{0.0, 0.0, 0.0}, full_j{1.0, 1.0, 1.0};
    for (int j = 0; j < m; ++j) {
        const double head = w[j][static_cast<std::size_t>(S[j] + 1)];
        const double rho = head / w[j][static_cast<std::size_t>(S[j])];
        if (!(rho < 1.0 - 1e-9))
            rep.flag("axis " + std::to_string(j + 1) + ": truncation tail does not decay");
        if (all_ge) {
            tail_j[j] = head;
            full_j[j] = head;
            for (int s = 0; s <= S[j]; ++s)
                full_j[j] = std::max(full_j[j], w[j][static_cast<std::size_t>(s)]);
        } else {
            const double e = eps[static_cast<std::size_t>(j)];
            const double re = std::pow(rho, e);
            double tail_e = std::pow(head, e);
            if (re < 1.0 - 1e-9) tail_e /= 1.0 - re;
            long double sum_e = tail_e;
            for (int s = 0; s <= S[j]; ++s)
                sum_e += std::pow(w[j][static_cast<std::size_t>(s)], e);
            tail_j[j] = std::pow(tail_e, 1.0 / e);
            full_j[j] = std::pow(static_cast<double>(sum_e), 1.0 / e);
        }
    }
    double tail_bound = 0.0;
    for (int j = 0; j < m; ++j) {
        double part = tail_j[j];
        for (int jj = 0; jj < m; ++jj)
            if (jj != j) part *= full_j[jj];
        tail_bound += part;
    }

    for (int n = n_min; n <= n_max; ++n) {
        HyperbolicCross cross = hyperbolic_cross(gamma, n, m);

        // Bound over the complementary block set <s, gamma> >= n, truncated
        // at the Nyquist block of the grid.
        double rhs = 0.0;
        if (all_ge) {
            for (int s3 = 0; s3 <= (m > 2 ? S[2] : 0); ++s3)
                for (int s2 = 0; s2 <= (m > 1 ? S[1] : 0); ++s2)
                    for (int s1 = 0; s1 <= S[0]; ++s1) {
                        double dot = gamma[0] * s1;
                        if (m > 1) dot += gamma[1] * s2;
                        if (m > 2) dot += gamma[2] * s3;
                        if (dot < n) continue;
                        double v = w[0][static_cast<std::size_t>(s1)];
                        if (m > 1) v *= w[1][static_cast<std::size_t>(s2)];
                        if (m > 2) v *= w[2][static_cast<std::size_t>(s3)];
                        rhs = std::max(rhs, v);
                    }
        } else {
            // Mixed ell_eps norm over the masked box.
            std::vector<double> vals;
            vals.reserve(static_cast<std::size_t>(S[0] + 1) * (m > 1 ? S[1] + 1 : 1) *
                         (m > 2 ? S[2] + 1 : 1));
            for (int s3 = 0; s3 <= (m > 2 ? S[2] : 0); ++s3)
                for (int s2 = 0; s2 <= (m > 1 ? S[1] : 0); ++s2)
                    for (int s1 = 0; s1 <= S[0]; ++s1) {
                        double dot = gamma[0] * s1;
                        if (m > 1) dot += gamma[1] * s2;
                        if (m > 2) dot += gamma[2] * s3;
                        double v = 0.0;
                        if (dot >= n) {
                            v = w[0][static_cast<std::size_t>(s1)];
                            if (m > 1) v *= w[1][static_cast<std::size_t>(s2)];
                            if (m > 2) v *= w[2][static_cast<std::size_t>(s3)];
                        }
                        vals.push_back(v);
                    }
            std::vector<int> box(static_cast<std::size_t>(m));
            for (int j = 0; j < m; ++j) box[static_cast<std::size_t>(j)] = S[j] + 1;
            rhs = mixed_ell_norm(vals, box, eps);
        }
        if (rhs > 0.0 && tail_bound > 1e-6 * rhs)
            rep.flag("Nyquist truncation tail exceeds 1e-6 of the bound");

        for (std::size_t i = 0; i < spectra.size(); ++i) {
            SpectralFunction R = spectra[i];
            for (const auto& k : cross.indices) {
                bool inside = true;
                for (int j = 0; j < m; ++j)
                    if (2 * std::abs(k[j]) >= R.dims[j]) inside = false;
                if (inside) R.set(k, cplx{0.0, 0.0});
            }
            // Transform noise must not register as residual signal: spectra
            // fully inside the cross leave an exactly zero remainder.
            const double noise =
                64.0 * std::numeric_limits<double>::epsilon() * max_abs_coeff(spectra[i]);
            for (cplx& c : R.coeff)
                if (std::abs(c) <= noise) c = cplx{0.0, 0.0};
            double lhs = lorentz_norm_aniso(synthesize(R), target);
            rep.add_row("f" + std::to_string(i) + ":n=" + std::to_string(n), n, lhs, rhs);
        }
    }
    rep.sort_rows();
    return rep;
}

RefineResult best_approx_refine(const GridFunction& f, const HyperbolicCross& cross,
                                const LorentzParams& target, int sweeps) {
    if (cross.m != f.m) throw std::invalid_argument("cross dimension does not match input");
    if (target.m() != f.m) throw std::invalid_argument("parameter count does not match dimension");
    if (sweeps < 0) throw std::invalid_argument("sweep count must be >= 0");

    SpectralFunction F = analyze(f);
    SpectralFunction P = project_cross(F, cross);

    // Residual through the spectral difference, so an input lying inside the
    // cross leaves exact zeros: kept indices cancel exactly, and everything
    // at the transform noise floor is flushed rather than kept as fake signal.
    SpectralFunction D = F;
    for (std::size_t i = 0; i < D.coeff.size(); ++i) D.coeff[i] -= P.coeff[i];
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * max_abs_coeff(F);
    for (cplx& c : D.coeff)
        if (std::abs(c) <= noise) c = cplx{0.0, 0.0};
    GridFunction res = synthesize(D);

    auto error_of = [&](const GridFunction& g) { return lorentz_norm_aniso(g, target); };
    double err = error_of(res);
    RefineResult out;
    out.initial_error = err;

    // Coordinates kept by the cross, inside the Nyquist band.
    std::vector<std::array<int, 3>> coords;
    for (const auto& k : cross.indices) {
        bool inside = true;
        for (int j = 0; j < f.m; ++j)
            if (2 * std::abs(k[j]) >= f.dims[j]) inside = false;
        if (inside) coords.push_back(k);
    }

    // Per-axis root tables for basis evaluation.
    std::array<std::vector<cplx>, 3> roots;
    for (int j = 0; j < 3; ++j) {
        roots[j].resize(static_cast<std::size_t>(f.dims[j]));
        for (int r = 0; r < f.dims[j]; ++r) {
            double ang = 2.0 * std::numbers::pi * r / f.dims[j];
            roots[j][static_cast<std::size_t>(r)] = {std::cos(ang), std::sin(ang)};
        }
    }
    auto basis_at = [&](const std::array<int, 3>& k, int i1, int i2, int i3) {
        cplx v{1.0, 0.0};
        std::array<int, 3> i{i1, i2, i3};
        for (int j = 0; j < f.m; ++j) {
            long long r = (static_cast<long long>(k[j]) * i[j]) % f.dims[j];
            if (r < 0) r += f.dims[j];
            v *= roots[j][static_cast<std::size_t>(r)];
        }
        return v;
    };

    double base = std::max(max_abs_coeff(F), 1e-6);
    double step = 0.25 * base;
    GridFunction trial = res;

    for (int sweep = 0; sweep < sweeps && step > 1e-12 * base; ++sweep) {
        bool improved = false;
        for (const auto& k : coords) {
            for (int part = 0; part < 2; ++part) {
                for (int sign = 0; sign < 2; ++sign) {
                    cplx delta = part == 0 ? cplx{step, 0.0} : cplx{0.0, step};
                    if (sign == 1) delta = -delta;
                    // Raising the kept coefficient by delta lowers the
                    // residual by delta * e^{i<k,x>}.
                    for (int i3 = 0; i3 < f.dims[2]; ++i3)
                        for (int i2 = 0; i2 < f.dims[1]; ++i2)
                            for (int i1 = 0; i1 < f.dims[0]; ++i1) {
                                std::size_t idx = res.index({i1, i2, i3});
                                trial.samples[idx] =
                                    res.samples[idx] - delta * basis_at(k, i1, i2, i3);
                            }
                    double err2 = error_of(trial);
                    if (err2 < err) {
                        std::swap(res.samples, trial.samples);
                        err = err2;
                        P.set(k, P.at(k) + delta);
                        improved = true;
                        break;  // keep moving in this direction next sweep
                    }
                }
            }
        }
        if (!improved) step *= 0.5;
    }

    out.refined_error = err;
    out.coefficients = std::move(P);
    return out;
}

}  // namespace lorcross

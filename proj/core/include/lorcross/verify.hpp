#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lorcross/besov.hpp"
#include "lorcross/grid.hpp"
#include "lorcross/norms.hpp"
#include "lorcross/report.hpp"

namespace lorcross {

// f = sum over terms of weight * (block exponential sum of rho(s-bar)).
struct BlockSeries {
    int m = 1;
    std::vector<std::pair<std::array<int, 3>, double>> terms;

    GridFunction realize(std::array<int, 3> dims) const;
    int max_scale() const;
};

// Discrete Hardy inequality, sequences indexed 0..N.  Variant 'a' compares
// sum_n a_n (sum_{k>=n} b_k)^theta against sum_n a_n b_n^theta under the
// premise sum_{k<=n} a_k <= A a_n; variant 'b' swaps head and tail.  The
// measured premise constant A is embedded in the row id and flagged past 1e6.
VerificationReport hardy1_check(std::span<const double> a, std::span<const double> b, double theta,
                                char variant, const std::string& label);

// Iterated form: per-axis weights a[j] (length bdims[j]), box values b in
// row-major order (axis 1 fastest), per-axis exponents theta.  Both sides
// carry the final 1/theta_m root.
VerificationReport hardy6_check(const std::vector<std::vector<double>>& a,
                                std::span<const double> b, std::span<const int> bdims,
                                std::span<const double> theta, char variant,
                                const std::string& label);

// Integral of |T| over a measurable box E = prod E_j against the split bound:
// axes in e use the kernel-degree factor |E_j| / phi_j(1/n_j), the rest use
// phi~_j(|E_j|); both multiply the norm of T.  Masks list kept grid cells per
// axis; n_j is read off the spectrum of T.
VerificationReport lemma7_check(const GridFunction& T,
                                const std::vector<std::vector<std::uint8_t>>& sets,
                                std::span<const int> e_axes, const LorentzParams& space,
                                const std::string& label);

// Corner-box maximal average of |f| at t_j = 2^{-n_j} against the two-part
// block bound (high-frequency tail plus the split over axis subsets).
VerificationReport theorem1_check(const GridFunction& f, std::span<const int> nbar,
                                  const LorentzParams& space, const std::string& label);

// Norm in the target pair against the mixed ell_tau norm of
// { prod_j mu_j(s_j) ||delta_s(f)|| }.
VerificationReport theorem2_check(const GridFunction& f, const LorentzParams& target,
                                  const LorentzParams& space, const std::string& label,
                                  double scale);

// Class embedding: target norm against the class norm, plus the two interior
// routes (Hoelder split when tau_j < theta_j, supremum split when
// theta_j <= tau_j).
VerificationReport theorem3_check(const GridFunction& f, const BesovParams& bp,
                                  const LorentzParams& target, const std::string& label,
                                  double scale);

// Lower bound for block series: target norm of the realised series against
// the weighted mixed norm of per-block coefficients measured in the power
// scale lambda.  Ratios are bounded away from zero when the bound holds.
VerificationReport theorem4_check(const BlockSeries& series, std::span<const double> lambda,
                                  const LorentzParams& target, std::array<int, 3> dims,
                                  const std::string& label);

// Step-cross approximation order: residual norm after removing the cross
// section of each corpus spectrum, against the weight norm over the
// complementary block set, for n = n_min..n_max.
VerificationReport theorem5_check(const BesovParams& bp, const LorentzParams& target,
                                  std::span<const double> gamma, int n_min, int n_max,
                                  const std::vector<GridFunction>& corpus);

// Best approximation from the cross by cyclic coordinate descent on the
// retained coefficients, started from the orthogonal partial sum.  Strictly
// improving steps only; fully deterministic.
struct RefineResult {
    SpectralFunction coefficients;  // the refined approximant
    double initial_error = 0.0;     // partial-sum residual norm
    double refined_error = 0.0;
};

RefineResult best_approx_refine(const GridFunction& f, const HyperbolicCross& cross,
                                const LorentzParams& target, int sweeps);

}  // namespace lorcross

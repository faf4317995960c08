#pragma once

#include <limits>
#include <span>
#include <vector>

#include "lorcross/grid.hpp"
#include "lorcross/norms.hpp"
#include "lorcross/phi.hpp"

namespace lorcross {

inline constexpr double kEllSup = std::numeric_limits<double>::infinity();

// Iterated sequence norm over a box, axis 1 folded first; theta_j = kEllSup
// takes a supremum at that level.  Entries must be non-negative.
double mixed_ell_norm(std::span<const double> values, std::span<const int> dims,
                      std::span<const double> thetas);

// Smoothness class parameters: the carrier norm, one smoothness exponent r_j
// and one summation exponent theta_j per axis.
struct BesovParams {
    LorentzParams space;
    std::vector<double> r;
    std::vector<double> theta;

    int m() const { return space.m(); }
};

// Mixed ell_theta norm of { prod_j 2^{s_j r_j} ||delta_s(f)|| } over block
// tuples with every s_j >= 1.  Requires a zero-mean spectrum (coefficients
// with some k_j = 0 all vanish); throws std::domain_error otherwise.
double besov_seminorm(const GridFunction& f, const BesovParams& bp);

// Carrier norm plus seminorm.
double besov_class_norm(const GridFunction& f, const BesovParams& bp);

// f / class_norm(f); the zero function cannot be normalised.
GridFunction normalize_to_ball(const GridFunction& f, const BesovParams& bp);

// mu(s) = psi(2^-s) / phi(2^-s) for s = 0..s_max.
std::vector<double> mu_weights(const PhiFunction& psi, const PhiFunction& phi, int s_max);

// Summability gate for one axis: epsilon = tau*theta/(theta - tau) when
// theta > tau (tau at theta = sup), otherwise a supremum condition.  `value`
// is the ell_epsilon norm of { mu(s) 2^{-s r} }, with a geometric tail bound;
// `finite` reports whether the tail decays.
struct Condition13 {
    double epsilon = 0.0;
    double value = 0.0;
    bool finite = false;
};

Condition13 condition13_eval(const PhiFunction& psi, const PhiFunction& phi, double r, double tau,
                             double theta, int s_max = 48);

}  // namespace lorcross

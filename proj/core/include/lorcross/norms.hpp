#pragma once

#include <span>
#include <vector>

#include "lorcross/grid.hpp"
#include "lorcross/phi.hpp"
#include "lorcross/rearrange.hpp"
#include "lorcross/report.hpp"

namespace lorcross {

// Weight/exponent pair per axis for the function norms below.
struct LorentzParams {
    std::vector<PhiFunction> psi;
    std::vector<double> tau;

    int m() const { return static_cast<int>(psi.size()); }
    static LorentzParams uniform(const PhiFunction& p, double t, int m);
};

// ( integral_0^1 f*(t)^tau psi(t)^tau dt/t )^{1/tau} on the flattened
// rearrangement of |f| (all axes pooled).
double lorentz_norm_iso(const GridFunction& f, const PhiFunction& psi, double tau);

// Anisotropic version on the iterated rearrangement: the inner integral over
// t_1 is raised to tau_2/tau_1 under the next weight, and so on; the final
// level carries the 1/tau_m root.
double lorentz_norm_aniso(const GridFunction& f, const LorentzParams& p);
double lorentz_norm_aniso(const IteratedRearrangement& r, const LorentzParams& p);

// ( integral_0^1 f*(t)^q dt )^{1/q} over the normalised cube.
double lebesgue_norm(const GridFunction& f, double q);

// ( (tau/q) integral_0^1 (integral_0^t f*)^tau t^{tau(1/q - 1) - 1} dt )^{1/tau},
// evaluated exactly on the step rearrangement (closed forms for integer tau,
// Gauss-Legendre panels otherwise).
double classical_lorentz_norm(const GridFunction& f, double q, double tau);

// Norm of the full dyadic block exponential sum against the closed form
// prod_j 2^{s_j} psi_j(2^{-s_j}); one row per block scale.
VerificationReport block_norm_check(const LorentzParams& p, int s_max, int N);

// Norm of the Dirichlet kernel D_n against n * phi~(1/n) for n = 2, 4, ...;
// row scale is log2 n.
VerificationReport dirichlet_norm_check(const PhiFunction& phi, double eta, int n_max,
                                        int oversample = 4);

}  // namespace lorcross

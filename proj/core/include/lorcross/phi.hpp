#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lorcross/report.hpp"

namespace lorcross {

struct EnvelopeResult;

// A Phi-function: concave, non-decreasing on [0,1], phi(0)=0, phi(t)>0 for
// t>0.  Value type; copies are cheap (tilde wrappers share their base).
//
// Families:
//   power      t^a with a in (0,1]                       spec "pow:<a>"
//   power_log  t^a * (1 + ln(1/t))^b                     spec "powlog:<a>:<b>"
//   envelope   piecewise-linear least concave majorant anchored at (0,0)
//   tilde_wrap t / base(t), used when no closed form exists
//
// A power_log whose raw formula fails monotonicity or concavity on the dyadic
// probe grid is replaced at construction by its concave envelope, so every
// constructed object satisfies the Phi invariants except where non_phi() says
// otherwise (tilde of pow:1 is discontinuous at 0 and is only flagged).
class PhiFunction {
  public:
    enum class Family { power, power_log, envelope, tilde_wrap };

    static PhiFunction power(double a);
    static PhiFunction power_log(double a, double b);
    // "pow:<a>" or "powlog:<a>:<b>"
    static PhiFunction parse(std::string_view spec);

    double operator()(double t) const;  // t outside [0,1] -> std::domain_error

    Family family() const { return family_; }
    bool is_power() const { return family_ == Family::power; }
    double power_exponent() const { return a_; }
    bool non_phi() const { return non_phi_; }
    std::string spec() const;

    friend PhiFunction tilde(const PhiFunction& phi);
    friend struct EnvelopeResult;
    friend EnvelopeResult concave_envelope(std::span<const double> t, std::span<const double> g);
    friend double weight_integral(const PhiFunction& psi, double tau, double lo, double hi);
    friend double inverse_weight_integral(const PhiFunction& psi, double q, double lo, double hi);

  private:
    PhiFunction() = default;
    double eval_raw(double t) const;

    Family family_ = Family::power;
    double a_ = 0.0, b_ = 0.0;
    std::vector<double> knots_, values_;  // envelope: ascending knots, knots_[0]=0
    std::shared_ptr<const PhiFunction> base_;
    bool non_phi_ = false;
    std::string spec_override_;
};

// phi~(t) = t/phi(t), phi~(0) = 0.  Exact closed form for powers
// (pow:a -> pow:1-a); pow:1 yields a flagged non-Phi constant.
PhiFunction tilde(const PhiFunction& phi);

struct DilationIndices {
    double alpha = 0.0;  // min of phi(2t)/phi(t) over the deepest probe quartile
    double beta = 0.0;   // max of the same ratios
    int probe_depth = 0;
};

DilationIndices dilation_indices(const PhiFunction& phi, int probe_depth = 48);

struct EnvelopeResult {
    PhiFunction envelope;
    double K = 1.0;        // max envelope(t_j)/g_j over the table
    bool failure = false;  // no Phi-majorant equivalent to g (K past threshold)
};

// Least concave majorant of the table (t_j, g_j), anchored at (0,0) and
// flattened after its peak so the result is non-decreasing.  t ascending in
// (0,1], g positive.
EnvelopeResult concave_envelope(std::span<const double> t, std::span<const double> g);

// Integral of psi(t)^tau dt/t over [lo,hi], 0 <= lo < hi <= 1.  Closed form
// for the power family; otherwise midpoint quadrature on 8 log-uniform
// subintervals per dyadic segment, descending to 2^-60 with a geometric tail
// estimate when lo = 0.
double weight_integral(const PhiFunction& psi, double tau, double lo, double hi);

// Integral of psi(t)^-q dt/t over [lo,hi], lo > 0.
double inverse_weight_integral(const PhiFunction& psi, double q, double lo, double hi);

// Phi invariant violations found on the dyadic probe grid (empty = clean).
std::vector<std::string> phi_invariant_violations(const PhiFunction& phi);

// Dilation-index window 1 < alpha <= beta < 2, checked with a small margin.
bool phi_chain_ok(const PhiFunction& phi);
// Adds a precondition flag naming `label` when the window is violated.
void flag_phi_chain(VerificationReport& rep, const PhiFunction& phi, const std::string& label);

// Head/tail integral comparisons at x = 2^-n, n = 1..depth:
//   ratio1 = (int_0^x psi^q dt/t) / psi^q(x)
//   ratio2 = (int_x^1 [t psi^q]^-1 dt) * psi^q(x)
VerificationReport lemma2_check(const PhiFunction& psi, double q, int depth);

// ratio(n) = sum_{s=0..n} (psi/phi)^theta(2^-s)  /  (psi/phi)^theta(2^-n)
VerificationReport lemma4_check(const PhiFunction& psi, const PhiFunction& phi, double theta,
                                int n_max);

// ratio(n) = sum_{s=n..64} psi^theta(2^-s) / psi^theta(2^-n), plus a geometric
// bound for the tail beyond s=64 when it is summable.
VerificationReport lemma5_check(const PhiFunction& psi, double theta, int n_max);

// ratio(n) = (int over [2^-n-1, 2^-n] of psi dt/t) / psi(2^-n)
VerificationReport relation9_check(const PhiFunction& psi, int n_max);

}  // namespace lorcross

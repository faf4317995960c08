#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace lorcross {

using cplx = std::complex<double>;

// Samples of a 2pi-periodic function of m variables (m = 1..3) on the uniform
// grid x_j(i) = 2pi i / N_j, stored row-major with axis 1 fastest.  Every N_j
// is a power of two >= 4; unused axes have dims = 1.
struct GridFunction {
    int m = 1;
    std::array<int, 3> dims{1, 1, 1};
    std::vector<cplx> samples;

    std::size_t total() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    std::size_t index(std::array<int, 3> i) const {
        return static_cast<std::size_t>(i[0]) +
               static_cast<std::size_t>(dims[0]) * (i[1] + static_cast<std::size_t>(dims[1]) * i[2]);
    }
    static GridFunction zeros(int m, std::array<int, 3> dims);
};

void validate_dims(int m, std::array<int, 3> dims);

// Fourier coefficients a_k = (prod N_j)^-1 sum_x f(x) e^{-i<k,x>} for
// |k_j| < N_j/2, stored densely in DFT bin order (bin nu <-> k = nu, or
// nu - N for nu >= N/2).  Nyquist bins (nu_j = N_j/2) are zeroed: they cannot
// be attributed to +N/2 or -N/2 and are excluded from all dyadic blocks.
struct SpectralFunction {
    int m = 1;
    std::array<int, 3> dims{1, 1, 1};
    std::vector<cplx> coeff;

    std::size_t total() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    int bin(int axis, int k) const;               // k -> DFT bin, bounds-checked
    cplx at(std::array<int, 3> k) const;          // |k_j| < N_j/2
    void set(std::array<int, 3> k, cplx v);
    static SpectralFunction zeros(int m, std::array<int, 3> dims);
};

SpectralFunction analyze(const GridFunction& f);
GridFunction synthesize(const SpectralFunction& F);

// Dyadic block index s(k): 0 for k = 0, floor(log2 |k|) + 1 otherwise, so
// rho(s) = {0} for s = 0 and +-[2^{s-1}, 2^s) for s >= 1.
int block_index_of(int k);
std::vector<int> rho_axis(int s);                       // axis index set, ascending
std::size_t rho_cardinality(std::span<const int> s, int m);
std::vector<std::array<int, 3>> rho_block(std::span<const int> s, int m);

// Blocks within the Nyquist band of an N-point axis: s <= log2(N) - 1.
int max_block_index(int N);

// delta_s(f): partial sum over rho(s-bar), returned as samples.
GridFunction dyadic_block(const SpectralFunction& F, std::span<const int> s);
SpectralFunction block_spectrum(const SpectralFunction& F, std::span<const int> s);

// Step hyperbolic cross Q_n^gamma = union of rho(s-bar) over <s,gamma> < n.
struct HyperbolicCross {
    int m = 1;
    std::vector<double> gamma;
    double n = 0.0;
    std::vector<std::array<int, 3>> blocks;   // s-bar list, lexicographic
    std::vector<std::array<int, 3>> indices;  // k-bar union of the blocks

    bool contains(std::array<int, 3> k) const;
};

HyperbolicCross hyperbolic_cross(std::span<const double> gamma, double n, int m);

SpectralFunction project_cross(const SpectralFunction& F, const HyperbolicCross& cross);
GridFunction partial_sum(const SpectralFunction& F, const HyperbolicCross& cross);

// D_n(t) = sum_{|k| <= n} e^{ikt} sampled on N points (N > 2n).
GridFunction dirichlet_kernel(int n, int N);

// Zero every coefficient with some k_j = 0 (discrete analogue of vanishing
// mean along each axis).
SpectralFunction zero_mean_project(const SpectralFunction& F);
bool is_zero_mean(const SpectralFunction& F, double tol = 1e-12);

// Deterministic generator used everywhere randomness is needed.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double sym() { return 2.0 * uniform01() - 1.0; }  // [-1, 1)
};

}  // namespace lorcross

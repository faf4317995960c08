#include "lorcross/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lorcross {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int ilog2(int n) {
    int r = 0;
    while ((1 << (r + 1)) <= n) ++r;
    return r;
}

// Iterative radix-2 transform of a contiguous power-of-two buffer.
// sign = -1 gives sum_x f(x) w^{-kx} (analysis direction), sign = +1 the
// adjoint.  No normalisation here.
void fft_pow2(std::vector<cplx>& a, int sign) {
    const int n = static_cast<int>(a.size());
    if (n <= 1) return;

    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // Roots w^{sign * r} for r < n/2, computed directly for accuracy.
    std::vector<cplx> rootv(static_cast<std::size_t>(n / 2));
    for (int r = 0; r < n / 2; ++r) {
        double ang = sign * 2.0 * std::numbers::pi * r / n;
        rootv[static_cast<std::size_t>(r)] = {std::cos(ang), std::sin(ang)};
    }

    for (int len = 2; len <= n; len <<= 1) {
        const int step = n / len;
        for (int i = 0; i < n; i += len) {
            for (int j = 0; j < len / 2; ++j) {
                cplx w = rootv[static_cast<std::size_t>(j * step)];
                cplx u = a[static_cast<std::size_t>(i + j)];
                cplx v = a[static_cast<std::size_t>(i + j + len / 2)] * w;
                a[static_cast<std::size_t>(i + j)] = u + v;
                a[static_cast<std::size_t>(i + j + len / 2)] = u - v;
            }
        }
    }
}

// Transform along one axis of a row-major (axis-1 fastest) array.
void fft_axis(std::vector<cplx>& data, const std::array<int, 3>& dims, int axis, int sign) {
    const int n = dims[axis];
    if (n == 1) return;
    std::size_t stride = 1;
    for (int a = 0; a < axis; ++a) stride *= static_cast<std::size_t>(dims[a]);

    const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    const std::size_t fibers = total / static_cast<std::size_t>(n);
    std::vector<cplx> buf(static_cast<std::size_t>(n));

    for (std::size_t f = 0; f < fibers; ++f) {
        // Decompose the fiber id into coordinates of the other axes.
        std::size_t lo = f % stride;
        std::size_t hi = f / stride;
        std::size_t base = lo + hi * stride * static_cast<std::size_t>(n);
        for (int i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = data[base + static_cast<std::size_t>(i) * stride];
        fft_pow2(buf, sign);
        for (int i = 0; i < n; ++i) data[base + static_cast<std::size_t>(i) * stride] = buf[static_cast<std::size_t>(i)];
    }
}

}  // namespace

void validate_dims(int m, std::array<int, 3> dims) {
    if (m < 1 || m > 3) throw std::invalid_argument("dimension m must be 1, 2 or 3");
    for (int j = 0; j < 3; ++j) {
        if (j < m) {
            if (!is_pow2(dims[j]) || dims[j] < 4)
                throw std::invalid_argument("axis " + std::to_string(j + 1) +
                                            ": grid size must be a power of two >= 4");
        } else if (dims[j] != 1) {
            throw std::invalid_argument("unused axis must have size 1");
        }
    }
}

GridFunction GridFunction::zeros(int m, std::array<int, 3> dims) {
    validate_dims(m, dims);
    GridFunction f;
    f.m = m;
    f.dims = dims;
    f.samples.assign(f.total(), cplx{0.0, 0.0});
    return f;
}

SpectralFunction SpectralFunction::zeros(int m, std::array<int, 3> dims) {
    validate_dims(m, dims);
    SpectralFunction F;
    F.m = m;
    F.dims = dims;
    F.coeff.assign(F.total(), cplx{0.0, 0.0});
    return F;
}

int SpectralFunction::bin(int axis, int k) const {
    const int N = dims[axis];
    if (2 * std::abs(k) >= N)
        throw std::out_of_range("frequency " + std::to_string(k) + " outside open Nyquist band of " +
                                std::to_string(N) + " points");
    return k >= 0 ? k : k + N;
}

cplx SpectralFunction::at(std::array<int, 3> k) const {
    std::size_t idx = 0, mul = 1;
    for (int j = 0; j < 3; ++j) {
        idx += static_cast<std::size_t>(bin(j, k[j])) * mul;
        mul *= static_cast<std::size_t>(dims[j]);
    }
    return coeff[idx];
}

void SpectralFunction::set(std::array<int, 3> k, cplx v) {
    std::size_t idx = 0, mul = 1;
    for (int j = 0; j < 3; ++j) {
        idx += static_cast<std::size_t>(bin(j, k[j])) * mul;
        mul *= static_cast<std::size_t>(dims[j]);
    }
    coeff[idx] = v;
}

SpectralFunction analyze(const GridFunction& f) {
    validate_dims(f.m, f.dims);
    if (f.samples.size() != f.total()) throw std::invalid_argument("sample count does not match dims");

    SpectralFunction F;
    F.m = f.m;
    F.dims = f.dims;
    F.coeff = f.samples;
    for (int axis = 0; axis < f.m; ++axis) fft_axis(F.coeff, F.dims, axis, -1);

    const double scale = 1.0 / static_cast<double>(F.total());
    for (cplx& c : F.coeff) c *= scale;

    // Drop Nyquist bins on every axis.
    for (int axis = 0; axis < F.m; ++axis) {
        const int ny = F.dims[axis] / 2;
        std::size_t stride = 1;
        for (int a = 0; a < axis; ++a) stride *= static_cast<std::size_t>(F.dims[a]);
        const std::size_t fibers = F.total() / static_cast<std::size_t>(F.dims[axis]);
        for (std::size_t f2 = 0; f2 < fibers; ++f2) {
            std::size_t lo = f2 % stride;
            std::size_t hi = f2 / stride;
            std::size_t base = lo + hi * stride * static_cast<std::size_t>(F.dims[axis]);
            F.coeff[base + static_cast<std::size_t>(ny) * stride] = cplx{0.0, 0.0};
        }
    }
    return F;
}

GridFunction synthesize(const SpectralFunction& F) {
    validate_dims(F.m, F.dims);
    if (F.coeff.size() != F.total()) throw std::invalid_argument("coefficient count does not match dims");

    GridFunction f;
    f.m = F.m;
    f.dims = F.dims;
    f.samples = F.coeff;
    for (int axis = 0; axis < F.m; ++axis) fft_axis(f.samples, f.dims, axis, +1);
    return f;
}

int block_index_of(int k) {
    if (k == 0) return 0;
    int a = std::abs(k);
    return ilog2(a) + 1;
}

std::vector<int> rho_axis(int s) {
    if (s < 0) throw std::invalid_argument("block index must be >= 0");
    if (s == 0) return {0};
    std::vector<int> out;
    const int lo = 1 << (s - 1), hi = 1 << s;
    out.reserve(static_cast<std::size_t>(hi));
    for (int k = -(hi - 1); k <= -lo; ++k) out.push_back(k);
    for (int k = lo; k <= hi - 1; ++k) out.push_back(k);
    return out;
}

std::size_t rho_cardinality(std::span<const int> s, int m) {
    std::size_t card = 1;
    for (int j = 0; j < m; ++j) card *= (s[j] == 0) ? 1u : (1u << s[j]);
    return card;
}

std::vector<std::array<int, 3>> rho_block(std::span<const int> s, int m) {
    if (static_cast<int>(s.size()) < m) throw std::invalid_argument("block index tuple shorter than m");
    std::array<std::vector<int>, 3> per{};
    for (int j = 0; j < 3; ++j) per[j] = (j < m) ? rho_axis(s[j]) : std::vector<int>{0};

    std::vector<std::array<int, 3>> out;
    out.reserve(per[0].size() * per[1].size() * per[2].size());
    for (int k3 : per[2])
        for (int k2 : per[1])
            for (int k1 : per[0]) out.push_back({k1, k2, k3});
    return out;
}

int max_block_index(int N) {
    if (!is_pow2(N) || N < 4) throw std::invalid_argument("grid size must be a power of two >= 4");
    return ilog2(N) - 1;  // largest s with 2^s - 1 < N/2
}

SpectralFunction block_spectrum(const SpectralFunction& F, std::span<const int> s) {
    for (int j = 0; j < F.m; ++j)
        if (s[j] > max_block_index(F.dims[j]))
            throw std::invalid_argument("block index exceeds the Nyquist band of the grid");

    SpectralFunction out = SpectralFunction::zeros(F.m, F.dims);
    for (const auto& k : rho_block(s, F.m)) out.set(k, F.at(k));
    return out;
}

GridFunction dyadic_block(const SpectralFunction& F, std::span<const int> s) {
    return synthesize(block_spectrum(F, s));
}

bool HyperbolicCross::contains(std::array<int, 3> k) const {
    double dot = 0.0;
    for (int j = 0; j < m; ++j) dot += gamma[static_cast<std::size_t>(j)] * block_index_of(k[j]);
    return dot < n;
}

HyperbolicCross hyperbolic_cross(std::span<const double> gamma, double n, int m) {
    if (m < 1 || m > 3) throw std::invalid_argument("dimension m must be 1, 2 or 3");
    if (static_cast<int>(gamma.size()) < m) throw std::invalid_argument("gamma tuple shorter than m");
    for (int j = 0; j < m; ++j)
        if (!(gamma[j] > 0.0)) throw std::invalid_argument("gamma components must be positive");

    HyperbolicCross c;
    c.m = m;
    c.gamma.assign(gamma.begin(), gamma.begin() + m);
    c.n = n;

    std::array<int, 3> cap{0, 0, 0};
    for (int j = 0; j < m; ++j) {
        double lim = n / c.gamma[static_cast<std::size_t>(j)];
        cap[j] = (lim > 0.0) ? static_cast<int>(std::ceil(lim)) : 0;
    }

    std::array<int, 3> s{0, 0, 0};
    for (s[2] = 0; s[2] <= (m > 2 ? cap[2] : 0); ++s[2])
        for (s[1] = 0; s[1] <= (m > 1 ? cap[1] : 0); ++s[1])
            for (s[0] = 0; s[0] <= cap[0]; ++s[0]) {
                double dot = 0.0;
                for (int j = 0; j < m; ++j) dot += c.gamma[static_cast<std::size_t>(j)] * s[j];
                if (dot < n) c.blocks.push_back(s);
            }

    for (const auto& sb : c.blocks) {
        auto ks = rho_block(std::span<const int>(sb.data(), 3), m);
        c.indices.insert(c.indices.end(), ks.begin(), ks.end());
    }
    std::sort(c.indices.begin(), c.indices.end());
    return c;
}

SpectralFunction project_cross(const SpectralFunction& F, const HyperbolicCross& cross) {
    if (cross.m != F.m) throw std::invalid_argument("cross dimension does not match spectrum");
    SpectralFunction out = SpectralFunction::zeros(F.m, F.dims);
    for (const auto& k : cross.indices) {
        bool inside = true;
        for (int j = 0; j < F.m; ++j)
            if (2 * std::abs(k[j]) >= F.dims[j]) inside = false;
        if (inside) out.set(k, F.at(k));
    }
    return out;
}

GridFunction partial_sum(const SpectralFunction& F, const HyperbolicCross& cross) {
    return synthesize(project_cross(F, cross));
}

GridFunction dirichlet_kernel(int n, int N) {
    if (n < 0) throw std::invalid_argument("kernel degree must be >= 0");
    if (N <= 2 * n) throw std::invalid_argument("grid too coarse for kernel degree");
    SpectralFunction F = SpectralFunction::zeros(1, {N, 1, 1});
    for (int k = -n; k <= n; ++k) F.set({k, 0, 0}, cplx{1.0, 0.0});
    return synthesize(F);
}

SpectralFunction zero_mean_project(const SpectralFunction& F) {
    SpectralFunction out = F;
    std::array<int, 3> d = F.dims;
    for (int i3 = 0; i3 < d[2]; ++i3)
        for (int i2 = 0; i2 < d[1]; ++i2)
            for (int i1 = 0; i1 < d[0]; ++i1) {
                bool kill = (i1 == 0) || (F.m > 1 && i2 == 0) || (F.m > 2 && i3 == 0);
                if (kill) {
                    std::size_t idx = static_cast<std::size_t>(i1) +
                                      static_cast<std::size_t>(d[0]) * (i2 + static_cast<std::size_t>(d[1]) * i3);
                    out.coeff[idx] = cplx{0.0, 0.0};
                }
            }
    return out;
}

bool is_zero_mean(const SpectralFunction& F, double tol) {
    double peak = 0.0;
    for (const cplx& c : F.coeff) peak = std::max(peak, std::abs(c));
    const double bar = tol * std::max(peak, 1.0);

    std::array<int, 3> d = F.dims;
    for (int i3 = 0; i3 < d[2]; ++i3)
        for (int i2 = 0; i2 < d[1]; ++i2)
            for (int i1 = 0; i1 < d[0]; ++i1) {
                bool axis0 = (i1 == 0) || (F.m > 1 && i2 == 0) || (F.m > 2 && i3 == 0);
                if (!axis0) continue;
                std::size_t idx = static_cast<std::size_t>(i1) +
                                  static_cast<std::size_t>(d[0]) * (i2 + static_cast<std::size_t>(d[1]) * i3);
                if (std::abs(F.coeff[idx]) > bar) return false;
            }
    return true;
}

}  // namespace lorcross

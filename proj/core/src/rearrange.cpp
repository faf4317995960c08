#include "lorcross/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lorcross {

namespace {

void require_non_negative(std::span<const double> v) {
    for (double x : v)
        if (!(x >= 0.0)) throw std::domain_error("rearrangement requires non-negative finite samples");
}

// Sort every fiber along `axis` in descending order.
void sort_axis_desc(std::vector<double>& data, const std::array<int, 3>& dims, int axis) {
    const int n = dims[axis];
    if (n == 1) return;
    std::size_t stride = 1;
    for (int a = 0; a < axis; ++a) stride *= static_cast<std::size_t>(dims[a]);
    const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    const std::size_t fibers = total / static_cast<std::size_t>(n);

    std::vector<double> buf(static_cast<std::size_t>(n));
    for (std::size_t f = 0; f < fibers; ++f) {
        std::size_t lo = f % stride;
        std::size_t hi = f / stride;
        std::size_t base = lo + hi * stride * static_cast<std::size_t>(n);
        for (int i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = data[base + static_cast<std::size_t>(i) * stride];
        std::sort(buf.begin(), buf.end(), std::greater<double>());
        for (int i = 0; i < n; ++i) data[base + static_cast<std::size_t>(i) * stride] = buf[static_cast<std::size_t>(i)];
    }
}

int dyadic_cells(double t, int N) {
    if (!(t > 0.0) || t > 1.0) throw std::domain_error("scale must lie in (0, 1]");
    int ex = 0;
    if (std::frexp(t, &ex) != 0.5) throw std::domain_error("scale must be a power of two");
    double w = t * static_cast<double>(N);
    if (w < 1.0 - 1e-9) throw std::domain_error("scale finer than the grid");
    return static_cast<int>(std::lround(w));
}

}  // namespace

double StepFunction::value_at(double t) const {
    if (!(t >= 0.0) || t >= breakpoints.back())
        throw std::domain_error("argument outside [0, 1)");
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    std::size_t cell = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
    return values[cell];
}

StepFunction rearrange_1d(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("cannot rearrange an empty sample set");
    require_non_negative(samples);

    StepFunction s;
    s.values.assign(samples.begin(), samples.end());
    std::sort(s.values.begin(), s.values.end(), std::greater<double>());
    const std::size_t n = s.values.size();
    s.breakpoints.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        s.breakpoints[i] = static_cast<double>(i) / static_cast<double>(n);
    return s;
}

double IteratedRearrangement::value_at(std::span<const double> t) const {
    if (static_cast<int>(t.size()) < m) throw std::invalid_argument("need one argument per axis");
    std::array<int, 3> i{0, 0, 0};
    for (int j = 0; j < m; ++j) {
        if (!(t[j] >= 0.0) || t[j] >= 1.0) throw std::domain_error("arguments must lie in [0, 1)");
        i[j] = static_cast<int>(t[j] * static_cast<double>(dims[j]));
    }
    return values[static_cast<std::size_t>(i[0]) +
                  static_cast<std::size_t>(dims[0]) * (i[1] + static_cast<std::size_t>(dims[1]) * i[2])];
}

IteratedRearrangement iterated_rearrangement(std::span<const double> values, int m,
                                             std::array<int, 3> dims) {
    // Plain tables need no transform, so any positive box shape is fine here;
    // the power-of-two constraint belongs to the sampled-grid entry point.
    if (m < 1 || m > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
    for (int j = 0; j < 3; ++j)
        if (dims[j] < 1 || (j >= m && dims[j] != 1))
            throw std::invalid_argument("box sides must be >= 1, trailing axes 1");
    const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    if (values.size() != total) throw std::invalid_argument("value count does not match dims");
    require_non_negative(values);

    IteratedRearrangement r;
    r.m = m;
    r.dims = dims;
    r.values.assign(values.begin(), values.end());
    for (int axis = 0; axis < m; ++axis) sort_axis_desc(r.values, dims, axis);
    return r;
}

IteratedRearrangement iterated_rearrangement(const GridFunction& f) {
    std::vector<double> mag(f.samples.size());
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(f.samples[i]);
    return iterated_rearrangement(mag, f.m, f.dims);
}

double distribution_function(std::span<const double> samples, double lambda) {
    if (samples.empty()) throw std::invalid_argument("empty sample set");
    std::size_t count = 0;
    for (double v : samples)
        if (v > lambda) ++count;
    return static_cast<double>(count) / static_cast<double>(samples.size());
}

double maximal_average(const GridFunction& f, std::span<const double> t) {
    if (static_cast<int>(t.size()) < f.m) throw std::invalid_argument("need one scale per axis");
    IteratedRearrangement r = iterated_rearrangement(f);

    std::array<int, 3> w{1, 1, 1};
    for (int j = 0; j < f.m; ++j) w[j] = dyadic_cells(t[j], f.dims[j]);

    long double acc = 0.0L;
    for (int i3 = 0; i3 < w[2]; ++i3)
        for (int i2 = 0; i2 < w[1]; ++i2)
            for (int i1 = 0; i1 < w[0]; ++i1)
                acc += r.values[static_cast<std::size_t>(i1) +
                                static_cast<std::size_t>(r.dims[0]) *
                                    (i2 + static_cast<std::size_t>(r.dims[1]) * i3)];
    const long double cells = static_cast<long double>(w[0]) * w[1] * w[2];
    return static_cast<double>(acc / cells);
}

}  // namespace lorcross

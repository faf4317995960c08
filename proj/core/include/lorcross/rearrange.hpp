#pragma once

#include <array>
#include <span>
#include <vector>

#include "lorcross/grid.hpp"

namespace lorcross {

// Non-increasing step function on [0, 1): value_at(t) = values[i] for
// t in [breakpoints[i], breakpoints[i+1]).
struct StepFunction {
    std::vector<double> breakpoints;  // size values.size() + 1, starts 0, ends 1
    std::vector<double> values;       // non-increasing

    double value_at(double t) const;
};

// Decreasing rearrangement of non-negative samples, each carrying mass 1/N.
StepFunction rearrange_1d(std::span<const double> samples);

// Result of rearranging along axis 1 first, then axis 2, then axis 3.  The
// cell (i1, .., im) holds the value on prod [i_j/N_j, (i_j+1)/N_j); values are
// non-increasing along every axis.
struct IteratedRearrangement {
    int m = 1;
    std::array<int, 3> dims{1, 1, 1};
    std::vector<double> values;  // row-major, axis 1 fastest

    std::size_t total() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    double value_at(std::span<const double> t) const;  // t_j in [0, 1)
};

IteratedRearrangement iterated_rearrangement(std::span<const double> values, int m,
                                             std::array<int, 3> dims);
IteratedRearrangement iterated_rearrangement(const GridFunction& f);  // of |f|

// Fraction of samples with value strictly above lambda.
double distribution_function(std::span<const double> samples, double lambda);

// Largest average of |f| over an index box of size w_j = t_j N_j per axis,
// taking the w_j largest entries axis by axis (axis 1 first).  Each t_j must
// be 2^-n with t_j N_j >= 1.
double maximal_average(const GridFunction& f, std::span<const double> t);

}  // namespace lorcross

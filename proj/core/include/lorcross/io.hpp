#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "lorcross/grid.hpp"

namespace lorcross {

// Sample file: a header line
//   # m=<m> dims=<N1[,N2[,N3]]> kind=<real|complex>
// followed by one sample per line in row-major order (axis 1 fastest),
// "re" for real files and "re,im" for complex ones.  Blank lines and lines
// starting with '#' after the header are ignored.
GridFunction read_grid_samples(std::istream& in, const std::string& origin = "<stream>");
GridFunction read_grid_file(const std::filesystem::path& path);

// Built-in sample generators, all deterministic:
//   gen:block:<s1[,s2[,s3]]>            sum of e^{i<k,x>} over the dyadic block
//   gen:random-bandlimited:<seed>:<L>   real-valued, random spectrum on |k_j| < 2^L
//   gen:rect:<a1[,a2[,a3]]>             indicator of the box prod [0, 2pi a_j)
GridFunction make_from_generator(const std::string& spec, int m, std::array<int, 3> dims);

// Dispatch: "gen:..." goes to make_from_generator, anything else is read as a
// sample file (whose header fixes m and dims; the arguments are then ignored).
GridFunction load_input(const std::string& source, int m, std::array<int, 3> dims);

}  // namespace lorcross

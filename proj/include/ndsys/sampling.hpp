#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ndsys/types.hpp"

namespace ndsys {

/// First `count` points of the Sobol sequence in [0,1)^dim after skipping `skip`.
std::vector<std::vector<double>> sobol_sequence(std::size_t dim, std::size_t count,
                                                std::size_t skip = 0);

/// Quasi-uniform points of (radius * D)^n, two Sobol coordinates per disc.
std::vector<Point> sobol_polydisc(std::size_t n, std::size_t count, double radius,
                                  std::size_t skip = 0);

/// Pseudo-random points of (radius * D)^n.
std::vector<Point> random_polydisc(std::size_t n, std::size_t count, double radius,
                                   std::uint64_t seed);

/// Pseudo-random points of the torus T^n.
std::vector<Point> random_torus(std::size_t n, std::size_t count, std::uint64_t seed);

}  // namespace ndsys

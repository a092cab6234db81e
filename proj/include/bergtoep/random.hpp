#pragma once

#include <cstddef>
#include <random>

#include "bergtoep/bergman.hpp"

namespace bergtoep {

using Rng = std::mt19937_64;

// Coefficients are independent standard complex normals scaled by `scale`.
PowerSeries random_series(Rng& rng, std::size_t degree, double scale = 1.0);
PolyMatrixSymbol random_symbol(Rng& rng, std::size_t n, std::size_t degree, double scale = 1.0);
VectorPoly random_vector(Rng& rng, std::size_t n, std::size_t degree, double scale = 1.0);

// Uniform in angle, radius uniform on [0, max_radius].
Cx random_disk_point(Rng& rng, double max_radius);

// Uniform integer in [lo, hi].
std::size_t random_index(Rng& rng, std::size_t lo, std::size_t hi);

}  // namespace bergtoep

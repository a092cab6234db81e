#include "bergtoep/random.hpp"

#include <numbers>

namespace bergtoep {

PowerSeries random_series(Rng& rng, std::size_t degree, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  std::vector<Cx> c(degree + 1);
  for (auto& x : c) {
    const double re = nd(rng);
    x = Cx(re, nd(rng));
  }
  return PowerSeries(std::move(c));
}

PolyMatrixSymbol random_symbol(Rng& rng, std::size_t n, std::size_t degree, double scale) {
  std::vector<PowerSeries> e;
  e.reserve(n * n);
  for (std::size_t i = 0; i < n * n; ++i) e.push_back(random_series(rng, degree, scale));
  return PolyMatrixSymbol(n, std::move(e));
}

VectorPoly random_vector(Rng& rng, std::size_t n, std::size_t degree, double scale) {
  std::vector<PowerSeries> c;
  c.reserve(n);
  for (std::size_t i = 0; i < n; ++i) c.push_back(random_series(rng, degree, scale));
  return VectorPoly(std::move(c));
}

Cx random_disk_point(Rng& rng, double max_radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = max_radius * u(rng);
  return std::polar(r, 2.0 * std::numbers::pi * u(rng));
}

std::size_t random_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace bergtoep

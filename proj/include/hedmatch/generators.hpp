#pragma once

#include <cstddef>
#include <cstdint>

#include "hedmatch/instance.hpp"

namespace hedmatch {

// X = {0}, Y = {1}, Z = {0, 0.5, 1}, u = -(1/2)|x-z|^2, v = (1/2)|y-z|^2.
Instance make_t1();

// X = Y = {0, 1} with masses (0.5, 0.5), Z = {0, 0.5, 1}, same costs as t1.
Instance make_t3();

// X uniform on [0, 1], Y = X + 1, Z on [0.5, 1.5], each with `n` atoms and
// weights 1/n; u = -(alpha/2)|x-z|^2, v = (1/2)|y-z|^2.
Instance make_uniform_shift(std::size_t n = 65, double alpha = 1.0);

// Table costs uniform in [-1, 1]; weights are compositions of 16 sixteenths.
// Needs nx, ny <= 16.
Instance make_random_table(std::uint64_t seed, std::size_t nx, std::size_t ny,
                           std::size_t nz);

// Eight-atom sorted 1D quadratic pair: x_i = i/8, y_i = x_i + 3/4,
// Z = k/32 for k = 0..52, so every monotone-pair target
// (alpha x + y) / (alpha + 1) lands on an atom for alpha in {0.5, 1, 2}.
Instance make_quadratic_1d(double alpha);

// Bilinear instance with random atoms; Z holds the unit-square corners and
// center (dim 2) or points of [0, 1] (dim 1).
Instance make_random_bilinear(std::uint64_t seed, std::size_t dim);

}  // namespace hedmatch

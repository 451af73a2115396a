#pragma once

#include <optional>
#include <vector>

#include "ddn/evaluate.hpp"

namespace ddn {

using RatVec = std::vector<Rat>;
using RatMatrix = std::vector<RatVec>;

int rank_of(RatMatrix m);

// Basis of { x : M x = 0 }, each vector scaled to a primitive integer vector
// with positive first nonzero entry.
std::vector<RatVec> nullspace(const RatMatrix& m);

// One solution of M x = b, if consistent.
std::optional<RatVec> solve_affine(RatMatrix m, RatVec b);

// Samples rows of the linear system  sum_k c_k * columns[k] (+ constant) = 0
// by exact evaluation at seeded random points.  Every column supplies the
// same number of component expressions; each (point, component) pair
// produces one row.  Transcendental atoms are valued as fresh independent
// rationals per point, so the rows stay exact.
struct SampledSystem {
  RatMatrix rows;
  RatVec constants;  // same length as rows; zero when no constant column
};

SampledSystem sample_linear_system(const std::vector<ExprList>& columns,
                                   const ExprList* constant_column, const Signature& sig,
                                   const SampleConfig& cfg, std::uint64_t seed_offset = 0);

}  // namespace ddn

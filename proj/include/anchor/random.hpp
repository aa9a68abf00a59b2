#pragma once

//
// Deterministic random sources for synthetic data. mt19937_64 plus
// hand-rolled uniform/normal transforms, so a (seed, stream) pair produces
// the same matrices on every standard library.
//

#include <cstdint>
#include <random>
#include <string>

#include "anchor/types.hpp"

namespace anchor {

struct EmbeddingMatrix;

// Independent stream for trial `stream` of a run seeded with `seed`;
// streams can be consumed concurrently in any order.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream = 0);

// Uniform in [0, 1), 53-bit resolution.
double uniform01(std::mt19937_64& rng);

// Standard normal via Box-Muller (one variate per two draws).
double normal01(std::mt19937_64& rng);

// n x d matrix of i.i.d. standard normal entries.
RowMatrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng);

// Haar-distributed d x d orthogonal matrix (QR of a Gaussian matrix with
// the R-diagonal sign fix).
RowMatrix random_orthogonal(Index dim, std::mt19937_64& rng);

// Isotropic synthetic embedding: Gaussian entries over vocabulary
// w000000, w000001, ... (zero-padded so lexicographic order is row order).
EmbeddingMatrix synthetic_embedding(Index rows, Index cols, const std::string& label,
                                    std::mt19937_64& rng);

}  // namespace anchor

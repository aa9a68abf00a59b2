#pragma once

//
// Corpus-level and word-level shift metrics over aligned embedding pairs.
//
// The anchor distance ||E E^T - F F^T||_F is computed through the d x d
// Gram matrices,
//
//     sqrt(||E^T E||^2 + ||F^T F||^2 - 2 ||E^T F||^2),
//
// which never materializes an n x n matrix and accepts unequal
// dimensionalities. A dense row-blocked path exists as the reference
// oracle. The alignment distance is the orthogonal-Procrustes residual and
// requires equal dimensionalities.
//

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "anchor/embedding.hpp"
#include "anchor/types.hpp"

namespace anchor {

// Anchor words used by the local triangulation metric; every word must
// resolve to a row of the pair it is applied to.
struct AnchorSet {
  std::vector<std::string> words;
};

// Symmetric pairwise-dissimilarity matrix over labeled embeddings:
// zero diagonal, non-negative entries.
struct DistanceMatrix {
  std::vector<std::string> labels;
  RowMatrix values;
};

// Throws if the DistanceMatrix invariants (square, symmetric within 1e-9,
// zero diagonal, non-negative) are violated.
void validate_distance_matrix(const DistanceMatrix& m);

// ||E E^T - F F^T||_F via the Gram-trace identity; no n x n intermediate.
double anchor_distance(const RowMatrix& e, const RowMatrix& f);
double anchor_distance(const AlignedPair& pair);

// Reference path: materializes the pairwise-inner-product rows explicitly
// (in row blocks). Guarded by `cap` on the vocabulary size.
double anchor_distance_dense(const RowMatrix& e, const RowMatrix& f, Index cap = 20000);
double anchor_distance_dense(const AlignedPair& pair, Index cap = 20000);

// Orthogonal-Procrustes residual min_Q ||E - F Q||_F.
double alignment_distance(const RowMatrix& e, const RowMatrix& f);
double alignment_distance(const AlignedPair& pair);

// Per-word shift ||(E E^T)_i - (F F^T)_i||, indexed like the pair's
// vocabulary. Row-blocked: O(block * n) memory.
std::vector<double> word_drift(const AlignedPair& pair);

struct RankedWord {
  std::string word;
  double drift;
};

// Sums word_drift over pairs sharing one vocabulary and ranks ascending
// (most similar usage first), ties broken lexicographically. Words in
// `stopwords` are excluded.
std::vector<RankedWord> aggregate_word_drift(
    const std::vector<AlignedPair>& pairs,
    const std::unordered_set<std::string>& stopwords = {});

// || <E_w, E_a> over anchors a  -  <F_w, F_a> over anchors a ||_2.
// With anchors = whole vocabulary this equals word_drift for `word`.
double local_anchor_drift(const AlignedPair& pair, const AnchorSet& anchors,
                          const std::string& word);

struct RatioSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  double min = 0.0;
  double max = 0.0;
};

RatioSummary summarize(const std::vector<double>& values);

struct PairRatio {
  std::string left;
  std::string right;
  double alignment;
  double anchor;
  double ratio;  // alignment / anchor
};

// alignment/anchor ratios over all ordered pairs (i, j), i != j, of the
// collection restricted to its global shared vocabulary. Pairs with zero
// anchor distance cannot be assigned a ratio and are listed separately.
struct RatioStatistics {
  std::vector<PairRatio> ratios;
  std::vector<std::pair<std::string, std::string>> degenerate_pairs;
  RatioSummary summary;
};

RatioStatistics ratio_statistics(const std::vector<EmbeddingMatrix>& collection,
                                 bool normalize, unsigned threads = 1);

enum class Metric { anchor, alignment };
enum class VocabPolicy {
  // One anchoring set: the intersection across the whole collection.
  global_intersection,
  // Each entry over its own pairwise intersection; entries are not
  // mutually comparable since the anchoring sets differ.
  per_pair,
};

struct DistanceMatrixOptions {
  Metric metric = Metric::anchor;
  VocabPolicy vocab = VocabPolicy::global_intersection;
  bool normalize = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Pairwise distances over the collection. Pair jobs run concurrently with
// results placed by index, so output is identical for any thread count.
DistanceMatrix distance_matrix(const std::vector<EmbeddingMatrix>& collection,
                               const DistanceMatrixOptions& options = {});

// Restriction of every collection member to the global shared vocabulary
// (lexicographically ordered). Used by distance_matrix and ratio_statistics.
std::vector<EmbeddingMatrix> restrict_to_shared_vocab(
    const std::vector<EmbeddingMatrix>& collection);

}  // namespace anchor

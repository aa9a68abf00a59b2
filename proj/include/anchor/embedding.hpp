#pragma once

//
// Loading, validation, normalization and vocabulary alignment of word
// embedding matrices.
//
// Supported on-disk formats:
//   word2vec text: header line "n d", then "word v1 ... vd", single-space
//                  separated, UTF-8, words without whitespace
//   tsv:           no header, "word\tv1\t...\tvd"
//
// All types are immutable after construction and safe to share across
// concurrent readers.
//

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anchor/types.hpp"

namespace anchor {

enum class EmbeddingFormat { autodetect, word2vec_text, tsv };

// One embedding: a vocabulary of n unique words and the n x d matrix whose
// row i is the vector of vocab[i]. All entries finite, n >= 1, d >= 1.
struct EmbeddingMatrix {
  std::vector<std::string> vocab;
  RowMatrix matrix;
  std::string label;

  Index size() const { return matrix.rows(); }
  Index dim() const { return matrix.cols(); }

  // Row index of `word`, or nullopt. Linear scan; fine for the handful of
  // point lookups the metrics need.
  std::optional<Index> find(std::string_view word) const;
};

// Throws if any EmbeddingMatrix invariant is violated.
void validate_embedding(const EmbeddingMatrix& e);

// Two embeddings over the same vocabulary in the same order. The
// dimensionalities may differ; only the vocabularies must match.
struct AlignedPair {
  EmbeddingMatrix left;
  EmbeddingMatrix right;
};

// Checked constructor for pairs built by hand (tests, synthetic data).
AlignedPair make_aligned_pair(EmbeddingMatrix left, EmbeddingMatrix right);

EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                EmbeddingFormat format = EmbeddingFormat::autodetect);
void save_embeddings(const EmbeddingMatrix& e, const std::filesystem::path& path,
                     EmbeddingFormat format = EmbeddingFormat::word2vec_text);

// Restricts both embeddings to the shared vocabulary, rows reordered to
// lexicographic word order. Throws DegenerateDataError if the intersection
// is empty. Inputs are not modified.
AlignedPair intersect_vocab(const EmbeddingMatrix& a, const EmbeddingMatrix& b);

// Divides the matrix by its average column norm (1/d) * sum_k ||col_k||.
// Throws DegenerateDataError on an all-zero matrix.
EmbeddingMatrix normalize_avg_column_norm(const EmbeddingMatrix& e);

// The normalization scalar itself; 1.0 for already-normalized input.
double avg_column_norm(const RowMatrix& m);

}  // namespace anchor

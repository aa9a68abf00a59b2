#include "anchor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "anchor/kernels.hpp"
#include "anchor/parallel.hpp"
#include "anchor/subspace.hpp"

namespace anchor {

namespace {

constexpr std::size_t kDriftBlockRows = 1024;

void check_pair(const AlignedPair& pair) {
  if (pair.left.vocab != pair.right.vocab) {
    throw std::invalid_argument("pair vocabularies are not aligned");
  }
}

RowMatrix gram_of(const RowMatrix& m) {
  RowMatrix g(m.cols(), m.cols());
  kernels::gram(m.data(), static_cast<std::size_t>(m.cols()),
                static_cast<std::size_t>(m.rows()), g.data());
  return g;
}

double gram_trace_distance(double e_sq, double f_sq, double cross_sq) {
  // Mathematically a squared norm; clamp the ~1e-16 negative residue.
  const double sq = e_sq + f_sq - 2.0 * cross_sq;
  return std::sqrt(std::max(sq, 0.0));
}

}  // namespace

void validate_distance_matrix(const DistanceMatrix& m) {
  const Index n = m.values.rows();
  if (m.values.cols() != n) throw std::invalid_argument("distance matrix is not square");
  if (static_cast<Index>(m.labels.size()) != n) {
    throw std::invalid_argument("distance matrix has " + std::to_string(m.labels.size()) +
                                " labels for " + std::to_string(n) + " rows");
  }
  for (Index i = 0; i < n; ++i) {
    if (m.values(i, i) != 0.0) {
      throw std::invalid_argument("distance matrix diagonal entry (" + std::to_string(i) +
                                  ") is not zero");
    }
    for (Index j = 0; j < n; ++j) {
      if (!(m.values(i, j) >= 0.0)) {
        throw std::invalid_argument("distance matrix entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is negative or NaN");
      }
      if (std::abs(m.values(i, j) - m.values(j, i)) > 1e-9) {
        throw std::invalid_argument("distance matrix is not symmetric at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
      }
    }
  }
}

double anchor_distance(const RowMatrix& e, const RowMatrix& f) {
  if (e.rows() != f.rows()) {
    throw std::invalid_argument("anchor_distance: row counts differ");
  }
  const std::size_t n = static_cast<std::size_t>(e.rows());
  const std::size_t de = static_cast<std::size_t>(e.cols());
  const std::size_t df = static_cast<std::size_t>(f.cols());

  const RowMatrix ge = gram_of(e);
  const RowMatrix gf = gram_of(f);
  RowMatrix cross(e.cols(), f.cols());
  kernels::cross_gram(e.data(), de, f.data(), df, n, cross.data());

  return gram_trace_distance(kernels::squared_norm(ge.data(), de * de),
                             kernels::squared_norm(gf.data(), df * df),
                             kernels::squared_norm(cross.data(), de * df));
}

double anchor_distance(const AlignedPair& pair) {
  check_pair(pair);
  return anchor_distance(pair.left.matrix, pair.right.matrix);
}

double anchor_distance_dense(const RowMatrix& e, const RowMatrix& f, Index cap) {
  if (e.rows() != f.rows()) {
    throw std::invalid_argument("anchor_distance_dense: row counts differ");
  }
  if (e.rows() > cap) {
    throw std::invalid_argument("anchor_distance_dense: n = " + std::to_string(e.rows()) +
                                " exceeds the dense cap " + std::to_string(cap));
  }
  const std::size_t n = static_cast<std::size_t>(e.rows());
  const std::size_t de = static_cast<std::size_t>(e.cols());
  const std::size_t df = static_cast<std::size_t>(f.cols());

  const std::size_t block = std::min(kDriftBlockRows, n);
  RowMatrix pip_e(static_cast<Index>(block), e.rows());
  RowMatrix pip_f(static_cast<Index>(block), e.rows());
  double total = 0.0;
  for (std::size_t start = 0; start < n; start += block) {
    const std::size_t rows = std::min(block, n - start);
    kernels::matmul_abt(e.data() + start * de, rows, e.data(), n, de, pip_e.data());
    kernels::matmul_abt(f.data() + start * df, rows, f.data(), n, df, pip_f.data());
    total += kernels::diff_squared_norm(pip_e.data(), pip_f.data(), rows * n);
  }
  return std::sqrt(total);
}

double anchor_distance_dense(const AlignedPair& pair, Index cap) {
  check_pair(pair);
  return anchor_distance_dense(pair.left.matrix, pair.right.matrix, cap);
}

double alignment_distance(const RowMatrix& e, const RowMatrix& f) {
  return procrustes(e, f).residual;
}

double alignment_distance(const AlignedPair& pair) {
  check_pair(pair);
  return alignment_distance(pair.left.matrix, pair.right.matrix);
}

std::vector<double> word_drift(const AlignedPair& pair) {
  check_pair(pair);
  const RowMatrix& e = pair.left.matrix;
  const RowMatrix& f = pair.right.matrix;
  const std::size_t n = static_cast<std::size_t>(e.rows());
  const std::size_t de = static_cast<std::size_t>(e.cols());
  const std::size_t df = static_cast<std::size_t>(f.cols());

  std::vector<double> drift(n);
  const std::size_t block = std::min(kDriftBlockRows, n);
  RowMatrix pip_e(static_cast<Index>(block), e.rows());
  RowMatrix pip_f(static_cast<Index>(block), e.rows());
  for (std::size_t start = 0; start < n; start += block) {
    const std::size_t rows = std::min(block, n - start);
    kernels::matmul_abt(e.data() + start * de, rows, e.data(), n, de, pip_e.data());
    kernels::matmul_abt(f.data() + start * df, rows, f.data(), n, df, pip_f.data());
    for (std::size_t r = 0; r < rows; ++r) {
      drift[start + r] = std::sqrt(
          kernels::diff_squared_norm(pip_e.data() + r * n, pip_f.data() + r * n, n));
    }
  }
  return drift;
}

std::vector<RankedWord> aggregate_word_drift(const std::vector<AlignedPair>& pairs,
                                             const std::unordered_set<std::string>& stopwords) {
  if (pairs.empty()) throw std::invalid_argument("aggregate_word_drift: no pairs");
  const auto& vocab = pairs.front().left.vocab;
  for (const auto& pair : pairs) {
    check_pair(pair);
    if (pair.left.vocab != vocab) {
      throw std::invalid_argument("aggregate_word_drift: pairs have inconsistent vocabularies");
    }
  }

  std::vector<double> total(vocab.size(), 0.0);
  for (const auto& pair : pairs) {
    const auto drift = word_drift(pair);
    for (std::size_t i = 0; i < drift.size(); ++i) total[i] += drift[i];
  }

  std::vector<RankedWord> ranked;
  ranked.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (stopwords.contains(vocab[i])) continue;
    ranked.push_back({vocab[i], total[i]});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedWord& a, const RankedWord& b) {
    if (a.drift != b.drift) return a.drift < b.drift;
    return a.word < b.word;
  });
  return ranked;
}

double local_anchor_drift(const AlignedPair& pair, const AnchorSet& anchors,
                          const std::string& word) {
  check_pair(pair);
  if (anchors.words.empty()) throw std::invalid_argument("anchor set is empty");
  const auto row = pair.left.find(word);
  if (!row) throw std::invalid_argument("unknown word: '" + word + "'");

  const RowMatrix& e = pair.left.matrix;
  const RowMatrix& f = pair.right.matrix;
  const std::size_t de = static_cast<std::size_t>(e.cols());
  const std::size_t df = static_cast<std::size_t>(f.cols());
  const double* e_word = e.data() + static_cast<std::size_t>(*row) * de;
  const double* f_word = f.data() + static_cast<std::size_t>(*row) * df;

  double acc = 0.0;
  for (const auto& anchor_word : anchors.words) {
    const auto a = pair.left.find(anchor_word);
    if (!a) throw std::invalid_argument("unknown anchor word: '" + anchor_word + "'");
    const std::size_t ar = static_cast<std::size_t>(*a);
    const double diff = kernels::dot(e_word, e.data() + ar * de, de) -
                        kernels::dot(f_word, f.data() + ar * df, df);
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

RatioSummary summarize(const std::vector<double>& values) {
  RatioSummary s;
  s.count = values.size();
  if (values.empty()) {
    s.mean = s.stddev = s.min = s.max = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  s.min = values.front();
  s.max = values.front();
  for (const double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  double var = 0.0;
  for (const double v : values) var += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(var / static_cast<double>(values.size()));
  return s;
}

std::vector<EmbeddingMatrix> restrict_to_shared_vocab(
    const std::vector<EmbeddingMatrix>& collection) {
  if (collection.size() < 2) {
    throw std::invalid_argument("need at least 2 embeddings");
  }
  for (const auto& e : collection) validate_embedding(e);

  // Count how many embeddings contain each word of the first vocabulary.
  std::unordered_map<std::string_view, std::size_t> hits;
  for (const auto& w : collection.front().vocab) hits.emplace(w, 1);
  for (std::size_t i = 1; i < collection.size(); ++i) {
    for (const auto& w : collection[i].vocab) {
      const auto it = hits.find(w);
      if (it != hits.end() && it->second == i) ++it->second;
    }
  }
  std::vector<std::string> shared;
  for (const auto& w : collection.front().vocab) {
    if (hits.at(w) == collection.size()) shared.push_back(w);
  }
  if (shared.empty()) {
    throw DegenerateDataError("empty vocabulary intersection across the collection");
  }
  std::sort(shared.begin(), shared.end());

  std::vector<EmbeddingMatrix> restricted;
  restricted.reserve(collection.size());
  for (const auto& e : collection) {
    std::unordered_map<std::string_view, Index> index;
    index.reserve(e.vocab.size());
    for (std::size_t i = 0; i < e.vocab.size(); ++i) index.emplace(e.vocab[i], static_cast<Index>(i));
    EmbeddingMatrix out{shared, RowMatrix(static_cast<Index>(shared.size()), e.dim()), e.label};
    for (std::size_t r = 0; r < shared.size(); ++r) {
      out.matrix.row(static_cast<Index>(r)) = e.matrix.row(index.at(shared[r]));
    }
    restricted.push_back(std::move(out));
  }
  return restricted;
}

RatioStatistics ratio_statistics(const std::vector<EmbeddingMatrix>& collection, bool normalize,
                                 unsigned threads) {
  if (collection.size() < 2) {
    throw std::invalid_argument("ratio_statistics: need at least 2 embeddings");
  }
  const Index d = collection.front().dim();
  for (const auto& e : collection) {
    if (e.dim() != d) throw DimensionMismatchError(d, e.dim());
  }

  std::vector<EmbeddingMatrix> prepared = restrict_to_shared_vocab(collection);
  if (normalize) {
    for (auto& e : prepared) e = normalize_avg_column_norm(e);
  }

  const std::size_t m = prepared.size();
  struct Cell {
    double alignment = 0.0;
    double anchor = 0.0;
  };
  std::vector<Cell> cells(m * m);
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) jobs.push_back({i, j});
    }
  }
  parallel_for(jobs.size(), threads, [&](std::size_t k) {
    const auto [i, j] = jobs[k];
    Cell& cell = cells[i * m + j];
    cell.alignment = alignment_distance(prepared[i].matrix, prepared[j].matrix);
    cell.anchor = anchor_distance(prepared[i].matrix, prepared[j].matrix);
  });

  RatioStatistics stats;
  std::vector<double> ratios;
  for (const auto& [i, j] : jobs) {
    const Cell& cell = cells[i * m + j];
    if (cell.anchor == 0.0) {
      stats.degenerate_pairs.push_back({prepared[i].label, prepared[j].label});
      continue;
    }
    const double ratio = cell.alignment / cell.anchor;
    stats.ratios.push_back({prepared[i].label, prepared[j].label, cell.alignment, cell.anchor, ratio});
    ratios.push_back(ratio);
  }
  stats.summary = summarize(ratios);
  return stats;
}

DistanceMatrix distance_matrix(const std::vector<EmbeddingMatrix>& collection,
                               const DistanceMatrixOptions& options) {
  if (collection.size() < 2) {
    throw std::invalid_argument("distance_matrix: need at least 2 embeddings");
  }
  if (options.metric == Metric::alignment) {
    const Index d = collection.front().dim();
    for (const auto& e : collection) {
      if (e.dim() != d) throw DimensionMismatchError(d, e.dim());
    }
  }

  const std::size_t m = collection.size();
  DistanceMatrix result;
  result.values = RowMatrix::Zero(static_cast<Index>(m), static_cast<Index>(m));
  for (const auto& e : collection) result.labels.push_back(e.label);

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) jobs.push_back({i, j});
  }

  if (options.vocab == VocabPolicy::global_intersection) {
    std::vector<EmbeddingMatrix> prepared = restrict_to_shared_vocab(collection);
    if (options.normalize) {
      for (auto& e : prepared) e = normalize_avg_column_norm(e);
    }

    if (options.metric == Metric::anchor) {
      // Per-embedding Gram caches, computed once and shared read-only.
      std::vector<RowMatrix> grams(m);
      std::vector<double> gram_sq(m);
      parallel_for(m, options.threads, [&](std::size_t i) {
        grams[i] = gram_of(prepared[i].matrix);
        gram_sq[i] = kernels::squared_norm(grams[i].data(),
                                           static_cast<std::size_t>(grams[i].size()));
      });
      parallel_for(jobs.size(), options.threads, [&](std::size_t k) {
        const auto [i, j] = jobs[k];
        const RowMatrix& a = prepared[i].matrix;
        const RowMatrix& b = prepared[j].matrix;
        RowMatrix cross(a.cols(), b.cols());
        kernels::cross_gram(a.data(), static_cast<std::size_t>(a.cols()), b.data(),
                            static_cast<std::size_t>(b.cols()),
                            static_cast<std::size_t>(a.rows()), cross.data());
        const double value = gram_trace_distance(
            gram_sq[i], gram_sq[j],
            kernels::squared_norm(cross.data(), static_cast<std::size_t>(cross.size())));
        result.values(static_cast<Index>(i), static_cast<Index>(j)) = value;
        result.values(static_cast<Index>(j), static_cast<Index>(i)) = value;
      });
    } else {
      parallel_for(jobs.size(), options.threads, [&](std::size_t k) {
        const auto [i, j] = jobs[k];
        const double value = alignment_distance(prepared[i].matrix, prepared[j].matrix);
        result.values(static_cast<Index>(i), static_cast<Index>(j)) = value;
        result.values(static_cast<Index>(j), static_cast<Index>(i)) = value;
      });
    }
    return result;
  }

  // Per-pair intersections: no shared caches; each job aligns its own pair.
  parallel_for(jobs.size(), options.threads, [&](std::size_t k) {
    const auto [i, j] = jobs[k];
    try {
      AlignedPair pair = intersect_vocab(collection[i], collection[j]);
      if (options.normalize) {
        pair.left = normalize_avg_column_norm(pair.left);
        pair.right = normalize_avg_column_norm(pair.right);
      }
      const double value = options.metric == Metric::anchor ? anchor_distance(pair)
                                                            : alignment_distance(pair);
      result.values(static_cast<Index>(i), static_cast<Index>(j)) = value;
      result.values(static_cast<Index>(j), static_cast<Index>(i)) = value;
    } catch (const DegenerateDataError& e) {
      throw DegenerateDataError("pair (" + collection[i].label + ", " + collection[j].label +
                                "): " + e.what());
    }
  });
  return result;
}

}  // namespace anchor

#include "anchor/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "anchor/serialize.hpp"

namespace anchor {

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line,
                             const std::string& what) {
  throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

bool has_whitespace(std::string_view s) {
  return s.find_first_of(" \t\r\n\v\f") != std::string_view::npos;
}

void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

double parse_value(std::string_view token, const std::filesystem::path& path,
                   std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    parse_fail(path, line, "not a number: '" + std::string(token) + "'");
  }
  if (!std::isfinite(v)) {
    parse_fail(path, line, "non-finite value: '" + std::string(token) + "'");
  }
  return v;
}

// Splits `line` on `sep`, treating consecutive separators as empty tokens
// (which the callers reject as malformed).
std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

EmbeddingFormat detect_format(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::string first;
  if (!std::getline(in, first)) throw ParseError(path.string() + ":1: empty file");
  strip_cr(first);
  if (first.find('\t') != std::string::npos) return EmbeddingFormat::tsv;
  const auto tokens = split(first, ' ');
  if (tokens.size() == 2) {
    auto is_uint = [](std::string_view t) {
      if (t.empty()) return false;
      return std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (is_uint(tokens[0]) && is_uint(tokens[1])) return EmbeddingFormat::word2vec_text;
  }
  throw ParseError(path.string() + ":1: cannot detect format (expected 'n d' header or tab-separated row)");
}

struct RowAccumulator {
  std::vector<std::string> vocab;
  std::vector<double> values;
  std::unordered_set<std::string> seen;
  Index dim = -1;

  void add(std::string_view word, const std::vector<std::string_view>& tokens,
           const std::filesystem::path& path, std::size_t line) {
    if (word.empty()) parse_fail(path, line, "empty word");
    if (has_whitespace(word)) {
      parse_fail(path, line, "word contains whitespace: '" + std::string(word) + "'");
    }
    if (dim < 0) {
      dim = static_cast<Index>(tokens.size());
      if (dim == 0) parse_fail(path, line, "row has no values");
    } else if (static_cast<Index>(tokens.size()) != dim) {
      parse_fail(path, line, "dimension mismatch: expected " + std::to_string(dim) +
                                 " values, got " + std::to_string(tokens.size()));
    }
    if (!seen.insert(std::string(word)).second) {
      parse_fail(path, line, "duplicate word: '" + std::string(word) + "'");
    }
    vocab.emplace_back(word);
    for (const auto t : tokens) values.push_back(parse_value(t, path, line));
  }

  EmbeddingMatrix finish(const std::filesystem::path& path) {
    EmbeddingMatrix e;
    e.label = path.stem().string();
    e.vocab = std::move(vocab);
    const Index n = static_cast<Index>(e.vocab.size());
    e.matrix = Eigen::Map<const RowMatrix>(values.data(), n, dim);
    return e;
  }
};

EmbeddingMatrix load_word2vec_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ":1: empty file");
  strip_cr(line);
  const auto header = split(line, ' ');
  std::size_t n = 0, d = 0;
  auto parse_count = [&](std::string_view t, std::size_t& out) {
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc{} && ptr == t.data() + t.size();
  };
  if (header.size() != 2 || !parse_count(header[0], n) || !parse_count(header[1], d)) {
    parse_fail(path, 1, "malformed header (expected 'n d'): '" + line + "'");
  }
  if (n == 0 || d == 0) parse_fail(path, 1, "header declares an empty matrix");

  RowAccumulator acc;
  acc.dim = static_cast<Index>(d);
  acc.vocab.reserve(n);
  acc.values.reserve(n * d);

  std::size_t lineno = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) {
      if (rows == n) continue;  // tolerate trailing blank lines
      parse_fail(path, lineno, "blank line");
    }
    auto tokens = split(line, ' ');
    if (tokens.size() < 2) parse_fail(path, lineno, "expected 'word v1 ... vd'");
    const std::string_view word = tokens.front();
    tokens.erase(tokens.begin());
    if (rows == n) parse_fail(path, lineno, "more rows than the header declares");
    acc.add(word, tokens, path, lineno);
    ++rows;
  }
  if (rows != n) {
    throw ParseError(path.string() + ": expected " + std::to_string(n) + " rows, got " +
                     std::to_string(rows));
  }
  return acc.finish(path);
}

EmbeddingMatrix load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");

  RowAccumulator acc;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      parse_fail(path, lineno, "blank line");
    }
    auto tokens = split(line, '\t');
    if (tokens.size() < 2) parse_fail(path, lineno, "expected 'word\\tv1\\t...\\tvd'");
    const std::string_view word = tokens.front();
    tokens.erase(tokens.begin());
    acc.add(word, tokens, path, lineno);
  }
  if (acc.vocab.empty()) throw ParseError(path.string() + ": empty file");
  return acc.finish(path);
}

}  // namespace

std::optional<Index> EmbeddingMatrix::find(std::string_view word) const {
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (vocab[i] == word) return static_cast<Index>(i);
  }
  return std::nullopt;
}

void validate_embedding(const EmbeddingMatrix& e) {
  if (e.matrix.rows() < 1 || e.matrix.cols() < 1) {
    throw std::invalid_argument("embedding '" + e.label + "' is empty");
  }
  if (static_cast<Index>(e.vocab.size()) != e.matrix.rows()) {
    throw std::invalid_argument("embedding '" + e.label + "': vocab size " +
                                std::to_string(e.vocab.size()) + " != row count " +
                                std::to_string(e.matrix.rows()));
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& w : e.vocab) {
    if (w.empty()) throw std::invalid_argument("embedding '" + e.label + "': empty word");
    if (!seen.insert(w).second) {
      throw std::invalid_argument("embedding '" + e.label + "': duplicate word '" + w + "'");
    }
  }
  if (!e.matrix.allFinite()) {
    throw std::invalid_argument("embedding '" + e.label + "': non-finite entry");
  }
}

AlignedPair make_aligned_pair(EmbeddingMatrix left, EmbeddingMatrix right) {
  validate_embedding(left);
  validate_embedding(right);
  if (left.vocab != right.vocab) {
    throw std::invalid_argument("aligned pair requires identical vocabularies in identical order");
  }
  return AlignedPair{std::move(left), std::move(right)};
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
  if (format == EmbeddingFormat::autodetect) format = detect_format(path);
  EmbeddingMatrix e = format == EmbeddingFormat::word2vec_text ? load_word2vec_text(path)
                                                               : load_tsv(path);
  validate_embedding(e);
  return e;
}

void save_embeddings(const EmbeddingMatrix& e, const std::filesystem::path& path,
                     EmbeddingFormat format) {
  if (format == EmbeddingFormat::autodetect) {
    format = path.extension() == ".tsv" ? EmbeddingFormat::tsv : EmbeddingFormat::word2vec_text;
  }
  std::ofstream out(path);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  const char sep = format == EmbeddingFormat::tsv ? '\t' : ' ';
  if (format == EmbeddingFormat::word2vec_text) {
    out << e.matrix.rows() << ' ' << e.matrix.cols() << '\n';
  }
  for (Index i = 0; i < e.matrix.rows(); ++i) {
    out << e.vocab[i];
    for (Index j = 0; j < e.matrix.cols(); ++j) out << sep << format_double(e.matrix(i, j));
    out << '\n';
  }
  if (!out) throw ParseError(path.string() + ": write failed");
}

AlignedPair intersect_vocab(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  validate_embedding(a);
  validate_embedding(b);

  std::unordered_map<std::string_view, Index> b_index;
  b_index.reserve(b.vocab.size());
  for (std::size_t i = 0; i < b.vocab.size(); ++i) b_index.emplace(b.vocab[i], static_cast<Index>(i));

  // shared words in canonical (lexicographic) order
  std::vector<std::pair<std::string_view, std::pair<Index, Index>>> shared;
  for (std::size_t i = 0; i < a.vocab.size(); ++i) {
    const auto it = b_index.find(a.vocab[i]);
    if (it != b_index.end()) {
      shared.push_back({a.vocab[i], {static_cast<Index>(i), it->second}});
    }
  }
  if (shared.empty()) {
    throw DegenerateDataError("empty vocabulary intersection between '" + a.label + "' and '" +
                              b.label + "'");
  }
  std::sort(shared.begin(), shared.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  const Index n = static_cast<Index>(shared.size());
  EmbeddingMatrix left{{}, RowMatrix(n, a.dim()), a.label};
  EmbeddingMatrix right{{}, RowMatrix(n, b.dim()), b.label};
  left.vocab.reserve(shared.size());
  right.vocab.reserve(shared.size());
  for (Index r = 0; r < n; ++r) {
    const auto& [word, rows] = shared[static_cast<std::size_t>(r)];
    left.vocab.emplace_back(word);
    right.vocab.emplace_back(word);
    left.matrix.row(r) = a.matrix.row(rows.first);
    right.matrix.row(r) = b.matrix.row(rows.second);
  }
  return AlignedPair{std::move(left), std::move(right)};
}

double avg_column_norm(const RowMatrix& m) {
  double sum = 0.0;
  for (Index k = 0; k < m.cols(); ++k) sum += m.col(k).norm();
  return sum / static_cast<double>(m.cols());
}

EmbeddingMatrix normalize_avg_column_norm(const EmbeddingMatrix& e) {
  validate_embedding(e);
  const double scale = avg_column_norm(e.matrix);
  if (scale == 0.0) {
    throw DegenerateDataError("embedding '" + e.label + "' is all zeros; average column norm is 0");
  }
  return EmbeddingMatrix{e.vocab, e.matrix / scale, e.label};
}

}  // namespace anchor

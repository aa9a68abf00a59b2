//
// anchor — corpus shift analysis over word-embedding matrices.
//
// Subcommands:
//   compare     two embeddings -> anchor/alignment distances (JSON)
//   matrix      manifest of embeddings -> pairwise distance matrix (CSV/JSON)
//   trajectory  manifest or distance CSV -> Laplacian embedding (CSV/JSON)
//   drift       two embeddings -> per-word drift ranking (TSV)
//   validate    seeded certification of the metric identities (JSON)
//   isotropy    singular-value spectrum vs the random-matrix edges (JSON)
//   sweep       ratio concentration across dimensionalities (CSV/JSON)
//
// Exit codes: 0 success, 2 input error, 3 degenerate data, 4 numerical
// failure. Artifacts are byte-identical for a fixed seed regardless of
// --threads.
//

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "anchor/embedding.hpp"
#include "anchor/kernels.hpp"
#include "anchor/metrics.hpp"
#include "anchor/parallel.hpp"
#include "anchor/random.hpp"
#include "anchor/serialize.hpp"
#include "anchor/spectral.hpp"
#include "anchor/subspace.hpp"
#include "anchor/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::string output;  // empty = stdout
  std::string format;  // resolved per command
  std::string input_format = "auto";
  unsigned threads = 0;
};

anchor::EmbeddingFormat parse_input_format(const std::string& name) {
  if (name == "auto") return anchor::EmbeddingFormat::autodetect;
  if (name == "word2vec") return anchor::EmbeddingFormat::word2vec_text;
  if (name == "tsv") return anchor::EmbeddingFormat::tsv;
  throw anchor::ParseError("unknown input format: '" + name + "'");
}

void write_artifact(const std::string& content, const std::string& output) {
  if (output.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw anchor::ParseError(output + ": cannot open for writing");
  out << content;
  if (!out) throw anchor::ParseError(output + ": write failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// manifest: one "label<TAB>path" per line; paths are resolved relative to
// the manifest's directory
std::vector<anchor::EmbeddingMatrix> load_manifest(const std::string& manifest_path,
                                                   anchor::EmbeddingFormat format) {
  std::ifstream in(manifest_path);
  if (!in) throw anchor::ParseError(manifest_path + ": cannot open file");
  const fs::path base = fs::path(manifest_path).parent_path();

  std::vector<anchor::EmbeddingMatrix> collection;
  std::unordered_set<std::string> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw anchor::ParseError(manifest_path + ":" + std::to_string(lineno) +
                               ": expected 'label<TAB>path'");
    }
    const std::string label = line.substr(0, tab);
    if (!labels.insert(label).second) {
      throw anchor::ParseError(manifest_path + ":" + std::to_string(lineno) +
                               ": duplicate label '" + label + "'");
    }
    fs::path path = line.substr(tab + 1);
    if (path.is_relative()) path = base / path;
    anchor::EmbeddingMatrix e = anchor::load_embeddings(path, format);
    e.label = label;
    collection.push_back(std::move(e));
  }
  if (collection.empty()) throw anchor::ParseError(manifest_path + ": empty manifest");
  return collection;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::unordered_set<std::string> words;
  if (path.empty()) return words;
  std::ifstream in(path);
  if (!in) throw anchor::ParseError(path + ": cannot open stopword file");
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return words;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  std::string list;
  for (const char* a : allowed) {
    if (!list.empty()) list += ", ";
    list += a;
  }
  throw anchor::ParseError("unsupported --format '" + format + "' (expected one of: " + list + ")");
}

// ---------------------------------------------------------------------------

int cmd_compare(const std::vector<std::string>& files, const std::string& metric, bool normalize,
                bool dense, anchor::Index dense_cap, const CommonOptions& common) {
  require_format(common.format, {"json"});
  const auto format = parse_input_format(common.input_format);
  const auto a = anchor::load_embeddings(files[0], format);
  const auto b = anchor::load_embeddings(files[1], format);
  auto pair = anchor::intersect_vocab(a, b);
  if (normalize) {
    pair.left = anchor::normalize_avg_column_norm(pair.left);
    pair.right = anchor::normalize_avg_column_norm(pair.right);
  }

  json report{{"left", pair.left.label},
              {"right", pair.right.label},
              {"shared_vocab_size", pair.left.size()},
              {"normalize", normalize}};

  std::optional<double> anchor_value;
  std::optional<double> alignment_value;
  if (metric == "anchor" || metric == "both") {
    anchor_value = dense ? anchor::anchor_distance_dense(pair, dense_cap)
                         : anchor::anchor_distance(pair);
    report["anchor"] = *anchor_value;
  }
  if (metric == "alignment" || metric == "both") {
    if (pair.left.dim() == pair.right.dim()) {
      alignment_value = anchor::alignment_distance(pair);
      report["alignment"] = *alignment_value;
    } else if (metric == "both") {
      // anchor still applies; alignment reports its applicability limit
      report["alignment"] = json{{"error", "dimension-mismatch"},
                                 {"left_dim", pair.left.dim()},
                                 {"right_dim", pair.right.dim()}};
    } else {
      throw anchor::DimensionMismatchError(pair.left.dim(), pair.right.dim());
    }
  }
  if (anchor_value && alignment_value) {
    if (*anchor_value == 0.0) {
      report["ratio"] = nullptr;  // identical embeddings: ratio undefined
    } else {
      report["ratio"] = *alignment_value / *anchor_value;
    }
  }
  write_artifact(dump(report), common.output);
  return 0;
}

int cmd_matrix(const std::string& manifest, const std::string& metric, bool normalize,
               bool per_pair_vocab, const CommonOptions& common) {
  require_format(common.format, {"csv", "json"});
  const auto collection = load_manifest(manifest, parse_input_format(common.input_format));
  if (collection.size() < 2) {
    throw anchor::ParseError(manifest + ": need at least 2 embeddings, got " +
                             std::to_string(collection.size()));
  }
  anchor::DistanceMatrixOptions options;
  options.metric = metric == "alignment" ? anchor::Metric::alignment : anchor::Metric::anchor;
  options.vocab = per_pair_vocab ? anchor::VocabPolicy::per_pair
                                 : anchor::VocabPolicy::global_intersection;
  options.normalize = normalize;
  options.threads = common.threads;
  const auto m = anchor::distance_matrix(collection, options);

  if (common.format == "json") {
    write_artifact(dump(anchor::distance_to_json(m)), common.output);
  } else {
    std::ostringstream buf;
    anchor::write_distance_csv(m, buf);
    write_artifact(buf.str(), common.output);
  }
  return 0;
}

int cmd_trajectory(const std::string& manifest, const std::string& distances,
                   const std::string& metric, bool normalize, anchor::Index k, double sigma,
                   bool skip_trivial, const CommonOptions& common) {
  require_format(common.format, {"csv", "json"});
  anchor::DistanceMatrix m;
  if (!distances.empty()) {
    std::ifstream in(distances);
    if (!in) throw anchor::ParseError(distances + ": cannot open file");
    m = anchor::read_distance_csv(in, distances);
  } else {
    const auto collection = load_manifest(manifest, parse_input_format(common.input_format));
    if (collection.size() < 2) {
      throw anchor::ParseError(manifest + ": need at least 2 embeddings, got " +
                               std::to_string(collection.size()));
    }
    anchor::DistanceMatrixOptions options;
    options.metric = metric == "alignment" ? anchor::Metric::alignment : anchor::Metric::anchor;
    options.normalize = normalize;
    options.threads = common.threads;
    m = anchor::distance_matrix(collection, options);
  }

  const std::optional<double> sigma_opt =
      sigma > 0.0 ? std::optional<double>(sigma) : std::nullopt;
  const auto coords = anchor::laplacian_embedding(m, k, sigma_opt, skip_trivial);

  if (common.format == "json") {
    json j = anchor::coordinates_to_json(coords);
    j["skip_trivial"] = skip_trivial;
    write_artifact(dump(j), common.output);
  } else {
    std::ostringstream buf;
    anchor::write_coordinates_csv(coords, buf);
    write_artifact(buf.str(), common.output);
  }
  return 0;
}

int cmd_drift(const std::vector<std::string>& files, bool normalize,
              const std::string& stopword_file, const CommonOptions& common) {
  require_format(common.format, {"tsv"});
  const auto format = parse_input_format(common.input_format);
  const auto a = anchor::load_embeddings(files[0], format);
  const auto b = anchor::load_embeddings(files[1], format);
  auto pair = anchor::intersect_vocab(a, b);
  if (normalize) {
    pair.left = anchor::normalize_avg_column_norm(pair.left);
    pair.right = anchor::normalize_avg_column_norm(pair.right);
  }
  const auto ranking = anchor::aggregate_word_drift({pair}, load_stopwords(stopword_file));
  std::ostringstream buf;
  anchor::write_drift_tsv(ranking, buf);
  write_artifact(buf.str(), common.output);
  return 0;
}

int cmd_validate(anchor::Index rows, anchor::Index dim, int trials, std::uint64_t seed,
                 double tol, const CommonOptions& common) {
  require_format(common.format, {"json"});
  if (rows < dim) throw anchor::ParseError("validate: need --rows >= --dim");
  if (trials < 1) throw anchor::ParseError("validate: need --trials >= 1");

  // Per-trial identity checks on seeded Gaussian pairs. Each trial draws
  // from its own (seed, trial) stream, so results are independent of
  // scheduling and thread count.
  std::vector<anchor::IdentityCheck> checks(static_cast<std::size_t>(trials));
  anchor::parallel_for(static_cast<std::size_t>(trials), common.threads, [&](std::size_t t) {
    auto rng = anchor::trial_rng(seed, t);
    const auto e = anchor::gaussian_matrix(rows, dim, rng);
    const auto f = anchor::gaussian_matrix(rows, dim, rng);
    checks[t] = anchor::check_metric_identities(e, f, tol);
  });

  double max_alignment_dev = 0.0;
  double max_anchor_dev = 0.0;
  bool identities_pass = true;
  std::vector<double> ratios;
  json violations = json::array();
  const double lower = std::numbers::sqrt2 / 2.0;
  for (std::size_t t = 0; t < checks.size(); ++t) {
    const auto& c = checks[t];
    max_alignment_dev = std::max(max_alignment_dev, c.alignment_deviation);
    max_anchor_dev = std::max(max_anchor_dev, c.anchor_deviation);
    identities_pass = identities_pass && c.pass;
    if (c.anchor_metric > 0.0) {
      const double ratio = c.alignment_metric / c.anchor_metric;
      ratios.push_back(ratio);
      if (ratio < lower - 1e-9 || ratio > 1.0 + 1e-9) {
        violations.push_back({{"trial", t}, {"ratio", ratio}});
      }
    }
  }

  // Exact edge case: fully orthogonal subspaces tie the two metrics, and
  // the sandwich coefficient anchor/(sqrt(2)*alignment) sits at 1/sqrt(2).
  const anchor::Index edge_dim = std::min<anchor::Index>(dim, rows / 2);
  anchor::RowMatrix e_edge = anchor::RowMatrix::Zero(rows, edge_dim);
  anchor::RowMatrix f_edge = anchor::RowMatrix::Zero(rows, edge_dim);
  for (anchor::Index i = 0; i < edge_dim; ++i) {
    e_edge(i, i) = 1.0;
    f_edge(edge_dim + i, i) = 1.0;
  }
  const double edge_alignment = anchor::alignment_distance(e_edge, f_edge);
  const double edge_anchor = anchor::anchor_distance(e_edge, f_edge);
  const double edge_ratio = edge_alignment / edge_anchor;
  const double edge_coefficient = edge_anchor / (std::numbers::sqrt2 * edge_alignment);

  const auto ratio_summary = anchor::summarize(ratios);
  json report{
      {"config",
       {{"rows", rows}, {"dim", dim}, {"trials", trials}, {"seed", seed}, {"tolerance", tol}}},
      {"identities",
       {{"max_alignment_deviation", max_alignment_dev},
        {"max_anchor_deviation", max_anchor_dev},
        {"pass", identities_pass}}},
      {"bound",
       {{"lower", lower},
        {"upper", 1.0},
        {"ratios", anchor::summary_to_json(ratio_summary)},
        {"violations", violations},
        {"pass", violations.empty()}}},
      {"edge_construction",
       {{"dim", edge_dim},
        {"alignment", edge_alignment},
        {"anchor", edge_anchor},
        {"ratio", edge_ratio},
        {"bound_coefficient", edge_coefficient},
        {"pass", std::abs(edge_ratio - 1.0) <= 1e-9 &&
                     std::abs(edge_coefficient - lower) <= 1e-9}}}};
  report["pass"] = report["identities"]["pass"].get<bool>() &&
                   report["bound"]["pass"].get<bool>() &&
                   report["edge_construction"]["pass"].get<bool>();
  write_artifact(dump(report), common.output);
  return report["pass"].get<bool>() ? 0 : 4;
}

int cmd_isotropy(const std::string& file, double slack, const CommonOptions& common) {
  require_format(common.format, {"json"});
  const auto e = anchor::load_embeddings(file, parse_input_format(common.input_format));
  const auto report = anchor::isotropy_spectrum(e, slack);
  json j = anchor::isotropy_to_json(report);
  j["label"] = e.label;
  j["rows"] = e.size();
  j["dim"] = e.dim();
  write_artifact(dump(j), common.output);
  return 0;
}

int cmd_sweep(anchor::Index rows, const std::vector<anchor::Index>& dims, int trials,
              std::uint64_t seed, bool no_normalize, const CommonOptions& common) {
  require_format(common.format, {"csv", "json"});
  anchor::SweepConfig config;
  config.rows = rows;
  config.dims = dims;
  config.trials = trials;
  config.seed = seed;
  config.normalize = !no_normalize;
  config.threads = common.threads;
  const auto table = anchor::dimensionality_sweep(config);

  if (common.format == "json") {
    write_artifact(dump(anchor::sweep_to_json(table)), common.output);
  } else {
    std::ostringstream buf;
    anchor::write_sweep_csv(table, buf);
    write_artifact(buf.str(), common.output);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpus-level and word-level shift metrics for word embeddings"};
  app.require_subcommand(1);

  // compare ------------------------------------------------------------
  auto* compare = app.add_subcommand("compare", "distances between two embeddings");
  std::vector<std::string> compare_files;
  std::string compare_metric = "both";
  bool compare_normalize = false;
  bool compare_dense = false;
  anchor::Index dense_cap = 20000;
  CommonOptions compare_common;
  compare_common.format = "json";
  compare->add_option("files", compare_files, "two embedding files")->expected(2)->required();
  compare->add_option("--metric", compare_metric, "anchor | alignment | both")
      ->check(CLI::IsMember({"anchor", "alignment", "both"}));
  compare->add_flag("--normalize", compare_normalize, "divide by average column norm first");
  compare->add_flag("--dense", compare_dense, "use the dense reference path for the anchor distance");
  compare->add_option("--dense-cap", dense_cap, "vocabulary cap for the dense path");
  compare->add_option("--output", compare_common.output, "output file (default stdout)");
  compare->add_option("--format", compare_common.format, "json");
  compare->add_option("--input-format", compare_common.input_format, "auto | word2vec | tsv");

  // matrix ---------------------------------------------------------------
  auto* matrix = app.add_subcommand("matrix", "pairwise distance matrix over a manifest");
  std::string matrix_manifest;
  std::string matrix_metric = "anchor";
  bool matrix_normalize = false;
  bool matrix_per_pair = false;
  CommonOptions matrix_common;
  matrix_common.format = "csv";
  matrix->add_option("manifest", matrix_manifest, "manifest of 'label<TAB>path' lines")->required();
  matrix->add_option("--metric", matrix_metric, "anchor | alignment")
      ->check(CLI::IsMember({"anchor", "alignment"}));
  matrix->add_flag("--normalize", matrix_normalize, "divide by average column norm first");
  matrix->add_flag("--per-pair-vocab", matrix_per_pair,
                   "intersect vocabularies per pair instead of globally (entries are then "
                   "not mutually comparable)");
  matrix->add_option("--threads", matrix_common.threads, "worker threads (0 = hardware)");
  matrix->add_option("--output", matrix_common.output, "output file (default stdout)");
  matrix->add_option("--format", matrix_common.format, "csv | json");
  matrix->add_option("--input-format", matrix_common.input_format, "auto | word2vec | tsv");

  // trajectory -------------------------------------------------------------
  auto* trajectory = app.add_subcommand("trajectory", "Laplacian embedding of a distance matrix");
  std::string trajectory_manifest;
  std::string trajectory_distances;
  std::string trajectory_metric = "anchor";
  bool trajectory_normalize = false;
  anchor::Index trajectory_k = 2;
  double trajectory_sigma = 0.0;
  bool trajectory_skip = false;
  CommonOptions trajectory_common;
  trajectory_common.format = "csv";
  trajectory->add_option("manifest", trajectory_manifest, "manifest of 'label<TAB>path' lines");
  trajectory->add_option("--distances", trajectory_distances,
                         "precomputed distance matrix CSV (skips the matrix step)");
  trajectory->add_option("--metric", trajectory_metric, "anchor | alignment")
      ->check(CLI::IsMember({"anchor", "alignment"}));
  trajectory->add_flag("--normalize", trajectory_normalize, "divide by average column norm first");
  trajectory->add_option("--k", trajectory_k, "embedding dimension");
  trajectory->add_option("--sigma", trajectory_sigma,
                         "similarity kernel width (omit for the median heuristic)")
      ->check(CLI::PositiveNumber);
  trajectory->add_flag("--skip-trivial", trajectory_skip, "drop the zero-eigenvalue direction");
  trajectory->add_option("--threads", trajectory_common.threads, "worker threads (0 = hardware)");
  trajectory->add_option("--output", trajectory_common.output, "output file (default stdout)");
  trajectory->add_option("--format", trajectory_common.format, "csv | json");
  trajectory->add_option("--input-format", trajectory_common.input_format, "auto | word2vec | tsv");

  // drift -------------------------------------------------------------------
  auto* drift = app.add_subcommand("drift", "per-word drift ranking for two embeddings");
  std::vector<std::string> drift_files;
  bool drift_normalize = false;
  std::string drift_stopwords;
  CommonOptions drift_common;
  drift_common.format = "tsv";
  drift->add_option("files", drift_files, "two embedding files")->expected(2)->required();
  drift->add_flag("--normalize", drift_normalize, "divide by average column norm first");
  drift->add_option("--stopwords", drift_stopwords, "file of words to exclude, one per line");
  drift->add_option("--output", drift_common.output, "output file (default stdout)");
  drift->add_option("--format", drift_common.format, "tsv");
  drift->add_option("--input-format", drift_common.input_format, "auto | word2vec | tsv");

  // validate ------------------------------------------------------------------
  auto* validate = app.add_subcommand("validate", "certify the metric identities numerically");
  anchor::Index validate_rows = 200;
  anchor::Index validate_dim = 20;
  int validate_trials = 100;
  std::uint64_t validate_seed = 0;
  double validate_tol = 1e-8;
  CommonOptions validate_common;
  validate_common.format = "json";
  validate->add_option("--rows", validate_rows, "rows of each synthetic matrix");
  validate->add_option("--dim", validate_dim, "columns of each synthetic matrix");
  validate->add_option("--trials", validate_trials, "number of seeded random pairs");
  validate->add_option("--seed", validate_seed, "base RNG seed");
  validate->add_option("--tol", validate_tol, "identity tolerance");
  validate->add_option("--threads", validate_common.threads, "worker threads (0 = hardware)");
  validate->add_option("--output", validate_common.output, "output file (default stdout)");
  validate->add_option("--format", validate_common.format, "json");

  // isotropy ---------------------------------------------------------------
  auto* isotropy = app.add_subcommand("isotropy", "singular-value spectrum diagnostics");
  std::string isotropy_file;
  double isotropy_slack = 0.05;
  CommonOptions isotropy_common;
  isotropy_common.format = "json";
  isotropy->add_option("file", isotropy_file, "embedding file")->required();
  isotropy->add_option("--slack", isotropy_slack, "relative slack against the theory edges");
  isotropy->add_option("--output", isotropy_common.output, "output file (default stdout)");
  isotropy->add_option("--format", isotropy_common.format, "json");
  isotropy->add_option("--input-format", isotropy_common.input_format, "auto | word2vec | tsv");

  // sweep -----------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "ratio concentration across dimensionalities");
  anchor::Index sweep_rows = 1000;
  std::vector<anchor::Index> sweep_dims = {100, 200, 400, 500};
  int sweep_trials = 10;
  std::uint64_t sweep_seed = 0;
  bool sweep_no_normalize = false;
  CommonOptions sweep_common;
  sweep_common.format = "csv";
  sweep->add_option("--rows", sweep_rows, "rows of each synthetic matrix");
  sweep->add_option("--dims", sweep_dims, "dimensions to sweep")->delimiter(',');
  sweep->add_option("--trials", sweep_trials, "pairs per dimension");
  sweep->add_option("--seed", sweep_seed, "base RNG seed");
  sweep->add_flag("--no-normalize", sweep_no_normalize, "skip average-column-norm normalization");
  sweep->add_option("--threads", sweep_common.threads, "worker threads (0 = hardware)");
  sweep->add_option("--output", sweep_common.output, "output file (default stdout)");
  sweep->add_option("--format", sweep_common.format, "csv | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*compare) {
      return cmd_compare(compare_files, compare_metric, compare_normalize, compare_dense,
                         dense_cap, compare_common);
    }
    if (*matrix) {
      return cmd_matrix(matrix_manifest, matrix_metric, matrix_normalize, matrix_per_pair,
                        matrix_common);
    }
    if (*trajectory) {
      if (trajectory_manifest.empty() == trajectory_distances.empty()) {
        throw anchor::ParseError("trajectory: pass either a manifest or --distances, not both");
      }
      return cmd_trajectory(trajectory_manifest, trajectory_distances, trajectory_metric,
                            trajectory_normalize, trajectory_k, trajectory_sigma, trajectory_skip,
                            trajectory_common);
    }
    if (*drift) return cmd_drift(drift_files, drift_normalize, drift_stopwords, drift_common);
    if (*validate) {
      return cmd_validate(validate_rows, validate_dim, validate_trials, validate_seed,
                          validate_tol, validate_common);
    }
    if (*isotropy) return cmd_isotropy(isotropy_file, isotropy_slack, isotropy_common);
    if (*sweep) {
      return cmd_sweep(sweep_rows, sweep_dims, sweep_trials, sweep_seed, sweep_no_normalize,
                       sweep_common);
    }
    return 2;
  } catch (const anchor::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const anchor::DegenerateDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const anchor::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}

#include "anchor/validation.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "anchor/parallel.hpp"
#include "anchor/random.hpp"
#include "anchor/subspace.hpp"

namespace anchor {

namespace {

constexpr double kBoundEps = 1e-9;

const double kLowerBound = std::numbers::sqrt2 / 2.0;

}  // namespace

IdentityCheck check_metric_identities(const RowMatrix& e, const RowMatrix& f, double tol) {
  if (e.rows() < e.cols() || f.rows() < f.cols()) {
    throw std::invalid_argument("check_metric_identities: need n >= d");
  }
  if (e.rows() != f.rows()) {
    throw std::invalid_argument("check_metric_identities: row counts differ");
  }
  const RowMatrix eo = orthonormalize(e);
  const RowMatrix fo = orthonormalize(f);
  const PrincipalAngleSpectrum spectrum = principal_angles(eo, fo);

  IdentityCheck check;
  check.alignment_metric = alignment_distance(eo, fo);
  check.alignment_identity = 2.0 * spectrum.half_sine_norm();
  check.anchor_metric = anchor_distance(eo, fo);
  check.anchor_identity = std::numbers::sqrt2 * spectrum.sine_norm();
  check.alignment_deviation = std::abs(check.alignment_metric - check.alignment_identity);
  check.anchor_deviation = std::abs(check.anchor_metric - check.anchor_identity);
  check.tolerance = tol;
  check.pass = check.alignment_deviation <= tol && check.anchor_deviation <= tol;
  return check;
}

EquivalenceReport check_equivalence_bound(const std::vector<AlignedPair>& pairs, BoundMode mode) {
  EquivalenceReport report;
  report.mode = mode;
  report.lower_bound = kLowerBound;
  report.upper_bound = 1.0;

  std::vector<double> ratios;
  for (const auto& pair : pairs) {
    if (pair.left.dim() != pair.right.dim()) {
      throw DimensionMismatchError(pair.left.dim(), pair.right.dim());
    }
    RowMatrix e = pair.left.matrix;
    RowMatrix f = pair.right.matrix;
    if (mode == BoundMode::orthonormalized) {
      e = orthonormalize(e);
      f = orthonormalize(f);
    }
    const double alignment = alignment_distance(e, f);
    const double anchor = anchor_distance(e, f);
    if (anchor == 0.0) {
      report.degenerate_pairs.push_back({pair.left.label, pair.right.label});
      continue;
    }
    const EquivalenceRecord record{pair.left.label, pair.right.label, alignment, anchor,
                                   alignment / anchor};
    report.pairs.push_back(record);
    ratios.push_back(record.ratio);
    if (mode == BoundMode::orthonormalized &&
        (record.ratio < kLowerBound - kBoundEps || record.ratio > 1.0 + kBoundEps)) {
      report.bound_violations.push_back(record);
    }
  }
  report.summary = summarize(ratios);
  return report;
}

std::vector<SweepRow> dimensionality_sweep(const SweepConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (config.dims.empty()) throw std::invalid_argument("sweep: no dimensions given");
  for (const Index d : config.dims) {
    if (d < 1 || d >= config.rows) {
      throw std::invalid_argument("sweep: need 1 <= d < n, got d = " + std::to_string(d) +
                                  ", n = " + std::to_string(config.rows));
    }
  }

  std::vector<SweepRow> rows;
  for (std::size_t di = 0; di < config.dims.size(); ++di) {
    const Index d = config.dims[di];
    const std::size_t trials = static_cast<std::size_t>(config.trials);
    std::vector<RatioStatistics> per_trial(trials);
    parallel_for(trials, config.threads, [&](std::size_t t) {
      // One stream per (dimension, trial): reproducible and order-free.
      auto rng = trial_rng(config.seed, (static_cast<std::uint64_t>(di) << 32) | t);
      const auto left = synthetic_embedding(config.rows, d, "trial" + std::to_string(t) + "a", rng);
      const auto right = synthetic_embedding(config.rows, d, "trial" + std::to_string(t) + "b", rng);
      per_trial[t] = ratio_statistics({left, right}, config.normalize, 1);
    });

    SweepRow row{d, {}, 0};
    std::vector<double> ratios;
    for (const auto& stats : per_trial) {
      // A 2-element collection yields the (i,j) and (j,i) ratios of one
      // pair; keep the unique value per trial.
      if (!stats.ratios.empty()) ratios.push_back(stats.ratios.front().ratio);
      row.degenerate_pairs += stats.degenerate_pairs.size() / 2;
    }
    row.summary = summarize(ratios);
    rows.push_back(std::move(row));
  }
  return rows;
}

IsotropyReport isotropy_spectrum(const EmbeddingMatrix& e, double slack) {
  validate_embedding(e);
  const Index n = e.size();
  const Index d = e.dim();
  if (n <= d) throw std::invalid_argument("isotropy_spectrum: need n > d");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(e.matrix);
  if (svd.info() != Eigen::Success) throw NumericError("SVD did not converge");
  const auto& sigma = svd.singularValues();

  IsotropyReport report;
  report.singular_values.assign(sigma.data(), sigma.data() + sigma.size());
  report.ratio_p = static_cast<double>(d) / static_cast<double>(n);
  report.variance = e.matrix.array().square().mean();
  if (report.variance == 0.0) {
    throw DegenerateDataError("isotropy_spectrum: all-zero matrix");
  }

  const double scale = static_cast<double>(n) * report.variance;
  report.empirical_max = sigma(0) * sigma(0) / scale;
  report.empirical_min = sigma(sigma.size() - 1) * sigma(sigma.size() - 1) / scale;
  const double sqrt_p = std::sqrt(report.ratio_p);
  report.theory_min = (1.0 - sqrt_p) * (1.0 - sqrt_p);
  report.theory_max = (1.0 + sqrt_p) * (1.0 + sqrt_p);
  report.slack = slack;
  report.within_slack =
      std::abs(report.empirical_min - report.theory_min) <= slack * report.theory_min &&
      std::abs(report.empirical_max - report.theory_max) <= slack * report.theory_max;
  return report;
}

}  // namespace anchor

#pragma once

//
// Numerical certification of the identities tying the two metrics together,
// the equivalence bound between them, synthetic ratio experiments, and the
// random-matrix isotropy diagnostic.
//
// For column-orthonormal E, F with principal angles Theta:
//   alignment distance  ||E - F Q*||_F      = 2 ||sin(Theta/2)||
//   anchor distance     ||E E^T - F F^T||_F = sqrt(2) ||sin Theta||
// and therefore alignment <= anchor <= sqrt(2) * alignment, i.e. the
// alignment/anchor ratio lies in [1/sqrt(2), 1].
//

#include <cstdint>
#include <string>
#include <vector>

#include "anchor/embedding.hpp"
#include "anchor/metrics.hpp"
#include "anchor/types.hpp"

namespace anchor {

struct IdentityCheck {
  double alignment_metric;    // ||E - F Q*||
  double alignment_identity;  // 2 ||sin(Theta/2)||
  double anchor_metric;       // ||E E^T - F F^T||
  double anchor_identity;     // sqrt(2) ||sin Theta||
  double alignment_deviation;
  double anchor_deviation;
  double tolerance;
  bool pass;
};

// Orthonormalizes both inputs (n >= d required; rank deficiency throws),
// then checks both identities against `tol`.
IdentityCheck check_metric_identities(const RowMatrix& e, const RowMatrix& f, double tol);

enum class BoundMode {
  orthonormalized,  // orthonormalize inputs; the bound is asserted
  raw,              // report ratios descriptively; no bound assertion
};

struct EquivalenceRecord {
  std::string left;
  std::string right;
  double alignment;
  double anchor;
  double ratio;
};

struct EquivalenceReport {
  BoundMode mode;
  double lower_bound;  // 1/sqrt(2)
  double upper_bound;  // 1
  std::vector<EquivalenceRecord> pairs;
  std::vector<std::pair<std::string, std::string>> degenerate_pairs;  // anchor == 0
  std::vector<EquivalenceRecord> bound_violations;  // empty unless mode == raw surprises
  RatioSummary summary;
};

// Ratio of the two metrics for every pair; in orthonormalized mode any
// ratio outside [1/sqrt(2) - 1e-9, 1 + 1e-9] is flagged.
EquivalenceReport check_equivalence_bound(const std::vector<AlignedPair>& pairs, BoundMode mode);

struct SweepConfig {
  Index rows = 1000;
  std::vector<Index> dims = {100, 200, 400, 500};
  int trials = 10;
  std::uint64_t seed = 0;
  bool normalize = true;
  unsigned threads = 1;
};

struct SweepRow {
  Index dim;
  RatioSummary summary;
  std::size_t degenerate_pairs;
};

// For each dimension, draws `trials` pairs of synthetic isotropic
// embeddings (i.i.d. standard normal entries, stream = (dim, trial)) and
// summarizes their alignment/anchor ratios.
std::vector<SweepRow> dimensionality_sweep(const SweepConfig& config);

struct IsotropyReport {
  std::vector<double> singular_values;  // of the raw matrix, descending
  double ratio_p;                       // d / n
  double variance;                      // empirical mean squared entry
  double empirical_min;                 // smallest eigenvalue of E^T E / (n * variance)
  double empirical_max;
  double theory_min;  // (1 - sqrt(p))^2
  double theory_max;  // (1 + sqrt(p))^2
  double slack;       // caller-set relative slack
  bool within_slack;  // advisory isotropy verdict
};

// Compares the spectrum of the variance-normalized Gram against the
// Marchenko-Pastur edges. Requires n > d.
IsotropyReport isotropy_spectrum(const EmbeddingMatrix& e, double slack = 0.05);

}  // namespace anchor

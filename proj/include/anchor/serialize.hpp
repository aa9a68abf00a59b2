#pragma once

//
// File formats. All floating-point text uses shortest round-trip
// formatting so artifacts are byte-stable across runs.
//
//   DistanceMatrix      CSV (label header row/column), JSON {labels, values}
//   SpectralCoordinates CSV "label,x1,...,xk", JSON
//   drift rankings      TSV "word\tdrift"
//   reports             JSON
//   dimension sweep     CSV "dimension,mean,std,min,max"
//

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "anchor/metrics.hpp"
#include "anchor/spectral.hpp"
#include "anchor/validation.hpp"

namespace anchor {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

void write_distance_csv(const DistanceMatrix& m, std::ostream& out);
DistanceMatrix read_distance_csv(std::istream& in, const std::string& context = "<stream>");
nlohmann::json distance_to_json(const DistanceMatrix& m);

void write_coordinates_csv(const SpectralCoordinates& c, std::ostream& out);
nlohmann::json coordinates_to_json(const SpectralCoordinates& c);

void write_drift_tsv(const std::vector<RankedWord>& ranking, std::ostream& out);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows);

nlohmann::json summary_to_json(const RatioSummary& s);
nlohmann::json ratio_statistics_to_json(const RatioStatistics& s);
nlohmann::json identity_check_to_json(const IdentityCheck& c);
nlohmann::json equivalence_report_to_json(const EquivalenceReport& r);
nlohmann::json isotropy_to_json(const IsotropyReport& r);

}  // namespace anchor

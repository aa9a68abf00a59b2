#include "anchor/serialize.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace anchor {

namespace {

void check_label(const std::string& label, const char* format) {
  if (label.empty() || label.find_first_of(",\t\r\n\"") != std::string::npos) {
    throw std::invalid_argument(std::string("label not representable in ") + format + ": '" +
                                label + "'");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& token, const std::string& context, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(context + ":" + std::to_string(line) + ": not a number: '" + token + "'");
  }
  return v;
}

nlohmann::json matrix_to_json(const RowMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_distance_csv(const DistanceMatrix& m, std::ostream& out) {
  for (const auto& label : m.labels) check_label(label, "csv");
  for (const auto& label : m.labels) out << ',' << label;
  out << '\n';
  for (Index i = 0; i < m.values.rows(); ++i) {
    out << m.labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < m.values.cols(); ++j) out << ',' << format_double(m.values(i, j));
    out << '\n';
  }
}

DistanceMatrix read_distance_csv(std::istream& in, const std::string& context) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(context + ":1: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  if (header.size() < 3 || !header.front().empty()) {
    throw ParseError(context + ":1: expected a header of the form ',label1,label2,...'");
  }
  DistanceMatrix m;
  m.labels.assign(header.begin() + 1, header.end());
  const Index n = static_cast<Index>(m.labels.size());
  m.values = RowMatrix(n, n);

  std::size_t lineno = 1;
  for (Index i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError(context + ": expected " + std::to_string(n) + " data rows, got " +
                       std::to_string(i));
    }
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto cells = split_csv_line(line);
    if (cells.size() != static_cast<std::size_t>(n) + 1) {
      throw ParseError(context + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(n + 1) + " cells, got " + std::to_string(cells.size()));
    }
    if (cells.front() != m.labels[static_cast<std::size_t>(i)]) {
      throw ParseError(context + ":" + std::to_string(lineno) + ": row label '" + cells.front() +
                       "' does not match column label '" + m.labels[static_cast<std::size_t>(i)] +
                       "'");
    }
    for (Index j = 0; j < n; ++j) {
      m.values(i, j) = parse_double(cells[static_cast<std::size_t>(j) + 1], context, lineno);
    }
  }
  try {
    validate_distance_matrix(m);
  } catch (const std::invalid_argument& e) {
    throw ParseError(context + ": " + e.what());
  }
  return m;
}

nlohmann::json distance_to_json(const DistanceMatrix& m) {
  return {{"labels", m.labels}, {"values", matrix_to_json(m.values)}};
}

void write_coordinates_csv(const SpectralCoordinates& c, std::ostream& out) {
  for (const auto& label : c.labels) check_label(label, "csv");
  out << "label";
  for (Index j = 0; j < c.coords.cols(); ++j) out << ",x" << (j + 1);
  out << '\n';
  for (Index i = 0; i < c.coords.rows(); ++i) {
    out << c.labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < c.coords.cols(); ++j) out << ',' << format_double(c.coords(i, j));
    out << '\n';
  }
}

nlohmann::json coordinates_to_json(const SpectralCoordinates& c) {
  return {{"labels", c.labels},
          {"sigma", c.sigma},
          {"k", c.k},
          {"coords", matrix_to_json(c.coords)}};
}

void write_drift_tsv(const std::vector<RankedWord>& ranking, std::ostream& out) {
  for (const auto& entry : ranking) {
    out << entry.word << '\t' << format_double(entry.drift) << '\n';
  }
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "dimension,mean,std,min,max\n";
  for (const auto& row : rows) {
    out << row.dim << ',' << format_double(row.summary.mean) << ','
        << format_double(row.summary.stddev) << ',' << format_double(row.summary.min) << ','
        << format_double(row.summary.max) << '\n';
  }
}

nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json j = summary_to_json(row.summary);
    j["dimension"] = row.dim;
    j["degenerate_pairs"] = row.degenerate_pairs;
    out.push_back(std::move(j));
  }
  return out;
}

nlohmann::json summary_to_json(const RatioSummary& s) {
  if (s.count == 0) {
    return {{"count", 0}, {"mean", nullptr}, {"std", nullptr}, {"min", nullptr}, {"max", nullptr}};
  }
  return {{"count", s.count}, {"mean", s.mean}, {"std", s.stddev}, {"min", s.min}, {"max", s.max}};
}

nlohmann::json ratio_statistics_to_json(const RatioStatistics& s) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& r : s.ratios) {
    pairs.push_back({{"left", r.left},
                     {"right", r.right},
                     {"alignment", r.alignment},
                     {"anchor", r.anchor},
                     {"ratio", r.ratio}});
  }
  nlohmann::json degenerate = nlohmann::json::array();
  for (const auto& [l, r] : s.degenerate_pairs) degenerate.push_back({{"left", l}, {"right", r}});
  return {{"pairs", pairs}, {"degenerate_pairs", degenerate}, {"summary", summary_to_json(s.summary)}};
}

nlohmann::json identity_check_to_json(const IdentityCheck& c) {
  return {{"alignment_metric", c.alignment_metric},
          {"alignment_identity", c.alignment_identity},
          {"anchor_metric", c.anchor_metric},
          {"anchor_identity", c.anchor_identity},
          {"alignment_deviation", c.alignment_deviation},
          {"anchor_deviation", c.anchor_deviation},
          {"tolerance", c.tolerance},
          {"pass", c.pass}};
}

nlohmann::json equivalence_report_to_json(const EquivalenceReport& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"left", p.left},
                     {"right", p.right},
                     {"alignment", p.alignment},
                     {"anchor", p.anchor},
                     {"ratio", p.ratio}});
  }
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& p : r.bound_violations) {
    violations.push_back({{"left", p.left}, {"right", p.right}, {"ratio", p.ratio}});
  }
  nlohmann::json degenerate = nlohmann::json::array();
  for (const auto& [l, rr] : r.degenerate_pairs) degenerate.push_back({{"left", l}, {"right", rr}});
  return {{"mode", r.mode == BoundMode::orthonormalized ? "orthonormalized" : "raw"},
          {"lower_bound", r.lower_bound},
          {"upper_bound", r.upper_bound},
          {"pairs", pairs},
          {"degenerate_pairs", degenerate},
          {"bound_violations", violations},
          {"summary", summary_to_json(r.summary)}};
}

nlohmann::json isotropy_to_json(const IsotropyReport& r) {
  return {{"singular_values", r.singular_values},
          {"p", r.ratio_p},
          {"variance", r.variance},
          {"empirical_min", r.empirical_min},
          {"empirical_max", r.empirical_max},
          {"theory_min", r.theory_min},
          {"theory_max", r.theory_max},
          {"slack", r.slack},
          {"within_slack", r.within_slack}};
}

}  // namespace anchor

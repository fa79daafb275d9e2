#ifndef FAIRTV_DATASET_HPP
#define FAIRTV_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fairtv/errors.hpp"
#include "fairtv/prob_core.hpp"
#include "fairtv/repair.hpp"
#include "fairtv/rng.hpp"

namespace fairtv {

// Column roles for a census-style CSV.
struct CsvSchema {
  std::string protected_column = "sex";
  std::string label_column = "income";
  std::vector<std::string> feature_columns = {"hours-per-week", "education-num"};
  // Value of the protected column mapped to s = 1 (the default group);
  // every other value maps to s = 0.
  std::string protected_one = "Male";
  // Value of the label column mapped to y = 1.
  std::string label_one = ">50K";
};

// Per-feature discretization: explicit half-open bin edges, or one bin per
// distinct observed value when edges are absent.
struct FeatureBinning {
  std::string feature;
  std::optional<std::vector<double>> edges;  // [e0,e1), [e1,e2), ...

  void validate() const {
    if (!edges) return;
    if (edges->size() < 2) throw InvalidParameter("FeatureBinning: need at least two edges");
    for (std::size_t i = 1; i < edges->size(); ++i) {
      if (!((*edges)[i] > (*edges)[i - 1])) {
        throw InvalidParameter("FeatureBinning: edges must be strictly increasing");
      }
    }
  }
};

struct BinningSpec {
  std::vector<FeatureBinning> features;

  const FeatureBinning* find(const std::string& name) const {
    for (const auto& f : features) {
      if (f.feature == name) return &f;
    }
    return nullptr;
  }
};

// The discretization used throughout when the schema does not override it:
// hours-per-week in 8 equal-width bins over [1, 99), education-num by value.
inline BinningSpec default_adult_binning() {
  std::vector<double> hours_edges;
  for (int k = 0; k <= 8; ++k) hours_edges.push_back(1.0 + 12.25 * k);
  BinningSpec spec;
  spec.features.push_back({"hours-per-week", hours_edges});
  spec.features.push_back({"education-num", std::nullopt});
  return spec;
}

struct RecordSet {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string source;
  std::size_t dropped_rows = 0;

  std::size_t column_index(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw SchemaError("RecordSet: no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
};

struct DiscreteEntry {
  std::size_t x;
  std::size_t y;
  int s;
};

// Discretized sample plus enough structure to recover per-feature marginals
// from the composite x index. Feature order matches the schema; the first
// feature varies slowest in the composite index.
struct DiscreteDataset {
  Alphabet x_alphabet;
  Alphabet y_alphabet;
  std::vector<std::string> feature_names;
  std::vector<std::vector<std::string>> feature_bin_labels;
  std::vector<DiscreteEntry> entries;

  std::size_t feature_index(const std::string& name) const {
    auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) throw SchemaError("DiscreteDataset: unknown feature '" + name + "'");
    return static_cast<std::size_t>(it - feature_names.begin());
  }

  // Bin of feature f inside composite index x.
  std::size_t feature_bin(std::size_t x, std::size_t f) const {
    std::size_t stride = 1;
    for (std::size_t g = f + 1; g < feature_bin_labels.size(); ++g) {
      stride *= feature_bin_labels[g].size();
    }
    return (x / stride) % feature_bin_labels[f].size();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

inline bool is_missing(const std::string& v) { return v.empty() || v == "?"; }

}  // namespace detail

// Reads a comma-separated census file. The first line is taken as a header
// if it names the schema's label column, otherwise the Adult column order
// is assumed. Rows missing a value in any used column are dropped and
// counted.
inline RecordSet load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("load_csv: cannot open '" + path + "'");

  static const std::vector<std::string> kAdultColumns = {
      "age",          "workclass",     "fnlwgt",         "education",
      "education-num", "marital-status", "occupation",     "relationship",
      "race",         "sex",           "capital-gain",   "capital-loss",
      "hours-per-week", "native-country", "income"};

  RecordSet records;
  records.source = path;

  std::string line;
  bool first = true;
  std::vector<std::size_t> used;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (first) {
      first = false;
      const bool has_header =
          std::find(fields.begin(), fields.end(), schema.label_column) != fields.end();
      records.columns = has_header ? fields : kAdultColumns;
      std::vector<std::string> required = schema.feature_columns;
      required.push_back(schema.protected_column);
      required.push_back(schema.label_column);
      for (const auto& name : required) used.push_back(records.column_index(name));
      if (has_header) continue;
    }
    if (fields.size() != records.columns.size()) {
      ++records.dropped_rows;
      continue;
    }
    bool missing = false;
    for (std::size_t c : used) {
      if (detail::is_missing(fields[c])) {
        missing = true;
        break;
      }
    }
    if (missing) {
      ++records.dropped_rows;
    } else {
      records.rows.push_back(std::move(fields));
    }
  }
  if (records.rows.empty()) throw IoError("load_csv: no usable rows in '" + path + "'");
  return records;
}

namespace detail {

inline double parse_number(const std::string& v, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw BinningError("discretize: non-numeric value '" + v + "' " + context);
  }
}

}  // namespace detail

inline DiscreteDataset discretize(const RecordSet& records, const BinningSpec& spec,
                                  const CsvSchema& schema) {
  DiscreteDataset out;
  out.feature_names = schema.feature_columns;

  std::vector<std::size_t> feature_cols;
  for (const auto& f : schema.feature_columns) feature_cols.push_back(records.column_index(f));
  const std::size_t protected_col = records.column_index(schema.protected_column);
  const std::size_t label_col = records.column_index(schema.label_column);

  // Per-feature bin labels; identity features enumerate observed values in
  // numeric order.
  for (std::size_t f = 0; f < schema.feature_columns.size(); ++f) {
    const FeatureBinning* binning = spec.find(schema.feature_columns[f]);
    std::vector<std::string> labels;
    if (binning != nullptr && binning->edges) {
      binning->validate();
      const auto& e = *binning->edges;
      for (std::size_t i = 0; i + 1 < e.size(); ++i) {
        std::ostringstream os;
        os << "[" << e[i] << "," << e[i + 1] << ")";
        labels.push_back(os.str());
      }
    } else {
      std::set<double> values;
      for (const auto& row : records.rows) {
        values.insert(detail::parse_number(row[feature_cols[f]],
                                           "in feature " + schema.feature_columns[f]));
      }
      for (double v : values) {
        std::ostringstream os;
        os << v;
        labels.push_back(os.str());
      }
    }
    out.feature_bin_labels.push_back(std::move(labels));
  }

  std::vector<std::string> x_labels;
  {
    std::vector<std::size_t> idx(out.feature_names.size(), 0);
    const std::size_t total = [&] {
      std::size_t t = 1;
      for (const auto& l : out.feature_bin_labels) t *= l.size();
      return t;
    }();
    for (std::size_t x = 0; x < total; ++x) {
      std::size_t rem = x;
      std::string label;
      for (std::size_t f = out.feature_names.size(); f-- > 0;) {
        idx[f] = rem % out.feature_bin_labels[f].size();
        rem /= out.feature_bin_labels[f].size();
      }
      for (std::size_t f = 0; f < out.feature_names.size(); ++f) {
        if (f > 0) label += "|";
        label += out.feature_names[f] + "=" + out.feature_bin_labels[f][idx[f]];
      }
      x_labels.push_back(label);
    }
  }
  out.x_alphabet = Alphabet(std::move(x_labels));
  out.y_alphabet = Alphabet({"rest", schema.label_one});

  auto bin_of = [&](std::size_t f, const std::string& raw, std::size_t row_no) -> std::size_t {
    const FeatureBinning* binning = spec.find(schema.feature_columns[f]);
    if (binning != nullptr && binning->edges) {
      const double v = detail::parse_number(raw, "in row " + std::to_string(row_no));
      const auto& e = *binning->edges;
      if (v < e.front() || v >= e.back()) {
        throw BinningError("discretize: value " + raw + " of " + schema.feature_columns[f] +
                           " in row " + std::to_string(row_no) + " outside all bins");
      }
      const auto it = std::upper_bound(e.begin(), e.end(), v);
      return static_cast<std::size_t>(it - e.begin()) - 1;
    }
    const double v = detail::parse_number(raw, "in row " + std::to_string(row_no));
    std::ostringstream os;
    os << v;
    const auto& labels = out.feature_bin_labels[f];
    const auto it = std::find(labels.begin(), labels.end(), os.str());
    if (it == labels.end()) {
      throw BinningError("discretize: unseen value " + raw + " in row " + std::to_string(row_no));
    }
    return static_cast<std::size_t>(it - labels.begin());
  };

  out.entries.reserve(records.rows.size());
  for (std::size_t r = 0; r < records.rows.size(); ++r) {
    const auto& row = records.rows[r];
    std::size_t x = 0;
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
      x = x * out.feature_bin_labels[f].size() + bin_of(f, row[feature_cols[f]], r);
    }
    const std::size_t y = (row[label_col] == schema.label_one) ? 1 : 0;
    const int s = (row[protected_col] == schema.protected_one) ? 1 : 0;
    out.entries.push_back({x, y, s});
  }
  return out;
}

// Empirical conditional joints and group weights, exact frequencies with no
// smoothing.
inline GroupData estimate(const DiscreteDataset& dataset) {
  const std::size_t nx = dataset.x_alphabet.size();
  const std::size_t ny = dataset.y_alphabet.size();
  std::vector<std::vector<std::vector<double>>> counts(
      2, std::vector<std::vector<double>>(nx, std::vector<double>(ny, 0.0)));
  double group_count[2] = {0.0, 0.0};
  for (const auto& e : dataset.entries) {
    counts[static_cast<std::size_t>(e.s)][e.x][e.y] += 1.0;
    group_count[e.s] += 1.0;
  }
  for (int s = 0; s < 2; ++s) {
    if (group_count[s] == 0.0) {
      throw EmptyGroup("estimate: no records with protected value " + std::to_string(s));
    }
  }
  auto to_joint = [&](int s) {
    auto mass = counts[static_cast<std::size_t>(s)];
    for (auto& row : mass) {
      for (double& m : row) m /= group_count[s];
    }
    return JointTable(dataset.x_alphabet, dataset.y_alphabet, std::move(mass));
  };
  const double total = group_count[0] + group_count[1];
  Pmf pi(Alphabet({"s0", "s1"}), {group_count[0] / total, group_count[1] / total});
  return GroupData(to_joint(0), to_joint(1), std::move(pi));
}

// Resample each record's x through its group's repair channel. One PRNG
// stream per record keyed by (seed, record index); y, s, and the record
// order are untouched.
inline DiscreteDataset apply_repair(const DiscreteDataset& dataset, const RepairPlan& plan,
                                    std::uint64_t seed) {
  if (plan.channel_0.input_alphabet() != dataset.x_alphabet) {
    throw DimensionError("apply_repair: plan alphabet != dataset alphabet");
  }
  DiscreteDataset out = dataset;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    auto& e = out.entries[i];
    const auto& row = plan.channel(e.s).rows()[e.x];
    SplitMix64 rng = SplitMix64::for_record(seed, i);
    const double u = rng.next_double();
    double cum = 0.0;
    std::size_t drawn = row.size() - 1;
    for (std::size_t xt = 0; xt < row.size(); ++xt) {
      cum += row[xt];
      if (u < cum) {
        drawn = xt;
        break;
      }
    }
    e.x = drawn;
  }
  return out;
}

// Plain-text key=value schema file. Recognized keys:
//   protected=<column>        label=<column>       features=<col1>,<col2>,...
//   protected.default=<value> label.positive=<value>
//   bins.<feature>=<edge1>,<edge2>,...   (omitted features bin by value)
inline std::pair<CsvSchema, BinningSpec> load_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_schema_file: cannot open '" + path + "'");
  CsvSchema schema;
  std::map<std::string, std::vector<double>> edges;
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw SchemaError("load_schema_file: bad line '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key == "protected") {
      schema.protected_column = value;
    } else if (key == "label") {
      schema.label_column = value;
    } else if (key == "features") {
      schema.feature_columns.clear();
      for (const auto& f : detail::split_csv_line(value)) schema.feature_columns.push_back(f);
    } else if (key == "protected.default") {
      schema.protected_one = value;
    } else if (key == "label.positive") {
      schema.label_one = value;
    } else if (key.rfind("bins.", 0) == 0) {
      std::vector<double> e;
      for (const auto& v : detail::split_csv_line(value)) {
        e.push_back(detail::parse_number(v, "in schema key " + key));
      }
      edges[key.substr(5)] = std::move(e);
    } else {
      throw SchemaError("load_schema_file: unknown key '" + key + "'");
    }
  }
  BinningSpec spec;
  for (const auto& f : schema.feature_columns) {
    auto it = edges.find(f);
    FeatureBinning fb{f, std::nullopt};
    if (it != edges.end()) fb.edges = it->second;
    const BinningSpec defaults = default_adult_binning();
    if (!fb.edges) {
      if (const FeatureBinning* d = defaults.find(f); d != nullptr) fb.edges = d->edges;
    }
    fb.validate();
    spec.features.push_back(std::move(fb));
  }
  return {schema, spec};
}

struct HistogramBin {
  std::string label;
  double probability;
};

// Empirical marginal of one feature within one protected group.
inline std::vector<HistogramBin> histogram(const DiscreteDataset& dataset,
                                           const std::string& feature, int s) {
  const std::size_t f = dataset.feature_index(feature);
  const auto& labels = dataset.feature_bin_labels[f];
  std::vector<double> counts(labels.size(), 0.0);
  double total = 0.0;
  for (const auto& e : dataset.entries) {
    if (e.s != s) continue;
    counts[dataset.feature_bin(e.x, f)] += 1.0;
    total += 1.0;
  }
  if (total == 0.0) throw EmptyGroup("histogram: no records in group " + std::to_string(s));
  std::vector<HistogramBin> out;
  out.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.push_back({labels[i], counts[i] / total});
  }
  return out;
}

}  // namespace fairtv

#endif  // FAIRTV_DATASET_HPP

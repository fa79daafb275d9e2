#ifndef FAIRTV_JSON_IO_HPP
#define FAIRTV_JSON_IO_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fairtv/dataset.hpp"
#include "fairtv/privacy.hpp"
#include "fairtv/prob_core.hpp"
#include "fairtv/repair.hpp"

namespace fairtv {

using nlohmann::json;

inline json to_json(const Pmf& p) {
  return json{{"alphabet", p.alphabet().labels()}, {"mass", p.mass()}};
}

inline Pmf pmf_from_json(const json& j) {
  return Pmf(Alphabet(j.at("alphabet").get<std::vector<std::string>>()),
             j.at("mass").get<std::vector<double>>());
}

inline json to_json(const Channel& t) {
  std::vector<double> flat;
  flat.reserve(t.input_alphabet().size() * t.output_alphabet().size());
  for (const auto& row : t.rows()) flat.insert(flat.end(), row.begin(), row.end());
  return json{{"alphabet", t.input_alphabet().labels()},
              {"output_alphabet", t.output_alphabet().labels()},
              {"mass", flat}};
}

inline Channel channel_from_json(const json& j) {
  Alphabet in(j.at("alphabet").get<std::vector<std::string>>());
  Alphabet out = j.contains("output_alphabet")
                     ? Alphabet(j.at("output_alphabet").get<std::vector<std::string>>())
                     : in;
  const auto flat = j.at("mass").get<std::vector<double>>();
  if (flat.size() != in.size() * out.size()) {
    throw DimensionError("channel_from_json: mass length mismatch");
  }
  std::vector<std::vector<double>> rows(in.size(), std::vector<double>(out.size()));
  for (std::size_t x = 0; x < in.size(); ++x) {
    for (std::size_t xo = 0; xo < out.size(); ++xo) rows[x][xo] = flat[x * out.size() + xo];
  }
  return Channel(std::move(in), std::move(out), std::move(rows));
}

inline json to_json(const JointTable& t) {
  std::vector<double> flat;
  flat.reserve(t.x_alphabet().size() * t.y_alphabet().size());
  for (const auto& row : t.mass()) flat.insert(flat.end(), row.begin(), row.end());
  return json{{"alphabet", t.x_alphabet().labels()},
              {"y_alphabet", t.y_alphabet().labels()},
              {"mass", flat}};
}

inline JointTable joint_from_json(const json& j) {
  Alphabet x(j.at("alphabet").get<std::vector<std::string>>());
  Alphabet y(j.at("y_alphabet").get<std::vector<std::string>>());
  const auto flat = j.at("mass").get<std::vector<double>>();
  if (flat.size() != x.size() * y.size()) {
    throw DimensionError("joint_from_json: mass length mismatch");
  }
  std::vector<std::vector<double>> rows(x.size(), std::vector<double>(y.size()));
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = 0; b < y.size(); ++b) rows[a][b] = flat[a * y.size() + b];
  }
  return JointTable(std::move(x), std::move(y), std::move(rows));
}

inline json to_json(const RepairPlan& plan) {
  return json{{"rho", plan.rho},
              {"objective", plan.objective},
              {"parity_gap", plan.parity_gap},
              {"channel_0", to_json(plan.channel_0)},
              {"channel_1", to_json(plan.channel_1)}};
}

inline RepairPlan plan_from_json(const json& j) {
  return RepairPlan{channel_from_json(j.at("channel_0")),
                    channel_from_json(j.at("channel_1")),
                    j.at("rho").get<double>(),
                    j.at("objective").get<double>(),
                    j.at("parity_gap").get<double>()};
}

inline json to_json(const PrivacyFairnessReport& r) {
  return json{{"epsilon", r.epsilon},
              {"tv", r.tv},
              {"dobrushin", r.dobrushin},
              {"bound_statement", r.bound},
              {"bound_proof", r.bound},
              {"holds", r.holds}};
}

inline json to_json(const PrivacyUtilityReport& r) {
  return json{{"epsilon", r.epsilon},
              {"tv", r.expected_tv},
              {"dobrushin", json()},
              {"bound_statement", r.bound_statement},
              {"bound_proof", r.bound_proof},
              {"holds", r.holds_proof}};
}

inline json to_json(const DiscreteDataset& d) {
  json features = json::array();
  for (std::size_t f = 0; f < d.feature_names.size(); ++f) {
    features.push_back(json{{"name", d.feature_names[f]}, {"bins", d.feature_bin_labels[f]}});
  }
  json entries = json::array();
  for (const auto& e : d.entries) entries.push_back(json::array({e.x, e.y, e.s}));
  return json{{"x_alphabet", d.x_alphabet.labels()},
              {"y_alphabet", d.y_alphabet.labels()},
              {"features", features},
              {"entries", entries}};
}

inline DiscreteDataset dataset_from_json(const json& j) {
  DiscreteDataset d;
  d.x_alphabet = Alphabet(j.at("x_alphabet").get<std::vector<std::string>>());
  d.y_alphabet = Alphabet(j.at("y_alphabet").get<std::vector<std::string>>());
  for (const auto& f : j.at("features")) {
    d.feature_names.push_back(f.at("name").get<std::string>());
    d.feature_bin_labels.push_back(f.at("bins").get<std::vector<std::string>>());
  }
  for (const auto& e : j.at("entries")) {
    d.entries.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(),
                         e.at(2).get<int>()});
  }
  return d;
}

}  // namespace fairtv

#endif  // FAIRTV_JSON_IO_HPP

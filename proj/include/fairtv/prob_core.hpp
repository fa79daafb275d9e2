#ifndef FAIRTV_PROB_CORE_HPP
#define FAIRTV_PROB_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fairtv/errors.hpp"

namespace fairtv {

inline constexpr double kMassTol = 1e-9;

// Ordered finite alphabet; index <-> label is a bijection.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) {
      throw InvalidParameter("Alphabet: no labels");
    }
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
      if (!seen.insert(l).second) {
        throw InvalidParameter("Alphabet: duplicate label '" + l + "'");
      }
    }
  }

  // Convenience: labels "0", "1", ..., "n-1".
  static Alphabet indexed(std::size_t n, const std::string& prefix = "") {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
    return Alphabet(std::move(labels));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::size_t index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
      throw InvalidParameter("Alphabet: unknown label '" + label + "'");
    }
    return static_cast<std::size_t>(it - labels_.begin());
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.labels_ == b.labels_;
  }
  friend bool operator!=(const Alphabet& a, const Alphabet& b) { return !(a == b); }

 private:
  std::vector<std::string> labels_;
};

// Probability mass function over a finite alphabet.
class Pmf {
 public:
  Pmf(Alphabet alphabet, std::vector<double> mass)
      : alphabet_(std::move(alphabet)), mass_(std::move(mass)) {
    if (mass_.size() != alphabet_.size()) {
      throw DimensionError("Pmf: mass length != alphabet size");
    }
    double total = 0.0;
    for (double m : mass_) {
      if (!(m >= 0.0)) throw InvalidParameter("Pmf: negative or NaN entry");
      total += m;
    }
    if (std::abs(total - 1.0) > kMassTol) {
      throw InvalidParameter("Pmf: mass sums to " + std::to_string(total));
    }
  }

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<double>& mass() const { return mass_; }
  std::size_t size() const { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }

 private:
  Alphabet alphabet_;
  std::vector<double> mass_;
};

// Row-stochastic conditional distribution rows[x][x_out] = P(x_out | x).
class Channel {
 public:
  Channel(Alphabet input, Alphabet output, std::vector<std::vector<double>> rows)
      : input_(std::move(input)), output_(std::move(output)), rows_(std::move(rows)) {
    if (rows_.size() != input_.size()) {
      throw DimensionError("Channel: row count != input alphabet size");
    }
    for (const auto& row : rows_) {
      if (row.size() != output_.size()) {
        throw DimensionError("Channel: row length != output alphabet size");
      }
      double total = 0.0;
      for (double p : row) {
        if (!(p >= 0.0)) throw InvalidParameter("Channel: negative or NaN entry");
        total += p;
      }
      if (std::abs(total - 1.0) > kMassTol) {
        throw InvalidParameter("Channel: row sums to " + std::to_string(total));
      }
    }
  }

  static Channel identity(const Alphabet& a) {
    std::vector<std::vector<double>> rows(a.size(), std::vector<double>(a.size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) rows[i][i] = 1.0;
    return Channel(a, a, std::move(rows));
  }

  const Alphabet& input_alphabet() const { return input_; }
  const Alphabet& output_alphabet() const { return output_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  double operator()(std::size_t x, std::size_t x_out) const { return rows_[x][x_out]; }

 private:
  Alphabet input_;
  Alphabet output_;
  std::vector<std::vector<double>> rows_;
};

// Joint distribution mass[x][y] over input x alphabet times label y alphabet.
class JointTable {
 public:
  JointTable(Alphabet x_alphabet, Alphabet y_alphabet,
             std::vector<std::vector<double>> mass)
      : x_(std::move(x_alphabet)), y_(std::move(y_alphabet)), mass_(std::move(mass)) {
    if (mass_.size() != x_.size()) {
      throw DimensionError("JointTable: row count != x alphabet size");
    }
    double total = 0.0;
    for (const auto& row : mass_) {
      if (row.size() != y_.size()) {
        throw DimensionError("JointTable: row length != y alphabet size");
      }
      for (double m : row) {
        if (!(m >= 0.0)) throw InvalidParameter("JointTable: negative or NaN entry");
        total += m;
      }
    }
    if (std::abs(total - 1.0) > kMassTol) {
      throw InvalidParameter("JointTable: mass sums to " + std::to_string(total));
    }
  }

  const Alphabet& x_alphabet() const { return x_; }
  const Alphabet& y_alphabet() const { return y_; }
  const std::vector<std::vector<double>>& mass() const { return mass_; }
  double operator()(std::size_t x, std::size_t y) const { return mass_[x][y]; }

 private:
  Alphabet x_;
  Alphabet y_;
  std::vector<std::vector<double>> mass_;
};

inline Pmf pmf_from_counts(const std::vector<double>& counts, const Alphabet& alphabet) {
  if (counts.size() != alphabet.size()) {
    throw DimensionError("pmf_from_counts: counts length != alphabet size");
  }
  double total = 0.0;
  for (double c : counts) {
    if (!(c >= 0.0)) throw InvalidParameter("pmf_from_counts: negative count");
    total += c;
  }
  if (total <= 0.0) throw EmptySupport("pmf_from_counts: all counts are zero");
  std::vector<double> mass(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) mass[i] = counts[i] / total;
  return Pmf(alphabet, std::move(mass));
}

// Total variation distance, half-L1 convention.
inline double tv_distance(const Pmf& p, const Pmf& q) {
  if (p.alphabet() != q.alphabet()) {
    throw DimensionError("tv_distance: alphabets differ");
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
  return 0.5 * l1;
}

inline double tv_distance_joint(const JointTable& a, const JointTable& b) {
  if (a.x_alphabet() != b.x_alphabet() || a.y_alphabet() != b.y_alphabet()) {
    throw DimensionError("tv_distance_joint: alphabets differ");
  }
  double l1 = 0.0;
  for (std::size_t x = 0; x < a.x_alphabet().size(); ++x) {
    for (std::size_t y = 0; y < a.y_alphabet().size(); ++y) {
      l1 += std::abs(a(x, y) - b(x, y));
    }
  }
  return 0.5 * l1;
}

inline Pmf push_forward(const Channel& t, const Pmf& p) {
  if (t.input_alphabet() != p.alphabet()) {
    throw DimensionError("push_forward: channel input alphabet != pmf alphabet");
  }
  const std::size_t n_out = t.output_alphabet().size();
  std::vector<double> out(n_out, 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double px = p[x];
    if (px == 0.0) continue;
    const auto& row = t.rows()[x];
    for (std::size_t xo = 0; xo < n_out; ++xo) out[xo] += row[xo] * px;
  }
  return Pmf(t.output_alphabet(), std::move(out));
}

inline JointTable push_forward_joint(const Channel& t, const JointTable& j) {
  if (t.input_alphabet() != j.x_alphabet()) {
    throw DimensionError("push_forward_joint: channel input alphabet != joint x alphabet");
  }
  const std::size_t n_out = t.output_alphabet().size();
  const std::size_t n_y = j.y_alphabet().size();
  std::vector<std::vector<double>> out(n_out, std::vector<double>(n_y, 0.0));
  for (std::size_t x = 0; x < j.x_alphabet().size(); ++x) {
    const auto& row = t.rows()[x];
    for (std::size_t xo = 0; xo < n_out; ++xo) {
      const double w = row[xo];
      if (w == 0.0) continue;
      for (std::size_t y = 0; y < n_y; ++y) out[xo][y] += w * j(x, y);
    }
  }
  return JointTable(t.output_alphabet(), j.y_alphabet(), std::move(out));
}

inline Pmf marginal_x(const JointTable& j) {
  std::vector<double> out(j.x_alphabet().size(), 0.0);
  for (std::size_t x = 0; x < out.size(); ++x) {
    for (std::size_t y = 0; y < j.y_alphabet().size(); ++y) out[x] += j(x, y);
  }
  return Pmf(j.x_alphabet(), std::move(out));
}

inline Pmf marginal_y(const JointTable& j) {
  std::vector<double> out(j.y_alphabet().size(), 0.0);
  for (std::size_t x = 0; x < j.x_alphabet().size(); ++x) {
    for (std::size_t y = 0; y < out.size(); ++y) out[y] += j(x, y);
  }
  return Pmf(j.y_alphabet(), std::move(out));
}

// Dobrushin ergodicity coefficient 1 - sum over outputs of the column minimum.
// Contraction factor of the channel under total variation distance.
inline double dobrushin_coefficient(const Channel& t) {
  const std::size_t n_in = t.input_alphabet().size();
  const std::size_t n_out = t.output_alphabet().size();
  double min_sum = 0.0;
  for (std::size_t xo = 0; xo < n_out; ++xo) {
    double col_min = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < n_in; ++x) col_min = std::min(col_min, t(x, xo));
    min_sum += col_min;
  }
  return std::clamp(1.0 - min_sum, 0.0, 1.0);
}

}  // namespace fairtv

#endif  // FAIRTV_PROB_CORE_HPP

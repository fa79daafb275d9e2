#ifndef FAIRTV_TOOLS_SYNTHETIC_CENSUS_HPP
#define FAIRTV_TOOLS_SYNTHETIC_CENSUS_HPP

// Deterministic stand-in for the 1994 Census (Adult) extract: same column
// layout, comparable size, and the same qualitative gender structure (men
// skewed toward longer work weeks, higher-income rate increasing with
// education and hours). Lets the pipeline and its tests run in environments
// where the real file cannot be fetched; any real Adult CSV drops in
// unchanged.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "fairtv/errors.hpp"
#include "fairtv/rng.hpp"

namespace fairtv::tools {

inline void write_synthetic_census(const std::string& path, std::size_t rows = 48842,
                                   std::uint64_t seed = 19940501) {
  std::ofstream out(path);
  if (!out) throw IoError("write_synthetic_census: cannot open '" + path + "'");

  static const std::array<const char*, 16> kEducation = {
      "Preschool", "1st-4th",    "5th-6th",   "7th-8th", "9th",       "10th",
      "11th",      "12th",       "HS-grad",   "Some-college", "Assoc-voc", "Assoc-acdm",
      "Bachelors", "Masters",    "Prof-school", "Doctorate"};

  // education-num weights 1..16, mildly different per sex.
  static const std::array<double, 16> kEduFemale = {2,  3,  6, 10, 12, 16, 20, 10,
                                                    330, 240, 50, 40, 160, 60, 8, 6};
  static const std::array<double, 16> kEduMale = {4,  5,  9, 14, 16, 20, 24, 12,
                                                  320, 210, 45, 30, 170, 55, 18, 14};
  static const std::array<int, 10> kHoursF = {20, 25, 30, 35, 38, 40, 45, 50, 55, 60};
  static const std::array<double, 10> kHoursFW = {12, 6, 10, 8, 5, 42, 7, 6, 2, 2};
  static const std::array<int, 10> kHoursM = {20, 30, 35, 40, 45, 50, 55, 60, 70, 80};
  static const std::array<double, 10> kHoursMW = {3, 4, 4, 45, 12, 15, 5, 8, 3, 1};

  auto pick = [](SplitMix64& rng, const double* w, std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += w[i];
    double u = rng.next_double() * total;
    for (std::size_t i = 0; i < n; ++i) {
      u -= w[i];
      if (u < 0.0) return i;
    }
    return n - 1;
  };

  out << "age,workclass,fnlwgt,education,education-num,marital-status,occupation,"
         "relationship,race,sex,capital-gain,capital-loss,hours-per-week,"
         "native-country,income\n";

  for (std::size_t i = 0; i < rows; ++i) {
    SplitMix64 rng = SplitMix64::for_record(seed, i);
    const bool male = rng.next_double() < 0.668;
    const std::size_t edu = male ? pick(rng, kEduMale.data(), 16) : pick(rng, kEduFemale.data(), 16);
    const int edu_num = static_cast<int>(edu) + 1;
    const int hours = male ? kHoursM[pick(rng, kHoursMW.data(), 10)]
                           : kHoursF[pick(rng, kHoursFW.data(), 10)];
    const double score = 0.45 * edu_num + 0.06 * hours + (male ? 0.7 : 0.0) - 9.0;
    const bool high = rng.next_double() < 1.0 / (1.0 + std::exp(-score));
    const int age = 17 + static_cast<int>(rng.next() % 60);
    const std::uint64_t fnlwgt = 20000 + rng.next() % 400000;
    // A small number of rows lose their hours value; the loader must drop
    // and count them.
    const bool missing_hours = (rng.next() % 600) == 0;

    out << age << ",Private," << fnlwgt << "," << kEducation[edu] << "," << edu_num
        << ",Married-civ-spouse,Adm-clerical,Husband,White," << (male ? "Male" : "Female")
        << ",0,0,";
    if (missing_hours) {
      out << "?";
    } else {
      out << hours;
    }
    out << ",United-States," << (high ? ">50K" : "<=50K") << "\n";
  }
}

}  // namespace fairtv::tools

#endif  // FAIRTV_TOOLS_SYNTHETIC_CENSUS_HPP

// Writes the deterministic census-style CSV used by the examples and tests.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "synthetic_census.hpp"

int main(int argc, char** argv) {
  std::string path = "census.csv";
  std::size_t rows = 48842;
  std::uint64_t seed = 19940501;
  if (argc > 1) path = argv[1];
  if (argc > 2) rows = std::stoull(argv[2]);
  if (argc > 3) seed = std::stoull(argv[3]);
  try {
    fairtv::tools::write_synthetic_census(path, rows, seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  std::printf("wrote %zu rows to %s\n", rows, path.c_str());
  return 0;
}

#pragma once

// Reference filter tables shipped under data/, loaded as exact polynomials.

#include <string>
#include <vector>

#include "symframe/io/serialize.hpp"
#include "symframe/lattice.hpp"

#ifndef SYMFRAME_DATA_DIR
#error "SYMFRAME_DATA_DIR must point at the repository's data/ directory"
#endif

namespace fixtures {

inline symframe::LaurentPoly table(const std::string& rel) {
  return symframe::io::parse_dense_table(symframe::io::read_text_file(std::string(SYMFRAME_DATA_DIR) + "/" + rel));
}

inline std::string path(const std::string& rel) { return std::string(SYMFRAME_DATA_DIR) + "/" + rel; }

namespace hexagonal {
inline symframe::IntMatrix dilation() { return symframe::IntMatrix{{2, -1}, {1, 1}}; }
inline symframe::IntMatrix second_wavelet_map() { return symframe::IntMatrix{{1, 0}, {1, -1}}; }
inline symframe::LaurentPoly m0() { return table("hexagonal/m0.txt"); }
inline symframe::LaurentPoly m0_dual() { return table("hexagonal/m0_dual.txt"); }
inline symframe::LaurentPoly m1() { return table("hexagonal/m1.txt"); }
inline symframe::LaurentPoly m1_dual() { return table("hexagonal/m1_dual.txt"); }
}  // namespace hexagonal

namespace axis {
inline symframe::IntMatrix dilation() { return symframe::IntMatrix::diagonal({3, 2}); }
inline symframe::LaurentPoly m0() { return table("axis/m0.txt"); }
inline symframe::LaurentPoly m0_dual() { return table("axis/m0_dual.txt"); }
inline std::vector<symframe::LaurentPoly> wavelets() {
  std::vector<symframe::LaurentPoly> out;
  for (int k = 1; k <= 5; ++k) out.push_back(table("axis/m" + std::to_string(k) + ".txt"));
  return out;
}
inline std::vector<symframe::LaurentPoly> dual_wavelets() {
  std::vector<symframe::LaurentPoly> out;
  for (int k = 1; k <= 5; ++k) out.push_back(table("axis/m" + std::to_string(k) + "_dual.txt"));
  return out;
}
// Block-diagonal symmetrizer pair, blocks [1], [[1,1],[1,-1]] twice.
inline std::vector<std::vector<symframe::Scalar>> w(bool dual) {
  using symframe::Scalar;
  const Scalar h = dual ? Scalar(symframe::make_rational(1, 2)) : Scalar(1);
  const Scalar z(0);
  return {{Scalar(1), z, z, z, z}, {z, h, h, z, z}, {z, h, -h, z, z}, {z, z, z, h, h}, {z, z, z, h, -h}};
}
}  // namespace axis

}  // namespace fixtures

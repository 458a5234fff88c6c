// Six-channel bank for M = diag(3,2) with axial symmetry. Every wavelet comes
// out symmetric or antisymmetric, and the symmetrizer stays rational.

#include <iostream>

#include "symframe/symframe.hpp"

using namespace symframe;

int main() {
  const auto h = groups::axis(2);
  const IntMatrix m = IntMatrix::diagonal({3, 2});
  const Mask m0 = build_interpolatory_mask(h, m, 1);
  const FilterBank bank = symmetrized_extension(m0, build_dual_mask(m0));

  for (std::size_t p = 0; p < bank.symmetrizer->w.size(); ++p) {
    std::cout << "W_" << p << " =";
    for (const auto& row : bank.symmetrizer->w[p]) {
      std::cout << " [";
      for (const auto& x : row) std::cout << ' ' << x.str();
      std::cout << " ]";
    }
    std::cout << '\n';
  }

  for (std::size_t nu = 1; nu < bank.size(); ++nu) {
    std::cout << "\nm" << nu << " (orbit " << bank.labels[nu].orbit << ")\n" << io::format_dense_table(bank.primal[nu]);
    for (std::size_t k = 0; k < h.size(); ++k) {
      const auto s = check_generalized_symmetry(bank.primal[nu], h[k]);
      std::cout << "  K=" << h[k].str() << "  epsilon=" << (s ? s->epsilon.str() : "none") << '\n';
    }
  }
}

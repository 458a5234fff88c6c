// Builds an order-3 interpolatory mask with hexagonal symmetry, its dual and
// the mutually symmetric wavelet bank, then prints the filters as tables.

#include <iostream>

#include "symframe/symframe.hpp"

using namespace symframe;

int main() {
  const auto h = groups::hexagonal();
  const IntMatrix m{{2, -1}, {1, 1}};
  const Mask m0 = build_interpolatory_mask(h, m, 3);
  const Mask d0 = build_dual_mask(m0);
  const FilterBank bank = mutual_extension(m0, d0);

  for (std::size_t nu = 0; nu < bank.size(); ++nu) {
    std::cout << "m" << nu << "\n" << io::format_dense_table(bank.primal[nu]) << "\n";
    std::cout << "m" << nu << " dual\n" << io::format_dense_table(bank.dual[nu]) << "\n";
  }
  std::cout << io::format_report_table(verify_bank(bank, 6, &h));

  // The second wavelet is the first one seen through a group element.
  const auto& orbit = bank.orbits->orbit(1);
  std::cout << "orbit of " << to_string(orbit.representative) << " has " << orbit.size() << " cosets\n";
}

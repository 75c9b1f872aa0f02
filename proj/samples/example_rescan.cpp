// Rescans one base ruler under every unit multiplier and prints the moduli it
// survives, each as a replayable witness chain.
//
//   example_rescan [q] [k]     Singer ruler of order q, trimmed to k marks (defaults 7 and q+1)

#include <cstdlib>
#include <iostream>
#include <set>

#include "configura/configura.hpp"

using namespace configura;

int main(int argc, char** argv) {
  const std::uint32_t q = argc > 1 ? static_cast<std::uint32_t>(std::atoi(argv[1])) : 7;
  const std::uint32_t k = argc > 2 ? static_cast<std::uint32_t>(std::atoi(argv[2])) : q + 1;
  try {
    const auto base = singer_ruler(q);
    require(k >= 3 && k <= base.k(), ErrorCode::PreconditionFailed, "k must lie in [3, q+1]");
    Marks drop(base.marks.begin() + k, base.marks.end());
    const auto ruler = delete_marks(base, drop);
    const auto P = static_cast<std::uint32_t>(plane_bound(k)), G = golomb_bound(k);
    std::cout << "base " << io::ruler_to_text(ruler) << ", scanning [" << P << ", " << G << ")\n";

    std::set<std::uint32_t> seen;
    for (auto m : num::units_mod(ruler.v)) {
      // The shortest translate gives the widest range of moduli to retest.
      const auto mapped = min_span_rotation(affine_map(ruler, m, 0));
      const auto lo = std::max(P, mapped.marks.back() + 1);
      if (lo >= G) continue;
      for (auto v : delta_scan(mapped.marks, lo, G - 1)) {
        if (!seen.insert(v).second) continue;
        Witness w{v, k, true, "sample", json::array()};
        w.chain.push_back({{"op", "singer"}, {"q", q}});
        if (!drop.empty()) w.chain.push_back({{"op", "delete"}, {"marks", drop}});
        w.chain.push_back({{"op", "affine"}, {"m", m}, {"b", 0}});
        w.chain.push_back({{"op", "rotate"}});
        w.chain.push_back({{"op", "retest"}, {"v", v}});
        const auto check = verify_witness(w);
        std::cout << v << "_" << k << "  m=" << m << "  " << io::ruler_to_text(ModularRuler(mapped.marks, v))
                  << (check.ok ? "" : "  replay failed: " + check.message) << '\n';
      }
    }
    if (seen.empty()) std::cout << "no modulus below G(k) survives\n";
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

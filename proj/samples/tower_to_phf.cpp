// Tower row set, a solution-free M in range, the resulting matrix and its
// exhaustive separation check.

#include <iostream>

#include "shfam/shfam.hpp"

int main() {
  using namespace shfam;
  const PlasticSet r = plastic_tower(Integer(1) << 64, 3);
  std::cout << "R =";
  for (const auto& x : r.elements()) std::cout << ' ' << x;
  std::cout << "  (rank " << r.rank() << ")\n";

  const Value q = 257;
  const Value top = to_value(m_range_limit(r, q));
  const auto m = greedy_solution_free_in(0, top, equations_of(r.elements(), r.size())).set;
  std::cout << "M in [0, " << top << "]:";
  for (Value v : m) std::cout << ' ' << v;
  std::cout << '\n';

  const HashFamilyMatrix a = build_phf(r, m, q);
  const ShfResult res = verify_shf(a, SHFType::perfect(r.size()), {.jobs = 4});
  std::cout << a.rows() << " x " << a.cols() << " matrix over q = " << q << ": " << (res.separating ? "perfect" : "not perfect")
            << " (" << res.families << " families)\n";
  return res.separating ? 0 : 1;
}

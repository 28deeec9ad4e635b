// Lift a free set of an ancestor back to the original array and check it.

#include <iostream>

#include "shfam/shfam.hpp"

int main() {
  using namespace shfam;
  const BipartiteArray a({Integer(9990), Integer(99)}, {Integer(9999), Integer(90)});
  const Integer theta = 3;
  const BipartiteArray anc = ancestor(a, theta, 2);
  std::cout << "ancestor: pos";
  for (const auto& c : anc.pos()) std::cout << ' ' << c;
  std::cout << " | neg";
  for (const auto& c : anc.neg()) std::cout << ' ' << c;
  std::cout << '\n';

  SearchLimits limits;
  limits.max_arity = 8;
  const Integer location = smaller_maximum(a) / anc.sum_pos();
  const BipartiteArray eq[] = {anc};
  const auto b = greedy_solution_free(location.convert_to<Value>(), eq, limits).set;
  std::cout << "B in [1, " << location << "] has " << b.size() << " elements\n";

  for (unsigned digits : {1u, 2u}) {
    const SolutionFreeCert lifted = link_construct(b, a, theta, 2, digits, limits);
    std::cout << digits << " digit(s): " << lifted.set.size() << " elements, " << (lifted.verified ? "verified" : "unverified")
              << '\n';
  }
  return 0;
}

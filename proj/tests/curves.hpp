#pragma once

#include <string>
#include <vector>

#include "bcml/derham.hpp"

namespace bcml::testing {

struct StoredCurve {
  std::string label;
  long p;
  std::vector<Integer> f;
};

// Good reduction at the given prime; discriminants checked at construction.
inline const std::vector<StoredCurve>& stored_curves() {
  static const std::vector<StoredCurve> curves = {
      {"g2-p5-superspecial", 5, {1, 2, 0, 0, 0, 1}},
      {"g2-p5-ordinary", 5, {3, 1, 0, 1, 0, 1}},
      {"g2-p5-a", 5, {1, 1, 0, 0, 0, 1}},
      {"g2-p5-b", 5, {2, 0, 1, 0, 0, 1}},
      {"g2-p7-a", 7, {1, 2, 0, 0, 0, 1}},
      {"g2-p7-b", 7, {3, 1, 0, 1, 0, 1}},
      {"g2-p7-c", 7, {2, 3, 0, 0, 0, 1}},
      {"g2-p7-d", 7, {1, 0, 0, 3, 0, 1}},
      {"g3-p7-a", 7, {1, 0, 2, 0, 1, 0, 0, 1}},
      {"g3-p7-b", 7, {3, 1, 0, 0, 0, 0, 0, 1}},
      {"g2-p5-c", 5, {1, 0, 0, 0, 1, 1}},
      {"g2-p5-d", 5, {1, 0, 0, 1, 1, 1}},
      {"g2-p7-e", 7, {1, 0, 1, 0, 0, 1}},
      {"g2-p7-f", 7, {1, 0, 2, 0, 0, 1}},
      {"g3-p7-c", 7, {1, 0, 0, 0, 0, 0, 1, 1}},
  };
  return curves;
}

inline HyperellipticCurve make_curve(const StoredCurve& c, int N) {
  return HyperellipticCurve(c.p, c.f, N, c.label);
}

}  // namespace bcml::testing

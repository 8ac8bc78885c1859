#include "mlswe/tableaux.hpp"

#include <cmath>

namespace mlswe {

const ButcherTableaux& ark2_tableaux() {
  static const ButcherTableaux t = [] {
    const double s2 = std::sqrt(2.0);
    ButcherTableaux t;
    t.c = {0.0, 2.0 - s2, 1.0};

    t.a_explicit[1][0] = 2.0 - s2;
    t.a_explicit[2][0] = 1.0 - (3.0 + 2.0 * s2) / 6.0;
    t.a_explicit[2][1] = (3.0 + 2.0 * s2) / 6.0;

    const double gamma_half = 1.0 - 1.0 / s2;
    t.a_implicit[1][0] = gamma_half;
    t.a_implicit[1][1] = gamma_half;
    t.a_implicit[2][0] = 1.0 / (2.0 * s2);
    t.a_implicit[2][1] = 1.0 / (2.0 * s2);
    t.a_implicit[2][2] = gamma_half;

    t.b = {1.0 / (2.0 * s2), 1.0 / (2.0 * s2), gamma_half};
    return t;
  }();
  return t;
}

}  // namespace mlswe

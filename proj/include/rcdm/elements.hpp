#pragma once

#include <vector>

#include "rcdm/common.hpp"

namespace rcdm {

enum class ElementFamily { Bar2, Quad9, Hex8, Hex20 };

int element_dim(ElementFamily f);
int element_nodes(ElementFamily f);

struct QuadPoint {
  double xi[3] = {0, 0, 0};
  double w = 0.0;
};

// Full integration for the polynomial orders used: 2-pt bars, 3x3 for the
// biquadratic quad, 2x2x2 for hex8, 3x3x3 for the 20-node serendipity hex.
const std::vector<QuadPoint>& quadrature(ElementFamily f);

// N (size nn) and dN/dxi (nn x dim, row-major) at a local point.
void shape_functions(ElementFamily f, const double xi[3], std::vector<double>& N,
                     std::vector<double>& dN);

}  // namespace rcdm

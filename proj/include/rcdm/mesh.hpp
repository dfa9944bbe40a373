#pragma once

#include <map>
#include <string>
#include <vector>

#include "rcdm/elements.hpp"

namespace rcdm {

struct Mesh {
  int dim = 1;
  ElementFamily family = ElementFamily::Bar2;
  std::vector<double> coords;  // node-major: coords[node*dim + c]
  std::vector<int> conn;       // element-major, stride element_nodes(family)
  std::map<std::string, std::vector<int>> node_sets;

  int n_nodes() const { return static_cast<int>(coords.size()) / dim; }
  int n_elements() const { return static_cast<int>(conn.size()) / element_nodes(family); }
  const int* element(int e) const { return conn.data() + e * element_nodes(family); }
  double coord(int node, int c) const { return coords[node * dim + c]; }

  // Elements sharing at least one edge (>= 2 common nodes).
  std::vector<std::vector<int>> edge_neighbors() const;
};

// Two-element bar of total length L: nodes at 0, kappa L, L; kappa = 1 gives
// a single element.  Sets: "bottom", "middle", "top".
Mesh make_bar_mesh(double kappa, double L = 1.0);

// Two stacked hex8 elements along x1 with unit cross-section, interface at
// kappa L; kappa = 1 gives a single element.  Sets: "bottom", "middle", "top".
Mesh make_column_mesh(double kappa, double L = 1.0);

// Quarter plate with a circular hole of radius r = r_over_L * L at the
// origin, meshed by two mapped blocks of n x n biquadratic quads each
// (elements_total = 2 n^2 must be one of 8, 32, 128, 512, ...).  Sets:
// "symmetry-x" (y = 0), "symmetry-y" (x = 0), "driven-edge" (x = L),
// "hole-arc".
Mesh make_plate_hole_mesh(int elements_total, double L = 1.0, double r_over_L = 0.25);

// Unit cube, n^3 elements of the given hex family.
// Sets: "fixed-face" (x = 0), "driven-face" (x = 1).
Mesh make_cube_mesh(int n, ElementFamily family);

}  // namespace rcdm

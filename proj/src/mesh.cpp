#include "rcdm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rcdm {

std::vector<std::vector<int>> Mesh::edge_neighbors() const {
  const int ne = n_elements();
  const int nn = element_nodes(family);
  std::vector<std::vector<int>> nbrs(ne);
  for (int a = 0; a < ne; ++a)
    for (int b = a + 1; b < ne; ++b) {
      int common = 0;
      for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j)
          if (conn[a * nn + i] == conn[b * nn + j]) ++common;
      if (common >= 2) {
        nbrs[a].push_back(b);
        nbrs[b].push_back(a);
      }
    }
  return nbrs;
}

Mesh make_bar_mesh(double kappa, double L) {
  if (kappa <= 0.0 || kappa > 1.0) throw InputError("bar mesh: kappa must be in (0,1]");
  Mesh m;
  m.dim = 1;
  m.family = ElementFamily::Bar2;
  if (kappa >= 1.0) {
    m.coords = {0.0, L};
    m.conn = {0, 1};
    m.node_sets["bottom"] = {0};
    m.node_sets["middle"] = {};
    m.node_sets["top"] = {1};
  } else {
    m.coords = {0.0, kappa * L, L};
    m.conn = {0, 1, 1, 2};
    m.node_sets["bottom"] = {0};
    m.node_sets["middle"] = {1};
    m.node_sets["top"] = {2};
  }
  return m;
}

Mesh make_column_mesh(double kappa, double L) {
  if (kappa <= 0.0 || kappa > 1.0) throw InputError("column mesh: kappa must be in (0,1]");
  Mesh m;
  m.dim = 3;
  m.family = ElementFamily::Hex8;
  const bool single = kappa >= 1.0;
  const std::vector<double> layers =
      single ? std::vector<double>{0.0, L} : std::vector<double>{0.0, kappa * L, L};

  // 4 nodes per layer on the unit cross-section, fixed local order.
  const double ys[4] = {0, 1, 1, 0};
  const double zs[4] = {0, 0, 1, 1};
  for (double x : layers)
    for (int i = 0; i < 4; ++i) {
      m.coords.push_back(x);
      m.coords.push_back(ys[i]);
      m.coords.push_back(zs[i]);
    }
  auto layer_node = [](int layer, int i) { return layer * 4 + i; };
  for (std::size_t e = 0; e + 1 < layers.size(); ++e) {
    // Corner order (-,-,-),(+,-,-),(+,+,-),(-,+,-),(-,-,+),... with local
    // (xi,eta,zeta) -> (x1,x2,x3).
    const int lo = static_cast<int>(e);
    m.conn.insert(m.conn.end(),
                  {layer_node(lo, 0), layer_node(lo + 1, 0), layer_node(lo + 1, 1),
                   layer_node(lo, 1), layer_node(lo, 3), layer_node(lo + 1, 3),
                   layer_node(lo + 1, 2), layer_node(lo, 2)});
  }
  const int top = static_cast<int>(layers.size()) - 1;
  for (int i = 0; i < 4; ++i) {
    m.node_sets["bottom"].push_back(layer_node(0, i));
    m.node_sets["top"].push_back(layer_node(top, i));
  }
  if (!single)
    for (int i = 0; i < 4; ++i) m.node_sets["middle"].push_back(layer_node(1, i));
  else
    m.node_sets["middle"] = {};
  return m;
}

Mesh make_plate_hole_mesh(int elements_total, double L, double r_over_L) {
  if (elements_total < 2 || elements_total % 2 != 0)
    throw InputError("plate mesh: element count must be even");
  const int n = static_cast<int>(std::lround(std::sqrt(elements_total / 2.0)));
  if (2 * n * n != elements_total)
    throw InputError("plate mesh: element count must be 2 n^2");
  const double r = r_over_L * L;
  if (r <= 0.0 || r >= L) throw InputError("plate mesh: need 0 < r < L");

  Mesh m;
  m.dim = 2;
  m.family = ElementFamily::Quad9;

  // Two ruled blocks between the quarter arc and the outer right/top edges.
  // u in [0,1] runs along the arc, v in [0,1] radially outward.
  auto block_point = [&](int blk, double u, double v) {
    const double th = (blk == 0) ? u * M_PI / 4.0 : M_PI / 4.0 + u * M_PI / 4.0;
    const double ix = r * std::cos(th), iy = r * std::sin(th);
    const double ox = (blk == 0) ? L : (1.0 - u) * L;
    const double oy = (blk == 0) ? u * L : L;
    return std::pair<double, double>{(1 - v) * ix + v * ox, (1 - v) * iy + v * oy};
  };

  // Node lattice: (2n+1)^2 per block; block 1 shares block 0's u = 1 line.
  const int nl = 2 * n + 1;
  std::vector<std::vector<int>> id(2, std::vector<int>(nl * nl, -1));
  for (int blk = 0; blk < 2; ++blk)
    for (int j = 0; j < nl; ++j)      // v index
      for (int i = 0; i < nl; ++i) {  // u index
        if (blk == 1 && i == 0) {
          id[1][j * nl] = id[0][j * nl + (nl - 1)];
          continue;
        }
        auto [x, y] = block_point(blk, double(i) / (nl - 1), double(j) / (nl - 1));
        id[blk][j * nl + i] = m.n_nodes();
        m.coords.push_back(x);
        m.coords.push_back(y);
      }

  // Quad9 local numbering is lexicographic in (xi, eta) = (v, u); that
  // orientation keeps the Jacobian positive in both blocks.
  for (int blk = 0; blk < 2; ++blk)
    for (int J = 0; J < n; ++J)
      for (int I = 0; I < n; ++I)
        for (int b = 0; b < 3; ++b)    // eta ~ u
          for (int a = 0; a < 3; ++a)  // xi ~ v
            m.conn.push_back(id[blk][(2 * J + a) * nl + (2 * I + b)]);

  for (int j = 0; j < nl; ++j) {
    m.node_sets["symmetry-x"].push_back(id[0][j * nl]);            // y = 0
    m.node_sets["symmetry-y"].push_back(id[1][j * nl + (nl - 1)]); // x = 0
    m.node_sets["driven-edge"].push_back(id[0][(nl - 1) * nl + j]);  // x = L
  }
  for (int blk = 0; blk < 2; ++blk)
    for (int i = (blk == 0 ? 0 : 1); i < nl; ++i)
      m.node_sets["hole-arc"].push_back(id[blk][i]);  // v = 0 line
  return m;
}

Mesh make_cube_mesh(int n, ElementFamily family) {
  if (n < 1) throw InputError("cube mesh: n must be >= 1");
  if (family != ElementFamily::Hex8 && family != ElementFamily::Hex20)
    throw InputError("cube mesh: family must be hex8 or hex20");

  Mesh m;
  m.dim = 3;
  m.family = family;
  const bool quadratic = family == ElementFamily::Hex20;

  // Lattice ids; for hex20 only corner and edge-mid lattice sites are used.
  std::map<std::array<int, 3>, int> ids;
  auto node_id = [&](int i, int j, int k) {
    const std::array<int, 3> key{i, j, k};
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    const int idx = m.n_nodes();
    ids.emplace(key, idx);
    const double s = quadratic ? (0.5 / n) : (1.0 / n);
    m.coords.push_back(i * s);
    m.coords.push_back(j * s);
    m.coords.push_back(k * s);
    return idx;
  };

  const int kHexCorner[8][3] = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                                {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};
  const int kHexEdge[12][3] = {{0, -1, -1}, {1, 0, -1}, {0, 1, -1}, {-1, 0, -1},
                               {0, -1, 1},  {1, 0, 1},  {0, 1, 1},  {-1, 0, 1},
                               {-1, -1, 0}, {1, -1, 0}, {1, 1, 0},  {-1, 1, 0}};

  for (int K = 0; K < n; ++K)
    for (int J = 0; J < n; ++J)
      for (int I = 0; I < n; ++I) {
        if (!quadratic) {
          for (const auto& c : kHexCorner)
            m.conn.push_back(node_id(I + (c[0] + 1) / 2, J + (c[1] + 1) / 2,
                                     K + (c[2] + 1) / 2));
        } else {
          const int cx = 2 * I + 1, cy = 2 * J + 1, cz = 2 * K + 1;
          for (const auto& c : kHexCorner)
            m.conn.push_back(node_id(cx + c[0], cy + c[1], cz + c[2]));
          for (const auto& e : kHexEdge)
            m.conn.push_back(node_id(cx + e[0], cy + e[1], cz + e[2]));
        }
      }

  const double tol = 1e-12;
  for (int node = 0; node < m.n_nodes(); ++node) {
    if (std::abs(m.coord(node, 0)) < tol) m.node_sets["fixed-face"].push_back(node);
    if (std::abs(m.coord(node, 0) - 1.0) < tol)
      m.node_sets["driven-face"].push_back(node);
  }
  return m;
}

}  // namespace rcdm

#include "rcdm/elements.hpp"

#include <cmath>

namespace rcdm {

namespace {

// Corner sign pattern shared by Hex8 and Hex20.
const int kHexCorner[8][3] = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                              {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};

// Hex20 edge mid-nodes: bottom ring, top ring, verticals.
const int kHexEdge[12][3] = {{0, -1, -1}, {1, 0, -1}, {0, 1, -1}, {-1, 0, -1},
                             {0, -1, 1},  {1, 0, 1},  {0, 1, 1},  {-1, 0, 1},
                             {-1, -1, 0}, {1, -1, 0}, {1, 1, 0},  {-1, 1, 0}};

std::vector<QuadPoint> gauss_product(int dim, int n) {
  double pts[3], wts[3];
  if (n == 2) {
    pts[0] = -1.0 / std::sqrt(3.0);
    pts[1] = 1.0 / std::sqrt(3.0);
    wts[0] = wts[1] = 1.0;
  } else {
    pts[0] = -std::sqrt(3.0 / 5.0);
    pts[1] = 0.0;
    pts[2] = std::sqrt(3.0 / 5.0);
    wts[0] = wts[2] = 5.0 / 9.0;
    wts[1] = 8.0 / 9.0;
  }
  std::vector<QuadPoint> q;
  const int nk = (dim >= 3) ? n : 1;
  const int nj = (dim >= 2) ? n : 1;
  for (int k = 0; k < nk; ++k)
    for (int j = 0; j < nj; ++j)
      for (int i = 0; i < n; ++i) {
        QuadPoint p;
        p.xi[0] = pts[i];
        p.xi[1] = (dim >= 2) ? pts[j] : 0.0;
        p.xi[2] = (dim >= 3) ? pts[k] : 0.0;
        p.w = wts[i] * ((dim >= 2) ? wts[j] : 1.0) * ((dim >= 3) ? wts[k] : 1.0);
        q.push_back(p);
      }
  return q;
}

// 1D quadratic Lagrange basis on {-1, 0, 1}.
inline double lag2(int i, double x) {
  switch (i) {
    case 0: return 0.5 * x * (x - 1.0);
    case 1: return 1.0 - x * x;
    default: return 0.5 * x * (x + 1.0);
  }
}
inline double dlag2(int i, double x) {
  switch (i) {
    case 0: return x - 0.5;
    case 1: return -2.0 * x;
    default: return x + 0.5;
  }
}

}  // namespace

int element_dim(ElementFamily f) {
  switch (f) {
    case ElementFamily::Bar2: return 1;
    case ElementFamily::Quad9: return 2;
    default: return 3;
  }
}

int element_nodes(ElementFamily f) {
  switch (f) {
    case ElementFamily::Bar2: return 2;
    case ElementFamily::Quad9: return 9;
    case ElementFamily::Hex8: return 8;
    case ElementFamily::Hex20: return 20;
  }
  return 0;
}

const std::vector<QuadPoint>& quadrature(ElementFamily f) {
  static const std::vector<QuadPoint> bar = gauss_product(1, 2);
  static const std::vector<QuadPoint> quad9 = gauss_product(2, 3);
  static const std::vector<QuadPoint> hex8 = gauss_product(3, 2);
  static const std::vector<QuadPoint> hex20 = gauss_product(3, 3);
  switch (f) {
    case ElementFamily::Bar2: return bar;
    case ElementFamily::Quad9: return quad9;
    case ElementFamily::Hex8: return hex8;
    case ElementFamily::Hex20: return hex20;
  }
  return bar;
}

void shape_functions(ElementFamily f, const double xi[3], std::vector<double>& N,
                     std::vector<double>& dN) {
  const int nn = element_nodes(f);
  const int dim = element_dim(f);
  N.assign(nn, 0.0);
  dN.assign(nn * dim, 0.0);
  const double x = xi[0], y = xi[1], z = xi[2];

  switch (f) {
    case ElementFamily::Bar2:
      N[0] = 0.5 * (1.0 - x);
      N[1] = 0.5 * (1.0 + x);
      dN[0] = -0.5;
      dN[1] = 0.5;
      return;

    case ElementFamily::Quad9:
      // Lexicographic node grid: a = ix + 3 iy over {-1,0,1}^2.
      for (int iy = 0; iy < 3; ++iy)
        for (int ix = 0; ix < 3; ++ix) {
          const int a = ix + 3 * iy;
          N[a] = lag2(ix, x) * lag2(iy, y);
          dN[a * 2 + 0] = dlag2(ix, x) * lag2(iy, y);
          dN[a * 2 + 1] = lag2(ix, x) * dlag2(iy, y);
        }
      return;

    case ElementFamily::Hex8:
      for (int a = 0; a < 8; ++a) {
        const double sx = kHexCorner[a][0], sy = kHexCorner[a][1], sz = kHexCorner[a][2];
        N[a] = 0.125 * (1 + sx * x) * (1 + sy * y) * (1 + sz * z);
        dN[a * 3 + 0] = 0.125 * sx * (1 + sy * y) * (1 + sz * z);
        dN[a * 3 + 1] = 0.125 * (1 + sx * x) * sy * (1 + sz * z);
        dN[a * 3 + 2] = 0.125 * (1 + sx * x) * (1 + sy * y) * sz;
      }
      return;

    case ElementFamily::Hex20:
      for (int a = 0; a < 8; ++a) {
        const double sx = kHexCorner[a][0], sy = kHexCorner[a][1], sz = kHexCorner[a][2];
        const double px = 1 + sx * x, py = 1 + sy * y, pz = 1 + sz * z;
        const double q = sx * x + sy * y + sz * z - 2.0;
        N[a] = 0.125 * px * py * pz * q;
        dN[a * 3 + 0] = 0.125 * sx * py * pz * (q + px);
        dN[a * 3 + 1] = 0.125 * px * sy * pz * (q + py);
        dN[a * 3 + 2] = 0.125 * px * py * sz * (q + pz);
      }
      for (int e = 0; e < 12; ++e) {
        const int a = 8 + e;
        const double sx = kHexEdge[e][0], sy = kHexEdge[e][1], sz = kHexEdge[e][2];
        if (sx == 0) {
          const double py = 1 + sy * y, pz = 1 + sz * z;
          N[a] = 0.25 * (1 - x * x) * py * pz;
          dN[a * 3 + 0] = -0.5 * x * py * pz;
          dN[a * 3 + 1] = 0.25 * (1 - x * x) * sy * pz;
          dN[a * 3 + 2] = 0.25 * (1 - x * x) * py * sz;
        } else if (sy == 0) {
          const double px = 1 + sx * x, pz = 1 + sz * z;
          N[a] = 0.25 * px * (1 - y * y) * pz;
          dN[a * 3 + 0] = 0.25 * sx * (1 - y * y) * pz;
          dN[a * 3 + 1] = -0.5 * y * px * pz;
          dN[a * 3 + 2] = 0.25 * px * (1 - y * y) * sz;
        } else {
          const double px = 1 + sx * x, py = 1 + sy * y;
          N[a] = 0.25 * px * py * (1 - z * z);
          dN[a * 3 + 0] = 0.25 * sx * py * (1 - z * z);
          dN[a * 3 + 1] = 0.25 * px * sy * (1 - z * z);
          dN[a * 3 + 2] = -0.5 * z * px * py;
        }
      }
      return;
  }
}

}  // namespace rcdm

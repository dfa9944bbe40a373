// Regenerates the unit-sphere quadrature tables under data/spheres/.
// Run manually from the repository root; the emitted files are committed so
// builds never depend on this tool.
//
//   BazantOh-2x21        42 points, octahedrally symmetric, degree 9
//   BazantOh-61x2       122 points, octahedrally symmetric, weights solved
//                        for exactness through degree 11
//   SpherialDesign-225  225 points, Gauss-Legendre x uniform azimuth product

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace {

struct Pt {
  double x, y, z, w;
};

// All sign/permutation images of (x,y,z), deduplicated.
std::vector<Eigen::Vector3d> octahedral_orbit(double x, double y, double z) {
  std::vector<Eigen::Vector3d> out;
  const double c[3] = {x, y, z};
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& pm : perms)
    for (int sx = -1; sx <= 1; sx += 2)
      for (int sy = -1; sy <= 1; sy += 2)
        for (int sz = -1; sz <= 1; sz += 2) {
          Eigen::Vector3d v(sx * c[pm[0]], sy * c[pm[1]], sz * c[pm[2]]);
          bool dup = false;
          for (const auto& u : out)
            if ((u - v).norm() < 1e-12) {
              dup = true;
              break;
            }
          if (!dup) out.push_back(v);
        }
  return out;
}

double exact_even_moment(int i, int j, int k) {
  // (1/4pi) int x^2i y^2j z^2k dOmega = (2i-1)!!(2j-1)!!(2k-1)!!/(2(i+j+k)+1)!!
  auto dfact = [](int n) {
    double r = 1.0;
    for (int m = n; m > 1; m -= 2) r *= m;
    return r;
  };
  return dfact(2 * i - 1) * dfact(2 * j - 1) * dfact(2 * k - 1) /
         dfact(2 * (i + j + k) + 1);
}

double orbit_moment(const std::vector<Eigen::Vector3d>& orbit, int i, int j, int k) {
  double s = 0.0;
  for (const auto& v : orbit)
    s += std::pow(v.x() * v.x(), i) * std::pow(v.y() * v.y(), j) *
         std::pow(v.z() * v.z(), k);
  return s;
}

void write_file(const std::string& path, const std::string& header,
                const std::vector<Pt>& pts) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) {
    std::perror(path.c_str());
    std::exit(1);
  }
  std::fprintf(f, "# %s\n# format: x y z w, weights sum to 1\n", header.c_str());
  for (const auto& p : pts)
    std::fprintf(f, "%.17g %.17g %.17g %.17g\n", p.x, p.y, p.z, p.w);
  std::fclose(f);
  std::printf("wrote %s (%zu points)\n", path.c_str(), pts.size());
}

void emit_bazant_oh_21(const std::string& dir) {
  // Published 2x21 table: 6 axis points, 12 edge points, 24 (a,b,b) points.
  const double w1 = 0.0265214244093;
  const double w2 = 0.0199301476312;
  const double w3 = 0.0250712367487;
  const double a = 0.836095596749, b = 0.387907304067;
  std::vector<Pt> pts;
  for (const auto& v : octahedral_orbit(1, 0, 0)) pts.push_back({v.x(), v.y(), v.z(), w1});
  for (const auto& v : octahedral_orbit(1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0))
    pts.push_back({v.x(), v.y(), v.z(), w2});
  for (const auto& v : octahedral_orbit(a, b, b)) pts.push_back({v.x(), v.y(), v.z(), w3});
  write_file(dir + "/bazant-oh-2x21.txt", "BazantOh-2x21 (42 points, degree 9)", pts);
}

void emit_bazant_oh_61(const std::string& dir) {
  // Orbit structure 6 + 12 + 8 + 24 + 24 + 48 = 122 points.  The free orbit
  // geometry is searched on a coarse grid; the six orbit weights then solve
  // the moment conditions through degree 10 exactly (octahedral symmetry
  // makes odd degrees and degree 2 automatic), which yields degree 11.
  const double s2 = 1 / std::sqrt(2.0), s3 = 1 / std::sqrt(3.0);
  const std::vector<Eigen::Vector3d> fixed1 = octahedral_orbit(1, 0, 0);
  const std::vector<Eigen::Vector3d> fixed2 = octahedral_orbit(s2, s2, 0);
  const std::vector<Eigen::Vector3d> fixed3 = octahedral_orbit(s3, s3, s3);

  // Even monomial exponent triples through degree 12 (the >10 ones are used
  // only to rank candidates, not as exact constraints).
  const int mono[][3] = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1, 1, 0}, {3, 0, 0},
                         {2, 1, 0}, {1, 1, 1}, {4, 0, 0}, {3, 1, 0}, {2, 2, 0},
                         {2, 1, 1}, {5, 0, 0}, {4, 1, 0}, {3, 2, 0}, {3, 1, 1},
                         {2, 2, 1}, {6, 0, 0}, {5, 1, 0}, {4, 2, 0}, {3, 3, 0},
                         {4, 1, 1}, {3, 2, 1}, {2, 2, 2}};
  const int n_mono = sizeof(mono) / sizeof(mono[0]);
  const int n_exact = 16;  // constraints through degree 10

  double best_res = 1e30;
  Eigen::VectorXd best_w;
  double best_par[4] = {0, 0, 0, 0};

  for (int ia = 1; ia <= 8; ++ia)
    for (int ib = 1; ib <= 8; ++ib)
      for (int ic = 1; ic <= 6; ++ic)
        for (int id = 1; id <= 6; ++id) {
          const double b24 = 0.1 + 0.08 * ia;  // (a,b,b) orbit parameter
          const double a24 = std::sqrt(std::max(0.0, 1.0 - 2 * b24 * b24));
          if (a24 < 0.05 || std::abs(a24 - b24) < 0.05) continue;
          const double ang = (0.06 + 0.095 * ib) * M_PI / 4.0;  // (c,d,0) angle
          const double th = 0.15 + 0.18 * ic;                   // 48-orbit polar
          const double ph = (0.08 + 0.13 * id) * M_PI / 4.0;    // 48-orbit azimuth
          const double e = std::sin(th) * std::cos(ph);
          const double f = std::sin(th) * std::sin(ph);
          const double g = std::cos(th);
          if (e < 0.03 || f < 0.03 || g < 0.03) continue;
          if (std::abs(e - f) < 0.03 || std::abs(f - g) < 0.03 ||
              std::abs(e - g) < 0.03)
            continue;

          const auto o4 = octahedral_orbit(a24, b24, b24);
          const auto o5 = octahedral_orbit(std::cos(ang), std::sin(ang), 0);
          const auto o6 = octahedral_orbit(e, f, g);
          if (o4.size() != 24 || o5.size() != 24 || o6.size() != 48) continue;

          const std::vector<const std::vector<Eigen::Vector3d>*> orbits = {
              &fixed1, &fixed2, &fixed3, &o4, &o5, &o6};

          Eigen::MatrixXd M(n_mono, 6);
          Eigen::VectorXd rhs(n_mono);
          for (int c = 0; c < n_mono; ++c) {
            for (int o = 0; o < 6; ++o)
              M(c, o) = orbit_moment(*orbits[o], mono[c][0], mono[c][1], mono[c][2]);
            rhs(c) = exact_even_moment(mono[c][0], mono[c][1], mono[c][2]);
          }

          const Eigen::VectorXd w =
              M.topRows(n_exact).colPivHouseholderQr().solve(rhs.head(n_exact));
          if ((M.topRows(n_exact) * w - rhs.head(n_exact)).norm() > 1e-12) continue;
          if (w.minCoeff() <= 1e-5) continue;
          const double res12 = (M * w - rhs).norm();
          if (res12 < best_res) {
            best_res = res12;
            best_w = w;
            best_par[0] = b24;
            best_par[1] = ang;
            best_par[2] = th;
            best_par[3] = ph;
          }
        }

  if (best_w.size() == 0) {
    std::fprintf(stderr, "61x2 search found no positive-weight solution\n");
    std::exit(1);
  }
  std::printf("61x2: residual(deg 12) = %.3e, params b=%.4f ang=%.4f th=%.4f ph=%.4f\n",
              best_res, best_par[0], best_par[1], best_par[2], best_par[3]);

  const double b24 = best_par[0];
  const double a24 = std::sqrt(1.0 - 2 * b24 * b24);
  std::vector<std::vector<Eigen::Vector3d>> orbits = {
      fixed1, fixed2, fixed3, octahedral_orbit(a24, b24, b24),
      octahedral_orbit(std::cos(best_par[1]), std::sin(best_par[1]), 0),
      octahedral_orbit(std::sin(best_par[2]) * std::cos(best_par[3]),
                       std::sin(best_par[2]) * std::sin(best_par[3]),
                       std::cos(best_par[2]))};
  std::vector<Pt> pts;
  for (int o = 0; o < 6; ++o)
    for (const auto& v : orbits[o])
      pts.push_back({v.x(), v.y(), v.z(), best_w(o)});
  write_file(dir + "/bazant-oh-61x2.txt", "BazantOh-61x2 (122 points, degree 11)", pts);
}

void emit_design_225(const std::string& dir) {
  // 9-point Gauss-Legendre in cos(theta) x 25 uniform azimuth angles.
  const int nth = 9, nph = 25;
  std::vector<double> mu(nth), glw(nth);
  for (int i = 0; i < nth; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (nth + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= nth; ++n) {
        const double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      const double dp = nth * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int n = 2; n <= nth; ++n) {
      const double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    const double dp = nth * (x * p1 - p0) / (x * x - 1.0);
    mu[i] = x;
    glw[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }

  std::vector<Pt> pts;
  for (int i = 0; i < nth; ++i) {
    const double st = std::sqrt(std::max(0.0, 1.0 - mu[i] * mu[i]));
    for (int j = 0; j < nph; ++j) {
      const double ph = 2.0 * M_PI * j / nph;
      pts.push_back({st * std::cos(ph), st * std::sin(ph), mu[i],
                     glw[i] / 2.0 / nph});
    }
  }
  write_file(dir + "/spherical-design-225.txt",
             "SpherialDesign-225 (225 points, Gauss-Legendre x azimuth product)", pts);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data/spheres";
  emit_bazant_oh_21(dir);
  emit_bazant_oh_61(dir);
  emit_design_225(dir);
  return 0;
}

#pragma once

#include <string>

#include "rcdm/material_point.hpp"

namespace rcdm {

// Declarative description of one benchmark run, read from a flat sectioned
// key-value file.  Unknown sections or keys are hard errors.
struct Scenario {
  std::string name = "unnamed";
  std::string kind = "point";  // point | bar1d | column3d | plate_hole | shear_cube
  ModelVariant variant = ModelVariant::Reconvexified;

  MaterialParams material;
  GridSpec grid;

  std::string scheme = "BazantOh-61x2";  // used when kind is 2D/3D

  // mesh parameters (kind-specific)
  double kappa = 1.0;          // bar1d / column3d
  double perturbation = 0.0;   // Dinf offset of the upper element
  int elements = 8;            // plate_hole total element count
  int n = 1;                   // shear_cube elements per axis
  double r_over_L = 0.25;      // plate_hole hole radius
  std::string family = "hex20";  // shear_cube element family

  // load program
  std::string program = "monotone";  // monotone | cyclic
  double target = 2.0;  // final stretch (point) or driven displacement (fem)
  int steps = 100;      // steps (monotone) or steps per half-cycle (cyclic)
  int cycles = 1;

  // output
  bool trace = true;
  bool fields = false;
  std::string out_dir = "out";

  void validate() const;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);
std::string serialize_scenario(const Scenario& s);

// Applies a "section.key=value" override (used by the sweep command).
void apply_override(Scenario& s, const std::string& path, const std::string& value);

ModelVariant variant_from_string(const std::string& v);
const char* variant_to_string(ModelVariant v);

}  // namespace rcdm

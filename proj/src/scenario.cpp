#include "rcdm/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace rcdm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

using Doc = std::map<std::string, std::map<std::string, std::string>>;

Doc parse_doc(const std::string& text) {
  Doc doc;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw InputError("scenario line " + std::to_string(lineno) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      doc[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw InputError("scenario line " + std::to_string(lineno) +
                       ": expected 'key = value' inside a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw InputError("scenario line " + std::to_string(lineno) + ": empty key or value");
    if (!doc[section].emplace(key, val).second)
      throw InputError("scenario: duplicate key " + section + "." + key);
  }
  return doc;
}

double to_double(const std::string& path, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw InputError("scenario field " + path + ": not a number: '" + v + "'");
  }
}

int to_int(const std::string& path, const std::string& v) {
  const double x = to_double(path, v);
  const int i = static_cast<int>(x);
  if (i != x) throw InputError("scenario field " + path + ": not an integer");
  return i;
}

bool to_bool(const std::string& path, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw InputError("scenario field " + path + ": expected true/false");
}

struct Reader {
  const Doc& doc;
  std::set<std::string> consumed;

  bool has(const std::string& sec, const std::string& key) const {
    const auto s = doc.find(sec);
    return s != doc.end() && s->second.count(key) > 0;
  }
  std::string str(const std::string& sec, const std::string& key, std::string def) {
    if (!has(sec, key)) return def;
    consumed.insert(sec + "." + key);
    return doc.at(sec).at(key);
  }
  double num(const std::string& sec, const std::string& key, double def) {
    if (!has(sec, key)) return def;
    consumed.insert(sec + "." + key);
    return to_double(sec + "." + key, doc.at(sec).at(key));
  }
  int integer(const std::string& sec, const std::string& key, int def) {
    if (!has(sec, key)) return def;
    consumed.insert(sec + "." + key);
    return to_int(sec + "." + key, doc.at(sec).at(key));
  }
  bool boolean(const std::string& sec, const std::string& key, bool def) {
    if (!has(sec, key)) return def;
    consumed.insert(sec + "." + key);
    return to_bool(sec + "." + key, doc.at(sec).at(key));
  }

  void check_all_consumed() const {
    static const std::set<std::string> known_sections = {
        "scenario", "material", "grid", "sphere", "mesh", "load", "output"};
    for (const auto& [sec, kv] : doc) {
      if (!known_sections.count(sec))
        throw InputError("scenario: unknown section [" + sec + "]");
      for (const auto& [key, val] : kv)
        if (!consumed.count(sec + "." + key))
          throw InputError("scenario: unknown key " + sec + "." + key);
    }
  }
};

}  // namespace

ModelVariant variant_from_string(const std::string& v) {
  if (v == "unrelaxed") return ModelVariant::Unrelaxed;
  if (v == "fixed_hull") return ModelVariant::FixedHull;
  if (v == "reconvexified") return ModelVariant::Reconvexified;
  throw InputError("scenario.variant: unknown variant '" + v + "'");
}

const char* variant_to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::Unrelaxed: return "unrelaxed";
    case ModelVariant::FixedHull: return "fixed_hull";
    case ModelVariant::Reconvexified: return "reconvexified";
  }
  return "?";
}

void Scenario::validate() const {
  static const std::set<std::string> kinds = {"point", "bar1d", "column3d",
                                              "plate_hole", "shear_cube"};
  if (!kinds.count(kind)) throw InputError("scenario.kind: unknown kind '" + kind + "'");
  material.validate();
  grid.validate();
  if (program != "monotone" && program != "cyclic")
    throw InputError("load.program: must be monotone or cyclic");
  if (steps < 1) throw InputError("load.steps: must be positive");
  if (cycles < 1) throw InputError("load.cycles: must be positive");
  if (kind == "point") {
    if (target <= 1.0) throw InputError("load.target: point runs need a stretch > 1");
  } else if (target <= 0.0) {
    throw InputError("load.target: driven displacement must be positive");
  }
  if (program == "cyclic" && kind != "point")
    throw InputError("load.program: cyclic programs are point-only");
  if (kind == "bar1d" || kind == "column3d") {
    if (kappa <= 0.0 || kappa > 1.0) throw InputError("mesh.kappa: must be in (0,1]");
  }
  if (kind == "plate_hole") {
    if (r_over_L <= 0.0 || r_over_L >= 1.0) throw InputError("mesh.r_over_L: must be in (0,1)");
  }
  if (kind == "shear_cube") {
    if (n < 1) throw InputError("mesh.n: must be >= 1");
    if (family != "hex8" && family != "hex20")
      throw InputError("mesh.family: must be hex8 or hex20");
  }
}

Scenario parse_scenario(const std::string& text) {
  const Doc doc = parse_doc(text);
  Reader r{doc, {}};
  Scenario s;
  s.name = r.str("scenario", "name", s.name);
  s.kind = r.str("scenario", "kind", s.kind);
  s.variant = variant_from_string(r.str("scenario", "variant", "reconvexified"));

  const std::string model = r.str("material", "model", "neo_hooke");
  if (model == "neo_hooke")
    s.material.kind = EnergyModel::NeoHooke;
  else if (model == "yeoh")
    s.material.kind = EnergyModel::Yeoh;
  else
    throw InputError("material.model: unknown model '" + model + "'");
  s.material.lambda = r.num("material", "lambda", 0.0);
  s.material.mu = r.num("material", "mu", 0.0);
  s.material.c1 = r.num("material", "c1", 0.0);
  s.material.c2 = r.num("material", "c2", 0.0);
  s.material.c3 = r.num("material", "c3", 0.0);
  s.material.D0 = r.num("material", "D0", 1.0);
  s.material.Dinf = r.num("material", "Dinf", 0.0);

  s.grid.F_min = r.num("grid", "F_min", s.grid.F_min);
  s.grid.F_max = r.num("grid", "F_max", s.grid.F_max);
  s.grid.n_points = r.integer("grid", "points", s.grid.n_points);

  s.scheme = r.str("sphere", "scheme", s.scheme);

  s.kappa = r.num("mesh", "kappa", s.kappa);
  s.perturbation = r.num("mesh", "perturbation", s.perturbation);
  s.elements = r.integer("mesh", "elements", s.elements);
  s.n = r.integer("mesh", "n", s.n);
  s.r_over_L = r.num("mesh", "r_over_L", s.r_over_L);
  s.family = r.str("mesh", "family", s.family);

  s.program = r.str("load", "program", s.program);
  s.target = r.num("load", "target", s.target);
  s.steps = r.integer("load", "steps", s.steps);
  s.cycles = r.integer("load", "cycles", s.cycles);

  s.trace = r.boolean("output", "trace", s.trace);
  s.fields = r.boolean("output", "fields", s.fields);
  s.out_dir = r.str("output", "directory", s.out_dir);

  r.check_all_consumed();
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw InputError(std::string("scenario: ") + e.what());
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  auto fmt = [](double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return std::string(b);
  };
  std::ostringstream o;
  o << "[scenario]\n";
  o << "name = " << s.name << "\n";
  o << "kind = " << s.kind << "\n";
  o << "variant = " << variant_to_string(s.variant) << "\n\n";
  o << "[material]\n";
  o << "model = " << (s.material.kind == EnergyModel::NeoHooke ? "neo_hooke" : "yeoh") << "\n";
  if (s.material.kind == EnergyModel::NeoHooke) {
    o << "lambda = " << fmt(s.material.lambda) << "\n";
    o << "mu = " << fmt(s.material.mu) << "\n";
  } else {
    o << "c1 = " << fmt(s.material.c1) << "\n";
    o << "c2 = " << fmt(s.material.c2) << "\n";
    o << "c3 = " << fmt(s.material.c3) << "\n";
  }
  o << "D0 = " << fmt(s.material.D0) << "\n";
  o << "Dinf = " << fmt(s.material.Dinf) << "\n\n";
  o << "[grid]\n";
  o << "F_min = " << fmt(s.grid.F_min) << "\n";
  o << "F_max = " << fmt(s.grid.F_max) << "\n";
  o << "points = " << s.grid.n_points << "\n\n";
  if (s.kind != "point" && s.kind != "bar1d") {
    o << "[sphere]\n";
    o << "scheme = " << s.scheme << "\n\n";
  }
  if (s.kind != "point") {
    o << "[mesh]\n";
    if (s.kind == "bar1d" || s.kind == "column3d") {
      o << "kappa = " << fmt(s.kappa) << "\n";
      o << "perturbation = " << fmt(s.perturbation) << "\n";
    } else if (s.kind == "plate_hole") {
      o << "elements = " << s.elements << "\n";
      o << "r_over_L = " << fmt(s.r_over_L) << "\n";
    } else {
      o << "n = " << s.n << "\n";
      o << "family = " << s.family << "\n";
    }
    o << "\n";
  }
  o << "[load]\n";
  o << "program = " << s.program << "\n";
  o << "target = " << fmt(s.target) << "\n";
  o << "steps = " << s.steps << "\n";
  if (s.program == "cyclic") o << "cycles = " << s.cycles << "\n";
  o << "\n[output]\n";
  o << "trace = " << (s.trace ? "true" : "false") << "\n";
  o << "fields = " << (s.fields ? "true" : "false") << "\n";
  o << "directory = " << s.out_dir << "\n";
  return o.str();
}

void apply_override(Scenario& s, const std::string& path, const std::string& value) {
  std::string text = serialize_scenario(s);
  const auto dot = path.find('.');
  if (dot == std::string::npos)
    throw InputError("override path must be section.key: " + path);
  const std::string sec = "[" + path.substr(0, dot) + "]";
  const std::string key = path.substr(dot + 1);

  // Rewrite (or insert) the key inside its section, then re-parse.
  std::istringstream in(text);
  std::ostringstream out;
  std::string line, cur;
  bool replaced = false;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (!t.empty() && t.front() == '[') cur = t;
    if (cur == sec) {
      const auto eq = t.find('=');
      if (eq != std::string::npos && trim(t.substr(0, eq)) == key) {
        out << key << " = " << value << "\n";
        replaced = true;
        continue;
      }
    }
    out << line << "\n";
  }
  if (!replaced) {
    // Append the key at the end of the section.
    std::istringstream in2(text);
    std::ostringstream out2;
    cur.clear();
    bool inserted = false;
    while (std::getline(in2, line)) {
      const std::string t = trim(line);
      if (!t.empty() && t.front() == '[' && cur == sec && !inserted) {
        out2 << key << " = " << value << "\n";
        inserted = true;
      }
      if (!t.empty() && t.front() == '[') cur = t;
      out2 << line << "\n";
    }
    if (!inserted) {
      if (cur != sec) out2 << sec << "\n";
      out2 << key << " = " << value << "\n";
    }
    s = parse_scenario(out2.str());
    return;
  }
  s = parse_scenario(out.str());
}

}  // namespace rcdm

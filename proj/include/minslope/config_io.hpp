#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "flow_engine.hpp"
#include "rational.hpp"
#include "surface_lattice.hpp"

namespace minslope {

// Surface description, one `key = value` per line under four sections:
//
//   [basis]   names = H, -E
//   [form]    row = 1, 0        (one line per basis element)
//   [curves]  E = 0, -1         (curve name = class in the basis)
//   [kahler]  class = 3, 1
//
// '#' starts a comment. Errors name the source and line.
inline SurfaceModel parse_surface(std::istream& in, const std::string& source = "<input>") {
  SurfaceModel X;
  std::string section, raw;
  int lineno = 0;
  bool have_kahler = false;
  auto fail = [&](const std::string& msg) {
    throw InputError(lineno > 0 ? source + ":" + std::to_string(lineno) + ": " + msg : source + ": " + msg);
  };
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  auto coeffs = [&](const std::string& v, const std::string& field) {
    try {
      return parse_rational_list(v);
    } catch (const InputError& e) {
      fail(field + ": " + e.what());
    }
    return std::vector<Rational>{};
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "basis" && section != "form" && section != "curves" && section != "kahler")
        fail("unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (section.empty()) fail("entry outside any section");

    if (section == "basis") {
      if (key != "names") fail("[basis] expects 'names', got '" + key + "'");
      std::stringstream ss(val);
      std::string name;
      while (std::getline(ss, name, ',')) {
        name = trim(name);
        if (name.empty()) fail("names: empty basis label");
        X.basis.push_back(name);
      }
    } else if (section == "form") {
      if (key != "row") fail("[form] expects 'row', got '" + key + "'");
      X.form.push_back(coeffs(val, "row " + std::to_string(X.form.size() + 1)));
    } else if (section == "curves") {
      X.curves.push_back({key, coeffs(val, "curve " + key)});
    } else {
      if (key != "class") fail("[kahler] expects 'class', got '" + key + "'");
      X.kahler_ref = coeffs(val, "class");
      have_kahler = true;
    }
    if (!X.basis.empty()) {
      const std::size_t r = X.basis.size();
      if (section == "form" && X.form.back().size() != r)
        fail("row has " + std::to_string(X.form.back().size()) + " entries, basis has " + std::to_string(r));
      if (section == "curves" && X.curves.back().cls.size() != r) fail("curve " + key + " has wrong length");
      if (section == "kahler" && X.kahler_ref.size() != r) fail("class has wrong length");
    }
  }
  lineno = 0;
  if (X.basis.empty()) fail("missing [basis] names");
  if (X.curves.empty()) fail("missing [curves]");
  if (!have_kahler) fail("missing [kahler] class");
  try {
    X.validate();
  } catch (const InputError& e) {
    fail(e.what());
  } catch (const ModelError& e) {
    throw ModelError(source + ": " + e.what());
  }
  return X;
}

inline SurfaceModel load_surface(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open surface file " + path);
  return parse_surface(in, path);
}

// CSV trace: every checkpoint, one row per node. The last column holds the
// midpoint diagnostic of the cell to the right of the node (empty on the
// final node).
inline void write_trace_csv(std::ostream& os, const FlowTrace& tr) {
  os << "t,x,psi,sigma_or_cot\n" << std::setprecision(15);
  for (const auto& cp : tr.checkpoints)
    for (std::size_t i = 0; i < tr.x.size(); ++i) {
      os << cp.t << ',' << tr.x[i] << ',' << cp.psi[i] << ',';
      if (i < cp.diag.size()) os << cp.diag[i];
      os << '\n';
    }
}

}  // namespace minslope

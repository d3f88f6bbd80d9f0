#include "nlfem/config.hpp"

#include "nlfem/io.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace nlfem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// One configurable value: how to read it from text and how to print it back.
struct Field {
  std::string key;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

struct SectionSchema {
  std::string name;
  std::vector<Field> fields;
};

Field number(const std::string& key, double& v) {
  return {key,
          [&v](const std::string& s) {
            std::size_t used = 0;
            try {
              v = std::stod(s, &used);
            } catch (const std::exception&) {
              used = 0;
            }
            if (used == 0 || used != s.size()) throw InvalidArgument("expected a number, got '" + s + "'");
          },
          [&v] { return format_double(v); }};
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InvalidArgument("expected an integer, got '" + s + "'");
  return v;
}

Field integer(const std::string& key, int& v) {
  return {key, [&v](const std::string& s) { v = parse_int(s); }, [&v] { return std::to_string(v); }};
}

Field boolean(const std::string& key, bool& v) {
  return {key,
          [&v](const std::string& s) {
            if (s == "true" || s == "1" || s == "yes") {
              v = true;
            } else if (s == "false" || s == "0" || s == "no") {
              v = false;
            } else {
              throw InvalidArgument("expected true or false, got '" + s + "'");
            }
          },
          [&v] { return std::string(v ? "true" : "false"); }};
}

template <class E>
Field choice(const std::string& key, E& v, std::vector<std::pair<std::string, E>> names) {
  return {key,
          [&v, names](const std::string& s) {
            for (const auto& [n, e] : names) {
              if (n == s) {
                v = e;
                return;
              }
            }
            std::string opts;
            for (const auto& p : names) opts += (opts.empty() ? "" : ", ") + p.first;
            throw InvalidArgument("expected one of {" + opts + "}, got '" + s + "'");
          },
          [&v, names] {
            for (const auto& [n, e] : names) {
              if (e == v) return n;
            }
            return std::string("?");
          }};
}

template <class T, class Parse, class Print>
Field list(const std::string& key, std::vector<T>& v, Parse parse, Print print) {
  return {key,
          [&v, parse](const std::string& s) {
            v.clear();
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ',')) v.push_back(parse(trim(item)));
          },
          [&v, print] {
            std::string out;
            for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + print(v[i]);
            return out;
          }};
}

Field int_list(const std::string& key, std::vector<int>& v) {
  return list(key, v, parse_int, [](int x) { return std::to_string(x); });
}

Field double_list(const std::string& key, std::vector<double>& v) {
  return list(
      key, v,
      [](const std::string& s) {
        double d = 0.0;
        number("", d).set(s);
        return d;
      },
      format_double);
}

const std::vector<std::pair<std::string, ProblemKind>> kProblems = {{"case_study", ProblemKind::CaseStudy},
                                                                    {"annulus", ProblemKind::Annulus},
                                                                    {"plane_strain", ProblemKind::PlaneStrain},
                                                                    {"inclusion", ProblemKind::Inclusion}};
const std::vector<std::pair<std::string, SweepKind>> kSweeps = {{"none", SweepKind::None},
                                                                {"parent_mesh", SweepKind::ParentMesh},
                                                                {"child_h", SweepKind::ChildH},
                                                                {"parent_p", SweepKind::ParentP},
                                                                {"complexity", SweepKind::Complexity}};

std::vector<SectionSchema> schema(RunConfig& c) {
  std::vector<SectionSchema> s;
  s.push_back({"problem", {choice("type", c.problem, kProblems)}});
  CaseStudy& cs = c.case_study;
  s.push_back({"case",
               {choice("kernel", cs.id,
                       std::vector<std::pair<std::string, CaseKind>>{{"bi_exponential", CaseKind::BiExponential},
                                                                     {"power_law", CaseKind::PowerLaw}}),
                number("parameter", cs.parameter), number("horizon", cs.horizon), number("length", cs.L),
                integer("parent_elements", cs.parent_elements), number("relative_resolution", cs.relative_resolution),
                integer("order", cs.order)}});
  AnnulusConfig& an = c.annulus;
  s.push_back({"annulus",
               {number("alpha", an.alpha), number("horizon", an.horizon), number("r_in", an.r_in),
                number("r_out", an.r_out), number("traction", an.traction), integer("n_radial", an.n_radial),
                integer("n_angular", an.n_angular), number("relative_resolution", an.relative_resolution)}});
  PlaneStrainConfig& ps = c.plane_strain;
  s.push_back({"plane_strain",
               {number("tau1", ps.tau1), number("tau2", ps.tau2), number("horizon", ps.horizon),
                integer("parent_elements", ps.parent_elements), number("relative_resolution", ps.relative_resolution),
                number("radial_grading", ps.radial_grading), number("body_x", ps.body_force.x()),
                number("body_y", ps.body_force.y())}});
  InclusionConfig& in = c.inclusion;
  s.push_back({"inclusion",
               {number("tau1", in.tau1), number("tau2", in.tau2), number("radius", in.radius),
                number("center_x", in.center.x()), number("center_y", in.center.y()),
                integer("n_angular", in.n_angular), integer("n_disc", in.n_disc), integer("n_matrix", in.n_matrix),
                number("grading", in.grading), boolean("nonlocal", in.nonlocal)}});
  s.push_back({"material",
               {number("mu", c.material.mu), number("lambda", c.material.lambda), number("rho", c.material.rho)}});
  AssemblyOptions& a = c.assembly;
  s.push_back({"quadrature",
               {integer("parent_quad_n", a.parent_quad_n), integer("parent_tri_order", a.parent_tri_order),
                integer("legendre_n", a.child_rule.legendre_n), integer("jacobi_n", a.child_rule.jacobi_n),
                integer("far_singular_n", a.child_rule.far_singular_n),
                integer("triangle_order", a.child_rule.triangle_order), number("child_size", a.child_size),
                boolean("anchor_grids", a.anchor_grids), boolean("lattice_grid", a.child_mesh.lattice_grid),
                integer("facets_per_quarter", a.child_mesh.facets_per_quarter)}});
  SolverOptions& so = c.solver;
  s.push_back({"solver",
               {choice("kind", so.kind,
                       std::vector<std::pair<std::string, SolverKind>>{{"sparse_lu", SolverKind::SparseLU},
                                                                       {"bicgstab", SolverKind::BiCGSTAB}}),
                number("tolerance", so.iterative_tolerance), integer("max_iterations", so.max_iterations),
                number("condition_limit", so.condition_limit), number("residual_limit", so.residual_limit)}});
  SweepConfig& sw = c.sweep;
  ComplexityConfig& cx = sw.complexity;
  s.push_back({"sweep",
               {choice("kind", sw.kind, kSweeps), int_list("levels", sw.levels),
                number("threshold_percent", sw.threshold_percent), int_list("parent_elements", cx.parent_elements),
                number("fixed_resolution", cx.fixed_resolution), double_list("resolutions", cx.resolutions),
                integer("fixed_parent_elements", cx.fixed_parent_elements), integer("repeats", cx.repeats)}});
  s.push_back({"output", {{"dir", [&c](const std::string& v) { c.output_dir = v; }, [&c] { return c.output_dir; }}}});
  s.push_back({"run", {integer("workers", c.workers)}});
  return s;
}

// Sections that only make sense for one problem type.
bool applies(const std::string& section, ProblemKind p) {
  if (section == "case") return p == ProblemKind::CaseStudy;
  if (section == "annulus") return p == ProblemKind::Annulus;
  if (section == "plane_strain") return p == ProblemKind::PlaneStrain;
  if (section == "inclusion") return p == ProblemKind::Inclusion;
  return true;
}

void check_invariants(RunConfig& c) {
  auto guard = [](const std::string& section, const std::function<void()>& f) {
    try {
      f();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("[" + section + "] " + e.what());
    }
  };
  guard("material", [&] { c.material.validate(); });
  c.case_study.material = c.annulus.material = c.plane_strain.material = c.inclusion.material = c.material;
  switch (c.problem) {
    case ProblemKind::CaseStudy: guard("case", [&] { c.case_study.validate(); }); break;
    case ProblemKind::Annulus: guard("annulus", [&] { c.annulus.validate(); }); break;
    case ProblemKind::PlaneStrain: guard("plane_strain", [&] { c.plane_strain.validate(); }); break;
    case ProblemKind::Inclusion: guard("inclusion", [&] { c.inclusion.validate(); }); break;
  }
  guard("quadrature", [&] {
    const AssemblyOptions& a = c.assembly;
    if (a.parent_quad_n < 0 || a.parent_quad_n > 10) throw InvalidArgument("parent_quad_n must lie in [0, 10]");
    if (a.child_rule.legendre_n < 1 || a.child_rule.jacobi_n < 1 || a.child_rule.far_singular_n < 1) {
      throw InvalidArgument("child rules need at least one point");
    }
    if (a.child_size < 0.0) throw InvalidArgument("child_size must be >= 0 (0 derives it from the resolution)");
    if (a.child_mesh.facets_per_quarter < 1) throw InvalidArgument("facets_per_quarter must be >= 1");
  });
  guard("solver", [&] {
    if (!(c.solver.iterative_tolerance > 0.0) || c.solver.max_iterations < 1 || !(c.solver.condition_limit > 1.0)) {
      throw InvalidArgument("solver tolerances must be positive");
    }
  });
  guard("run", [&] {
    if (c.workers < 1) throw InvalidArgument("workers must be >= 1");
  });
  guard("sweep", [&] {
    const SweepConfig& sw = c.sweep;
    if (sw.kind == SweepKind::None) return;
    if (sw.kind == SweepKind::Complexity) {
      if (c.problem != ProblemKind::CaseStudy) throw InvalidArgument("complexity sweeps run the case study");
      if (sw.complexity.repeats < 1) throw InvalidArgument("repeats must be >= 1");
      return;
    }
    if (c.problem != ProblemKind::CaseStudy) throw InvalidArgument("refinement sweeps run the case study");
    if (sw.levels.empty()) throw InvalidArgument("levels must list at least one value");
    if (!std::is_sorted(sw.levels.begin(), sw.levels.end()) ||
        std::adjacent_find(sw.levels.begin(), sw.levels.end()) != sw.levels.end()) {
      throw InvalidArgument("levels must increase strictly");
    }
  });
  c.assembly.workers = c.workers;
  c.sweep.complexity.workers = c.workers;
  c.sweep.complexity.tau = c.case_study.parameter;
  c.sweep.complexity.horizon = c.case_study.horizon;
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text) {
  ConfigDocument doc;
  std::stringstream in(text);
  std::string raw;
  int lineno = 0;
  Section* current = nullptr;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", lineno);
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ParseError("empty section name", lineno);
      if (doc.sections.count(name)) throw ParseError("section [" + name + "] appears twice", lineno);
      current = &doc.sections[name];
      current->line = lineno;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value', got '" + line + "'", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", lineno);
    if (!current) throw ParseError("key '" + key + "' appears before any section", lineno);
    if (current->entries.count(key)) throw ParseError("key '" + key + "' appears twice", lineno);
    current->entries[key] = {value, lineno};
  }
  return doc;
}

RunConfig parse_run_config(const std::string& text) {
  const ConfigDocument doc = ConfigDocument::parse(text);
  RunConfig cfg;
  std::vector<SectionSchema> sch = schema(cfg);
  auto find_section = [&](const std::string& name) -> SectionSchema* {
    for (auto& s : sch) {
      if (s.name == name) return &s;
    }
    return nullptr;
  };
  auto apply = [&](const std::string& name, const ConfigDocument::Section& sec) {
    SectionSchema* s = find_section(name);
    for (const auto& [key, entry] : sec.entries) {
      auto it = std::find_if(s->fields.begin(), s->fields.end(), [&](const Field& f) { return f.key == key; });
      if (it == s->fields.end()) throw ParseError("unknown key '" + key + "' in [" + name + "]", entry.line);
      try {
        it->set(entry.value);
      } catch (const InvalidArgument& e) {
        throw ParseError("[" + name + "] " + key + ": " + e.what(), entry.line);
      }
    }
  };
  for (const auto& [name, sec] : doc.sections) {
    if (!find_section(name)) throw ParseError("unknown section [" + name + "]", sec.line);
  }
  const auto prob = doc.sections.find("problem");
  if (prob == doc.sections.end()) throw ParseError("missing [problem] section", 1);
  apply("problem", prob->second);
  for (const auto& [name, sec] : doc.sections) {
    if (name == "problem") continue;
    if (!applies(name, cfg.problem)) {
      throw ParseError("section [" + name + "] does not apply to problem type " + problem_name(cfg.problem),
                       sec.line);
    }
    apply(name, sec);
  }
  check_invariants(cfg);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string manifest_text(const RunConfig& cfg, const AssemblyOptions* resolved) {
  RunConfig c = cfg;
  if (resolved) {
    c.assembly.parent_quad_n = resolved->parent_quad_n;
    c.assembly.parent_tri_order = resolved->parent_tri_order;
    c.assembly.child_size = resolved->child_size;
  }
  std::string out = "# resolved configuration; every default is spelled out\n";
  for (const SectionSchema& s : schema(c)) {
    if (!applies(s.name, c.problem)) continue;
    out += "\n[" + s.name + "]\n";
    for (const Field& f : s.fields) out += f.key + " = " + f.get() + "\n";
  }
  return out;
}

std::string problem_name(ProblemKind k) {
  for (const auto& [n, e] : kProblems) {
    if (e == k) return n;
  }
  return "?";
}

std::string sweep_name(SweepKind k) {
  for (const auto& [n, e] : kSweeps) {
    if (e == k) return n;
  }
  return "?";
}

}  // namespace nlfem

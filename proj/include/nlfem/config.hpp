#pragma once

#include "nlfem/assembly.hpp"
#include "nlfem/manufactured.hpp"
#include "nlfem/showcase.hpp"
#include "nlfem/solver.hpp"

#include <map>
#include <string>
#include <vector>

namespace nlfem {

/// Sectioned `key = value` text. `#` and `;` start comments.
struct ConfigDocument {
  struct Entry {
    std::string value;
    int line = 0;
  };
  struct Section {
    int line = 0;
    std::map<std::string, Entry> entries;
  };
  std::map<std::string, Section> sections;

  /// Throws ParseError on malformed lines, keys outside a section and repeated keys or sections.
  static ConfigDocument parse(const std::string& text);
};

enum class ProblemKind { CaseStudy, Annulus, PlaneStrain, Inclusion };
enum class SweepKind { None, ParentMesh, ChildH, ParentP, Complexity };

struct SweepConfig {
  SweepKind kind = SweepKind::None;
  /// Parent mesh numbers, child resolutions N or element orders, depending on the kind.
  std::vector<int> levels;
  double threshold_percent = 2.0;
  ComplexityConfig complexity;
};

struct RunConfig {
  ProblemKind problem = ProblemKind::CaseStudy;
  CaseStudy case_study;
  AnnulusConfig annulus;
  PlaneStrainConfig plane_strain;
  InclusionConfig inclusion;
  MaterialModel material;
  AssemblyOptions assembly;
  SolverOptions solver;
  SweepConfig sweep;
  std::string output_dir = "out";
  int workers = 1;
};

/// Parse and validate. Syntax errors and unknown or inapplicable keys raise
/// ParseError naming the line and key; parameter invariants raise
/// InvalidArgument naming the section.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Every setting in config syntax, with automatic assembly choices replaced
/// by `resolved` when given. Parsing the manifest reproduces the run.
std::string manifest_text(const RunConfig& cfg, const AssemblyOptions* resolved = nullptr);

std::string problem_name(ProblemKind k);
std::string sweep_name(SweepKind k);

}  // namespace nlfem

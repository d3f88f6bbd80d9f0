// Command-line front end: run one configured problem or a sweep, writing
// fields, CSV reports and a manifest of the resolved settings.
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 numeric failure,
// 3 child point bridging or kernel alignment failure.

#include "nlfem/config.hpp"
#include "nlfem/io.hpp"
#include "nlfem/manufactured.hpp"
#include "nlfem/showcase.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace nlfem;

namespace {

struct DumpTarget {
  int element = -1;
  int gauss = -1;
};

std::optional<DumpTarget> parse_dump(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("--dump-child-mesh expects element:gauss, got '" + text + "'");
  DumpTarget d;
  try {
    std::size_t u1 = 0, u2 = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    d.element = std::stoi(a, &u1);
    d.gauss = std::stoi(b, &u2);
    if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument("trailing text");
  } catch (const std::exception&) {
    throw InvalidArgument("--dump-child-mesh expects element:gauss, got '" + text + "'");
  }
  if (d.element < 0 || d.gauss < 0) throw InvalidArgument("--dump-child-mesh indices must be >= 0");
  return d;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Context {
  RunConfig cfg;
  fs::path out;
  std::optional<DumpTarget> dump;
};

std::string path_in(const Context& ctx, const std::string& name) { return (ctx.out / name).string(); }

void attach_dump(Context& ctx, AssemblyOptions& opts, const KernelSpec& kernel) {
  if (!ctx.dump) return;
  opts.dump_element = ctx.dump->element;
  opts.dump_gauss = ctx.dump->gauss;
  const std::string path = path_in(ctx, "child_mesh.vtk");
  const ChildRuleOptions rule = opts.child_rule;
  opts.on_child_mesh = [path, kernel, rule](const ChildMesh& cm) {
    write_child_mesh_vtk(path, cm, child_quadrature_points(cm, kernel, rule));
  };
}

void write_manifest(const Context& ctx, const ParentMesh& mesh, const NonlocalModel& model,
                    const AssemblyOptions& opts) {
  const AssemblyOptions resolved = resolved_options(mesh, model, opts);
  write_text_file(path_in(ctx, "manifest.ini"), manifest_text(ctx.cfg, &resolved));
}

const std::vector<std::string> kCaseHeader = {"M_p", "r_pc", "order", "child_size", "ux_bar_x100",
                                              "Er_percent", "dofs", "child_points"};

std::vector<std::string> case_row(const ErrorReport& r) {
  return {std::to_string(r.parent_elements), num(r.relative_resolution), std::to_string(r.order),
          num(r.child_size), num(100.0 * r.peak_ux), num(r.error_percent), std::to_string(r.dofs),
          std::to_string(r.child_points)};
}

std::vector<std::string> timing_row(const std::string& label, const ErrorReport& r) {
  return {label, num(r.assembly_seconds), num(r.solve_seconds)};
}

void export_field(const Context& ctx, const std::string& stem, const ParentMesh& mesh, const SolveResult& field,
                  const std::vector<PointScalar>& extra = {}) {
  write_field_csv(path_in(ctx, stem + ".csv"), mesh.nodes, field);
  write_vtk(path_in(ctx, stem + ".vtk"), mesh, field, extra);
}

void run_case_study(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  CaseRunOptions o{cfg.assembly, cfg.solver};
  attach_dump(ctx, o.assembly, cfg.case_study.kernel());
  const CaseRun run = run_case(cfg.case_study, o);
  AssemblyOptions a = o.assembly;
  if (a.child_size <= 0.0) a.relative_resolution = cfg.case_study.relative_resolution;
  write_manifest(ctx, run.mesh, {cfg.case_study.kernel(), cfg.case_study.horizon_spec()}, a);
  PointScalar ref{"reference_ux", {}};
  for (const Vec2& x : run.mesh.nodes) ref.values.push_back(reference_displacement(x.x(), x.y(), cfg.case_study.L).x());
  export_field(ctx, "field", run.mesh, run.result, {ref});
  write_csv_table(path_in(ctx, "report.csv"), kCaseHeader, {case_row(run.report)});
  write_csv_table(path_in(ctx, "timing.csv"), {"run", "assembly_s", "solve_s"}, {timing_row("case", run.report)});
  std::cout << cfg.case_study.describe() << ": ux_bar x100 = " << num(100.0 * run.report.peak_ux)
            << ", Er = " << num(run.report.error_percent) << "%\n";
}

void run_showcase(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ProblemSetup setup;
  switch (cfg.problem) {
    case ProblemKind::Annulus: setup = annulus_setup(cfg.annulus, cfg.assembly); break;
    case ProblemKind::PlaneStrain: setup = plane_strain_setup(cfg.plane_strain, cfg.assembly); break;
    case ProblemKind::Inclusion: setup = inclusion_setup(cfg.inclusion, cfg.assembly); break;
    case ProblemKind::CaseStudy: return;
  }
  if (!setup.model.local) attach_dump(ctx, setup.assembly, setup.model.kernel);
  write_manifest(ctx, setup.mesh, setup.model, setup.assembly);
  const ShowcaseResult res = solve_setup(setup, cfg.solver);
  export_field(ctx, "field", res.mesh, res.result);
  std::vector<std::string> header = {"problem", "max_ux", "max_ux_x", "max_ux_y", "max_abs_u", "max_abs_u_x",
                                     "max_abs_u_y"};
  std::vector<std::string> row = {problem_name(cfg.problem),   num(res.peaks.max_ux),
                                  num(res.peaks.max_ux_at.x()), num(res.peaks.max_ux_at.y()),
                                  num(res.peaks.max_abs_u),     num(res.peaks.max_abs_u_at.x()),
                                  num(res.peaks.max_abs_u_at.y())};
  if (res.local) {
    export_field(ctx, "local_field", res.mesh, *res.local);
    header.insert(header.end(), {"local_max_ux", "local_max_abs_u"});
    row.insert(row.end(), {num(res.local_peaks->max_ux), num(res.local_peaks->max_abs_u)});
  }
  if (cfg.problem == ProblemKind::Inclusion) {
    const InclusionConfig& ic = cfg.inclusion;
    const WeakDiscontinuityReport wd = detect_weak_discontinuity(res.mesh, res.result, ic.center, 3.0 * ic.radius);
    header.insert(header.end(), {"interface_jump", "background_jump", "far_field_max_jump",
                                 "far_field_max_deviation", "fires_at_interface", "fires_in_far_field"});
    row.insert(row.end(), {num(wd.interface_jump), num(wd.background_jump), num(wd.far_field_max_jump),
                           num(wd.far_field_max_deviation), wd.fires_at_interface ? "1" : "0",
                           wd.fires_in_far_field ? "1" : "0"});
  }
  write_csv_table(path_in(ctx, "report.csv"), header, {row});
  write_csv_table(path_in(ctx, "timing.csv"), {"run", "assembly_s", "solve_s"},
                  {{problem_name(cfg.problem), num(res.stats.seconds), num(res.result.stats.seconds)}});
  std::cout << problem_name(cfg.problem) << ": max|u| = " << num(res.peaks.max_abs_u)
            << ", max u_x = " << num(res.peaks.max_ux);
  if (res.local) std::cout << " (local: " << num(res.local_peaks->max_abs_u) << ", " << num(res.local_peaks->max_ux) << ")";
  std::cout << "\n";
}

void cmd_run(Context& ctx) {
  if (ctx.cfg.problem == ProblemKind::CaseStudy) {
    run_case_study(ctx);
  } else {
    run_showcase(ctx);
  }
}

void cmd_sweep(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const SweepConfig& sw = cfg.sweep;
  if (sw.kind == SweepKind::None) throw InvalidArgument("[sweep] kind must be set for the sweep command");
  CaseRunOptions o{cfg.assembly, cfg.solver};
  {
    AssemblyOptions a = o.assembly;
    if (a.child_size <= 0.0) a.relative_resolution = cfg.case_study.relative_resolution;
    const CaseStudy& cs = cfg.case_study;
    write_manifest(ctx, build_structured_quad_mesh(cs.L, cs.L, cs.parent_elements, cs.parent_elements, cs.order),
                   {cs.kernel(), cs.horizon_spec()}, a);
  }
  std::vector<std::vector<std::string>> rows, timing;
  switch (sw.kind) {
    case SweepKind::ParentMesh: {
      for (int m : sw.levels) {
        CaseStudy cs = cfg.case_study;
        cs.parent_elements = m;
        const CaseRun run = run_case(cs, o);
        rows.push_back(case_row(run.report));
        timing.push_back(timing_row("M=" + std::to_string(m), run.report));
        std::cout << "M=" << m << ": Er = " << num(run.report.error_percent) << "%\n";
      }
      write_csv_table(path_in(ctx, "report.csv"), kCaseHeader, rows);
      break;
    }
    case SweepKind::ChildH:
    case SweepKind::ParentP: {
      const bool h = sw.kind == SweepKind::ChildH;
      const auto table = refinement_sweep(cfg.case_study, h ? RefinementKind::ChildH : RefinementKind::ParentP,
                                          sw.levels, o, sw.threshold_percent);
      for (const RefinementRow& r : table) {
        const ErrorReport& e = r.report;
        rows.push_back({std::to_string(r.level), num(e.child_size), num(100.0 * e.peak_ux), num(e.error_percent),
                        e.delta_percent ? num(*e.delta_percent) : "", r.converged ? "1" : "0"});
        timing.push_back(timing_row((h ? "N=" : "order=") + std::to_string(r.level), e));
        std::cout << (h ? "N=" : "order=") << r.level << ": Delta = "
                  << (e.delta_percent ? num(*e.delta_percent) + "%" : std::string("-")) << "\n";
      }
      write_csv_table(path_in(ctx, "report.csv"),
                      {h ? "N" : "order", "child_size", "ux_bar_x100", "Er_percent", "Delta_percent", "converged"},
                      rows);
      break;
    }
    case SweepKind::Complexity: {
      const ComplexityReport rep = run_complexity(sw.complexity);
      for (const ComplexityRow& r : rep.rows) {
        rows.push_back({std::to_string(r.parent_elements), num(r.relative_resolution), num(r.error_percent),
                        std::to_string(r.child_points), num(r.predicted_sum)});
        timing.push_back({"M=" + std::to_string(r.parent_elements) + " r=" + num(r.relative_resolution),
                          num(r.seconds), num(r.solve_seconds)});
      }
      write_csv_table(path_in(ctx, "report.csv"), {"M_p", "r_pc", "Er_percent", "child_points", "predicted_M_sum"},
                      rows);
      write_csv_table(path_in(ctx, "fits.csv"), {"exponent_M", "exponent_r", "workers"},
                      {{num(rep.exponent_m), num(rep.exponent_r), std::to_string(rep.workers)}});
      std::cout << "time exponents: M " << num(rep.exponent_m) << ", r " << num(rep.exponent_r) << "\n";
      break;
    }
    case SweepKind::None: break;
  }
  write_csv_table(path_in(ctx, "timing.csv"), {"run", "assembly_s", "solve_s"}, timing);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal elasticity FEM with decoupled parent and child meshes"};
  app.require_subcommand(1);
  std::string cfg_path, out_dir, dump_spec;
  int workers = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", cfg_path, "Configuration file")->required();
    sub->add_option("--workers", workers, "Worker threads (overrides [run] workers)")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "Output directory (overrides [output] dir)");
    sub->add_option("--dump-child-mesh", dump_spec, "Write the horizon mesh of parent element:gauss point");
  };
  CLI::App* run = app.add_subcommand("run", "Solve one configured problem");
  CLI::App* sweep = app.add_subcommand("sweep", "Run a refinement or complexity sweep");
  add_common(run);
  add_common(sweep);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Context ctx;
    ctx.cfg = load_run_config(cfg_path);
    if (workers > 0) {
      ctx.cfg.workers = workers;
      ctx.cfg.assembly.workers = workers;
      ctx.cfg.sweep.complexity.workers = workers;
    }
    if (!out_dir.empty()) ctx.cfg.output_dir = out_dir;
    ctx.dump = parse_dump(dump_spec);
    ctx.out = ctx.cfg.output_dir;
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec) throw InvalidArgument("cannot create output directory '" + ctx.out.string() + "': " + ec.message());
    if (run->parsed()) {
      cmd_run(ctx);
    } else {
      cmd_sweep(ctx);
    }
  } catch (const BridgingFailure& e) {
    std::cerr << "bridging error: " << e.what() << " at (" << e.point().x() << ", " << e.point().y()
              << "), nearest parent element " << e.nearest_element() << "\n";
    return 3;
  } catch (const AlignmentViolation& e) {
    std::cerr << "alignment error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << cfg_path << ": " << e.what() << "\n";
    return 1;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

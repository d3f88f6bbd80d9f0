#include "nlfem/assembly.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <set>
#include <thread>

namespace nlfem {

namespace {

// Per-worker accumulation buffers for one parent Gauss point.
struct Scratch {
  std::vector<double> sx, sy;  // sum of kernel-weighted shape-function gradients per node
  std::vector<char> mark;
  std::vector<int> touched;
  std::vector<int> col_of;     // node -> column pair index in the current element block

  explicit Scratch(int num_nodes)
      : sx(num_nodes, 0.0), sy(num_nodes, 0.0), mark(num_nodes, 0), col_of(num_nodes, -1) {}
};

// Accumulate sum_child kw * grad(psi) per parent node; leaves `touched` sorted.
void accumulate_child(const ParentMesh& mesh, const SpatialIndex& index, const Vec2& x,
                      const std::vector<ChildPoint>& child, const KernelSpec& kernel, Scratch& s) {
  for (const auto& cp : child) {
    const double kw = child_kernel_weight(kernel, x, cp);
    if (kw == 0.0) continue;
    const BridgedPoint bp = bridge(index, mesh, cp.x);
    const ParentPointEval pe = eval_parent_point(mesh, bp.parent_element, bp.local_coords);
    const Element& el = mesh.elements[bp.parent_element];
    for (int a = 0; a < pe.shape.n; ++a) {
      const int node = el.nodes[a];
      if (!s.mark[node]) {
        s.mark[node] = 1;
        s.touched.push_back(node);
      }
      s.sx[node] += kw * pe.grad[a].x();
      s.sy[node] += kw * pe.grad[a].y();
    }
  }
  std::sort(s.touched.begin(), s.touched.end());
}

void clear_touched(Scratch& s) {
  for (int node : s.touched) {
    s.sx[node] = s.sy[node] = 0.0;
    s.mark[node] = 0;
  }
  s.touched.clear();
}

// Stress contribution of node columns: E_a = C * S_a with S_a the 3 x 2 strain block.
inline Eigen::Matrix<double, 3, 2> node_stress_block(const Mat3& C, double gx, double gy) {
  Eigen::Matrix<double, 3, 2> S;
  S << gx, 0.0, 0.0, gy, 0.5 * gy, 0.5 * gx;
  return C * S;
}

struct ElementBlock {
  std::vector<int> col_nodes;
  std::vector<double> k;  // column-major, rows = 2m
  Eigen::MatrixXd m;
  long long child_points = 0;
};

Eigen::MatrixXd test_matrix(const ParentPointEval& pe) {
  const int m = pe.shape.n;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 2 * m);
  for (int a = 0; a < m; ++a) {
    B(0, 2 * a) = pe.grad[a].x();
    B(1, 2 * a + 1) = pe.grad[a].y();
    B(2, 2 * a) = pe.grad[a].y();
    B(2, 2 * a + 1) = pe.grad[a].x();
  }
  return B;
}

Eigen::MatrixXd strain_matrix(const ParentPointEval& pe) {
  const int m = pe.shape.n;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 2 * m);
  for (int a = 0; a < m; ++a) {
    B(0, 2 * a) = pe.grad[a].x();
    B(1, 2 * a + 1) = pe.grad[a].y();
    B(2, 2 * a) = 0.5 * pe.grad[a].y();
    B(2, 2 * a + 1) = 0.5 * pe.grad[a].x();
  }
  return B;
}

bool element_is_nonlocal(const NonlocalModel& model, const Element& el) {
  if (model.local) return false;
  return model.nonlocal_region < 0 || el.region == model.nonlocal_region;
}

int column_for(ElementBlock& blk, Scratch& s, int node, int rows) {
  int c = s.col_of[node];
  if (c < 0) {
    c = static_cast<int>(blk.col_nodes.size());
    s.col_of[node] = c;
    blk.col_nodes.push_back(node);
    blk.k.resize(blk.k.size() + 2 * static_cast<std::size_t>(rows), 0.0);
  }
  return c;
}

void build_element(const ParentMesh& mesh, const SpatialIndex& index, const NonlocalModel& model,
                   const MaterialModel& material, const AssemblyOptions& opts, double child_size, int e,
                   Scratch& s, ElementBlock& blk) {
  const Element& el = mesh.elements[e];
  const int m = node_count(el.shape);
  const int rows = 2 * m;
  const Mat3 C = material.voigt();
  const QuadratureRule& rule = parent_rule(el.shape, opts);
  const bool nonlocal = element_is_nonlocal(model, el);
  blk.m = Eigen::MatrixXd::Zero(rows, rows);
  for (std::size_t g = 0; g < rule.size(); ++g) {
    const ParentPointEval pe = eval_parent_point(mesh, e, rule.points[g]);
    const double wj = rule.weights[g] * pe.detj;
    const Vec2 x = forward_map(mesh, e, rule.points[g]);
    const Eigen::MatrixXd Bt = test_matrix(pe);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        const double v = material.rho * wj * pe.shape.N[a] * pe.shape.N[b];
        blk.m(2 * a, 2 * b) += v;
        blk.m(2 * a + 1, 2 * b + 1) += v;
      }
    }
    if (!nonlocal) {
      const Eigen::MatrixXd Kl = wj * Bt.transpose() * C * strain_matrix(pe);
      for (int b = 0; b < m; ++b) {
        const int c = column_for(blk, s, el.nodes[b], rows);
        for (int r = 0; r < rows; ++r) {
          blk.k[(2 * c) * rows + r] += Kl(r, 2 * b);
          blk.k[(2 * c + 1) * rows + r] += Kl(r, 2 * b + 1);
        }
      }
      continue;
    }
    std::vector<ChildPoint> child;
    try {
      ChildMesh cm;
      const bool dump = opts.on_child_mesh && e == opts.dump_element && static_cast<int>(g) == opts.dump_gauss;
      child = horizon_points(mesh, model, x, child_size, opts, dump ? &cm : nullptr);
      if (dump) {
        cm.owner_element = e;
        cm.owner_gauss = static_cast<int>(g);
        opts.on_child_mesh(cm);
      }
      blk.child_points += static_cast<long long>(child.size());
      accumulate_child(mesh, index, x, child, model.kernel, s);
    } catch (const BridgingFailure& err) {
      clear_touched(s);
      throw BridgingFailure(std::string(err.what()) + " (parent element " + std::to_string(e) + ", Gauss point " +
                                std::to_string(g) + ")",
                            err.point(), err.nearest_element());
    } catch (const AlignmentViolation& err) {
      clear_touched(s);
      throw AlignmentViolation(std::string(err.what()) + " (parent element " + std::to_string(e) +
                               ", Gauss point " + std::to_string(g) + ")");
    }
    // Fixed-size copy of w|J| B^T so the per-node product allocates nothing.
    double bt[18][3];
    for (int r = 0; r < rows; ++r) {
      for (int k = 0; k < 3; ++k) bt[r][k] = wj * Bt(k, r);
    }
    for (int node : s.touched) {
      const Eigen::Matrix<double, 3, 2> E = node_stress_block(C, s.sx[node], s.sy[node]);
      const int c = column_for(blk, s, node, rows);
      double* k0 = &blk.k[static_cast<std::size_t>(2 * c) * rows];
      double* k1 = k0 + rows;
      for (int r = 0; r < rows; ++r) {
        k0[r] += bt[r][0] * E(0, 0) + bt[r][1] * E(1, 0) + bt[r][2] * E(2, 0);
        k1[r] += bt[r][0] * E(0, 1) + bt[r][1] * E(1, 1) + bt[r][2] * E(2, 1);
      }
    }
    clear_touched(s);
  }
  for (int node : blk.col_nodes) s.col_of[node] = -1;
}

}  // namespace

void MaterialModel::validate() const {
  if (!(mu > 0.0) || !(lambda >= 0.0) || !(rho >= 0.0)) {
    throw InvalidArgument("material needs mu > 0, lambda >= 0, rho >= 0");
  }
}

Mat3 MaterialModel::voigt() const {
  Mat3 C;
  C << 2.0 * mu + lambda, lambda, 0.0, lambda, 2.0 * mu + lambda, 0.0, 0.0, 0.0, 2.0 * mu;
  return C;
}

const QuadratureRule& parent_rule(ElementShape shape, const AssemblyOptions& opts) {
  if (!is_quad(shape)) return cached_triangle_rule(opts.parent_tri_order);
  const int n = opts.parent_quad_n > 0 ? opts.parent_quad_n : shape_order(shape) + 1;
  thread_local std::map<int, QuadratureRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, tensor_rule(gauss_legendre(n))).first;
  return it->second;
}

ParentPointEval eval_parent_point(const ParentMesh& mesh, int elem, const Vec2& xi) {
  const Element& el = mesh.elements[elem];
  ParentPointEval pe;
  pe.shape = shape_functions(el.shape, xi);
  const ShapeEval g = geometry_functions(el.shape, xi);
  Mat2 J = Mat2::Zero();
  for (int a = 0; a < g.n; ++a) J += mesh.nodes[el.nodes[a]] * g.dN[a].transpose();
  pe.detj = J.determinant();
  const Mat2 Jit = J.inverse().transpose();
  for (int a = 0; a < pe.shape.n; ++a) pe.grad[a] = Jit * pe.shape.dN[a];
  return pe;
}

Eigen::MatrixXd strain_operator(const ParentMesh& mesh, int elem, const Vec2& xi) {
  return strain_matrix(eval_parent_point(mesh, elem, xi));
}

Eigen::MatrixXd test_gradient_operator(const ParentMesh& mesh, int elem, const Vec2& xi) {
  return test_matrix(eval_parent_point(mesh, elem, xi));
}

double child_kernel_weight(const KernelSpec& kernel, const Vec2& x, const ChildPoint& cp) {
  switch (kernel.kind) {
    case KernelKind::PowerLaw:
      return singular_smooth_part(kernel) * cp.w;
    case KernelKind::BidirectionalPowerLaw:
      return 0.5 * singular_smooth_part(kernel) * cp.w;
    default:
      return kernel_eval(kernel, x, cp.x) * cp.w;
  }
}

StressOperator nonlocal_stress_operator(const ParentMesh& mesh, const SpatialIndex& index, const Vec2& x,
                                        const std::vector<ChildPoint>& child, const KernelSpec& kernel,
                                        const MaterialModel& material) {
  Scratch s(mesh.num_nodes());
  accumulate_child(mesh, index, x, child, kernel, s);
  StressOperator op;
  op.nodes = s.touched;
  op.E = Eigen::MatrixXd::Zero(3, 2 * static_cast<Eigen::Index>(op.nodes.size()));
  const Mat3 C = material.voigt();
  for (std::size_t k = 0; k < op.nodes.size(); ++k) {
    const int node = op.nodes[k];
    op.E.middleCols(2 * static_cast<Eigen::Index>(k), 2) = node_stress_block(C, s.sx[node], s.sy[node]);
  }
  return op;
}

double child_size_for(const ParentMesh& mesh, const AssemblyOptions& opts) {
  if (opts.child_size > 0.0) return opts.child_size;
  if (!(opts.relative_resolution > 0.0)) throw InvalidArgument("relative resolution must be positive");
  return mean_element_size(mesh) / opts.relative_resolution;
}

std::vector<ChildPoint> horizon_points(const ParentMesh& mesh, const NonlocalModel& model, const Vec2& x,
                                       double child_size, const AssemblyOptions& opts, ChildMesh* mesh_out) {
  const TruncatedRegion reg = horizon_geometry(model.horizon, x, mesh);
  std::optional<Vec2> anchor;
  if (model.kernel.singular() || opts.anchor_grids) anchor = x;
  ChildMeshOptions mopt = opts.child_mesh;
  // On box domains the child lattice starts at the box corner, so at unit
  // relative resolution it coincides with a structured parent grid.
  if (mopt.lattice_grid && mesh.domain.kind == DomainDescriptor::Kind::Box) mopt.lattice_origin = mesh.domain.lo;
  ChildMesh cm = mesh_child(reg, anchor, child_size, mopt, x);
  if (model.kernel.singular()) cm.singular_point = x;
  auto pts = child_quadrature_points(cm, model.kernel, opts.child_rule);
  if (mesh_out) *mesh_out = std::move(cm);
  return pts;
}

void parallel_for(int n, int workers, const std::function<void(int)>& f) {
  parallel_for_workers(n, workers, [&f](int i, int) { f(i); });
}

void parallel_for_workers(int n, int workers, const std::function<void(int, int)>& f) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto work = [&](int w) {
    for (int i = next++; i < n; i = next++) {
      try {
        f(i, w);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nt = std::max(1, std::min(workers, n));
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

AssemblyOptions resolved_options(const ParentMesh& mesh, const NonlocalModel& model, AssemblyOptions opts) {
  if (opts.parent_quad_n <= 0) {
    int order = 1;
    for (const auto& el : mesh.elements) order = std::max(order, shape_order(el.shape));
    opts.parent_quad_n = order + 1;
    // Singular kernels stay large at the horizon edge, so the nonlocal stress
    // kinks inside elements where the horizon starts to be truncated.
    if (!model.local && model.kernel.singular()) opts.parent_quad_n = std::max(opts.parent_quad_n, 4);
  }
  if (opts.child_size <= 0.0) opts.child_size = child_size_for(mesh, opts);
  return opts;
}

GlobalSystem assemble_operator(const ParentMesh& mesh, const NonlocalModel& model, const MaterialModel& material,
                               const AssemblyOptions& user_opts) {
  const AssemblyOptions opts = resolved_options(mesh, model, user_opts);
  material.validate();
  if (!model.local) {
    model.kernel.validate();
    model.horizon.validate();
  }
  const auto t0 = std::chrono::steady_clock::now();
  const SpatialIndex index(mesh);
  const double child_size = child_size_for(mesh, opts);
  const int ne = mesh.num_elements();
  const int nn = mesh.num_nodes();
  std::vector<ElementBlock> blocks(ne);
  const int workers = std::max(1, opts.workers);
  std::vector<std::unique_ptr<Scratch>> scratch(workers);
  parallel_for_workers(ne, workers, [&](int e, int w) {
    if (!scratch[w]) scratch[w] = std::make_unique<Scratch>(nn);
    build_element(mesh, index, model, material, opts, child_size, e, *scratch[w], blocks[e]);
  });

  GlobalSystem sys;
  sys.num_nodes = nn;
  const int ndof = 2 * nn;
  std::size_t nk = 0, nm = 0;
  for (const auto& b : blocks) {
    nk += b.k.size();
    nm += static_cast<std::size_t>(b.m.size());
  }
  std::vector<Eigen::Triplet<double>> tk, tm;
  tk.reserve(nk);
  tm.reserve(nm);
  for (int e = 0; e < ne; ++e) {
    const Element& el = mesh.elements[e];
    const ElementBlock& b = blocks[e];
    const int m = node_count(el.shape);
    const int rows = 2 * m;
    for (std::size_t c = 0; c < b.col_nodes.size(); ++c) {
      for (int d = 0; d < 2; ++d) {
        const int col = 2 * b.col_nodes[c] + d;
        for (int r = 0; r < rows; ++r) {
          const double v = b.k[(2 * c + d) * rows + r];
          if (v != 0.0) tk.emplace_back(2 * el.nodes[r / 2] + r % 2, col, v);
        }
      }
    }
    for (int c = 0; c < rows; ++c) {
      for (int r = 0; r < rows; ++r) {
        const double v = b.m(r, c);
        if (v != 0.0) tm.emplace_back(2 * el.nodes[r / 2] + r % 2, 2 * el.nodes[c / 2] + c % 2, v);
      }
    }
    sys.stats.child_points += b.child_points;
    sys.stats.parent_points += static_cast<long long>(parent_rule(el.shape, opts).size());
  }
  sys.K.resize(ndof, ndof);
  sys.K.setFromTriplets(tk.begin(), tk.end());
  sys.M.resize(ndof, ndof);
  sys.M.setFromTriplets(tm.begin(), tm.end());
  sys.F = Eigen::VectorXd::Zero(ndof);
  sys.stats.child_size = child_size;
  sys.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sys;
}

Eigen::VectorXd assemble_force(const ParentMesh& mesh, const Loads& loads, const AssemblyOptions& opts) {
  const int ne = mesh.num_elements();
  Eigen::VectorXd F = Eigen::VectorXd::Zero(2 * mesh.num_nodes());
  if (loads.body) {
    std::vector<Eigen::VectorXd> fe(ne);
    parallel_for(ne, std::max(1, opts.workers), [&](int e) {
      const Element& el = mesh.elements[e];
      const QuadratureRule& rule = parent_rule(el.shape, opts);
      const int m = node_count(el.shape);
      fe[e] = Eigen::VectorXd::Zero(2 * m);
      for (std::size_t g = 0; g < rule.size(); ++g) {
        const ParentPointEval pe = eval_parent_point(mesh, e, rule.points[g]);
        const Vec2 f = loads.body(forward_map(mesh, e, rule.points[g]));
        const double wj = rule.weights[g] * pe.detj;
        for (int a = 0; a < m; ++a) {
          fe[e](2 * a) += wj * pe.shape.N[a] * f.x();
          fe[e](2 * a + 1) += wj * pe.shape.N[a] * f.y();
        }
      }
    });
    for (int e = 0; e < ne; ++e) {
      const Element& el = mesh.elements[e];
      for (int a = 0; a < node_count(el.shape); ++a) {
        F(2 * el.nodes[a]) += fe[e](2 * a);
        F(2 * el.nodes[a] + 1) += fe[e](2 * a + 1);
      }
    }
  }
  if (loads.traction) {
    const QuadratureRule& q = cached_gauss_legendre(3);
    for (const auto& seg : mesh.boundary) {
      if (seg.kind != BoundaryKind::Traction) continue;
      const Vec2& a = mesh.nodes[seg.nodes[0]];
      const Vec2& b = mesh.nodes[seg.nodes[1]];
      const double half = 0.5 * (b - a).norm();
      for (std::size_t i = 0; i < q.size(); ++i) {
        const double t = q.nodes[i];
        const Vec2 x = 0.5 * (1.0 - t) * a + 0.5 * (1.0 + t) * b;
        const Vec2 tr = loads.traction(x, seg.normal);
        double N[3];
        int cnt = 2;
        if (seg.nodes.size() == 3) {
          N[0] = 0.5 * t * (t - 1.0);
          N[1] = 0.5 * t * (t + 1.0);
          N[2] = 1.0 - t * t;
          cnt = 3;
        } else {
          N[0] = 0.5 * (1.0 - t);
          N[1] = 0.5 * (1.0 + t);
        }
        for (int k = 0; k < cnt; ++k) {
          F(2 * seg.nodes[k]) += q.weights[i] * half * N[k] * tr.x();
          F(2 * seg.nodes[k] + 1) += q.weights[i] * half * N[k] * tr.y();
        }
      }
    }
  }
  return F;
}

std::vector<std::pair<int, double>> dirichlet_dofs(const ParentMesh& mesh, const Loads& loads) {
  std::set<int> nodes;
  for (const auto& seg : mesh.boundary) {
    if (seg.kind == BoundaryKind::Dirichlet) nodes.insert(seg.nodes.begin(), seg.nodes.end());
  }
  std::vector<std::pair<int, double>> out;
  for (int n : nodes) {
    const Vec2 v = loads.prescribed ? loads.prescribed(mesh.nodes[n]) : Vec2::Zero();
    out.emplace_back(2 * n, v.x());
    out.emplace_back(2 * n + 1, v.y());
  }
  return out;
}

GlobalSystem assemble(const ParentMesh& mesh, const NonlocalModel& model, const MaterialModel& material,
                      const Loads& loads, const AssemblyOptions& opts) {
  GlobalSystem sys = assemble_operator(mesh, model, material, opts);
  sys.F = assemble_force(mesh, loads, resolved_options(mesh, model, opts));
  sys.dirichlet = dirichlet_dofs(mesh, loads);
  return sys;
}

}  // namespace nlfem

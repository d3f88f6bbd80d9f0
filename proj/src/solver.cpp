#include "nlfem/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

namespace nlfem {

namespace {

// Lower bound on ||A^{-1}||_2 from a few inverse power steps through the
// factorization. Cheap and good enough to catch rank deficiency.
template <typename Solver>
double inverse_norm_estimate(const Solver& lu, int n) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.3 * i + 0.7);
  x.normalize();
  double est = 0.0;
  for (int it = 0; it < 6; ++it) {
    Eigen::VectorXd y = lu.solve(x);
    if (!y.allFinite()) return std::numeric_limits<double>::infinity();
    const double ny = y.norm();
    if (!(ny > 0.0)) break;
    est = std::max(est, ny);
    x = y / ny;
  }
  return est;
}

double norm_two_estimate(const SparseMatrix& A) {
  // ||A||_2 <= sqrt(||A||_1 ||A||_inf); the geometric mean is a tight enough proxy here.
  Eigen::VectorXd col = Eigen::VectorXd::Zero(A.cols()), row = Eigen::VectorXd::Zero(A.rows());
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      col[it.col()] += std::abs(it.value());
      row[it.row()] += std::abs(it.value());
    }
  }
  return std::sqrt(col.maxCoeff() * row.maxCoeff());
}

}  // namespace

SolveResult solve_static(const GlobalSystem& sys, const SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const int ndof = 2 * sys.num_nodes;
  if (sys.K.rows() != ndof || sys.K.cols() != ndof || sys.F.size() != ndof) {
    throw InvalidArgument("global system dimensions do not match its node count");
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(ndof);
  std::vector<int> free_of(ndof, 0);
  for (const auto& [dof, value] : sys.dirichlet) {
    free_of[dof] = -1;
    u[dof] = value;
  }
  std::vector<int> free_dofs;
  for (int d = 0; d < ndof; ++d) {
    if (free_of[d] == 0) {
      free_of[d] = static_cast<int>(free_dofs.size());
      free_dofs.push_back(d);
    }
  }
  const int nf = static_cast<int>(free_dofs.size());

  SolveResult res;
  res.stats.free_dofs = nf;
  if (nf > 0) {
    // Lift prescribed values into the right-hand side and keep the free block.
    const Eigen::VectorXd lifted = sys.F - sys.K * u;
    Eigen::VectorXd rhs(nf);
    for (int i = 0; i < nf; ++i) rhs[i] = lifted[free_dofs[i]];
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(sys.K.nonZeros()));
    for (int k = 0; k < sys.K.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(sys.K, k); it; ++it) {
        const int r = free_of[it.row()], c = free_of[it.col()];
        if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
      }
    }
    SparseMatrix Kf(nf, nf);
    Kf.setFromTriplets(trip.begin(), trip.end());
    Kf.makeCompressed();

    Eigen::VectorXd uf;
    const double knorm = norm_two_estimate(Kf);
    if (opts.kind == SolverKind::SparseLU) {
      Eigen::SparseLU<SparseMatrix> lu;
      lu.analyzePattern(Kf);
      lu.factorize(Kf);
      if (lu.info() != Eigen::Success) {
        throw NumericError("sparse factorization failed (singular stiffness); check the Dirichlet conditions");
      }
      res.stats.factorized = true;
      res.stats.condition_estimate = knorm * inverse_norm_estimate(lu, nf);
      if (!(res.stats.condition_estimate < opts.condition_limit)) {
        std::ostringstream msg;
        msg << "stiffness is ill-conditioned (estimate " << res.stats.condition_estimate
            << "); check the Dirichlet conditions";
        throw NumericError(msg.str());
      }
      uf = lu.solve(rhs);
    } else {
      Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double>> it;
      it.setTolerance(opts.iterative_tolerance);
      it.setMaxIterations(opts.max_iterations);
      it.compute(Kf);
      if (it.info() != Eigen::Success) throw NumericError("preconditioner setup failed");
      uf = it.solve(rhs);
      res.stats.iterations = static_cast<int>(it.iterations());
      if (it.info() != Eigen::Success) {
        throw NumericError("iterative solver did not converge after " + std::to_string(it.iterations()) +
                           " iterations; check the Dirichlet conditions");
      }
    }
    if (!uf.allFinite()) throw NumericError("solution contains non-finite values");
    const double rn = rhs.norm();
    res.residual_norm = rn > 0.0 ? (Kf * uf - rhs).norm() / rn : (Kf * uf - rhs).norm();
    if (!(res.residual_norm < opts.residual_limit)) {
      std::ostringstream msg;
      msg << "relative residual " << res.residual_norm << " exceeds " << opts.residual_limit;
      throw NumericError(msg.str());
    }
    for (int i = 0; i < nf; ++i) u[free_dofs[i]] = uf[i];
  }
  res.displacements.resize(sys.num_nodes);
  for (int n = 0; n < sys.num_nodes; ++n) res.displacements[n] = Vec2(u[2 * n], u[2 * n + 1]);
  res.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

SolveResult solve_local_reference(const ParentMesh& mesh, const MaterialModel& material, const Loads& loads,
                                  const AssemblyOptions& assembly, const SolverOptions& opts) {
  NonlocalModel model;
  model.local = true;
  return solve_static(assemble(mesh, model, material, loads, assembly), opts);
}

FieldMetrics field_peaks(const SolveResult& a, const std::vector<Vec2>& nodes) {
  if (a.displacements.size() != nodes.size()) throw InvalidArgument("field and node list sizes differ");
  FieldMetrics m;
  m.max_ux = -std::numeric_limits<double>::infinity();
  m.max_abs_u = -1.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Vec2& u = a.displacements[i];
    if (u.x() > m.max_ux) {
      m.max_ux = u.x();
      m.max_ux_at = nodes[i];
    }
    if (u.norm() > m.max_abs_u) {
      m.max_abs_u = u.norm();
      m.max_abs_u_at = nodes[i];
    }
  }
  return m;
}

FieldMetrics field_metrics(const SolveResult& a, const SolveResult& b, const std::vector<Vec2>& nodes) {
  if (a.displacements.size() != b.displacements.size()) {
    throw InvalidArgument("field layouts differ: " + std::to_string(a.displacements.size()) + " vs " +
                          std::to_string(b.displacements.size()) + " nodes");
  }
  FieldMetrics m = field_peaks(a, nodes);
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < a.displacements.size(); ++i) {
    diff += (a.displacements[i] - b.displacements[i]).squaredNorm();
    ref += b.displacements[i].squaredNorm();
  }
  if (!(ref > 0.0)) throw InvalidArgument("reference field is identically zero");
  m.delta_percent = 100.0 * std::sqrt(diff / ref);
  return m;
}

SolveResult restrict_to_nodes(const SolveResult& field, const std::vector<Vec2>& from_nodes,
                              const std::vector<Vec2>& to_nodes, double tol) {
  if (field.displacements.size() != from_nodes.size()) throw InvalidArgument("field and node list sizes differ");
  // Bucket the source nodes on a grid of spacing tol so the lookup is exact up to tol.
  const double cell = std::max(tol, 1e-14) * 4.0;
  std::map<std::pair<long long, long long>, std::vector<int>> buckets;
  auto key = [cell](const Vec2& p) {
    return std::make_pair(static_cast<long long>(std::floor(p.x() / cell)),
                          static_cast<long long>(std::floor(p.y() / cell)));
  };
  for (std::size_t i = 0; i < from_nodes.size(); ++i) buckets[key(from_nodes[i])].push_back(static_cast<int>(i));
  SolveResult out = field;
  out.displacements.assign(to_nodes.size(), Vec2::Zero());
  for (std::size_t j = 0; j < to_nodes.size(); ++j) {
    const auto [kx, ky] = key(to_nodes[j]);
    int hit = -1;
    for (long long dx = -1; dx <= 1 && hit < 0; ++dx) {
      for (long long dy = -1; dy <= 1 && hit < 0; ++dy) {
        auto it = buckets.find({kx + dx, ky + dy});
        if (it == buckets.end()) continue;
        for (int i : it->second) {
          if ((from_nodes[i] - to_nodes[j]).norm() <= tol) {
            hit = i;
            break;
          }
        }
      }
    }
    if (hit < 0) throw InvalidArgument("node " + std::to_string(j) + " has no counterpart in the source mesh");
    out.displacements[j] = field.displacements[hit];
  }
  return out;
}

}  // namespace nlfem

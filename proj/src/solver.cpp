#include "capdens/solver.hpp"

#include <algorithm>
#include <cmath>

#include "capdens/distance.hpp"
#include "capdens/errors.hpp"
#include "capdens/kernels.hpp"

namespace capdens {

void SolverConfig::validate() const {
  if (!(p > 1.0) || !std::isfinite(p))
    fail(ErrorKind::config, "invalid-solver-config", "exponent p must satisfy p > 1");
  if (!(tol > 0.0)) fail(ErrorKind::config, "invalid-solver-config", "tol must be positive");
  if (max_iter <= 0) fail(ErrorKind::config, "invalid-solver-config", "max_iter must be positive");
  if (!(eps0 > 0.0) || !(eps_floor > 0.0) || eps_floor > eps0)
    fail(ErrorKind::config, "invalid-solver-config",
         "smoothing schedule needs eps0 >= eps_floor > 0");
}

std::vector<GradTerm> gradient_terms(const MetricGraph& g) {
  // Axis contribution to |grad u|_i^2: the mean of the squared forward and
  // backward differences. Second-order accurate and isotropic like the
  // centered difference, but without its odd/even decoupling: a pure centered
  // form leaves the parity sublattices uncoupled, and energy minimizers
  // exploit that null space (a 1d single-node condenser then reads half its
  // capacity at every h). One-sided where a neighbor is missing.
  std::vector<GradTerm> terms;
  terms.reserve(static_cast<std::size_t>(g.node_count()) * g.dim * 2);
  std::vector<int> idx(g.dim), nidx(g.dim);
  const double inv_h = 1.0 / g.h;
  const double inv_h_half = 1.0 / (g.h * std::sqrt(2.0));
  for (int32_t v = 0; v < g.node_count(); ++v) {
    g.lattice_coords(g.node_cell[v], idx);
    for (int d = 0; d < g.dim; ++d) {
      for (int a = 0; a < g.dim; ++a) nidx[a] = idx[a];
      nidx[d] += 1;
      const int32_t fwd = g.node_at(nidx);
      nidx[d] -= 2;
      const int32_t bwd = g.node_at(nidx);
      if (fwd >= 0 && bwd >= 0) {
        terms.push_back({v, fwd, v, inv_h_half});
        terms.push_back({v, v, bwd, inv_h_half});
      } else if (fwd >= 0) {
        terms.push_back({v, fwd, v, inv_h});
      } else if (bwd >= 0) {
        terms.push_back({v, v, bwd, inv_h});
      }
    }
  }
  return terms;
}

std::vector<double> gradient_sq(const MetricGraph& g, const std::vector<GradTerm>& terms,
                                std::span<const double> u) {
  std::vector<double> g2(g.node_count(), 0.0);
  for (const auto& t : terms) {
    const double diff = (u[t.a] - u[t.b]) * t.inv_scale;
    g2[t.node] += diff * diff;
  }
  return g2;
}

double dirichlet_energy(const MetricGraph& g, std::span<const double> u, double p) {
  for (double x : u) {
    if (!std::isfinite(x))
      fail(ErrorKind::numeric, "invalid-field", "field has NaN or infinite entries");
  }
  const auto terms = gradient_terms(g);
  const auto g2 = gradient_sq(g, terms, u);
  double e = 0.0;
  const double half_p = 0.5 * p;
  for (int32_t v = 0; v < g.node_count(); ++v) {
    if (g2[v] > 0.0) e += g.measure[v] * std::pow(g2[v], half_p);
  }
  return e;
}

namespace {

struct Csr {
  std::vector<int32_t> row_ptr;
  std::vector<int32_t> cols;   // sorted within each row
  std::vector<double> vals;
  std::vector<int32_t> diag;   // position of the diagonal entry per row

  int32_t find(int32_t row, int32_t col) const {
    const int32_t lo = row_ptr[row], hi = row_ptr[row + 1];
    const auto it = std::lower_bound(cols.begin() + lo, cols.begin() + hi, col);
    return static_cast<int32_t>(it - cols.begin());
  }
};

// Symmetric Gauss-Seidel preconditioner: z = (D+L)^-1 D (D+U)^-1 r applied as
// two triangular sweeps. Sequential by construction, hence deterministic.
void sgs_apply(const Csr& A, const double* r, double* z, double* tmp) {
  const int32_t n = static_cast<int32_t>(A.row_ptr.size()) - 1;
  for (int32_t i = 0; i < n; ++i) {
    double s = r[i];
    const int32_t d = A.diag[i];
    for (int32_t k = A.row_ptr[i]; k < d; ++k) s -= A.vals[k] * tmp[A.cols[k]];
    tmp[i] = s / A.vals[d];
  }
  for (int32_t i = n - 1; i >= 0; --i) {
    const int32_t d = A.diag[i];
    double s = A.vals[d] * tmp[i];
    for (int32_t k = d + 1; k < A.row_ptr[i + 1]; ++k) s -= A.vals[k] * z[A.cols[k]];
    z[i] = s / A.vals[d];
  }
}

struct PcgStats {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = true;
};

PcgStats pcg(const Csr& A, const std::vector<double>& b, std::vector<double>& x, double rtol,
             int max_iter) {
  const std::size_t n = b.size();
  const auto& K = kern::active();
  std::vector<double> r(n), z(n), p(n), ap(n), tmp(n);

  K.csr_matvec(A.row_ptr.data(), A.cols.data(), A.vals.data(), n, x.data(), ap.data());
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];

  const double bnorm = std::sqrt(std::max(K.dot(b.data(), b.data(), n), 1e-300));
  double rnorm = std::sqrt(K.dot(r.data(), r.data(), n));
  PcgStats st;
  if (rnorm <= rtol * bnorm) {
    st.rel_residual = rnorm / bnorm;
    return st;
  }

  sgs_apply(A, r.data(), z.data(), tmp.data());
  p = z;
  double rz = K.dot(r.data(), z.data(), n);

  for (int it = 0; it < max_iter; ++it) {
    K.csr_matvec(A.row_ptr.data(), A.cols.data(), A.vals.data(), n, p.data(), ap.data());
    const double pap = K.dot(p.data(), ap.data(), n);
    if (!(pap > 0.0)) break;  // matrix numerically singular along p
    const double alpha = rz / pap;
    K.axpy(alpha, p.data(), x.data(), n);
    K.axpy(-alpha, ap.data(), r.data(), n);
    rnorm = std::sqrt(K.dot(r.data(), r.data(), n));
    st.iterations = it + 1;
    if (rnorm <= rtol * bnorm) {
      st.rel_residual = rnorm / bnorm;
      return st;
    }
    sgs_apply(A, r.data(), z.data(), tmp.data());
    const double rz_next = K.dot(r.data(), z.data(), n);
    K.xpby(z.data(), rz_next / rz, p.data(), n);
    rz = rz_next;
  }
  st.rel_residual = rnorm / bnorm;
  st.converged = false;
  return st;
}

struct Condenser {
  std::vector<int32_t> free_id;    // node -> free index or -1
  std::vector<int32_t> free_node;  // free index -> node
  std::vector<double> fixed;       // full field with fixed values (free entries 0)
};

// Quadratic form assembly for the reweighted problem:
// sum_t w[t.node] ((u[a]-u[b]) inv_scale)^2 (+ mass u_i^2), free unknowns only.
struct Assembler {
  const MetricGraph& g;
  const std::vector<GradTerm>& terms;
  const Condenser& c;
  Csr A;

  Assembler(const MetricGraph& g_, const std::vector<GradTerm>& terms_, const Condenser& c_)
      : g(g_), terms(terms_), c(c_) {
    const int32_t nf = static_cast<int32_t>(c.free_node.size());
    std::vector<std::vector<int32_t>> cols(nf);
    for (int32_t i = 0; i < nf; ++i) cols[i].push_back(i);
    for (const auto& t : terms) {
      const int32_t fa = c.free_id[t.a], fb = c.free_id[t.b];
      if (fa >= 0 && fb >= 0 && fa != fb) {
        cols[fa].push_back(fb);
        cols[fb].push_back(fa);
      }
    }
    A.row_ptr.assign(nf + 1, 0);
    for (int32_t i = 0; i < nf; ++i) {
      auto& r = cols[i];
      std::sort(r.begin(), r.end());
      r.erase(std::unique(r.begin(), r.end()), r.end());
      A.row_ptr[i + 1] = A.row_ptr[i] + static_cast<int32_t>(r.size());
    }
    A.cols.resize(A.row_ptr[nf]);
    A.diag.resize(nf);
    for (int32_t i = 0; i < nf; ++i) {
      std::copy(cols[i].begin(), cols[i].end(), A.cols.begin() + A.row_ptr[i]);
      A.diag[i] = A.find(i, i);
    }
    A.vals.resize(A.cols.size());
  }

  void fill(const std::vector<double>& weight, const std::vector<double>* mass,
            std::vector<double>& rhs) {
    const int32_t nf = static_cast<int32_t>(c.free_node.size());
    std::fill(A.vals.begin(), A.vals.end(), 0.0);
    rhs.assign(nf, 0.0);
    for (const auto& t : terms) {
      const double coef = weight[t.node] * t.inv_scale * t.inv_scale;
      if (coef == 0.0) continue;
      const int32_t fa = c.free_id[t.a], fb = c.free_id[t.b];
      if (fa >= 0 && fb >= 0) {
        if (fa == fb) continue;  // degenerate pair, no contribution to the form
        A.vals[A.diag[fa]] += coef;
        A.vals[A.diag[fb]] += coef;
        A.vals[A.find(fa, fb)] -= coef;
        A.vals[A.find(fb, fa)] -= coef;
      } else if (fa >= 0) {
        A.vals[A.diag[fa]] += coef;
        rhs[fa] += coef * c.fixed[t.b];
      } else if (fb >= 0) {
        A.vals[A.diag[fb]] += coef;
        rhs[fb] += coef * c.fixed[t.a];
      }
    }
    if (mass != nullptr) {
      for (int32_t i = 0; i < nf; ++i) A.vals[A.diag[i]] += (*mass)[c.free_node[i]];
    }
    for (int32_t i = 0; i < nf; ++i) {
      if (A.vals[A.diag[i]] == 0.0) {  // node untouched by any term: pin to 0
        A.vals[A.diag[i]] = 1.0;
        rhs[i] = 0.0;
      }
    }
  }
};

struct IrlsResult {
  std::vector<double> u;  // full field, clamped to [0,1]
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> energy_trace;
  std::vector<std::string> warnings;
};

// Smoothed objective used for monotone acceptance.
double smoothed_energy(const MetricGraph& g, const std::vector<GradTerm>& terms,
                       const std::vector<double>& u, double p, double eps, bool with_mass) {
  const auto g2 = gradient_sq(g, terms, u);
  const double e2 = eps * eps;
  const double half_p = 0.5 * p;
  double f = 0.0;
  for (int32_t v = 0; v < g.node_count(); ++v) {
    f += g.measure[v] * std::pow(g2[v] + e2, half_p);
    if (with_mass) f += g.measure[v] * std::pow(u[v] * u[v] + e2, half_p);
  }
  return f;
}

double true_energy(const MetricGraph& g, const std::vector<GradTerm>& terms,
                   const std::vector<double>& u, double p, bool with_mass) {
  const auto g2 = gradient_sq(g, terms, u);
  const double half_p = 0.5 * p;
  double f = 0.0;
  for (int32_t v = 0; v < g.node_count(); ++v) {
    if (g2[v] > 0.0) f += g.measure[v] * std::pow(g2[v], half_p);
    if (with_mass && u[v] != 0.0) f += g.measure[v] * std::pow(std::fabs(u[v]), p);
  }
  return f;
}

// Regularized iteratively-reweighted minimization with eps continuation.
IrlsResult irls_minimize(const MetricGraph& g, const Condenser& cond, const SolverConfig& cfg,
                         bool with_mass, const std::vector<double>* init) {
  const auto terms = gradient_terms(g);
  const int32_t nf = static_cast<int32_t>(cond.free_node.size());

  IrlsResult out;
  out.u = cond.fixed;
  if (init != nullptr) {
    for (int32_t i = 0; i < nf; ++i) out.u[cond.free_node[i]] = (*init)[cond.free_node[i]];
  }

  if (nf == 0) {
    out.energy_trace.push_back(true_energy(g, terms, out.u, cfg.p, with_mass));
    return out;
  }

  Assembler asem(g, terms, cond);
  std::vector<double> weight(g.node_count());
  std::vector<double> mass(with_mass ? g.node_count() : 0);
  std::vector<double> rhs;
  std::vector<double> x(nf);
  std::vector<double> trial(out.u.size());
  for (int32_t i = 0; i < nf; ++i) x[i] = out.u[cond.free_node[i]];

  const bool eps_matters = cfg.p != 2.0;
  double eps = eps_matters ? cfg.eps0 : cfg.eps_floor;
  double prev_J = kInf;
  const double wexp = 0.5 * (cfg.p - 2.0);

  for (int outer = 0; outer < cfg.max_iter; ++outer) {
    const auto g2 = gradient_sq(g, terms, out.u);
    const double e2 = eps * eps;
    for (int32_t v = 0; v < g.node_count(); ++v) {
      weight[v] = g.measure[v] * (wexp == 0.0 ? 1.0 : std::pow(g2[v] + e2, wexp));
    }
    if (with_mass) {
      for (int32_t v = 0; v < g.node_count(); ++v) {
        mass[v] =
            g.measure[v] * (wexp == 0.0 ? 1.0 : std::pow(out.u[v] * out.u[v] + e2, wexp));
      }
    }
    asem.fill(weight, with_mass ? &mass : nullptr, rhs);

    const bool polish = !eps_matters || eps <= cfg.eps_floor * (1.0 + 1e-12);
    const double rtol = polish ? 1e-11 : 1e-7;
    const auto st = pcg(asem.A, rhs, x, rtol, 20000);
    if (!st.converged && polish)
      out.warnings.push_back("inner solve stopped at relative residual " +
                             std::to_string(st.rel_residual));

    // Candidate step; for p > 2 the reweighted solve can overshoot, so accept
    // the first halved step that does not increase the smoothed objective.
    trial = out.u;
    for (int32_t i = 0; i < nf; ++i) trial[cond.free_node[i]] = x[i];
    if (cfg.p > 2.0) {
      const double f_cur = smoothed_energy(g, terms, out.u, cfg.p, eps, with_mass);
      double t = 1.0;
      for (int ls = 0; ls < 30; ++ls) {
        if (smoothed_energy(g, terms, trial, cfg.p, eps, with_mass) <=
            f_cur * (1.0 + 1e-14) + 1e-300)
          break;
        t *= 0.5;
        for (int32_t i = 0; i < nf; ++i) {
          const int32_t v = cond.free_node[i];
          trial[v] = out.u[v] + t * (x[i] - out.u[v]);
        }
      }
      for (int32_t i = 0; i < nf; ++i) x[i] = trial[cond.free_node[i]];
    }
    out.u.swap(trial);

    const double J = true_energy(g, terms, out.u, cfg.p, with_mass);
    out.energy_trace.push_back(J);
    out.iterations = outer + 1;

    const bool eps_done = !eps_matters || eps <= cfg.eps_floor * (1.0 + 1e-12);
    const double dJ = std::fabs(prev_J - J);
    out.final_residual = prev_J == kInf ? 1.0 : dJ / std::max(J, 1e-300);
    if (eps_done && outer >= 1 && dJ <= cfg.tol * std::max(J, 1e-300)) break;
    prev_J = J;
    eps = std::max(0.5 * eps, cfg.eps_floor);
  }

  for (double& v : out.u) v = std::clamp(v, 0.0, 1.0);
  return out;
}

Condenser make_condenser(const MetricGraph& g, const NodeSet& E, const NodeSet& omega) {
  Condenser c;
  c.free_id.assign(g.node_count(), -1);
  c.fixed.assign(g.node_count(), 0.0);
  const auto in_e = E.mask(g.node_count());
  const auto in_omega = omega.mask(g.node_count());
  for (int32_t v = 0; v < g.node_count(); ++v) {
    if (in_e[v]) {
      c.fixed[v] = 1.0;
    } else if (in_omega[v]) {
      c.free_id[v] = static_cast<int32_t>(c.free_node.size());
      c.free_node.push_back(v);
    }
  }
  return c;
}

}  // namespace

PotentialField capacitary_potential(const MetricGraph& g, const NodeSet& E, const NodeSet& omega,
                                    const SolverConfig& config, const std::vector<double>* init) {
  config.validate();
  if (E.empty()) fail(ErrorKind::numeric, "empty-inner-plate", "E is empty");
  if (!E.is_subset_of(omega))
    fail(ErrorKind::numeric, "inadmissible-condenser", "E is not contained in Omega");
  if (omega.size() == g.node_count())
    fail(ErrorKind::numeric, "no-boundary", "Omega leaves no exterior nodes");

  const auto cond = make_condenser(g, E, omega);
  auto res = irls_minimize(g, cond, config, /*with_mass=*/false, init);

  PotentialField u;
  u.graph_id = g.id;
  u.values = std::move(res.u);
  u.inner_plate = E;
  u.domain = omega;
  u.config = config;
  return u;
}

CapacityResult variational_capacity(const MetricGraph& g, const NodeSet& E, const NodeSet& omega,
                                    const SolverConfig& config, const std::vector<double>* init) {
  config.validate();
  if (E.empty()) fail(ErrorKind::numeric, "empty-inner-plate", "E is empty");
  if (!E.is_subset_of(omega))
    fail(ErrorKind::numeric, "inadmissible-condenser", "E is not contained in Omega");
  if (omega.size() == g.node_count())
    fail(ErrorKind::numeric, "no-boundary", "Omega leaves no exterior nodes");

  const auto cond = make_condenser(g, E, omega);
  auto res = irls_minimize(g, cond, config, /*with_mass=*/false, init);

  CapacityResult cr;
  cr.potential.graph_id = g.id;
  cr.potential.values = std::move(res.u);
  cr.potential.inner_plate = E;
  cr.potential.domain = omega;
  cr.potential.config = config;
  cr.value = dirichlet_energy(g, cr.potential.values, config.p);
  cr.iterations = res.iterations;
  cr.final_residual = res.final_residual;
  cr.energy_trace = std::move(res.energy_trace);
  cr.warnings = std::move(res.warnings);
  return cr;
}

CapacityResult sobolev_capacity(const MetricGraph& g, const NodeSet& E,
                                const SolverConfig& config) {
  config.validate();
  CapacityResult cr;
  cr.potential.graph_id = g.id;
  cr.potential.config = config;
  if (E.empty()) {
    cr.potential.values.assign(g.node_count(), 0.0);
    return cr;
  }

  // Truncation safety: the box should exceed the hull of E by max(4 diam(E), 8).
  double margin = kInf;
  bool touches = false;
  for (int32_t v : E) {
    const auto x = g.node_coords(v);
    for (int d = 0; d < g.dim; ++d) {
      const double m = std::min(x[d] - g.box.bounds[d][0], g.box.bounds[d][1] - x[d]);
      margin = std::min(margin, m);
      if (m < g.h * (1.0 + 1e-12)) touches = true;
    }
  }
  const double diam = set_diameter(g, E);
  if (touches || margin < std::max(4.0 * diam, 8.0)) {
    cr.warnings.push_back(
        "truncation-unsafe: computational box margin around E is below max(4 diam(E), 8)");
  }

  Condenser cond;
  cond.free_id.assign(g.node_count(), -1);
  cond.fixed.assign(g.node_count(), 0.0);
  const auto in_e = E.mask(g.node_count());
  for (int32_t v = 0; v < g.node_count(); ++v) {
    if (in_e[v]) {
      cond.fixed[v] = 1.0;
    } else {
      cond.free_id[v] = static_cast<int32_t>(cond.free_node.size());
      cond.free_node.push_back(v);
    }
  }

  auto res = irls_minimize(g, cond, config, /*with_mass=*/true, nullptr);
  cr.potential.values = std::move(res.u);
  cr.potential.inner_plate = E;
  cr.iterations = res.iterations;
  cr.final_residual = res.final_residual;
  cr.energy_trace = std::move(res.energy_trace);
  for (auto& w : res.warnings) cr.warnings.push_back(std::move(w));

  double mass = 0.0;
  for (int32_t v = 0; v < g.node_count(); ++v) {
    const double u = cr.potential.values[v];
    if (u != 0.0) mass += g.measure[v] * std::pow(std::fabs(u), config.p);
  }
  cr.value = mass + dirichlet_energy(g, cr.potential.values, config.p);
  return cr;
}

NodeSet superlevel_set(const MetricGraph& g, const PotentialField& u, double M, bool strict) {
  if (!(M > 0.0) || M > 1.0)
    fail(ErrorKind::config, "invalid-level", "superlevel threshold must lie in (0, 1]");
  if (u.graph_id != g.id)
    fail(ErrorKind::numeric, "mismatched-graph", "potential belongs to a different graph");
  std::vector<int32_t> out;
  for (int32_t v = 0; v < g.node_count(); ++v) {
    const double val = u.values[v];
    if (strict ? val > M : val >= M) out.push_back(v);
  }
  return NodeSet(std::move(out));
}

}  // namespace capdens

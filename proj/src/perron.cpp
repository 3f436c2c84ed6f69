#include "pflattice/perron.hpp"

#include "pflattice/lattice.hpp"
#include "pflattice/spectral.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pflattice {

namespace {

// ---------------------------------------------------------------------------
// Support digraph utilities. Entry (i,j) > threshold contributes edge j -> i,
// matching the A * I_S column convention for ideal invariance.
// ---------------------------------------------------------------------------

std::vector<std::vector<int>> successor_lists(const Matrix& support_union,
                                              double threshold) {
  const int n = static_cast<int>(support_union.rows());
  std::vector<std::vector<int>> succ(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (support_union(i, j) > threshold) succ[static_cast<size_t>(j)].push_back(i);
  return succ;
}

std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& succ) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> index(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
  std::vector<char> on_stack(static_cast<size_t>(n), 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> comps;
  std::vector<std::pair<int, size_t>> dfs;
  int counter = 0;

  for (int start = 0; start < n; ++start) {
    if (index[static_cast<size_t>(start)] != -1) continue;
    index[static_cast<size_t>(start)] = low[static_cast<size_t>(start)] = counter++;
    stack.push_back(start);
    on_stack[static_cast<size_t>(start)] = 1;
    dfs.emplace_back(start, 0);
    while (!dfs.empty()) {
      const int v = dfs.back().first;
      if (dfs.back().second < succ[static_cast<size_t>(v)].size()) {
        const int w = succ[static_cast<size_t>(v)][dfs.back().second++];
        if (index[static_cast<size_t>(w)] == -1) {
          index[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = counter++;
          stack.push_back(w);
          on_stack[static_cast<size_t>(w)] = 1;
          dfs.emplace_back(w, 0);
        } else if (on_stack[static_cast<size_t>(w)]) {
          low[static_cast<size_t>(v)] =
              std::min(low[static_cast<size_t>(v)], index[static_cast<size_t>(w)]);
        }
      } else {
        if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
          comps.emplace_back();
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[static_cast<size_t>(w)] = 0;
            comps.back().push_back(w);
          } while (w != v);
          std::sort(comps.back().begin(), comps.back().end());
        }
        dfs.pop_back();
        if (!dfs.empty())
          low[static_cast<size_t>(dfs.back().first)] =
              std::min(low[static_cast<size_t>(dfs.back().first)],
                       low[static_cast<size_t>(v)]);
      }
    }
  }
  return comps;
}

bool component_closed(const std::vector<int>& comp,
                      const std::vector<std::vector<int>>& succ) {
  std::vector<char> in(succ.size(), 0);
  for (int v : comp) in[static_cast<size_t>(v)] = 1;
  for (int v : comp)
    for (int w : succ[static_cast<size_t>(v)])
      if (!in[static_cast<size_t>(w)]) return false;
  return true;
}

bool strictly_positive(const Vec& v, double threshold) {
  for (int i = 0; i < v.size(); ++i)
    if (!(v(i) > threshold)) return false;
  return v.size() > 0;
}

// Unit right null vector of (m - lambda*I); requires a simple eigenvalue.
Vec simple_eigenvector(const Matrix& m, double lambda) {
  Matrix shifted = m;
  shifted.diagonal().array() -= lambda;
  Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
  Vec v = svd.matrixV().col(m.cols() - 1);
  if (v.sum() < 0.0) v = -v;
  return v;
}

int real_rank(const Matrix& m, double rank_tol) {
  Eigen::JacobiSVD<Matrix> svd(m);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rank_tol) ++rank;
  return rank;
}

long long lcm_ll(long long a, long long b) {
  return a / std::gcd(a, b) * b;
}

}  // namespace

IrreducibilityCertificate is_ideal_irreducible(
    const std::vector<PosMatrix>& matrices, const Tolerances& tol) {
  tol.validate();
  if (matrices.empty())
    throw InvalidArgument("is_ideal_irreducible: empty matrix list");
  const int n = matrices.front().n();
  Matrix support = Matrix::Zero(n, n);
  for (const PosMatrix& a : matrices) {
    if (a.n() != n)
      throw InvalidArgument("is_ideal_irreducible: dimension mismatch");
    support = support.cwiseMax(a.mat());
  }
  const auto succ = successor_lists(support, tol.zero);
  const auto comps = strongly_connected_components(succ);

  IrreducibilityCertificate cert;
  if (comps.size() == 1) {
    cert.irreducible = true;
    return cert;
  }
  // Reducible: any closed component is invariant under every member. Pick the
  // closed component containing the smallest coordinate.
  const std::vector<int>* best = nullptr;
  for (const auto& comp : comps) {
    if (!component_closed(comp, succ)) continue;
    if (!best || comp.front() < best->front()) best = &comp;
  }
  if (!best) throw InternalError("condensation has no closed component");
  cert.irreducible = false;
  cert.witness = CoordinateIdeal::of(n, *best);
  for (const PosMatrix& a : matrices)
    if (!is_invariant_ideal(a, *cert.witness, tol))
      throw InternalError("reducibility witness failed invariance verification");
  return cert;
}

PerronPair perron_pair(const PosMatrix& a, const Tolerances& tol) {
  tol.validate();
  const auto cert = is_ideal_irreducible(a, tol);
  if (!cert.irreducible)
    throw PreconditionViolation("perron_pair: input is reducible");
  const int n = a.n();
  const SpectrumReport rep = spectrum(a, tol);
  const double r = rep.radius;
  if (!(r > tol.zero))
    throw InternalError("perron_pair: spectral radius not positive");

  // Both eigenspaces are one-dimensional for an irreducible matrix.
  Matrix shifted = a.mat();
  shifted.diagonal().array() -= r;
  const double rank_tol = tol.zero * std::max(1.0, inf_norm(a.mat())) * n;
  if (real_rank(shifted, rank_tol) != n - 1)
    throw InternalError("perron_pair: Perron root is not simple");

  Vec x0 = simple_eigenvector(a.mat(), r);
  Vec x0star = simple_eigenvector(a.mat().transpose(), r);
  x0 /= x0.lpNorm<1>();
  if (!strictly_positive(x0, tol.zero))
    throw InternalError("perron_pair: eigenvector not strictly positive");
  const double pairing = x0star.dot(x0);
  if (!(std::abs(pairing) > tol.zero))
    throw InternalError("perron_pair: degenerate eigenvector pairing");
  x0star /= pairing;
  if (!strictly_positive(x0star, tol.zero))
    throw InternalError("perron_pair: dual eigenvector not strictly positive");

  if (vec_inf(a.mat() * x0 - r * x0) > 1e-7 * std::max(1.0, r))
    throw InternalError("perron_pair: eigenvector residual too large");
  if (vec_inf(a.mat().transpose() * x0star - r * x0star) >
      1e-7 * std::max(1.0, r) * vec_inf(x0star))
    throw InternalError("perron_pair: dual eigenvector residual too large");
  return {r, x0, x0star};
}

PosMatrix strongly_expanding_sum(const PosMatrix& t, const Tolerances& tol) {
  tol.validate();
  const auto cert = is_ideal_irreducible(t, tol);
  if (!cert.irreducible)
    throw PreconditionViolation("strongly_expanding_sum: input is reducible");
  const int n = t.n();
  const double norm = inf_norm(t.mat());
  const Matrix scaled = t.mat() / (2.0 * norm);
  const Matrix lhs = Matrix::Identity(n, n) - scaled;
  const Matrix sum = lhs.partialPivLu().solve(scaled);
  if (!(sum.minCoeff() > tol.zero))
    throw ConditioningFailure(
        "strongly_expanding_sum: an entry of the sum falls below the zero "
        "tolerance");
  return PosMatrix(sum, tol);
}

// ---------------------------------------------------------------------------
// Peripheral cycle structure
// ---------------------------------------------------------------------------

namespace {

struct Cluster {
  std::vector<int> members;
  Vec sum;
};

// Greedy proportionality clustering of unit-normalized nonnegative columns.
// Cosine distance below tol.cluster joins a cluster; distances inside
// [tol.cluster, 100*tol.cluster] are ambiguous and fail loudly.
std::vector<Cluster> proportionality_clusters(const Matrix& cols,
                                              const Tolerances& tol,
                                              const char* what) {
  std::vector<Cluster> clusters;
  const int n = static_cast<int>(cols.rows());
  for (int k = 0; k < cols.cols(); ++k) {
    Vec c = cols.col(k);
    if (vec_inf(c) <= tol.zero) continue;  // subdominant coordinate
    const Vec u = c / c.norm();
    int best = -1;
    double best_cos = -1.0;
    double second_cos = -1.0;
    for (size_t q = 0; q < clusters.size(); ++q) {
      const Vec rep = clusters[q].sum / clusters[q].sum.norm();
      const double cos = u.dot(rep);
      if (cos > best_cos) {
        second_cos = best_cos;
        best_cos = cos;
        best = static_cast<int>(q);
      } else {
        second_cos = std::max(second_cos, cos);
      }
    }
    const double join = 1.0 - tol.cluster;
    const double ambiguous = 1.0 - 100.0 * tol.cluster;
    if (best >= 0 && best_cos >= join) {
      if (second_cos >= ambiguous)
        throw HypothesisViolated(
            std::string("ambiguous proportionality clustering of ") + what);
      clusters[static_cast<size_t>(best)].members.push_back(k);
      clusters[static_cast<size_t>(best)].sum += u;
    } else if (best >= 0 && best_cos >= ambiguous) {
      throw HypothesisViolated(
          std::string("ambiguous proportionality clustering of ") + what);
    } else {
      clusters.push_back({{k}, u});
    }
  }
  (void)n;
  return clusters;
}

void check_disjoint_supports(const std::vector<Vec>& vs, const Tolerances& tol,
                             const char* what) {
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j)
      for (int k = 0; k < vs[i].size(); ++k)
        if (vs[i](k) > tol.zero && vs[j](k) > tol.zero)
          throw HypothesisViolated(std::string("supports of distinct ") + what +
                                   " overlap");
}

// Verify ||(K/r)^(N m) - P||_inf <= 1e-6 at an exponent chosen from the
// subdominant decay rate, escalating twice before giving up.
long long verify_power_convergence(const Matrix& khat, const Matrix& p, int m,
                                   double rho_sub) {
  long long target = 1;
  const double cond = 10.0 * std::max(1.0, max_abs(p));
  if (rho_sub > 0.0) {
    const double need = std::log(1e-8 / cond) / (m * std::log(rho_sub));
    target = std::max<long long>(1, static_cast<long long>(std::ceil(need)));
  }
  for (int attempt = 0; attempt < 3; ++attempt, target *= 4) {
    const NormalizedPower np = normalized_power(
        khat, static_cast<unsigned long long>(target) * static_cast<unsigned long long>(m));
    const Matrix power = std::isfinite(np.log_norm)
                             ? Matrix(np.direction * std::exp(np.log_norm))
                             : Matrix(Matrix::Zero(p.rows(), p.cols()));
    if (inf_norm(power - p) <= 1e-6) return target;
  }
  throw HypothesisViolated(
      "scaled powers did not converge to the peripheral projection");
}

}  // namespace

PeripheralStructure peripheral_cycle_structure(const PosMatrix& k,
                                               const Tolerances& tol) {
  tol.validate();
  const int n = k.n();
  const SpectrumReport rep = spectrum(k, tol);
  const double r = rep.radius;
  if (!(r > tol.zero))
    throw QuasiNilpotentInput("spectral radius below tolerance");
  if (!rep.peripheral_semisimple)
    throw HypothesisViolated("peripheral part is defective");

  const Matrix p = peripheral_projection(k, tol);
  if (p.minCoeff() < -tol.zero)
    throw HypothesisViolated("peripheral projection has negative entries");
  const Matrix pc = p.cwiseMax(0.0);
  const Matrix khat = k.mat() / r;

  auto col_clusters = proportionality_clusters(pc, tol, "columns");
  auto row_clusters =
      proportionality_clusters(Matrix(pc.transpose()), tol, "rows");
  const int rank = static_cast<int>(col_clusters.size());
  if (static_cast<int>(row_clusters.size()) != rank)
    throw HypothesisViolated("row and column cluster counts differ");
  if (std::abs(p.trace() - rank) > 0.01)
    throw HypothesisViolated("projection rank does not match cluster count");

  std::vector<Vec> xs, ys;
  for (const auto& c : col_clusters) xs.push_back(c.sum / c.sum.norm());
  for (const auto& c : row_clusters) ys.push_back(c.sum / c.sum.norm());
  check_disjoint_supports(xs, tol, "peripheral vectors");
  check_disjoint_supports(ys, tol, "peripheral functionals");

  // Recover the permutation: (K/r) x_i must be proportional to exactly one x_j.
  std::vector<int> perm(static_cast<size_t>(rank), -1);
  std::vector<double> weight(static_cast<size_t>(rank), 0.0);
  std::vector<char> hit(static_cast<size_t>(rank), 0);
  for (int i = 0; i < rank; ++i) {
    const Vec z = khat * xs[static_cast<size_t>(i)];
    const double zn = z.norm();
    if (!(zn > tol.zero))
      throw HypothesisViolated("peripheral vector is annihilated");
    int match = -1;
    for (int j = 0; j < rank; ++j)
      if (z.dot(xs[static_cast<size_t>(j)]) / zn >= 1.0 - 1e-6) {
        match = j;
        break;
      }
    if (match < 0 || hit[static_cast<size_t>(match)])
      throw HypothesisViolated("permutation match failed");
    hit[static_cast<size_t>(match)] = 1;
    perm[static_cast<size_t>(i)] = match;
    weight[static_cast<size_t>(i)] = zn;
  }

  // Rescale within each cycle so the permutation carries weight one. The
  // weight product around a cycle is 1 because peripheral moduli equal r.
  std::vector<double> scale(static_cast<size_t>(rank), 0.0);
  std::vector<char> seen(static_cast<size_t>(rank), 0);
  long long period = 1;
  for (int start = 0; start < rank; ++start) {
    if (seen[static_cast<size_t>(start)]) continue;
    std::vector<int> cycle;
    int cur = start;
    do {
      cycle.push_back(cur);
      seen[static_cast<size_t>(cur)] = 1;
      cur = perm[static_cast<size_t>(cur)];
    } while (cur != start);
    double prod = 1.0;
    for (int i : cycle) prod *= weight[static_cast<size_t>(i)];
    if (std::abs(prod - 1.0) > 1e-6 * static_cast<double>(cycle.size()))
      throw HypothesisViolated("cycle weight product is not one");
    const double g = std::pow(prod, 1.0 / static_cast<double>(cycle.size()));
    double s = 1.0;
    for (int i : cycle) {
      scale[static_cast<size_t>(i)] = s;
      s *= weight[static_cast<size_t>(i)] / g;
    }
    period = lcm_ll(period, static_cast<long long>(cycle.size()));
  }
  if (period > 2520)
    throw HypothesisViolated("permutation order exceeds the period cap");
  for (int i = 0; i < rank; ++i)
    xs[static_cast<size_t>(i)] *= scale[static_cast<size_t>(i)];

  // Pair each x_i with the unique row cluster not orthogonal to it and scale
  // to biorthogonality.
  std::vector<Vec> xstars(static_cast<size_t>(rank));
  std::vector<char> used(static_cast<size_t>(rank), 0);
  for (int i = 0; i < rank; ++i) {
    int match = -1;
    double best = 0.0;
    for (int j = 0; j < rank; ++j) {
      const double d = ys[static_cast<size_t>(j)].dot(xs[static_cast<size_t>(i)]);
      if (d > best) {
        best = d;
        match = j;
      }
    }
    if (match < 0 || best <= tol.zero || used[static_cast<size_t>(match)])
      throw HypothesisViolated("functional pairing failed");
    used[static_cast<size_t>(match)] = 1;
    xstars[static_cast<size_t>(i)] = ys[static_cast<size_t>(match)] / best;
  }

  // Validate the full frame.
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) {
      const double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(xstars[static_cast<size_t>(i)].dot(xs[static_cast<size_t>(j)]) -
                   want) > 1e-7)
        throw HypothesisViolated("biorthogonality check failed");
    }
  Matrix p_rec = Matrix::Zero(n, n);
  for (int i = 0; i < rank; ++i)
    p_rec += xs[static_cast<size_t>(i)] * xstars[static_cast<size_t>(i)].transpose();
  if (max_abs(p_rec - p) > 1e-7 * std::max(1.0, max_abs(p)))
    throw HypothesisViolated("projection does not match the dyadic frame");

  for (int i = 0; i < rank; ++i) {
    const Vec z = khat * xs[static_cast<size_t>(i)] -
                  xs[static_cast<size_t>(perm[static_cast<size_t>(i)])];
    if (vec_inf(z) > 1e-7 * std::max(1.0, vec_inf(xs[static_cast<size_t>(i)])))
      throw HypothesisViolated("permutation action check failed");
  }

  PeripheralStructure out;
  out.radius = r;
  out.projection = p;
  out.rank = rank;
  out.vectors = xs;
  out.functionals = xstars;
  out.permutation = perm;
  out.period = static_cast<int>(period);
  out.x0 = Vec::Zero(n);
  out.x0star = Vec::Zero(n);
  for (int i = 0; i < rank; ++i) {
    out.x0 += xs[static_cast<size_t>(i)];
    out.x0star += xstars[static_cast<size_t>(i)];
  }
  if (vec_inf(k.mat() * out.x0 - r * out.x0) > 1e-7 * r * vec_inf(out.x0))
    throw HypothesisViolated("x0 eigen-residual too large");
  if (vec_inf(k.mat().transpose() * out.x0star - r * out.x0star) >
      1e-7 * r * vec_inf(out.x0star))
    throw HypothesisViolated("x0* eigen-residual too large");

  double rho_sub = 0.0;
  const double cutoff = r * (1.0 - tol.peripheral_band);
  for (const auto& v : rep.eigenvalues)
    if (std::abs(v) < cutoff) rho_sub = std::max(rho_sub, std::abs(v) / r);
  out.verified_power = verify_power_convergence(khat, p, out.period, rho_sub);
  out.source = k.mat();
  return out;
}

CommonEigenpair common_peripheral_eigenpair(const PosMatrix& t, const PosMatrix& k,
                                            const Tolerances& tol) {
  tol.validate();
  if (t.n() != k.n())
    throw InvalidArgument("common_peripheral_eigenpair: dimension mismatch");
  const double t_norm = inf_norm(t.mat());
  const double k_norm = inf_norm(k.mat());
  if (!(k_norm > tol.zero))
    throw PreconditionViolation("common_peripheral_eigenpair: K is zero");
  if (inf_norm(t.mat() * k.mat() - k.mat() * t.mat()) >
      tol.commuting * t_norm * k_norm)
    throw PreconditionViolation(
        "common_peripheral_eigenpair: operators do not commute within tolerance");

  const PosMatrix expand = strongly_expanding_sum(t, tol);  // checks irreducibility
  const Matrix sandwich = expand.mat() * k.mat() * expand.mat();
  const PosMatrix ktilde(sandwich, tol);
  if (!(ktilde.mat().minCoeff() > tol.zero))
    throw ConditioningFailure(
        "common_peripheral_eigenpair: sandwich entries fall below the zero "
        "tolerance");

  const PerronPair pp = perron_pair(ktilde, tol);
  CommonEigenpair out;
  out.x0 = pp.x0;
  out.x0star = pp.x0star;
  out.lambda_t = out.x0star.dot(t.mat() * out.x0);
  out.mu_k = out.x0star.dot(k.mat() * out.x0);

  if (vec_inf(t.mat() * out.x0 - out.lambda_t * out.x0) >
      1e-6 * std::max(1.0, t_norm) * vec_inf(out.x0))
    throw InternalError("common_peripheral_eigenpair: T residual too large");
  if (vec_inf(k.mat() * out.x0 - out.mu_k * out.x0) >
      1e-6 * std::max(1.0, k_norm) * vec_inf(out.x0))
    throw InternalError("common_peripheral_eigenpair: K residual too large");

  const double r_t = spectral_radius(t, tol);
  if (!(out.lambda_t > 0.0) || out.lambda_t > r_t * (1.0 + 1e-9) + tol.zero)
    throw InternalError("common_peripheral_eigenpair: lambda_T outside (0, r(T)]");
  const double r_k = spectral_radius(k, tol);
  if (std::abs(out.mu_k - r_k) > 1e-6 * std::max(1.0, r_k))
    throw InternalError("common_peripheral_eigenpair: mu_K does not equal r(K)");
  return out;
}

// ---------------------------------------------------------------------------
// Nonnegative Perron vectors of possibly reducible nonnegative matrices
// ---------------------------------------------------------------------------

namespace {

// Perron vector of a strictly positive perturbation m + eps*J, l1-normalized.
Vec perturbed_perron(const Matrix& m, double eps, const Tolerances& tol) {
  const int n = static_cast<int>(m.rows());
  Matrix pert = m;
  pert.array() += eps;
  const double r = spectral_radius(pert, tol);
  Vec v = simple_eigenvector(pert, r);
  for (int i = 0; i < n; ++i) v(i) = std::max(v(i), 0.0);
  const double s = v.lpNorm<1>();
  if (!(s > 0.0)) throw InternalError("perturbed Perron vector vanished");
  return v / s;
}

}  // namespace

Vec nonneg_perron_vector(const Matrix& m, double radius, const Tolerances& tol) {
  tol.validate();
  const int n = static_cast<int>(m.rows());
  if (n != m.cols() || n < 1)
    throw InvalidArgument("nonneg_perron_vector: matrix must be square");
  if (m.size() > 0 && m.minCoeff() < -tol.zero)
    throw InvalidArgument("nonneg_perron_vector: matrix must be nonnegative");
  if (n == 1) return Vec::Ones(1);

  const double scale = std::max(inf_norm(m), 1e-300);
  const Matrix mhat = m / scale;
  const double rhat = radius / scale;
  const double rank_tol = tol.zero * n;

  auto finish = [&](Vec v, double residual_cap) -> std::optional<Vec> {
    for (int i = 0; i < n; ++i) {
      if (v(i) < -1e-7 * vec_inf(v)) return std::nullopt;
      v(i) = std::max(v(i), 0.0);
    }
    const double s = v.lpNorm<1>();
    if (!(s > 0.0)) return std::nullopt;
    v /= s;
    if (vec_inf(mhat * v - rhat * v) > residual_cap) return std::nullopt;
    return v;
  };

  // Simple root: the null direction is the eigenvector.
  {
    Matrix shifted = mhat;
    shifted.diagonal().array() -= rhat;
    if (real_rank(shifted, rank_tol) == n - 1)
      if (auto v = finish(simple_eigenvector(mhat, rhat), 1e-8)) return *v;
  }

  // Degenerate root: take the limit of Perron vectors of strictly positive
  // perturbations m + eps*J. Components vanishing as eps -> 0 identify the
  // support; the restricted problem is then solved exactly when possible.
  const double eps1 = 1e-7, eps2 = 1e-11;
  const Vec v1 = perturbed_perron(mhat, eps1, tol);
  const Vec v2 = perturbed_perron(mhat, eps2, tol);

  std::vector<int> support;
  for (int i = 0; i < n; ++i)
    if (v2(i) > tol.zero && v2(i) >= 0.1 * v1(i)) support.push_back(i);

  if (!support.empty() && static_cast<int>(support.size()) < n) {
    const int k = static_cast<int>(support.size());
    Matrix sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        sub(i, j) = mhat(support[static_cast<size_t>(i)], support[static_cast<size_t>(j)]);
    const double sub_radius = spectral_radius(sub, tol);
    if (std::abs(sub_radius - rhat) <= 1e-8 * std::max(1.0, rhat)) {
      const Vec vs = nonneg_perron_vector(sub, sub_radius, tol);
      Vec v = Vec::Zero(n);
      for (int i = 0; i < k; ++i) v(support[static_cast<size_t>(i)]) = vs(i);
      if (auto ok = finish(v, 1e-8)) return *ok;
    }
  }

  // Project the limit direction onto the numerical eigenspace of the root;
  // this removes the near-degenerate mixing left by the finite perturbation.
  {
    Matrix shifted = mhat;
    shifted.diagonal().array() -= rhat;
    Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
    int null_dim = 0;
    for (int i = 0; i < n; ++i)
      if (svd.singularValues()(i) <= rank_tol) ++null_dim;
    if (null_dim >= 1) {
      const Matrix basis = svd.matrixV().rightCols(null_dim);
      if (auto ok = finish(basis * (basis.transpose() * v2), 1e-8)) return *ok;
    }
  }
  if (auto ok = finish(v2, 1e-6)) return *ok;
  throw InternalError("nonneg_perron_vector: no nonnegative eigenvector found");
}

CommutingEigenvalue commuting_eigenvalue(const PosMatrix& s,
                                         const PeripheralStructure& structure,
                                         const Tolerances& tol) {
  tol.validate();
  const int n = s.n();
  if (structure.source.rows() != n)
    throw InvalidArgument("commuting_eigenvalue: dimension mismatch");
  const Matrix& k = structure.source;
  const double s_norm = inf_norm(s.mat());
  const double k_norm = inf_norm(k);
  if (inf_norm(s.mat() * k - k * s.mat()) >
      tol.commuting * std::max(s_norm, 1e-300) * std::max(k_norm, 1e-300))
    throw PreconditionViolation(
        "commuting_eigenvalue: operators do not commute within tolerance");

  const int r = structure.rank;
  Matrix compressed(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      compressed(i, j) = structure.functionals[static_cast<size_t>(i)].dot(
          s.mat() * structure.vectors[static_cast<size_t>(j)]);
  if (compressed.minCoeff() < -std::max(tol.zero, 1e-9 * std::max(1.0, s_norm)))
    throw InternalError("commuting_eigenvalue: compression has negative entries");
  compressed = compressed.cwiseMax(0.0);

  CommutingEigenvalue out;
  out.lambda = spectral_radius(compressed, tol);
  const Vec v = nonneg_perron_vector(compressed, out.lambda, tol);
  const Vec w = nonneg_perron_vector(compressed.transpose(), out.lambda, tol);
  out.x = Vec::Zero(n);
  out.xstar = Vec::Zero(n);
  for (int i = 0; i < r; ++i) {
    out.x += v(i) * structure.vectors[static_cast<size_t>(i)];
    out.xstar += w(i) * structure.functionals[static_cast<size_t>(i)];
  }

  const double x_scale = std::max(vec_inf(out.x), 1e-300);
  if (vec_inf(s.mat() * out.x - out.lambda * out.x) >
      1e-6 * std::max(s_norm, out.lambda) * x_scale + 1e-12)
    throw InternalError("commuting_eigenvalue: eigenvector residual too large");
  const double xs_scale = std::max(vec_inf(out.xstar), 1e-300);
  if (vec_inf(s.mat().transpose() * out.xstar - out.lambda * out.xstar) >
      1e-6 * std::max(s_norm, out.lambda) * xs_scale + 1e-12)
    throw InternalError("commuting_eigenvalue: dual eigenvector residual too large");
  return out;
}

}  // namespace pflattice

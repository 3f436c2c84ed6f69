#include "pflattice/triangularize.hpp"

#include "pflattice/lattice.hpp"
#include "pflattice/perron.hpp"
#include "pflattice/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace pflattice {

namespace {

// Successors of coordinate j in the support digraph: { i : T(i,j) > tol }.
std::vector<std::vector<int>> successors(const Matrix& t, double threshold) {
  const int n = static_cast<int>(t.rows());
  std::vector<std::vector<int>> succ(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (t(i, j) > threshold) succ[static_cast<size_t>(j)].push_back(i);
  return succ;
}

// SCC partition via iterative Tarjan; components come out sorted internally.
std::vector<std::vector<int>> components_of(const std::vector<std::vector<int>>& succ) {
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

double block_max(const Matrix& s, const std::vector<int>& idx) {
  double m = 0.0;
  for (int i : idx)
    for (int j : idx) m = std::max(m, std::abs(s(i, j)));
  return m;
}

std::vector<int> delta(const CoordinateIdeal& big, const CoordinateIdeal& small) {
  std::vector<int> out;
  for (int i = 0; i < big.dim(); ++i)
    if (big.contains(i) && !small.contains(i)) out.push_back(i);
  return out;
}

}  // namespace

IdealChain invariant_ideal_chain(const PosMatrix& t, const Tolerances& tol) {
  tol.validate();
  const int n = t.n();
  const auto succ = successors(t.mat(), tol.zero);
  const auto comps = components_of(succ);
  const int c = static_cast<int>(comps.size());

  std::vector<int> comp_of(static_cast<size_t>(n), -1);
  for (int q = 0; q < c; ++q)
    for (int v : comps[static_cast<size_t>(q)]) comp_of[static_cast<size_t>(v)] = q;

  // Condensation out-degrees: a prefix of the order must be closed under
  // successors, so a component becomes available once all its successor
  // components are placed. Ties break to the smallest contained coordinate.
  std::vector<std::vector<int>> comp_succ(static_cast<size_t>(c));
  for (int j = 0; j < n; ++j)
    for (int i : succ[static_cast<size_t>(j)]) {
      const int a = comp_of[static_cast<size_t>(j)], b = comp_of[static_cast<size_t>(i)];
      if (a != b) comp_succ[static_cast<size_t>(a)].push_back(b);
    }
  std::vector<int> pending(static_cast<size_t>(c), 0);
  for (int q = 0; q < c; ++q) {
    auto& v = comp_succ[static_cast<size_t>(q)];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    pending[static_cast<size_t>(q)] = static_cast<int>(v.size());
  }
  std::vector<std::vector<int>> comp_pred(static_cast<size_t>(c));
  for (int q = 0; q < c; ++q)
    for (int b : comp_succ[static_cast<size_t>(q)]) comp_pred[static_cast<size_t>(b)].push_back(q);

  std::vector<char> placed(static_cast<size_t>(c), 0);
  std::vector<int> order;
  for (int step = 0; step < c; ++step) {
    int pick = -1;
    for (int q = 0; q < c; ++q) {
      if (placed[static_cast<size_t>(q)] || pending[static_cast<size_t>(q)] > 0) continue;
      if (pick < 0 ||
          comps[static_cast<size_t>(q)].front() < comps[static_cast<size_t>(pick)].front())
        pick = q;
    }
    if (pick < 0) throw InternalError("invariant_ideal_chain: cyclic condensation");
    placed[static_cast<size_t>(pick)] = 1;
    order.push_back(pick);
    for (int p : comp_pred[static_cast<size_t>(pick)]) --pending[static_cast<size_t>(p)];
  }

  IdealChain chain;
  CoordinateIdeal cur(n);
  chain.links.push_back(cur);
  for (int q : order) {
    for (int v : comps[static_cast<size_t>(q)]) cur.add(v);
    chain.links.push_back(cur);
  }
  chain.maximal = static_cast<int>(chain.links.size()) == n + 1;

  for (const CoordinateIdeal& link : chain.links)
    if (!is_invariant_ideal(t, link, tol))
      throw InternalError("invariant_ideal_chain: link failed invariance");
  // Each consecutive quotient block carries an ideal irreducible operator.
  for (size_t k = 1; k < chain.links.size(); ++k) {
    const auto idx = delta(chain.links[k], chain.links[k - 1]);
    if (idx.size() < 2) continue;
    Matrix block(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < idx.size(); ++j)
        block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            t.mat()(idx[i], idx[j]);
    if (!is_ideal_irreducible(PosMatrix(block, tol), tol).irreducible)
      throw InternalError("invariant_ideal_chain: quotient block not irreducible");
  }
  return chain;
}

IdealChain refine_to_maximal_chain(const IdealChain& chain, const Matrix& s,
                                   const Tolerances& tol, double scale_floor) {
  tol.validate();
  const int n = static_cast<int>(s.rows());
  if (chain.links.size() < 2 || !chain.links.front().is_empty() ||
      !chain.links.back().is_full() || chain.dim() != n)
    throw InvalidArgument(
        "refine_to_maximal_chain: chain must run from the empty ideal to the "
        "full ideal of matching dimension");
  for (size_t k = 1; k < chain.links.size(); ++k)
    if (!chain.links[k - 1].is_subset_of(chain.links[k]) ||
        chain.links[k - 1] == chain.links[k])
      throw InvalidArgument("refine_to_maximal_chain: links must strictly increase");

  const double threshold = tol.zero * std::max(inf_norm(s), scale_floor);
  for (const CoordinateIdeal& link : chain.links)
    if (!is_invariant_ideal(s, link, threshold))
      throw PreconditionViolation(
          "refine_to_maximal_chain: a link is not invariant under S");
  for (size_t k = 1; k < chain.links.size(); ++k) {
    const auto idx = delta(chain.links[k], chain.links[k - 1]);
    if (block_max(s, idx) > threshold)
      throw QuotientNotScalarZero(
          "refine_to_maximal_chain: quotient block of S is not zero");
  }

  // With zero quotient blocks every intermediate coordinate ideal inside a
  // gap is invariant, so singleton steps in increasing coordinate order give
  // a maximal chain.
  IdealChain out;
  out.links.push_back(chain.links.front());
  for (size_t k = 1; k < chain.links.size(); ++k) {
    CoordinateIdeal cur = chain.links[k - 1];
    for (int v : delta(chain.links[k], chain.links[k - 1])) {
      cur.add(v);
      out.links.push_back(cur);
    }
  }
  out.maximal = static_cast<int>(out.links.size()) == n + 1;
  if (!out.maximal)
    throw InternalError("refine_to_maximal_chain: refinement is not maximal");
  for (const CoordinateIdeal& link : out.links)
    if (!is_invariant_ideal(s, link, threshold))
      throw InternalError("refine_to_maximal_chain: refined link not invariant");
  return out;
}

NilpotencyCertificate commutator_nilpotency(const PosMatrix& t, const PosMatrix& k,
                                            const Tolerances& tol) {
  tol.validate();
  const int n = t.n();
  if (k.n() != n)
    throw InvalidArgument("commutator_nilpotency: dimension mismatch");
  const double t_norm = inf_norm(t.mat());
  const double k_norm = inf_norm(k.mat());
  if (!(t_norm > tol.zero) || !(k_norm > tol.zero))
    throw PreconditionViolation("commutator_nilpotency: operators must be nonzero");

  const Matrix s = t.mat() * k.mat() - k.mat() * t.mat();
  const double slack = tol.zero * std::max(1.0, t_norm * k_norm);
  if (s.minCoeff() < -slack && s.maxCoeff() > slack)
    throw PreconditionViolation(
        "commutator_nilpotency: pair is not semi-commuting");

  // Replacing T with T+K keeps the commutator and makes every invariant
  // ideal of the sum invariant under both operators.
  const PosMatrix sum(t.mat() + k.mat(), tol);
  const IdealChain base = invariant_ideal_chain(sum, tol);
  const double floor = t_norm * k_norm;
  const IdealChain chain = refine_to_maximal_chain(base, s, tol, floor);

  NilpotencyCertificate cert;
  cert.commutator = s;
  cert.chain = chain;

  cert.permuted_form.reserve(static_cast<size_t>(n));
  for (size_t q = 1; q < chain.links.size(); ++q) {
    const auto step = delta(chain.links[q], chain.links[q - 1]);
    if (step.size() != 1)
      throw InternalError("commutator_nilpotency: chain step is not a singleton");
    cert.permuted_form.push_back(step.front());
  }

  // Ringrose check: in the chain order the commutator is strictly upper
  // triangular up to the vanishing threshold.
  const double threshold = tol.zero * std::max(inf_norm(s), floor);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b <= a; ++b)
      if (std::abs(s(cert.permuted_form[static_cast<size_t>(a)],
                     cert.permuted_form[static_cast<size_t>(b)])) > threshold)
        throw InternalError("commutator_nilpotency: triangular form violated");

  // Radius of the commutator with sub-threshold entries zeroed. The raw
  // floating eigenvalues of a depth-k nilpotent matrix carry intrinsic
  // eps^(1/k) noise from additive dirt, so the de-noised operator is the
  // faithful object of the certificate.
  Matrix s_measured = s;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(s_measured(i, j)) <= threshold) s_measured(i, j) = 0.0;
  cert.radius = spectral_radius(s_measured, tol);
  const double s_norm = inf_norm(s);
  if (cert.radius > 1e-6 * std::max(1.0, s_norm))
    throw InternalError("commutator_nilpotency: commutator spectral radius too large");

  // Nilpotency index with the relative per-power threshold. A commutator at
  // the additive noise floor of the products counts as zero, and the floor
  // term keeps the measurement meaningful just above it.
  const double noise = 1e-12 * std::max(1.0, t_norm) * std::max(1.0, k_norm);
  if (s_norm <= tol.zero * std::max(1.0, floor)) {
    cert.index = 1;
    return cert;
  }
  Matrix power = s;
  int index = 1;
  while (index <= n &&
         inf_norm(power) > std::max(1e-7 * std::pow(s_norm, index),
                                    n * noise * std::pow(s_norm, index - 1))) {
    power = power * s;
    ++index;
  }
  if (index > n)
    throw InternalError("commutator_nilpotency: nilpotency index exceeds n");
  cert.index = index;
  return cert;
}

}  // namespace pflattice

#include "pflattice/lattice.hpp"

#include <cstdlib>

namespace pflattice {

Tolerances Tolerances::from_env() {
  Tolerances tol;
  if (const char* env = std::getenv("PF_LATTICE_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0')
      throw InvalidArgument("PF_LATTICE_TOL is not a number");
    tol.zero = v;
  }
  tol.validate();
  return tol;
}

CoordinateIdeal support_of(const Vec& v, const Tolerances& tol) {
  tol.validate();
  CoordinateIdeal s(static_cast<int>(v.size()));
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > tol.zero) s.add(i);
  return s;
}

CoordinateIdeal support_of(const std::vector<Vec>& vs, const Tolerances& tol) {
  if (vs.empty()) throw InvalidArgument("support_of: empty vector set");
  CoordinateIdeal s = support_of(vs.front(), tol);
  for (size_t k = 1; k < vs.size(); ++k) {
    if (vs[k].size() != vs.front().size())
      throw InvalidArgument("support_of: dimension mismatch");
    s = s.united(support_of(vs[k], tol));
  }
  return s;
}

bool is_invariant_ideal(const Matrix& a, const CoordinateIdeal& s,
                        double threshold) {
  const int n = static_cast<int>(a.rows());
  if (s.dim() != n)
    throw InvalidArgument("is_invariant_ideal: dimension mismatch");
  for (int j = 0; j < n; ++j) {
    if (!s.contains(j)) continue;
    for (int i = 0; i < n; ++i)
      if (!s.contains(i) && std::abs(a(i, j)) > threshold) return false;
  }
  return true;
}

bool is_invariant_ideal(const PosMatrix& a, const CoordinateIdeal& s,
                        const Tolerances& tol) {
  tol.validate();
  return is_invariant_ideal(a.mat(), s, tol.zero);
}

QuasiInteriorResult is_quasi_interior(const Vec& v, const Tolerances& tol) {
  tol.validate();
  for (int i = 0; i < v.size(); ++i)
    if (v(i) < -tol.zero)
      throw InvalidArgument("is_quasi_interior: vector has negative entries");
  QuasiInteriorResult r;
  for (int i = 0; i < v.size(); ++i) {
    if (!(v(i) > tol.zero)) {
      r.quasi_interior = false;
      r.violation_index = i;
      return r;
    }
  }
  r.quasi_interior = v.size() > 0;
  return r;
}

}  // namespace pflattice

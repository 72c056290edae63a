#pragma once

// Model curvature tensors (constant holomorphic sectional curvature, products,
// seeded random Kahler tensors) and the homogeneous-space spectral-constant
// table with its exact positivity margins.

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace kcurv {

// R(i,j,k,l) = (c/2)(d_ij d_kl + d_il d_kj); H == c, Ric == c(n+1)/2 I.
inline CurvatureTensor space_form(int n, double c) {
  CurvatureTensor R(n);
  const double h = c / 2.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          if (i == j && k == l) v += h;
          if (i == l && k == j) v += h;
          R(i, j, k, l) = v;
        }
  return R;
}

// Block-diagonal curvature of a metric product: entries survive only when all
// four indices land in the same factor.
inline CurvatureTensor product_tensor(const CurvatureTensor& Ra, const CurvatureTensor& Rb) {
  const int na = Ra.n, nb = Rb.n, n = na + nb;
  CurvatureTensor R(n);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < na; ++k)
        for (int l = 0; l < na; ++l) R(i, j, k, l) = Ra(i, j, k, l);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l) R(na + i, na + j, na + k, na + l) = Rb(i, j, k, l);
  return R;
}

// i.i.d. complex Gaussian 4-index array symmetrized over the Kahler symmetry
// group and the Hermitian involution; validates at 1e-12 by construction.
inline CurvatureTensor random_kahler(int n, std::uint64_t seed, double scale = 1.0) {
  Rng rng(derive_seed(seed, 0xabcdef));
  CurvatureTensor G(n);
  for (auto& z : G.e) z = rng.cgaussian() * scale;
  CurvatureTensor S(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          S(i, j, k, l) = 0.25 * (G(i, j, k, l) + G(k, j, i, l) + G(i, l, k, j) + G(k, l, i, j));
  CurvatureTensor R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) R(i, j, k, l) = 0.5 * (S(i, j, k, l) + std::conj(S(j, i, l, k)));
  return R;
}

// ---------------------------------------------------------------------------
// Spectral-constant table for the classical families and (F4, alpha_4).
// Entries are consumed as exact table data; nothing here touches tensors.

enum class CSpaceFamily { B, C, D, F4 };

inline std::string family_name(CSpaceFamily f) {
  switch (f) {
    case CSpaceFamily::B: return "B";
    case CSpaceFamily::C: return "C";
    case CSpaceFamily::D: return "D";
    case CSpaceFamily::F4: return "F4";
  }
  return "?";
}

struct CSpaceEntry {
  CSpaceFamily family;
  int r = 0;
  int i = 0;
  Rational lambda;                        // Einstein constant
  std::vector<Rational> nu1_candidates;   // smallest eigenvalue of the symmetric curvature action
  std::optional<Rational> nu;             // largest eigenvalue, when tabulated
};

// Parameter ranges: B_r (r>=3, 1<i<r), C_r (r>=3, 1<i<r), D_r (r>=4, 1<i<r-1);
// the F4 entry is fixed.
inline CSpaceEntry cspace_entry(CSpaceFamily family, int r = 0, int i = 0) {
  CSpaceEntry e;
  e.family = family;
  e.r = r;
  e.i = i;
  auto fail = [&](const std::string& constraint) {
    std::ostringstream os;
    os << "cspace_entry(" << family_name(family) << ", r=" << r << ", i=" << i << "): violates " << constraint;
    throw std::invalid_argument(os.str());
  };
  switch (family) {
    case CSpaceFamily::B:
      if (r < 3) fail("r >= 3");
      if (!(1 < i && i < r)) fail("1 < i < r");
      e.lambda = Rational(2 * r - i);
      e.nu1_candidates = {Rational(-2 * (r - i) + 1), Rational(-2)};
      break;
    case CSpaceFamily::C:
      if (r < 3) fail("r >= 3");
      if (!(1 < i && i < r)) fail("1 < i < r");
      e.lambda = Rational(2 * r - i + 1);
      e.nu1_candidates = {Rational(-2 * (r - i + 1))};
      break;
    case CSpaceFamily::D:
      if (r < 4) fail("r >= 4");
      if (!(1 < i && i < r - 1)) fail("1 < i < r-1");
      e.lambda = Rational(2 * r - i - 1);
      e.nu1_candidates = {Rational(-2 * (r - i) + 2), Rational(-2)};
      break;
    case CSpaceFamily::F4:
      e.r = 4;
      e.i = 4;
      e.lambda = Rational(11, 2);
      e.nu1_candidates = {Rational(-5)};
      e.nu = Rational(1);
      break;
  }
  return e;
}

struct CSpaceMargins {
  Rational worst_nu1;              // min over tabulated candidates
  Rational lambda_plus_nu1;        // full-strength margin
  Rational lambda_plus_hq_nu1;     // lambda + (q+1)/(2q) * nu1, worst case
  std::optional<Rational> lambda_minus_nu;
  bool positive_full = false;
  bool positive_hq = false;
  bool positive_nu = true;  // vacuously true when nu is unknown
};

inline CSpaceMargins cspace_check(const CSpaceEntry& e, int q) {
  if (q < 1) throw std::invalid_argument("cspace_check: q >= 1 required");
  CSpaceMargins m;
  m.worst_nu1 = *std::min_element(e.nu1_candidates.begin(), e.nu1_candidates.end());
  m.lambda_plus_nu1 = e.lambda + m.worst_nu1;
  m.lambda_plus_hq_nu1 = e.lambda + Rational(q + 1, 2 * q) * m.worst_nu1;
  m.positive_full = m.lambda_plus_nu1 > Rational(0);
  m.positive_hq = m.lambda_plus_hq_nu1 > Rational(0);
  if (e.nu) {
    m.lambda_minus_nu = e.lambda - *e.nu;
    m.positive_nu = *m.lambda_minus_nu > Rational(0);
  }
  return m;
}

struct CSpaceSweepReport {
  int entries = 0;
  int violations = 0;
  std::vector<std::string> violation_details;
};

// Enumerates every classical entry with rank <= max_r and checks all margins
// for q' = 1..q. Exact arithmetic throughout.
inline CSpaceSweepReport cspace_sweep(int max_r, int q) {
  CSpaceSweepReport rep;
  auto visit = [&](const CSpaceEntry& e) {
    ++rep.entries;
    for (int qq = 1; qq <= q; ++qq) {
      const CSpaceMargins m = cspace_check(e, qq);
      if (!m.positive_full || !m.positive_hq || !m.positive_nu) {
        ++rep.violations;
        std::ostringstream os;
        os << family_name(e.family) << " r=" << e.r << " i=" << e.i << " q=" << qq;
        rep.violation_details.push_back(os.str());
      }
    }
  };
  for (int r = 3; r <= max_r; ++r)
    for (int i = 2; i < r; ++i) {
      visit(cspace_entry(CSpaceFamily::B, r, i));
      visit(cspace_entry(CSpaceFamily::C, r, i));
    }
  for (int r = 4; r <= max_r; ++r)
    for (int i = 2; i < r - 1; ++i) visit(cspace_entry(CSpaceFamily::D, r, i));
  return rep;
}

}  // namespace kcurv

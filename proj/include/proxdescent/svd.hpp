#pragma once

#include "proxdescent/core.hpp"

namespace proxdescent {

/// Thin SVD A = U diag(s) V^T with k = min(rows, cols) and s sorted in
/// decreasing order.
struct SvdResult {
  Matrix u;
  Vector s;
  Matrix v;
  int sweeps = 0;
};

struct JacobiOptions {
  double tol = 1e-12;  ///< on |<a_i,a_j>| / (|a_i||a_j|)
  int max_sweeps = 60;
};

/// One-sided (Hestenes) Jacobi SVD. Throws SolverError if the off-diagonal
/// measure does not drop below tol within max_sweeps.
SvdResult jacobi_svd(const Matrix& a, const JacobiOptions& opts = {});

}  // namespace proxdescent

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "proxdescent/core.hpp"
#include "proxdescent/outer.hpp"

namespace proxdescent {

struct IdentificationReport {
  std::vector<std::pair<int, ManifoldSignature>> signatures;  ///< of z_k = c(x_k) + grad c(x_k) d_k
  /// First k after which the signature stays constant. Requires at least
  /// three trailing identical signatures.
  std::optional<int> stabilized_at;
  ManifoldSignature final_signature;
  std::vector<std::pair<int, Vector>> multipliers;
  /// Last multiplier when the last five vary by at most the tail tolerance.
  std::optional<Vector> multiplier_limit;
  /// max_k |grad c(x_k)^T v_k + mu_k d_k| / (1 + mu_k |d_k|)
  double max_stationarity = 0.0;
  /// Every v_k passed subgrad_residual(z_k, v_k, 1e-6).
  bool multipliers_in_subdifferential = true;
};

struct ReportOptions {
  double multiplier_tol = 1e-6;
  double signature_tol = 1e-6;
  double subgrad_tol = 1e-6;
};

IdentificationReport build_report(const std::vector<IterateRecord>& trace, const ProblemInstance& p,
                                  const ReportOptions& opts = {});

/// Minimal K such that signatures[K..] are all equal, when at least
/// `min_trailing` entries share the final value.
std::optional<std::size_t> stabilization_index(const std::vector<ManifoldSignature>& sigs, std::size_t min_trailing = 3);

/// Multipliers for a finite polyhedral outer function at x: weights l >= 0
/// on the active pieces with sum l_i [grad c(x)^T h_i; 1] = [0; 1].
struct PolyhedralMultipliers {
  std::vector<int> active;
  Vector lambda;  ///< one weight per active piece
  Vector v;       ///< sum l_i h_i
  double residual = 0.0;
  double min_weight = 0.0;
};

/// Nonnegative least-squares recovery over the simplex.
PolyhedralMultipliers recover_polyhedral_multipliers(const PolyhedralMax& h, const Matrix& jac, const Vector& c,
                                                     double active_tol);

/// Direct (least-squares) solve of the square or overdetermined system
/// sum l_i [grad c^T h_i; 1] = [0; 1] on the given active pieces.
PolyhedralMultipliers solve_multiplier_system(const PolyhedralMax& h, const Matrix& jac, const std::vector<int>& active);

/// Structured text: one "key: value" per line.
std::string format_report(const IdentificationReport& r);

}  // namespace proxdescent

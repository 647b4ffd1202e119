#pragma once

#include "proxdescent/core.hpp"

#include <memory>
#include <string>
#include <vector>

namespace proxdescent {

// ---------------------------------------------------------------------------
// Closed-form prox kernels
// ---------------------------------------------------------------------------

/// Soft thresholding: 0 where |y_i| <= alpha, otherwise y_i moved toward zero
/// by alpha.
Vector shrink(const Vector& y, double alpha);

/// Block soft thresholding: z_g = max(0, 1 - alpha/|y_g|) y_g per group.
/// `groups` must partition {0, ..., y.size()-1}.
Vector group_shrink(const Vector& y, const std::vector<std::vector<int>>& groups, double alpha);

/// Componentwise minimizer of phi_T(z) + (w/2)(z - y)^2 for the Huber phi_T.
Vector huber_prox(const Vector& y, double threshold, double w);

/// Singular-value thresholding of a rows x cols matrix: shrink the singular
/// values of Y by reg_weight / w.
Matrix nuclear_prox(const Matrix& y, double w, double reg_weight);

/// Scalar nonconvex prox result. `tie` is set when two distinct candidates
/// attain the global value to within rounding.
struct ScalarProx {
  double z = 0.0;
  bool tie = false;
};

/// argmin over z of (1 - exp(-alpha|z|)) + (w/2)(z - y)^2.
ScalarProx mangasarian_prox(double y, double alpha, double w, ProxPolicy policy);

/// argmin over z of the clipped-concave penalty phi_{lambda,a}(z) + (w/2)(z - y)^2.
ScalarProx zhang_prox(double y, double lambda, double a, double w, ProxPolicy policy);

/// Value of the clipped-concave penalty.
double zhang_phi(double z, double lambda, double a);
double huber_phi(double z, double threshold);

// ---------------------------------------------------------------------------
// Regularizers r: R^n -> (-inf, +inf]
// ---------------------------------------------------------------------------

class Regularizer {
 public:
  virtual ~Regularizer() = default;
  virtual int dim() const = 0;
  virtual ExtReal eval(const Vector& x) const = 0;
  /// argmin_z r(z) + (w/2)|z - y|^2.
  virtual Vector prox(const Vector& y, double w, ProxPolicy policy) const = 0;
  /// Whether u lies in the subdifferential of r at x, up to tol.
  virtual bool subgrad_residual(const Vector& x, const Vector& u, double tol) const = 0;
  virtual ManifoldSignature signature(const Vector& x, double tol) const = 0;
  virtual bool in_domain(const Vector& x) const { return eval(x).is_finite(); }
  virtual bool is_convex() const { return true; }
  virtual std::string name() const = 0;
  /// r(x + dx) - r(x), +inf outside the domain.
  virtual double increment(const Vector& x, const Vector& dx) const;
};

using RegularizerPtr = std::shared_ptr<const Regularizer>;

class L1Norm final : public Regularizer {
 public:
  explicit L1Norm(int n);
  int dim() const override { return n_; }
  ExtReal eval(const Vector& x) const override;
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  bool subgrad_residual(const Vector& x, const Vector& u, double tol) const override;
  ManifoldSignature signature(const Vector& x, double tol) const override;
  std::string name() const override { return "l1"; }
  double increment(const Vector& x, const Vector& dx) const override;

 private:
  int n_;
};

/// Sum of Euclidean norms over a partition of the coordinates.
class GroupL2Norm final : public Regularizer {
 public:
  explicit GroupL2Norm(std::vector<std::vector<int>> groups);
  int dim() const override { return n_; }
  ExtReal eval(const Vector& x) const override;
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  bool subgrad_residual(const Vector& x, const Vector& u, double tol) const override;
  ManifoldSignature signature(const Vector& x, double tol) const override;
  std::string name() const override { return "group_l2"; }
  double increment(const Vector& x, const Vector& dx) const override;
  const std::vector<std::vector<int>>& groups() const { return groups_; }

 private:
  std::vector<std::vector<int>> groups_;
  int n_ = 0;
};

/// |x|^2.
class SquaredL2 final : public Regularizer {
 public:
  explicit SquaredL2(int n);
  int dim() const override { return n_; }
  ExtReal eval(const Vector& x) const override;
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  bool subgrad_residual(const Vector& x, const Vector& u, double tol) const override;
  ManifoldSignature signature(const Vector& x, double tol) const override;
  std::string name() const override { return "squared_l2"; }
  double increment(const Vector& x, const Vector& dx) const override;

 private:
  int n_;
};

class HuberSum final : public Regularizer {
 public:
  HuberSum(int n, double threshold);
  int dim() const override { return n_; }
  ExtReal eval(const Vector& x) const override;
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  bool subgrad_residual(const Vector& x, const Vector& u, double tol) const override;
  /// Per component: 0 in the quadratic zone, +/-1 in the linear zones.
  ManifoldSignature signature(const Vector& x, double tol) const override;
  std::string name() const override { return "huber"; }
  double threshold() const { return threshold_; }

 private:
  int n_;
  double threshold_;
};

/// sum_i 1 - exp(-alpha |x_i|).
class MangasarianExp final : public Regularizer {
 public:
  MangasarianExp(int n, double alpha);
  int dim() const override { return n_; }
  ExtReal eval(const Vector& x) const override;
  double increment(const Vector& x, const Vector& dx) const override;
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  bool subgrad_residual(const Vector& x, const Vector& u, double tol) const override;
  ManifoldSignature signature(const Vector& x, double tol) const override;
  bool is_convex() const override { return false; }
  std::string name() const override { return "mangasarian"; }
  double alpha() const { return alpha_; }

 private:
  int n_;
  double alpha_;
};

/// sum_i phi(x_i) with phi linear near zero, concave quadratic in the middle
/// and constant beyond a*lambda.
class ZhangPhi final : public Regularizer {
 public:
  ZhangPhi(int n, double lambda, double a);
  int dim() const override { return n_; }
  ExtReal eval(const Vector& x) const override;
  double increment(const Vector& x, const Vector& dx) const override;
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  bool subgrad_residual(const Vector& x, const Vector& u, double tol) const override;
  ManifoldSignature signature(const Vector& x, double tol) const override;
  bool is_convex() const override { return false; }
  std::string name() const override { return "zhang"; }
  double lambda() const { return lambda_; }
  double a() const { return a_; }

 private:
  int n_;
  double lambda_;
  double a_;
};

/// Sum of singular values of a rows x cols matrix stored column-major.
class NuclearNorm final : public Regularizer {
 public:
  NuclearNorm(int rows, int cols);
  int dim() const override { return rows_ * cols_; }
  ExtReal eval(const Vector& x) const override;
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  bool subgrad_residual(const Vector& x, const Vector& u, double tol) const override;
  /// Rank: number of singular values above tol.
  ManifoldSignature signature(const Vector& x, double tol) const override;
  std::string name() const override { return "nuclear"; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Matrix reshape(const Vector& x) const;

 private:
  int rows_;
  int cols_;
};

/// Indicator of the box lower <= x <= upper (bounds may be infinite).
class BoxIndicator final : public Regularizer {
 public:
  BoxIndicator(Vector lower, Vector upper);
  int dim() const override { return static_cast<int>(lower_.size()); }
  ExtReal eval(const Vector& x) const override;
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  bool subgrad_residual(const Vector& x, const Vector& u, double tol) const override;
  /// Per component: -1 at the lower bound, +1 at the upper bound, 0 free.
  ManifoldSignature signature(const Vector& x, double tol) const override;
  bool in_domain(const Vector& x) const override;
  std::string name() const override { return "box"; }
  Vector clamp(const Vector& x) const;
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

 private:
  Vector lower_;
  Vector upper_;
};

// ---------------------------------------------------------------------------
// Outer functions
// ---------------------------------------------------------------------------

/// h(z) = weight * r(z).
class RegularizerOuter final : public OuterFunction {
 public:
  RegularizerOuter(RegularizerPtr reg, double weight);
  int dim() const override { return reg_->dim(); }
  ExtReal eval(const Vector& z) const override;
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  bool subgrad_residual(const Vector& z, const Vector& v, double tol) const override;
  ManifoldSignature signature(const Vector& z, double tol) const override;
  bool in_domain(const Vector& z) const override { return reg_->in_domain(z); }
  bool is_convex() const override { return reg_->is_convex(); }
  std::string name() const override { return reg_->name(); }
  const Regularizer& regularizer() const { return *reg_; }
  double weight() const { return weight_; }

 private:
  RegularizerPtr reg_;
  double weight_;
};

/// h(f, x) = f + reg_weight * r(x) on R^{1+n}.
class RegularizedComposite final : public OuterFunction {
 public:
  RegularizedComposite(RegularizerPtr reg, double reg_weight);
  int dim() const override { return 1 + reg_->dim(); }
  ExtReal eval(const Vector& z) const override;
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  bool subgrad_residual(const Vector& z, const Vector& v, double tol) const override;
  ManifoldSignature signature(const Vector& z, double tol) const override;
  bool in_domain(const Vector& z) const override;
  bool is_convex() const override { return reg_->is_convex(); }
  std::string name() const override { return "f+" + reg_->name(); }
  double increment(const Vector& z, const Vector& dz) const override;
  const Regularizer& regularizer() const { return *reg_; }
  const RegularizerPtr& regularizer_ptr() const { return reg_; }
  double reg_weight() const { return reg_weight_; }

  /// reg_weight * r(x) part only.
  ExtReal penalty(const Vector& x) const;
  /// argmin_x reg_weight * r(x) + (w/2)|x - y|^2.
  Vector penalty_prox(const Vector& y, double w, ProxPolicy policy) const;

 private:
  RegularizerPtr reg_;
  double reg_weight_;
};

/// h(f, x) = f + indicator of the box, as a regularized composite.
std::shared_ptr<const RegularizedComposite> make_box_indicator_composite(Vector lower, Vector upper);

/// max_i <h_i, z> + beta_i, with the h_i stored as the columns of `slopes`.
class PolyhedralMax final : public OuterFunction {
 public:
  PolyhedralMax(Matrix slopes, Vector offsets);
  int dim() const override { return static_cast<int>(slopes_.rows()); }
  int num_pieces() const { return static_cast<int>(slopes_.cols()); }
  ExtReal eval(const Vector& z) const override;
  Vector piece_values(const Vector& z) const;
  /// Prox via the dual simplex QP.
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  bool subgrad_residual(const Vector& z, const Vector& v, double tol) const override;
  ManifoldSignature signature(const Vector& z, double tol) const override;
  bool in_domain(const Vector&) const override { return true; }
  std::string name() const override { return "polyhedral"; }
  const Matrix& slopes() const { return slopes_; }
  const Vector& offsets() const { return offsets_; }
  std::vector<int> active_set(const Vector& z, double tol) const;

 private:
  Matrix slopes_;
  Vector offsets_;
};

/// Active pieces (0-based) within tol of the maximum value.
ManifoldSignature polyhedral_signature(const Vector& z, const Matrix& slopes, const Vector& offsets,
                                       double tol);

/// l1-penalty outer function for nonlinear programs on R^{1 + n_eq + n_ineq + n}:
/// h(f, g, x) = f + nu sum|g_eq| + nu sum max(0, g_ineq) + indicator_box(x).
class L1PenaltyComposite final : public OuterFunction {
 public:
  L1PenaltyComposite(int n_eq, int n_ineq, double nu, Vector lower, Vector upper);
  int dim() const override { return 1 + n_eq_ + n_ineq_ + static_cast<int>(lower_.size()); }
  ExtReal eval(const Vector& z) const override;
  double increment(const Vector& z, const Vector& dz) const override;
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  bool subgrad_residual(const Vector& z, const Vector& v, double tol) const override;
  /// Sign pattern over (g_eq, g_ineq active-or-not, box states).
  ManifoldSignature signature(const Vector& z, double tol) const override;
  bool in_domain(const Vector& z) const override;
  std::string name() const override { return "l1_penalty"; }
  int n_eq() const { return n_eq_; }
  int n_ineq() const { return n_ineq_; }
  double nu() const { return nu_; }

 private:
  int n_eq_;
  int n_ineq_;
  double nu_;
  BoxIndicator box_;
  Vector lower_;
};

/// Quadratic a c^2 + b c + e on an interval of the real line.
struct QuadraticPiece {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = true;
  double a = 0.0;
  double b = 0.0;
  double e = 0.0;

  double value(double c) const { return (a * c + b) * c + e; }
  double slope(double c) const { return 2.0 * a * c + b; }
  bool contains(double c) const {
    return (c > lo || (lo_closed && c == lo)) && (c < hi || (hi_closed && c == hi));
  }
};

/// A local minimizer of the one-dimensional model
/// h(c_x + g d) + (mu/2) d^2 for a piecewise-quadratic h.
struct ScalarLocalMin {
  double d = 0.0;
  double value = 0.0;       ///< model value
  double lin_value = 0.0;   ///< h(c_x + g d)
  double multiplier = 0.0;  ///< v with g v + mu d = 0
  int piece = 0;
};

/// Piecewise-quadratic scalar outer function. Pieces must tile the real line
/// in increasing order.
class ScalarPiecewise final : public OuterFunction {
 public:
  ScalarPiecewise(std::vector<QuadraticPiece> pieces, bool convex, std::string label);
  int dim() const override { return 1; }
  ExtReal eval(const Vector& z) const override;
  double value(double c) const;
  Vector prox(const Vector& y, double w, ProxPolicy policy) const override;
  /// Frechet subdifferential test: at a breakpoint, v must lie between the
  /// one-sided slopes of the continuous neighbours.
  bool subgrad_residual(const Vector& z, const Vector& v, double tol) const override;
  /// Active pieces whose closure is within tol of c.
  ManifoldSignature signature(const Vector& z, double tol) const override;
  bool in_domain(const Vector&) const override { return true; }
  bool is_convex() const override { return convex_; }
  std::string name() const override { return label_; }
  const std::vector<QuadraticPiece>& pieces() const { return pieces_; }
  int owner(double c) const;

  /// All local minimizers of h(c_x + g d) + (mu/2) d^2, sorted by model value
  /// (ties broken by |d|).
  std::vector<ScalarLocalMin> local_minimizers(double c_x, double g, double mu) const;

 private:
  std::vector<QuadraticPiece> pieces_;
  bool convex_;
  std::string label_;
};

/// h(c) = -c for c <= 0 and 1 + c for c > 0.
std::shared_ptr<const ScalarPiecewise> make_jump_example();

/// Pointwise maximum of quadratics a_i c^2 + b_i c + e_i, each a_i >= 0.
std::shared_ptr<const ScalarPiecewise> make_max_of_quadratics(const std::vector<QuadraticPiece>& quads);

}  // namespace proxdescent

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxdescent {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised on contract violations such as dimension mismatches.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative kernel fails to reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Real number or +infinity. Negative infinity and NaN are rejected at
/// construction.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  explicit ExtReal(double v);

  static constexpr ExtReal infinity() { return ExtReal(Tag{}); }

  bool is_finite() const { return !infinite_; }
  bool is_infinite() const { return infinite_; }

  /// The finite value, or +inf as a double.
  double value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtReal(a.value_ + b.value_);
  }
  friend ExtReal operator+(ExtReal a, double b) { return a + ExtReal(b); }

  friend bool operator==(ExtReal a, ExtReal b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(ExtReal a, ExtReal b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(ExtReal a, ExtReal b) { return b < a; }
  friend bool operator<=(ExtReal a, ExtReal b) { return !(b < a); }
  friend bool operator>=(ExtReal a, ExtReal b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, ExtReal x);

 private:
  struct Tag {};
  constexpr explicit ExtReal(Tag) : infinite_(true) {}

  double value_ = 0.0;
  bool infinite_ = false;
};

/// Smooth inner map c: R^n -> R^m with a dense Jacobian.
struct SmoothMap {
  int dim_in = 0;
  int dim_out = 0;
  std::function<Vector(const Vector&)> value;
  std::function<Matrix(const Vector&)> jacobian;
  /// Optional c(x + s) - c(x) evaluated without cancellation.
  std::function<Vector(const Vector& x, const Vector& s)> increment;
};

/// map.increment when present, otherwise value(x + s) - value(x).
Vector map_increment(const SmoothMap& map, const Vector& x, const Vector& s);

enum class SignatureKind { SignPattern, ActiveIndexSet, Rank, ActiveGroups, HuberZones, Trivial };

std::string to_string(SignatureKind kind);

/// Discrete descriptor of the active manifold at a point. Comparison is
/// exact on (kind, data).
struct ManifoldSignature {
  SignatureKind kind = SignatureKind::Trivial;
  std::vector<int> data;

  friend bool operator==(const ManifoldSignature&, const ManifoldSignature&) = default;

  /// Compact text form, e.g. "sign:+0-0" or "active:{0,2}" or "rank:2".
  std::string str() const;
};

enum class ProxPolicy { GlobalCandidate, NearestLocal };

/// Contract for outer functions h: R^m -> (-inf, +inf].
class OuterFunction {
 public:
  virtual ~OuterFunction() = default;

  virtual int dim() const = 0;
  virtual ExtReal eval(const Vector& z) const = 0;

  /// argmin_z h(z) + (w/2)|z - y|^2. Nonconvex families select among local
  /// minimizers per `policy`.
  virtual Vector prox(const Vector& y, double w,
                      ProxPolicy policy = ProxPolicy::GlobalCandidate) const = 0;

  /// Whether v is in the (limiting) subdifferential of h at z, up to tol.
  virtual bool subgrad_residual(const Vector& z, const Vector& v, double tol) const = 0;

  virtual ManifoldSignature signature(const Vector& z, double tol) const = 0;
  virtual bool in_domain(const Vector& z) const = 0;

  /// h(z + dz) - h(z), +inf when z + dz leaves the domain. Overrides avoid
  /// the cancellation of subtracting two nearly equal values.
  virtual double increment(const Vector& z, const Vector& dz) const;

  virtual bool has_closed_prox() const { return true; }
  virtual bool is_convex() const { return true; }
  virtual std::string name() const = 0;
};

using OuterPtr = std::shared_ptr<const OuterFunction>;

/// How the inner map is laid out. Regularized problems have
/// c(x) = (f(x), x), so the first Jacobian row is grad f and the rest is
/// the identity.
enum class InnerStructure { General, Regularized };

struct ProblemInstance {
  std::string name;
  std::string family;
  SmoothMap map;
  OuterPtr outer;
  InnerStructure structure = InnerStructure::General;
  Vector x0;
  std::optional<Vector> known_solution;

  int n() const { return map.dim_in; }
  int m() const { return map.dim_out; }
};

struct SolveConfig {
  double tau = 5.0;
  double sigma = 0.1;
  double mu_min = 1e-6;
  double mu0 = 1.0;
  double mu_max = 1e12;
  double tol_crit = 1e-8;
  int max_iters = 10000;
  ProxPolicy prox_policy = ProxPolicy::GlobalCandidate;
  std::uint64_t seed = 0;
  /// Subproblem certificate tolerance for the iterative solvers.
  double tol_gap = 1e-10;
  /// Tolerance used when computing manifold signatures.
  double signature_tol = 1e-6;

  /// Throws std::invalid_argument when the parameter invariants fail.
  void validate() const;
};

struct IterateRecord {
  int k = 0;
  Vector x;  ///< iterate x_k at which the subproblem was solved
  double obj = 0.0;
  double obj_next = 0.0;
  double mu_used = 0.0;
  double d_norm = 0.0;
  double pred_decrease = 0.0;
  double actual_decrease = 0.0;
  double crit_measure = 0.0;
  double restoration_offset = 0.0;  ///< |x^+ - (x + d)|
  ManifoldSignature signature;      ///< of c(x) + grad c(x) d
  int inner_rejections = 0;
  Vector d;
  Vector multiplier;
  Vector model_point;  ///< c(x) + grad c(x) d
};

/// h(c(x)).
ExtReal composite_eval(const ProblemInstance& p, const Vector& x);

/// h(c(x) + grad c(x) d).
ExtReal linearized_eval(const ProblemInstance& p, const Vector& x, const Vector& d);

void require_dim(const Vector& v, int expected, const char* what);

}  // namespace proxdescent

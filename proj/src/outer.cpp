#include "proxdescent/outer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "proxdescent/simplex.hpp"
#include "proxdescent/svd.hpp"

namespace proxdescent {

namespace {

// |a + da| - |a| without cancellation when da is tiny.
double abs_increment(double a, double da) {
  const double b = a + da;
  if (a > 0.0 && b >= 0.0) return da;
  if (a < 0.0 && b <= 0.0) return -da;
  return std::abs(b) - std::abs(a);
}

// max(0, a + da) - max(0, a).
double pos_increment(double a, double da) {
  const double b = a + da;
  if (a > 0.0 && b >= 0.0) return da;
  return std::max(0.0, b) - std::max(0.0, a);
}

int sign_with_tol(double x, double tol) {
  if (x > tol) return 1;
  if (x < -tol) return -1;
  return 0;
}

bool in_interval(double u, double lo, double hi, double tol) { return u >= lo - tol && u <= hi + tol; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

// ---------------------------------------------------------------------------
// L1
// ---------------------------------------------------------------------------

L1Norm::L1Norm(int n) : n_(n) {}

double Regularizer::increment(const Vector& x, const Vector& dx) const {
  const ExtReal next = eval(x + dx);
  if (next.is_infinite()) return std::numeric_limits<double>::infinity();
  return next.value() - eval(x).value();
}

ExtReal L1Norm::eval(const Vector& x) const { return ExtReal(x.lpNorm<1>()); }

double L1Norm::increment(const Vector& x, const Vector& dx) const {
  require_dim(dx, n_, "L1Norm::increment");
  double total = 0.0;
  for (int i = 0; i < n_; ++i) total += abs_increment(x(i), dx(i));
  return total;
}

Vector L1Norm::prox(const Vector& y, double w, ProxPolicy) const { return shrink(y, 1.0 / w); }

bool L1Norm::subgrad_residual(const Vector& x, const Vector& u, double tol) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const int s = sign_with_tol(x(i), tol);
    if (s == 0 ? std::abs(u(i)) > 1.0 + tol : std::abs(u(i) - s) > tol) return false;
  }
  return true;
}

ManifoldSignature L1Norm::signature(const Vector& x, double tol) const {
  ManifoldSignature sig{SignatureKind::SignPattern, std::vector<int>(static_cast<std::size_t>(x.size()))};
  for (Eigen::Index i = 0; i < x.size(); ++i) sig.data[static_cast<std::size_t>(i)] = sign_with_tol(x(i), tol);
  return sig;
}

// ---------------------------------------------------------------------------
// Group L2
// ---------------------------------------------------------------------------

GroupL2Norm::GroupL2Norm(std::vector<std::vector<int>> groups) : groups_(std::move(groups)) {
  std::vector<int> all;
  for (const auto& g : groups_) {
    if (g.empty()) throw std::invalid_argument("GroupL2Norm: empty group");
    all.insert(all.end(), g.begin(), g.end());
  }
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i] != static_cast<int>(i)) throw std::invalid_argument("GroupL2Norm: groups must partition 0..n-1");
  n_ = static_cast<int>(all.size());
}

namespace {
double group_norm(const Vector& x, const std::vector<int>& g) {
  double s = 0.0;
  for (int i : g) s += x(i) * x(i);
  return std::sqrt(s);
}
}  // namespace

ExtReal GroupL2Norm::eval(const Vector& x) const {
  double total = 0.0;
  for (const auto& g : groups_) total += group_norm(x, g);
  return ExtReal(total);
}

double GroupL2Norm::increment(const Vector& x, const Vector& dx) const {
  require_dim(dx, n_, "GroupL2Norm::increment");
  double total = 0.0;
  for (const auto& g : groups_) {
    double before = 0.0;
    double after = 0.0;
    double cross = 0.0;
    for (int i : g) {
      before += x(i) * x(i);
      after += (x(i) + dx(i)) * (x(i) + dx(i));
      cross += (2.0 * x(i) + dx(i)) * dx(i);
    }
    const double denom = std::sqrt(before) + std::sqrt(after);
    total += denom > 0.0 ? cross / denom : 0.0;
  }
  return total;
}

Vector GroupL2Norm::prox(const Vector& y, double w, ProxPolicy) const { return group_shrink(y, groups_, 1.0 / w); }

bool GroupL2Norm::subgrad_residual(const Vector& x, const Vector& u, double tol) const {
  for (const auto& g : groups_) {
    const double nx = group_norm(x, g);
    if (nx <= tol) {
      if (group_norm(u, g) > 1.0 + tol) return false;
    } else {
      double err = 0.0;
      for (int i : g) err += std::pow(u(i) - x(i) / nx, 2);
      if (std::sqrt(err) > tol) return false;
    }
  }
  return true;
}

ManifoldSignature GroupL2Norm::signature(const Vector& x, double tol) const {
  ManifoldSignature sig{SignatureKind::ActiveGroups, {}};
  for (std::size_t k = 0; k < groups_.size(); ++k)
    if (group_norm(x, groups_[k]) > tol) sig.data.push_back(static_cast<int>(k));
  return sig;
}

// ---------------------------------------------------------------------------
// Squared L2
// ---------------------------------------------------------------------------

SquaredL2::SquaredL2(int n) : n_(n) {}

ExtReal SquaredL2::eval(const Vector& x) const { return ExtReal(x.squaredNorm()); }

double SquaredL2::increment(const Vector& x, const Vector& dx) const {
  return (2.0 * x + dx).dot(dx);
}

Vector SquaredL2::prox(const Vector& y, double w, ProxPolicy) const { return (w / (2.0 + w)) * y; }

bool SquaredL2::subgrad_residual(const Vector& x, const Vector& u, double tol) const {
  return (u - 2.0 * x).lpNorm<Eigen::Infinity>() <= tol;
}

ManifoldSignature SquaredL2::signature(const Vector&, double) const { return {}; }

// ---------------------------------------------------------------------------
// Huber
// ---------------------------------------------------------------------------

HuberSum::HuberSum(int n, double threshold) : n_(n), threshold_(threshold) {
  require_positive(threshold, "HuberSum threshold");
}

ExtReal HuberSum::eval(const Vector& x) const {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) total += huber_phi(x(i), threshold_);
  return ExtReal(total);
}

Vector HuberSum::prox(const Vector& y, double w, ProxPolicy) const { return huber_prox(y, threshold_, w); }

bool HuberSum::subgrad_residual(const Vector& x, const Vector& u, double tol) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double slope = std::abs(x(i)) <= threshold_ ? x(i) : std::copysign(threshold_, x(i));
    if (std::abs(u(i) - slope) > tol) return false;
  }
  return true;
}

ManifoldSignature HuberSum::signature(const Vector& x, double) const {
  ManifoldSignature sig{SignatureKind::HuberZones, std::vector<int>(static_cast<std::size_t>(x.size()))};
  for (Eigen::Index i = 0; i < x.size(); ++i)
    sig.data[static_cast<std::size_t>(i)] = std::abs(x(i)) <= threshold_ ? 0 : (x(i) > 0 ? 1 : -1);
  return sig;
}

// ---------------------------------------------------------------------------
// Mangasarian exponential penalty
// ---------------------------------------------------------------------------

MangasarianExp::MangasarianExp(int n, double alpha) : n_(n), alpha_(alpha) {
  require_positive(alpha, "MangasarianExp alpha");
}

ExtReal MangasarianExp::eval(const Vector& x) const {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) total += 1.0 - std::exp(-alpha_ * std::abs(x(i)));
  return ExtReal(total);
}

double MangasarianExp::increment(const Vector& x, const Vector& dx) const {
  require_dim(dx, n_, "MangasarianExp::increment");
  double total = 0.0;
  for (int i = 0; i < n_; ++i)
    total -= std::exp(-alpha_ * std::abs(x(i))) * std::expm1(-alpha_ * abs_increment(x(i), dx(i)));
  return total;
}

Vector MangasarianExp::prox(const Vector& y, double w, ProxPolicy policy) const {
  Vector z(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) z(i) = mangasarian_prox(y(i), alpha_, w, policy).z;
  return z;
}

bool MangasarianExp::subgrad_residual(const Vector& x, const Vector& u, double tol) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) <= tol) {
      if (std::abs(u(i)) > alpha_ + tol) return false;
    } else {
      const double slope = std::copysign(alpha_ * std::exp(-alpha_ * std::abs(x(i))), x(i));
      if (std::abs(u(i) - slope) > tol) return false;
    }
  }
  return true;
}

ManifoldSignature MangasarianExp::signature(const Vector& x, double tol) const {
  return L1Norm(n_).signature(x, tol);
}

// ---------------------------------------------------------------------------
// Zhang clipped-concave penalty
// ---------------------------------------------------------------------------

ZhangPhi::ZhangPhi(int n, double lambda, double a) : n_(n), lambda_(lambda), a_(a) {
  require_positive(lambda, "ZhangPhi lambda");
  if (!(a > 1.0)) throw std::invalid_argument("ZhangPhi a must exceed 1");
}

ExtReal ZhangPhi::eval(const Vector& x) const {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) total += zhang_phi(x(i), lambda_, a_);
  return ExtReal(total);
}

double ZhangPhi::increment(const Vector& x, const Vector& dx) const {
  require_dim(dx, n_, "ZhangPhi::increment");
  const double knee = a_ * lambda_;
  double total = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double t = std::abs(x(i));
    const double s = std::abs(x(i) + dx(i));
    const double dt = abs_increment(x(i), dx(i));
    if (t <= lambda_ && s <= lambda_)
      total += lambda_ * dt;
    else if (t > knee && s > knee)
      continue;
    else if (t > lambda_ && s > lambda_ && t <= knee && s <= knee)
      total -= (t + s - 2.0 * knee) * dt / (2.0 * (a_ - 1.0));
    else
      total += zhang_phi(x(i) + dx(i), lambda_, a_) - zhang_phi(x(i), lambda_, a_);
  }
  return total;
}

Vector ZhangPhi::prox(const Vector& y, double w, ProxPolicy policy) const {
  Vector z(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) z(i) = zhang_prox(y(i), lambda_, a_, w, policy).z;
  return z;
}

bool ZhangPhi::subgrad_residual(const Vector& x, const Vector& u, double tol) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double t = std::abs(x(i));
    if (t <= tol) {
      if (std::abs(u(i)) > lambda_ + tol) return false;
      continue;
    }
    double slope = 0.0;
    if (t <= lambda_) {
      slope = lambda_;
    } else if (t <= a_ * lambda_) {
      slope = (a_ * lambda_ - t) / (a_ - 1.0);
    }
    if (std::abs(u(i) - std::copysign(slope, x(i))) > tol) return false;
  }
  return true;
}

ManifoldSignature ZhangPhi::signature(const Vector& x, double tol) const { return L1Norm(n_).signature(x, tol); }

// ---------------------------------------------------------------------------
// Nuclear norm
// ---------------------------------------------------------------------------

NuclearNorm::NuclearNorm(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("NuclearNorm: dimensions must be positive");
}

Matrix NuclearNorm::reshape(const Vector& x) const {
  require_dim(x, rows_ * cols_, "NuclearNorm vector");
  return Eigen::Map<const Matrix>(x.data(), rows_, cols_);
}

ExtReal NuclearNorm::eval(const Vector& x) const { return ExtReal(jacobi_svd(reshape(x)).s.sum()); }

Vector NuclearNorm::prox(const Vector& y, double w, ProxPolicy) const {
  const Matrix z = nuclear_prox(reshape(y), w, 1.0);
  return Eigen::Map<const Vector>(z.data(), z.size());
}

bool NuclearNorm::subgrad_residual(const Vector& x, const Vector& u, double tol) const {
  const SvdResult svd = jacobi_svd(reshape(x));
  const Matrix g = reshape(u);
  Eigen::Index r = 0;
  while (r < svd.s.size() && svd.s(r) > tol) ++r;
  const Matrix ur = svd.u.leftCols(r);
  const Matrix vr = svd.v.leftCols(r);
  const Matrix w = g - ur * vr.transpose();
  if (r > 0) {
    if ((ur.transpose() * w).norm() > tol) return false;
    if ((w * vr).norm() > tol) return false;
  }
  const Vector ws = jacobi_svd(w).s;
  return ws.size() == 0 || ws(0) <= 1.0 + tol;
}

ManifoldSignature NuclearNorm::signature(const Vector& x, double tol) const {
  const SvdResult svd = jacobi_svd(reshape(x));
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.s.size(); ++i)
    if (svd.s(i) > tol) ++rank;
  return {SignatureKind::Rank, {rank}};
}

// ---------------------------------------------------------------------------
// Box indicator
// ---------------------------------------------------------------------------

BoxIndicator::BoxIndicator(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw DimensionError("BoxIndicator: bound lengths differ");
  for (Eigen::Index i = 0; i < lower_.size(); ++i)
    if (!(lower_(i) <= upper_(i))) throw std::invalid_argument("BoxIndicator: lower must not exceed upper");
}

bool BoxIndicator::in_domain(const Vector& x) const {
  return ((x.array() >= lower_.array()) && (x.array() <= upper_.array())).all();
}

ExtReal BoxIndicator::eval(const Vector& x) const { return in_domain(x) ? ExtReal(0.0) : ExtReal::infinity(); }

Vector BoxIndicator::clamp(const Vector& x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }

Vector BoxIndicator::prox(const Vector& y, double, ProxPolicy) const { return clamp(y); }

bool BoxIndicator::subgrad_residual(const Vector& x, const Vector& u, double tol) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) < lower_(i) - tol || x(i) > upper_(i) + tol) return false;
    const bool at_lower = x(i) <= lower_(i) + tol;
    const bool at_upper = x(i) >= upper_(i) - tol;
    if (at_lower && at_upper) continue;
    if (at_lower ? u(i) > tol : (at_upper ? u(i) < -tol : std::abs(u(i)) > tol)) return false;
  }
  return true;
}

ManifoldSignature BoxIndicator::signature(const Vector& x, double tol) const {
  ManifoldSignature sig{SignatureKind::SignPattern, std::vector<int>(static_cast<std::size_t>(x.size()))};
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    int s = 0;
    if (x(i) <= lower_(i) + tol) s = -1;
    else if (x(i) >= upper_(i) - tol) s = 1;
    sig.data[static_cast<std::size_t>(i)] = s;
  }
  return sig;
}

// ---------------------------------------------------------------------------
// Weighted regularizer as an outer function
// ---------------------------------------------------------------------------

RegularizerOuter::RegularizerOuter(RegularizerPtr reg, double weight) : reg_(std::move(reg)), weight_(weight) {
  if (!reg_) throw std::invalid_argument("RegularizerOuter: null regularizer");
  if (!(weight >= 0.0)) throw std::invalid_argument("RegularizerOuter: weight must be nonnegative");
}

ExtReal RegularizerOuter::eval(const Vector& z) const {
  require_dim(z, dim(), "RegularizerOuter::eval");
  const ExtReal r = reg_->eval(z);
  if (r.is_infinite()) return r;
  return ExtReal(weight_ * r.value());
}

Vector RegularizerOuter::prox(const Vector& y, double w, ProxPolicy policy) const {
  require_dim(y, dim(), "RegularizerOuter::prox");
  if (weight_ == 0.0) return y;
  return reg_->prox(y, w / weight_, policy);
}

bool RegularizerOuter::subgrad_residual(const Vector& z, const Vector& v, double tol) const {
  if (weight_ == 0.0) return v.lpNorm<Eigen::Infinity>() <= tol;
  return reg_->subgrad_residual(z, v / weight_, tol / weight_);
}

ManifoldSignature RegularizerOuter::signature(const Vector& z, double tol) const { return reg_->signature(z, tol); }

// ---------------------------------------------------------------------------
// f + reg_weight * r(x)
// ---------------------------------------------------------------------------

RegularizedComposite::RegularizedComposite(RegularizerPtr reg, double reg_weight)
    : reg_(std::move(reg)), reg_weight_(reg_weight) {
  if (!reg_) throw std::invalid_argument("RegularizedComposite: null regularizer");
  if (!(reg_weight >= 0.0)) throw std::invalid_argument("RegularizedComposite: reg_weight must be nonnegative");
}

ExtReal RegularizedComposite::penalty(const Vector& x) const {
  const ExtReal r = reg_->eval(x);
  if (r.is_infinite()) return r;
  return ExtReal(reg_weight_ * r.value());
}

double RegularizedComposite::increment(const Vector& z, const Vector& dz) const {
  require_dim(z, dim(), "RegularizedComposite::increment");
  require_dim(dz, dim(), "RegularizedComposite::increment");
  const Vector x = z.tail(z.size() - 1);
  const Vector dx = dz.tail(dz.size() - 1);
  if (!reg_->in_domain(x + dx)) return std::numeric_limits<double>::infinity();
  if (reg_weight_ == 0.0) return dz(0);
  return dz(0) + reg_weight_ * reg_->increment(x, dx);
}

ExtReal RegularizedComposite::eval(const Vector& z) const {
  require_dim(z, dim(), "RegularizedComposite::eval");
  return ExtReal(z(0)) + penalty(z.tail(z.size() - 1));
}

bool RegularizedComposite::in_domain(const Vector& z) const { return reg_->in_domain(z.tail(z.size() - 1)); }

Vector RegularizedComposite::penalty_prox(const Vector& y, double w, ProxPolicy policy) const {
  // Indicators are invariant to positive scaling, so the box projection
  // applies for any weight, including zero.
  if (reg_weight_ == 0.0 && dynamic_cast<const BoxIndicator*>(reg_.get()) == nullptr) return y;
  if (reg_weight_ == 0.0) return reg_->prox(y, w, policy);
  return reg_->prox(y, w / reg_weight_, policy);
}

Vector RegularizedComposite::prox(const Vector& y, double w, ProxPolicy policy) const {
  require_dim(y, dim(), "RegularizedComposite::prox");
  Vector z(y.size());
  z(0) = y(0) - 1.0 / w;
  z.tail(y.size() - 1) = penalty_prox(y.tail(y.size() - 1), w, policy);
  return z;
}

bool RegularizedComposite::subgrad_residual(const Vector& z, const Vector& v, double tol) const {
  if (std::abs(v(0) - 1.0) > tol) return false;
  const Vector x = z.tail(z.size() - 1);
  const Vector vx = v.tail(v.size() - 1);
  if (dynamic_cast<const BoxIndicator*>(reg_.get()) != nullptr) return reg_->subgrad_residual(x, vx, tol);
  if (reg_weight_ == 0.0) return vx.lpNorm<Eigen::Infinity>() <= tol;
  return reg_->subgrad_residual(x, vx / reg_weight_, tol / reg_weight_);
}

ManifoldSignature RegularizedComposite::signature(const Vector& z, double tol) const {
  if (reg_weight_ == 0.0 && dynamic_cast<const BoxIndicator*>(reg_.get()) == nullptr) return {};
  return reg_->signature(z.tail(z.size() - 1), tol);
}

std::shared_ptr<const RegularizedComposite> make_box_indicator_composite(Vector lower, Vector upper) {
  return std::make_shared<RegularizedComposite>(
      std::make_shared<BoxIndicator>(std::move(lower), std::move(upper)), 1.0);
}

// ---------------------------------------------------------------------------
// Polyhedral max
// ---------------------------------------------------------------------------

PolyhedralMax::PolyhedralMax(Matrix slopes, Vector offsets) : slopes_(std::move(slopes)), offsets_(std::move(offsets)) {
  if (slopes_.cols() < 1) throw std::invalid_argument("PolyhedralMax: need at least one piece");
  if (slopes_.cols() != offsets_.size()) throw DimensionError("PolyhedralMax: slopes/offsets piece count differ");
}

Vector PolyhedralMax::piece_values(const Vector& z) const {
  require_dim(z, dim(), "PolyhedralMax z");
  return slopes_.transpose() * z + offsets_;
}

ExtReal PolyhedralMax::eval(const Vector& z) const { return ExtReal(piece_values(z).maxCoeff()); }

std::vector<int> PolyhedralMax::active_set(const Vector& z, double tol) const {
  return polyhedral_signature(z, slopes_, offsets_, tol).data;
}

Vector PolyhedralMax::prox(const Vector& y, double w, ProxPolicy) const {
  require_dim(y, dim(), "PolyhedralMax::prox");
  // Dual: max over the simplex of sum l_i (<h_i,y> + beta_i) - |H l|^2 / (2w).
  const Matrix gram = slopes_.transpose() * slopes_ / w;
  const Vector lin = piece_values(y);
  const SimplexQpResult r = simplex_qp(gram, lin, 100000, nullptr);
  return y - slopes_ * r.lambda / w;
}

bool PolyhedralMax::subgrad_residual(const Vector& z, const Vector& v, double tol) const {
  const std::vector<int> active = active_set(z, tol);
  Matrix pts(slopes_.rows(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) pts.col(static_cast<Eigen::Index>(k)) = slopes_.col(active[k]);
  return distance_to_hull(pts, v) <= tol;
}

ManifoldSignature PolyhedralMax::signature(const Vector& z, double tol) const {
  return polyhedral_signature(z, slopes_, offsets_, tol);
}

// ---------------------------------------------------------------------------
// l1 penalty for nonlinear programs
// ---------------------------------------------------------------------------

L1PenaltyComposite::L1PenaltyComposite(int n_eq, int n_ineq, double nu, Vector lower, Vector upper)
    : n_eq_(n_eq), n_ineq_(n_ineq), nu_(nu), box_(lower, std::move(upper)), lower_(std::move(lower)) {
  if (n_eq < 0 || n_ineq < 0) throw std::invalid_argument("L1PenaltyComposite: negative constraint count");
  require_positive(nu, "L1PenaltyComposite nu");
}

bool L1PenaltyComposite::in_domain(const Vector& z) const { return box_.in_domain(z.tail(lower_.size())); }

ExtReal L1PenaltyComposite::eval(const Vector& z) const {
  require_dim(z, dim(), "L1PenaltyComposite::eval");
  if (!in_domain(z)) return ExtReal::infinity();
  double total = z(0);
  for (int i = 0; i < n_eq_; ++i) total += nu_ * std::abs(z(1 + i));
  for (int i = 0; i < n_ineq_; ++i) total += nu_ * std::max(0.0, z(1 + n_eq_ + i));
  return ExtReal(total);
}

double L1PenaltyComposite::increment(const Vector& z, const Vector& dz) const {
  require_dim(z, dim(), "L1PenaltyComposite::increment");
  require_dim(dz, dim(), "L1PenaltyComposite::increment");
  if (!in_domain(z + dz)) return std::numeric_limits<double>::infinity();
  double total = dz(0);
  for (int i = 0; i < n_eq_; ++i) total += nu_ * abs_increment(z(1 + i), dz(1 + i));
  for (int i = 0; i < n_ineq_; ++i) total += nu_ * pos_increment(z(1 + n_eq_ + i), dz(1 + n_eq_ + i));
  return total;
}

Vector L1PenaltyComposite::prox(const Vector& y, double w, ProxPolicy) const {
  require_dim(y, dim(), "L1PenaltyComposite::prox");
  Vector z(y.size());
  const double t = nu_ / w;
  z(0) = y(0) - 1.0 / w;
  z.segment(1, n_eq_) = shrink(y.segment(1, n_eq_), t);
  for (int i = 0; i < n_ineq_; ++i) {
    const double yi = y(1 + n_eq_ + i);
    z(1 + n_eq_ + i) = yi > t ? yi - t : (yi < 0.0 ? yi : 0.0);
  }
  z.tail(lower_.size()) = box_.clamp(y.tail(lower_.size()));
  return z;
}

bool L1PenaltyComposite::subgrad_residual(const Vector& z, const Vector& v, double tol) const {
  if (std::abs(v(0) - 1.0) > tol) return false;
  for (int i = 0; i < n_eq_; ++i) {
    const double g = z(1 + i);
    const double u = v(1 + i);
    const int s = sign_with_tol(g, tol);
    if (s == 0 ? std::abs(u) > nu_ + tol : std::abs(u - s * nu_) > tol) return false;
  }
  for (int i = 0; i < n_ineq_; ++i) {
    const double g = z(1 + n_eq_ + i);
    const double u = v(1 + n_eq_ + i);
    const int s = sign_with_tol(g, tol);
    if (s > 0 ? std::abs(u - nu_) > tol : (s < 0 ? std::abs(u) > tol : !in_interval(u, 0.0, nu_, tol))) return false;
  }
  return box_.subgrad_residual(z.tail(lower_.size()), v.tail(lower_.size()), tol);
}

ManifoldSignature L1PenaltyComposite::signature(const Vector& z, double tol) const {
  ManifoldSignature sig{SignatureKind::SignPattern, {}};
  for (int i = 0; i < n_eq_ + n_ineq_; ++i) sig.data.push_back(sign_with_tol(z(1 + i), tol));
  const ManifoldSignature box_sig = box_.signature(z.tail(lower_.size()), tol);
  sig.data.insert(sig.data.end(), box_sig.data.begin(), box_sig.data.end());
  return sig;
}

// ---------------------------------------------------------------------------
// Scalar piecewise quadratic
// ---------------------------------------------------------------------------

ScalarPiecewise::ScalarPiecewise(std::vector<QuadraticPiece> pieces, bool convex, std::string label)
    : pieces_(std::move(pieces)), convex_(convex), label_(std::move(label)) {
  if (pieces_.empty()) throw std::invalid_argument("ScalarPiecewise: no pieces");
  if (!std::isinf(pieces_.front().lo) || !std::isinf(pieces_.back().hi))
    throw std::invalid_argument("ScalarPiecewise: pieces must cover the real line");
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    const auto& prev = pieces_[i - 1];
    const auto& cur = pieces_[i];
    if (prev.hi != cur.lo || prev.hi_closed == cur.lo_closed)
      throw std::invalid_argument("ScalarPiecewise: pieces must tile the line without gaps or overlaps");
  }
}

int ScalarPiecewise::owner(double c) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].contains(c)) return static_cast<int>(i);
  throw std::invalid_argument("ScalarPiecewise: point not covered");
}

double ScalarPiecewise::value(double c) const { return pieces_[static_cast<std::size_t>(owner(c))].value(c); }

ExtReal ScalarPiecewise::eval(const Vector& z) const {
  require_dim(z, 1, "ScalarPiecewise::eval");
  return ExtReal(value(z(0)));
}

std::vector<ScalarLocalMin> ScalarPiecewise::local_minimizers(double c_x, double g, double mu) const {
  require_positive(mu, "local_minimizers mu");
  if (g == 0.0) {
    const auto& p = pieces_[static_cast<std::size_t>(owner(c_x))];
    const double h = p.value(c_x);
    return {ScalarLocalMin{0.0, h, h, p.slope(c_x), owner(c_x)}};
  }

  // Candidate points carry their exact c so that breakpoints are classified
  // without rounding.
  struct Point {
    double d;
    double c;
  };
  std::vector<Point> points;
  for (const auto& p : pieces_) {
    if (std::isfinite(p.lo)) points.push_back({(p.lo - c_x) / g, p.lo});
    const double curv = 2.0 * p.a * g * g + mu;
    if (curv > 0.0) {
      const double d = -(p.slope(c_x) * g) / curv;
      const double c = c_x + g * d;
      if (p.contains(c)) points.push_back({d, c});
    }
  }

  std::vector<ScalarLocalMin> out;
  for (const Point& pt : points) {
    const int own = owner(pt.c);
    const double lin = pieces_[static_cast<std::size_t>(own)].value(pt.c);
    const double f = lin + 0.5 * mu * pt.d * pt.d;
    const double vtol = 1e-12 * (1.0 + std::abs(f));

    // Pieces governing c just below and just above pt.c.
    int below = -1;
    int above = -1;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      if (p.lo < pt.c && pt.c <= p.hi) below = static_cast<int>(i);
      if (p.lo <= pt.c && pt.c < p.hi) above = static_cast<int>(i);
    }
    // In d-space the sides swap when g < 0.
    const int left = g > 0.0 ? below : above;
    const int right = g > 0.0 ? above : below;

    auto side_ok = [&](int piece, bool is_left) {
      const auto& p = pieces_[static_cast<std::size_t>(piece)];
      const double limit = p.value(pt.c) + 0.5 * mu * pt.d * pt.d;
      if (limit > f + vtol) return true;
      if (limit < f - vtol) return false;
      const double slope = p.slope(pt.c) * g + mu * pt.d;
      const double curv = 2.0 * p.a * g * g + mu;
      const double stol = 1e-10 * (1.0 + std::abs(p.slope(pt.c) * g) + std::abs(mu * pt.d));
      if (is_left) return slope < -stol || (std::abs(slope) <= stol && curv >= 0.0);
      return slope > stol || (std::abs(slope) <= stol && curv >= 0.0);
    };
    if (!side_ok(left, true) || !side_ok(right, false)) continue;

    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const ScalarLocalMin& m) {
      return std::abs(m.d - pt.d) <= 1e-13 * (1.0 + std::abs(pt.d));
    });
    if (duplicate) continue;
    out.push_back({pt.d, f, lin, -mu * pt.d / g, own});
  }
  std::stable_sort(out.begin(), out.end(), [](const ScalarLocalMin& a, const ScalarLocalMin& b) {
    if (a.value != b.value) return a.value < b.value;
    return std::abs(a.d) < std::abs(b.d);
  });
  return out;
}

Vector ScalarPiecewise::prox(const Vector& y, double w, ProxPolicy policy) const {
  require_dim(y, 1, "ScalarPiecewise::prox");
  const auto mins = local_minimizers(y(0), 1.0, w);
  if (mins.empty()) throw SolverError("ScalarPiecewise::prox: no local minimizer found");
  auto chosen = mins.begin();
  if (policy == ProxPolicy::NearestLocal) {
    chosen = std::min_element(mins.begin(), mins.end(), [](const ScalarLocalMin& a, const ScalarLocalMin& b) {
      return std::abs(a.d) < std::abs(b.d);
    });
  }
  return Vector::Constant(1, y(0) + chosen->d);
}

bool ScalarPiecewise::subgrad_residual(const Vector& z, const Vector& v, double tol) const {
  require_dim(z, 1, "ScalarPiecewise::subgrad_residual");
  const double c = z(0);
  const double u = v(0);

  auto test_at = [&](double point) {
    const double h = value(point);
    const double vtol = 1e-12 * (1.0 + std::abs(h));
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) {
      if (p.lo < point && point <= p.hi) {  // governs the left side
        const double lim = p.value(point);
        if (lim < h - vtol) return false;
        if (lim <= h + vtol) lower = std::max(lower, p.slope(point));
      }
      if (p.lo <= point && point < p.hi) {  // governs the right side
        const double lim = p.value(point);
        if (lim < h - vtol) return false;
        if (lim <= h + vtol) upper = std::min(upper, p.slope(point));
      }
    }
    return u >= lower - tol && u <= upper + tol;
  };

  if (test_at(c)) return true;
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    const double bp = pieces_[i].lo;
    if (std::abs(bp - c) <= tol && test_at(bp)) return true;
  }
  return false;
}

ManifoldSignature ScalarPiecewise::signature(const Vector& z, double tol) const {
  require_dim(z, 1, "ScalarPiecewise::signature");
  ManifoldSignature sig{SignatureKind::ActiveIndexSet, {}};
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (z(0) >= pieces_[i].lo - tol && z(0) <= pieces_[i].hi + tol) sig.data.push_back(static_cast<int>(i));
  return sig;
}

std::shared_ptr<const ScalarPiecewise> make_jump_example() {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<QuadraticPiece> pieces = {
      {-inf, 0.0, false, true, 0.0, -1.0, 0.0},
      {0.0, inf, false, false, 0.0, 1.0, 1.0},
  };
  return std::make_shared<ScalarPiecewise>(std::move(pieces), false, "jump");
}

std::shared_ptr<const ScalarPiecewise> make_max_of_quadratics(const std::vector<QuadraticPiece>& quads) {
  if (quads.empty()) throw std::invalid_argument("make_max_of_quadratics: no quadratics");
  for (const auto& q : quads)
    if (q.a < 0.0) throw std::invalid_argument("make_max_of_quadratics: pieces must be convex");

  std::vector<double> breaks;
  for (std::size_t i = 0; i < quads.size(); ++i) {
    for (std::size_t j = i + 1; j < quads.size(); ++j) {
      const double a = quads[i].a - quads[j].a;
      const double b = quads[i].b - quads[j].b;
      const double e = quads[i].e - quads[j].e;
      if (a == 0.0) {
        if (b != 0.0) breaks.push_back(-e / b);
      } else {
        const double disc = b * b - 4.0 * a * e;
        if (disc >= 0.0) {
          const double sq = std::sqrt(disc);
          breaks.push_back((-b - sq) / (2.0 * a));
          breaks.push_back((-b + sq) / (2.0 * a));
        }
      }
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto argmax_at = [&](double c) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < quads.size(); ++i)
      if (quads[i].value(c) > quads[best].value(c)) best = i;
    return best;
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> edges = {-inf};
  edges.insert(edges.end(), breaks.begin(), breaks.end());
  edges.push_back(inf);

  std::vector<QuadraticPiece> pieces;
  std::size_t last = quads.size();
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k];
    const double hi = edges[k + 1];
    double probe = 0.0;
    if (std::isinf(lo) && std::isinf(hi)) probe = 0.0;
    else if (std::isinf(lo)) probe = hi - 1.0;
    else if (std::isinf(hi)) probe = lo + 1.0;
    else probe = 0.5 * (lo + hi);
    const std::size_t idx = argmax_at(probe);
    if (idx == last) {
      pieces.back().hi = hi;
      continue;
    }
    QuadraticPiece p = quads[idx];
    p.lo = lo;
    p.hi = hi;
    p.lo_closed = false;
    p.hi_closed = true;
    pieces.push_back(p);
    last = idx;
  }
  pieces.back().hi_closed = false;
  return std::make_shared<ScalarPiecewise>(std::move(pieces), true, "max_quadratics");
}

}  // namespace proxdescent

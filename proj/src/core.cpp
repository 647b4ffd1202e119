#include "proxdescent/core.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace proxdescent {

ExtReal::ExtReal(double v) : value_(v) {
  if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN is not an extended real");
  if (std::isinf(v)) {
    if (v < 0) throw std::invalid_argument("ExtReal: -inf is not representable");
    infinite_ = true;
    value_ = 0.0;
  }
}

std::ostream& operator<<(std::ostream& os, ExtReal x) {
  if (x.is_infinite()) return os << "+inf";
  return os << x.value();
}

std::string to_string(SignatureKind kind) {
  switch (kind) {
    case SignatureKind::SignPattern: return "sign";
    case SignatureKind::ActiveIndexSet: return "active";
    case SignatureKind::Rank: return "rank";
    case SignatureKind::ActiveGroups: return "groups";
    case SignatureKind::HuberZones: return "huber";
    case SignatureKind::Trivial: return "trivial";
  }
  return "unknown";
}

std::string ManifoldSignature::str() const {
  std::ostringstream os;
  os << to_string(kind) << ':';
  switch (kind) {
    case SignatureKind::SignPattern:
    case SignatureKind::HuberZones:
      for (int s : data) os << (s > 0 ? '+' : (s < 0 ? '-' : '0'));
      break;
    case SignatureKind::ActiveIndexSet:
    case SignatureKind::ActiveGroups: {
      os << '{';
      for (std::size_t i = 0; i < data.size(); ++i) os << (i ? "," : "") << data[i];
      os << '}';
      break;
    }
    case SignatureKind::Rank:
      os << (data.empty() ? 0 : data.front());
      break;
    case SignatureKind::Trivial:
      break;
  }
  return os.str();
}

void SolveConfig::validate() const {
  if (!(tau > 1.0)) throw std::invalid_argument("SolveConfig: tau must exceed 1");
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("SolveConfig: sigma must lie in (0,1)");
  if (!(mu_min > 0.0)) throw std::invalid_argument("SolveConfig: mu_min must be positive");
  if (!(mu0 >= mu_min)) throw std::invalid_argument("SolveConfig: mu0 must be >= mu_min");
  if (!(mu_max >= mu0)) throw std::invalid_argument("SolveConfig: mu_max must be >= mu0");
  if (!(tol_crit > 0.0)) throw std::invalid_argument("SolveConfig: tol_crit must be positive");
  if (max_iters < 0) throw std::invalid_argument("SolveConfig: max_iters must be nonnegative");
}

void require_dim(const Vector& v, int expected, const char* what) {
  if (v.size() != expected) {
    std::ostringstream os;
    os << what << ": expected length " << expected << ", got " << v.size();
    throw DimensionError(os.str());
  }
}

Vector map_increment(const SmoothMap& map, const Vector& x, const Vector& s) {
  if (map.increment) return map.increment(x, s);
  return map.value(x + s) - map.value(x);
}

double OuterFunction::increment(const Vector& z, const Vector& dz) const {
  const ExtReal next = eval(z + dz);
  if (next.is_infinite()) return std::numeric_limits<double>::infinity();
  return next.value() - eval(z).value();
}

ExtReal composite_eval(const ProblemInstance& p, const Vector& x) {
  require_dim(x, p.n(), "composite_eval x");
  Vector c = p.map.value(x);
  require_dim(c, p.m(), "composite_eval c(x)");
  return p.outer->eval(c);
}

ExtReal linearized_eval(const ProblemInstance& p, const Vector& x, const Vector& d) {
  require_dim(x, p.n(), "linearized_eval x");
  require_dim(d, p.n(), "linearized_eval d");
  Vector c = p.map.value(x);
  if (d.isZero(0.0)) return p.outer->eval(c);
  Matrix jac = p.map.jacobian(x);
  return p.outer->eval(c + jac * d);
}

}  // namespace proxdescent

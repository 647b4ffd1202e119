#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "proxdescent/problems.hpp"
#include "proxdescent/svd.hpp"

#ifndef PROXDESCENT_DATA_DIR
#define PROXDESCENT_DATA_DIR "data"
#endif

namespace proxdescent {

namespace {

constexpr int kMaxVars = 200;
constexpr int kMaxRows = 200;
constexpr int kMaxMatrixSide = 50;
constexpr int kMaxAttempts = 100000;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double normal() { return normal_(gen_); }
  double uniform() { return uniform_(gen_); }
  double sign() { return uniform() < 0.5 ? -1.0 : 1.0; }
  Matrix normal(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
  }
  Vector normal(int n) { return normal(n, 1).col(0); }
  /// k distinct sorted indices from {0, ..., n-1}.
  std::vector<int> subset(int n, int k) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i) {
      std::uniform_int_distribution<int> pick(i, n - 1);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(gen_))]);
    }
    idx.resize(static_cast<std::size_t>(k));
    std::sort(idx.begin(), idx.end());
    return idx;
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

int pick(int value, int fallback) { return value > 0 ? value : fallback; }

void check_cap(bool ok, const std::string& what) {
  if (!ok) throw InstanceError("generate: " + what);
}

InstanceFile start(Family family, std::uint64_t seed) {
  InstanceFile f;
  f.family = family;
  f.seed = seed;
  f.name = to_string(family) + "_" + std::to_string(seed);
  return f;
}

Matrix columns(const Matrix& a, const std::vector<int>& idx) {
  Matrix out(a.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
  return out;
}

/// Minimum-norm r with A_S^T r = rhs, or nothing when A_S is rank deficient.
std::optional<Vector> min_norm_dual(const Matrix& a_s, const Vector& rhs) {
  const Matrix gram = a_s.transpose() * a_s;
  Eigen::LDLT<Matrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return std::nullopt;
  const Eigen::VectorXd diag = ldlt.vectorD();
  if (diag.minCoeff() <= 1e-8 * std::max(1.0, diag.maxCoeff())) return std::nullopt;
  return Vector(a_s * ldlt.solve(rhs));
}

InstanceFile gen_least_squares_l1(const GenDims& dims, std::uint64_t seed) {
  const int m = pick(dims.m, 8);
  const int n = pick(dims.n, 20);
  const int s = pick(dims.support, 3);
  check_cap(n <= kMaxVars && m <= kMaxRows, "dimensions exceed caps (n <= 200, m <= 200)");
  check_cap(s < m && s <= n, "support must be smaller than m and at most n");
  const double tau = 0.5;
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Matrix a = rng.normal(m, n) / std::sqrt(static_cast<double>(m));
    const std::vector<int> support = rng.subset(n, s);
    Vector xbar = Vector::Zero(n);
    Vector signs(s);
    for (int k = 0; k < s; ++k) {
      signs(k) = rng.sign();
      xbar(support[static_cast<std::size_t>(k)]) = signs(k) * (1.0 + rng.uniform());
    }
    const auto r = min_norm_dual(columns(a, support), tau * signs);
    if (!r) continue;
    const Vector dual = a.transpose() * *r;
    bool strict = true;
    for (int i = 0; i < n && strict; ++i)
      if (xbar(i) == 0.0 && std::abs(dual(i)) > 0.9 * tau) strict = false;
    if (!strict) continue;

    InstanceFile f = start(Family::LeastSquaresL1, seed);
    f.comments.push_back("f(x) = |Ax - b|^2 / 2, h(f, x) = f + reg_weight |x|_1");
    f.comments.push_back("known_solution has planted support with |A_i^T r| <= 0.9 reg_weight off the support");
    f.matrices["A"] = a;
    f.vectors["b"] = a * xbar + *r;
    f.scalars["reg_weight"] = tau;
    f.vectors["x0"] = Vector::Zero(n);
    f.vectors["known_solution"] = xbar;
    f.ints["support"] = support;
    return f;
  }
  throw InstanceError("generate: could not plant a strictly complementary l1 solution");
}

InstanceFile gen_logistic_l1(const GenDims& dims, std::uint64_t seed) {
  const int m = pick(dims.m, 30);
  const int n = pick(dims.n, 10);
  const int s = std::min(pick(dims.support, 3), n);
  check_cap(n <= kMaxVars && m <= kMaxRows, "dimensions exceed caps (n <= 200, m <= 200)");
  Rng rng(seed);
  const Matrix a = rng.normal(m, n);
  Vector truth = Vector::Zero(n);
  for (int i : rng.subset(n, s)) truth(i) = rng.sign() * (1.0 + rng.uniform());
  Vector labels(m);
  const Vector score = a * truth;
  for (int i = 0; i < m; ++i) labels(i) = score(i) + 0.5 * rng.normal() >= 0.0 ? 1.0 : -1.0;

  InstanceFile f = start(Family::LogisticL1, seed);
  f.comments.push_back("f(x) = sum_i log(1 + exp(-y_i a_i.x)), labels y_i in {-1, +1}");
  f.comments.push_back("grad f(x) = -sum_i y_i a_i / (1 + exp(y_i a_i.x))");
  f.matrices["A"] = a;
  f.vectors["labels"] = labels;
  f.scalars["reg_weight"] = 0.1;
  f.vectors["x0"] = Vector::Zero(n);
  return f;
}

InstanceFile gen_group_sparse(const GenDims& dims, std::uint64_t seed) {
  const int n = pick(dims.n, 20);
  const int g = pick(dims.group_size, 4);
  const int m = pick(dims.m, 16);
  const int s = pick(dims.support, 2);
  check_cap(n <= kMaxVars && m <= kMaxRows, "dimensions exceed caps (n <= 200, m <= 200)");
  check_cap(n % g == 0, "n must be a multiple of group_size");
  const int ngroups = n / g;
  check_cap(s <= ngroups && s * g < m, "active groups must fit and s * group_size < m");
  const double tau = 0.5;
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Matrix a = rng.normal(m, n) / std::sqrt(static_cast<double>(m));
    const std::vector<int> active = rng.subset(ngroups, s);
    Vector xbar = Vector::Zero(n);
    std::vector<int> support;
    Vector unit(s * g);
    for (int k = 0; k < s; ++k) {
      const Vector dir = rng.normal(g).normalized();
      const int first = active[static_cast<std::size_t>(k)] * g;
      xbar.segment(first, g) = (1.0 + rng.uniform()) * dir;
      unit.segment(k * g, g) = dir;
      for (int i = 0; i < g; ++i) support.push_back(first + i);
    }
    const auto r = min_norm_dual(columns(a, support), tau * unit);
    if (!r) continue;
    const Vector dual = a.transpose() * *r;
    bool strict = true;
    for (int grp = 0; grp < ngroups && strict; ++grp)
      if (!std::binary_search(active.begin(), active.end(), grp) && dual.segment(grp * g, g).norm() > 0.9 * tau)
        strict = false;
    if (!strict) continue;

    InstanceFile f = start(Family::GroupSparse, seed);
    f.comments.push_back("f(x) = |Ax - b|^2 / 2, h(f, x) = f + reg_weight sum_g |x_g|");
    f.matrices["A"] = a;
    f.vectors["b"] = a * xbar + *r;
    f.scalars["reg_weight"] = tau;
    f.ints["group_sizes"] = std::vector<int>(static_cast<std::size_t>(ngroups), g);
    f.ints["active_groups"] = active;
    f.vectors["x0"] = Vector::Zero(n);
    f.vectors["known_solution"] = xbar;
    return f;
  }
  throw InstanceError("generate: could not plant a strictly complementary group-sparse solution");
}

InstanceFile gen_l1_penalty_nlp(const GenDims& dims, std::uint64_t seed) {
  const int n = pick(dims.n, 3);
  const int q = dims.m > 0 ? dims.m : 2;
  check_cap(n <= kMaxVars && q <= kMaxRows, "dimensions exceed caps (n <= 200, m <= 200)");
  const double radius = 1.0;
  Rng rng(seed);
  const Vector dir = rng.normal(n).normalized();
  const Vector xbar = radius * dir;
  const Matrix qm = rng.normal(q, n);
  InstanceFile f = start(Family::L1PenaltyNLP, seed);
  f.comments.push_back("minimize |x - target|^2 / 2 s.t. |x|^2 = radius^2, Qx <= s via the exact l1 penalty nu");
  f.comments.push_back("|target| = 2 radius so the equality multiplier is 1/2 < nu");
  f.vectors["target"] = 2.0 * xbar;
  f.scalars["radius"] = radius;
  f.matrices["Q"] = qm;
  f.vectors["s"] = qm * xbar + Vector::Constant(q, 0.5);
  f.scalars["nu"] = 2.0;
  f.vectors["x0"] = rng.normal(n);
  f.vectors["known_solution"] = xbar;
  return f;
}

InstanceFile gen_polyhedral_minimax(const GenDims& dims, std::uint64_t seed) {
  const int k = pick(dims.pieces, 4);
  check_cap(k >= 2 && k < 10, "pieces must lie in [2, 9]");
  const int n = dims.n > 0 ? dims.n : k - 1;
  check_cap(n == k - 1, "PolyhedralMinimax uses n = pieces - 1");
  const double amp = 0.1;
  Rng rng(seed);

  Vector u(k);
  for (int i = 0; i < k; ++i) u(i) = 0.1 + rng.uniform();
  const Vector lambda = (Vector::Constant(k, 0.1) + (1.0 - 0.1 * k) * u / u.sum()).eval();
  Matrix grads(k, n);
  grads.topRows(k - 1) = rng.normal(k - 1, n);
  grads.row(k - 1) = -(lambda.head(k - 1).transpose() * grads.topRows(k - 1)) / lambda(k - 1);
  const Matrix wave = rng.normal(k, n);
  Vector curv(k);
  for (int i = 0; i < k; ++i) curv(i) = 0.5 + rng.uniform();
  const Vector base = rng.normal(k);
  const Vector center = rng.normal(n);
  const Vector x0 = center + 0.3 * rng.normal(n);

  InstanceFile f = start(Family::PolyhedralMinimax, seed);
  f.comments.push_back("h(z) = max_i (slopes_i.z + offsets_i)");
  f.comments.push_back("c_i(x) = base_i + linear_i.u + curvature_i |u|^2 / 2 + wave_amplitude sin(wave_i.u), u = x - center");
  f.comments.push_back("grad c(center) has rows planted_gradients; planted_multiplier > 0 sums to 1 and cancels them");
  f.matrices["slopes"] = Matrix::Identity(k, k);
  f.vectors["offsets"] = -base;
  f.vectors["base"] = base;
  f.matrices["linear"] = grads - amp * wave;
  f.vectors["curvature"] = curv;
  f.matrices["wave"] = wave;
  f.scalars["wave_amplitude"] = amp;
  f.vectors["center"] = center;
  f.matrices["planted_gradients"] = grads;
  f.vectors["planted_multiplier"] = lambda;
  f.vectors["x0"] = x0;
  f.vectors["known_solution"] = center;
  return f;
}

Matrix orthonormal_basis(Rng& rng, int rows) {
  return Eigen::HouseholderQR<Matrix>(rng.normal(rows, rows)).householderQ();
}

InstanceFile gen_matrix_completion(const GenDims& dims, std::uint64_t seed) {
  const int rows = pick(dims.rows, 10);
  const int cols = pick(dims.cols, 10);
  const int r = pick(dims.rank, 2);
  check_cap(rows <= kMaxMatrixSide && cols <= kMaxMatrixSide, "matrix exceeds 50x50");
  check_cap(r < std::min(rows, cols), "rank must be below min(rows, cols)");
  const int total = rows * cols;
  const int nobs = pick(dims.m, (7 * total) / 10);
  check_cap(nobs <= total, "more observations than entries");
  const double tau = 0.1;
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Matrix qu = orthonormal_basis(rng, rows);
    const Matrix qv = orthonormal_basis(rng, cols);
    const Matrix u = qu.leftCols(r);
    const Matrix v = qv.leftCols(r);
    const Matrix uperp = qu.rightCols(rows - r);
    const Matrix vperp = qv.rightCols(cols - r);
    Vector sigma(r);
    for (int i = 0; i < r; ++i) sigma(i) = 1.0 + rng.uniform();
    std::sort(sigma.data(), sigma.data() + r, std::greater<>());
    const Matrix xbar = u * sigma.asDiagonal() * v.transpose();
    const std::vector<int> omega = rng.subset(total, nobs);

    // Find W = U_perp Z V_perp^T so that U V^T + W vanishes off omega.
    const Matrix uv = u * v.transpose();
    std::vector<char> observed(static_cast<std::size_t>(total), 0);
    for (int idx : omega) observed[static_cast<std::size_t>(idx)] = 1;
    const int pr = rows - r;
    const int pc = cols - r;
    Matrix sys(total - nobs, pr * pc);
    Vector rhs(total - nobs);
    int row = 0;
    for (int idx = 0; idx < total; ++idx) {
      if (observed[static_cast<std::size_t>(idx)]) continue;
      const int i = idx % rows;
      const int j = idx / rows;
      for (int b = 0; b < pc; ++b)
        for (int a = 0; a < pr; ++a) sys(row, a + b * pr) = uperp(i, a) * vperp(j, b);
      rhs(row) = -uv(i, j);
      ++row;
    }
    const Vector z = sys.completeOrthogonalDecomposition().solve(rhs);
    if ((sys * z - rhs).norm() > 1e-10) continue;
    const Matrix zm = Eigen::Map<const Matrix>(z.data(), pr, pc);
    if (jacobi_svd(zm).s(0) > 0.9) continue;
    const Matrix cert = uv + uperp * zm * vperp.transpose();

    Vector b(nobs);
    for (int k = 0; k < nobs; ++k) {
      const int idx = omega[static_cast<std::size_t>(k)];
      b(k) = xbar(idx % rows, idx / rows) + tau * cert(idx % rows, idx / rows);
    }
    InstanceFile f = start(Family::MatrixCompletion, seed);
    f.comments.push_back("X stored column-major; omega lists observed column-major indices");
    f.comments.push_back("f(X) = sum over omega of (X_ij - b_ij)^2 / 2, h(f, X) = f + reg_weight |X|_*");
    f.scalars["rows"] = rows;
    f.scalars["cols"] = cols;
    f.scalars["rank"] = r;
    f.ints["omega"] = omega;
    f.vectors["b"] = b;
    f.scalars["reg_weight"] = tau;
    f.vectors["x0"] = Vector::Zero(total);
    f.vectors["known_solution"] = Eigen::Map<const Vector>(xbar.data(), total);
    return f;
  }
  throw InstanceError("generate: could not build a matrix-completion certificate");
}

InstanceFile gen_nonconvex_reg(const GenDims& dims, std::uint64_t seed) {
  const int m = pick(dims.m, 20);
  const int n = pick(dims.n, 10);
  const int s = std::min(pick(dims.support, 3), n);
  check_cap(n <= kMaxVars && m <= kMaxRows, "dimensions exceed caps (n <= 200, m <= 200)");
  const std::string variant = dims.variant.empty() ? "mangasarian" : dims.variant;
  check_cap(variant == "mangasarian" || variant == "zhang", "variant must be mangasarian or zhang");
  Rng rng(seed);
  const Matrix a = rng.normal(m, n) / std::sqrt(static_cast<double>(m));
  Vector truth = Vector::Zero(n);
  for (int i : rng.subset(n, s)) truth(i) = rng.sign() * (1.0 + rng.uniform());
  const Vector b = a * truth + 0.01 * rng.normal(m);

  InstanceFile f = start(Family::NonconvexReg, seed);
  f.comments.push_back("f(x) = |Ax - b|^2 / 2 with a nonconvex separable penalty");
  f.texts["variant"] = variant;
  f.matrices["A"] = a;
  f.vectors["b"] = b;
  if (variant == "mangasarian") {
    f.scalars["alpha"] = 2.0;
    f.scalars["reg_weight"] = 0.1;
  } else {
    f.scalars["lambda"] = 0.5;
    f.scalars["a"] = 3.0;
    f.scalars["reg_weight"] = 0.2;
  }
  f.vectors["x0"] = Vector::Zero(n);
  return f;
}

InstanceFile gen_box_composite(const GenDims& dims, std::uint64_t seed) {
  const int n = pick(dims.n, 6);
  check_cap(n <= kMaxVars, "n exceeds 200");
  Rng rng(seed);
  Vector target(n);
  for (int i = 0; i < n; ++i) {
    double t;
    do {
      t = -2.0 + 4.0 * rng.uniform();
    } while (std::abs(t) >= 0.8 && std::abs(t) <= 1.2);
    target(i) = t;
  }
  InstanceFile f = start(Family::BoxComposite, seed);
  f.comments.push_back("f(x) = sum_i (x_i - t_i)^2 / 2 + quartic (x_i - t_i)^4 over lower <= x <= upper");
  f.vectors["target"] = target;
  f.vectors["lower"] = Vector::Constant(n, -1.0);
  f.vectors["upper"] = Vector::Constant(n, 1.0);
  f.scalars["quartic"] = 0.1;
  f.vectors["x0"] = Vector::Zero(n);
  f.vectors["known_solution"] = target.cwiseMax(-1.0).cwiseMin(1.0);
  return f;
}

InstanceFile gen_jump_example(std::uint64_t seed) {
  InstanceFile f = start(Family::Sec62Counterexample, seed);
  f.name = "jump_example";
  f.comments.push_back("h(c) = -c for c <= 0, 1 + c for c > 0; c(x) = x");
  f.vectors["x0"] = Vector::Constant(1, 1.0);
  f.vectors["known_solution"] = Vector::Zero(1);
  return f;
}

InstanceFile gen_max_of_quadratics(std::uint64_t seed) {
  InstanceFile f = start(Family::MaxOfQuadratics, seed);
  f.name = "maxquad";
  f.comments.push_back("h(c) = max_i a_i c^2 + b_i c + e_i, rows of quadratics are (a_i, b_i, e_i); c(x) = x + cubic x^3");
  Matrix q(2, 3);
  q << 1.0, -2.0, 1.0, 1.0, 2.0, 1.0;
  f.matrices["quadratics"] = q;
  f.scalars["cubic"] = 0.1;
  f.vectors["x0"] = Vector::Constant(1, 1.5);
  f.vectors["known_solution"] = Vector::Zero(1);
  return f;
}

std::string dims_string(const GenDims& d) {
  std::vector<std::string> parts;
  auto add = [&](const char* key, int v) {
    if (v > 0) parts.push_back(std::string(key) + "=" + std::to_string(v));
  };
  add("n", d.n);
  add("m", d.m);
  add("support", d.support);
  add("pieces", d.pieces);
  add("rows", d.rows);
  add("cols", d.cols);
  add("rank", d.rank);
  add("group_size", d.group_size);
  if (!d.variant.empty()) parts.push_back("variant=" + d.variant);
  if (parts.empty()) return "default";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += "," + parts[i];
  return out;
}

struct PackagedDef {
  std::string name;
  Family family;
  GenDims dims;
  std::uint64_t seed;
};

std::vector<PackagedDef> packaged_defs() {
  auto dims = [](auto fill) {
    GenDims d;
    fill(d);
    return d;
  };
  return {
      {"cs_small", Family::LeastSquaresL1, dims([](GenDims& d) { d.m = 8; d.n = 20; d.support = 3; }), 7},
      {"logistic_small", Family::LogisticL1, dims([](GenDims& d) { d.m = 30; d.n = 10; }), 11},
      {"group_small", Family::GroupSparse,
       dims([](GenDims& d) { d.m = 16; d.n = 20; d.group_size = 4; d.support = 2; }), 5},
      {"l1pen_nlp", Family::L1PenaltyNLP, dims([](GenDims& d) { d.n = 3; d.m = 2; }), 5},
      {"minimax4", Family::PolyhedralMinimax, dims([](GenDims& d) { d.pieces = 4; }), 1},
      {"matcomp10", Family::MatrixCompletion, dims([](GenDims& d) { d.rows = 10; d.cols = 10; d.rank = 2; }), 3},
      {"nonconvex_exp", Family::NonconvexReg,
       dims([](GenDims& d) { d.m = 20; d.n = 10; d.variant = "mangasarian"; }), 13},
      {"nonconvex_zhang", Family::NonconvexReg, dims([](GenDims& d) { d.m = 20; d.n = 10; d.variant = "zhang"; }),
       17},
      {"box_small", Family::BoxComposite, dims([](GenDims& d) { d.n = 6; }), 19},
      {"jump_example", Family::Sec62Counterexample, GenDims{}, 0},
      {"maxquad", Family::MaxOfQuadratics, GenDims{}, 0},
  };
}

}  // namespace

InstanceFile generate(Family family, const GenDims& dims, std::uint64_t seed) {
  switch (family) {
    case Family::LeastSquaresL1: return gen_least_squares_l1(dims, seed);
    case Family::LogisticL1: return gen_logistic_l1(dims, seed);
    case Family::GroupSparse: return gen_group_sparse(dims, seed);
    case Family::L1PenaltyNLP: return gen_l1_penalty_nlp(dims, seed);
    case Family::PolyhedralMinimax: return gen_polyhedral_minimax(dims, seed);
    case Family::MatrixCompletion: return gen_matrix_completion(dims, seed);
    case Family::NonconvexReg: return gen_nonconvex_reg(dims, seed);
    case Family::BoxComposite: return gen_box_composite(dims, seed);
    case Family::Sec62Counterexample: return gen_jump_example(seed);
    case Family::MaxOfQuadratics: return gen_max_of_quadratics(seed);
  }
  throw InstanceError("generate: unknown family");
}

std::vector<std::pair<ManifestEntry, InstanceFile>> packaged_instances() {
  std::vector<std::pair<ManifestEntry, InstanceFile>> out;
  for (const PackagedDef& def : packaged_defs()) {
    InstanceFile f = generate(def.family, def.dims, def.seed);
    f.name = def.name;
    out.push_back({ManifestEntry{def.name, def.family, dims_string(def.dims), def.seed, def.name + ".inst"},
                   std::move(f)});
  }
  return out;
}

void write_packaged_instances(const std::filesystem::path& data_dir) {
  std::filesystem::create_directories(data_dir);
  std::ofstream manifest(data_dir / "manifest.txt");
  if (!manifest) throw InstanceError("cannot write " + (data_dir / "manifest.txt").string());
  manifest << "# name family dims seed file\n";
  for (const auto& [entry, file] : packaged_instances()) {
    std::ofstream out(data_dir / entry.file);
    if (!out) throw InstanceError("cannot write " + (data_dir / entry.file).string());
    out << write_instance(file);
    manifest << entry.name << ' ' << to_string(entry.family) << ' ' << entry.dims << ' ' << entry.seed << ' '
             << entry.file << '\n';
  }
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& data_dir) {
  const auto path = data_dir / "manifest.txt";
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open manifest '" + path.string() + "'");
  std::vector<ManifestEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    ManifestEntry e;
    std::string family;
    if (!(is >> e.name >> family >> e.dims >> e.seed >> e.file))
      throw InstanceError("manifest line " + std::to_string(lineno) + ": expected 'name family dims seed file'");
    const auto fam = family_from_string(family);
    if (!fam) throw InstanceError("manifest line " + std::to_string(lineno) + ": unknown family '" + family + "'");
    e.family = *fam;
    out.push_back(std::move(e));
  }
  return out;
}

std::filesystem::path default_data_dir() { return PROXDESCENT_DATA_DIR; }

}  // namespace proxdescent

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "proxdescent/problems.hpp"

namespace proxdescent {

namespace {

const std::vector<std::pair<Family, std::string>>& family_names() {
  static const std::vector<std::pair<Family, std::string>> names = {
      {Family::LeastSquaresL1, "LeastSquaresL1"},
      {Family::LogisticL1, "LogisticL1"},
      {Family::GroupSparse, "GroupSparse"},
      {Family::L1PenaltyNLP, "L1PenaltyNLP"},
      {Family::PolyhedralMinimax, "PolyhedralMinimax"},
      {Family::MatrixCompletion, "MatrixCompletion"},
      {Family::NonconvexReg, "NonconvexReg"},
      {Family::BoxComposite, "BoxComposite"},
      {Family::Sec62Counterexample, "Sec62Counterexample"},
      {Family::MaxOfQuadratics, "MaxOfQuadratics"},
  };
  return names;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail_line(int line, const std::string& msg) {
  throw InstanceError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& tok, int line, const std::string& field) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size())
    fail_line(line, "field '" + field + "': cannot parse number '" + tok + "'");
  return v;
}

long long parse_int(const std::string& tok, int line, const std::string& field) {
  char* end = nullptr;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (tok.empty() || end != tok.c_str() + tok.size())
    fail_line(line, "field '" + field + "': cannot parse integer '" + tok + "'");
  return v;
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

}  // namespace

std::string to_string(Family f) {
  for (const auto& [fam, name] : family_names())
    if (fam == f) return name;
  return "Unknown";
}

std::optional<Family> family_from_string(const std::string& s) {
  for (const auto& [fam, name] : family_names())
    if (name == s) return fam;
  return std::nullopt;
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> fams = [] {
    std::vector<Family> v;
    for (const auto& [fam, name] : family_names()) v.push_back(fam);
    return v;
  }();
  return fams;
}

double InstanceFile::scalar(const std::string& key) const {
  const auto it = scalars.find(key);
  if (it == scalars.end()) throw InstanceError("missing scalar field '" + key + "'");
  return it->second;
}

const Vector& InstanceFile::vector(const std::string& key) const {
  const auto it = vectors.find(key);
  if (it == vectors.end()) throw InstanceError("missing vector field '" + key + "'");
  return it->second;
}

const Matrix& InstanceFile::matrix(const std::string& key) const {
  const auto it = matrices.find(key);
  if (it == matrices.end()) throw InstanceError("missing matrix field '" + key + "'");
  return it->second;
}

const std::vector<int>& InstanceFile::int_list(const std::string& key) const {
  const auto it = ints.find(key);
  if (it == ints.end()) throw InstanceError("missing ints field '" + key + "'");
  return it->second;
}

const std::string& InstanceFile::text(const std::string& key) const {
  const auto it = texts.find(key);
  if (it == texts.end()) throw InstanceError("missing text field '" + key + "'");
  return it->second;
}

std::string write_instance(const InstanceFile& f) {
  std::ostringstream os;
  os << "proxdescent-instance " << kInstanceSchemaVersion << '\n';
  for (const auto& c : f.comments) os << "# " << c << '\n';
  os << "name " << f.name << '\n';
  os << "family " << to_string(f.family) << '\n';
  os << "seed " << f.seed << '\n';
  for (const auto& [k, v] : f.texts) os << "text " << k << ' ' << v << '\n';
  for (const auto& [k, v] : f.scalars) os << "scalar " << k << ' ' << num(v) << '\n';
  for (const auto& [k, v] : f.ints) {
    os << "ints " << k << ' ' << v.size() << '\n';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    os << '\n';
  }
  for (const auto& [k, v] : f.vectors) {
    os << "vector " << k << ' ' << v.size() << '\n';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? " " : "") << num(v(i));
    os << '\n';
  }
  for (const auto& [k, m] : f.matrices) {
    os << "matrix " << k << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? " " : "") << num(m(r, c));
      os << '\n';
    }
  }
  os << "end\n";
  return os.str();
}

InstanceFile parse_instance(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;

  auto next_data_line = [&](const std::string& field) {
    while (std::getline(is, line)) {
      ++lineno;
      if (!line.empty() && line[0] == '#') continue;
      return tokens(line);
    }
    fail_line(lineno, "field '" + field + "': unexpected end of file");
  };

  if (!std::getline(is, line)) throw InstanceError("line 1: empty instance file");
  ++lineno;
  {
    const auto head = tokens(line);
    if (head.size() != 2 || head[0] != "proxdescent-instance") fail_line(1, "missing 'proxdescent-instance' header");
    if (parse_int(head[1], 1, "schema") != kInstanceSchemaVersion)
      fail_line(1, "unsupported schema version " + head[1]);
  }

  InstanceFile f;
  bool have_family = false;
  bool ended = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      f.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    const std::string& kind = tok[0];
    if (kind == "end") {
      ended = true;
      break;
    }
    if (kind == "name" && tok.size() == 2) {
      f.name = tok[1];
    } else if (kind == "family" && tok.size() == 2) {
      const auto fam = family_from_string(tok[1]);
      if (!fam) fail_line(lineno, "field 'family': unknown family '" + tok[1] + "'");
      f.family = *fam;
      have_family = true;
    } else if (kind == "seed" && tok.size() == 2) {
      f.seed = static_cast<std::uint64_t>(parse_int(tok[1], lineno, "seed"));
    } else if (kind == "scalar" && tok.size() == 3) {
      f.scalars[tok[1]] = parse_double(tok[2], lineno, tok[1]);
    } else if (kind == "text" && tok.size() == 3) {
      f.texts[tok[1]] = tok[2];
    } else if (kind == "ints" && tok.size() == 3) {
      const std::string key = tok[1];
      const long long len = parse_int(tok[2], lineno, key);
      if (len < 0) fail_line(lineno, "field '" + key + "': negative length");
      const auto vals = len > 0 ? next_data_line(key) : std::vector<std::string>{};
      if (static_cast<long long>(vals.size()) != len)
        fail_line(lineno, "field '" + key + "': expected " + std::to_string(len) + " integers, got " +
                              std::to_string(vals.size()));
      std::vector<int> out;
      for (const auto& t : vals) out.push_back(static_cast<int>(parse_int(t, lineno, key)));
      f.ints[key] = std::move(out);
    } else if (kind == "vector" && tok.size() == 3) {
      const std::string key = tok[1];
      const long long len = parse_int(tok[2], lineno, key);
      if (len < 0) fail_line(lineno, "field '" + key + "': negative length");
      const auto vals = len > 0 ? next_data_line(key) : std::vector<std::string>{};
      if (static_cast<long long>(vals.size()) != len)
        fail_line(lineno, "field '" + key + "': expected " + std::to_string(len) + " values, got " +
                              std::to_string(vals.size()));
      Vector v(len);
      for (long long i = 0; i < len; ++i) v(i) = parse_double(vals[static_cast<std::size_t>(i)], lineno, key);
      f.vectors[key] = std::move(v);
    } else if (kind == "matrix" && tok.size() == 4) {
      const std::string key = tok[1];
      const long long rows = parse_int(tok[2], lineno, key);
      const long long cols = parse_int(tok[3], lineno, key);
      if (rows < 0 || cols < 0) fail_line(lineno, "field '" + key + "': negative dimension");
      Matrix m(rows, cols);
      for (long long r = 0; r < rows; ++r) {
        const auto vals = next_data_line(key);
        if (static_cast<long long>(vals.size()) != cols)
          fail_line(lineno, "field '" + key + "': row " + std::to_string(r) + " has " + std::to_string(vals.size()) +
                                " entries, expected " + std::to_string(cols));
        for (long long c = 0; c < cols; ++c) m(r, c) = parse_double(vals[static_cast<std::size_t>(c)], lineno, key);
      }
      f.matrices[key] = std::move(m);
    } else {
      fail_line(lineno, "unrecognized line '" + line + "'");
    }
  }
  if (!ended) fail_line(lineno, "missing 'end'");
  if (!have_family) throw InstanceError("missing field 'family'");
  if (f.name.empty()) throw InstanceError("missing field 'name'");
  return f;
}

InstanceFile read_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open instance file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

ProblemInstance load_instance(const std::filesystem::path& path) { return build_problem(read_instance_file(path)); }

}  // namespace proxdescent

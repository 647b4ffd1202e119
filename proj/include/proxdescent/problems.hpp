#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "proxdescent/core.hpp"

namespace proxdescent {

enum class Family {
  LeastSquaresL1,
  LogisticL1,
  GroupSparse,
  L1PenaltyNLP,
  PolyhedralMinimax,
  MatrixCompletion,
  NonconvexReg,
  BoxComposite,
  Sec62Counterexample,
  MaxOfQuadratics,
};

std::string to_string(Family f);
std::optional<Family> family_from_string(const std::string& s);
const std::vector<Family>& all_families();

/// Raised on malformed instance files. The message names the line or field.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kInstanceSchemaVersion = 1;

/// Parsed instance file: named scalars, vectors, matrices, integer lists and
/// text fields. Maps keep fields ordered so serialization is deterministic.
struct InstanceFile {
  std::string name;
  Family family = Family::LeastSquaresL1;
  std::uint64_t seed = 0;
  std::vector<std::string> comments;
  std::map<std::string, double> scalars;
  std::map<std::string, std::string> texts;
  std::map<std::string, Vector> vectors;
  std::map<std::string, Matrix> matrices;
  std::map<std::string, std::vector<int>> ints;

  double scalar(const std::string& key) const;
  const Vector& vector(const std::string& key) const;
  const Matrix& matrix(const std::string& key) const;
  const std::vector<int>& int_list(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  bool has_vector(const std::string& key) const { return vectors.count(key) > 0; }
};

std::string write_instance(const InstanceFile& f);
InstanceFile parse_instance(const std::string& text);
InstanceFile read_instance_file(const std::filesystem::path& path);

/// Builds the smooth map and outer function for the family. Throws
/// InstanceError naming the offending field on dimension mismatches.
ProblemInstance build_problem(const InstanceFile& f);

ProblemInstance load_instance(const std::filesystem::path& path);

/// Generator dimensions. Zero means "family default".
struct GenDims {
  int n = 0;        ///< variables
  int m = 0;        ///< observations / rows
  int support = 0;  ///< planted nonzeros or active groups
  int pieces = 0;   ///< polyhedral pieces
  int rows = 0;     ///< matrix completion
  int cols = 0;
  int rank = 0;
  int group_size = 0;
  std::string variant;  ///< NonconvexReg: "mangasarian" or "zhang"
};

/// Deterministic for a fixed (family, dims, seed). Identification instances
/// plant multipliers in the relative interior of the subdifferential.
InstanceFile generate(Family family, const GenDims& dims, std::uint64_t seed);

/// Entry in data/manifest.txt.
struct ManifestEntry {
  std::string name;
  Family family;
  std::string dims;
  std::uint64_t seed;
  std::string file;
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& data_dir);

/// Generates the packaged instance set.
std::vector<std::pair<ManifestEntry, InstanceFile>> packaged_instances();

/// Writes every packaged instance plus the manifest into data_dir.
void write_packaged_instances(const std::filesystem::path& data_dir);

/// Compile-time default location of the packaged data.
std::filesystem::path default_data_dir();

}  // namespace proxdescent

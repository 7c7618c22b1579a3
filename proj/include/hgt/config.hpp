#pragma once

// Experiment configuration read from JSON. Every accessor reports problems as
// ConfigError carrying the JSON pointer of the offending value.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hgt/crossed_module.hpp"
#include "hgt/extraction.hpp"
#include "hgt/forms.hpp"
#include "hgt/geometry.hpp"
#include "hgt/transport.hpp"

namespace hgt {

using Json = nlohmann::json;

/// The commands understood by run_command.
const std::vector<std::string>& known_commands();

/// FNV-1a over the bytes of `text`.
std::uint64_t fnv1a(const std::string& text);

class ExperimentConfig {
 public:
  explicit ExperimentConfig(Json doc);
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);

  const Json& doc() const { return doc_; }
  const std::string& command() const { return command_; }
  int ambient_dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }
  /// Hash of the canonical dump of the document, before overrides.
  std::uint64_t hash() const { return hash_; }

  void override_seed(std::uint64_t seed) { seed_ = seed; }
  /// Sets every integrator step count to `n` (n_quad_t rounded up to even).
  void override_steps(int n);

  CrossedModule crossed_module() const;
  /// A from "A", or t_* of the H-valued form in "A_h".
  OneForm A(const CrossedModule& cm) const;
  /// B from "B"; "curvature" (or the key "curvature": true) adds the
  /// curvature of A, or of A_h when that is given.
  TwoForm B(const CrossedModule& cm) const;
  ConnectionPair pair() const;

  IntegratorConfig integrator() const;
  FdConfig fd() const;
  /// tolerances/<key>, or `fallback`.
  double tolerance(const std::string& key, double fallback) const;

  bool has(const std::string& pointer) const;
  double number(const std::string& pointer, std::optional<double> fallback = std::nullopt) const;
  int integer(const std::string& pointer, std::optional<int> fallback = std::nullopt, int lo = INT32_MIN,
              int hi = INT32_MAX) const;
  bool boolean(const std::string& pointer, std::optional<bool> fallback = std::nullopt) const;
  std::string string(const std::string& pointer, std::optional<std::string> fallback = std::nullopt) const;
  std::vector<std::string> strings(const std::string& pointer) const;
  /// Array length at `pointer`.
  std::size_t length(const std::string& pointer) const;

  Vec vector(const std::string& pointer, int dim) const;
  MatrixField matrix_field(const std::string& pointer, int rows) const;
  OneForm one_form(const std::string& pointer, const GroupDescriptor& d) const;
  Path path(const std::string& pointer) const;
  Bigon bigon(const std::string& pointer) const;
  Loop loop(const std::string& pointer) const;
  LoopPath loop_path(const std::string& pointer) const;
  SmoothingProfile profile(const std::string& pointer) const;
  Reparam reparam(const std::string& pointer) const;
  SampleSpec samples(const std::string& pointer, int default_points) const;

 private:
  const Json& at(const std::string& pointer) const;

  Json doc_;
  std::string command_;
  int dim_ = 0;
  std::uint64_t seed_ = 1;
  std::uint64_t hash_ = 0;
  std::optional<int> steps_;
};

}  // namespace hgt

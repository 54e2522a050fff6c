#pragma once

// Text instance files: "commlab-instance-v1" (one protocol with optional
// target, distribution and output maps) and "commlab-am-v1" (a branch list).
// Parsing is strict: unknown fields, wrong types and broken invariants are
// rejected with the JSON path of the failure. Saving is byte-deterministic.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "commlab/core.hpp"
#include "commlab/error.hpp"
#include "commlab/functions.hpp"
#include "commlab/info.hpp"

namespace commlab {

inline constexpr const char* kInstanceSchema = "commlab-instance-v1";
inline constexpr const char* kAMSchema = "commlab-am-v1";

// Invalid file content; `path` is a JSON path such as $.selector.table.
class InstanceError : public InvalidInput {
 public:
  InstanceError(const std::string& path, const std::string& what)
      : InvalidInput(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct DistributionSpec {
  enum class Kind { uniform, table };
  Kind kind = Kind::uniform;
  std::vector<double> p;

  bool operator==(const DistributionSpec&) const = default;
};

struct OutputMaps {
  std::vector<std::int32_t> ga;  // rows x boxes, ErrorProtocol layout
  std::vector<std::int32_t> gb;  // cols x boxes

  bool operator==(const OutputMaps&) const = default;
};

struct Instance {
  Protocol protocol;
  std::optional<FunctionSpec> function;
  std::optional<RelationSpec> relation;
  std::optional<DistributionSpec> distribution;
  std::optional<OutputMaps> outputs;

  const DomainShape& shape() const { return protocol.shape(); }
  JointDistribution joint_distribution() const;  // uniform when absent
  // The function if present, else the relation, else nothing.
  std::optional<Target> target() const;
  ErrorProtocol error_protocol() const;  // requires outputs

  bool operator==(const Instance&) const = default;
};

struct AMInstance {
  std::optional<FunctionSpec> function;
  std::optional<RelationSpec> relation;
  std::vector<Instance> branches;

  AMProtocol am_protocol() const;
  Target target() const;

  bool operator==(const AMInstance&) const = default;
};

nlohmann::json to_json(const Instance& inst);
nlohmann::json to_json(const AMInstance& am);
// Both validate every invariant before returning.
Instance instance_from_json(const nlohmann::json& j, const std::string& path = "$");
AMInstance am_from_json(const nlohmann::json& j, const std::string& path = "$");

// Sorted keys, two-space indent, doubles with 17 significant digits.
std::string canonical_dump(const nlohmann::json& j);

void save_instance(const std::filesystem::path& path, const Instance& inst);
void save_am(const std::filesystem::path& path, const AMInstance& am);
Instance load_instance(const std::filesystem::path& path);
AMInstance load_am(const std::filesystem::path& path);

// 16 hex digits of FNV-1a over the canonical text.
std::string fingerprint(const Instance& inst);

std::string format_double(double v);

}  // namespace commlab

#pragma once
// Config parsing and deterministic result serialization.
//
// Input documents are JSON with a mandatory integer "schemaVersion".
// Structural problems (missing keys, wrong types, unknown enum strings)
// raise ConfigError; value-level violations surface as DomainError from the
// target type's own validation, so the CLI can distinguish malformed files
// from mathematically invalid ones.
//
// Results are emitted through JsonWriter rather than a JSON library so that
// every double is printed with 17 significant digits and byte-identical
// output is guaranteed across runs.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "lab/election.hpp"
#include "lab/media.hpp"
#include "lab/mental_model.hpp"
#include "lab/sim.hpp"

namespace lab {

inline constexpr int kSchemaVersion = 1;

// Reads and parses a JSON document.
//   errors: ConfigError on unreadable files or malformed JSON.
nlohmann::json loadJsonFile(const std::string& path);

// errors: ConfigError unless j["schemaVersion"] == kSchemaVersion.
void checkSchemaVersion(const nlohmann::json& j);

// Typed field access with ConfigError diagnostics naming the key.
double jsonNumber(const nlohmann::json& j, const char* key);
double jsonNumberOr(const nlohmann::json& j, const char* key, double fallback);
std::int64_t jsonInt(const nlohmann::json& j, const char* key);
bool jsonBoolOr(const nlohmann::json& j, const char* key, bool fallback);

// Model from {"table": [16 numbers]} or
// {"sample": {"class": "CompetenceBased"|"PreferenceBased", "seed": N}}.
// seedOverride, when nonzero, replaces the sampler seed.
MentalModel mentalModelFromJson(const nlohmann::json& j, std::uint64_t seedOverride = 0);

// Utility from {"power": gamma} or
// {"campaign": {"curve": "sqrt"|{"power": g}, "psi": x, "W": w}} or
// the default power(0.5) when the key is absent.
PartyUtility partyUtilityFromJson(const nlohmann::json& j);

ElectionConfig electionConfigFromJson(const nlohmann::json& j);
MediaConfig mediaConfigFromJson(const nlohmann::json& j);
SimConfig simConfigFromJson(const nlohmann::json& j, std::uint64_t seedOverride = 0);

// Shortest text that still round-trips the exact double: %.17g.
std::string formatDouble(double v);

// Minimal streaming JSON emitter with stable key order (insertion order)
// and formatDouble for every number.  Two-space indentation.
class JsonWriter {
 public:
  JsonWriter& beginObject();
  JsonWriter& endObject();
  JsonWriter& beginArray();
  JsonWriter& endArray();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }

  const std::string& str();

 private:
  void separate();  // comma/newline/indent bookkeeping before a new element
  std::string out_;
  std::vector<bool> hasElement_;  // per open container
  bool afterKey_ = false;
};

// CSV field quoting (RFC-style: wrap and double quotes when needed).
std::string csvField(const std::string& s);

// errors: ConfigError when the file cannot be created or written.
void writeTextFile(const std::string& path, const std::string& content);

}  // namespace lab

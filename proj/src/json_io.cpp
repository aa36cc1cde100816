#include "lab/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lab/errors.hpp"

namespace lab {

namespace {

using nlohmann::json;

[[noreturn]] void missing(const char* key) {
  throw ConfigError(std::string("missing or mistyped field \"") + key + "\"");
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) missing(key);
  return j.at(key);
}

BinaryBelief beliefField(const json& j, const char* key) {
  return BinaryBelief(jsonNumber(j, key));
}

Stance stanceFromJson(const json& v, const char* key) {
  if (v.is_number_integer()) {
    const auto s = v.get<std::int64_t>();
    if (s == 0) return Stance::Stance0;
    if (s == 1) return Stance::Stance1;
  }
  throw ConfigError(std::string("field \"") + key + "\" must be the stance 0 or 1");
}

CulturalTag groupTagFromJson(const json& v, const char* key) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "SP") return CulturalTag::SP;
    if (s == "SC") return CulturalTag::SC;
  }
  throw ConfigError(std::string("field \"") + key + "\" must be \"SP\" or \"SC\"");
}

SignalModel signalFromJson(const json& j) {
  if (j.contains("accuracy")) {
    return SignalModel::symmetric(jsonNumber(j, "accuracy"));
  }
  const json& p1 = member(j, "pStance1Given");
  const json& p0 = member(j, "pStance0Given");
  if (!p1.is_array() || p1.size() != 2 || !p0.is_array() || p0.size() != 2) {
    throw ConfigError("signal likelihood arrays must have two entries (state 0, state 1)");
  }
  SignalModel s{};
  for (int jdx = 0; jdx < 2; ++jdx) {
    if (!p1[jdx].is_number() || !p0[jdx].is_number()) {
      throw ConfigError("signal likelihoods must be numbers");
    }
    s.pStance1Given[jdx] = p1[jdx].get<double>();
    s.pStance0Given[jdx] = p0[jdx].get<double>();
  }
  s.validate();
  return s;
}

ArmSpec armFromJson(const json& j) {
  ArmSpec arm;
  const json& kind = member(j, "kind");
  if (!kind.is_string()) throw ConfigError("arm \"kind\" must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "NoMessage") {
    arm.kind = ArmKind::NoMessage;
  } else if (k == "EconOnly") {
    arm.kind = ArmKind::EconOnly;
  } else if (k == "Bundled") {
    arm.kind = ArmKind::Bundled;
  } else if (k == "CultureOnly") {
    arm.kind = ArmKind::CultureOnly;
  } else if (k == "SeparateSources") {
    arm.kind = ArmKind::SeparateSources;
  } else {
    throw ConfigError("unknown arm kind \"" + k + "\"");
  }
  if (arm.kind == ArmKind::EconOnly || arm.kind == ArmKind::Bundled ||
      arm.kind == ArmKind::SeparateSources) {
    arm.stance = stanceFromJson(member(j, "stance"), "stance");
  }
  if (arm.kind == ArmKind::Bundled || arm.kind == ArmKind::CultureOnly ||
      arm.kind == ArmKind::SeparateSources) {
    arm.culture = groupTagFromJson(member(j, "culture"), "culture");
  }
  arm.validate();
  return arm;
}

}  // namespace

json loadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

void checkSchemaVersion(const json& j) {
  if (!j.is_object() || !j.contains("schemaVersion") ||
      !j.at("schemaVersion").is_number_integer() ||
      j.at("schemaVersion").get<std::int64_t>() != kSchemaVersion) {
    throw ConfigError("config must declare \"schemaVersion\": 1");
  }
}

double jsonNumber(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_number()) missing(key);
  return v.get<double>();
}

double jsonNumberOr(const json& j, const char* key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return jsonNumber(j, key);
}

std::int64_t jsonInt(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_number_integer()) missing(key);
  return v.get<std::int64_t>();
}

bool jsonBoolOr(const json& j, const char* key, bool fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) missing(key);
  return v.get<bool>();
}

MentalModel mentalModelFromJson(const json& j, std::uint64_t seedOverride) {
  if (j.contains("table")) {
    const json& t = j.at("table");
    if (!t.is_array() || t.size() != MentalModel::kCells) {
      throw ConfigError("\"table\" must be an array of 16 numbers");
    }
    std::array<double, MentalModel::kCells> cells{};
    for (int i = 0; i < MentalModel::kCells; ++i) {
      if (!t[i].is_number()) throw ConfigError("\"table\" must be an array of 16 numbers");
      cells[static_cast<std::size_t>(i)] = t[i].get<double>();
    }
    return MentalModel::fromTable(cells);
  }
  if (j.contains("sample")) {
    const json& s = j.at("sample");
    const json& cls = member(s, "class");
    TrustClass trust;
    if (cls.is_string() && cls.get<std::string>() == "CompetenceBased") {
      trust = TrustClass::CompetenceBased;
    } else if (cls.is_string() && cls.get<std::string>() == "PreferenceBased") {
      trust = TrustClass::PreferenceBased;
    } else {
      throw ConfigError("sampler \"class\" must be CompetenceBased or PreferenceBased");
    }
    std::uint64_t seed = static_cast<std::uint64_t>(jsonInt(s, "seed"));
    if (seedOverride != 0) seed = seedOverride;
    RngStream rng(seed, 0);
    return sampleModel(trust, rng);
  }
  throw ConfigError("model needs either a \"table\" or a \"sample\" section");
}

PartyUtility partyUtilityFromJson(const json& j) {
  if (!j.is_object() || !j.contains("utility")) {
    return PartyUtility::power(0.5);
  }
  const json& u = j.at("utility");
  if (u.contains("power")) {
    return PartyUtility::power(jsonNumber(u, "power"));
  }
  if (u.contains("campaign")) {
    const json& c = u.at("campaign");
    const json& curve = member(c, "curve");
    std::function<double(double)> pi;
    if (curve.is_string() && curve.get<std::string>() == "sqrt") {
      pi = [](double f) { return std::sqrt(f); };
    } else if (curve.is_object() && curve.contains("power")) {
      const double g = jsonNumber(curve, "power");
      pi = [g](double f) { return std::pow(f, g); };
    } else {
      throw ConfigError("campaign \"curve\" must be \"sqrt\" or {\"power\": g}");
    }
    return PartyUtility::campaign(std::move(pi), jsonNumber(c, "psi"), jsonNumber(c, "W"));
  }
  throw ConfigError("\"utility\" needs a \"power\" or \"campaign\" section");
}

ElectionConfig electionConfigFromJson(const json& j) {
  ElectionConfig cfg;
  const json& groups = member(j, "groups");
  const json& sp = member(groups, "sp");
  const json& sc = member(groups, "sc");
  cfg.sp = VoterGroup{jsonNumber(sp, "ideal"), jsonNumber(sp, "share"),
                      beliefField(sp, "belief")};
  cfg.sc = VoterGroup{jsonNumber(sc, "ideal"), jsonNumber(sc, "share"),
                      beliefField(sc, "belief")};
  cfg.phi = jsonNumber(j, "phi");
  cfg.hatPi = beliefField(j, "hatPi");
  cfg.piS1 = beliefField(j, "piS1");
  cfg.piS0 = beliefField(j, "piS0");
  cfg.chiSP = jsonNumberOr(j, "chiSP", 0.0);
  cfg.chiSC = jsonNumberOr(j, "chiSC", 0.0);
  cfg.validate();
  return cfg;
}

MediaConfig mediaConfigFromJson(const json& j) {
  MediaConfig cfg;
  cfg.issues = static_cast<int>(jsonInt(j, "issues"));
  cfg.socialGaps = static_cast<int>(jsonInt(j, "socialGaps"));
  cfg.economicGaps = static_cast<int>(jsonInt(j, "economicGaps"));
  cfg.priceHigh = jsonNumber(j, "priceHigh");
  cfg.priceLow = jsonNumber(j, "priceLow");
  cfg.misalignmentCost = jsonNumber(j, "cost");
  if (j.contains("xSP") || j.contains("xSC")) {
    const json& vsp = member(j, "xSP");
    const json& vsc = member(j, "xSC");
    if (!vsp.is_array() || !vsc.is_array()) {
      throw ConfigError("\"xSP\"/\"xSC\" must be arrays of 0/1 entries");
    }
    for (const auto& v : vsp) cfg.xSP.push_back(v.is_number() ? v.get<double>() : -1.0);
    for (const auto& v : vsc) cfg.xSC.push_back(v.is_number() ? v.get<double>() : -1.0);
  } else {
    const MediaConfig canon =
        MediaConfig::canonical(cfg.issues, cfg.socialGaps, cfg.economicGaps, cfg.priceHigh,
                               cfg.priceLow, cfg.misalignmentCost);
    cfg.xSP = canon.xSP;
    cfg.xSC = canon.xSC;
  }
  cfg.validate();
  return cfg;
}

SimConfig simConfigFromJson(const json& j, std::uint64_t seedOverride) {
  SimConfig cfg;
  cfg.nPerArm = static_cast<int>(jsonInt(j, "nPerArm"));
  cfg.seed = static_cast<std::uint64_t>(jsonInt(j, "seed"));
  if (seedOverride != 0) cfg.seed = seedOverride;

  const json& pop = member(j, "population");
  cfg.population.shareSP = jsonNumber(pop, "shareSP");
  cfg.population.prior = beliefField(pop, "prior");
  cfg.population.hatPi = beliefField(pop, "hatPi");
  cfg.population.chiThreat = jsonNumberOr(pop, "chiThreat", 0.0);
  cfg.population.noiseScale = jsonNumber(pop, "noiseScale");

  const json& engine = member(j, "engine");
  if (engine.contains("identity")) {
    const json& id = engine.at("identity");
    IdentityEngineSpec spec;
    spec.signal = signalFromJson(member(id, "signal"));
    spec.piS1 = beliefField(id, "piS1");
    spec.piS0 = beliefField(id, "piS0");
    cfg.identity = spec;
  } else if (engine.contains("bayesian")) {
    cfg.bayesian = mentalModelFromJson(engine.at("bayesian"), seedOverride);
  } else {
    throw ConfigError("\"engine\" needs an \"identity\" or \"bayesian\" section");
  }

  if (j.contains("arms")) {
    const json& arms = j.at("arms");
    if (!arms.is_array() || arms.empty()) {
      throw ConfigError("\"arms\" must be a non-empty array");
    }
    for (const auto& a : arms) cfg.arms.push_back(armFromJson(a));
  } else {
    // Standard battery: silent control, both untagged stances, all four
    // bundles, both pure cultural arms, both separate-source variants.
    cfg.arms = {
        {ArmKind::NoMessage, Stance::Stance1, CulturalTag::None},
        {ArmKind::EconOnly, Stance::Stance1, CulturalTag::None},
        {ArmKind::EconOnly, Stance::Stance0, CulturalTag::None},
        {ArmKind::Bundled, Stance::Stance1, CulturalTag::SP},
        {ArmKind::Bundled, Stance::Stance1, CulturalTag::SC},
        {ArmKind::Bundled, Stance::Stance0, CulturalTag::SP},
        {ArmKind::Bundled, Stance::Stance0, CulturalTag::SC},
        {ArmKind::CultureOnly, Stance::Stance1, CulturalTag::SP},
        {ArmKind::CultureOnly, Stance::Stance1, CulturalTag::SC},
        {ArmKind::SeparateSources, Stance::Stance1, CulturalTag::SP},
        {ArmKind::SeparateSources, Stance::Stance1, CulturalTag::SC},
    };
  }
  cfg.validate();
  return cfg;
}

std::string formatDouble(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

JsonWriter& JsonWriter::beginObject() {
  separate();
  out_ += '{';
  hasElement_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::endObject() {
  const bool had = hasElement_.back();
  hasElement_.pop_back();
  if (had) {
    out_ += '\n';
    out_.append(2 * hasElement_.size(), ' ');
  }
  out_ += '}';
  return *this;
}

JsonWriter& JsonWriter::beginArray() {
  separate();
  out_ += '[';
  hasElement_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::endArray() {
  const bool had = hasElement_.back();
  hasElement_.pop_back();
  if (had) {
    out_ += '\n';
    out_.append(2 * hasElement_.size(), ' ');
  }
  out_ += ']';
  return *this;
}

void JsonWriter::separate() {
  if (afterKey_) {
    afterKey_ = false;
    return;
  }
  if (hasElement_.empty()) return;
  if (hasElement_.back()) out_ += ',';
  hasElement_.back() = true;
  out_ += '\n';
  out_.append(2 * hasElement_.size(), ' ');
}

namespace {
void appendEscaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}
}  // namespace

JsonWriter& JsonWriter::key(const std::string& k) {
  separate();
  appendEscaped(out_, k);
  out_ += ": ";
  afterKey_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separate();
  out_ += formatDouble(v);
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separate();
  appendEscaped(out_, v);
  return *this;
}

JsonWriter& JsonWriter::value(const char* v) { return value(std::string(v)); }

JsonWriter& JsonWriter::value(bool v) {
  separate();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

const std::string& JsonWriter::str() {
  if (out_.empty() || out_.back() != '\n') out_ += '\n';
  return out_;
}

std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void writeTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot create output file: " + path);
  }
  out << content;
  out.flush();
  if (!out) {
    throw ConfigError("failed writing output file: " + path);
  }
}

}  // namespace lab

#include "macromux/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace macromux {

using json = nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key()))
      throw std::invalid_argument("unknown key '" + it.key() + "' in " + where);
}

ErrorModelKind model_kind_from(const std::string& s) {
  if (s == "erasure") return ErrorModelKind::erasure;
  if (s == "bitflip") return ErrorModelKind::bitflip;
  if (s == "mixed_ray") return ErrorModelKind::mixed_ray;
  if (s == "custom") return ErrorModelKind::custom;
  throw std::invalid_argument("unknown error model kind '" + s + "'");
}

std::string model_kind_name(ErrorModelKind k) {
  switch (k) {
    case ErrorModelKind::erasure: return "erasure";
    case ErrorModelKind::bitflip: return "bitflip";
    case ErrorModelKind::mixed_ray: return "mixed_ray";
    case ErrorModelKind::custom: return "custom";
  }
  return "?";
}

}  // namespace

EngineParams RunConfig::engine_params() const {
  EngineParams par;
  par.M = M;
  par.scorer = scorer;
  par.count = count;
  par.gap = gap;
  par.model = model;
  par.ideal_bricks = ideal_bricks;
  par.master_seed = seed;
  return par;
}

ErrorModel RunConfig::model_at(double p) const {
  switch (model.kind) {
    case ErrorModelKind::erasure: return ErrorModel::erasure_only(p);
    case ErrorModelKind::bitflip: return ErrorModel::bitflip_only(p);
    case ErrorModelKind::mixed_ray: return ErrorModel::mixed_ray(p);
    case ErrorModelKind::custom:
      throw std::invalid_argument("custom error models have no scan ray; fix p_e/p_p instead");
  }
  throw std::logic_error("unreachable");
}

std::string RunConfig::resolved_json() const {
  json j;
  j["L"] = L;
  j["brick"] = {brick[0], brick[1], brick[2]};
  j["offset_step"] = offset_step;
  j["M"] = M;
  j["scorer"] = {{"kind", scorer == ScorerKind::count ? "count" : "gap"},
                 {"alpha", count.alpha},
                 {"beta", count.beta},
                 {"delta", gap.delta_coef},
                 {"phi", gap.phi}};
  j["error_model"] = {{"kind", model_kind_name(model.kind)}, {"p_e", model.p_e},
                      {"p_p", model.p_p}};
  j["ideal_bricks"] = ideal_bricks;
  j["seed"] = seed;
  j["threads"] = threads;
  j["mode"] = mode == RunMode::pipeline ? "pipeline" : "monolithic";
  return j.dump();
}

uint64_t RunConfig::config_hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : resolved_json()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config root must be a JSON object");
  reject_unknown(j, {"L", "brick", "offset_step", "M", "scorer", "error_model", "ideal_bricks",
                     "seed", "threads", "mode"},
                 "config");

  RunConfig cfg;
  if (j.contains("L")) cfg.L = j["L"].get<int>();
  if (cfg.L < 4 || cfg.L % 2 != 0)
    throw std::invalid_argument("L must be an even integer >= 4");
  if (j.contains("brick")) {
    auto b = j["brick"];
    if (!b.is_array() || b.size() != 3)
      throw std::invalid_argument("brick must be [n1, n2, n3]");
    for (int a = 0; a < 3; ++a) cfg.brick[a] = b[a].get<int>();
  }
  if (j.contains("offset_step")) cfg.offset_step = j["offset_step"].get<int>();
  if (cfg.offset_step < 0) throw std::invalid_argument("offset_step must be >= 0");
  if (j.contains("M")) cfg.M = j["M"].get<int>();
  if (cfg.M < 1) throw std::invalid_argument("M must be >= 1");

  if (j.contains("scorer")) {
    const json& s = j["scorer"];
    reject_unknown(s, {"kind", "alpha", "beta", "delta", "phi"}, "scorer");
    if (s.contains("kind")) {
      std::string k = s["kind"].get<std::string>();
      if (k == "count")
        cfg.scorer = ScorerKind::count;
      else if (k == "gap")
        cfg.scorer = ScorerKind::gap;
      else
        throw std::invalid_argument("scorer kind must be 'count' or 'gap'");
    }
    if (s.contains("alpha")) cfg.count.alpha = s["alpha"].get<double>();
    if (s.contains("beta")) cfg.count.beta = s["beta"].get<double>();
    if (s.contains("delta")) cfg.gap.delta_coef = s["delta"].get<double>();
    if (s.contains("phi")) cfg.gap.phi = s["phi"].get<double>();
    if (cfg.count.alpha < 0 || cfg.count.beta < 0 || cfg.gap.delta_coef < 0 || cfg.gap.phi < 0)
      throw std::invalid_argument("scorer parameters must be >= 0");
  }

  if (j.contains("error_model")) {
    const json& m = j["error_model"];
    reject_unknown(m, {"kind", "p_e", "p_p"}, "error_model");
    ErrorModelKind kind =
        m.contains("kind") ? model_kind_from(m["kind"].get<std::string>()) : cfg.model.kind;
    double p_e = m.contains("p_e") ? m["p_e"].get<double>() : 0.0;
    double p_p = m.contains("p_p") ? m["p_p"].get<double>() : 0.0;
    switch (kind) {
      case ErrorModelKind::erasure:
        if (m.contains("p_p") && p_p != 0)
          throw std::invalid_argument("erasure model takes no p_p");
        cfg.model = ErrorModel::erasure_only(p_e);
        break;
      case ErrorModelKind::bitflip:
        if (m.contains("p_e") && p_e != 0)
          throw std::invalid_argument("bitflip model takes no p_e");
        cfg.model = ErrorModel::bitflip_only(p_p);
        break;
      case ErrorModelKind::mixed_ray:
        if (m.contains("p_p") && std::abs(p_p - p_e / 10.0) > 1e-12)
          throw std::invalid_argument("mixed_ray requires p_p = p_e / 10");
        cfg.model = ErrorModel::mixed_ray(p_e);
        break;
      case ErrorModelKind::custom:
        cfg.model = {ErrorModelKind::custom, p_e, p_p};
        break;
    }
    cfg.model.validate();
  }

  if (j.contains("ideal_bricks")) cfg.ideal_bricks = j["ideal_bricks"].get<bool>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (cfg.threads < 0) throw std::invalid_argument("threads must be >= 0");
  if (j.contains("mode")) {
    std::string m = j["mode"].get<std::string>();
    if (m == "pipeline")
      cfg.mode = RunMode::pipeline;
    else if (m == "monolithic")
      cfg.mode = RunMode::monolithic;
    else
      throw std::invalid_argument("mode must be 'pipeline' or 'monolithic'");
  }
  if (cfg.ideal_bricks && cfg.M > 1)
    throw std::invalid_argument("ideal_bricks emulates M -> infinity; it excludes finite M > 1");
  for (int a = 0; a < 3; ++a)
    if (cfg.brick[a] < 1 || cfg.L % cfg.brick[a] != 0)
      throw std::invalid_argument("brick dimensions must divide L");
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

BrickConfig parse_brick_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open brick file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("brick file is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"brick", "erased", "flipped"}, "brick file");
  BrickConfig bc;
  if (!j.contains("brick")) throw std::invalid_argument("brick file needs a 'brick' entry");
  auto b = j["brick"];
  if (!b.is_array() || b.size() != 3) throw std::invalid_argument("brick must be [n1, n2, n3]");
  for (int a = 0; a < 3; ++a) bc.brick[a] = b[a].get<int>();
  if (j.contains("erased")) bc.erased = j["erased"].get<std::vector<int>>();
  if (j.contains("flipped")) bc.flipped = j["flipped"].get<std::vector<int>>();
  return bc;
}

std::string provenance_line(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# macromux v" << kVersion << " config_hash=" << std::hex << cfg.config_hash()
     << std::dec << " seed=" << cfg.seed;
  return os.str();
}

}  // namespace macromux

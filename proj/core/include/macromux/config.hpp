#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "macromux/engine.hpp"

namespace macromux {

inline constexpr const char* kVersion = "0.1.0";

enum class RunMode { pipeline, monolithic };

// Schema-validated run configuration. Unknown keys are rejected; defaults
// are resolved at parse time and echoed back for provenance.
struct RunConfig {
  int L = 8;
  Coord brick = {2, 2, 2};
  int offset_step = 1;
  int M = 1;
  ScorerKind scorer = ScorerKind::count;
  CountParams count;
  GapParams gap;
  ErrorModel model = ErrorModel::erasure_only(0.1);
  bool ideal_bricks = false;
  uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency
  RunMode mode = RunMode::pipeline;

  EngineParams engine_params() const;
  // canonical JSON echo of the resolved config (sorted keys)
  std::string resolved_json() const;
  uint64_t config_hash() const;  // FNV-1a 64 of resolved_json()
  // scale the error model along its ray to physical parameter p
  ErrorModel model_at(double p) const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Input for the `gap` debug command: a standalone brick with explicit error
// locations. Outcome indices run over the brick's internal fusions in
// lexicographic (x, y, z, axis) order, times two outcomes per fusion.
struct BrickConfig {
  Coord brick = {2, 2, 2};
  std::vector<int> erased;
  std::vector<int> flipped;
};

BrickConfig parse_brick_config(const std::string& path);

// provenance header line for emitted result files
std::string provenance_line(const RunConfig& cfg);

}  // namespace macromux

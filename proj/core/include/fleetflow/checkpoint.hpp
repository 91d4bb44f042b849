#pragma once

#include <string>

#include "fleetflow/param_vector.hpp"

namespace fleetflow::nn {

inline constexpr int kCheckpointFormatVersion = 1;

// Self-describing JSON blob: format version, layout descriptor, flat value
// array, free-form metadata. Round-trips bit-exactly.
void save_params(const std::string& path, const ParamVector& params,
                 const std::string& meta_json = "{}");

struct LoadedParams {
  ParamVector params;
  std::string meta_json;
};
LoadedParams load_params(const std::string& path);

// Atomic text file write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace fleetflow::nn

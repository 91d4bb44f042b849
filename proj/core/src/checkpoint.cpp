#include "fleetflow/checkpoint.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fleetflow/errors.hpp"

namespace fleetflow::nn {

using nlohmann::json;

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ContractError("cannot open for write: " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw ContractError("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

void save_params(const std::string& path, const ParamVector& params,
                 const std::string& meta_json) {
  json j;
  j["format_version"] = kCheckpointFormatVersion;
  json tensors = json::array();
  for (const auto& d : params.layout->tensors())
    tensors.push_back({{"name", d.name}, {"rows", d.rows}, {"cols", d.cols}});
  j["layout"] = std::move(tensors);
  j["values"] = params.values;
  j["meta"] = json::parse(meta_json);
  write_file_atomic(path, j.dump());
}

LoadedParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot open checkpoint: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ContractError("malformed checkpoint " + path + ": " + e.what());
  }
  if (j.at("format_version").get<int>() != kCheckpointFormatVersion)
    throw ContractError("unsupported checkpoint format in " + path);
  auto layout = std::make_shared<Layout>();
  for (const auto& t : j.at("layout"))
    layout->add(t.at("name").get<std::string>(), t.at("rows").get<std::size_t>(),
                t.at("cols").get<std::size_t>());
  LoadedParams out;
  out.params.layout = layout;
  out.params.values = j.at("values").get<std::vector<double>>();
  if (out.params.values.size() != layout->total())
    throw ContractError("checkpoint value count does not match layout: " + path);
  out.meta_json = j.at("meta").dump();
  return out;
}

}  // namespace fleetflow::nn

#pragma once

// On-disk pyramid: a JSON manifest plus per-level text artifacts.
//
//   manifest.json
//   approximation.csv
//   level_<j>/partition.txt   canonical 1-based labels of level j's input graph
//   level_<j>/a_int.tsv       intra-subgraph adjacency
//   level_<j>/a_ext.tsv       inter-subgraph adjacency
//   level_<j>/a_1.tsv         coarsened graph carried to level j+1
//   level_<j>/channel_<l>.csv
//
// Paths inside the manifest are relative to its directory. Operators are
// rebuilt from A_int + A_ext and the partition, so loading needs no other
// state and reproduces the analysis operators bit for bit.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cosub/filterbank.hpp"
#include "cosub/io.hpp"

namespace cosub {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kManifestFormat = "cosub-pyramid/1";

/// Provenance echoed into the manifest.
struct RunInfo {
  std::vector<std::string> command;
  std::vector<std::pair<std::string, std::string>> inputs;  ///< (role, path)
  nlohmann::json partition = nlohmann::json::object();
};

inline std::string norm_name(Norm p) { return p == Norm::L2 ? "l2" : "l1"; }

inline Norm parse_norm(const std::string& s) {
  if (s == "l1") return Norm::L1;
  if (s == "l2") return Norm::L2;
  throw InputError("unknown norm '" + s + "' (expected l1 or l2)");
}

inline std::filesystem::path save_pyramid(const Pyramid& pyramid, const std::filesystem::path& dir,
                                          const RunInfo& info = {}) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create '" + dir.string() + "': " + ec.message());

  nlohmann::ordered_json m;
  m["format"] = kManifestFormat;
  m["version"] = kVersion;
  m["command"] = info.command;
  auto inputs = nlohmann::ordered_json::array();
  for (const auto& [role, path] : info.inputs)
    inputs.push_back({{"role", role}, {"path", path}, {"fnv1a64", io::digest(io::read_file(path))}});
  m["inputs"] = inputs;
  m["partition"] = info.partition;
  m["norm"] = norm_name(pyramid.norm);
  m["input_size"] = pyramid.input_size;

  auto levels = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < pyramid.levels.size(); ++j) {
    const auto& lv = pyramid.levels[j];
    const std::string sub = "level_" + std::to_string(j + 1);
    fs::create_directories(dir / sub, ec);
    if (ec) throw InputError("cannot create '" + (dir / sub).string() + "': " + ec.message());
    nlohmann::ordered_json entry;
    entry["nodes"] = lv.input_size();
    entry["subgraphs"] = lv.partition.num_subgraphs();
    entry["partition"] = sub + "/partition.txt";
    entry["a_int"] = sub + "/a_int.tsv";
    entry["a_ext"] = sub + "/a_ext.tsv";
    entry["a_1"] = sub + "/a_1.tsv";
    io::write_partition((dir / sub / "partition.txt").string(), lv.partition);
    io::write_edge_list((dir / sub / "a_int.tsv").string(), lv.intra);
    io::write_edge_list((dir / sub / "a_ext.tsv").string(), lv.inter);
    io::write_edge_list((dir / sub / "a_1.tsv").string(), lv.coarse.at(0));
    auto channels = nlohmann::ordered_json::array();
    for (std::size_t l = 0; l < lv.channels.size(); ++l) {
      const std::string name = sub + "/channel_" + std::to_string(l + 1) + ".csv";
      io::write_signal((dir / name).string(), lv.channels[l]);
      channels.push_back({{"path", name}, {"length", lv.channels[l].size()}});
    }
    entry["channels"] = channels;
    levels.push_back(entry);
  }
  m["levels"] = levels;
  m["approximation"] = "approximation.csv";
  io::write_signal((dir / "approximation.csv").string(), pyramid.approximation);
  const auto path = dir / "manifest.json";
  io::write_file(path.string(), m.dump(2) + "\n");
  return path;
}

struct LoadedPyramid {
  Pyramid pyramid;
  nlohmann::json manifest;
};

/// Throws InputError for a missing or inconsistent artifact.
inline LoadedPyramid load_pyramid(const std::filesystem::path& manifest_path) {
  namespace fs = std::filesystem;
  LoadedPyramid out;
  try {
    out.manifest = nlohmann::json::parse(io::read_file(manifest_path.string()));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(manifest_path.string() + ": " + e.what());
  }
  const fs::path base = manifest_path.parent_path();
  const auto& m = out.manifest;
  try {
    if (m.at("format").get<std::string>() != kManifestFormat)
      throw InputError(manifest_path.string() + ": unsupported manifest format");
    Pyramid& p = out.pyramid;
    p.norm = parse_norm(m.at("norm").get<std::string>());
    p.input_size = m.at("input_size").get<int>();
    int expected = p.input_size;
    for (const auto& entry : m.at("levels")) {
      PyramidLevel lv;
      const int n = entry.at("nodes").get<int>();
      if (n != expected) throw InputError("manifest: level size does not chain with the previous level");
      lv.partition = io::read_partition((base / entry.at("partition").get<std::string>()).string());
      lv.intra = io::read_edge_list((base / entry.at("a_int").get<std::string>()).string(), n);
      lv.inter = io::read_edge_list((base / entry.at("a_ext").get<std::string>()).string(), n);
      if (lv.partition.size() != n) throw InputError("manifest: partition length does not match the level size");
      if (!(connected_components(lv.intra) == lv.partition))
        throw InputError("manifest: partition disagrees with the components of A_int");
      std::vector<Edge> all(lv.intra.edges().begin(), lv.intra.edges().end());
      all.insert(all.end(), lv.inter.edges().begin(), lv.inter.edges().end());
      const WeightedGraph graph(n, std::move(all));
      lv.operators = LevelOperators(graph, lv.partition, p.norm);
      const auto& channels = entry.at("channels");
      if (channels.size() != static_cast<std::size_t>(lv.operators.num_channels()))
        throw InputError("manifest: wrong number of channels");
      for (std::size_t l = 0; l < channels.size(); ++l) {
        auto x = io::read_signal((base / channels[l].at("path").get<std::string>()).string());
        if (static_cast<std::size_t>(x.size()) != lv.operators.index_list(static_cast<int>(l)).size())
          throw InputError("manifest: channel " + std::to_string(l + 1) + " has the wrong length");
        lv.channels.push_back(std::move(x));
      }
      if (entry.contains("a_1"))
        lv.coarse.push_back(io::read_edge_list((base / entry.at("a_1").get<std::string>()).string(),
                                               static_cast<int>(lv.channels[0].size())));
      expected = static_cast<int>(lv.channels[0].size());
      p.levels.push_back(std::move(lv));
    }
    p.approximation = io::read_signal((base / m.at("approximation").get<std::string>()).string());
    if (p.approximation.size() != expected) throw InputError("manifest: approximation has the wrong length");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(manifest_path.string() + ": " + e.what());
  }
  return out;
}

}  // namespace cosub

#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nervekit/cone_cylinder.hpp"
#include "nervekit/cover.hpp"
#include "nervekit/error.hpp"
#include "nervekit/homology.hpp"
#include "nervekit/metric_space.hpp"
#include "nervekit/nerve.hpp"
#include "nervekit/retraction.hpp"

namespace nervekit::io {

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(what + " is not valid JSON: " + e.what());
  }
}

/// {"n": N, "dist": [[...]]} or {"coords": [[...]]}.
inline FiniteMetricSpace space_from_json(const Json& j) {
  try {
    if (j.contains("coords")) return FiniteMetricSpace::from_coords(j.at("coords").get<std::vector<std::vector<double>>>());
    if (j.contains("dist")) {
      auto rows = j.at("dist").get<std::vector<std::vector<double>>>();
      if (j.contains("n") && j.at("n").get<std::size_t>() != rows.size()) {
        throw ValidationError("\"n\" does not match the number of distance rows");
      }
      return FiniteMetricSpace::from_rows(rows);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed space JSON: ") + e.what());
  }
  throw ValidationError("space JSON needs a \"dist\" matrix or \"coords\" list");
}

/// N rows of N comma-separated numbers; a non-numeric first row is a header.
inline FiniteMetricSpace space_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
        row.push_back(v);
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw ValidationError("non-numeric entry in distance CSV row " + std::to_string(rows.size()));
    }
    first = false;
    rows.push_back(std::move(row));
  }
  return FiniteMetricSpace::from_rows(rows);
}

inline FiniteMetricSpace load_space(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return space_from_csv(text);
  return space_from_json(parse_json(text, path));
}

inline Json space_to_json(const FiniteMetricSpace& space) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    auto r = space.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return Json{{"n", space.size()}, {"dist", rows}};
}

inline Json cover_to_json(const Cover& cover) {
  Json hints = Json::array();
  for (const auto& h : cover.radius_hint()) hints.push_back(h ? Json(*h) : Json(nullptr));
  return Json{{"sets", cover.sets()}, {"centers", cover.centers()}, {"radius_hint", hints}};
}

/// Accepts a bare cover object or a `cover` report that nests one under "cover".
inline Cover cover_from_json(const Json& doc, const SpacePtr& space) {
  try {
    const Json& j = doc.contains("cover") ? doc.at("cover") : doc;
    auto sets = j.at("sets").get<std::vector<std::vector<std::size_t>>>();
    auto centers = j.at("centers").get<std::vector<std::size_t>>();
    std::vector<std::optional<double>> hints;
    if (j.contains("radius_hint")) {
      for (const auto& h : j.at("radius_hint")) hints.push_back(h.is_null() ? std::nullopt : std::optional<double>(h.get<double>()));
    }
    return Cover(space, std::move(sets), std::move(centers), std::move(hints));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed cover JSON: ") + e.what());
  }
}

/// {"n": N, "max_dim": cap, "simplices": maximal simplices}.
inline Json nerve_to_json(const SimplicialComplex& k) {
  return Json{{"n", k.vertex_count()}, {"max_dim", k.dim_cap()}, {"simplices", k.maximal_simplices()}};
}

inline SimplicialComplex nerve_from_json(const Json& j) {
  try {
    return SimplicialComplex::from_simplices(j.at("n").get<std::size_t>(), j.at("simplices").get<std::vector<Simplex>>(),
                                             j.value("max_dim", -1));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed nerve JSON: ") + e.what());
  }
}

inline Json betti_to_json(const BettiVector& b) { return Json(b.ranks); }

inline Json barycentric_to_json(const BarycentricPoint& p) {
  Json o = Json::object();
  for (const auto& [v, w] : p.entries()) o[std::to_string(v)] = w;
  return o;
}

inline BarycentricPoint barycentric_from_json(const Json& j) {
  std::vector<std::pair<std::size_t, double>> w;
  for (const auto& [key, value] : j.items()) w.emplace_back(std::stoul(key), value.get<double>());
  return BarycentricPoint(std::move(w));
}

inline Json cylinder_point_to_json(const CylinderPoint& p) {
  return Json{{"theta", barycentric_to_json(p.theta)}, {"base", p.cone.base}, {"t", p.cone.t}};
}

inline CylinderPoint cylinder_point_from_json(const Json& j) {
  return CylinderPoint{barycentric_from_json(j.at("theta")), ConePoint{j.at("base").get<std::size_t>(), j.at("t").get<double>()}};
}

inline Json trace_to_json(const DeformationTrace& t) {
  Json path = Json::array();
  for (const auto& p : t.path) path.push_back(cylinder_point_to_json(p));
  return Json{{"s", t.s},
              {"path", path},
              {"stage_dims", t.stage_dims},
              {"stage_moved", std::vector<bool>(t.stage_moved.begin(), t.stage_moved.end())},
              {"starts_at_input", t.starts_at_input},
              {"ends_in_retract", t.ends_in_retract}};
}

/// {"image": [...]} or a bare array.
inline std::vector<std::size_t> index_map_from_json(const Json& j) {
  try {
    if (j.is_array()) return j.get<std::vector<std::size_t>>();
    return j.at("image").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed index map JSON: ") + e.what());
  }
}

}  // namespace nervekit::io

#pragma once

// Dataset ingestion and component writers.
//
// Manifest (JSON):
//   {
//     "window": {"x_min": 0, "y_min": 0, "x_max": 1, "y_max": 1},   // optional
//     "components": [
//       {"name": "burglary", "kind": "points",   "file": "crime.csv"},
//       {"name": "assault",  "kind": "lattice",  "file": "assault.csv", "regular": [8, 8]},
//       {"name": "heroin",   "kind": "polygons", "file": "wards.geojson"}
//     ]
//   }
// Points CSV: header `name,x,y`; rows whose `name` equals the component name
// (or the entry's "filter") are taken. Lattice CSV: `id,x,y,value`.
// Polygons: GeoJSON FeatureCollection of Polygon / MultiPolygon features with
// a numeric `value` property (optional `id`); sites sit at area centroids.
// Without a manifest window the bounding box of all coordinates is used.

#include <algorithm>
#include <array>
#include <optional>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixsdg/format.hpp"
#include "mixsdg/model.hpp"
#include "mixsdg/preprocess.hpp"

namespace mixsdg {

namespace fs = std::filesystem;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row

  std::size_t column(const std::string& name, const std::string& source) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(source + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
};

namespace detail {

inline std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline double parse_number(const std::string& s, const std::string& source, std::size_t line, const char* col) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(source + ":" + std::to_string(line) + ": malformed value '" + s + "' in column '" + col + "'");
  }
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size())
      throw Error(path.string() + ":" + std::to_string(lineno) + ": malformed row (expected " +
                  std::to_string(t.header.size()) + " fields, got " + std::to_string(cells.size()) + ")");
    t.rows.push_back(std::move(cells));
    t.line_numbers.push_back(lineno);
  }
  if (!have_header) throw Error(path.string() + ": empty file");
  return t;
}

inline std::vector<Point> read_points_csv(const fs::path& path, const std::string& filter) {
  const auto t = read_csv(path);
  const auto src = path.string();
  const auto cn = t.column("name", src), cx = t.column("x", src), cy = t.column("y", src);
  std::vector<Point> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (filter != "*" && row[cn] != filter) continue;
    out.push_back({detail::parse_number(row[cx], src, t.line_numbers[r], "x"),
                   detail::parse_number(row[cy], src, t.line_numbers[r], "y")});
  }
  return out;
}

inline std::vector<LatticeSite> read_lattice_csv(const fs::path& path) {
  const auto t = read_csv(path);
  const auto src = path.string();
  const auto ci = t.column("id", src), cx = t.column("x", src), cy = t.column("y", src),
             cv = t.column("value", src);
  std::vector<LatticeSite> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const auto ln = t.line_numbers[r];
    out.push_back({row[ci],
                   {detail::parse_number(row[cx], src, ln, "x"), detail::parse_number(row[cy], src, ln, "y")},
                   detail::parse_number(row[cv], src, ln, "value"),
                   std::nullopt});
  }
  return out;
}

namespace detail {

inline std::vector<Point> ring_from_json(const nlohmann::json& ring) {
  std::vector<Point> out;
  for (const auto& xy : ring) out.push_back({xy.at(0).get<double>(), xy.at(1).get<double>()});
  if (!out.empty() && !(out.front() == out.back())) out.push_back(out.front());
  return out;
}

inline Polygon polygon_from_json(const nlohmann::json& rings) {
  Polygon p;
  if (rings.empty()) throw Error("polygon without rings");
  p.exterior = ring_from_json(rings.at(0));
  for (std::size_t k = 1; k < rings.size(); ++k) p.holes.push_back(ring_from_json(rings[k]));
  return p;
}

}  // namespace detail

inline std::vector<LatticeSite> read_polygons_geojson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw Error(path.string() + ": invalid JSON: " + e.what());
  }
  if (doc.value("type", "") != "FeatureCollection") throw Error(path.string() + ": expected a FeatureCollection");
  std::vector<LatticeSite> out;
  std::size_t index = 0;
  for (const auto& feat : doc.at("features")) {
    const auto where = path.string() + ": feature " + std::to_string(index);
    const auto& props = feat.contains("properties") ? feat["properties"] : nlohmann::json::object();
    if (!props.is_object() || !props.contains("value") || !props["value"].is_number())
      throw Error(where + ": missing numeric 'value' property");
    std::string id = std::to_string(index);
    if (props.contains("id")) id = props["id"].is_string() ? props["id"].get<std::string>() : props["id"].dump();
    else if (feat.contains("id")) id = feat["id"].is_string() ? feat["id"].get<std::string>() : feat["id"].dump();

    const auto& geom = feat.at("geometry");
    const auto type = geom.value("type", "");
    std::vector<Polygon> parts;
    try {
      if (type == "Polygon") {
        parts.push_back(detail::polygon_from_json(geom.at("coordinates")));
      } else if (type == "MultiPolygon") {
        for (const auto& rings : geom.at("coordinates")) parts.push_back(detail::polygon_from_json(rings));
      } else {
        throw Error("unsupported geometry type '" + type + "'");
      }
      out.push_back({id, polygon_centroid(std::span<const Polygon>(parts)), props["value"].get<double>(), std::nullopt});
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
    ++index;
  }
  return out;
}

namespace detail {

inline Window window_from_json(const nlohmann::json& j) {
  if (j.is_array()) {
    if (j.size() != 4) throw Error("manifest: window array must be [x_min, y_min, x_max, y_max]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  }
  return {j.at("x_min").get<double>(), j.at("y_min").get<double>(), j.at("x_max").get<double>(),
          j.at("y_max").get<double>()};
}

inline void assign_regular_cells(LatticeComponent& c, const Window& w) {
  const auto [l1, l2] = *c.regular;
  for (auto& s : c.sites) {
    const double fx = (s.centroid.x - w.x_min) / w.width() * l1;
    const double fy = (s.centroid.y - w.y_min) / w.height() * l2;
    s.cell = CellIndex{std::clamp(static_cast<int>(std::floor(fx)), 0, l1 - 1),
                       std::clamp(static_cast<int>(std::floor(fy)), 0, l2 - 1)};
  }
}

}  // namespace detail

inline HybridDataset read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw Error(path.string() + ": invalid JSON: " + e.what());
  }
  const auto base = path.parent_path();
  HybridDataset ds;
  std::optional<Window> window;
  if (doc.contains("window")) window = detail::window_from_json(doc["window"]);

  std::vector<std::optional<std::array<int, 2>>> regular;
  for (const auto& entry : doc.at("components")) {
    const auto name = entry.at("name").get<std::string>();
    const auto kind = entry.at("kind").get<std::string>();
    const auto file = base / entry.at("file").get<std::string>();
    if (entry.contains("window")) {
      const auto cw = detail::window_from_json(entry["window"]);
      if (window && !(*window == cw)) throw Error("manifest: mixed windows (component '" + name + "')");
      window = cw;
    }
    if (kind == "points") {
      ds.components.emplace_back(PointComponent{name, read_points_csv(file, entry.value("filter", name))});
      regular.emplace_back();
    } else if (kind == "lattice") {
      ds.components.emplace_back(LatticeComponent{name, read_lattice_csv(file), std::nullopt});
      if (entry.contains("regular"))
        regular.emplace_back(std::array<int, 2>{entry["regular"].at(0).get<int>(), entry["regular"].at(1).get<int>()});
      else
        regular.emplace_back();
    } else if (kind == "polygons") {
      ds.components.emplace_back(LatticeComponent{name, read_polygons_geojson(file), std::nullopt});
      regular.emplace_back();
    } else {
      throw Error("manifest: unknown kind '" + kind + "' for component '" + name + "'");
    }
  }

  if (!window) {
    bool first = true;
    Window bb;
    auto grow = [&](Point p) {
      if (first) {
        bb = {p.x, p.y, p.x, p.y};
        first = false;
      }
      bb.x_min = std::min(bb.x_min, p.x);
      bb.y_min = std::min(bb.y_min, p.y);
      bb.x_max = std::max(bb.x_max, p.x);
      bb.y_max = std::max(bb.y_max, p.y);
    };
    for (const auto& c : ds.components) {
      if (const auto* p = std::get_if<PointComponent>(&c))
        for (const auto& pt : p->locations) grow(pt);
      else
        for (const auto& s : std::get<LatticeComponent>(c).sites) grow(s.centroid);
    }
    window = bb;
  }
  ds.window = *window;

  for (std::size_t k = 0; k < ds.components.size(); ++k) {
    if (!regular[k]) continue;
    auto& lc = std::get<LatticeComponent>(ds.components[k]);
    lc.regular = RegularShape{(*regular[k])[0], (*regular[k])[1]};
    if (ds.window.valid() && lc.regular->l1 > 0 && lc.regular->l2 > 0) detail::assign_regular_cells(lc, ds.window);
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Writers

inline void write_points_csv(const fs::path& path, const PointComponent& c) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "name,x,y\n";
  for (const auto& p : c.locations)
    out << detail::csv_escape(c.name) << ',' << fmt_data(p.x) << ',' << fmt_data(p.y) << '\n';
}

inline void write_lattice_csv(const fs::path& path, const LatticeComponent& c) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "id,x,y,value\n";
  for (const auto& s : c.sites)
    out << detail::csv_escape(s.id) << ',' << fmt_data(s.centroid.x) << ',' << fmt_data(s.centroid.y) << ','
        << fmt_data(s.value) << '\n';
}

/// Writes one CSV per component next to `manifest` plus the manifest itself.
inline void write_dataset(const fs::path& manifest, const HybridDataset& ds) {
  const auto dir = manifest.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  std::ostringstream js;
  js << "{\n  \"window\": {\"x_min\": " << fmt_data(ds.window.x_min) << ", \"y_min\": " << fmt_data(ds.window.y_min)
     << ", \"x_max\": " << fmt_data(ds.window.x_max) << ", \"y_max\": " << fmt_data(ds.window.y_max)
     << "},\n  \"components\": [\n";
  for (std::size_t k = 0; k < ds.components.size(); ++k) {
    const auto& c = ds.components[k];
    const auto& name = component_name(c);
    const auto file = name + ".csv";
    const nlohmann::json jname = name;
    if (const auto* p = std::get_if<PointComponent>(&c)) {
      write_points_csv(dir / file, *p);
      js << "    {\"name\": " << jname.dump() << ", \"kind\": \"points\", \"file\": " << nlohmann::json(file).dump()
         << "}";
    } else {
      const auto& l = std::get<LatticeComponent>(c);
      write_lattice_csv(dir / file, l);
      js << "    {\"name\": " << jname.dump() << ", \"kind\": \"lattice\", \"file\": " << nlohmann::json(file).dump();
      if (l.regular) js << ", \"regular\": [" << l.regular->l1 << ", " << l.regular->l2 << "]";
      js << "}";
    }
    js << (k + 1 < ds.components.size() ? ",\n" : "\n");
  }
  js << "  ]\n}\n";
  std::ofstream out(manifest);
  if (!out) throw Error("cannot write " + manifest.string());
  out << js.str();
}

}  // namespace mixsdg

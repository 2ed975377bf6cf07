#pragma once

// Dependence graph serialisation: DOT (display), GraphML and JSON (data).
//
// JSON document:
//   {
//     "format": "mixsdg-graph/1",
//     "xi": <threshold>,
//     "vertices": [{"index": 0, "name": "...", "kind": "point"|"lattice"}, ...],
//     "edges": [{"source": i, "target": j, "sup": s, "argmax": [p, q]}, ...],
//     "sup_matrix": [[...], ...],          // d x d, unit diagonal
//     "argmax": [[[p, q], ...], ...]       // d x d
//   }

#include <algorithm>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "mixsdg/format.hpp"
#include "mixsdg/model.hpp"

namespace mixsdg {

enum class GraphFormat { dot, graphml, json };

inline GraphFormat parse_graph_format(std::string_view s) {
  if (s == "dot") return GraphFormat::dot;
  if (s == "graphml") return GraphFormat::graphml;
  if (s == "json") return GraphFormat::json;
  throw Error("unknown graph format '" + std::string(s) + "'");
}

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string xml_unescape(std::string s) {
  const std::pair<const char*, char> table[] = {{"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&amp;", '&'}};
  for (const auto& [ent, ch] : table) {
    std::string::size_type pos = 0;
    const std::string e(ent);
    while ((pos = s.find(e, pos)) != std::string::npos) {
      s.replace(pos, e.size(), 1, ch);
      ++pos;
    }
  }
  return s;
}

inline std::string to_dot(const DependenceGraph& g) {
  std::ostringstream o;
  o << "graph msdgm {\n";
  o << "  graph [xi=\"" << fmt_display(g.threshold) << "\"];\n";
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    o << "  v" << i << " [label=" << dot_quote(g.vertices[i]) << ", kind=\"" << to_string(g.kinds[i]) << "\"];\n";
  for (const auto& e : g.edges)
    o << "  v" << e.a << " -- v" << e.b << " [sup=\"" << fmt_display(g.sup(e.a, e.b)) << "\"];\n";
  o << "}\n";
  return o.str();
}

inline std::string to_graphml(const DependenceGraph& g) {
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
    << "  <key id=\"xi\" for=\"graph\" attr.name=\"xi\" attr.type=\"double\"/>\n"
    << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
    << "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
    << "  <key id=\"sup\" for=\"edge\" attr.name=\"sup\" attr.type=\"double\"/>\n"
    << "  <key id=\"argmax_p\" for=\"edge\" attr.name=\"argmax_p\" attr.type=\"int\"/>\n"
    << "  <key id=\"argmax_q\" for=\"edge\" attr.name=\"argmax_q\" attr.type=\"int\"/>\n"
    << "  <graph id=\"msdgm\" edgedefault=\"undirected\">\n"
    << "    <data key=\"xi\">" << fmt_data(g.threshold) << "</data>\n";
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    o << "    <node id=\"v" << i << "\"><data key=\"label\">" << xml_escape(g.vertices[i])
      << "</data><data key=\"kind\">" << to_string(g.kinds[i]) << "</data></node>\n";
  for (const auto& e : g.edges) {
    const auto am = g.sup.argmax[e.a * g.sup.d + e.b];
    o << "    <edge source=\"v" << e.a << "\" target=\"v" << e.b << "\"><data key=\"sup\">"
      << fmt_data(g.sup(e.a, e.b)) << "</data><data key=\"argmax_p\">" << am.p
      << "</data><data key=\"argmax_q\">" << am.q << "</data></edge>\n";
  }
  o << "  </graph>\n</graphml>\n";
  return o.str();
}

inline std::string to_json(const DependenceGraph& g) {
  const std::size_t d = g.vertices.size();
  std::ostringstream o;
  o << "{\n  \"format\": \"mixsdg-graph/1\",\n  \"xi\": " << fmt_data(g.threshold) << ",\n  \"vertices\": [";
  for (std::size_t i = 0; i < d; ++i)
    o << (i ? ",\n" : "\n") << "    {\"index\": " << i << ", \"name\": " << nlohmann::json(g.vertices[i]).dump()
      << ", \"kind\": \"" << to_string(g.kinds[i]) << "\"}";
  o << (d ? "\n  ],\n" : "],\n") << "  \"edges\": [";
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    const auto am = g.sup.argmax[e.a * d + e.b];
    o << (k ? ",\n" : "\n") << "    {\"source\": " << e.a << ", \"target\": " << e.b
      << ", \"sup\": " << fmt_data(g.sup(e.a, e.b)) << ", \"argmax\": [" << am.p << ", " << am.q << "]}";
  }
  o << (g.edges.empty() ? "],\n" : "\n  ],\n") << "  \"sup_matrix\": [";
  for (std::size_t i = 0; i < d; ++i) {
    o << (i ? ",\n" : "\n") << "    [";
    for (std::size_t j = 0; j < d; ++j) o << (j ? ", " : "") << fmt_data(g.sup(i, j));
    o << "]";
  }
  o << (d ? "\n  ],\n" : "],\n") << "  \"argmax\": [";
  for (std::size_t i = 0; i < d; ++i) {
    o << (i ? ",\n" : "\n") << "    [";
    for (std::size_t j = 0; j < d; ++j) {
      const auto am = g.sup.argmax[i * d + j];
      o << (j ? ", " : "") << "[" << am.p << ", " << am.q << "]";
    }
    o << "]";
  }
  o << (d ? "\n  ]\n" : "]\n") << "}\n";
  return o.str();
}

inline ComponentKind kind_from_string(const std::string& s) {
  if (s == "point") return ComponentKind::point;
  if (s == "lattice") return ComponentKind::lattice;
  throw Error("unknown component kind '" + s + "'");
}

}  // namespace detail

/// Deterministic rendering of the graph in the requested format.
inline std::string export_graph(const DependenceGraph& g, GraphFormat format) {
  if (g.kinds.size() != g.vertices.size() || g.sup.d != g.vertices.size())
    throw Error("export_graph: inconsistent graph");
  switch (format) {
    case GraphFormat::dot: return detail::to_dot(g);
    case GraphFormat::graphml: return detail::to_graphml(g);
    case GraphFormat::json: return detail::to_json(g);
  }
  throw Error("export_graph: unknown format");
}

inline std::string export_graph(const DependenceGraph& g, std::string_view format) {
  return export_graph(g, parse_graph_format(format));
}

/// Reads a document written by export_graph. JSON restores everything; DOT
/// and GraphML restore vertices, kinds, edges, edge sups and the threshold
/// (DOT values at display precision).
inline DependenceGraph import_graph(const std::string& text, GraphFormat format) {
  DependenceGraph g;
  if (format == GraphFormat::json) {
    const auto j = nlohmann::json::parse(text);
    g.threshold = j.at("xi").get<double>();
    for (const auto& v : j.at("vertices")) {
      g.vertices.push_back(v.at("name").get<std::string>());
      g.kinds.push_back(detail::kind_from_string(v.at("kind").get<std::string>()));
    }
    const std::size_t d = g.vertices.size();
    g.sup = SupMatrix(d);
    const auto& sm = j.at("sup_matrix");
    const auto& am = j.at("argmax");
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        g.sup(a, b) = sm.at(a).at(b).get<double>();
        g.sup.argmax[a * d + b] = {am.at(a).at(b).at(0).get<int>(), am.at(a).at(b).at(1).get<int>()};
      }
    for (const auto& e : j.at("edges")) g.edges.push_back({e.at("source").get<std::size_t>(), e.at("target").get<std::size_t>()});
    std::sort(g.edges.begin(), g.edges.end());
    return g;
  }

  std::vector<std::tuple<std::size_t, std::size_t, double, Frequency>> edges;
  if (format == GraphFormat::dot) {
    static const std::regex xi_re(R"re(graph \[xi="([^"]+)"\];)re");
    static const std::regex node_re(R"re(^\s*v(\d+) \[label="((?:[^"\\]|\\.)*)", kind="(\w+)"\];)re");
    static const std::regex edge_re(R"re(^\s*v(\d+) -- v(\d+) \[sup="([^"]+)"\];)re");
    std::istringstream in(text);
    std::string line;
    std::smatch m;
    while (std::getline(in, line)) {
      if (std::regex_search(line, m, xi_re)) {
        g.threshold = std::stod(m[1]);
      } else if (std::regex_search(line, m, node_re)) {
        std::string label;
        const std::string raw = m[2];
        for (std::size_t k = 0; k < raw.size(); ++k) label += (raw[k] == '\\' && k + 1 < raw.size()) ? raw[++k] : raw[k];
        g.vertices.push_back(label);
        g.kinds.push_back(detail::kind_from_string(m[3]));
      } else if (std::regex_search(line, m, edge_re)) {
        edges.emplace_back(std::stoul(m[1]), std::stoul(m[2]), std::stod(m[3]), Frequency{});
      }
    }
  } else {
    static const std::regex xi_re(R"re(<data key="xi">([^<]+)</data>)re");
    static const std::regex node_re(
        R"re(<node id="v(\d+)"><data key="label">([^<]*)</data><data key="kind">(\w+)</data></node>)re");
    static const std::regex edge_re(
        R"re(<edge source="v(\d+)" target="v(\d+)"><data key="sup">([^<]+)</data><data key="argmax_p">(-?\d+)</data><data key="argmax_q">(-?\d+)</data></edge>)re");
    std::smatch m;
    if (std::regex_search(text, m, xi_re)) g.threshold = std::stod(m[1]);
    for (std::sregex_iterator it(text.begin(), text.end(), node_re), end; it != end; ++it) {
      g.vertices.push_back(detail::xml_unescape((*it)[2]));
      g.kinds.push_back(detail::kind_from_string((*it)[3]));
    }
    for (std::sregex_iterator it(text.begin(), text.end(), edge_re), end; it != end; ++it)
      edges.emplace_back(std::stoul((*it)[1]), std::stoul((*it)[2]), std::stod((*it)[3]),
                         Frequency{std::stoi((*it)[4]), std::stoi((*it)[5])});
  }
  const std::size_t d = g.vertices.size();
  g.sup = SupMatrix(d);
  for (const auto& [a, b, s, f] : edges) {
    if (a >= d || b >= d) throw Error("import_graph: edge references unknown vertex");
    g.sup(a, b) = g.sup(b, a) = s;
    g.sup.argmax[a * d + b] = g.sup.argmax[b * d + a] = f;
    g.edges.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

}  // namespace mixsdg

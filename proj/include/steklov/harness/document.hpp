#ifndef STEKLOV_HARNESS_DOCUMENT_HPP
#define STEKLOV_HARNESS_DOCUMENT_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "steklov/embedding.hpp"
#include "steklov/error.hpp"
#include "steklov/graph.hpp"

namespace steklov::harness {

/// JSON interchange record:
///   {"n": int, "edges": [[int,int],...], "boundary": [int,...],
///    "rotation": [[int,...],...]?, "meta": {...}?}
struct GraphDocument {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<Vertex> boundary;
  std::optional<std::vector<std::vector<Vertex>>> rotation;
  nlohmann::json meta = nullptr;

  bool operator==(const GraphDocument&) const = default;
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Schema, where + ": " + what);
}

inline int read_int(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where, "expected an integer");
  return j.get<int>();
}

inline std::vector<int> read_int_array(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_int(j[i], where + "/" + std::to_string(i)));
  return out;
}

template <typename T>
void append_array(std::string& out, const std::vector<T>& values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  out += ']';
}

}  // namespace detail

/// Parses a document. JSON syntax errors report the byte offset, schema
/// errors the JSON pointer of the offending value.
inline GraphDocument parse_document(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Schema, "byte " + std::to_string(e.byte) + ": malformed JSON");
  }
  if (!j.is_object()) detail::schema_error("/", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "n" && key != "edges" && key != "boundary" && key != "rotation" && key != "meta") {
      detail::schema_error("/" + key, "unknown field");
    }
  }
  GraphDocument doc;
  if (!j.contains("n")) detail::schema_error("/n", "missing");
  doc.n = detail::read_int(j["n"], "/n");
  if (!j.contains("edges")) detail::schema_error("/edges", "missing");
  if (!j["edges"].is_array()) detail::schema_error("/edges", "expected an array");
  for (std::size_t i = 0; i < j["edges"].size(); ++i) {
    const std::string where = "/edges/" + std::to_string(i);
    auto pair = detail::read_int_array(j["edges"][i], where);
    if (pair.size() != 2) detail::schema_error(where, "expected two endpoints");
    doc.edges.push_back({pair[0], pair[1]});
  }
  if (!j.contains("boundary")) detail::schema_error("/boundary", "missing");
  doc.boundary = detail::read_int_array(j["boundary"], "/boundary");
  if (j.contains("rotation") && !j["rotation"].is_null()) {
    if (!j["rotation"].is_array()) detail::schema_error("/rotation", "expected an array");
    std::vector<std::vector<Vertex>> rot;
    for (std::size_t v = 0; v < j["rotation"].size(); ++v) rot.push_back(detail::read_int_array(j["rotation"][v], "/rotation/" + std::to_string(v)));
    doc.rotation = std::move(rot);
  }
  if (j.contains("meta")) {
    if (!j["meta"].is_object() && !j["meta"].is_null()) detail::schema_error("/meta", "expected an object");
    doc.meta = j["meta"];
  }
  return doc;
}

/// One array per line, object keys sorted; byte-stable for equal documents.
inline std::string serialize_document(const GraphDocument& doc) {
  std::string out = "{\n  \"n\": " + std::to_string(doc.n) + ",\n  \"edges\": [";
  for (std::size_t i = 0; i < doc.edges.size(); ++i) {
    if (i) out += ',';
    out += '[' + std::to_string(doc.edges[i].u) + ',' + std::to_string(doc.edges[i].v) + ']';
  }
  out += "],\n  \"boundary\": ";
  detail::append_array(out, doc.boundary);
  if (doc.rotation) {
    out += ",\n  \"rotation\": [";
    for (std::size_t v = 0; v < doc.rotation->size(); ++v) {
      if (v) out += ',';
      detail::append_array(out, (*doc.rotation)[v]);
    }
    out += ']';
  }
  if (!doc.meta.is_null()) out += ",\n  \"meta\": " + doc.meta.dump();
  out += "\n}\n";
  return out;
}

inline GraphDocument to_document(const BoundaryGraph& g, nlohmann::json meta = nullptr) {
  return {g.n(), g.edges(), g.boundary(), std::nullopt, std::move(meta)};
}

inline GraphDocument to_document(const RotationGraph& rg, nlohmann::json meta = nullptr) {
  GraphDocument doc = to_document(rg.base(), std::move(meta));
  doc.rotation = rg.rotations();
  return doc;
}

inline BoundaryGraph to_boundary_graph(const GraphDocument& doc) { return BoundaryGraph(doc.n, doc.edges, doc.boundary); }

inline RotationGraph to_rotation_graph(const GraphDocument& doc) {
  if (!doc.rotation) detail::schema_error("/rotation", "this operation needs a rotation system");
  return RotationGraph(to_boundary_graph(doc), *doc.rotation);
}

inline GraphDocument read_document_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
}

}  // namespace steklov::harness

#endif  // STEKLOV_HARNESS_DOCUMENT_HPP

#pragma once

// Validates a document against the subset of JSON Schema used in schemas/:
// type (single or list), required, properties, items and local $ref.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace schema {

using nlohmann::json;

inline bool type_matches(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  return false;
}

inline void check(const json& v, const json& s, const json& root, const std::string& path,
                  std::vector<std::string>& errors) {
  if (s.contains("$ref")) {
    const std::string ref = s["$ref"];
    check(v, root.at(json::json_pointer(ref.substr(1))), root, path, errors);
    return;
  }
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_array()) {
      for (const auto& t : s["type"]) ok |= type_matches(v, t);
    } else {
      ok = type_matches(v, s["type"]);
    }
    if (!ok) {
      errors.push_back(path + ": expected " + s["type"].dump() + ", got " + v.type_name());
      return;
    }
  }
  if (v.is_object()) {
    if (s.contains("required")) {
      for (const auto& key : s["required"]) {
        if (!v.contains(key.get<std::string>())) errors.push_back(path + ": missing " + key.get<std::string>());
      }
    }
    if (s.contains("properties")) {
      for (const auto& [key, sub] : s["properties"].items()) {
        if (v.contains(key)) check(v[key], sub, root, path + "/" + key, errors);
      }
    }
  }
  if (v.is_array() && s.contains("items")) {
    for (std::size_t i = 0; i < v.size(); ++i) check(v[i], s["items"], root, path + "/" + std::to_string(i), errors);
  }
}

inline json load(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

inline std::vector<std::string> validate(const json& doc, const json& schema_doc) {
  std::vector<std::string> errors;
  check(doc, schema_doc, schema_doc, "", errors);
  return errors;
}

}  // namespace schema

#include "discwitness/shape_io.hpp"

#include <fstream>
#include <sstream>

#include "discwitness/error.hpp"
#include "json.hpp"

namespace discwitness {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::MalformedSpec, what); }

double number(const json& obj, const char* key, std::optional<double> fallback = std::nullopt) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    malformed(std::string("missing field '") + key + "'");
  }
  if (!it->is_number()) malformed(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

Vec2 point(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) return {};
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
    malformed(std::string("field '") + key + "' must be [x, y]");
  return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

std::vector<double> numbers(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) return {};
  if (!it->is_array()) malformed(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) malformed(std::string("field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

ShapeSpec parse_shape_json(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) malformed("shape file is not valid JSON");
  if (!doc.is_object()) malformed("shape must be a JSON object");
  const auto type = doc.find("type");
  if (type == doc.end() || !type->is_string()) malformed("missing string field 'type'");
  const std::string kind = type->get<std::string>();
  if (kind == "circle") {
    return CircleSpec{point(doc, "center"), number(doc, "radius")};
  }
  if (kind == "ellipse") {
    return EllipseSpec{number(doc, "a"), number(doc, "b"), point(doc, "center"),
                       number(doc, "rotation", 0.0)};
  }
  if (kind == "support_fourier") {
    return FourierSpec{number(doc, "a0"), numbers(doc, "cos"), numbers(doc, "sin")};
  }
  malformed("unknown shape type '" + kind + "'");
}

ShapeSpec load_shape_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot read shape file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_shape_json(buffer.str());
}

std::string shape_to_json(const ShapeSpec& spec) {
  json doc;
  if (const auto* c = std::get_if<CircleSpec>(&spec)) {
    doc = {{"type", "circle"}, {"center", {c->center.x, c->center.y}}, {"radius", c->radius}};
  } else if (const auto* e = std::get_if<EllipseSpec>(&spec)) {
    doc = {{"type", "ellipse"},
           {"a", e->a},
           {"b", e->b},
           {"center", {e->center.x, e->center.y}},
           {"rotation", e->rotation}};
  } else {
    const auto& f = std::get<FourierSpec>(spec);
    doc = {{"type", "support_fourier"}, {"a0", f.a0}, {"cos", f.cos}, {"sin", f.sin}};
  }
  return doc.dump();
}

}  // namespace discwitness

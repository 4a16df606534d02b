#include "vton/annotation.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "vton/common.hpp"

namespace vton::prep {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

const char* to_string(SleeveLength v) {
  switch (v) {
    case SleeveLength::Short: return "short";
    case SleeveLength::Long: return "long";
    case SleeveLength::Sleeveless: return "sleeveless";
    default: return "unknown";
  }
}

const char* to_string(TriState v) {
  switch (v) {
    case TriState::Yes: return "yes";
    case TriState::No: return "no";
    default: return "unknown";
  }
}

SleeveLength sleeve_length_from_string(const std::string& s) {
  const std::string v = lower(trim(s));
  if (v == "short") return SleeveLength::Short;
  if (v == "long") return SleeveLength::Long;
  if (v == "sleeveless") return SleeveLength::Sleeveless;
  return SleeveLength::Unknown;
}

TriState tristate_from_string(const std::string& s) {
  const std::string v = lower(trim(s));
  if (v == "yes") return TriState::Yes;
  if (v == "no") return TriState::No;
  return TriState::Unknown;
}

const char* to_string(AnnotationViolation v) {
  switch (v) {
    case AnnotationViolation::SleevelessRolled: return "SLEEVELESS_ROLLED";
    case AnnotationViolation::OuterOpenWithoutOuter: return "OUTER_OPEN_WITHOUT_OUTER";
  }
  return "?";
}

std::vector<AnnotationViolation> validate_annotation(const GarmentAnnotation& ann) {
  std::vector<AnnotationViolation> out;
  if (ann.sleeve_length == SleeveLength::Sleeveless && ann.sleeves_rolled_up == TriState::Yes)
    out.push_back(AnnotationViolation::SleevelessRolled);
  if (ann.wearing_outer_top == TriState::No && ann.outer_top_open == TriState::Yes)
    out.push_back(AnnotationViolation::OuterOpenWithoutOuter);
  return out;
}

GarmentAnnotation parse_annotation(const std::string& record) {
  GarmentAnnotation ann;
  std::istringstream is(record);
  std::string line;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto colon = t.find(':');
    if (colon == std::string::npos)
      throw ParseError("annotation record line without 'field: value' structure: " + t);
    const std::string key = lower(trim(t.substr(0, colon)));
    const std::string value = trim(t.substr(colon + 1));
    if (key.find("sleeve length") != std::string::npos)
      ann.sleeve_length = sleeve_length_from_string(value);
    else if (key.find("rolled") != std::string::npos)
      ann.sleeves_rolled_up = tristate_from_string(value);
    else if (key.find("tucked") != std::string::npos)
      ann.top_tucked_in = tristate_from_string(value);
    else if (key.find("outer top open") != std::string::npos ||
             key.find("open") != std::string::npos)
      ann.outer_top_open = tristate_from_string(value);
    else if (key.find("outer") != std::string::npos)
      ann.wearing_outer_top = tristate_from_string(value);
    else if (key.find("image path") != std::string::npos || key == "path")
      ann.image_path = value;
    else if (key.find("fit") != std::string::npos) {
      const std::string v = lower(value);
      ann.fit = v.empty() ? "unknown" : v;
    }
    // Unrecognized keys are allowed and skipped.
  }
  return ann;
}

namespace {
using nlohmann::json;

constexpr const char* kSleeveKey = "Sleeve Length";
constexpr const char* kRolledKey = "Sleeves Rolled Up";
constexpr const char* kTuckedKey = "Top Tucked In";
constexpr const char* kOuterKey = "Wearing Outer Top";
constexpr const char* kOuterOpenKey = "Outer Top Open";
constexpr const char* kFitKey = "Fit";
constexpr const char* kPathKey = "Image Path";

std::string field_or(const json& j, const char* key) {
  if (!j.contains(key)) return "unknown";
  const auto& v = j.at(key);
  return v.is_string() ? v.get<std::string>() : "unknown";
}
}  // namespace

std::string annotation_to_json(const GarmentAnnotation& ann) {
  json j;
  j[kSleeveKey] = to_string(ann.sleeve_length);
  j[kRolledKey] = to_string(ann.sleeves_rolled_up);
  j[kTuckedKey] = to_string(ann.top_tucked_in);
  j[kOuterKey] = to_string(ann.wearing_outer_top);
  j[kOuterOpenKey] = to_string(ann.outer_top_open);
  j[kFitKey] = ann.fit;
  j[kPathKey] = ann.image_path;
  return j.dump(2) + "\n";
}

GarmentAnnotation annotation_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("annotation JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("annotation JSON: expected an object");
  GarmentAnnotation ann;
  ann.sleeve_length = sleeve_length_from_string(field_or(j, kSleeveKey));
  ann.sleeves_rolled_up = tristate_from_string(field_or(j, kRolledKey));
  ann.top_tucked_in = tristate_from_string(field_or(j, kTuckedKey));
  ann.wearing_outer_top = tristate_from_string(field_or(j, kOuterKey));
  ann.outer_top_open = tristate_from_string(field_or(j, kOuterOpenKey));
  ann.fit = field_or(j, kFitKey);
  ann.image_path = j.contains(kPathKey) && j.at(kPathKey).is_string()
                       ? j.at(kPathKey).get<std::string>()
                       : "";
  return ann;
}

void save_annotation(const std::string& path, const GarmentAnnotation& ann) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << annotation_to_json(ann);
}

GarmentAnnotation load_annotation(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return annotation_from_json(ss.str());
}

}  // namespace vton::prep

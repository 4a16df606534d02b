#pragma once

#include <string>
#include <vector>

namespace vton::prep {

enum class SleeveLength { Short, Long, Sleeveless, Unknown };
enum class TriState { Yes, No, Unknown };

const char* to_string(SleeveLength v);
const char* to_string(TriState v);
SleeveLength sleeve_length_from_string(const std::string& s);
TriState tristate_from_string(const std::string& s);

/// Structured garment attribute record; every field admits "unknown".
struct GarmentAnnotation {
  SleeveLength sleeve_length = SleeveLength::Unknown;
  TriState sleeves_rolled_up = TriState::Unknown;
  TriState top_tucked_in = TriState::Unknown;
  TriState wearing_outer_top = TriState::Unknown;
  TriState outer_top_open = TriState::Unknown;
  std::string fit = "unknown";
  std::string image_path;

  bool operator==(const GarmentAnnotation&) const = default;
};

enum class AnnotationViolation {
  SleevelessRolled,       // sleeveless garments cannot have rolled-up sleeves
  OuterOpenWithoutOuter,  // an absent outer top cannot be open
};

const char* to_string(AnnotationViolation v);

/// Returns every consistency rule the record breaks; empty means consistent.
/// Unknown values never trigger a violation.
std::vector<AnnotationViolation> validate_annotation(const GarmentAnnotation& ann);

/// Parses a "Field: value" text record. Missing fields default to unknown;
/// option strings are matched case-insensitively and unrecognized options
/// map to unknown. A non-blank line without a colon is a malformed record.
GarmentAnnotation parse_annotation(const std::string& record);

/// JSON round trip keyed by the template field names
/// ("Sleeve Length", "Sleeves Rolled Up", ...).
std::string annotation_to_json(const GarmentAnnotation& ann);
GarmentAnnotation annotation_from_json(const std::string& json_text);
void save_annotation(const std::string& path, const GarmentAnnotation& ann);
GarmentAnnotation load_annotation(const std::string& path);

}  // namespace vton::prep

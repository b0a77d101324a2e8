#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "aind/families.hpp"
#include "aind/measure.hpp"

namespace aind {

/// Spaces with coordinates and more than this many points are written
/// without the dist matrix; readers rebuild distances from the coordinates.
inline constexpr std::size_t kJsonDistLimit = 4096;

struct JsonReadOptions {
    bool check_triangle = true;
};

/// A joint loaded from JSON together with the optional metadata keys
/// "family", "n" and "rectangle" ({"a": [labels], "b": [labels]}).
struct LoadedJoint {
    JointMeasure joint;
    std::string family;
    std::optional<unsigned> n;
    std::optional<RectangleCertificate> rectangle;
};

/// {"space1": {...}, "space2": {...}, "weights": [["p/q", ...], ...]}.
/// Weights may be "p/q" strings (exact) or numbers; any number switches the
/// whole matrix to float-normalization within 1e-9.
LoadedJoint read_joint_json(std::istream& is, const JsonReadOptions& opt = {});
void write_joint_json(std::ostream& os, const JointMeasure& j, const std::string& family = "",
                      std::optional<unsigned> n = std::nullopt,
                      const std::optional<RectangleCertificate>& rectangle = std::nullopt);

/// {"space1": {...}, "weights": ["p/q", ...]}.
DiscreteMeasure read_measure_json(std::istream& is, const JsonReadOptions& opt = {});
void write_measure_json(std::ostream& os, const DiscreteMeasure& m);

/// Family instance as a joint file, or {"family": "gaussian", "n", "gaussian": {...}}.
void write_family_json(std::ostream& os, const FamilyInstance& inst);

}  // namespace aind

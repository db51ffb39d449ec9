#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "hedmatch/instance.hpp"

namespace hedmatch {

// Parses the JSON instance document:
//   {"x": {"points": [[..]], "weights": [..]}, "y": {...},
//    "z": {"points": [[..]]}, "u": <cost>, "v": <cost>}
// with cost specs {"family": "scaled_quadratic", "sign": -1, "alpha": 1.0} or
// {"family": "table", "values": [[..]]}. Throws kParse on malformed input.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::filesystem::path& path);

std::string instance_to_json(const Instance& inst);
void save_instance(const std::filesystem::path& path, const Instance& inst);

// 17 significant digits, '.' separator, shortest exponent form from %g.
std::string format_double(double value);

}  // namespace hedmatch

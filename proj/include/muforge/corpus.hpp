#pragma once

#include <string>
#include <vector>

#include "muforge/curves.hpp"

namespace muforge {

// Reads the bundled curve list: one curve per line as "a1 a2 a3 a4 a6 conductor
// label", with blank lines and # comments skipped. Every model is validated.
std::vector<curve_data> load_corpus(const std::string& path);

// Parses the command-line curve syntax "a1,a2,a3,a4,a6:conductor".
curve_data curve_from_spec(const std::string& spec);

}  // namespace muforge

#pragma once

// Bundled example: the 6-qudit, l=3 single insertion/deletion code.

#include "qindel/code_conditions.hpp"

namespace qindel {

inline CodeSpec example_code_l3n6() {
  return CodeSpec::create(3, 6,
                          {{"001122", "112200", "220011"},
                           {"002211", "110022", "221100"},
                           {"001100", "112211", "220022"}});
}

inline const char* example_code_name() { return "example_l3n6"; }

}  // namespace qindel

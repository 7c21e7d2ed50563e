#pragma once

#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "coagtree/tree.hpp"

namespace coagtree {

inline constexpr const char* planar_csv_header = "grade,code,weight,symmetry";
inline constexpr const char* nonplanar_csv_header = "grade,code,weight,symmetry,generation";

/// Writes forests of grades 0..max_grade, one row per tree.
inline void write_planar_csv(std::ostream& os, int max_grade, int cap = default_grade_cap) {
  os << planar_csv_header << '\n';
  for (int g = 0; g <= max_grade; ++g) {
    for (const auto& tt : enumerate_planar(g, cap).trees) {
      os << g << ',' << tt.tree.word() << ',' << tt.weight << ',' << tt.symmetry << '\n';
    }
  }
}

/// Non-planar representatives with their root decomposition "left*right".
inline void write_nonplanar_csv(std::ostream& os, int max_grade, int cap = default_grade_cap) {
  os << nonplanar_csv_header << '\n';
  for (int g = 0; g <= max_grade; ++g) {
    for (const auto& tt : enumerate_nonplanar(g, cap).trees) {
      os << g << ',' << tt.tree.word() << ',' << tt.weight << ',' << tt.symmetry << ','
         << generation_rule(tt.tree) << '\n';
    }
  }
}

inline std::string planar_csv(int max_grade, int cap = default_grade_cap) {
  std::ostringstream os;
  write_planar_csv(os, max_grade, cap);
  return os.str();
}

inline std::string nonplanar_csv(int max_grade, int cap = default_grade_cap) {
  std::ostringstream os;
  write_nonplanar_csv(os, max_grade, cap);
  return os.str();
}

inline nlohmann::json to_json(const Forest& f, bool with_generation = false) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& tt : f.trees) {
    nlohmann::json row = {{"grade", f.grade},
                          {"code", tt.tree.word()},
                          {"weight", tt.weight.str()},
                          {"symmetry", tt.symmetry}};
    if (with_generation) row["generation"] = generation_rule(tt.tree);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace coagtree

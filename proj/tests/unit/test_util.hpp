#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace corealm::test {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string fixture(const std::string& rel) { return std::string(COREALM_TEST_DIR) + "/fixtures/" + rel; }

}  // namespace corealm::test

// Matrix file format and built-in fixtures.
#pragma once

#include <string>
#include <vector>

#include "pnm/matrix.hpp"

namespace pnm {

// Parses the line-oriented format; syntax problems carry line numbers.
MatrixSpec parse_matrix_spec(const std::string& text);
PNMatrix read_matrix_string(const std::string& text);
PNMatrix read_matrix(const std::string& path);
// Canonical text: signature sorted by name, rows in tuple order.
std::string write_matrix(const PNMatrix& m);
void write_matrix_file(const PNMatrix& m, const std::string& path);

std::string read_text_file(const std::string& path);

struct FixtureInfo {
  std::string name;
  std::string description;
  MatrixKind kind;       // expected classification
  bool known_saturated;  // saturation is established for this fixture
};

const std::vector<FixtureInfo>& fixtures();
const FixtureInfo* fixture_info(const std::string& name);
// Accepts "name" or "name:conn1,conn2" (reduct to the listed connectives).
PNMatrix builtin(const std::string& name);
// The fixture whose canonical text equals that of m, if any.
const FixtureInfo* identify_fixture(const PNMatrix& m);
// Fixture reference or matrix file path.
PNMatrix load_matrix(const std::string& ref);

}  // namespace pnm

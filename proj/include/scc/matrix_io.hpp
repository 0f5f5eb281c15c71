#pragma once

#include <iosfwd>
#include <string>

#include "scc/linalg.hpp"

namespace scc {

// SCCM1 container: magic line "SCCM1", dim as a decimal ASCII line, then the
// row-major lower triangle as little-endian IEEE-754 doubles. Round-trips are
// bit-exact.

void write_matrix(std::ostream& out, const SymMatrix& m);
void write_matrix(const std::string& path, const SymMatrix& m);

SymMatrix read_matrix(std::istream& in);
SymMatrix read_matrix(const std::string& path);

}  // namespace scc

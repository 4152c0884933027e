#pragma once

#include <string>

#include "mcflab/mesh.hpp"

namespace mcflab {

// ASCII OFF / OBJ, selected by file extension. Readers validate manifoldness
// and orientation; normals or texture data in OBJ input are ignored (vertex
// geometry is always recomputed downstream).
TriangleMesh read_mesh(const std::string& path);

// `precision` is the number of significant digits printed per coordinate;
// 17 round-trips doubles exactly.
void write_mesh(const TriangleMesh& mesh, const std::string& path,
                int precision = 17);

}  // namespace mcflab

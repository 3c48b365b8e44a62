#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "cheeger/surface_mesh.hpp"

namespace cheeger {

class MeshFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads an ASCII OFF triangle mesh. '#' starts a comment. Throws
/// MeshFormatError on a malformed header, negative counts, truncated data or
/// non-triangle faces.
[[nodiscard]] SurfaceMesh read_off(std::istream& in);
[[nodiscard]] SurfaceMesh load_mesh(const std::filesystem::path& path);

/// Writes positions with 17 significant digits so that a reload reproduces
/// them bit for bit. Meshes without an embedding cannot be written.
void write_off(std::ostream& out, const SurfaceMesh& mesh);
void save_mesh(const std::filesystem::path& path, const SurfaceMesh& mesh);

}  // namespace cheeger

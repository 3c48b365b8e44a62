#include "cheeger/off_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace cheeger {

namespace {

/// Whitespace tokenizer that skips '#' comments.
class Tokens {
 public:
  explicit Tokens(std::istream& in) : in_(in) {}

  bool next(std::string& token) {
    while (true) {
      if (line_.good()) {
        if (line_ >> token) return true;
      }
      std::string raw;
      if (!std::getline(in_, raw)) return false;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      line_.clear();
      line_.str(raw);
    }
  }

  template <typename T>
  T number(const char* what) {
    std::string token;
    if (!next(token)) throw MeshFormatError(std::string("OFF: unexpected end of file reading ") + what);
    T value{};
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) throw MeshFormatError("OFF: bad " + std::string(what) + " '" + token + "'");
    return value;
  }

 private:
  std::istream& in_;
  std::istringstream line_;
};

}  // namespace

SurfaceMesh read_off(std::istream& in) {
  Tokens tokens(in);
  std::string header;
  if (!tokens.next(header) || header != "OFF") throw MeshFormatError("OFF: missing 'OFF' header");
  const auto nv = tokens.number<long long>("vertex count");
  const auto nf = tokens.number<long long>("face count");
  const auto ne = tokens.number<long long>("edge count");
  if (nv < 0 || nf < 0 || ne < 0) throw MeshFormatError("OFF: negative element count");
  if (nv > 100'000'000 || nf > 200'000'000) throw MeshFormatError("OFF: element count too large");

  std::vector<Vec3> positions(static_cast<std::size_t>(nv));
  for (auto& p : positions) {
    p.x() = tokens.number<double>("coordinate");
    p.y() = tokens.number<double>("coordinate");
    p.z() = tokens.number<double>("coordinate");
  }
  std::vector<Face> faces(static_cast<std::size_t>(nf));
  for (auto& f : faces) {
    const auto arity = tokens.number<long long>("face size");
    if (arity != 3) throw MeshFormatError("OFF: only triangle faces are supported, got a " + std::to_string(arity) + "-gon");
    for (auto& v : f) {
      const auto id = tokens.number<long long>("vertex index");
      if (id < 0 || id >= nv) throw MeshFormatError("OFF: vertex index out of range");
      v = static_cast<Index>(id);
    }
  }
  try {
    return SurfaceMesh::from_positions(std::move(positions), std::move(faces));
  } catch (const std::invalid_argument& e) {
    throw MeshFormatError(std::string("OFF: ") + e.what());
  }
}

SurfaceMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshFormatError("OFF: cannot open " + path.string());
  return read_off(in);
}

void write_off(std::ostream& out, const SurfaceMesh& mesh) {
  if (!mesh.has_positions()) throw std::invalid_argument("OFF: mesh has no embedding to write");
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.face_count() << ' ' << mesh.edge_count() << '\n';
  char buf[128];
  for (const Vec3& p : mesh.positions()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  for (const Face& f : mesh.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void save_mesh(const std::filesystem::path& path, const SurfaceMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("OFF: cannot write " + path.string());
  write_off(out, mesh);
}

}  // namespace cheeger

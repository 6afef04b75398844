#include "vempb/mesh_io.hpp"

#include "vempb/error.hpp"

#include <fstream>
#include <sstream>

namespace vempb {

void write_vpm(std::ostream& out, const PolyMesh& mesh) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "vpm 1\n";
  buf << "vertices " << mesh.num_vertices() << '\n';
  for (const auto& v : mesh.vertices()) buf << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  buf << "faces " << mesh.num_faces() << '\n';
  for (const auto& f : mesh.faces()) {
    buf << f.vertices.size();
    for (int v : f.vertices) buf << ' ' << v;
    buf << '\n';
  }
  buf << "cells " << mesh.num_cells() << '\n';
  for (const auto& c : mesh.cells()) {
    buf << c.faces.size();
    for (const auto& cf : c.faces) buf << ' ' << cf.sign * (cf.face + 1);
    buf << '\n';
  }
  out << buf.str();
}

void save_mesh(const PolyMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_vpm(out, mesh);
  if (!out) throw Error("failed writing '" + path + "'");
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line as a token stream.
  std::istringstream next(const char* expecting) {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      if (text.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(text);
    }
    throw ParseError(line_ + 1, std::string("unexpected end of file, expected ") + expecting);
  }

  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

void expect_end(std::istringstream& tokens, int line, const char* record) {
  std::string extra;
  if (tokens >> extra) throw ParseError(line, std::string("trailing data in ") + record + " record");
}

long long read_count(LineReader& reader, const std::string& keyword) {
  auto tokens = reader.next(keyword.c_str());
  std::string word;
  long long count = -1;
  if (!(tokens >> word) || word != keyword || !(tokens >> count) || count < 0) {
    throw ParseError(reader.line(), "expected '" + keyword + " <count>'");
  }
  expect_end(tokens, reader.line(), keyword.c_str());
  return count;
}

}  // namespace

PolyMesh read_vpm(std::istream& in) {
  LineReader reader(in);
  {
    auto tokens = reader.next("header");
    std::string magic;
    int version = 0;
    if (!(tokens >> magic >> version) || magic != "vpm" || version != 1) {
      throw ParseError(reader.line(), "expected header 'vpm 1'");
    }
  }

  const long long nv = read_count(reader, "vertices");
  std::vector<Vec3> vertices(nv);
  for (long long i = 0; i < nv; ++i) {
    auto tokens = reader.next("vertex record");
    if (!(tokens >> vertices[i].x() >> vertices[i].y() >> vertices[i].z())) {
      throw ParseError(reader.line(), "vertex " + std::to_string(i) + ": expected three coordinates");
    }
    expect_end(tokens, reader.line(), "vertex");
  }

  const long long nf = read_count(reader, "faces");
  std::vector<std::vector<int>> faces(nf);
  for (long long f = 0; f < nf; ++f) {
    auto tokens = reader.next("face record");
    long long m = 0;
    if (!(tokens >> m) || m < 3) throw ParseError(reader.line(), "face " + std::to_string(f) + ": bad vertex count");
    faces[f].resize(m);
    for (auto& v : faces[f]) {
      long long id = 0;
      if (!(tokens >> id)) throw ParseError(reader.line(), "face " + std::to_string(f) + ": missing vertex index");
      if (id < 0 || id >= nv) {
        throw ParseError(reader.line(), "face " + std::to_string(f) + ": vertex index " + std::to_string(id) +
                                            " out of range");
      }
      v = static_cast<int>(id);
    }
    expect_end(tokens, reader.line(), "face");
  }

  const long long nc = read_count(reader, "cells");
  std::vector<std::vector<CellFace>> cells(nc);
  std::vector<int> cell_lines(nc);
  for (long long c = 0; c < nc; ++c) {
    auto tokens = reader.next("cell record");
    cell_lines[c] = reader.line();
    long long k = 0;
    if (!(tokens >> k) || k < 4) throw ParseError(reader.line(), "cell " + std::to_string(c) + ": bad face count");
    cells[c].resize(k);
    for (auto& cf : cells[c]) {
      long long s = 0;
      if (!(tokens >> s)) throw ParseError(reader.line(), "cell " + std::to_string(c) + ": missing face index");
      const long long id = (s < 0 ? -s : s) - 1;
      if (s == 0 || id >= nf) {
        throw ParseError(reader.line(), "cell " + std::to_string(c) + ": face index " + std::to_string(s) +
                                            " out of range");
      }
      cf = {static_cast<int>(id), s > 0 ? 1 : -1};
    }
    expect_end(tokens, reader.line(), "cell");
  }

  try {
    return PolyMesh(std::move(vertices), std::move(faces), std::move(cells));
  } catch (const MeshError& e) {
    const int line = e.cell() >= 0 ? cell_lines[e.cell()] : reader.line();
    throw ParseError(line, e.what());
  }
}

PolyMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file '" + path + "'");
  return read_vpm(in);
}

}  // namespace vempb

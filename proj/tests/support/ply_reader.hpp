// Minimal PLY reader, test-only: just enough to round-trip the writer's
// vertex layout (x y z float32, red green blue uchar).
#ifndef PATCHWORK_TESTS_PLY_READER_HPP_
#define PATCHWORK_TESTS_PLY_READER_HPP_

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace test_support {

struct PlyVertex {
  float x, y, z;
  std::uint8_t r, g, b;
};

inline std::vector<PlyVertex> read_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  bool binary = false;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "end_header") break;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "format") {
      std::string fmt;
      ss >> fmt;
      binary = fmt == "binary_little_endian";
    } else if (word == "element") {
      std::string name;
      ss >> name >> count;
      if (name != "vertex") throw std::runtime_error("unexpected element " + name);
    }
  }

  std::vector<PlyVertex> vertices(count);
  if (binary) {
    for (auto& v : vertices) {
      float xyz[3];
      unsigned char rgb[3];
      in.read(reinterpret_cast<char*>(xyz), sizeof(xyz));
      in.read(reinterpret_cast<char*>(rgb), sizeof(rgb));
      if (!in) throw std::runtime_error("short binary ply read");
      v = PlyVertex{xyz[0], xyz[1], xyz[2], rgb[0], rgb[1], rgb[2]};
    }
  } else {
    for (auto& v : vertices) {
      unsigned r, g, b;
      if (!(in >> v.x >> v.y >> v.z >> r >> g >> b)) throw std::runtime_error("short ascii ply read");
      v.r = static_cast<std::uint8_t>(r);
      v.g = static_cast<std::uint8_t>(g);
      v.b = static_cast<std::uint8_t>(b);
    }
  }
  return vertices;
}

}  // namespace test_support

#endif  // PATCHWORK_TESTS_PLY_READER_HPP_

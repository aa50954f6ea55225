#include "fracdiff/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fracdiff {

void emit_field_snapshot(const TensorField& field, const Grid& grid,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open snapshot file: " + path);
  const char* headers[] = {"x,u\n", "x,y,u\n", "x,y,z,u\n"};
  out << headers[grid.dim - 1];
  const auto shape = field.shape();
  std::array<int, 3> idx{0, 0, 0};
  char buf[32];
  for (std::size_t flat = 0; flat < field.size(); ++flat) {
    for (int k = 0; k < grid.dim; ++k) {
      std::snprintf(buf, sizeof(buf), "%.9g", grid.node(k, idx[k] + 1));
      out << buf << ',';
    }
    std::snprintf(buf, sizeof(buf), "%.9g", field[flat]);
    out << buf << '\n';
    for (int k = grid.dim - 1; k >= 0; --k) {
      if (++idx[k] < shape[k]) break;
      idx[k] = 0;
    }
  }
  if (!out) throw std::runtime_error("failed writing snapshot file: " + path);
}

}  // namespace fracdiff

#include "sublink/matrix.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "sublink/error.hpp"

namespace sublink {

static_assert(std::endian::native == std::endian::little,
              "matrix files are read and written in native little-endian order");

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorKind::shape, "matrix value count " + std::to_string(values_.size()) +
                                      " does not match " + std::to_string(rows_) + "x" +
                                      std::to_string(cols_));
  }
}

bool Matrix::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'P', 'L', 'M'};
constexpr std::size_t kHeaderBytes = 16;

MatrixShape read_header(std::ifstream& in, const std::filesystem::path& path) {
  std::array<char, kHeaderBytes> header{};
  if (!in.read(header.data(), header.size())) {
    throw Error(ErrorKind::parse, path.string() + ": truncated matrix header");
  }
  if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorKind::parse, path.string() + ": bad matrix magic");
  }
  std::uint32_t version = 0, rows = 0, cols = 0;
  std::memcpy(&version, header.data() + 4, 4);
  std::memcpy(&rows, header.data() + 8, 4);
  std::memcpy(&cols, header.data() + 12, 4);
  if (version != kMatrixFileVersion) {
    throw Error(ErrorKind::parse, path.string() + ": unsupported matrix version " +
                                      std::to_string(version));
  }
  return {rows, cols};
}

std::ifstream open_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open matrix file " + path.string());
  return in;
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write matrix file " + path.string());
  std::array<char, kHeaderBytes> header{};
  const std::uint32_t version = kMatrixFileVersion;
  const auto rows = static_cast<std::uint32_t>(m.rows());
  const auto cols = static_cast<std::uint32_t>(m.cols());
  std::memcpy(header.data(), kMagic.data(), 4);
  std::memcpy(header.data() + 4, &version, 4);
  std::memcpy(header.data() + 8, &rows, 4);
  std::memcpy(header.data() + 12, &cols, 4);
  out.write(header.data(), header.size());
  std::vector<float> buffer(m.values().begin(), m.values().end());
  out.write(reinterpret_cast<const char*>(buffer.data()),
            static_cast<std::streamsize>(buffer.size() * sizeof(float)));
  if (!out) throw Error(ErrorKind::io, "short write to " + path.string());
}

MatrixShape read_matrix_shape(const std::filesystem::path& path) {
  auto in = open_matrix(path);
  return read_header(in, path);
}

Matrix read_matrix(const std::filesystem::path& path) {
  auto in = open_matrix(path);
  const auto shape = read_header(in, path);
  return read_matrix_rows(path, 0, shape.rows);
}

Matrix read_matrix_rows(const std::filesystem::path& path, std::size_t row_begin,
                        std::size_t row_end) {
  auto in = open_matrix(path);
  const auto shape = read_header(in, path);
  if (row_begin > row_end || row_end > shape.rows) {
    throw Error(ErrorKind::shape, path.string() + ": row range [" + std::to_string(row_begin) +
                                      "," + std::to_string(row_end) + ") exceeds " +
                                      std::to_string(shape.rows) + " rows");
  }
  const std::size_t count = (row_end - row_begin) * shape.cols;
  // The floats land in the upper half of the double buffer and are widened
  // front to back; each read happens before its bytes can be overwritten.
  std::vector<double> values(count);
  char* bytes = reinterpret_cast<char*>(values.data());
  char* floats = bytes + count * sizeof(float);
  in.seekg(static_cast<std::streamoff>(kHeaderBytes + row_begin * shape.cols * sizeof(float)));
  if (!in.read(floats, static_cast<std::streamsize>(count * sizeof(float)))) {
    throw Error(ErrorKind::parse, path.string() + ": truncated matrix body");
  }
  for (std::size_t i = 0; i < count; ++i) {
    float f;
    std::memcpy(&f, floats + i * sizeof(float), sizeof f);
    const double d = f;
    std::memcpy(bytes + i * sizeof(double), &d, sizeof d);
  }
  return Matrix(row_end - row_begin, shape.cols, std::move(values));
}

}  // namespace sublink

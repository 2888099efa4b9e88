#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sublink {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool all_finite() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Encoder output H: one row per subword, `cols` = hidden dimension.
class FeatureMatrix : public Matrix {
 public:
  using Matrix::Matrix;
  explicit FeatureMatrix(Matrix m) : Matrix(std::move(m)) {}
  std::size_t dim() const { return cols(); }
};

// Head transformation W: rows = hidden dimension, cols = vocabulary size.
class HeadWeights : public Matrix {
 public:
  using Matrix::Matrix;
  explicit HeadWeights(Matrix m) : Matrix(std::move(m)) {}
  std::size_t dim() const { return rows(); }
  std::size_t vocab_size() const { return cols(); }
};

// Unnormalized per-subword scores: rows = subwords, cols = vocabulary size.
class LogitMatrix : public Matrix {
 public:
  using Matrix::Matrix;
  explicit LogitMatrix(Matrix m) : Matrix(std::move(m)) {}
  std::size_t vocab_size() const { return cols(); }
};

// Matrix file: 16-byte header {"SPLM", version u32, rows u32, cols u32},
// then rows*cols little-endian float32 values, row-major.
inline constexpr std::uint32_t kMatrixFileVersion = 1;

void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);

// Reads rows [row_begin, row_end) without loading the rest of the file.
Matrix read_matrix_rows(const std::filesystem::path& path, std::size_t row_begin,
                        std::size_t row_end);

struct MatrixShape {
  std::size_t rows = 0;
  std::size_t cols = 0;
};
MatrixShape read_matrix_shape(const std::filesystem::path& path);

}  // namespace sublink

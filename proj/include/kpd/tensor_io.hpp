#pragma once

#include <string>
#include <vector>

#include "kpd/hypermatrix.hpp"

// Tensor files: a JSON document {"dims":[...],"convention":"...","data":[...]}
// with round-trip-exact doubles, or CSV for order-2 data.  "alphabetic" is
// the lexicographic multi-index order used everywhere; "col-major-matrix" is
// permitted only for order-2 files.

namespace kpd {

struct ParseError : std::runtime_error {
  std::string field;
  ParseError(std::string field_name, const std::string& what)
      : std::runtime_error(what), field(std::move(field_name)) {}
};

struct TensorFile {
  std::vector<index_t> dims;
  std::string convention = "alphabetic";
  std::vector<double> data;
};

// Reads JSON (or CSV when the path ends in .csv).  Throws ParseError naming
// the offending field.
TensorFile read_tensor_file(const std::string& path);
void write_tensor_file(const std::string& path, const TensorFile& tf);

// Conversions; col-major-matrix input is rearranged into alphabetic order.
Hypermatrix to_hypermatrix(const TensorFile& tf);
DenseMatrix to_dense_matrix(const TensorFile& tf);  // order-2 only
TensorFile make_tensor_file(const Hypermatrix& h);

// FNV-1a 64-bit digest of a file's raw bytes, as fixed-width hex.
std::string file_digest(const std::string& path);

}  // namespace kpd

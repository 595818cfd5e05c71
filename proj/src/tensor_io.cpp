#include "kpd/tensor_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kpd {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

TensorFile read_csv(std::istream& in) {
  TensorFile tf;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument("trailing junk");
        row.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("data", "csv: cell is not a number: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("data", "csv: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("data", "csv: empty file");
  tf.dims = {static_cast<index_t>(rows.size()),
             static_cast<index_t>(rows.front().size())};
  for (const auto& r : rows) tf.data.insert(tf.data.end(), r.begin(), r.end());
  tf.convention = "alphabetic";
  return tf;
}

void validate(const TensorFile& tf) {
  index_t total = 1;
  for (index_t d : tf.dims) {
    if (d < 1) throw ParseError("dims", "dims entries must be positive");
    total = checked_mul(total, d);
  }
  if (static_cast<index_t>(tf.data.size()) != total) {
    throw ParseError("data", "data length does not equal the product of dims");
  }
  for (double v : tf.data) {
    if (!std::isfinite(v)) throw ParseError("data", "data must be finite");
  }
  if (tf.convention != "alphabetic" && tf.convention != "col-major-matrix") {
    throw ParseError("convention",
                     "convention must be 'alphabetic' or 'col-major-matrix'");
  }
  if (tf.convention == "col-major-matrix" && tf.dims.size() != 2) {
    throw ParseError("convention",
                     "col-major-matrix is permitted only for order-2 dims");
  }
}

}  // namespace

TensorFile read_tensor_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("file", "cannot open '" + path + "'");
  TensorFile tf;
  if (ends_with(path, ".csv")) {
    tf = read_csv(in);
  } else {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("file", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("file", "top level must be an object");
    if (!j.contains("dims") || !j["dims"].is_array()) {
      throw ParseError("dims", "missing or non-array 'dims'");
    }
    for (const auto& d : j["dims"]) {
      if (!d.is_number_integer()) throw ParseError("dims", "dims must be integers");
      tf.dims.push_back(d.get<index_t>());
    }
    if (j.contains("convention")) {
      if (!j["convention"].is_string()) {
        throw ParseError("convention", "'convention' must be a string");
      }
      tf.convention = j["convention"].get<std::string>();
    }
    if (!j.contains("data") || !j["data"].is_array()) {
      throw ParseError("data", "missing or non-array 'data'");
    }
    for (const auto& v : j["data"]) {
      if (!v.is_number()) throw ParseError("data", "data must be numbers");
      tf.data.push_back(v.get<double>());
    }
  }
  validate(tf);
  return tf;
}

void write_tensor_file(const std::string& path, const TensorFile& tf) {
  validate(tf);
  nlohmann::json j;
  j["dims"] = tf.dims;
  j["convention"] = tf.convention;
  j["data"] = tf.data;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("file", "cannot write '" + path + "'");
  out << j.dump() << '\n';
}

Hypermatrix to_hypermatrix(const TensorFile& tf) {
  const DimProfile profile(tf.dims);
  if (tf.convention == "col-major-matrix") {
    // Column-major order-2 data is the alphabetic order of the transpose.
    const DimProfile t({tf.dims[1], tf.dims[0]});
    return sigma_transpose(Hypermatrix(t, tf.data), {2, 1});
  }
  return Hypermatrix(profile, tf.data);
}

DenseMatrix to_dense_matrix(const TensorFile& tf) {
  if (tf.dims.size() != 2) {
    throw ParseError("dims", "an order-2 tensor is required here");
  }
  const Hypermatrix h = to_hypermatrix(tf);
  return matrix_expression(h, prefix_split(2, 1));
}

TensorFile make_tensor_file(const Hypermatrix& h) {
  TensorFile tf;
  tf.dims = h.profile().dims();
  tf.convention = "alphabetic";
  tf.data = h.data();
  return tf;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("file", "cannot open '" + path + "'");
  std::uint64_t hash = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace kpd

// kpd: Kronecker product decomposition of vectors, matrices and hypermatrices.
//
//   kpd decompose <file> --shape <spec> --mode exact|approx|finite-sum
//   kpd product <fileA> <fileB> --kind outer|partition|paired --out FILE
//   kpd info <file> [--shape SPEC]
//
// Shape spec grammar: vector "3x4x2"; matrix "2x2,2x3" meaning (m x n, p x q);
// paired "2x2x2|2x3x2" meaning (m-profile | n-profile).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kpd/hyper_kpd.hpp"
#include "kpd/matrix_kpd.hpp"
#include "kpd/tensor_io.hpp"
#include "kpd/vector_kpd.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotDecomposable = 2;

struct ShapeSpec {
  enum class Kind { Vector, Matrix, Paired } kind = Kind::Vector;
  kpd::DimProfile vector_profile;
  kpd::MatrixShape matrix_shape;
  kpd::PairedShape paired_shape;
};

std::vector<kpd::index_t> parse_dims(const std::string& text) {
  std::vector<kpd::index_t> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    if (part.empty()) throw std::invalid_argument("empty dimension in '" + text + "'");
    std::size_t used = 0;
    const long long v = std::stoll(part, &used);
    if (used != part.size() || v < 1) {
      throw std::invalid_argument("bad dimension '" + part + "'");
    }
    dims.push_back(v);
  }
  if (dims.empty()) throw std::invalid_argument("empty shape spec");
  return dims;
}

ShapeSpec parse_shape(const std::string& text) {
  ShapeSpec spec;
  if (text.find('|') != std::string::npos) {
    const auto bar = text.find('|');
    spec.kind = ShapeSpec::Kind::Paired;
    spec.paired_shape.factor_a = kpd::DimProfile(parse_dims(text.substr(0, bar)));
    spec.paired_shape.factor_b = kpd::DimProfile(parse_dims(text.substr(bar + 1)));
    if (spec.paired_shape.factor_a.order() != spec.paired_shape.factor_b.order()) {
      throw std::invalid_argument("paired shape: factor orders must match");
    }
  } else if (text.find(',') != std::string::npos) {
    const auto comma = text.find(',');
    const auto b = parse_dims(text.substr(0, comma));
    const auto c = parse_dims(text.substr(comma + 1));
    if (b.size() != 2 || c.size() != 2) {
      throw std::invalid_argument("matrix shape: expected MxN,PxQ");
    }
    spec.kind = ShapeSpec::Kind::Matrix;
    spec.matrix_shape = kpd::MatrixShape{b[0], b[1], c[0], c[1]};
  } else {
    spec.kind = ShapeSpec::Kind::Vector;
    spec.vector_profile = kpd::DimProfile(parse_dims(text));
  }
  return spec;
}

kpd::IndexSplit parse_split(const std::string& text, std::size_t order) {
  // "1,2|3" -> rows {1,2}, cols {3}; "|1,2" -> all columns.
  const auto bar = text.find('|');
  if (bar == std::string::npos) {
    throw std::invalid_argument("split spec needs a '|' between rows and columns");
  }
  auto parse_axes = [](const std::string& s) {
    std::vector<std::size_t> axes;
    if (s.empty()) return axes;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
      std::size_t used = 0;
      const long long v = std::stoll(part, &used);
      if (used != part.size() || v < 1) {
        throw std::invalid_argument("bad axis '" + part + "'");
      }
      axes.push_back(static_cast<std::size_t>(v));
    }
    return axes;
  };
  kpd::IndexSplit split;
  split.row_axes = parse_axes(text.substr(0, bar));
  split.col_axes = parse_axes(text.substr(bar + 1));
  kpd::validate_split(split, order);
  return split;
}

json factor_json(const std::vector<kpd::index_t>& dims,
                 const std::vector<double>& data) {
  return json{{"dims", dims}, {"data", data}};
}

json factor_json(const kpd::Hypermatrix& h) {
  return factor_json(h.profile().dims(), h.data());
}

json factor_json(const kpd::DenseMatrix& m) {
  return factor_json({m.rows(), m.cols()}, m.data());
}

void emit_report(const json& report, bool as_json, const std::string& out_path) {
  std::ostringstream text;
  if (as_json) {
    text << report.dump(2) << '\n';
  } else {
    text << "mode: " << report["mode"].get<std::string>() << '\n';
    text << "input: " << report["input"]["path"].get<std::string>()
         << " (digest " << report["input"]["digest"].get<std::string>() << ")\n";
    text << "shape: " << report["shape"].get<std::string>() << '\n';
    if (report.contains("decomposable")) {
      text << "decomposable: " << (report["decomposable"].get<bool>() ? "yes" : "no")
           << '\n';
    }
    if (report.contains("terms")) {
      text << "terms: " << report["terms"].size() << '\n';
      for (std::size_t i = 0; i < report["terms"].size(); ++i) {
        text << "  term " << (i + 1) << ": coefficient "
             << report["terms"][i]["coefficient"].get<double>() << '\n';
      }
    } else if (report.contains("coefficient")) {
      text << "coefficient: " << report["coefficient"].get<double>() << '\n';
      for (std::size_t i = 0; i < report["factors"].size(); ++i) {
        text << "  factor " << (i + 1) << " dims [";
        const auto& dims = report["factors"][i]["dims"];
        for (std::size_t k = 0; k < dims.size(); ++k) {
          text << (k ? "x" : "") << dims[k].get<long long>();
        }
        text << "]:";
        for (const auto& v : report["factors"][i]["data"]) {
          text << ' ' << v.get<double>();
        }
        text << '\n';
      }
    }
    text << "residual_norm: " << report["residual_norm"].get<double>() << '\n';
    if (report.contains("squared_error")) {
      text << "squared_error: " << report["squared_error"].get<double>() << '\n';
    }
    if (report.contains("iterations")) {
      text << "iterations: " << report["iterations"].get<long>() << '\n';
    }
    text << "wall_ms: " << report["wall_ms"].get<double>() << '\n';
  }
  if (out_path.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw kpd::ParseError("file", "cannot write '" + out_path + "'");
    out << text.str();
  }
}

int run_decompose(const std::string& path, const std::string& shape_text,
                  const std::string& mode, const kpd::SolverConfig& cfg,
                  bool as_json, const std::string& out_path) {
  const ShapeSpec shape = parse_shape(shape_text);
  const kpd::TensorFile tf = kpd::read_tensor_file(path);
  const kpd::Hypermatrix input = kpd::to_hypermatrix(tf);

  json report;
  report["mode"] = mode;
  report["shape"] = shape_text;
  report["input"] = {{"path", path},
                     {"digest", kpd::file_digest(path)},
                     {"dims", tf.dims}};

  const auto t0 = std::chrono::steady_clock::now();
  bool not_decomposable = false;

  if (shape.kind == ShapeSpec::Kind::Vector) {
    if (shape.vector_profile.total() != input.total()) {
      throw kpd::ParseError("shape", "shape total does not match data length");
    }
    const std::vector<double> x = input.data();
    if (mode == "exact") {
      const kpd::ExactKpdResult r = kpd::exact_kpd(x, shape.vector_profile, cfg);
      report["decomposable"] = r.decomposable;
      report["coefficient"] = r.factorization.coefficient;
      report["factors"] = json::array();
      for (std::size_t i = 0; i < r.factorization.components.size(); ++i) {
        report["factors"].push_back(
            factor_json({shape.vector_profile.dims()[i]},
                        r.factorization.components[i]));
      }
      report["residual_norm"] = r.factorization.residual_norm;
      report["squared_error"] = r.squared_error;
      not_decomposable = !r.decomposable;
    } else if (mode == "approx") {
      const kpd::ApproxKpdResult r = kpd::approx_kpd(x, shape.vector_profile, cfg);
      report["coefficient"] = r.factorization.coefficient;
      report["factors"] = json::array();
      for (std::size_t i = 0; i < r.factorization.components.size(); ++i) {
        report["factors"].push_back(
            factor_json({shape.vector_profile.dims()[i]},
                        r.factorization.components[i]));
      }
      report["residual_norm"] = r.factorization.residual_norm;
      report["squared_error"] = r.squared_error;
      report["initial_squared_error"] = r.initial_squared_error;
      report["iterations"] = r.iterations;
    } else {
      const kpd::SumKpd r = kpd::finite_sum_kpd(x, shape.vector_profile, cfg);
      report["terms"] = json::array();
      for (const auto& term : r.terms) {
        json jt;
        jt["coefficient"] = term.coefficient;
        jt["head_index"] = term.head_index;
        jt["residual_norm"] = term.residual_norm;
        jt["factors"] = json::array();
        for (std::size_t i = 0; i < term.components.size(); ++i) {
          jt["factors"].push_back(
              factor_json({shape.vector_profile.dims()[i]}, term.components[i]));
        }
        report["terms"].push_back(std::move(jt));
      }
      report["residual_norm"] = r.residual_norm;
    }
  } else if (shape.kind == ShapeSpec::Kind::Matrix) {
    const kpd::MatrixShape& ms = shape.matrix_shape;
    if (tf.dims.size() != 2) {
      throw kpd::ParseError("dims", "matrix decomposition needs an order-2 input");
    }
    const kpd::DenseMatrix n = kpd::to_dense_matrix(tf);
    if (n.rows() != ms.m * ms.p || n.cols() != ms.n * ms.q) {
      throw kpd::ParseError("shape", "factor shape does not divide the matrix shape");
    }
    if (mode == "exact" || mode == "approx") {
      const kpd::MatrixKpdResult r = mode == "exact"
                                         ? kpd::matrix_exact_kpd(n, ms, cfg)
                                         : kpd::matrix_approx_kpd(n, ms, cfg);
      if (mode == "exact") {
        report["decomposable"] = r.decomposable;
        not_decomposable = !r.decomposable;
      }
      report["coefficient"] = r.coefficient;
      report["factors"] = json::array({factor_json(r.b_monic), factor_json(r.c_monic)});
      report["residual_norm"] = r.residual_frobenius;
      report["squared_error"] = r.squared_error;
      if (mode == "approx") {
        report["initial_squared_error"] = r.initial_squared_error;
        report["iterations"] = r.iterations;
      }
    } else {
      const kpd::MatrixSumKpd r = kpd::matrix_sum_kpd(n, ms, cfg);
      report["terms"] = json::array();
      for (const auto& term : r.terms) {
        report["terms"].push_back(
            json{{"coefficient", term.coefficient},
                 {"factors", json::array({factor_json(term.b), factor_json(term.c)})}});
      }
      report["residual_norm"] = r.residual_frobenius;
    }
  } else {
    const kpd::PairedShape& ps = shape.paired_shape;
    if (input.profile() != ps.target()) {
      throw kpd::ParseError("shape", "paired shape products do not match input dims");
    }
    if (mode == "exact" || mode == "approx") {
      const kpd::HyperKpdResult r = mode == "exact"
                                        ? kpd::paired_kpd(input, ps, cfg)
                                        : kpd::paired_approx_kpd(input, ps, cfg);
      if (mode == "exact") {
        report["decomposable"] = r.decomposable;
        not_decomposable = !r.decomposable;
      }
      report["coefficient"] = r.coefficient;
      report["factors"] =
          json::array({factor_json(r.a_monic), factor_json(r.b_monic)});
      report["residual_norm"] = r.residual_norm;
      report["squared_error"] = r.squared_error;
      if (mode == "approx") {
        report["initial_squared_error"] = r.initial_squared_error;
        report["iterations"] = r.iterations;
      }
    } else {
      const kpd::HyperSumKpd r = kpd::paired_sum_kpd(input, ps, cfg);
      report["terms"] = json::array();
      for (const auto& term : r.terms) {
        report["terms"].push_back(
            json{{"coefficient", term.coefficient},
                 {"factors", json::array({factor_json(term.a), factor_json(term.b)})}});
      }
      report["residual_norm"] = r.residual_norm;
    }
  }

  const auto t1 = std::chrono::steady_clock::now();
  report["wall_ms"] =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  emit_report(report, as_json, out_path);
  return not_decomposable ? kExitNotDecomposable : kExitOk;
}

int run_product(const std::string& path_a, const std::string& path_b,
                const std::string& kind, const std::string& split_text,
                const std::string& out_path) {
  const kpd::Hypermatrix a = kpd::to_hypermatrix(kpd::read_tensor_file(path_a));
  const kpd::Hypermatrix b = kpd::to_hypermatrix(kpd::read_tensor_file(path_b));

  kpd::Hypermatrix product;
  if (kind == "outer") {
    product = kpd::outer_product(a, b);
  } else if (kind == "paired") {
    product = kpd::paired_product(a, b);
  } else if (kind == "partition") {
    kpd::IndexSplit sa, sb;
    if (split_text.empty()) {
      sa = kpd::prefix_split(a.order(), kpd::normal_form_row_count(a.order()));
      sb = kpd::prefix_split(b.order(), kpd::normal_form_row_count(b.order()));
    } else {
      const auto semi = split_text.find(';');
      if (semi == std::string::npos) {
        throw std::invalid_argument("partition split: expected 'ROWS|COLS;ROWS|COLS'");
      }
      sa = parse_split(split_text.substr(0, semi), a.order());
      sb = parse_split(split_text.substr(semi + 1), b.order());
    }
    product = kpd::partition_product(a, sa, b, sb);
  } else {
    throw std::invalid_argument("unknown product kind '" + kind + "'");
  }
  kpd::write_tensor_file(out_path, kpd::make_tensor_file(product));
  return kExitOk;
}

int run_info(const std::string& path, const std::string& shape_text) {
  const kpd::TensorFile tf = kpd::read_tensor_file(path);
  const kpd::Hypermatrix input = kpd::to_hypermatrix(tf);

  std::cout << "dims: [";
  for (std::size_t k = 0; k < tf.dims.size(); ++k) {
    std::cout << (k ? ", " : "") << tf.dims[k];
  }
  std::cout << "]\n";

  bool zero = true;
  for (double v : input.data()) {
    if (v != 0.0) { zero = false; break; }
  }
  if (zero) {
    std::cout << "zero tensor\n";
    return kExitOk;
  }

  const kpd::HeadInfo flat = kpd::head_info(input.data(), kpd::DimProfile({input.total()}));
  std::cout << "head index: " << flat.e << '\n';
  std::cout << "head value: " << flat.h0 << '\n';

  if (!shape_text.empty()) {
    const ShapeSpec shape = parse_shape(shape_text);
    if (shape.kind != ShapeSpec::Kind::Vector) {
      throw std::invalid_argument("info --shape expects a vector spec like 3x4x2");
    }
    if (shape.vector_profile.total() != input.total()) {
      throw kpd::ParseError("shape", "shape total does not match data length");
    }
    const kpd::HeadInfo head = kpd::head_info(input.data(), shape.vector_profile);
    std::cout << "component heads:";
    for (kpd::index_t e : head.component_heads) std::cout << ' ' << e;
    std::cout << '\n';
  }

  std::cout << "axis divisors:\n";
  for (std::size_t k = 0; k < tf.dims.size(); ++k) {
    std::cout << "  axis " << (k + 1) << " (" << tf.dims[k] << "):";
    for (kpd::index_t d = 1; d <= tf.dims[k]; ++d) {
      if (tf.dims[k] % d == 0) {
        std::cout << ' ' << d << 'x' << tf.dims[k] / d;
      }
    }
    std::cout << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kronecker product decomposition toolkit"};
  app.require_subcommand(1);

  kpd::SolverConfig cfg;
  if (const char* env_tol = std::getenv("KPD_DEFAULT_TOL")) {
    try {
      cfg.exact_tol = std::stod(env_tol);
    } catch (const std::exception&) {
      std::cerr << "error: KPD_DEFAULT_TOL is not a number\n";
      return kExitError;
    }
  }

  // decompose
  std::string dec_file, dec_shape, dec_mode = "exact", dec_out;
  bool dec_json = false;
  long threads = 1;
  auto* dec = app.add_subcommand("decompose", "decompose a tensor file");
  dec->add_option("file", dec_file, "input tensor file")->required();
  dec->add_option("--shape", dec_shape, "factor shape spec")->required();
  dec->add_option("--mode", dec_mode, "exact|approx|finite-sum")
      ->check(CLI::IsMember({"exact", "approx", "finite-sum"}));
  dec->add_option("--step", cfg.step, "gradient descent step length");
  dec->add_option("--max-iters", cfg.max_iters, "descent iteration cap");
  dec->add_option("--tol", cfg.exact_tol, "exactness tolerance");
  dec->add_option("--epsilon", cfg.sum_epsilon, "finite-sum residual bound");
  dec->add_option("--zero-tol", cfg.zero_tol, "numeric zero threshold");
  dec->add_option("--grad-tol", cfg.grad_tol, "gradient norm stop");
  dec->add_option("--max-terms", cfg.max_terms, "finite-sum term cap");
  dec->add_option("--threads", threads, "solver threads (deterministic default 1)")
      ->check(CLI::PositiveNumber);
  dec->add_flag("--json", dec_json, "structured JSON report");
  dec->add_option("--out", dec_out, "write the report to a file");

  // product
  std::string prod_a, prod_b, prod_kind, prod_split, prod_out;
  auto* prod = app.add_subcommand("product", "Kronecker product of two tensor files");
  prod->add_option("fileA", prod_a, "left tensor file")->required();
  prod->add_option("fileB", prod_b, "right tensor file")->required();
  prod->add_option("--kind", prod_kind, "outer|partition|paired")
      ->required()
      ->check(CLI::IsMember({"outer", "partition", "paired"}));
  prod->add_option("--split", prod_split, "partition splits 'ROWS|COLS;ROWS|COLS'");
  prod->add_option("--out", prod_out, "output tensor file")->required();

  // info
  std::string info_file, info_shape;
  auto* info = app.add_subcommand("info", "head and divisor summary of a tensor file");
  info->add_option("file", info_file, "input tensor file")->required();
  info->add_option("--shape", info_shape, "candidate vector shape");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dec->parsed()) {
      return run_decompose(dec_file, dec_shape, dec_mode, cfg, dec_json, dec_out);
    }
    if (prod->parsed()) {
      return run_product(prod_a, prod_b, prod_kind, prod_split, prod_out);
    }
    if (info->parsed()) {
      return run_info(info_file, info_shape);
    }
  } catch (const kpd::ParseError& e) {
    std::cerr << "error in field '" << e.field << "': " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

// framecert: JSON-in, JSON-out certificates for frames, atomic systems for
// operators, and kernel sampling audits. One invocation processes one
// problem document; reports are canonical (sorted keys, 17 significant
// digits) so identical inputs produce byte-identical bytes.
//
// Exit codes: 0 certificate passes, 1 certificate computed but fails,
// 2 input/schema error, 3 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "framecert/framecert.hpp"

namespace {

using framecert::io::json;

struct CommonOptions {
  std::string input;
  std::string output = "-";
  std::optional<int> samples;
  std::optional<int> degree;
  std::optional<std::string> norm_mode;
};

std::string read_all(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw framecert::SchemaError("cannot open input file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_all(const std::string& path, const std::string& bytes) {
  if (path == "-") {
    std::cout << bytes;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw framecert::SchemaError("cannot open output file '" + path + "'");
  out << bytes;
}

int default_degree(const framecert::KernelSpec& spec) {
  return std::holds_alternative<framecert::FockKernel>(spec) ? 32 : 64;
}

framecert::Matrix parse_operator_or_identity(const json& doc, framecert::Index dim) {
  if (doc.contains("operator")) {
    const framecert::Matrix op = framecert::io::parse_operator(doc["operator"], "operator");
    if (op.rows() != dim)
      throw framecert::SchemaError("operator dimension does not match the problem dimension");
    return op;
  }
  return framecert::Matrix::Identity(dim, dim);
}

struct CommandResult {
  json result;
  bool passes = true;
};

CommandResult run_frame_bounds(const json& doc, const CommonOptions&) {
  const auto family = framecert::io::parse_family(doc.at("family"), "family");
  const auto tol = framecert::io::parse_tolerances(doc);
  const auto cert = framecert::frame_bounds(family, tol);
  return {json{{"certificate", framecert::io::to_json(cert)}}, cert.is_frame};
}

CommandResult run_dual(const json& doc, const CommonOptions&) {
  const auto family = framecert::io::parse_family(doc.at("family"), "family");
  const auto tol = framecert::io::parse_tolerances(doc);
  const auto cert = framecert::frame_bounds(family, tol);
  const auto dual = framecert::canonical_dual(family, tol);

  // The dual's frame operator must invert the original one.
  const framecert::Matrix s = framecert::frame_operator(family);
  const framecert::Matrix s_dual = framecert::frame_operator(dual);
  const framecert::Matrix identity = framecert::Matrix::Identity(family.dim(), family.dim());
  const double residual = framecert::spectral_norm(s_dual * s - identity);

  return {json{{"certificate", framecert::io::to_json(cert)},
               {"dual", framecert::io::family_to_json(dual)},
               {"dual_identity_residual", residual}},
          cert.is_frame && residual <= tol.residual_tol};
}

CommandResult run_reconstruct(const json& doc, const CommonOptions&) {
  const auto family = framecert::io::parse_family(doc.at("family"), "family");
  const auto x = framecert::io::parse_vector(doc.at("vector"), "vector");
  const auto tol = framecert::io::parse_tolerances(doc);

  const framecert::Vector direct = framecert::reconstruct(family, x, tol);
  const auto dual = framecert::canonical_dual(family, tol);
  const framecert::Vector swapped = framecert::synthesis(family, framecert::analysis(dual, x));

  const double scale = x.norm() > 0.0 ? x.norm() : 1.0;
  const double direct_err = (direct - x).norm() / scale;
  const double swapped_err = (swapped - x).norm() / scale;
  return {json{{"reconstruction", framecert::io::to_json(direct)},
               {"relative_error", direct_err},
               {"swapped_relative_error", swapped_err}},
          direct_err <= tol.residual_tol && swapped_err <= tol.residual_tol};
}

CommandResult run_lframe_audit(const json& doc, const CommonOptions&) {
  const auto family = framecert::io::parse_family(doc.at("family"), "family");
  const auto op = framecert::io::parse_operator(doc.at("operator"), "operator");
  const auto tol = framecert::io::parse_tolerances(doc);
  const auto cert = framecert::lframe_bounds(family, op, tol);
  return {json{{"certificate", framecert::io::to_json(cert)}}, framecert::lframe_passes(cert)};
}

CommandResult run_atomic_build(const json& doc, const CommonOptions&) {
  const auto op = framecert::io::parse_operator(doc.at("operator"), "operator");
  const auto tol = framecert::io::parse_tolerances(doc);
  const auto family = framecert::build_atomic_system(op);
  const auto cert = framecert::lframe_bounds(family, op, tol);
  return {json{{"family", framecert::io::family_to_json(family)},
               {"certificate", framecert::io::to_json(cert)}},
          framecert::lframe_passes(cert)};
}

CommandResult run_verify_equivalences(const json& doc, const CommonOptions& options) {
  const auto family = framecert::io::parse_family(doc.at("family"), "family");
  const auto op = framecert::io::parse_operator(doc.at("operator"), "operator");
  const auto tol = framecert::io::parse_tolerances(doc);
  int samples = 100;
  if (doc.contains("samples")) samples = doc["samples"].get<int>();
  if (options.samples) samples = *options.samples;
  if (samples < 1) throw framecert::SchemaError("samples must be >= 1");
  const auto report = framecert::verify_atomic_equivalence(family, op, samples, tol);
  return {json{{"report", framecert::io::to_json(report)}}, report.all_pass};
}

CommandResult run_kernel_eval(const json& doc, const CommonOptions&) {
  const auto spec = framecert::io::parse_kernel(doc.at("kernel"), "kernel");
  const auto lambda = framecert::io::parse_complex(doc.at("lambda"), "lambda");
  const int resolution = doc.contains("resolution") ? doc["resolution"].get<int>() : 64;

  json result{{"kernel_norm", framecert::kernel_norm(spec, lambda, resolution)},
              {"norm_is_estimate", framecert::kernel_norm_is_estimate(spec)}};
  if (doc.contains("z")) {
    const auto z = framecert::io::parse_complex(doc["z"], "z");
    result["kernel_value"] = framecert::io::to_json(framecert::kernel_eval(spec, z, lambda));
    result["normalized_value"] =
        framecert::io::to_json(framecert::normalized_kernel_eval(spec, z, lambda, resolution));
  }
  return {result, true};
}

CommandResult run_bekolle_ratio(const json& doc, const CommonOptions&) {
  const auto weight = framecert::io::parse_weight(doc.at("weight"), "weight");
  const double eta = doc.contains("eta") ? framecert::io::parse_finite(doc["eta"], "eta") : 0.0;
  const int resolution = doc.contains("resolution") ? doc["resolution"].get<int>() : 64;

  std::vector<framecert::CarlesonSquare> grid;
  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    if (g.is_array()) {
      for (std::size_t i = 0; i < g.size(); ++i)
        grid.push_back({framecert::io::parse_finite(g[i].at("theta"), "grid.theta"),
                        framecert::io::parse_finite(g[i].at("h"), "grid.h")});
    } else if (g.is_object()) {
      grid = framecert::default_carleson_grid(g.value("h_count", 16), g.value("theta_count", 16));
    } else {
      throw framecert::SchemaError("grid: expected an array of squares or grid parameters");
    }
  } else {
    grid = framecert::default_carleson_grid();
  }

  const auto scan = framecert::bekolle_ratio(weight, eta, grid, resolution);
  return {json{{"sup_ratio", scan.sup_ratio},
               {"argmax", json{{"theta", scan.argmax.theta}, {"h", scan.argmax.h}}},
               {"grid_size", grid.size()},
               {"resolution", resolution},
               {"grid_lower_estimate", scan.grid_lower_estimate}},
          true};
}

CommandResult run_sampling_audit(const json& doc, const CommonOptions& options) {
  const auto spec = framecert::io::parse_kernel(doc.at("kernel"), "kernel");
  const auto points = framecert::io::parse_points(doc.at("points"), "points");
  const auto tol = framecert::io::parse_tolerances(doc);
  std::string mode_name = "truncated";
  if (doc.contains("norm_mode")) mode_name = doc["norm_mode"].get<std::string>();
  if (options.norm_mode) mode_name = *options.norm_mode;
  const auto mode = framecert::io::parse_norm_mode(mode_name);

  int degree = default_degree(spec);
  if (doc.contains("degree")) degree = doc["degree"].get<int>();
  if (options.degree) degree = *options.degree;
  if (degree < 0) throw framecert::SchemaError("degree must be >= 0");

  const auto basis = framecert::build_basis(spec, degree);
  const auto op = parse_operator_or_identity(doc, degree + 1);
  const auto audit = framecert::sampling_audit(basis, points, op, mode, tol);
  json result = framecert::io::to_json(audit);
  result["num_points"] = points.size();
  result["norm_mode"] = mode_name;
  return {result, framecert::lframe_passes(audit.certificate)};
}

CommandResult run_sample_reconstruct(const json& doc, const CommonOptions& options) {
  const auto spec = framecert::io::parse_kernel(doc.at("kernel"), "kernel");
  const auto points = framecert::io::parse_points(doc.at("points"), "points");
  const auto f = framecert::io::parse_vector(doc.at("f_coords"), "f_coords");
  const auto tol = framecert::io::parse_tolerances(doc);
  std::string mode_name = "truncated";
  if (doc.contains("norm_mode")) mode_name = doc["norm_mode"].get<std::string>();
  if (options.norm_mode) mode_name = *options.norm_mode;
  const auto mode = framecert::io::parse_norm_mode(mode_name);

  int degree = static_cast<int>(f.size()) - 1;
  if (doc.contains("degree")) degree = doc["degree"].get<int>();
  if (options.degree) degree = *options.degree;
  if (degree + 1 != f.size())
    throw framecert::SchemaError("f_coords length must equal degree + 1");

  const auto basis = framecert::build_basis(spec, degree);
  const auto op = parse_operator_or_identity(doc, degree + 1);
  const auto rec = framecert::operator_sample_reconstruct(basis, points, op, f, mode, tol);
  return {json{{"coefficients", framecert::io::to_json(rec.coefficients)},
               {"reconstruction", framecert::io::to_json(rec.reconstruction)},
               {"relative_error", rec.relative_error}},
          rec.relative_error <= tol.residual_tol};
}

using Runner = CommandResult (*)(const json&, const CommonOptions&);

int run_command(const std::string& name, Runner runner, const CommonOptions& options) {
  std::string raw;
  json doc;
  try {
    raw = read_all(options.input);
    doc = json::parse(raw);
  } catch (const framecert::Error& e) {
    std::cerr << "framecert " << name << ": " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "framecert " << name << ": invalid JSON input: " << e.what() << "\n";
    return 2;
  }
  if (!doc.is_object()) {
    std::cerr << "framecert " << name << ": input document must be a JSON object\n";
    return 2;
  }

  json report;
  try {
    report = json{{"command", name},
                  {"input_digest", framecert::io::fnv1a64_hex(raw)},
                  {"toolkit_version", framecert::io::kToolkitVersion},
                  {"tolerances", framecert::io::to_json(framecert::io::parse_tolerances(doc))}};
  } catch (const framecert::Error& e) {
    std::cerr << "framecert " << name << ": " << e.what() << "\n";
    return 2;
  }
  try {
    const CommandResult outcome = runner(doc, options);
    report["result"] = outcome.result;
    report["passes"] = outcome.passes;
    write_all(options.output, framecert::io::canonical_dump(report));
    return outcome.passes ? 0 : 1;
  } catch (const framecert::Error& e) {
    switch (e.kind()) {
      case framecert::ErrorKind::NotAFrame:
      case framecert::ErrorKind::NotAtomicForL:
        // A certified negative outcome, not an input problem: still report.
        report["passes"] = false;
        report["error"] = json{{"kind", to_string(e.kind())}, {"message", e.what()}};
        write_all(options.output, framecert::io::canonical_dump(report));
        std::cerr << "framecert " << name << ": " << e.what() << "\n";
        return 1;
      case framecert::ErrorKind::NonFinite:
      case framecert::ErrorKind::QuadratureDivergence:
      case framecert::ErrorKind::NotHermitian:
        std::cerr << "framecert " << name << ": " << e.what() << "\n";
        return 3;
      default:
        std::cerr << "framecert " << name << ": " << e.what() << "\n";
        return 2;
    }
  } catch (const json::exception& e) {
    std::cerr << "framecert " << name << ": " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certificates for frames, atomic systems, and kernel sampling"};
  app.require_subcommand(1);

  struct Registered {
    CLI::App* cmd;
    Runner runner;
    CommonOptions options;
  };
  std::vector<std::unique_ptr<Registered>> commands;

  const auto add = [&](const std::string& name, const std::string& help, Runner runner,
                       bool sampling_flags, bool samples_flag) {
    auto reg = std::make_unique<Registered>();
    reg->runner = runner;
    reg->cmd = app.add_subcommand(name, help);
    reg->cmd->add_option("--input", reg->options.input, "problem document path, or - for stdin")
        ->required();
    reg->cmd->add_option("--output", reg->options.output, "report path, or - for stdout");
    if (samples_flag)
      reg->cmd->add_option("--samples", reg->options.samples, "number of probe vectors");
    if (sampling_flags) {
      reg->cmd->add_option("--degree", reg->options.degree, "truncation degree N");
      reg->cmd->add_option("--norm-mode", reg->options.norm_mode, "truncated or closed-form")
          ->check(CLI::IsMember({"truncated", "closed-form"}));
    }
    commands.push_back(std::move(reg));
  };

  add("frame-bounds", "optimal frame bounds of a finite family", run_frame_bounds, false, false);
  add("dual", "canonical dual family", run_dual, false, false);
  add("reconstruct", "frame reconstruction of a vector", run_reconstruct, false, false);
  add("lframe-audit", "operator-frame certificate for (family, L)", run_lframe_audit, false, false);
  add("atomic-build", "atomic system {L e_n} and its certificate", run_atomic_build, false, false);
  add("verify-theorem5", "joint audit of the atomic-system characterizations",
      run_verify_equivalences, false, true);
  add("kernel-eval", "reproducing kernel values and norms", run_kernel_eval, false, false);
  add("bekolle-ratio", "Carleson-square ratio scan of a radial weight", run_bekolle_ratio, false,
      false);
  add("sampling-audit", "sampling certificate for a point set", run_sampling_audit, true, false);
  add("sample-reconstruct", "atomic reconstruction from point samples", run_sample_reconstruct,
      true, false);

  CLI11_PARSE(app, argc, argv);

  for (const auto& reg : commands) {
    if (!reg->cmd->parsed()) continue;
    try {
      return run_command(reg->cmd->get_name(), reg->runner, reg->options);
    } catch (const std::exception& e) {
      std::cerr << "framecert " << reg->cmd->get_name() << ": " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}

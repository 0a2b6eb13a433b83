#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "framecert/frames.hpp"
#include "framecert/kernels.hpp"
#include "framecert/operator_atomic.hpp"
#include "framecert/sampling.hpp"

namespace framecert::io {

inline constexpr const char* kToolkitVersion = "0.1.0";

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Canonical serialization: sorted keys, floats at 17 significant digits, no
// whitespace. Identical values always produce identical bytes, which is what
// makes reports diffable and goldens meaningful.
// ---------------------------------------------------------------------------

namespace detail {

inline void append_escaped(std::string& out, std::string_view s) {
  out.push_back('"');
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

inline void append_canonical(std::string& out, const json& value) {
  switch (value.type()) {
    case json::value_t::null: out += "null"; break;
    case json::value_t::boolean: out += value.get<bool>() ? "true" : "false"; break;
    case json::value_t::number_integer:
      out += std::to_string(value.get<std::int64_t>());
      break;
    case json::value_t::number_unsigned:
      out += std::to_string(value.get<std::uint64_t>());
      break;
    case json::value_t::number_float: {
      const double d = value.get<double>();
      if (!std::isfinite(d)) throw NonFiniteError("canonical_dump: non-finite number");
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", d);
      out += buf;
      break;
    }
    case json::value_t::string: append_escaped(out, value.get_ref<const std::string&>()); break;
    case json::value_t::array: {
      out.push_back('[');
      bool first = true;
      for (const auto& item : value) {
        if (!first) out.push_back(',');
        first = false;
        append_canonical(out, item);
      }
      out.push_back(']');
      break;
    }
    case json::value_t::object: {
      // nlohmann objects iterate in key order already; rely on that.
      out.push_back('{');
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        append_escaped(out, it.key());
        out.push_back(':');
        append_canonical(out, it.value());
      }
      out.push_back('}');
      break;
    }
    default:
      throw SchemaError("canonical_dump: unsupported JSON value type");
  }
}

}  // namespace detail

inline std::string canonical_dump(const json& value) {
  std::string out;
  detail::append_canonical(out, value);
  out.push_back('\n');
  return out;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, hash);
  return buf;
}

// ---------------------------------------------------------------------------
// Parsing. Complex numbers are two-element arrays [re, im], matrices are
// row-major nested arrays, and every number must be finite.
// ---------------------------------------------------------------------------

inline double parse_finite(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(where + ": number must be finite");
  return v;
}

inline Complex parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw SchemaError(where + ": expected a complex number as [re, im]");
  return {parse_finite(j[0], where + "[0]"), parse_finite(j[1], where + "[1]")};
}

inline Vector parse_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a non-empty array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = parse_complex(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

inline Matrix parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw SchemaError(where + ": rows must be non-empty arrays");
  Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw SchemaError(where + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          parse_complex(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

inline FrameFamily parse_family(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("vectors"))
    throw SchemaError(where + ": expected {\"dim\", \"vectors\"}");
  if (!j["dim"].is_number_integer()) throw SchemaError(where + ".dim: expected an integer");
  const Index dim = j["dim"].get<Index>();
  const auto& vecs = j["vectors"];
  if (!vecs.is_array() || vecs.empty()) throw SchemaError(where + ".vectors: expected vectors");
  Matrix m(dim, static_cast<Index>(vecs.size()));
  for (std::size_t n = 0; n < vecs.size(); ++n) {
    const Vector v = parse_vector(vecs[n], where + ".vectors[" + std::to_string(n) + "]");
    if (v.size() != dim) throw SchemaError(where + ": vector length differs from dim");
    m.col(static_cast<Index>(n)) = v;
  }
  return FrameFamily(std::move(m));
}

inline Matrix parse_operator(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("matrix"))
    throw SchemaError(where + ": expected {\"dim\", \"matrix\"}");
  if (!j["dim"].is_number_integer()) throw SchemaError(where + ".dim: expected an integer");
  const Index dim = j["dim"].get<Index>();
  const Matrix m = parse_matrix(j["matrix"], where + ".matrix");
  if (m.rows() != dim || m.cols() != dim)
    throw SchemaError(where + ": matrix shape differs from dim x dim");
  return m;
}

inline Tolerances parse_tolerances(const json& doc) {
  Tolerances tol;
  if (!doc.contains("tolerances")) return tol;
  const auto& j = doc["tolerances"];
  if (!j.is_object()) throw SchemaError("tolerances: expected an object");
  if (j.contains("rank_cutoff_rel") && !j["rank_cutoff_rel"].is_null())
    tol.rank_cutoff_rel = parse_finite(j["rank_cutoff_rel"], "tolerances.rank_cutoff_rel");
  if (j.contains("residual_tol"))
    tol.residual_tol = parse_finite(j["residual_tol"], "tolerances.residual_tol");
  if (j.contains("bound_slack"))
    tol.bound_slack = parse_finite(j["bound_slack"], "tolerances.bound_slack");
  try {
    tol.validate();
  } catch (const InvalidArgumentError& e) {
    throw SchemaError(e.what());
  }
  return tol;
}

inline WeightFunction parse_weight(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("preset"))
    throw SchemaError(where + ": expected {\"preset\", ...}");
  const std::string preset = j["preset"].get<std::string>();
  try {
    if (preset == "constant")
      return constant_weight(j.contains("value") ? parse_finite(j["value"], where + ".value") : 1.0);
    if (preset == "poly") return poly_weight(parse_finite(j.at("s"), where + ".s"));
    if (preset == "log")
      return log_weight(parse_finite(j.at("s"), where + ".s"),
                        parse_finite(j.at("t"), where + ".t"));
  } catch (const json::exception&) {
    throw SchemaError(where + ": missing weight parameters");
  } catch (const InvalidArgumentError& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError(where + ": unknown weight preset '" + preset + "'");
}

inline KernelSpec parse_kernel(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("variant"))
    throw SchemaError(where + ": expected {\"variant\", ...}");
  const std::string variant = j["variant"].get<std::string>();
  KernelSpec spec;
  if (variant == "bergman") {
    spec = BergmanKernel{j.contains("eta") ? parse_finite(j["eta"], where + ".eta") : 0.0};
  } else if (variant == "fock") {
    spec = FockKernel{j.contains("alpha") ? parse_finite(j["alpha"], where + ".alpha") : 1.0};
  } else if (variant == "weighted_bergman") {
    WeightedBergmanKernel w{parse_weight(j.at("weight"), where + ".weight"),
                            j.contains("eta") ? parse_finite(j["eta"], where + ".eta") : 0.0,
                            {}};
    if (j.contains("disc_alpha") && !j["disc_alpha"].is_null())
      w.disc_alpha = parse_finite(j["disc_alpha"], where + ".disc_alpha");
    spec = std::move(w);
  } else {
    throw SchemaError(where + ": unknown kernel variant '" + variant + "'");
  }
  try {
    validate(spec);
  } catch (const InvalidArgumentError& e) {
    throw SchemaError(e.what());
  }
  return spec;
}

inline PointSet parse_points(const json& j, const std::string& where) {
  try {
    if (j.is_object() && j.contains("preset")) {
      const std::string preset = j["preset"].get<std::string>();
      if (preset == "disk_exponential")
        return disk_exponential_lattice(parse_finite(j.at("s"), where + ".s"),
                                        j.at("rings").get<int>(), j.at("per_ring").get<int>());
      if (preset == "square")
        return square_lattice(parse_finite(j.at("spacing"), where + ".spacing"),
                              parse_finite(j.at("half_extent"), where + ".half_extent"));
      throw SchemaError(where + ": unknown point preset '" + preset + "'");
    }
    if (j.is_object() && j.contains("points")) {
      const auto& pts = j["points"];
      if (!pts.is_array() || pts.empty()) throw SchemaError(where + ".points: expected points");
      std::vector<Complex> points;
      points.reserve(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i)
        points.push_back(parse_complex(pts[i], where + ".points[" + std::to_string(i) + "]"));
      return PointSet(std::move(points));
    }
  } catch (const json::exception&) {
    throw SchemaError(where + ": missing point-set parameters");
  } catch (const InvalidArgumentError& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError(where + ": expected {\"points\": [...]} or {\"preset\": ...}");
}

inline NormMode parse_norm_mode(const std::string& s) {
  if (s == "truncated") return NormMode::truncated;
  if (s == "closed-form") return NormMode::closed_form;
  throw SchemaError("norm_mode: expected 'truncated' or 'closed-form'");
}

// ---------------------------------------------------------------------------
// Emission.
// ---------------------------------------------------------------------------

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline json to_json(const Matrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

inline json family_to_json(const FrameFamily& family) {
  json vectors = json::array();
  for (Index n = 0; n < family.size(); ++n) vectors.push_back(to_json(Vector(family.vector(n))));
  return json{{"dim", family.dim()}, {"vectors", vectors}};
}

inline json to_json(const Tolerances& tol) {
  json out{{"residual_tol", tol.residual_tol}, {"bound_slack", tol.bound_slack}};
  if (tol.rank_cutoff_rel)
    out["rank_cutoff_rel"] = *tol.rank_cutoff_rel;
  else
    out["rank_cutoff_rel"] = nullptr;  // resolved per matrix; echoed in residuals
  return out;
}

inline json residuals_to_json(const std::vector<LabeledValue>& residuals) {
  json out = json::object();
  for (const auto& r : residuals) out[r.label] = r.value;
  return out;
}

inline json to_json(const BoundCertificate& cert) {
  return json{
      {"lower_A", cert.lower_A ? json(*cert.lower_A) : json(nullptr)},
      {"upper_B", cert.upper_B},
      {"is_frame", cert.is_frame},
      {"residuals", residuals_to_json(cert.residuals)},
      {"tolerances", to_json(cert.tolerances)},
  };
}

inline json to_json(const LFrameCertificate& cert) {
  return json{
      {"lower_A", cert.lower_A ? json(*cert.lower_A) : json(nullptr)},
      {"lower_vacuous", cert.lower_vacuous},
      {"upper_B", cert.upper_B},
      {"coeff_norm_C", cert.coeff_norm_C},
      {"range_condition_ok", cert.range_condition_ok},
      {"residuals", residuals_to_json(cert.residuals)},
      {"tolerances", to_json(cert.tolerances)},
  };
}

inline json to_json(const SamplingAudit& audit) {
  return json{
      {"certificate", to_json(audit.certificate)},
      {"truncation_degree", audit.truncation_degree},
      {"truncation_diagnostics", audit.truncation_diagnostics},
      {"estimate_flag", audit.estimate_flag},
      {"scope", "valid for the degree-N truncation only"},
  };
}

inline json to_json(const EquivalenceReport& report) {
  return json{
      {"certificate", to_json(report.certificate)},
      {"pass_ii", report.pass_ii},
      {"pass_iii", report.pass_iii},
      {"pass_iv", report.pass_iv},
      {"quantitative_ok", report.quantitative_ok},
      {"coherent", report.coherent},
      {"all_pass", report.all_pass},
      {"synthesis_residual", report.synthesis_residual},
      {"adjoint_residual", report.adjoint_residual},
      {"sampled_lower_violation", report.sampled_lower_violation},
      {"sampled_upper_violation", report.sampled_upper_violation},
      {"samples", report.samples},
  };
}

}  // namespace framecert::io

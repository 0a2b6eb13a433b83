#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "framecert/io.hpp"

using namespace framecert;
namespace fs = std::filesystem;

namespace {

const char* cli_path() { return FRAMECERT_CLI_PATH; }
fs::path fixture_dir() { return fs::path(FRAMECERT_FIXTURE_DIR); }

fs::path temp_file(const std::string& stem) {
  return fs::temp_directory_path() / ("framecert_test_" + stem);
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(cli_path()) + " " + args).c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("canonical_dump sorts keys and pins float formatting") {
  io::json doc;
  doc["zeta"] = 1.0;
  doc["alpha"] = 0.1;
  doc["nested"] = io::json{{"b", true}, {"a", nullptr}};
  doc["list"] = io::json::array({1, 2.5, "x"});
  const std::string bytes = io::canonical_dump(doc);
  CHECK(bytes ==
        "{\"alpha\":0.10000000000000001,\"list\":[1,2.5,\"x\"],"
        "\"nested\":{\"a\":null,\"b\":true},\"zeta\":1}\n");
  CHECK(io::canonical_dump(doc) == bytes);  // stable

  io::json bad;
  bad["x"] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(io::canonical_dump(bad), NonFiniteError);
}

TEST_CASE("input digests are stable and content sensitive") {
  CHECK(io::fnv1a64_hex("") == "fnv1a64:cbf29ce484222325");
  CHECK(io::fnv1a64_hex("abc") == io::fnv1a64_hex("abc"));
  CHECK(io::fnv1a64_hex("abc") != io::fnv1a64_hex("abd"));
}

TEST_CASE("JSON parsing round-trips the core value types") {
  const auto z = io::parse_complex(io::json::array({1.5, -2.0}), "z");
  CHECK(z == Complex(1.5, -2.0));
  CHECK(io::to_json(z) == io::json::array({1.5, -2.0}));

  const io::json family_doc = {
      {"dim", 2},
      {"vectors", io::json::array({io::json::array({io::json::array({1.0, 0.0}),
                                                     io::json::array({0.0, 0.0})}),
                                   io::json::array({io::json::array({0.0, 0.0}),
                                                     io::json::array({1.0, 0.0})})})}};
  const auto family = io::parse_family(family_doc, "family");
  CHECK(family.dim() == 2);
  CHECK(family.size() == 2);
  CHECK(io::parse_family(io::family_to_json(family), "family").synthesis_matrix() ==
        family.synthesis_matrix());

  CHECK_THROWS_AS(io::parse_complex(io::json::array({1.0}), "z"), SchemaError);
  CHECK_THROWS_AS(io::parse_family(io::json{{"dim", 3}, {"vectors", family_doc["vectors"]}},
                                   "family"),
                  SchemaError);
  const io::json nan_doc = {{"dim", 1},
                            {"vectors", io::json::array({io::json::array(
                                            {io::json::array({std::nan(""), 0.0})})})}};
  CHECK_THROWS_AS(io::parse_family(nan_doc, "family"), SchemaError);
}

TEST_CASE("kernel, weight, and point-set documents parse against the schema") {
  const auto bergman = io::parse_kernel(io::json{{"variant", "bergman"}, {"eta", 1.0}}, "k");
  CHECK(std::get<BergmanKernel>(bergman).eta == 1.0);
  CHECK_THROWS_AS(io::parse_kernel(io::json{{"variant", "bergman"}, {"eta", -2.0}}, "k"),
                  SchemaError);
  CHECK_THROWS_AS(io::parse_kernel(io::json{{"variant", "nope"}}, "k"), SchemaError);

  const auto weighted = io::parse_kernel(
      io::json{{"variant", "weighted_bergman"},
               {"eta", 0.0},
               {"disc_alpha", 0.4},
               {"weight", io::json{{"preset", "poly"}, {"s", 0.5}}}},
      "k");
  CHECK(std::get<WeightedBergmanKernel>(weighted).disc_alpha.value() == 0.4);

  const auto points =
      io::parse_points(io::json{{"preset", "square"}, {"spacing", 0.5}, {"half_extent", 1.0}}, "p");
  CHECK(points.size() == 25);
  CHECK_THROWS_AS(io::parse_points(io::json{{"preset", "hexagon"}}, "p"), SchemaError);

  const auto tol = io::parse_tolerances(io::json{{"tolerances", {{"residual_tol", 1e-8}}}});
  CHECK(tol.residual_tol == 1e-8);
  CHECK_THROWS_AS(io::parse_tolerances(io::json{{"tolerances", {{"residual_tol", -1.0}}}}),
                  SchemaError);
}

TEST_CASE("norm mode strings") {
  CHECK(io::parse_norm_mode("truncated") == NormMode::truncated);
  CHECK(io::parse_norm_mode("closed-form") == NormMode::closed_form);
  CHECK_THROWS_AS(io::parse_norm_mode("other"), SchemaError);
}

TEST_CASE("the CLI is deterministic and matches its golden reports") {
  const std::pair<const char*, int> fixtures[] = {
      {"frame_bounds_standard_basis", 0},
      {"dual_mercedes", 0},
      {"reconstruct_basis", 0},
      {"atomic_build_diag23", 0},
      {"verify_theorem5_atomic", 0},
      {"kernel_eval_bergman", 0},
      {"bekolle_poly_half", 0},
      {"sampling_audit_fock_lattice", 0},
      {"sample_reconstruct_fock", 0},
      {"lframe_audit_deficient", 1},
      {"dual_deficient", 1},
  };
  for (const auto& [name, expected_code] : fixtures) {
    DYNAMIC_SECTION(name) {
      // Command name is encoded in the fixture itself.
      const io::json doc = io::json::parse(slurp(fixture_dir() / (std::string(name) + ".json")));
      const std::string command = doc.at("__command").get<std::string>();

      const fs::path input = fixture_dir() / (std::string(name) + ".json");
      const fs::path out1 = temp_file(std::string(name) + ".1.json");
      const fs::path out2 = temp_file(std::string(name) + ".2.json");
      const std::string base = command + " --input " + input.string();

      CHECK(run_cli(base + " --output " + out1.string() + " 2>/dev/null") == expected_code);
      CHECK(run_cli(base + " --output " + out2.string() + " 2>/dev/null") == expected_code);
      const std::string bytes1 = slurp(out1);
      CHECK(bytes1 == slurp(out2));  // run-to-run determinism

      const fs::path golden = fixture_dir() / "golden" / (std::string(name) + ".json");
      REQUIRE(fs::exists(golden));
      CHECK(bytes1 == slurp(golden));
      fs::remove(out1);
      fs::remove(out2);
    }
  }
}

TEST_CASE("the CLI exit codes cover the whole contract") {
  // 2: malformed input document.
  CHECK(run_cli("frame-bounds --input " + (fixture_dir() / "malformed.json").string() +
                " --output /dev/null 2>/dev/null") == 2);
  // 2: missing file.
  CHECK(run_cli("frame-bounds --input /nonexistent.json --output /dev/null 2>/dev/null") == 2);
  // 2: schema-invalid tolerances block.
  const fs::path bad_tol = temp_file("bad_tol.json");
  {
    std::ofstream out(bad_tol);
    out << R"({"family": {"dim": 1, "vectors": [[[1.0, 0.0]]]},)"
        << R"( "tolerances": {"residual_tol": -1.0}})";
  }
  CHECK(run_cli("frame-bounds --input " + bad_tol.string() +
                " --output /dev/null 2>/dev/null") == 2);
  fs::remove(bad_tol);
  // 3: divergent quadrature.
  CHECK(run_cli("bekolle-ratio --input " + (fixture_dir() / "bekolle_divergent.json").string() +
                " --output /dev/null 2>/dev/null") == 3);
}

TEST_CASE("tolerance overrides are honored and echoed into the report") {
  const fs::path input = temp_file("tol_override_in.json");
  const fs::path output = temp_file("tol_override_out.json");
  {
    std::ofstream out(input);
    out << R"({"family": {"dim": 1, "vectors": [[[1.0, 0.0]]]},)"
        << R"( "tolerances": {"residual_tol": 1e-7, "bound_slack": 1e-5}})";
  }
  REQUIRE(run_cli("frame-bounds --input " + input.string() + " --output " + output.string() +
                  " 2>/dev/null") == 0);
  const io::json report = io::json::parse(slurp(output));
  CHECK(report["tolerances"]["residual_tol"].get<double>() == 1e-7);
  CHECK(report["tolerances"]["bound_slack"].get<double>() == 1e-5);
  CHECK(report["result"]["certificate"]["tolerances"]["bound_slack"].get<double>() == 1e-5);
  fs::remove(input);
  fs::remove(output);
}

TEST_CASE("sampling flags override the document and fall back to defaults") {
  const fs::path output = temp_file("degree_flag_out.json");
  const fs::path input = fixture_dir() / "sampling_audit_fock_lattice.json";

  // Explicit flag wins over the document's degree 6.
  REQUIRE(run_cli("sampling-audit --input " + input.string() + " --degree 4 --output " +
                  output.string() + " 2>/dev/null") == 0);
  CHECK(io::json::parse(slurp(output))["result"]["truncation_degree"].get<int>() == 4);

  // Without either, the Fock default degree is 32.
  const fs::path bare = temp_file("degree_default_in.json");
  {
    std::ofstream out(bare);
    out << R"({"kernel": {"variant": "fock", "alpha": 1.0},)"
        << R"( "points": {"preset": "square", "spacing": 0.5, "half_extent": 1.0}})";
  }
  REQUIRE(run_cli("sampling-audit --input " + bare.string() + " --output " + output.string() +
                  " 2>/dev/null") == 1);  // 25 points cannot frame the degree-32 model
  const io::json report = io::json::parse(slurp(output));
  CHECK(report["result"]["truncation_degree"].get<int>() == 32);
  CHECK(report["result"]["norm_mode"].get<std::string>() == "truncated");
  fs::remove(bare);
  fs::remove(output);
}

TEST_CASE("weighted kernel evaluation reports estimates and refuses point values") {
  const fs::path with_z = temp_file("weighted_eval_in.json");
  const fs::path output = temp_file("weighted_eval_out.json");
  {
    std::ofstream out(with_z);
    out << R"({"kernel": {"variant": "weighted_bergman", "eta": 0.0, "disc_alpha": 0.4,)"
        << R"( "weight": {"preset": "poly", "s": 0.5}}, "lambda": [0.3, 0.1], "z": [0.0, 0.0]})";
  }
  // No closed form exists for the kernel value itself: input-class failure.
  CHECK(run_cli("kernel-eval --input " + with_z.string() + " --output /dev/null 2>/dev/null") ==
        2);

  const fs::path norm_only = temp_file("weighted_norm_in.json");
  {
    std::ofstream out(norm_only);
    out << R"({"kernel": {"variant": "weighted_bergman", "eta": 0.0, "disc_alpha": 0.4,)"
        << R"( "weight": {"preset": "poly", "s": 0.5}}, "lambda": [0.3, 0.1]})";
  }
  REQUIRE(run_cli("kernel-eval --input " + norm_only.string() + " --output " + output.string() +
                  " 2>/dev/null") == 0);
  const io::json report = io::json::parse(slurp(output));
  CHECK(report["result"]["norm_is_estimate"].get<bool>());
  CHECK(report["result"]["kernel_norm"].get<double>() > 0.0);
  CHECK_FALSE(report["result"].contains("kernel_value"));
  fs::remove(with_z);
  fs::remove(norm_only);
  fs::remove(output);
}

TEST_CASE("the norm-mode flag switches the family normalization") {
  const fs::path output = temp_file("norm_mode_out.json");
  const fs::path input = fixture_dir() / "sampling_audit_fock_lattice.json";
  REQUIRE(run_cli("sampling-audit --input " + input.string() +
                  " --norm-mode closed-form --output " + output.string() + " 2>/dev/null") == 0);
  const io::json report = io::json::parse(slurp(output));
  CHECK(report["result"]["norm_mode"].get<std::string>() == "closed-form");
  // Closed-form normalization shrinks every atom by its truncation ratio, so
  // the certified upper bound drops below the truncated-mode value.
  const io::json truncated = io::json::parse(slurp(fixture_dir() / "golden" /
                                                   "sampling_audit_fock_lattice.json"));
  CHECK(report["result"]["certificate"]["upper_B"].get<double>() <
        truncated["result"]["certificate"]["upper_B"].get<double>());
  fs::remove(output);
}

TEST_CASE("the CLI reads stdin and writes stdout with '-'") {
  const fs::path input = fixture_dir() / "frame_bounds_standard_basis.json";
  const fs::path out = temp_file("stdio.json");
  const int code = run_cli("frame-bounds --input - < " + input.string() + " > " + out.string() +
                           " 2>/dev/null");
  CHECK(code == 0);
  const std::string bytes = slurp(out);
  CHECK(bytes == slurp(fixture_dir() / "golden" / "frame_bounds_standard_basis.json"));
  fs::remove(out);
}

#include "iadof/rational.hpp"
#include "iadof_cli/cli.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <sstream>

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
  json error() const { return json::parse(err); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = iadof::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) f.push_back(cell);
  if (!line.empty() && line.back() == ',') f.emplace_back();
  return f;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("dof reports region and bounds") {
    const auto r = run({"dof", "--G", "3", "--K", "1", "--M", "5", "--N", "7"});
    REQUIRE(r.code == 0);
    const auto j = r.doc();
    CHECK(j["d_quantity"]["value"] == "3/1");
    CHECK(j["d_quantity"]["approx"].get<double>() == doctest::Approx(3.0));
    CHECK(j["region"]["region"] == "II-B");
    CHECK(j["region"]["n"] == 3);
    CHECK(j["region"]["label"] == "II-B(3)");
    CHECK(j["achievable_by"] == "linear");
  }

  TEST_CASE("dof in Region I") {
    const auto r = run({"dof", "--G", "3", "--K", "2", "--M", "17", "--N", "5"});
    REQUIRE(r.code == 0);
    const auto j = r.doc();
    CHECK(j["region"]["region"] == "I");
    CHECK(j["d_upper"]["value"] == "85/27");
    CHECK(j["d_quantity"].is_null());
    CHECK(j["achievable_by"] == "asymptotic-only");
  }

  TEST_CASE("usage errors exit 2 with JSON on stderr") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"dof", "--G", "0", "--K", "1", "--M", "5", "--N", "7"},
             {"dof", "--G", "3", "--K", "1", "--M", "5"},
             {"feasible", "--G", "3", "--K", "1", "--M", "5", "--N", "7", "--d", "x/2"},
             {"feasible", "--G", "3", "--K", "1", "--M", "5", "--N", "7", "--d", "-1"},
             {"sweep", "--G", "3", "--K", "2", "--M", "5..1", "--N", "1..3"},
             {"sweep", "--G", "3", "--K", "2", "--M", "1..3", "--N", "1..3", "--mode", "feasibility"},
             {"bogus"},
         }) {
      const auto r = run(args);
      CHECK(r.code == 2);
      CHECK(r.out.empty());
      const auto e = r.error();
      CHECK(e["error"] == "usage");
      CHECK(e["exit_code"] == 2);
    }
  }

  TEST_CASE("feasible verdicts") {
    auto r = run({"feasible", "--G", "3", "--K", "1", "--M", "1", "--N", "7", "--d", "2"});
    CHECK(r.code == 3);
    auto j = r.doc();
    CHECK(j["linear"] == "infeasible");
    CHECK(j["proper_holds"] == true);
    CHECK_FALSE(j["binding_pair"].is_null());

    r = run({"feasible", "--G", "3", "--K", "2", "--M", "21", "--N", "21", "--d", "7"});
    CHECK(r.code == 3);
    j = r.doc();
    CHECK(j["linear"] == "infeasible");
    CHECK(j["asymptotic"] == "feasible");

    r = run({"feasible", "--G", "3", "--K", "1", "--M", "5", "--N", "7", "--d", "3"});
    CHECK(r.code == 0);
    j = r.doc();
    CHECK(j["linear"] == "feasible");
    CHECK(j["binding_pair"].is_null());
  }

  TEST_CASE("chain and sequences") {
    auto r = run({"chain", "--G", "3", "--K", "2", "--M", "7", "--N", "2", "--d", "1"});
    REQUIRE(r.code == 0);
    auto j = r.doc();
    CHECK(j["genie_bound"]["value"] == "14/11");
    CHECK(j["genie_at_d"]["feasible"] == true);

    r = run({"sequences", "--G", "2", "--K", "3", "--side", "A"});
    REQUIRE(r.code == 0);
    j = r.doc();
    CHECK(j["infinite"] == false);
  }

  TEST_CASE("synth extends and verifies") {
    const auto r = run({"synth", "--G", "3", "--K", "2", "--M", "8", "--N", "2"});
    REQUIRE(r.code == 0);
    const auto j = r.doc();
    CHECK(j["extension"] == 3);
    CHECK(j["extended"]["M"] == 24);
    CHECK(j["extended"]["N"] == 6);
    CHECK(j["d"] == 4);
    CHECK(j["verification"]["pass"] == true);
  }

  TEST_CASE("synth writes matrices and is deterministic") {
    const auto dir = std::filesystem::temp_directory_path() / "iadof_cli_dump";
    std::filesystem::remove_all(dir);
    const std::vector<std::string> args{"synth", "--G", "3", "--K", "1", "--M", "5", "--N", "7", "--seed", "7",
                                        "--dump", dir.string()};
    const auto a = run(args);
    REQUIRE(a.code == 0);
    const auto j = a.doc();
    CHECK(j["verification"]["pass"] == true);
    CHECK(j["verification"]["zf_residual"].get<double>() <= 1e-8);
    CHECK(std::filesystem::exists(dir / "H_1_1_2.txt"));
    CHECK(std::filesystem::exists(dir / "U_3_1.txt"));
    CHECK(std::filesystem::exists(dir / "V_2.txt"));
    CHECK(run(args).out == a.out);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("synth refuses Region I") {
    const auto r = run({"synth", "--G", "3", "--K", "2", "--M", "17", "--N", "5"});
    CHECK(r.code == 3);
    const auto e = r.error();
    CHECK(e["error"] == "refused");
    CHECK(e["detail"]["region"]["region"] == "I");
  }

  TEST_CASE("sweep bounds grid") {
    const std::vector<std::string> args{"sweep", "--G", "3", "--K", "2", "--M", "1..30", "--N", "1..30", "--mode",
                                        "bounds"};
    const auto r = run(args);
    REQUIRE(r.code == 0);
    std::stringstream ss(r.out);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "M,N,region,n,subcase,limit_point,d_decom,d_proper,d_quantity,d_upper,d_upper_approx,achievable_by");
    int rows = 0;
    std::int64_t prev = 0;
    while (std::getline(ss, line)) {
      const auto f = split_line(line);
      REQUIRE(f.size() == 12);
      const std::int64_t key = std::stoll(f[0]) * 100 + std::stoll(f[1]);
      CHECK(key > prev);
      prev = key;
      ++rows;
    }
    CHECK(rows == 900);
    CHECK(run(args).out == r.out);
  }

  TEST_CASE("sweep JSON rationals round-trip") {
    const auto r = run({"--json", "sweep", "--G", "3", "--K", "1", "--M", "1..12", "--N", "1..12"});
    REQUIRE(r.code == 0);
    const auto j = r.doc();
    REQUIRE(j["rows"].size() == 144);
    for (const auto& row : j["rows"]) {
      const auto up = iadof::Rat::parse(row["d_upper"].get<std::string>());
      CHECK(up.str() == row["d_upper"].get<std::string>());
      CHECK(up.to_double() == doctest::Approx(row["d_upper_approx"].get<double>()));
      if (!row["d_quantity"].is_null()) {
        const auto q = iadof::Rat::parse(row["d_quantity"].get<std::string>());
        CHECK(q == up);
      }
    }
  }

  TEST_CASE("feasibility sweep forms contiguous bands") {
    const auto r = run({"--json", "sweep", "--G", "3", "--K", "2", "--M", "1..40", "--N", "1..40", "--mode",
                        "feasibility", "--d", "2"});
    REQUIRE(r.code == 0);
    const auto rows = r.doc()["rows"];
    REQUIRE(rows.size() == 1600);
    // 0 infeasible, 1 asymptotic only, 2 linear (proven or conjectured); never decreases along M
    auto band = [](const json& row) {
      if (row["linear"] != "infeasible") return 2;
      return row["asymptotic"] == "feasible" ? 1 : 0;
    };
    for (int n = 0; n < 40; ++n) {
      int runs = 1;
      for (int m = 1; m < 40; ++m) {
        const int prev = band(rows[static_cast<std::size_t>((m - 1) * 40 + n)]);
        const int here = band(rows[static_cast<std::size_t>(m * 40 + n)]);
        CHECK(prev <= here);
        if (here != prev) ++runs;
      }
      CHECK(runs <= 3);
    }
  }
}

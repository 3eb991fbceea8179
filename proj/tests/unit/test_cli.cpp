#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "../../tools/commands.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run dstc_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dstc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "dstc_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string generated(const std::string& family, int R) {
  const auto path = (scratch() / (family + "_" + std::to_string(R) + ".json")).string();
  const auto r = dstc_run({"generate", "--family", family, "--relays", std::to_string(R), "--out", path});
  REQUIRE(r.code == 0);
  return path;
}

}  // namespace

TEST_CASE("cli: generate then verify") {
  for (auto [family, R] : {std::pair{"A2", 2}, std::pair{"A2", 4}, std::pair{"A2", 8}, std::pair{"A2", 16},
                           std::pair{"A3", 4}, std::pair{"A3", 8}, std::pair{"A3", 16}}) {
    const auto path = generated(family, R);
    CHECK(fs::exists(path + ".manifest.json"));
    const auto r = dstc_run({"verify", path, "--samples", "2000"});
    INFO(r.out << r.err);
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
  }
}

TEST_CASE("cli: generate prints the design") {
  const auto r = dstc_run({"generate", "--family", "A2", "--relays", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("-z2*") != std::string::npos);
  CHECK(dstc_run({"generate", "--family", "A2", "--relays", "3"}).code == 2);
  CHECK(dstc_run({"generate", "--family", "A3", "--relays", "2"}).code == 2);
  CHECK(dstc_run({"generate", "--family", "B7", "--relays", "4"}).code == 2);
  CHECK(dstc_run({"frobnicate"}).code == 2);
}

TEST_CASE("cli: verify reports damaged designs") {
  const auto path = generated("A3", 4);
  auto j = nlohmann::json::parse(slurp(path));
  j["cells"][1][2]["sign"] = -j["cells"][1][2]["sign"].get<int>();
  const auto bad = (scratch() / "flipped.json").string();
  std::ofstream(bad) << j.dump(2);
  const auto r = dstc_run({"verify", bad, "--no-diversity"});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);

  const std::string text = slurp(path);
  const auto cut = (scratch() / "truncated.json").string();
  std::ofstream(cut) << text.substr(0, text.size() / 3);
  const auto t = dstc_run({"verify", cut});
  CHECK(t.code == 2);
  CHECK_FALSE(t.err.empty());

  const auto json_out = (scratch() / "report.json").string();
  CHECK(dstc_run({"verify", path, "--json", json_out}).code == 0);
  CHECK(nlohmann::json::parse(slurp(json_out)).is_object());
}

TEST_CASE("cli: decode-bench") {
  const auto path = generated("A3", 4);
  const auto csv = (scratch() / "bench.csv").string();
  const auto r = dstc_run({"decode-bench", path, "--m", "2", "--trials", "500", "--seed", "4", "--out", csv});
  INFO(r.out << r.err);
  CHECK(r.code == 0);
  const std::string body = slurp(csv);
  CHECK(body.rfind("family,R,m,trials,group_search_dim,joint_search_dim", 0) == 0);
  CHECK(body.find("A3,4,2,500,2,8,4,256,ran,1,0,256,") != std::string::npos);
}

TEST_CASE("cli: simulate is reproducible") {
  const auto path = generated("A2", 4);
  const auto a = (scratch() / "sim_a.csv").string();
  const auto b = (scratch() / "sim_b.csv").string();
  const std::vector<std::string> common = {"simulate", path, "--snr", "0,10", "--trials", "300", "--seed", "17"};
  auto args = common;
  args.insert(args.end(), {"--out", a});
  CHECK(dstc_run(args).code == 0);
  args = common;
  args.insert(args.end(), {"--out", b, "--threads", "2"});
  CHECK(dstc_run(args).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(fs::exists(a + ".manifest.json"));

  const auto r = dstc_run({"simulate", path, "--snr", "5", "--trials", "10", "--gnuplot"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("# snr_db ser", 0) == 0);
}

TEST_CASE("cli: missing rotation file") {
  const auto path = generated("A2", 4);
  const auto r = dstc_run({"simulate", path, "--rotation", "file:/nonexistent/rot.txt", "--trials", "5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("/nonexistent/rot.txt") != std::string::npos);
}

TEST_CASE("cli: file digest") {
  const auto p = scratch() / "digest.txt";
  std::ofstream(p) << "abc";
  CHECK(dstc::cli::file_digest(p.string()) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(dstc::cli::file_digest("/nonexistent/x").empty());
}

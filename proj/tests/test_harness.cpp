#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mstore/harness.hpp"

using namespace mstore;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kDataDir = MSTORE_DATA_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mstore_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::string write(const std::string& name, const std::string& content) const {
    auto file = path / name;
    std::ofstream out(file, std::ios::binary);
    out << content;
    return file.string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// tiny two-store script around a one-entity schema, for explain/exit tests
std::string minimal_schema() {
  return R"({"entities":[{"name":"Items","fields":[
    {"name":"id","kind":"integer","pk":true},{"name":"label","kind":"text"}]}],
    "stores":[{"location":"alpha","privacy":"private","kind":"embedded"},
              {"location":"beta","privacy":"public","kind":"embedded"}]})";
}

}  // namespace

TEST_CASE("cmd_validate exit codes and output") {
  TempDir tmp;

  SUBCASE("bundled demo schema is valid and silent") {
    std::ostringstream out;
    CHECK(harness::cmd_validate(kDataDir + "/demo_schema.json", out) == harness::kExitOk);
    CHECK(out.str().empty());
  }
  SUBCASE("unresolved relation target prints one ERROR line") {
    auto path = tmp.write("bad.json", R"({"entities":[
      {"name":"Groups","fields":[{"name":"id_group","kind":"integer","pk":true}],
       "relations":[{"name":"group_students","kind":"one_to_many","target":"Students","foreign_key":"group_id"}]}]})");
    std::ostringstream out;
    CHECK(harness::cmd_validate(path, out) == harness::kExitDomain);
    auto text = out.str();
    CHECK(text.starts_with("ERROR Groups.group_students: UnresolvedTarget"));
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  }
  SUBCASE("malformed JSON exits 2") {
    auto path = tmp.write("broken.json", "{ not json");
    std::ostringstream out;
    CHECK(harness::cmd_validate(path, out) == harness::kExitInput);
  }
  SUBCASE("missing file exits 2") {
    std::ostringstream out;
    CHECK(harness::cmd_validate((tmp.path / "absent.json").string(), out) == harness::kExitInput);
  }
  SUBCASE("descriptor invariant violations exit 1") {
    auto path = tmp.write("nopk.json",
                          R"({"entities":[{"name":"A","fields":[{"name":"id","kind":"integer"}]}]})");
    std::ostringstream out;
    CHECK(harness::cmd_validate(path, out) == harness::kExitDomain);
    CHECK(out.str().starts_with("ERROR schema:"));
  }
}

TEST_CASE("cmd_run replays the bundled demo deterministically") {
  TempDir tmp;
  auto report_a = (tmp.path / "a.json").string();
  auto report_b = (tmp.path / "b.json").string();
  std::ostringstream out, err;
  REQUIRE(harness::cmd_run(kDataDir + "/demo_script.json", report_a, false, out, err) ==
          harness::kExitOk);
  REQUIRE(harness::cmd_run(kDataDir + "/demo_script.json", report_b, false, out, err) ==
          harness::kExitOk);
  CHECK(slurp(report_a) == slurp(report_b));

  auto report = json::parse(slurp(report_a));
  CHECK(report["report_version"] == 1);
  CHECK(report["ops"].size() == 19);
  CHECK(report["integrity"].empty());

  SUBCASE("placement decisions are argmin-consistent with their own scores") {
    int decisions = 0;
    for (const auto& op : report["ops"]) {
      if (!op.contains("placement")) continue;
      ++decisions;
      const auto& placement = op["placement"];
      double chosen_total = placement["scores"][placement["chosen"].get<std::string>()]["total"];
      for (const auto& [location, score] : placement["scores"].items()) {
        CHECK(chosen_total <= score["total"].get<double>());
        // the breakdown adds up
        double sum = score["transfer"].get<double>() + score["load"].get<double>() +
                     score["clients"].get<double>() + score["ewma"].get<double>();
        CHECK(score["total"].get<double>() == doctest::Approx(sum).epsilon(1e-12));
      }
    }
    CHECK(decisions == 5);  // five policy-placed inserts in the demo
  }
  SUBCASE("expected failures are recorded, not fatal") {
    CHECK(report["ops"][14]["status"] == "expected_error");
    CHECK(report["ops"][14]["error"]["code"] == "RestrictViolation");
    CHECK(report["ops"][15]["status"] == "expected_error");
    CHECK(report["ops"][15]["error"]["code"] == "ConstraintViolation");
  }
  SUBCASE("per-store telemetry is present") {
    CHECK(report["stores"]["private1"]["op_count"].get<int>() > 0);
    CHECK(report["stores"]["public1"]["mean_latency"].get<double>() == doctest::Approx(0.02));
  }
}

TEST_CASE("cmd_run edge cases") {
  TempDir tmp;
  tmp.write("schema.json", minimal_schema());

  SUBCASE("empty ops produce an empty, clean report") {
    auto script = tmp.write("empty.json", R"({"schema":"schema.json","ops":[]})");
    std::ostringstream out, err;
    CHECK(harness::cmd_run(script, std::nullopt, false, out, err) == harness::kExitOk);
    auto report = json::parse(out.str());
    CHECK(report["ops"].empty());
    CHECK(report["integrity"].empty());
  }
  SUBCASE("a fatal op error stops the run with exit 1") {
    auto script = tmp.write("fatal.json", R"({"schema":"schema.json","ops":[
      {"op":"insert","entity":"Items","values":{"id":1,"label":"x"},"location":"alpha"},
      {"op":"insert","entity":"Items","values":{"id":1,"label":"y"},"location":"beta"},
      {"op":"insert","entity":"Items","values":{"id":2,"label":"z"},"location":"alpha"}]})");
    std::ostringstream out, err;
    CHECK(harness::cmd_run(script, std::nullopt, false, out, err) == harness::kExitDomain);
    auto report = json::parse(out.str());
    CHECK(report["ops"].size() == 2);  // stopped at the duplicate key
    CHECK(report["ops"][1]["status"] == "error");
    CHECK(report["ops"][1]["error"]["code"] == "ConstraintViolation");
  }
  SUBCASE("an op expected to fail but succeeding is fatal") {
    auto script = tmp.write("surprise.json", R"({"schema":"schema.json","ops":[
      {"op":"insert","entity":"Items","values":{"id":1,"label":"x"},"location":"alpha","expect_error":true}]})");
    std::ostringstream out, err;
    CHECK(harness::cmd_run(script, std::nullopt, false, out, err) == harness::kExitDomain);
  }
  SUBCASE("unknown script keys exit 2") {
    auto script = tmp.write("extra.json", R"({"schema":"schema.json","ops":[],"color":"red"})");
    std::ostringstream out, err;
    CHECK(harness::cmd_run(script, std::nullopt, false, out, err) == harness::kExitInput);
  }
  SUBCASE("unknown op kinds exit 2") {
    auto script = tmp.write("vacuum.json", R"({"schema":"schema.json","ops":[{"op":"vacuum"}]})");
    std::ostringstream out, err;
    CHECK(harness::cmd_run(script, std::nullopt, false, out, err) == harness::kExitInput);
  }
  SUBCASE("missing script exits 2") {
    std::ostringstream out, err;
    CHECK(harness::cmd_run((tmp.path / "gone.json").string(), std::nullopt, false, out, err) ==
          harness::kExitInput);
  }
}

TEST_CASE("cmd_explain") {
  TempDir tmp;

  SUBCASE("equal metrics tie toward the lexicographically first store") {
    tmp.write("schema.json", minimal_schema());
    auto script = tmp.write("tie.json", R"({"schema":"schema.json","ops":[],
      "stores":{"alpha":{"bandwidth":1000000.0},"beta":{"bandwidth":1000000.0}}})");
    std::ostringstream out, err;
    CHECK(harness::cmd_explain(script, "Items", 1024, out, err) == harness::kExitOk);
    std::istringstream lines(out.str());
    std::string first, second;
    std::getline(lines, first);
    std::getline(lines, second);
    CHECK(first.starts_with("alpha\t"));
    CHECK(first.ends_with("\t*"));
    CHECK(second.starts_with("beta\t"));
    CHECK(!second.ends_with("\t*"));
    // equal costs on both lines
    CHECK(first.substr(6, 8) == second.substr(5, 8));
  }
  SUBCASE("the worked score prints as 1.135000") {
    tmp.write("schema.json", R"({"entities":[{"name":"Secrets","confidentiality":"private_only",
      "fields":[{"name":"id","kind":"integer","pk":true}]}],
      "stores":[{"location":"alpha","privacy":"private","kind":"embedded"}]})");
    auto script = tmp.write("worked.json", R"({"schema":"schema.json","ops":[],
      "stores":{"alpha":{"bandwidth":1000000.0,"server_load":0.5,"active_clients":10,"latency_ewma":0.1}}})");
    std::ostringstream out, err;
    CHECK(harness::cmd_explain(script, "Secrets", 1000000, out, err) == harness::kExitOk);
    CHECK(out.str().find("alpha\t1.135000\t") != std::string::npos);
    CHECK(out.str().find("transfer=1.000000 load=0.025000 clients=0.010000 ewma=0.100000") !=
          std::string::npos);
  }
  SUBCASE("a private_only entity with only public stores exits 1") {
    tmp.write("schema.json", R"({"entities":[{"name":"Secrets","confidentiality":"private_only",
      "fields":[{"name":"id","kind":"integer","pk":true}]}],
      "stores":[{"location":"beta","privacy":"public","kind":"embedded"}]})");
    auto script = tmp.write("blocked.json", R"({"schema":"schema.json","ops":[]})");
    std::ostringstream out, err;
    CHECK(harness::cmd_explain(script, "Secrets", 0, out, err) == harness::kExitDomain);
  }
  SUBCASE("unknown entity exits 1, unreadable script exits 2") {
    tmp.write("schema.json", minimal_schema());
    auto script = tmp.write("s.json", R"({"schema":"schema.json","ops":[]})");
    std::ostringstream out, err;
    CHECK(harness::cmd_explain(script, "Nothing", 0, out, err) == harness::kExitDomain);
    CHECK(harness::cmd_explain((tmp.path / "gone.json").string(), "Items", 0, out, err) ==
          harness::kExitInput);
  }
}

TEST_CASE("ineligible stores are listed with the reason") {
  TempDir tmp;
  tmp.write("schema.json", R"({"entities":[{"name":"Secrets","confidentiality":"private_only",
    "fields":[{"name":"id","kind":"integer","pk":true}]}],
    "stores":[{"location":"alpha","privacy":"private","kind":"embedded"},
              {"location":"beta","privacy":"public","kind":"embedded"}]})");
  auto script = tmp.write("s.json", R"({"schema":"schema.json","ops":[]})");
  std::ostringstream out, err;
  CHECK(harness::cmd_explain(script, "Secrets", 64, out, err) == harness::kExitOk);
  CHECK(out.str().find("beta\tineligible\tconfidentiality\n") != std::string::npos);
}

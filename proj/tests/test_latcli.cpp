#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

#include "hkl/latcli.hpp"
#include "lattices.hpp"

using namespace hkl;

namespace {

std::string c20_text() { return builtin_config_text("c20"); }

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

// message of the Error thrown by f, with its code
std::pair<ErrorCode, std::string> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return {e.code(), e.what()};
  }
  FAIL("no error thrown");
  return {};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& text) {
    static int serial = 0;
    auto name = "hkl_test_" + std::to_string(::getpid()) + "_" + std::to_string(serial++) + ".json";
    path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream(path) << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("builtin configs") {
  auto c = builtin_config("c20");
  CHECK(c.lattice.gram() == fx::d20().gram());
  CHECK(c.matrix("A") == fx::A());
  CHECK(c.matrix("B") == fx::B());
  CHECK(c.cls("lambda") == make_vec({0, 1}));
  auto H = c.gluing_subgroup();
  REQUIRE(H);
  CHECK(H->order == 20);

  auto m = builtin_config("c_m1");
  CHECK(m.lattice.gram() == fx::m1().gram());
  CHECK(m.cls("nu") == make_vec({3, -1, 2}));
  CHECK(m.matrix("G1") == fx::G1());

  CHECK_FALSE(builtin_config("c546").gluing);
  CHECK(builtin_config("m1_cubic").lattice.role() == LatticeRole::cubic);
  CHECK_THROWS_AS(builtin_config("m1_cubic").family(), Error);

  auto [code, msg] = error_of([] { builtin_config("c_nonsyz"); });
  CHECK(code == ErrorCode::unavailable);
  CHECK(error_of([] { builtin_config("nope"); }).first == ErrorCode::input);
}

TEST_CASE("round trip") {
  for (auto& name : builtin_config_names()) {
    if (name == "c_nonsyz") continue;
    CAPTURE(name);
    auto a = builtin_config(name);
    auto text = dump_config(a);
    auto b = parse_config(text);
    CHECK(b.lattice.gram() == a.lattice.gram());
    CHECK(b.lattice.basis_names() == a.lattice.basis_names());
    CHECK(b.classes == a.classes);
    CHECK(b.matrices == a.matrices);
    CHECK(b.gluing == a.gluing);
    CHECK(b.plucker == a.plucker);
    CHECK(dump_config(b) == text);
  }
}

TEST_CASE("validation errors name the field and line") {
  auto bad = replace(c20_text(), "[[6, 2], [2, -6]]", "[[6, 2],\n [3, -6]]");
  auto [code, msg] = error_of([&] { parse_config(bad, "x.json"); });
  CHECK(code == ErrorCode::validation);
  CHECK(msg.find("x.json:") == 0);
  CHECK(msg.find("gram") != std::string::npos);
  // the asymmetric entry sits on the line after "gram"
  std::istringstream lines(bad);
  std::string line;
  int n = 0, gram_line = 0;
  while (std::getline(lines, line)) {
    ++n;
    if (line.find("\"gram\"") != std::string::npos) gram_line = n;
  }
  CHECK(msg.find(":" + std::to_string(gram_line) + ":") != std::string::npos);

  // (g + 2 lambda)/7 pairs with g to 10/7
  auto glue = replace(c20_text(), R"(["1/5", "2/5"])", R"(["1/7", "2/7"])");
  RatVec v{Rat(1, 7), Rat(2, 7)};
  CHECK_FALSE(in_dual(fx::d20(), v));
  CHECK(fx::d20().pair(v, RatVec{1, 0}) == Rat(10, 7));
  auto e = error_of([&] { parse_config(glue); });
  CHECK(e.first == ErrorCode::validation);
  CHECK(e.second.find("gluing[0]") != std::string::npos);

  auto deg = replace(c20_text(), "[[6, 2], [2, -6]]", "[[1, 1], [1, 1]]");
  CHECK(error_of([&] { parse_config(deg); }).first == ErrorCode::validation);

  auto posdef = replace(c20_text(), "[[6, 2], [2, -6]]", "[[6, 2], [2, 6]]");
  auto pd = error_of([&] { parse_config(posdef); });
  CHECK(pd.first == ErrorCode::validation);
  CHECK(pd.second.find("signature") != std::string::npos);

  auto notiso = replace(c20_text(), "[[3, -2], [4, -3]]", "[[1, 1], [0, 1]]");
  auto ni = error_of([&] { parse_config(notiso); });
  CHECK(ni.first == ErrorCode::validation);
  CHECK(ni.second.find("matrices.A") != std::string::npos);

  auto unknown = replace(c20_text(), "\"label\"", "\"colour\": 1, \"label\"");
  CHECK(error_of([&] { parse_config(unknown); }).first == ErrorCode::validation);

  auto poswall = replace(c20_text(), "\"square\": -2", "\"square\": 2");
  CHECK(error_of([&] { parse_config(poswall); }).first == ErrorCode::validation);
}

TEST_CASE("parse errors") {
  CHECK(error_of([] { parse_config("{ not json"); }).first == ErrorCode::parse);
  CHECK(error_of([] { parse_config("[]"); }).first == ErrorCode::parse);
  auto zero = replace(c20_text(), "\"1/5\"", "\"1/0\"");
  CHECK(error_of([&] { parse_config(zero); }).first == ErrorCode::parse);
  auto word = replace(c20_text(), "\"1/5\"", "\"abc\"");
  CHECK(error_of([&] { parse_config(word); }).first == ErrorCode::parse);
  auto fl = replace(c20_text(), "[[6, 2]", "[[6.5, 2]");
  CHECK(error_of([&] { parse_config(fl); }).first == ErrorCode::parse);
  // integers may be given as strings
  auto big = replace(c20_text(), "[[6, 2]", "[[\"6\", 2]");
  CHECK(parse_config(big).lattice.gram() == fx::d20().gram());
  CHECK(error_of([] { load_config("/nonexistent/x.json"); }).first == ErrorCode::input);
}

TEST_CASE("fixtures") {
  CHECK(reprint_fixtures() == fixture_text());
  CHECK(format_matrix(fx::A()) == "[[3,-2],[4,-3]]");
  CHECK(fixture_text().find("G4 = [[1,0,0],[2,-1,0],[0,0,1]]") != std::string::npos);
}

TEST_CASE("reports") {
  ScenarioReport empty{"empty", {}};
  CHECK(empty.exit_code() == 0);
  auto j = nlohmann::json::parse(emit_report(empty, ReportFormat::json));
  CHECK(j["schema_version"] == report_schema_version);
  CHECK(j["checks"].empty());
  CHECK(j["exit_code"] == 0);

  ScenarioReport r{"r", {{"a", "x", CheckStatus::pass}, {"b", "y", CheckStatus::skipped}}};
  CHECK(r.exit_code() == 0);
  r.checks.push_back({"c", "z", CheckStatus::inconclusive});
  CHECK(r.exit_code() == 2);
  r.checks.push_back({"d", "w", CheckStatus::fail});
  CHECK(r.exit_code() == 1);
  auto jr = nlohmann::json::parse(emit_report(r, ReportFormat::json));
  CHECK(jr["exit_code"] == 1);
  CHECK(jr["checks"].size() == 4);
  CHECK(emit_report(r, ReportFormat::text).find("FAIL") != std::string::npos);

  auto e = error_of([] { run_scenario("nope"); });
  CHECK(e.first == ErrorCode::input);
  for (auto& s : builtin_scenarios()) CHECK(e.second.find(s) != std::string::npos);
}

TEST_CASE("scenarios match the golden reports") {
  for (auto name : {"c20", "c_m1"}) {
    CAPTURE(name);
    auto r = run_scenario(name);
    CHECK(r.exit_code() == 0);
    auto text = emit_report(r, ReportFormat::json);
    CHECK(text == emit_report(run_scenario(name), ReportFormat::json));
    CHECK(text == slurp(std::string(HKL_GOLDEN_DIR) + "/" + name + ".json"));
    for (auto& c : r.checks) CHECK_FALSE(c.anchor.empty());
  }
  auto d = run_scenario("discriminants");
  CHECK(d.exit_code() == 0);
}

TEST_CASE("config file scenario") {
  TempFile f(c20_text());
  auto r = run_scenario(f.path);
  CHECK(r.exit_code() == 0);
  bool orbits = false;
  for (auto& c : r.checks) {
    CAPTURE(c.id);
    CHECK(c.status == CheckStatus::pass);
    if (c.id == "polarization-orbits") orbits = c.computed.find("3g-2lambda") != std::string::npos;
  }
  CHECK(orbits);

  TempFile cubic(builtin_config_text("m1_cubic"));
  auto rc = run_scenario(cubic.path);
  CHECK(rc.exit_code() == 0);
  long skipped = 0;
  for (auto& c : rc.checks) skipped += c.status == CheckStatus::skipped;
  CHECK(skipped > 0);

  TempFile bad("{");
  CHECK(error_of([&] { run_scenario(bad.path); }).first == ErrorCode::parse);
}

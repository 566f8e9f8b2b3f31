#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// Runs the tool with stderr folded into stdout when `merge` is set.
Run run(const std::string& args, bool merge = false) {
  const std::string cmd = std::string(EVASION_KIT_BIN) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string scenario(const char* name) { return std::string(EVASION_SCENARIO_DIR) + "/" + name + ".json"; }

}  // namespace

TEST_CASE("analyze reports the split scenario") {
  const Run r = run("analyze " + scenario("split"));
  REQUIRE(r.status == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["exists"] == true);
  CHECK(doc["limit_cardinality"] == 2);
  CHECK(doc["witnesses"].size() == 2);
}

TEST_CASE("generate output feeds analyze through stdin") {
  const Run gen = run("generate close");
  REQUIRE(gen.status == 0);
  const Run r = run("generate close | " + std::string(EVASION_KIT_BIN) + " analyze - --mode oracle");
  REQUIRE(r.status == 0);
  CHECK(nlohmann::json::parse(r.out)["exists"] == false);
}

TEST_CASE("exit codes") {
  CHECK(run("").status == 2);
  CHECK(run("analyze").status == 2);
  CHECK(run("analyze " + scenario("split") + " --mode sideways").status == 2);
  const Run missing = run("analyze /nonexistent.json", true);
  CHECK(missing.status == 1);
  CHECK(nlohmann::json::parse(missing.out)["error"] == "unreadable input");
  CHECK(run("d1 " + scenario("split")).status == 1);
  CHECK(run("witness " + scenario("split") + " --element 9").status == 1);
}

TEST_CASE("reports do not depend on the thread count") {
  const Run one = run("--threads 1 analyze " + scenario("annuli"));
  const Run many = run("--threads 4 analyze " + scenario("annuli"));
  REQUIRE(one.status == 0);
  CHECK(one.out == many.out);
}

TEST_CASE("compare, witness, events and boundary data") {
  const Run cmp = run("compare " + scenario("split"));
  CHECK(cmp.status == 0);
  CHECK(nlohmann::json::parse(cmp.out)["agree"] == true);
  const Run w = run("witness " + scenario("split") + " --element 1");
  REQUIRE(w.status == 0);
  CHECK(nlohmann::json::parse(w.out)["samples"].size() > 2);
  const Run ev = run("events " + scenario("split"));
  REQUIRE(ev.status == 0);
  CHECK(nlohmann::json::parse(ev.out).size() == 1);
  const Run bd = run("boundary-data " + scenario("split"));
  REQUIRE(bd.status == 0);
  CHECK(nlohmann::json::parse(bd.out).contains("cobordisms"));
}

TEST_CASE("options may come from a config file") {
  const std::string path = "/tmp/evasion_cli_test.toml";
  FILE* f = fopen(path.c_str(), "w");
  REQUIRE(f != nullptr);
  fputs("witness-cap = 1\n", f);
  fclose(f);
  const Run r = run("--config " + path + " analyze " + scenario("split"));
  REQUIRE(r.status == 0);
  CHECK(nlohmann::json::parse(r.out)["witnesses"].size() == 1);
  const Run flag = run("--config " + path + " --witness-cap 2 analyze " + scenario("split"));
  CHECK(nlohmann::json::parse(flag.out)["witnesses"].size() == 2);
  std::remove(path.c_str());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Run {
  std::string out;
  int code = -1;
};

Run run(const std::string& args) {
  Run r;
  std::string cmd = std::string(SPARTLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

nlohmann::json result_of(const Run& r) { return nlohmann::json::parse(r.out)["result"]; }

}  // namespace

TEST_CASE("terms") {
  auto r = run("terms --preset fibonacci --to 10");
  CHECK(r.code == 0);
  CHECK(r.out.size() >= 6);
  CHECK(r.out.substr(r.out.size() - 6) == "10,55\n");
  auto zero = run("terms --preset lucas --to 0");
  CHECK(zero.out.find("n,U_n\n0,2\n") != std::string::npos);
  CHECK(zero.out.rfind("# spartlab 0.1.0\n# config: ", 0) == 0);
}

TEST_CASE("malformed spec exits with 2") {
  auto bad = write_temp("spartlab_bad_spec.json", "{\"coeffs\": [1, 1], \"initial\": ");
  CHECK(run("terms --spec " + bad).code == 2);
  CHECK(run("terms --preset nope").code == 2);
  CHECK(run("ksums --window 5").code == 2);
  CHECK(run("bogus").code == 2);
}

TEST_CASE("spectral reports") {
  auto fib = result_of(run("spectral --preset fibonacci"));
  CHECK(fib["dominant"] == "yes");
  CHECK(fib["degenerate"] == "no");
  CHECK(fib["thm2_hypotheses"]["status"] == "pass");
  CHECK(std::stod(fib["dominant_root"].get<std::string>()) == doctest::Approx(1.6180339887));
  auto deg = write_temp("spartlab_deg.json", R"({"name":"d","coeffs":[0,4],"initial":[1,1]})");
  auto r = run("spectral --spec " + deg);
  CHECK(r.code == 0);
  CHECK(result_of(r)["degenerate"] == "yes");
  CHECK(result_of(r)["thm1_hypotheses"]["status"] == "fail");
}

TEST_CASE("hypothesis failures exit with 4") {
  auto two = write_temp("spartlab_two.json", R"({"name":"t","coeffs":[3,-2],"initial":[0,1]})");
  CHECK(run("thm2 --spec " + two + " --window 1:20 --primes 3 --j0 3").code == 4);
}

TEST_CASE("effort caps") {
  CHECK(run("vanishing --k 10 --window 0:200").code == 5);
  auto tight = run("thm3 --k 2 --window 1:80 --trial-bound 10 --rho-iterations 2");
  CHECK(tight.code == 0);
  CHECK(result_of(tight)["unresolved"].get<int>() > 0);
}

TEST_CASE("delta and bounds") {
  auto d = result_of(run("delta --preset fibonacci --primes 2,3,5"));
  CHECK(d["delta"] == 0.0);
  CHECK(d["gcd_condition"] == "pass");
  auto b = result_of(run("bounds --sunit-count --s 1 --d 1 --M 1"));
  CHECK(std::stod(b["log10_bound"].get<std::string>()) == doctest::Approx(4.1374e10).epsilon(1e-4));
  auto h = result_of(run("bounds --height --poly 1,-1,-1"));
  CHECK(std::stod(h["height"].get<std::string>()) == doctest::Approx(0.2406059125));
  CHECK(run("bounds --height --sunit-count").code == 2);
}

TEST_CASE("exponents file output carries config") {
  auto path = (std::filesystem::temp_directory_path() / "spartlab_e.csv").string();
  CHECK(run("exponents --preset fibonacci --k 2 --primes 2,3 --window 1:60 --out " + path).code == 0);
  std::ifstream in(path);
  std::string l1, l2, l3;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  CHECK(l1 == "# spartlab 0.1.0");
  CHECK(l2.rfind("# config: ", 0) == 0);
  CHECK(l3 == "j,value,spart,cofactor,exponent,witness");
}

TEST_CASE("uary, zeros, vanishing, lambda-chain") {
  auto u = result_of(run("uary --n 100"));
  CHECK(u["zeckendorf_valid"] == true);
  CHECK(u["reconstructs"] == true);
  CHECK(result_of(run("zeros --to 30"))["zero_indices"] == nlohmann::json::array({0}));
  CHECK(result_of(run("vanishing --k 3 --window 1:20"))["count"] == 0);
  auto chain = result_of(run("lambda-chain --indices '10;5' --primes 2,3,5"));
  CHECK(chain["forms"].size() == 2);
  CHECK(chain["rearranged_full_form_agrees"] == true);
}

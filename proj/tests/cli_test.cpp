#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "infradius/cli.hpp"
#include "infradius/numerics.hpp"

using namespace infradius;
namespace fs = std::filesystem;

namespace {

struct Fixture {
  fs::path dir;

  Fixture() {
    dir = fs::temp_directory_path() / "infradius_cli_test";
    fs::create_directories(dir);
    write("point_a.json", R"({"type":"discrete","probs":[1,0]})");
    write("point_b.json", R"({"type":"discrete","probs":[0,1]})");
    write("twopoint.json",
          R"({"weights":[0.5,0.5],
              "members":[{"type":"discrete","probs":[1,0]},
                         {"type":"discrete","probs":[0,1]}]})");
    write("gmm_set.json",
          R"({"weights":[0.25,0.25,0.25,0.25],
              "members":[{"type":"gaussian","mu":-5,"sigma":1},
                         {"type":"gaussian","mu":-4.5,"sigma":1},
                         {"type":"gaussian","mu":5,"sigma":1},
                         {"type":"gaussian","mu":6,"sigma":1}]})");
    write("mix.json",
          R"({"type":"mixture","weights":[0.5,0.5],
              "components":[{"type":"gaussian","mu":-1,"sigma":1},
                            {"type":"gaussian","mu":1,"sigma":1}]})");
  }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream out(dir / name);
    out << text;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct RunOutcome {
  int code;
  std::string out;
  std::string err;
};

RunOutcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

double first_json_number(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\":");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 3));
}

}  // namespace

TEST_CASE("divergence of a density with itself prints 0") {
  const Fixture fx;
  const auto r = run({"divergence", "--kind", "kld", "--p", fx.path("point_a.json"),
                      "--q", fx.path("point_a.json")});
  CHECK(r.code == 0);
  CHECK(r.out == "0\n");
}

TEST_CASE("disjoint supports print inf") {
  const Fixture fx;
  const auto r = run({"divergence", "--kind", "kld", "--p", fx.path("point_a.json"),
                      "--q", fx.path("point_b.json")});
  CHECK(r.code == 0);
  CHECK(r.out == "inf\n");
}

TEST_CASE("radius at alpha = inf on the disjoint two-point set") {
  const Fixture fx;
  const auto nats = run({"radius", "--alpha", "inf", "--set", fx.path("twopoint.json")});
  CHECK(nats.code == 0);
  CHECK(first_json_number(nats.out, "value") == doctest::Approx(kLn2).epsilon(1e-14));

  const auto bits = run({"radius", "--alpha", "inf", "--set", fx.path("twopoint.json"),
                         "--base", "bits"});
  CHECK(first_json_number(bits.out, "value") == 1.0);
}

TEST_CASE("bits output is exactly nats over ln 2") {
  const Fixture fx;
  const auto nats = run({"divergence", "--kind", "skew_jsd", "--alpha", "0.3", "--beta",
                         "0.4", "--p", fx.path("point_a.json"), "--q",
                         fx.path("point_b.json")});
  const auto bits = run({"divergence", "--kind", "skew_jsd", "--alpha", "0.3", "--beta",
                         "0.4", "--p", fx.path("point_a.json"), "--q",
                         fx.path("point_b.json"), "--base", "bits"});
  CHECK(std::stod(bits.out) == std::stod(nats.out) / kLn2);
}

TEST_CASE("validation failures exit with code 2") {
  const Fixture fx;
  CHECK(run({"divergence", "--kind", "kld", "--p", "missing.json", "--q",
             fx.path("point_a.json")})
            .code == 2);
  CHECK(run({"divergence", "--kind", "nonsense", "--p", fx.path("point_a.json"), "--q",
             fx.path("point_a.json")})
            .code == 2);
  CHECK(run({"bogus-subcommand"}).code == 2);
  fx.write("broken.json", "{not json");
  CHECK(run({"entropy", "--p", fx.path("broken.json")}).code == 2);
}

TEST_CASE("cluster output is byte-identical across runs") {
  const Fixture fx;
  const std::vector<std::string> args = {"cluster", "--set", fx.path("gmm_set.json"),
                                         "--k", "2", "--seed", "7"};
  const auto r1 = run(args);
  const auto r2 = run(args);
  CHECK(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.out.find("iteration,objective,residual") != std::string::npos);
}

TEST_CASE("project subcommand emits the moment-matched member") {
  const Fixture fx;
  const auto r = run({"project", "--p", fx.path("mix.json"), "--family", "gaussian"});
  CHECK(r.code == 0);
  CHECK(first_json_number(r.out, "mu") == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(first_json_number(r.out, "sigma") ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("quantize collapses duplicate components") {
  const Fixture fx;
  fx.write("dupmix.json",
           R"({"type":"mixture","weights":[0.25,0.25,0.25,0.25],
               "components":[{"type":"gaussian","mu":-3.1,"sigma":1},
                             {"type":"gaussian","mu":-2.9,"sigma":1},
                             {"type":"gaussian","mu":4.9,"sigma":1},
                             {"type":"gaussian","mu":5.1,"sigma":1}]})");
  const auto r = run({"quantize", "--mixture", fx.path("dupmix.json"), "--k", "2",
                      "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("simplified_mixture") != std::string::npos);
  CHECK(first_json_number(r.out, "jsd_diagnostic") < 0.05);
}

TEST_CASE("variational radius through the cli") {
  const Fixture fx;
  fx.write("pair.json",
           R"({"weights":[0.5,0.5],
               "members":[{"type":"discrete","probs":[0.7,0.2,0.1]},
                          {"type":"discrete","probs":[0.1,0.4,0.5]}]})");
  const auto r = run({"radius", "--variational", "--mean", "arithmetic", "--divergence",
                      "kld", "--set", fx.path("pair.json")});
  CHECK(r.code == 0);
  const auto closed = run({"radius", "--alpha", "1", "--set", fx.path("pair.json")});
  CHECK(first_json_number(r.out, "value") ==
        doctest::Approx(first_json_number(closed.out, "value")).epsilon(1e-8));
}

TEST_CASE("non-convergence exits with code 3 and still prints the state") {
  const Fixture fx;
  fx.write("triple.json",
           R"({"weights":[0.4,0.3,0.3],
               "members":[{"type":"discrete","probs":[0.7,0.2,0.1]},
                          {"type":"discrete","probs":[0.1,0.4,0.5]},
                          {"type":"discrete","probs":[0.3,0.3,0.4]}]})");
  const auto r = run({"radius", "--variational", "--mean", "{\"kind\":\"renyi\",\"alpha\":4}",
                      "--divergence", "{\"kind\":\"renyi\",\"alpha\":4}", "--max-iters", "1",
                      "--set", fx.path("triple.json")});
  CHECK(r.code == 3);
  CHECK(r.out.find("\"converged\":false") != std::string::npos);
  CHECK(r.out.find("value") != std::string::npos);
}

TEST_CASE("relative radius through the cli") {
  const Fixture fx;
  fx.write("gauss_pair.json",
           R"({"weights":[0.5,0.5],
               "members":[{"type":"gaussian","mu":-1,"sigma":1},
                          {"type":"gaussian","mu":1,"sigma":1}]})");
  const auto r = run({"radius", "--relative", "--family", "gaussian", "--set",
                      fx.path("gauss_pair.json")});
  CHECK(r.code == 0);
  // Constrained centroid is the moment-matched N(0, sqrt 2).
  CHECK(r.out.find("\"centroid\":{") != std::string::npos);
  CHECK(first_json_number(r.out, "mu") == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(first_json_number(r.out, "sigma") ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("thread count does not change the output bytes") {
  const Fixture fx;
  const std::vector<std::string> base_args = {"cluster", "--set", fx.path("gmm_set.json"),
                                              "--k", "2", "--seed", "5"};
  const auto serial = run(base_args);
  auto threaded_args = base_args;
  threaded_args.insert(threaded_args.end(), {"--threads", "4"});
  const auto threaded = run(threaded_args);
  CHECK(serial.out == threaded.out);

  setenv("INFRADIUS_THREADS", "2", 1);
  const auto via_env = run(base_args);
  unsetenv("INFRADIUS_THREADS");
  CHECK(via_env.out == serial.out);

  run({"divergence", "--kind", "kld", "--p", fx.path("point_a.json"), "--q",
       fx.path("point_a.json"), "--threads", "1"});  // restore the default
}

TEST_CASE("the installed binary behaves like the in-process cli") {
  const char* bin = std::getenv("INFRADIUS_CLI");
  if (bin == nullptr) return;  // only wired up under ctest
  const Fixture fx;
  const std::string cmd = std::string(bin) + " divergence --kind kld --p " +
                          fx.path("point_a.json") + " --q " + fx.path("point_a.json");
  std::array<char, 256> buf{};
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  while (fgets(buf.data(), buf.size(), pipe) != nullptr) out += buf.data();
  const int status = pclose(pipe);
  CHECK(status == 0);
  CHECK(out == "0\n");
}

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "semirfd/error.hpp"
#include "semirfd/run.hpp"

using namespace semirfd;
using json = nlohmann::ordered_json;

namespace {
  json run(std::string const& config, ExitStatus expected, RunOptions const& opts = {}) {
    auto const r = execute(config, opts);
    CHECK(r.status == expected);
    return json::parse(r.report);
  }

  json check_named(json const& report, std::string const& name) {
    for (auto const& c : report["checks"]) {
      if (c["name"] == name) {
        return c;
      }
    }
    return nullptr;
  }

  bool all_pass(json const& report) {
    for (auto const& c : report["checks"]) {
      if (c["status"] != "pass") {
        return false;
      }
    }
    return true;
  }

  std::filesystem::path scratch(std::string const& name) {
    auto dir = std::filesystem::temp_directory_path() / "semirfd_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
  }

  void write(std::filesystem::path const& p, std::string const& text) {
    std::ofstream(p) << text;
  }

  std::string slurp(std::filesystem::path const& p) {
    std::ifstream      in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int shell(std::string const& cmd) {
    int const rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("enumerate braid(3)") {
    auto const rep = run(R"J({"command":"enumerate","presentation":"braid(3)","L":4})J",
                         ExitStatus::ok);
    CHECK(rep["tables"]["counts"] == json::array({1, 2, 4, 7, 12}));
    CHECK(all_pass(rep));
    std::vector<std::string> keys;
    for (auto const& [k, v] : rep.items()) {
      keys.push_back(k);
    }
    CHECK(keys == std::vector<std::string>{"config", "checks", "tables", "ms"});
    CHECK(rep["config"]["presentation"] == "braid(3)");
    CHECK(rep["ms"] == 0.0);
  }

  TEST_CASE("fdapprox on ℕ") {
    auto const rep
        = run(R"J({"command":"fdapprox","presentation":"nat(1)","F":[2],"L":5})J", ExitStatus::ok);
    CHECK(rep["tables"]["kernel_set"] == json::array({3, 4, 5}));
    CHECK(rep["tables"]["Y_dim"] == 3);
    CHECK(all_pass(rep));

    auto const fam = run(R"J({"command":"fdapprox","presentation":"braid(3)","F":["s1.s2"],
                             "L":4,"families":{"max_length":2,"max_size":2}})J",
                         ExitStatus::ok);
    CHECK(fam["tables"]["families"]["mismatches"] == 0);
    CHECK(fam["tables"]["families"]["tested"] == 7 + 21);
  }

  TEST_CASE("funcalg on the Hardy space") {
    auto const rep = run(R"J({"command":"funcalg","kernel":"hardy","phi":"1+z","D":200,
                             "expect_norm":2.0,"expect_tol":0.01})J",
                         ExitStatus::ok);
    double const n = rep["tables"]["norm_lower"];
    CHECK(n >= 1.99);
    CHECK(n <= 2.0);
    CHECK(rep["tables"]["sup_norm_grid"] == 2.0);
    CHECK(check_named(rep, "expected_norm")["status"] == "pass");
    auto const& profile = rep["tables"]["norm_profile"];
    REQUIRE(profile.size() == 4);
    CHECK(profile[0]["D"] == 10);

    auto const miss = run(R"J({"command":"funcalg","kernel":"hardy","phi":"1+z","D":10,
                              "expect_norm":3.0})J",
                          ExitStatus::invariant_failure);
    CHECK(check_named(miss, "expected_norm")["status"] == "fail");

    auto const two = run(R"J({"command":"funcalg","kernel":{"name":"drury_arveson"},
                             "phi":"1 + z1 + z1z2","D":8,"F":[2]})J",
                         ExitStatus::ok);
    CHECK(two["tables"]["d"] == 2);
    CHECK(two["tables"]["quotient_dimension"] == 6);
    CHECK(two["tables"]["phi"] == "1 + z1 + z1z2");

    auto const custom = run(R"J({"command":"funcalg","kernel":{"coefficients":[1,1,1,1,1,1,1]},
                                "phi":[{"exponents":[1],"re":1}],"D":5})J",
                            ExitStatus::ok);
    CHECK(custom["tables"]["kernel"] == "custom");
  }

  TEST_CASE("divisors and coaction") {
    auto const div = run(R"J({"command":"divisors","presentation":"nat(2)","L":4,
                             "elements":[[1,2]],"lcm":[[[1,0],[0,1]]]})J",
                         ExitStatus::ok);
    CHECK(div["tables"]["divisors"][0]["right_count"] == 6);
    CHECK(div["tables"]["lcm"][0]["lcm"] == json::array({1, 1}));
    CHECK(check_named(div, "divisor_product_formula")["status"] == "pass");

    auto const co = run(R"J({"command":"coaction","presentation":"braid(3)","map":"length",
                            "L_P":3,"L_Q":4,"F":[2]})J",
                        ExitStatus::ok);
    CHECK(co["tables"]["qf"]["cardinality"] == 7);
    CHECK(check_named(co, "fell_isometry")["status"] == "pass");
    CHECK(check_named(co, "fell_intertwining[s2]")["status"] == "pass");

    auto const custom = run(R"J({"command":"coaction","presentation":"braid(3)",
                                "map":{"target":"nat(1)","images":{"s1":2,"s2":2}},
                                "L_P":2,"samples":10})J",
                            ExitStatus::ok);
    CHECK(custom["tables"]["L_Q"] == 5);
    CHECK(custom["tables"]["generator_images"] == json::array({2, 2}));
  }

  TEST_CASE("presentation and element sources") {
    auto const raag = resolve_presentation(
        json::parse(R"J({"builtin":"raag","vertices":["a","b","c"],"edges":[["a","b"]]})J"));
    CHECK(raag.relations().size() == 1);
    CHECK(resolve_presentation(json::parse(R"J({"builtin":"free","n":3})J")).number_of_generators()
          == 3);
    auto const inline_doc = resolve_presentation(
        json::parse(R"J({"generators":["p","q"],"relations":[["p.q","q.p"]]})J"));
    CHECK(inline_doc.generators() == std::vector<std::string>{"p", "q"});
    auto const path = scratch("pres.json");
    write(path, R"J({"generators":["u"]})J");
    CHECK(resolve_presentation(json(path.string())).number_of_generators() == 1);
    CHECK(resolve_presentation(json{{"file", path.string()}}).number_of_generators() == 1);
    CHECK_THROWS_AS(resolve_presentation(json("no/such/file.json")), ParseError);

    auto const t = enumerate(builtin::nat(2), 4);
    CHECK(resolve_element(*t, json::parse("[2,1]")) == t->element("x.x.y"));
    CHECK(resolve_element(*t, json("y.x")) == t->element("x.y"));
    CHECK_THROWS_AS(resolve_element(*t, json(3)), ParseError);
    CHECK_THROWS_AS(resolve_element(*t, json::parse("[1]")), ParseError);
    CHECK_THROWS_AS(resolve_element(*t, json::parse("{}")), ParseError);
  }

  TEST_CASE("config errors exit with status 2") {
    for (auto const* bad : {
             "not json",
             "[1,2]",
             R"J({"presentation":"braid(3)","L":4})J",
             R"J({"command":"draw","presentation":"braid(3)"})J",
             R"J({"command":"enumerate","presentation":"braid(3)"})J",
             R"J({"command":"enumerate","presentation":"braid(3)","L":0})J",
             R"J({"command":"enumerate","presentation":"braid(3)","L":"4"})J",
             R"J({"command":"enumerate","presentation":"braid(3)","L":4,"colour":1})J",
             R"J({"command":"enumerate","presentation":{"file":"/no/such.json"},"L":2})J",
             R"J({"command":"enumerate","presentation":"tree(3)","L":2})J",
             R"J({"command":"fdapprox","presentation":"nat(1)","F":[]})J",
             R"J({"command":"fdapprox","presentation":"nat(1)","F":["y"]})J",
             R"J({"command":"funcalg","kernel":"bergman","phi":"z"})J",
             R"J({"command":"funcalg","kernel":"hardy"})J",
             R"J({"command":"coaction","presentation":"braid(3)","L_P":3,"L_Q":2})J",
         }) {
      CAPTURE(bad);
      auto const rep = run(bad, ExitStatus::config_error);
      CHECK(check_named(rep, "execution")["status"] == "fail");
    }
  }

  TEST_CASE("resource limits exit with status 3") {
    RunOptions opts;
    opts.max_words = 1000;
    auto const rep = run(R"J({"command":"enumerate","presentation":"free(3)","L":12})J",
                         ExitStatus::resource_limit, opts);
    CHECK(check_named(rep, "execution")["witness"].get<std::string>().find("1000")
          != std::string::npos);
  }

  TEST_CASE("failing identities exit with status 1") {
    auto const rep = run(R"J({"command":"enumerate","L":3,
                             "presentation":{"generators":["a","b","c"],
                                             "relations":[["a.b","a.c"]]}})J",
                         ExitStatus::invariant_failure);
    CHECK(check_named(rep, "cancellative")["status"] == "fail");
    CHECK(check_named(rep, "cancellative")["witness"].is_string());

    auto const hom = run(R"J({"command":"coaction","presentation":"braid(3)",
                             "map":"abelianization"})J",
                         ExitStatus::invariant_failure);
    CHECK(check_named(hom, "execution")["witness"].get<std::string>().find("homomorphism")
          != std::string::npos);
  }

  TEST_CASE("reports are byte-identical across runs") {
    for (auto const* cfg : {
             R"J({"command":"enumerate","presentation":"braid(3)","L":4})J",
             R"J({"command":"coaction","presentation":"free(2)","map":"abelianization","L_P":2})J",
             R"J({"command":"funcalg","kernel":"dirichlet","phi":"1 + z1^2","d":2,"D":6})J",
         }) {
      CHECK(execute(cfg).report == execute(cfg).report);
    }
    RunOptions timed;
    timed.timing = true;
    auto const rep = json::parse(
        execute(R"J({"command":"enumerate","presentation":"braid(3)","L":6})J", timed).report);
    CHECK(rep["ms"].is_number());
  }

  TEST_CASE("float rounding") {
    json j = {{"x", 0.1 + 0.2}, {"v", json::array({1.0 / 3.0, 7})}};
    round_floats(j);
    CHECK(j["x"].get<double>() == 0.3);
    CHECK(j["v"][0].get<double>() == 0.333333333333);
    CHECK(j["v"][1] == 7);
  }

  TEST_CASE("command-line driver") {
    std::string const cli = SEMIRFD_CLI_PATH;
    auto const        cfg = scratch("braid.json");
    auto const        out = scratch("braid.out.json");
    write(cfg, R"J({"command":"enumerate","presentation":"braid(3)","L":4})J");
    std::filesystem::remove(out);
    CHECK(shell(cli + " --config " + cfg.string() + " --out " + out.string()) == 0);
    auto const rep = json::parse(slurp(out));
    CHECK(rep["tables"]["counts"] == json::array({1, 2, 4, 7, 12}));
    CHECK(slurp(out) == execute(slurp(cfg)).report);

    auto const via_stdin = scratch("stdin.out.json");
    CHECK(shell(cli + " < " + cfg.string() + " > " + via_stdin.string()) == 0);
    CHECK(slurp(via_stdin) == slurp(out));

    auto const bad = scratch("bad.json");
    write(bad, R"J({"command":"enumerate"})J");
    CHECK(shell(cli + " --config " + bad.string() + " > /dev/null 2>&1") == 2);
    CHECK(shell(cli + " --config /no/such/config.json > /dev/null 2>&1") == 2);
    CHECK(shell(cli + " --bogus > /dev/null 2>&1") == 2);
    CHECK(shell(cli + " --help > /dev/null") == 0);

    auto const big = scratch("big.json");
    write(big, R"J({"command":"enumerate","presentation":"free(3)","L":12})J");
    CHECK(shell(cli + " --max-words 500 --config " + big.string() + " > /dev/null 2>&1") == 3);

    auto const target = scratch("config_out.json");
    std::filesystem::remove(target);
    auto const with_out = scratch("with_out.json");
    write(with_out, R"J({"command":"enumerate","presentation":"nat(2)","L":2,"out":")J"
                        + target.string() + R"J("})J");
    CHECK(shell(cli + " --config " + with_out.string()) == 0);
    CHECK(std::filesystem::exists(target));
  }
}

#include <doctest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "cstruct/json_io.hpp"

using namespace cstruct;

namespace {

const std::string kCli = CSTRUCT_CLI;
const std::string kFixtures = CSTRUCT_FIXTURES;

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fx(const std::string& name) { return kFixtures + "/" + name; }

}  // namespace

TEST_CASE("usage") {
  CHECK(run("--help").code == 0);
  Run v = run("--version");
  CHECK(v.code == 0);
  CHECK(v.out == "0.1.0\n");
  CHECK(run("").code == 64);
  CHECK(run("bogus").code == 64);
  CHECK(run("classify").code == 64);
  CHECK(run("classify --sig /nonexistent.json").code == 64);
  CHECK(run("eppa").code == 64);
}

TEST_CASE("classify") {
  Run r = run("classify --sig " + fx("sig_lipschitz.json"));
  CHECK(r.code == 0);
  Json j = parse_json(r.out);
  for (const char* k : {"semiproper", "strongly_semiproper", "proper", "lipschitz"}) CHECK(j[k] == true);
  Json c = parse_json(run("classify --sig " + fx("sig_concave.json")).out);
  CHECK(c["semiproper"] == false);
  CHECK(c["violations"][0]["kind"] == "superadditivity");
}

TEST_CASE("validate") {
  Run bad = run("validate --s " + fx("bad_triangle.json"));
  CHECK(bad.code == 1);
  Json j = parse_json(bad.out);
  CHECK(j["valid"] == false);
  CHECK(j["violations"][0]["kind"] == "triangle");
  CHECK(run("validate --s " + fx("line.json")).code == 0);
  CHECK(run("validate --partial --s " + fx("partial.json")).code == 0);
}

TEST_CASE("amalgamate output re-validates") {
  Run r = run("amalgamate --m " + fx("amalg_m.json") + " --p " + fx("amalg_p.json") + " --q " + fx("amalg_q.json") +
              " --phi " + fx("amalg_phi.json") + " --psi " + fx("amalg_psi.json"));
  REQUIRE(r.code == 0);
  Json j = parse_json(r.out);
  CHECK(j["strong"] == true);
  FinStructure a = structure_from_json(j["amalgam"]);
  CHECK(is_valid(a));
  CHECK(a.size() == 3);
  CHECK(dump(to_json(a)) == dump(j["amalgam"]));
  Run bad = run("amalgamate --m " + fx("amalg_m.json") + " --p " + fx("amalg_p.json") + " --q " + fx("amalg_q.json") +
                " --phi " + fx("amalg_phi.json") + " --psi " + fx("amalg_p.json"));
  CHECK(bad.code == 64);
}

TEST_CASE("other verbs") {
  CHECK(run("du --s " + fx("line.json") + " --relation S --arg 1").code == 0);
  CHECK(run("du --s " + fx("line.json") + " --relation T").code == 64);
  Run ext = run("extend --s " + fx("partial.json"));
  CHECK(ext.code == 0);
  CHECK(is_valid(structure_from_json(parse_json(ext.out))));
  CHECK(run("jep --m " + fx("line.json") + " --n " + fx("line.json")).code == 0);

  Run de = run("katetov de --base " + fx("kat_base.json") + " --x " + fx("kat_x.json") + " --y " + fx("kat_y.json"));
  CHECK(de.code == 0);
  CHECK(parse_json(de.out)["value"] == "1/1");
  CHECK(run("katetov de --base " + fx("kat_base.json") + " --x " + fx("kat_x.json") + " --y " + fx("line.json")).code ==
        1);

  Run es = run("eppa search --m " + fx("eppa_m.json") + " --pair " + fx("pair_eppa.json") + " --max-size 2");
  CHECK(es.code == 0);
  CHECK(parse_json(es.out)["status"] == "found");
  CHECK(run("eppa reduce --m " + fx("eppa_m.json")).code == 0);

  Run ae = run("action extend --gamma-on-m " + fx("action_gamma_m.json") + " --lambda-on-n " +
               fx("action_lambda_n.json") + " --inclusion " + fx("action_inclusion.json"));
  REQUIRE(ae.code == 0);
  Json q = parse_json(ae.out);
  CHECK(q["action"]["structure"]["points"] == Json({"p", "q", "w", "w@g"}));
  CHECK(q["action"]["structure"]["dist"][2][3] == "2/1");
  CHECK(run("action validate --a " + fx("action_gamma_m.json")).code == 0);
}

TEST_CASE("fraisse") {
  std::string out = std::string(CSTRUCT_BINARY_DIR) + "/cli_fraisse_approx.json";
  Run b = run("fraisse build --sig " + fx("sig_half.json") + " --pair " + fx("pair.json") +
              " --rounds 60 --mode saturating --out " + out);
  REQUIRE(b.code == 0);
  Json j = load_json(out);
  CHECK(j["valued"] == true);
  std::string s = std::string(CSTRUCT_BINARY_DIR) + "/cli_fraisse_structure.json";
  {
    std::FILE* f = std::fopen(s.c_str(), "w");
    std::string text = dump(j["structure"]);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
  }
  Run c = run("fraisse check --s " + s + " --pair " + fx("pair.json"));
  CHECK(c.code == 0);
  CHECK(parse_json(c.out)["all_satisfied"] == true);
  Run early = run("fraisse build --sig " + fx("sig_half.json") + " --pair " + fx("pair.json") + " --rounds 3");
  REQUIRE(early.code == 0);
}

TEST_CASE("determinism") {
  std::string cmd = "action extend --gamma-on-m " + fx("action_gamma_m.json") + " --lambda-on-n " +
                    fx("action_lambda_n.json") + " --inclusion " + fx("action_inclusion.json");
  CHECK(run(cmd).out == run(cmd).out);
}

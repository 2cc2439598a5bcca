#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

#include "bhf/fixtures.hpp"
#include "bhf/io.hpp"
#include "bhf/ktd.hpp"

using namespace bhf;

namespace {

const std::string kSrc = BHF_SOURCE_DIR;
const std::string kCli = BHF_CLI_PATH;

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + kCli + "' " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fx(const std::string& name) { return "'" + kSrc + "/fixtures/" + name + "'"; }
std::string golden(const std::string& name) { return io::read_text(kSrc + "/tests/golden/" + name); }

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bhf_cli_test_" + name)).string();
}

}  // namespace

TEST_CASE("cli: examples", "[cli]") {
  auto v = run("verify " + fx("trefoil.cfk.json") + " --algo basefree");
  CHECK(v.code == 0);
  CHECK(v.out.rfind("verified\n", 0) == 0);

  auto h = run("build-h --script " + fx("h_cancellations.script") + " | '" + kCli + "' iso - builtin:H");
  CHECK(h.code == 0);
  CHECK(h.out.rfind("isomorphic\n", 0) == 0);

  auto u = run("cfd " + fx("unknot.cfk.json") + " --framing 0 --algo basis");
  CHECK(u.code == 0);
  const auto d = io::parse_typed(u.out);
  CHECK(d.size() == 1);
  CHECK(d.arrows() == std::set<DArrow>{{"x", "x", Alg::rho12}});
  CHECK(u.out == golden("unknot_basis_0.dmod.json"));
}

TEST_CASE("cli: thin wrappers", "[cli]") {
  const auto five = fixtures::five_generator_example();
  CHECK(run("flip " + fx("five_generator.cfk.json")).out == io::write_cfk(flip(five)));
  CHECK(run("flip " + fx("five_generator.cfk.json")).out == golden("five_generator_flip.cfk.json"));
  CHECK(run("simplify " + fx("five_generator.cfk") + " --mode v").out == io::write_cfk(vertical_simplify(reduce(five))));
  CHECK(run("simplify " + fx("five_generator.cfk") + " --mode h").out ==
        io::write_cfk(horizontal_simplify(reduce(five))));
  CHECK(run("simplify " + fx("five_generator.cfk")).out == io::write_cfk(*simultaneous_simplify(reduce(five))));
  CHECK(run("tau " + fx("trefoil.cfk.json")).out == "1\n");
  CHECK(run("tau " + fx("left_trefoil.cfk.json")).out == "-1\n");

  const auto tref = fixtures::right_trefoil();
  CHECK(run("cfd " + fx("trefoil.cfk.json") + " --framing 2 --algo basis").out == io::write_typed(ktd_basis(tref, 2)));
  CHECK(run("cfd " + fx("trefoil.cfk.json") + " --algo basis").out == io::write_typed(ktd_basis(tref, -1)));
  CHECK(run("cfd " + fx("trefoil.cfk.json") + " --framing -9").out == io::write_typed(ktd_basefree(tref, 9)));
  CHECK(run("cfd " + fx("trefoil.cfk.json")).out == io::write_typed(ktd_basefree(tref)));

  const auto dpath = tmp_path("tref.dmod.json");
  REQUIRE(run("cfd " + fx("trefoil.cfk.json") + " -o '" + dpath + "'").code == 0);
  const auto dmod = ktd_basefree(tref);
  CHECK(io::read_text(dpath) == io::write_typed(dmod));
  CHECK(run("tensor --bimodule tau-mu '" + dpath + "'").out == io::write_typed(box_da_d(builtin_tau_mu(), dmod)));
  CHECK(run("tensor --bimodule builtin:H '" + dpath + "'").out == io::write_typed(box_da_d(builtin_H(), dmod)));

  const auto boxed = box_da_d(builtin_H(), dmod);
  const auto bpath = tmp_path("boxed.dmod.json");
  io::write_text(bpath, io::write_typed(boxed));
  CHECK(run("reduce '" + bpath + "'").out == io::write_typed(reduce(boxed)));
  CHECK(run("reduce '" + bpath + "' --seed 7").out == io::write_typed(reduce_d(boxed, DReduceOptions{7, {}}).module));
  CHECK(run("reduce '" + bpath + "' --seed 1", "BHF_SEED=7").out ==
        io::write_typed(reduce_d(boxed, DReduceOptions{7, {}}).module));

  CHECK(run("build-h").out == io::write_typeda(build_h(std::nullopt)));
  CHECK(run("dot " + fx("fig14.dmod.json")).out == to_dot(io::parse_typed(io::read_text(kSrc + "/fixtures/fig14.dmod.json"))));
  CHECK(run("dot builtin:tau-mu").out == to_dot(builtin_tau_mu()));

  const auto opath = tmp_path("out.dot");
  CHECK(run("dot builtin:identity -o '" + opath + "'").out.empty());
  CHECK(io::read_text(opath) == to_dot(builtin_identity()));
  std::filesystem::remove(dpath);
  std::filesystem::remove(bpath);
  std::filesystem::remove(opath);
}

TEST_CASE("cli: exit codes", "[cli]") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("cfd " + fx("trefoil.cfk.json") + " --algo quantum").code == 2);
  CHECK(run("reduce x --seed 1 --script y").code == 2);
  CHECK(run("--help").code == 0);

  CHECK(run("validate " + fx("trefoil.cfk.json")).code == 0);
  CHECK(run("validate " + fx("fig14.dmod.json")).code == 0);
  CHECK(run("validate builtin:H").code == 0);
  CHECK(run("validate /nonexistent/file.json").code == 1);

  const auto bad = tmp_path("bad.cfk");
  io::write_text(bad, "x: A=0 M=0\ny: A=0 M=0\nx -> y\n");
  CHECK(run("validate '" + bad + "'").code == 1);
  CHECK(run("tau '" + bad + "'").code == 1);
  std::filesystem::remove(bad);

  CHECK(run("verify " + fx("five_generator.cfk.json") + " --algo basis").code == 1);
  CHECK(run("verify " + fx("unknot.cfk.json") + " --algo basis").code == 0);
  CHECK(run("verify " + fx("figure_eight.cfk.json")).code == 0);

  const auto a = tmp_path("a.dmod.json"), b = tmp_path("b.dmod.json");
  io::write_text(a, io::write_typed(fixtures::rho23_string(2)));
  io::write_text(b, io::write_typed(fixtures::rho23_string(3)));
  CHECK(run("iso '" + a + "' '" + a + "'").code == 0);
  CHECK(run("iso '" + a + "' '" + b + "'").code == 1);
  CHECK(run("iso builtin:H builtin:tau-mu").code == 1);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

#pragma once

// Command-line front end. Exit codes: 0 success or verified, 1 failed
// verification or invalid input, 2 usage error, 3 inconclusive.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "bhf/cfk.hpp"
#include "bhf/io.hpp"
#include "bhf/ktd.hpp"
#include "bhf/type_d.hpp"
#include "bhf/type_da.hpp"

namespace bhf::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2, kInconclusive = 3 };

inline std::optional<TypeDAModule> builtin_bimodule(const std::string& name) {
  std::string key = name;
  if (key.rfind("builtin:", 0) == 0) key = key.substr(8);
  if (key == "H") return builtin_H();
  if (key == "tau-mu") return builtin_tau_mu();
  if (key == "tau-lambda") return builtin_tau_lambda();
  if (key == "identity") return builtin_identity();
  return std::nullopt;
}

inline io::AnyDocument load(const std::string& path, const io::ParseOptions& opts = {}) {
  if (path.rfind("builtin:", 0) == 0) {
    if (auto b = builtin_bimodule(path)) return *b;
    throw Error("unknown built-in '" + path + "'");
  }
  return io::parse_any(io::read_text(path), opts);
}

inline KnotComplex load_cfk(const std::string& path) {
  auto doc = load(path);
  if (auto* c = std::get_if<KnotComplex>(&doc)) return *c;
  throw Error("'" + path + "' is not a knot complex");
}

inline std::vector<NamePair> load_script(const std::string& path) {
  return io::parse_script(io::read_text(path));
}

inline std::optional<std::uint64_t> seed_from_env(std::optional<std::uint64_t> flag) {
  if (const char* env = std::getenv("BHF_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error("BHF_SEED must be a non-negative integer");
    }
  }
  return flag;
}

inline std::string bijection_text(const Bijection& b) {
  std::string s;
  for (const auto& [from, to] : b) s += from + " -> " + to + "\n";
  return s;
}

inline std::string morphism_text(const DMorphism& f) {
  std::string s;
  for (const auto& t : f) s += t.from + " -> " + std::string(to_string(t.coeff)) + " " + t.to + "\n";
  return s;
}

inline int run(int argc, const char* const* argv) {
  CLI::App app{"Bordered invariants of knot complements over the torus algebra"};
  app.require_subcommand(1);
  std::string out_path = "-";
  std::string input, second, mode = "both", algo = "basefree", bimodule, script_path;
  std::optional<int> framing;
  std::optional<std::uint64_t> seed;
  bool strict = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check a complex, module, bimodule or script");
  validate_cmd->add_option("file", input)->required();
  validate_cmd->add_flag("--strict", strict, "Reject idempotent mismatches while loading");

  auto* flip_cmd = app.add_subcommand("flip", "Flip a knot complex");
  flip_cmd->add_option("cfk", input)->required();
  flip_cmd->add_option("-o,--output", out_path);

  auto* simplify_cmd = app.add_subcommand("simplify", "Reduce and simplify a knot complex");
  simplify_cmd->add_option("cfk", input)->required();
  simplify_cmd->add_option("--mode", mode)->check(CLI::IsMember({"v", "h", "both"}));
  simplify_cmd->add_option("-o,--output", out_path);

  auto* tau_cmd = app.add_subcommand("tau", "Print tau of a knot complex");
  tau_cmd->add_option("cfk", input)->required();

  auto* cfd_cmd = app.add_subcommand("cfd", "Type D structure of the knot complement");
  cfd_cmd->add_option("cfk", input)->required();
  cfd_cmd->add_option("--framing", framing);
  cfd_cmd->add_option("--algo", algo)->check(CLI::IsMember({"basis", "basefree"}));
  cfd_cmd->add_option("-o,--output", out_path);

  auto* tensor_cmd = app.add_subcommand("tensor", "Box a bimodule with a type D structure");
  tensor_cmd->add_option("--bimodule", bimodule)->required();
  tensor_cmd->add_option("dmod", input)->required();
  tensor_cmd->add_option("-o,--output", out_path);

  auto* buildh_cmd = app.add_subcommand("build-h", "Build H from the sixfold Dehn twist tensor");
  buildh_cmd->add_option("--script", script_path);
  buildh_cmd->add_option("-o,--output", out_path);

  auto* reduce_cmd = app.add_subcommand("reduce", "Cancel idempotent arrows");
  reduce_cmd->add_option("module", input)->required();
  auto* seed_opt = reduce_cmd->add_option("--seed", seed);
  reduce_cmd->add_option("--script", script_path)->excludes(seed_opt);
  reduce_cmd->add_option("-o,--output", out_path);

  auto* iso_cmd = app.add_subcommand("iso", "Test two modules for isomorphism");
  iso_cmd->add_option("first", input)->required();
  iso_cmd->add_option("second", second)->required();

  auto* verify_cmd = app.add_subcommand("verify", "Check that H acts on KtD(C) as the flip");
  verify_cmd->add_option("cfk", input)->required();
  verify_cmd->add_option("--framing", framing);
  verify_cmd->add_option("--algo", algo)->check(CLI::IsMember({"basis", "basefree"}));

  auto* dot_cmd = app.add_subcommand("dot", "Graphviz export");
  dot_cmd->add_option("module", input)->required();
  dot_cmd->add_option("-o,--output", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate_cmd->parsed()) {
      io::ParseOptions opts;
      opts.strict = strict;
      auto doc = load(input, opts);
      std::vector<std::string> problems;
      if (auto* c = std::get_if<KnotComplex>(&doc)) problems = validate(*c);
      else if (auto* d = std::get_if<TypeDModule>(&doc)) problems = validate_d(*d);
      else if (auto* b = std::get_if<TypeDAModule>(&doc)) problems = validate_da(*b);
      if (problems.empty()) {
        std::cout << "valid\n";
        return kOk;
      }
      for (const auto& p : problems) std::cerr << p << "\n";
      std::cout << "invalid\n";
      return kFailed;
    }
    if (flip_cmd->parsed()) {
      io::write_text(out_path, io::write_cfk(flip(load_cfk(input))));
      return kOk;
    }
    if (simplify_cmd->parsed()) {
      auto c = reduce(load_cfk(input));
      if (mode == "v") {
        c = vertical_simplify(c);
      } else if (mode == "h") {
        c = horizontal_simplify(c);
      } else {
        auto s = simultaneous_simplify(c);
        if (!s) throw Error("no simultaneously simplified basis found");
        c = *s;
      }
      io::write_text(out_path, io::write_cfk(c));
      return kOk;
    }
    if (tau_cmd->parsed()) {
      std::cout << tau(load_cfk(input)) << "\n";
      return kOk;
    }
    if (cfd_cmd->parsed()) {
      auto c = reduce(load_cfk(input));
      TypeDModule d;
      if (algo == "basis") {
        d = ktd_basis(c, framing.value_or(2 * tau(c) - 3));
      } else {
        // framing -n
        d = ktd_basefree(c, framing ? std::optional<int>(-*framing) : std::nullopt);
      }
      io::write_text(out_path, io::write_typed(d));
      return kOk;
    }
    if (tensor_cmd->parsed()) {
      TypeDAModule b;
      if (auto builtin = builtin_bimodule(bimodule)) {
        b = *builtin;
      } else {
        auto doc = load(bimodule);
        auto* p = std::get_if<TypeDAModule>(&doc);
        if (!p) throw Error("'" + bimodule + "' is not a type DA bimodule");
        b = *p;
      }
      auto doc = load(input);
      auto* m = std::get_if<TypeDModule>(&doc);
      if (!m) throw Error("'" + input + "' is not a type D structure");
      io::write_text(out_path, io::write_typed(box_da_d(b, *m)));
      return kOk;
    }
    if (buildh_cmd->parsed()) {
      std::optional<std::vector<NamePair>> script;
      if (!script_path.empty()) script = load_script(script_path);
      io::write_text(out_path, io::write_typeda(build_h(script)));
      return kOk;
    }
    if (reduce_cmd->parsed()) {
      auto doc = load(input);
      std::optional<std::vector<NamePair>> script;
      if (!script_path.empty()) script = load_script(script_path);
      const auto s = seed_from_env(seed);
      if (auto* d = std::get_if<TypeDModule>(&doc)) {
        DReduceOptions opts;
        opts.seed = s;
        opts.script = script;
        auto r = reduce_d(*d, opts);
        for (const auto& [x, y] : r.trace) std::cerr << "cancel " << x << " -> " << y << "\n";
        io::write_text(out_path, io::write_typed(r.module));
        return kOk;
      }
      if (auto* b = std::get_if<TypeDAModule>(&doc)) {
        DAReduceOptions opts;
        opts.seed = s;
        opts.script = script;
        io::write_text(out_path, io::write_typeda(reduce_da(*b, opts)));
        return kOk;
      }
      throw Error("'" + input + "' is not a module");
    }
    if (iso_cmd->parsed()) {
      auto a = load(input), b = load(second);
      if (auto* x = std::get_if<TypeDModule>(&a)) {
        auto* y = std::get_if<TypeDModule>(&b);
        if (!y) throw Error("cannot compare a type D structure with another kind");
        if (auto bij = isomorphic_d(*x, *y)) {
          std::cout << "isomorphic\n" << bijection_text(*bij);
          return kOk;
        }
        if (x->count(Idem::i0) != y->count(Idem::i0) || x->count(Idem::i1) != y->count(Idem::i1)) {
          std::cout << "not isomorphic\n";
          return kFailed;
        }
        if (auto f = find_isomorphism_d(*x, *y)) {
          std::cout << "isomorphic\n" << morphism_text(*f);
          return kOk;
        }
        std::cout << "inconclusive\n";
        return kInconclusive;
      }
      if (auto* x = std::get_if<TypeDAModule>(&a)) {
        auto* y = std::get_if<TypeDAModule>(&b);
        if (!y) throw Error("cannot compare a type DA bimodule with another kind");
        if (auto bij = isomorphic_da(*x, *y)) {
          std::cout << "isomorphic\n" << bijection_text(*bij);
          return kOk;
        }
        if (x->size() != y->size() || x->actions().size() != y->actions().size()) {
          std::cout << "not isomorphic\n";
          return kFailed;
        }
        std::cout << "inconclusive\n";
        return kInconclusive;
      }
      throw Error("iso expects two modules");
    }
    if (verify_cmd->parsed()) {
      VerifyOptions opts;
      opts.algo = algo == "basis" ? KtdAlgo::basis : KtdAlgo::basefree;
      if (framing) opts.framing = opts.algo == KtdAlgo::basefree ? -*framing : *framing;
      auto res = verify_elliptic_invariance(load_cfk(input), opts);
      std::cout << to_string(res.verdict) << "\n";
      std::cout << "framing " << res.framing << "\n";
      if (!res.detail.empty()) std::cerr << res.detail << "\n";
      if (res.verdict == Verdict::verified)
        std::cout << (res.morphism ? morphism_text(*res.morphism) : bijection_text(res.witness));
      switch (res.verdict) {
        case Verdict::verified: return kOk;
        case Verdict::failed: return kFailed;
        case Verdict::inconclusive: return kInconclusive;
      }
    }
    if (dot_cmd->parsed()) {
      auto doc = load(input);
      if (auto* d = std::get_if<TypeDModule>(&doc)) io::write_text(out_path, to_dot(*d));
      else if (auto* b = std::get_if<TypeDAModule>(&doc)) io::write_text(out_path, to_dot(*b));
      else throw Error("dot expects a type D structure or type DA bimodule");
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}

}  // namespace bhf::cli

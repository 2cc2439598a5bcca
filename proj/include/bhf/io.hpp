#pragma once

// Documents: a JSON envelope {"format_version": "1", "kind": ..., "payload": ...}
// for every object kind, plus two hand-writing friendly line formats
// ("x: A=1 M=0" / "x -> U^2 y" for complexes, "FROM -> TO" for scripts).

#include <fstream>
#include <iostream>
#include <iterator>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bhf/cfk.hpp"
#include "bhf/type_d.hpp"
#include "bhf/type_da.hpp"

namespace bhf::io {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

inline const std::string kFormatVersion = "1";

struct ParseOptions {
  bool strict = false;  // reject idempotent mismatches at load time
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
}

inline void only_fields(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(where + ": unknown field '" + key + "'");
  }
}

template <class T>
T field(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(where + ": field '" + key + "' has the wrong type");
  }
}

inline const json& array_field(const json& obj, const std::string& key, const std::string& where) {
  static const json empty = json::array();
  auto it = obj.find(key);
  if (it == obj.end()) return empty;
  if (!it->is_array()) throw Error(where + ": field '" + key + "' must be an array");
  return *it;
}

inline Alg alg_token(const std::string& s) {
  auto a = parse_alg(s);
  if (!a || *a == Alg::zero) throw Error("unknown algebra element '" + s + "'");
  return *a;
}

inline Idem idem_token(const std::string& s) {
  auto i = parse_idem(s);
  if (!i) throw Error("unknown idempotent '" + s + "'");
  return *i;
}

inline std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

inline ordered_json envelope(const std::string& kind, ordered_json payload) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = kind;
  doc["payload"] = std::move(payload);
  return doc;
}

}  // namespace detail

// Returns (kind, payload) after checking the envelope.
inline std::pair<std::string, json> open_envelope(std::string_view text) {
  json doc = detail::parse_json(text);
  detail::only_fields(doc, {"format_version", "kind", "payload"}, "document");
  const auto version = detail::field<std::string>(doc, "format_version", "document");
  if (version != kFormatVersion) throw Error("unsupported format_version '" + version + "'");
  const auto kind = detail::field<std::string>(doc, "kind", "document");
  static const std::set<std::string> kinds{"cfk", "type_d", "type_da", "script"};
  if (!kinds.count(kind)) throw Error("unknown document kind '" + kind + "'");
  json payload = doc.contains("payload") ? doc["payload"] : json::object();
  return {kind, payload};
}

inline bool looks_like_json(std::string_view text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '{';
  }
  return false;
}

// ---------------------------------------------------------------------------
// CFK

namespace detail {

inline KnotComplex parse_cfk_lines(std::string_view text) {
  static const std::regex gen_re(R"(^\s*([^\s:]+)\s*:\s*A\s*=\s*(-?\d+)\s+M\s*=\s*(-?\d+)\s*$)");
  static const std::regex arrow_re(R"(^\s*(\S+)\s*->\s*(?:U\^(\d+)\s+|U\s+)?(\S+)\s*$)");
  KnotComplex c;
  std::vector<std::pair<std::size_t, KnotArrow>> arrows;
  std::istringstream in{std::string(text)};
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (std::regex_match(line, m, gen_re)) {
      try {
        c.add_generator(m[1], std::stoi(m[2]), std::stoi(m[3]));
      } catch (const Error& e) {
        throw Error("line " + std::to_string(lineno) + ": " + e.what());
      }
    } else if (std::regex_match(line, m, arrow_re)) {
      int power = 0;
      if (m[2].matched) power = std::stoi(m[2]);
      else if (line.find("-> U ") != std::string::npos) power = 1;
      arrows.emplace_back(lineno, KnotArrow{m[1], m[3], power});
    } else {
      const auto col = line.find_first_not_of(" \t") + 1;
      throw Error("syntax error at line " + std::to_string(lineno) + ", column " + std::to_string(col));
    }
  }
  for (const auto& [lineno, a] : arrows) c.toggle_arrow(a.from, a.to, a.u_power);
  return c;
}

}  // namespace detail

inline KnotComplex cfk_from_payload(const json& p) {
  detail::only_fields(p, {"generators", "arrows", "shift"}, "cfk payload");
  KnotComplex c;
  for (const auto& g : detail::array_field(p, "generators", "cfk payload")) {
    detail::only_fields(g, {"name", "alexander", "maslov"}, "cfk generator");
    c.add_generator(detail::field<std::string>(g, "name", "cfk generator"),
                    detail::field<int>(g, "alexander", "cfk generator"),
                    detail::field<int>(g, "maslov", "cfk generator"));
  }
  for (const auto& a : detail::array_field(p, "arrows", "cfk payload")) {
    detail::only_fields(a, {"from", "to", "u_power"}, "cfk arrow");
    c.toggle_arrow(detail::field<std::string>(a, "from", "cfk arrow"),
                   detail::field<std::string>(a, "to", "cfk arrow"),
                   a.contains("u_power") ? detail::field<int>(a, "u_power", "cfk arrow") : 0);
  }
  if (p.contains("shift")) {
    const auto& s = p["shift"];
    detail::only_fields(s, {"alexander", "maslov"}, "cfk shift");
    c.set_shift(GradingShift{detail::field<int>(s, "alexander", "cfk shift"),
                             detail::field<int>(s, "maslov", "cfk shift")});
  }
  return c;
}

inline KnotComplex parse_cfk(std::string_view text) {
  if (!looks_like_json(text)) return detail::parse_cfk_lines(text);
  auto [kind, payload] = open_envelope(text);
  if (kind != "cfk") throw Error("expected a cfk document, found '" + kind + "'");
  return cfk_from_payload(payload);
}

inline std::string write_cfk(const KnotComplex& c) {
  ordered_json p;
  p["generators"] = ordered_json::array();
  for (const auto& [n, g] : c.generators())
    p["generators"].push_back({{"name", n}, {"alexander", g.alexander}, {"maslov", g.maslov}});
  p["arrows"] = ordered_json::array();
  for (const auto& a : c.arrows()) p["arrows"].push_back({{"from", a.from}, {"to", a.to}, {"u_power", a.u_power}});
  if (c.shift()) p["shift"] = {{"alexander", c.shift()->alexander}, {"maslov", c.shift()->maslov}};
  return detail::dump(detail::envelope("cfk", std::move(p)));
}

// ---------------------------------------------------------------------------
// Type D

inline TypeDModule typed_from_payload(const json& p, const ParseOptions& opts = {}) {
  detail::only_fields(p, {"generators", "arrows"}, "type_d payload");
  TypeDModule m;
  for (const auto& g : detail::array_field(p, "generators", "type_d payload")) {
    detail::only_fields(g, {"name", "idem", "tags"}, "type_d generator");
    Tags tags;
    if (g.contains("tags")) {
      if (!g["tags"].is_object()) throw Error("type_d generator: tags must be an object");
      for (const auto& [k, v] : g["tags"].items()) {
        if (!v.is_string()) throw Error("type_d generator: tag '" + k + "' must be a string");
        tags[k] = v.get<std::string>();
      }
    }
    m.add_generator(detail::field<std::string>(g, "name", "type_d generator"),
                    detail::idem_token(detail::field<std::string>(g, "idem", "type_d generator")), std::move(tags));
  }
  for (const auto& a : detail::array_field(p, "arrows", "type_d payload")) {
    detail::only_fields(a, {"from", "to", "label"}, "type_d arrow");
    m.toggle_arrow(detail::field<std::string>(a, "from", "type_d arrow"),
                   detail::field<std::string>(a, "to", "type_d arrow"),
                   detail::alg_token(detail::field<std::string>(a, "label", "type_d arrow")));
  }
  for (const auto& a : m.arrows())
    if (!m.has(a.from) || !m.has(a.to)) throw Error("arrow with unknown endpoint: " + arrow_string(a));
  if (opts.strict) {
    for (const auto& v : validate_d(m))
      if (v.rfind("idempotent mismatch", 0) == 0) throw Error(v);
  }
  return m;
}

inline TypeDModule parse_typed(std::string_view text, const ParseOptions& opts = {}) {
  auto [kind, payload] = open_envelope(text);
  if (kind != "type_d") throw Error("expected a type_d document, found '" + kind + "'");
  return typed_from_payload(payload, opts);
}

inline std::string write_typed(const TypeDModule& m) {
  ordered_json p;
  p["generators"] = ordered_json::array();
  for (const auto& [n, g] : m.generators()) {
    ordered_json e{{"name", n}, {"idem", std::string(to_string(g.idem))}};
    if (!g.tags.empty()) {
      ordered_json t = ordered_json::object();
      for (const auto& [k, v] : g.tags) t[k] = v;
      e["tags"] = std::move(t);
    }
    p["generators"].push_back(std::move(e));
  }
  p["arrows"] = ordered_json::array();
  for (const auto& a : m.arrows())
    p["arrows"].push_back({{"from", a.from}, {"to", a.to}, {"label", std::string(to_string(a.label))}});
  return detail::dump(detail::envelope("type_d", std::move(p)));
}

// ---------------------------------------------------------------------------
// Type DA

inline TypeDAModule typeda_from_payload(const json& p, const ParseOptions& opts = {}) {
  detail::only_fields(p, {"generators", "actions"}, "type_da payload");
  TypeDAModule m;
  for (const auto& g : detail::array_field(p, "generators", "type_da payload")) {
    detail::only_fields(g, {"name", "left_idem", "right_idem"}, "type_da generator");
    m.add_generator(detail::field<std::string>(g, "name", "type_da generator"),
                    detail::idem_token(detail::field<std::string>(g, "left_idem", "type_da generator")),
                    detail::idem_token(detail::field<std::string>(g, "right_idem", "type_da generator")));
  }
  for (const auto& a : detail::array_field(p, "actions", "type_da payload")) {
    detail::only_fields(a, {"input", "args", "out_coeff", "output"}, "type_da action");
    std::vector<Alg> args;
    for (const auto& s : detail::array_field(a, "args", "type_da action")) {
      if (!s.is_string()) throw Error("type_da action: args must be strings");
      const Alg x = detail::alg_token(s.get<std::string>());
      if (!is_chord(x)) throw Error("type_da action: idempotent '" + s.get<std::string>() + "' as input");
      args.push_back(x);
    }
    m.toggle_action({detail::field<std::string>(a, "input", "type_da action"), std::move(args),
                     detail::alg_token(detail::field<std::string>(a, "out_coeff", "type_da action")),
                     detail::field<std::string>(a, "output", "type_da action")});
  }
  for (const auto& a : m.actions())
    if (!m.has(a.input) || !m.has(a.output)) throw Error("action with unknown generator: " + action_string(a));
  if (opts.strict) {
    for (const auto& v : validate_da(m, 0))
      if (v.rfind("incompatible", 0) == 0) throw Error(v);
  }
  return m;
}

inline TypeDAModule parse_typeda(std::string_view text, const ParseOptions& opts = {}) {
  auto [kind, payload] = open_envelope(text);
  if (kind != "type_da") throw Error("expected a type_da document, found '" + kind + "'");
  return typeda_from_payload(payload, opts);
}

inline std::string write_typeda(const TypeDAModule& m) {
  ordered_json p;
  p["generators"] = ordered_json::array();
  for (const auto& [n, g] : m.generators())
    p["generators"].push_back(
        {{"name", n}, {"left_idem", std::string(to_string(g.left))}, {"right_idem", std::string(to_string(g.right))}});
  p["actions"] = ordered_json::array();
  for (const auto& a : m.actions()) {
    ordered_json args = ordered_json::array();
    for (Alg x : a.args) args.push_back(std::string(to_string(x)));
    p["actions"].push_back({{"input", a.input},
                            {"args", std::move(args)},
                            {"out_coeff", std::string(to_string(a.out_coeff))},
                            {"output", a.output}});
  }
  return detail::dump(detail::envelope("type_da", std::move(p)));
}

// ---------------------------------------------------------------------------
// Cancellation scripts

inline std::vector<NamePair> script_from_payload(const json& p) {
  detail::only_fields(p, {"pairs"}, "script payload");
  std::vector<NamePair> out;
  for (const auto& e : detail::array_field(p, "pairs", "script payload")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw Error("script payload: each pair must be [from, to]");
    out.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return out;
}

inline std::vector<NamePair> parse_script(std::string_view text) {
  if (looks_like_json(text)) {
    auto [kind, payload] = open_envelope(text);
    if (kind != "script") throw Error("expected a script document, found '" + kind + "'");
    return script_from_payload(payload);
  }
  std::vector<NamePair> out;
  std::istringstream in{std::string(text)};
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto arrow = line.find("->");
    if (arrow == std::string::npos)
      throw Error("syntax error at line " + std::to_string(lineno) + ", column 1: expected 'FROM -> TO'");
    std::istringstream lhs(line.substr(0, arrow)), rhs(line.substr(arrow + 2));
    std::string from, to, extra;
    lhs >> from;
    rhs >> to;
    if (from.empty() || to.empty() || (lhs >> extra) || (rhs >> extra))
      throw Error("syntax error at line " + std::to_string(lineno) + ", column " + std::to_string(arrow + 1) +
                  ": expected 'FROM -> TO'");
    out.emplace_back(from, to);
  }
  return out;
}

inline std::string write_script(const std::vector<NamePair>& pairs) {
  std::string s;
  for (const auto& [a, b] : pairs) s += a + " -> " + b + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

using AnyDocument = std::variant<KnotComplex, TypeDModule, TypeDAModule, std::vector<NamePair>>;

// Parses any supported document; non-JSON text is read as a complex when it
// contains "A=" generator lines and as a script otherwise.
inline AnyDocument parse_any(std::string_view text, const ParseOptions& opts = {}) {
  if (!looks_like_json(text)) {
    if (text.find("A=") != std::string_view::npos) return detail::parse_cfk_lines(text);
    return parse_script(text);
  }
  auto [kind, payload] = open_envelope(text);
  if (kind == "cfk") return cfk_from_payload(payload);
  if (kind == "type_d") return typed_from_payload(payload, opts);
  if (kind == "type_da") return typeda_from_payload(payload, opts);
  return script_from_payload(payload);
}

}  // namespace bhf::io

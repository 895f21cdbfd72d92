#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "alpc/model.hpp"
#include "alpc/parse.hpp"
#include "alpc/proof.hpp"
#include "alpc/search.hpp"

namespace alpc {

using json = nlohmann::json;

namespace detail {

inline json load_json_text(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(std::string("malformed JSON in ") + what);
  return j;
}

inline std::vector<std::string> string_list(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw Error(ctx + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw Error(ctx + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace detail

inline ModelData model_data_from_json(const json& j) {
  if (!j.is_object()) throw Error("model file must be a JSON object");
  for (const char* field : {"worlds", "agents", "atoms", "valuation", "access",
                            "awareness"}) {
    if (!j.contains(field))
      throw Error(std::string("model file is missing field '") + field + "'");
  }
  ModelData d;
  d.worlds = detail::string_list(j.at("worlds"), "'worlds'");
  d.agents = detail::string_list(j.at("agents"), "'agents'");
  d.atoms = detail::string_list(j.at("atoms"), "'atoms'");
  const json& val = j.at("valuation");
  if (!val.is_object()) throw Error("'valuation' must be an object");
  for (const auto& [w, ps] : val.items())
    d.valuation[w] = detail::string_list(ps, "valuation of '" + w + "'");
  const json& acc = j.at("access");
  if (!acc.is_object()) throw Error("'access' must be an object");
  for (const auto& [a, blocks] : acc.items()) {
    if (!blocks.is_array())
      throw Error("access of '" + a + "' must be an array of blocks");
    for (const auto& b : blocks)
      d.access[a].push_back(detail::string_list(b, "access block of '" + a + "'"));
  }
  const json& aw = j.at("awareness");
  if (!aw.is_object()) throw Error("'awareness' must be an object");
  for (const auto& [chain, ps] : aw.items())
    d.awareness[chain] = detail::string_list(ps, "awareness of '" + chain + "'");
  return d;
}

inline Model model_from_json_text(const std::string& text) {
  return validate(model_data_from_json(detail::load_json_text(text, "model file")));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Model load_model(const std::string& path) {
  return model_from_json_text(read_file(path));
}

inline json model_to_json(const Model& m) {
  json j;
  j["worlds"] = m.worlds();
  json agents = json::array();
  for (const auto& a : m.agents()) agents.push_back(a.name);
  j["agents"] = agents;
  j["atoms"] = m.atoms();
  json val = json::object();
  for (const auto& w : m.worlds())
    val[w] = std::vector<std::string>(m.true_atoms(w).begin(), m.true_atoms(w).end());
  j["valuation"] = val;
  json acc = json::object();
  for (const auto& a : m.agents()) acc[a.name] = m.access(a).blocks();
  j["access"] = acc;
  json aw = json::object();
  for (const auto& theta : m.theta()) {
    const auto& set = m.awareness(theta);
    aw[to_string(theta)] = std::vector<std::string>(set.begin(), set.end());
  }
  j["awareness"] = aw;
  return j;
}

// A countermodel is serialized as its model plus the falsifying world
// and the formula it falsifies.
inline json countermodel_to_json(const Countermodel& cm) {
  json j = model_to_json(cm.model);
  j["world"] = cm.world;
  j["formula"] = to_string(cm.formula);
  return j;
}

// ---- proofs ---------------------------------------------------------------
//
// A proof file is an object: {"theta": ["a", "a,b"], "lines": [...]}, each
// line {"formula": "<surface syntax>", "by": <justification>} where the
// justification is an axiom name string, {"mp": [i, j]} (line i holds the
// antecedent, line j the implication), {"lg": {"line": i, "agent": "a"}},
// {"xg": {"line": i, "chain": "a,b"}}, or {"cg": {"line": i, "chain": "a"}}.

namespace detail {

inline std::size_t line_ref(const json& j, const std::string& ctx) {
  if (!j.is_number_unsigned() || j.get<std::size_t>() == 0)
    throw Error(ctx + " must be a positive line number");
  return j.get<std::size_t>();
}

inline Justification justification_from_json(const json& j, std::size_t index) {
  const std::string ctx = "line " + std::to_string(index);
  if (j.is_string()) {
    auto name = axiom_from_string(j.get<std::string>());
    if (!name)
      throw Error(ctx + ": unknown axiom '" + j.get<std::string>() + "'");
    return AxiomJust{*name};
  }
  if (!j.is_object() || j.size() != 1)
    throw Error(ctx + ": 'by' must be an axiom name or a single-rule object");
  if (j.contains("mp")) {
    const json& args = j.at("mp");
    if (!args.is_array() || args.size() != 2)
      throw Error(ctx + ": 'mp' takes two line numbers");
    return MpJust{line_ref(args[0], ctx + ", 'mp'"),
                  line_ref(args[1], ctx + ", 'mp'")};
  }
  auto rule_body = [&](const char* rule) -> const json& {
    const json& body = j.at(rule);
    if (!body.is_object() || !body.contains("line"))
      throw Error(ctx + ": '" + rule + "' needs a 'line' field");
    return body;
  };
  if (j.contains("lg")) {
    const json& body = rule_body("lg");
    if (!body.contains("agent") || !body.at("agent").is_string())
      throw Error(ctx + ": 'lg' needs an 'agent' field");
    return LgJust{line_ref(body.at("line"), ctx + ", 'lg'"),
                  Agent{body.at("agent").get<std::string>()}};
  }
  auto chain_of = [&](const json& body, const char* rule) {
    if (!body.contains("chain") || !body.at("chain").is_string())
      throw Error(ctx + ": '" + std::string(rule) + "' needs a 'chain' field");
    return parse_chain(body.at("chain").get<std::string>());
  };
  if (j.contains("xg")) {
    const json& body = rule_body("xg");
    return IndistGJust{line_ref(body.at("line"), ctx + ", 'xg'"),
                       chain_of(body, "xg")};
  }
  if (j.contains("cg")) {
    const json& body = rule_body("cg");
    return CgJust{line_ref(body.at("line"), ctx + ", 'cg'"), chain_of(body, "cg")};
  }
  throw Error(ctx + ": unknown rule in 'by'");
}

}  // namespace detail

inline Proof proof_from_json(const json& j) {
  if (!j.is_object()) throw Error("proof file must be a JSON object");
  if (!j.contains("theta")) throw Error("proof file is missing field 'theta'");
  if (!j.contains("lines")) throw Error("proof file is missing field 'lines'");
  Proof pf;
  for (const auto& text : detail::string_list(j.at("theta"), "'theta'"))
    pf.theta.push_back(parse_chain(text));
  const json& lines = j.at("lines");
  if (!lines.is_array()) throw Error("'lines' must be an array");
  std::size_t index = 0;
  for (const json& entry : lines) {
    ++index;
    const std::string ctx = "line " + std::to_string(index);
    if (!entry.is_object() || !entry.contains("formula") || !entry.contains("by"))
      throw Error(ctx + ": each line needs 'formula' and 'by'");
    if (!entry.at("formula").is_string())
      throw Error(ctx + ": 'formula' must be a string");
    Formula f = [&] {
      try {
        return parse_formula(entry.at("formula").get<std::string>());
      } catch (const ParseError& e) {
        throw Error(ctx + ": " + e.what());
      }
    }();
    pf.lines.push_back(
        {index, std::move(f), detail::justification_from_json(entry.at("by"), index)});
  }
  return pf;
}

inline Proof proof_from_json_text(const std::string& text) {
  return proof_from_json(detail::load_json_text(text, "proof file"));
}

inline Proof load_proof(const std::string& path) {
  return proof_from_json_text(read_file(path));
}

inline json justification_to_json(const Justification& just) {
  return std::visit(
      [](const auto& j) -> json {
        using T = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<T, AxiomJust>) {
          return to_string(j.name);
        } else if constexpr (std::is_same_v<T, MpJust>) {
          return json{{"mp", {j.from_phi, j.from_imp}}};
        } else if constexpr (std::is_same_v<T, LgJust>) {
          return json{{"lg", {{"line", j.from}, {"agent", j.agent.name}}}};
        } else if constexpr (std::is_same_v<T, IndistGJust>) {
          return json{{"xg", {{"line", j.from}, {"chain", to_string(j.chain)}}}};
        } else {
          static_assert(std::is_same_v<T, CgJust>);
          return json{{"cg", {{"line", j.from}, {"chain", to_string(j.chain)}}}};
        }
      },
      just);
}

inline json proof_to_json(const Proof& pf) {
  json j;
  json theta = json::array();
  for (const auto& c : pf.theta) theta.push_back(to_string(c));
  j["theta"] = theta;
  json lines = json::array();
  for (const auto& line : pf.lines)
    lines.push_back(
        {{"formula", to_string(line.formula)}, {"by", justification_to_json(line.just)}});
  j["lines"] = lines;
  return j;
}

// The worked five-world, two-agent example model, bundled so tests and
// the command line can reproduce it bit for bit.
inline const char* fixture_fig2_json() {
  return R"({
  "access": {
    "a": [["w1"], ["w2", "w3"], ["w4", "w5"]],
    "b": [["w1"], ["w2", "w4"], ["w3", "w5"]]
  },
  "agents": ["a", "b"],
  "atoms": ["pa", "pb", "q"],
  "awareness": {
    "a": ["pa", "pb", "q"],
    "a,b": ["pa", "pb", "q"],
    "a,b,a": ["pa", "pb"],
    "b": ["pa", "pb"],
    "b,a": ["pa", "pb"]
  },
  "valuation": {
    "w1": ["pa", "pb", "q"],
    "w2": ["pa", "pb"],
    "w3": ["pa"],
    "w4": ["pb"],
    "w5": []
  },
  "worlds": ["w1", "w2", "w3", "w4", "w5"]
}
)";
}

inline Model fig2_model() { return model_from_json_text(fixture_fig2_json()); }

}  // namespace alpc

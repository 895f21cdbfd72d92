// alpc: command-line front end for the library.
//
// Exit codes follow the logical verdict so pipelines can branch on $?:
//   0  true / valid / accepted / no countermodel within the bounds
//   1  false / falsifiable / rejected / countermodel found
//   2  usage or input error (missing file, parse error, bad model)
// A "false" verdict is not an error.

#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alpc/closure.hpp"
#include "alpc/io.hpp"

namespace {

using nlohmann::json;

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kBadInput = 2;

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string piece;
  std::istringstream in(text);
  while (std::getline(in, piece, sep)) {
    piece = trim(piece);
    if (!piece.empty()) out.push_back(piece);
  }
  return out;
}

// --theta "a;b;a,b" -> {(a), (b), (a,b)}
std::vector<alpc::Chain> theta_from_flag(const std::string& text) {
  std::vector<alpc::Chain> out;
  for (const auto& piece : split_list(text, ';')) out.push_back(alpc::parse_chain(piece));
  return out;
}

json trace_to_json(const alpc::EvalTrace& t) {
  json j;
  j["formula"] = alpc::to_string(t.formula);
  j["world"] = t.world;
  j["verdict"] = t.verdict;
  if (t.quantified) j["worlds"] = *t.quantified;
  json kids = json::array();
  for (const auto& k : t.children) kids.push_back(trace_to_json(k));
  j["children"] = std::move(kids);
  return j;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

int run_check(const std::string& model_path, const std::string& formula_text,
              const std::optional<std::string>& world, bool json_out) {
  const alpc::Model m = alpc::load_model(model_path);
  const alpc::Formula f = alpc::parse_formula(formula_text);
  alpc::Evaluator ev(m);

  if (world) {
    const alpc::EvalTrace t = ev.explain(*world, f);
    if (json_out) {
      json j;
      j["command"] = "check";
      j["formula"] = alpc::to_string(f);
      j["world"] = *world;
      j["verdict"] = t.verdict;
      j["trace"] = trace_to_json(t);
      emit(j);
    } else {
      std::cout << (t.verdict ? "true" : "false") << '\n';
    }
    return t.verdict ? kTrue : kFalse;
  }

  // No world given: report the verdict at every world of the model.
  std::vector<std::string> holds_at, fails_at;
  for (const auto& w : m.worlds()) (ev.holds(w, f) ? holds_at : fails_at).push_back(w);
  if (json_out) {
    json j;
    j["command"] = "check";
    j["formula"] = alpc::to_string(f);
    j["verdict"] = fails_at.empty();
    j["holds_at"] = holds_at;
    j["fails_at"] = fails_at;
    emit(j);
  } else {
    auto line = [](const char* label, const std::vector<std::string>& ws) {
      std::cout << label;
      for (const auto& w : ws) std::cout << ' ' << w;
      std::cout << '\n';
    };
    line("true: ", holds_at);
    line("false:", fails_at);
  }
  return fails_at.empty() ? kTrue : kFalse;
}

int run_valid(const std::string& model_path, const std::string& formula_text,
              bool json_out) {
  const alpc::Model m = alpc::load_model(model_path);
  const alpc::Formula f = alpc::parse_formula(formula_text);
  const alpc::ValidityResult r = alpc::check_valid(m, f);
  if (json_out) {
    json j;
    j["command"] = "valid";
    j["formula"] = alpc::to_string(f);
    j["verdict"] = r.valid;
    j["falsifying"] = r.falsifying;
    emit(j);
  } else if (r.valid) {
    std::cout << "valid\n";
  } else {
    std::cout << "falsifiable at:";
    for (const auto& w : r.falsifying) std::cout << ' ' << w;
    std::cout << '\n';
  }
  return r.valid ? kTrue : kFalse;
}

struct SearchFlags {
  std::string formula;
  std::size_t max_worlds = 3;
  std::string agents;
  std::string atoms;
  std::string theta;
  unsigned jobs = 1;
  std::optional<std::size_t> sample;
  std::uint64_t seed = 0;
  bool no_symmetry = false;
  std::optional<double> ceiling;
};

int run_search(const SearchFlags& sf, bool json_out) {
  const alpc::Formula f = alpc::parse_formula(sf.formula);
  alpc::SearchBounds b;
  b.max_worlds = sf.max_worlds;
  for (const auto& name : split_list(sf.agents, ',')) b.agents.push_back(alpc::Agent{name});
  b.atoms = split_list(sf.atoms, ',');
  b.theta = theta_from_flag(sf.theta);
  if (sf.sample) b.sampled = alpc::SampledAwareness{*sf.sample, sf.seed};
  b.symmetry_reduction = !sf.no_symmetry;
  if (sf.ceiling) b.enumeration_ceiling = *sf.ceiling;

  const std::optional<alpc::Countermodel> hit = alpc::find_countermodel(f, b, sf.jobs);
  if (!hit) {
    if (json_out) {
      json j;
      j["command"] = "search";
      j["formula"] = alpc::to_string(f);
      j["found"] = false;
      emit(j);
    } else {
      std::cout << "no countermodel within the bounds\n";
    }
    return kTrue;
  }
  if (json_out) {
    json j;
    j["command"] = "search";
    j["formula"] = alpc::to_string(f);
    j["found"] = true;
    j["index"] = hit->index;
    j["world"] = hit->world;
    j["model"] = alpc::model_to_json(hit->model);
    emit(j);
  } else {
    std::cout << "countermodel at index " << hit->index << ", world '" << hit->world
              << "':\n"
              << alpc::model_to_json(hit->model).dump(2) << '\n';
  }
  return kFalse;
}

int run_closure(const std::string& formula_text, const std::string& theta_text,
                bool json_out) {
  const alpc::Formula f = alpc::parse_formula(formula_text);
  const std::vector<alpc::Chain> theta = theta_from_flag(theta_text);
  const alpc::ClosureResult r = alpc::closure(f, theta);
  if (json_out) {
    json members = json::array();
    for (const auto& g : r.formulas) members.push_back(alpc::to_string(g));
    json chains = json::array();
    for (const auto& c : theta) chains.push_back(alpc::to_string(c));
    json j;
    j["command"] = "closure";
    j["formula"] = alpc::to_string(f);
    j["theta"] = std::move(chains);
    j["size"] = r.size();
    j["members"] = std::move(members);
    emit(j);
  } else {
    for (const auto& g : r.formulas) std::cout << alpc::to_string(g) << '\n';
  }
  return kTrue;
}

int run_prove(const std::string& proof_path, bool json_out) {
  const alpc::Proof pf = alpc::load_proof(proof_path);
  const alpc::Verdict v = alpc::verify(pf);
  if (json_out) {
    json j;
    j["command"] = "prove";
    j["accepted"] = v.accepted;
    j["lines"] = pf.lines.size();
    if (v.accepted) {
      j["theorem"] = alpc::to_string(alpc::theorem_of(pf));
    } else {
      j["line"] = v.line;
      j["reason"] = v.reason;
    }
    emit(j);
  } else if (v.accepted) {
    std::cout << "accepted (" << pf.lines.size()
              << (pf.lines.size() == 1 ? " line)" : " lines)") << '\n';
  } else if (v.line == 0) {
    std::cout << "rejected: " << v.reason << '\n';
  } else {
    std::cout << "rejected at line " << v.line << ": " << v.reason << '\n';
  }
  return v.accepted ? kTrue : kFalse;
}

int run_fmt(const std::string& formula_text, bool json_out) {
  const alpc::Formula f = alpc::parse_formula(formula_text);
  if (auto v = alpc::nesting_violation(f))
    throw alpc::Error("ill-formed formula: chain '" + alpc::to_string(v->inner) +
                      "' occurs under '" + alpc::to_string(v->outer) + "'");
  if (json_out) {
    json j;
    j["command"] = "fmt";
    j["formula"] = alpc::to_string(f);
    emit(j);
  } else {
    std::cout << alpc::to_string(f) << '\n';
  }
  return kTrue;
}

int run_fixture(const std::string& name, const std::optional<std::string>& out_path) {
  if (name != "fig2") throw alpc::Error("unknown fixture '" + name + "'");
  const char* text = alpc::fixture_fig2_json();
  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) throw alpc::Error("cannot write '" + *out_path + "'");
    out << text;
  } else {
    std::cout << text;
  }
  return kTrue;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model checking, countermodel search, closure, and proof checking\n"
               "for an epistemic logic of chained awareness.\n"
               "exit codes: 0 = true/accepted/nothing found, 1 = false/rejected/"
               "countermodel found, 2 = usage or input error"};
  app.require_subcommand(1);
  bool json_out = false;

  std::string model_path, formula_text, theta_text, proof_path, fixture_name;
  std::optional<std::string> world, fixture_out;
  SearchFlags sf;

  CLI::App* check = app.add_subcommand("check", "evaluate a formula in a model");
  check->add_option("--model", model_path, "model file (JSON)")->required();
  check->add_option("--formula", formula_text, "formula to evaluate")->required();
  check->add_option("--world", world, "world to evaluate at (default: all worlds)");
  check->add_flag("--json", json_out, "machine-readable report");

  CLI::App* valid = app.add_subcommand("valid", "test truth at every world of a model");
  valid->add_option("--model", model_path, "model file (JSON)")->required();
  valid->add_option("--formula", formula_text, "formula to test")->required();
  valid->add_flag("--json", json_out, "machine-readable report");

  CLI::App* search = app.add_subcommand(
      "search", "look for a countermodel within bounds (exit 1 when found)");
  search->add_option("--formula", sf.formula, "formula to refute")->required();
  search->add_option("--max-worlds", sf.max_worlds, "largest world count to try")
      ->check(CLI::PositiveNumber);
  search->add_option("--agents", sf.agents, "agents, comma-separated: a,b")->required();
  search->add_option("--atoms", sf.atoms, "atoms, comma-separated: p,q");
  search->add_option("--theta", sf.theta, "chains, semicolon-separated: a;b;a,b");
  search->add_option("--jobs", sf.jobs, "worker threads")->check(CLI::PositiveNumber);
  search->add_option("--sample", sf.sample,
                     "sample N awareness assignments per skeleton instead of all");
  search->add_option("--seed", sf.seed, "seed for --sample");
  search->add_flag("--no-symmetry", sf.no_symmetry,
                   "do not quotient valuations by world renaming");
  search->add_option("--ceiling", sf.ceiling, "enumeration-estimate cutoff");
  search->add_flag("--json", json_out, "machine-readable report");

  CLI::App* closure = app.add_subcommand("closure", "list the closure of a formula");
  closure->add_option("--formula", formula_text, "formula to close")->required();
  closure->add_option("--theta", theta_text, "chains, semicolon-separated: a;b;a,b");
  closure->add_flag("--json", json_out, "machine-readable report");

  CLI::App* prove = app.add_subcommand("prove", "verify a derivation file");
  prove->add_option("--proof", proof_path, "proof file (JSON)")->required();
  prove->add_flag("--json", json_out, "machine-readable report");

  CLI::App* fmt = app.add_subcommand("fmt", "parse a formula and print it back");
  fmt->add_option("--formula", formula_text, "formula to format")->required();
  fmt->add_flag("--json", json_out, "machine-readable report");

  CLI::App* fixture = app.add_subcommand("fixture", "emit a bundled model");
  fixture->add_option("name", fixture_name, "fixture name (fig2)")->required();
  fixture->add_option("-o,--out", fixture_out, "write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kBadInput;  // help exits 0; any usage error is 2
  }

  try {
    if (*check) return run_check(model_path, formula_text, world, json_out);
    if (*valid) return run_valid(model_path, formula_text, json_out);
    if (*search) return run_search(sf, json_out);
    if (*closure) return run_closure(formula_text, theta_text, json_out);
    if (*prove) return run_prove(proof_path, json_out);
    if (*fmt) return run_fmt(formula_text, json_out);
    if (*fixture) return run_fixture(fixture_name, fixture_out);
  } catch (const alpc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;  // unreachable: require_subcommand(1)
}

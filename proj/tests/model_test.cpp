#include <catch2/catch_amalgamated.hpp>

#include "alpc/io.hpp"
#include "alpc/model.hpp"

using namespace alpc;

namespace {

ModelData small_data() {
  ModelData d;
  d.worlds = {"w1", "w2"};
  d.agents = {"a"};
  d.atoms = {"p"};
  d.valuation = {{"w1", {"p"}}, {"w2", {}}};
  d.access = {{"a", {{"w1", "w2"}}}};
  d.awareness = {{"a", {"p"}}};
  return d;
}

}  // namespace

TEST_CASE("validate accepts the bundled fixture") {
  Model m = fig2_model();
  CHECK(m.worlds() == std::vector<std::string>{"w1", "w2", "w3", "w4", "w5"});
  CHECK(m.agents().size() == 2);
  CHECK(m.atoms() == std::vector<std::string>{"pa", "pb", "q"});
  CHECK(m.theta().size() == 5);
  CHECK(m.atom_true("w1", "q"));
  CHECK_FALSE(m.atom_true("w5", "pa"));
  CHECK(m.awareness(Chain{"a"}) == std::set<std::string>{"pa", "pb", "q"});
  CHECK(m.awareness(Chain{"a", "b", "a"}) == std::set<std::string>{"pa", "pb"});
  // lookup is up to canonical equivalence
  CHECK(m.has_chain(Chain{"a", "a", "b"}));
  CHECK(m.awareness(Chain{"a", "a", "b"}) == m.awareness(Chain{"a", "b"}));
  CHECK_FALSE(m.has_chain(Chain{"b", "a", "b"}));
  CHECK_THROWS_AS(m.awareness(Chain{"b", "a", "b"}), Error);
}

TEST_CASE("fixture file and embedded fixture agree") {
  std::string bundled = read_file(std::string(ALPC_SOURCE_DIR) + "/data/fig2.json");
  CHECK(bundled == fixture_fig2_json());
}

TEST_CASE("indistinguishability groups by awareness-visible valuation") {
  Model m = fig2_model();
  // aware of pa, pb only: w1 and w2 agree on both
  Partition expect({{"w1", "w2"}, {"w3"}, {"w4"}, {"w5"}});
  CHECK(m.indist(Chain{"a", "b", "a"}) == expect);
  // aware of everything: all five valuations are distinct
  CHECK(m.indist(Chain{"a"}) == Partition::identity(m.worlds()));
  CHECK(m.indist(Chain{"b"}) == expect);
}

TEST_CASE("reach_c composes access with indistinguishability") {
  Model m = fig2_model();
  CHECK(m.reach_c(Chain{"a", "b", "a"}) ==
        Partition({{"w1", "w2", "w3"}, {"w4", "w5"}}));
  CHECK(m.reach_c(Chain{"a"}) == m.access(Agent{"a"}));
  CHECK(m.reach_c(Chain{"b"}) == Partition({{"w1", "w2", "w4"}, {"w3", "w5"}}));
}

TEST_CASE("validation reports all problems at once") {
  ModelData d = small_data();
  d.valuation["w9"] = {"p"};
  d.valuation["w1"] = {"zap"};
  d.access["b"] = {{"w1"}};
  d.awareness["a,a"] = {};  // equivalent to "a" but empty: two problems
  try {
    validate(d);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.problems.size() >= 4);
    std::string all = e.what();
    CHECK(all.find("unknown world 'w9'") != std::string::npos);
    CHECK(all.find("unknown atom 'zap'") != std::string::npos);
    CHECK(all.find("unknown agent 'b'") != std::string::npos);
    CHECK(all.find("'a,a' is empty") != std::string::npos);
  }
}

TEST_CASE("validation enforces partition shape") {
  ModelData d = small_data();
  d.access["a"] = {{"w1"}};  // w2 not covered
  CHECK_THROWS_WITH(validate(d), Catch::Matchers::ContainsSubstring("not covered"));

  d = small_data();
  d.access["a"] = {{"w1", "w2"}, {"w2"}};
  CHECK_THROWS_WITH(validate(d),
                    Catch::Matchers::ContainsSubstring("occurs in two blocks"));

  d = small_data();
  d.access["a"] = {{"w1", "w2"}, {}};
  CHECK_THROWS_WITH(validate(d), Catch::Matchers::ContainsSubstring("empty partition block"));
}

TEST_CASE("validation enforces awareness conditions") {
  ModelData d = small_data();
  d.atoms = {"p", "q"};
  d.awareness = {{"a", {"p"}}, {"a,a", {"q"}}};  // same chain, different sets
  CHECK_THROWS_WITH(validate(d),
                    Catch::Matchers::ContainsSubstring("different awareness sets"));

  d = small_data();
  d.atoms = {"p", "q"};
  d.valuation["w1"] = {"p", "q"};
  d.agents = {"a", "b"};
  d.access["b"] = {{"w1"}, {"w2"}};
  d.awareness = {{"a", {"p"}}, {"a,b", {"p", "q"}}};  // longer chain aware of more
  CHECK_THROWS_WITH(validate(d), Catch::Matchers::ContainsSubstring("not monotone"));

  d = small_data();
  d.awareness = {{"a", {"p"}}, {"b,c", {"p"}}};  // unknown agents in chain
  CHECK_THROWS_WITH(validate(d), Catch::Matchers::ContainsSubstring("unknown agent"));

  d = small_data();
  d.awareness = {{"a", {"p"}}, {",", {"p"}}};
  CHECK_THROWS_WITH(validate(d), Catch::Matchers::ContainsSubstring("awareness"));
}

TEST_CASE("validation accepts equivalent keys with equal sets") {
  ModelData d = small_data();
  d.awareness = {{"a", {"p"}}, {"a,a", {"p"}}};
  Model m = validate(d);
  CHECK(m.theta().size() == 1);
  CHECK(m.awareness(Chain{"a"}) == std::set<std::string>{"p"});
}

TEST_CASE("model JSON round trip") {
  Model m = fig2_model();
  json j = model_to_json(m);
  Model back = validate(model_data_from_json(j));
  CHECK(back.worlds() == m.worlds());
  CHECK(back.atoms() == m.atoms());
  CHECK(model_to_json(back) == j);
  for (const auto& theta : m.theta()) CHECK(back.awareness(theta) == m.awareness(theta));
  for (const auto& a : m.agents()) CHECK(back.access(a) == m.access(a));
}

TEST_CASE("model JSON rejects malformed input") {
  CHECK_THROWS_AS(model_from_json_text("{"), Error);
  CHECK_THROWS_AS(model_from_json_text("[]"), Error);
  CHECK_THROWS_AS(model_from_json_text("{\"worlds\": [\"w\"]}"), Error);
  CHECK_THROWS_WITH(
      model_from_json_text(
          R"({"worlds": 3, "agents": [], "atoms": [], "valuation": {},
              "access": {}, "awareness": {}})"),
      Catch::Matchers::ContainsSubstring("'worlds'"));
}

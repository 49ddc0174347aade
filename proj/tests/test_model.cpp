#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "archopt/errors.hpp"
#include "archopt/model.hpp"
#include "archopt/model_io.hpp"

using namespace archopt;

namespace {

Component make_component(std::string id, std::vector<std::string> ops, double fp = 0.0) {
  Component c;
  c.id = id;
  c.failure_prob = fp;
  for (auto& op : ops) c.operations.push_back(Operation{op, id});
  return c;
}

// front on n1 calls back on n2 over l12; actor drives front.
ArchitectureModel two_tier() {
  ArchitectureModel m;
  m.name = "two_tier";
  m.components = {make_component("front", {"handle"}, 0.01),
                  make_component("back", {"fetch"}, 0.02)};
  m.nodes = {Node{"n1", 1.0, {"front"}}, Node{"n2", 2.0, {"back"}}};
  m.links = {CommLink{"l12", {"n1", "n2"}, 0.001}};
  Scenario s;
  s.id = "s1";
  s.probability = 1.0;
  s.workload = ClosedWorkload{2, 1.0};
  s.messages = {
      Message{"m1", std::string(kActor), "handle", 0.002, 1.0, 0.0, std::nullopt},
      Message{"m2", "front", "fetch", 0.004, 2.0, 1.5, std::string("json")},
  };
  m.scenarios = {s};
  return m;
}

bool has_rule(const ValidationReport& r, const std::string& rule) {
  for (const auto& v : r.violations)
    if (v.rule == rule) return true;
  return false;
}

}  // namespace

TEST_CASE("element lookup by id") {
  ArchitectureModel m = two_tier();
  CHECK(m.find_component("front") != nullptr);
  CHECK(m.find_component("nope") == nullptr);
  CHECK(m.find_node("n2")->speed_factor == doctest::Approx(2.0));
  CHECK(m.find_link("l12") != nullptr);
  CHECK(m.find_scenario("s1") != nullptr);
  CHECK(m.find_operation("fetch")->owner == "back");
  CHECK(m.owner_of("handle")->id == "front");
  CHECK(m.owner_of("nope") == nullptr);
  REQUIRE(m.nodes_of("front").size() == 1);
  CHECK(m.nodes_of("front")[0]->id == "n1");
  CHECK(m.primary_node_of("back")->id == "n2");
  CHECK(m.link_between("n2", "n1")->id == "l12");
  CHECK(m.link_between("n1", "n1") == nullptr);
  CHECK(m.id_in_use("m2"));
  CHECK(m.id_in_use("handle"));
  CHECK_FALSE(m.id_in_use("fresh"));
}

TEST_CASE("valid model passes validation") {
  CHECK(validate(two_tier()).ok());
}

TEST_CASE("validation flags duplicate ids") {
  ArchitectureModel m = two_tier();
  m.components.push_back(make_component("front", {"other"}));
  m.nodes[0].deployed.push_back("front");
  auto r = validate(m);
  CHECK(has_rule(r, "duplicate-component-id"));
}

TEST_CASE("validation flags undeployed component") {
  ArchitectureModel m = two_tier();
  m.nodes[1].deployed.clear();
  CHECK(has_rule(validate(m), "undeployed-component"));
}

TEST_CASE("validation flags bad numeric ranges") {
  ArchitectureModel m = two_tier();
  m.components[0].failure_prob = 1.5;
  m.nodes[0].speed_factor = 0.0;
  m.scenarios[0].messages[1].repetitions = 0.5;
  m.scenarios[0].messages[1].exec_time_s = -1.0;
  auto r = validate(m);
  CHECK(has_rule(r, "failure-prob-range"));
  CHECK(has_rule(r, "speed-factor-positive"));
  CHECK(has_rule(r, "repetitions-min"));
  CHECK(has_rule(r, "exec-time-nonneg"));
}

TEST_CASE("validation flags dangling references") {
  ArchitectureModel m = two_tier();
  m.nodes[0].deployed.push_back("ghost");
  m.links[0].endpoints[1] = "n9";
  m.scenarios[0].messages[1].sender = "ghostc";
  m.scenarios[0].messages[1].receiver_op = "ghost_op";
  auto r = validate(m);
  CHECK(has_rule(r, "dangling-deployment-ref"));
  CHECK(has_rule(r, "dangling-link-endpoint"));
  CHECK(has_rule(r, "dangling-sender-ref"));
  CHECK(has_rule(r, "dangling-operation-ref"));
}

TEST_CASE("validation requires actor-initiated non-empty scenarios") {
  ArchitectureModel m = two_tier();
  m.scenarios[0].messages[0].sender = "front";
  CHECK(has_rule(validate(m), "first-message-not-actor"));
  m.scenarios[0].messages.clear();
  CHECK(has_rule(validate(m), "empty-message-sequence"));
}

TEST_CASE("validation requires scenario probabilities to sum to 1") {
  ArchitectureModel m = two_tier();
  m.scenarios.push_back(m.scenarios[0]);
  m.scenarios[1].id = "s2";
  m.scenarios[1].messages[0].id = "m1b";
  m.scenarios[1].messages[1].id = "m2b";
  m.scenarios[0].probability = 0.5;
  m.scenarios[1].probability = 0.4;
  auto r = validate(m);
  REQUIRE(has_rule(r, "scenario-prob-sum"));
  for (const auto& v : r.violations)
    if (v.rule == "scenario-prob-sum")
      CHECK(v.detail == "probabilities must sum to 1");
}

TEST_CASE("architectural weight spans [1,2] on a node chain") {
  // a - b - c: the middle node has max degree, ends half of it
  ArchitectureModel m;
  m.name = "chain";
  m.nodes = {Node{"a", 1.0, {}}, Node{"b", 1.0, {}}, Node{"c", 1.0, {}}};
  m.links = {CommLink{"ab", {"a", "b"}, 0.0}, CommLink{"bc", {"b", "c"}, 0.0}};
  CHECK(architectural_weight(m, "b") == doctest::Approx(2.0));
  CHECK(architectural_weight(m, "a") == doctest::Approx(1.5));
  CHECK(architectural_weight(m, "c") == doctest::Approx(1.5));
  CHECK_THROWS_AS((void)architectural_weight(m, "zz"), UnknownElement);
}

TEST_CASE("architectural weight of components counts interactions") {
  ArchitectureModel m = two_tier();
  // front: 1 op + sends m2 + receives m1 + 1 deployment = 4 (max)
  // back:  1 op + receives m2 + 1 deployment = 3
  CHECK(architectural_weight(m, "front") == doctest::Approx(2.0));
  CHECK(architectural_weight(m, "back") == doctest::Approx(1.0 + 3.0 / 4.0));
}

TEST_CASE("weight is 1 for elements without connections") {
  ArchitectureModel m;
  m.nodes = {Node{"solo", 1.0, {}}};
  CHECK(architectural_weight(m, "solo") == doctest::Approx(1.0));
}

TEST_CASE("connections resolve links between hosting nodes") {
  ArchitectureModel m = two_tier();
  auto hops = connections_of(m, m.scenarios[0]);
  REQUIRE(hops.size() == 2);
  CHECK(hops[0].link == nullptr);  // actor message
  REQUIRE(hops[1].link != nullptr);
  CHECK(hops[1].link->id == "l12");
}

TEST_CASE("co-located messages traverse no link") {
  ArchitectureModel m = two_tier();
  m.nodes[0].deployed = {"front", "back"};
  m.nodes[1].deployed = {};
  m.nodes.pop_back();
  m.links.clear();
  auto hops = connections_of(m, m.scenarios[0]);
  CHECK(hops[1].link == nullptr);
}

TEST_CASE("missing link between hosting nodes is an error") {
  ArchitectureModel m = two_tier();
  m.links.clear();
  CHECK_THROWS_AS((void)connections_of(m, m.scenarios[0]), MissingLink);
}

TEST_CASE("call forest nests replies under the active reception") {
  ArchitectureModel m;
  m.name = "forest";
  m.components = {make_component("a", {"op_a"}), make_component("b", {"op_b"}),
                  make_component("c", {"op_c"}), make_component("d", {"op_d"})};
  m.nodes = {Node{"n", 1.0, {"a", "b", "c", "d"}}};
  Scenario s;
  s.id = "s";
  s.probability = 1.0;
  s.messages = {
      Message{"m0", std::string(kActor), "op_a", 0, 1, 0, {}},
      Message{"m1", "a", "op_b", 0, 1, 0, {}},
      Message{"m2", "b", "op_c", 0, 1, 0, {}},
      Message{"m3", "a", "op_d", 0, 1, 0, {}},  // pops b and c first
  };
  m.scenarios = {s};
  auto f = scenario_call_forest(m, m.scenarios[0]);
  REQUIRE(f.roots == std::vector<int>{0});
  CHECK(f.parent == std::vector<int>{-1, 0, 1, 0});
  CHECK(f.children[0] == std::vector<int>{1, 3});
  CHECK(f.children[1] == std::vector<int>{2});
  CHECK(f.children[2].empty());
}

TEST_CASE("actor messages start fresh roots") {
  ArchitectureModel m;
  m.components = {make_component("a", {"op_a"}), make_component("b", {"op_b"})};
  m.nodes = {Node{"n", 1.0, {"a", "b"}}};
  Scenario s;
  s.id = "s";
  s.messages = {
      Message{"m0", std::string(kActor), "op_a", 0, 1, 0, {}},
      Message{"m1", std::string(kActor), "op_b", 0, 1, 0, {}},
      Message{"m2", "b", "op_a", 0, 1, 0, {}},
  };
  m.scenarios = {s};
  auto f = scenario_call_forest(m, m.scenarios[0]);
  CHECK(f.roots == std::vector<int>{0, 1});
  CHECK(f.parent[2] == 1);

  // after the reset, a is no longer on the stack
  m.scenarios[0].messages[2].sender = "a";
  CHECK_THROWS_AS((void)scenario_call_forest(m, m.scenarios[0]), UnresolvableBehavior);
}

TEST_CASE("json round trip preserves the model") {
  ArchitectureModel m = two_tier();
  json doc = model_to_json(m);
  ArchitectureModel back = model_from_json(doc);
  CHECK(model_to_json(back).dump(2) == doc.dump(2));
  CHECK(back.scenarios[0].messages[1].data_format == std::string("json"));
}

TEST_CASE("loader fills defaults") {
  json doc = json::parse(R"({
    "name": "tiny",
    "components": [{"id": "c1", "operations": ["op1"]}],
    "nodes": [{"id": "n1", "deployed": ["c1"]}],
    "links": [],
    "scenarios": [{
      "id": "s1", "probability": 1.0,
      "workload": {"population": 1},
      "messages": [{"id": "m1", "sender": "$actor", "receiver_op": "op1"}]
    }]
  })");
  ArchitectureModel m = model_from_json(doc);
  CHECK(m.components[0].failure_prob == doctest::Approx(0.0));
  CHECK(m.nodes[0].speed_factor == doctest::Approx(1.0));
  CHECK(m.scenarios[0].workload.think_time_s == doctest::Approx(0.0));
  CHECK(m.scenarios[0].messages[0].repetitions == doctest::Approx(1.0));
  CHECK(m.scenarios[0].messages[0].exec_time_s == doctest::Approx(0.0));
  CHECK_FALSE(m.scenarios[0].messages[0].data_format.has_value());
}

TEST_CASE("loader rejects malformed documents") {
  CHECK_THROWS_AS((void)model_from_json(json::parse("[1,2]")), ParseError);
  CHECK_THROWS_AS((void)model_from_json(json::parse(R"({"name": "x"})")), ParseError);

  json doc = json::parse(R"({
    "name": "tiny",
    "components": [{"id": "c1", "operations": ["op1"], "typo_key": 3}],
    "nodes": [{"id": "n1", "deployed": ["c1"]}],
    "links": [],
    "scenarios": []
  })");
  CHECK_THROWS_AS((void)model_from_json(doc), ParseError);

  doc = json::parse(R"({
    "name": "tiny",
    "components": [{"id": "c1", "operations": ["op1"]}],
    "nodes": [{"id": "n1", "deployed": ["c1"]}],
    "links": [{"id": "l", "endpoints": ["n1"]}],
    "scenarios": []
  })");
  CHECK_THROWS_AS((void)model_from_json(doc), ParseError);
}

TEST_CASE("loader reports invalid models with rule details") {
  json doc = json::parse(R"({
    "name": "bad",
    "components": [{"id": "c1", "operations": ["op1"]}],
    "nodes": [{"id": "n1", "deployed": ["c1"]}],
    "links": [],
    "scenarios": [
      {"id": "s1", "probability": 0.5, "workload": {"population": 1},
       "messages": [{"id": "m1", "sender": "$actor", "receiver_op": "op1"}]},
      {"id": "s2", "probability": 0.4, "workload": {"population": 1},
       "messages": [{"id": "m2", "sender": "$actor", "receiver_op": "op1"}]}
    ]
  })");
  try {
    (void)model_from_json(doc);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("probabilities must sum to 1") != std::string::npos);
  }
}

TEST_CASE("file save and load round trip") {
  namespace fs = std::filesystem;
  fs::path p = fs::temp_directory_path() / "archopt_model_io_test.json";
  ArchitectureModel m = two_tier();
  save_model(m, p.string());
  ArchitectureModel back = load_model(p.string());
  CHECK(model_to_json(back) == model_to_json(m));
  fs::remove(p);
  CHECK_THROWS_AS((void)load_model(p.string()), ParseError);
}

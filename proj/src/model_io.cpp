#include "archopt/model_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "archopt/errors.hpp"

namespace archopt {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
}

void expect_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
}

// Unknown keys are rejected so typos surface as parse errors instead of
// silently dropped fields.
void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(where, "unknown key \"" + item.key() + "\"");
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing required key \"") + key + "\"");
  return *it;
}

std::string get_string(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) fail(where, std::string("\"") + key + "\" must be a string");
  return v.get<std::string>();
}

double get_number(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) fail(where, std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

double get_number_or(const json& j, const char* key, const std::string& where,
                     double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) fail(where, std::string("\"") + key + "\" must be a number");
  return it->get<double>();
}

Component parse_component(const json& j, std::size_t idx) {
  std::string where = "components[" + std::to_string(idx) + "]";
  expect_object(j, where);
  check_keys(j, where, {"id", "failure_prob", "operations"});
  Component c;
  c.id = get_string(j, "id", where);
  c.failure_prob = get_number_or(j, "failure_prob", where, 0.0);
  const json& ops = require(j, "operations", where);
  expect_array(ops, where + ".operations");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const json& op = ops[i];
    if (!op.is_string()) fail(where + ".operations[" + std::to_string(i) + "]", "expected a string id");
    c.operations.push_back(Operation{op.get<std::string>(), c.id});
  }
  return c;
}

Node parse_node(const json& j, std::size_t idx) {
  std::string where = "nodes[" + std::to_string(idx) + "]";
  expect_object(j, where);
  check_keys(j, where, {"id", "speed_factor", "deployed"});
  Node n;
  n.id = get_string(j, "id", where);
  n.speed_factor = get_number_or(j, "speed_factor", where, 1.0);
  const json& dep = require(j, "deployed", where);
  expect_array(dep, where + ".deployed");
  for (std::size_t i = 0; i < dep.size(); ++i) {
    if (!dep[i].is_string()) fail(where + ".deployed[" + std::to_string(i) + "]", "expected a string id");
    n.deployed.push_back(dep[i].get<std::string>());
  }
  return n;
}

CommLink parse_link(const json& j, std::size_t idx) {
  std::string where = "links[" + std::to_string(idx) + "]";
  expect_object(j, where);
  check_keys(j, where, {"id", "endpoints", "failure_prob"});
  CommLink l;
  l.id = get_string(j, "id", where);
  l.failure_prob = get_number_or(j, "failure_prob", where, 0.0);
  const json& ep = require(j, "endpoints", where);
  expect_array(ep, where + ".endpoints");
  if (ep.size() != 2) fail(where + ".endpoints", "expected exactly two node ids");
  for (std::size_t i = 0; i < 2; ++i) {
    if (!ep[i].is_string()) fail(where + ".endpoints", "expected string node ids");
    l.endpoints[i] = ep[i].get<std::string>();
  }
  return l;
}

Message parse_message(const json& j, const std::string& scenario_where, std::size_t idx) {
  std::string where = scenario_where + ".messages[" + std::to_string(idx) + "]";
  expect_object(j, where);
  check_keys(j, where,
             {"id", "sender", "receiver_op", "exec_time_s", "rep", "msg_size_kb", "format"});
  Message m;
  m.id = get_string(j, "id", where);
  m.sender = get_string(j, "sender", where);
  m.receiver_op = get_string(j, "receiver_op", where);
  m.exec_time_s = get_number_or(j, "exec_time_s", where, 0.0);
  m.repetitions = get_number_or(j, "rep", where, 1.0);
  m.msg_size_kb = get_number_or(j, "msg_size_kb", where, 0.0);
  if (auto it = j.find("format"); it != j.end()) {
    if (!it->is_string()) fail(where, "\"format\" must be a string");
    m.data_format = it->get<std::string>();
  }
  return m;
}

Scenario parse_scenario(const json& j, std::size_t idx) {
  std::string where = "scenarios[" + std::to_string(idx) + "]";
  expect_object(j, where);
  check_keys(j, where, {"id", "probability", "workload", "messages"});
  Scenario s;
  s.id = get_string(j, "id", where);
  s.probability = get_number(j, "probability", where);
  const json& wl = require(j, "workload", where);
  expect_object(wl, where + ".workload");
  check_keys(wl, where + ".workload", {"population", "think_time_s"});
  const json& pop = require(wl, "population", where + ".workload");
  if (!pop.is_number_integer()) fail(where + ".workload", "\"population\" must be an integer");
  s.workload.population = pop.get<int>();
  s.workload.think_time_s = get_number_or(wl, "think_time_s", where + ".workload", 0.0);
  const json& msgs = require(j, "messages", where);
  expect_array(msgs, where + ".messages");
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    s.messages.push_back(parse_message(msgs[i], where, i));
  }
  return s;
}

}  // namespace

ArchitectureModel model_from_json(const json& doc) {
  expect_object(doc, "document");
  check_keys(doc, "document", {"name", "components", "nodes", "links", "scenarios"});
  ArchitectureModel m;
  m.name = get_string(doc, "name", "document");

  const json& comps = require(doc, "components", "document");
  expect_array(comps, "components");
  for (std::size_t i = 0; i < comps.size(); ++i) m.components.push_back(parse_component(comps[i], i));

  const json& nodes = require(doc, "nodes", "document");
  expect_array(nodes, "nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) m.nodes.push_back(parse_node(nodes[i], i));

  const json& links = require(doc, "links", "document");
  expect_array(links, "links");
  for (std::size_t i = 0; i < links.size(); ++i) m.links.push_back(parse_link(links[i], i));

  const json& scens = require(doc, "scenarios", "document");
  expect_array(scens, "scenarios");
  for (std::size_t i = 0; i < scens.size(); ++i) m.scenarios.push_back(parse_scenario(scens[i], i));

  ValidationReport report = validate(m);
  if (!report.ok()) {
    std::ostringstream msg;
    msg << "model is invalid (" << report.violations.size() << " violation";
    if (report.violations.size() != 1) msg << "s";
    msg << "):";
    for (const Violation& v : report.violations) {
      msg << "\n  [" << v.rule << "] " << v.element << ": " << v.detail;
    }
    throw ValidationError(msg.str());
  }
  return m;
}

ArchitectureModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return model_from_json(doc);
}

json model_to_json(const ArchitectureModel& model) {
  json doc;
  doc["name"] = model.name;
  doc["components"] = json::array();
  for (const Component& c : model.components) {
    json jc;
    jc["id"] = c.id;
    jc["failure_prob"] = c.failure_prob;
    jc["operations"] = json::array();
    for (const Operation& op : c.operations) jc["operations"].push_back(op.id);
    doc["components"].push_back(std::move(jc));
  }
  doc["nodes"] = json::array();
  for (const Node& n : model.nodes) {
    json jn;
    jn["id"] = n.id;
    jn["speed_factor"] = n.speed_factor;
    jn["deployed"] = n.deployed;
    doc["nodes"].push_back(std::move(jn));
  }
  doc["links"] = json::array();
  for (const CommLink& l : model.links) {
    json jl;
    jl["id"] = l.id;
    jl["endpoints"] = json::array({l.endpoints[0], l.endpoints[1]});
    jl["failure_prob"] = l.failure_prob;
    doc["links"].push_back(std::move(jl));
  }
  doc["scenarios"] = json::array();
  for (const Scenario& s : model.scenarios) {
    json js;
    js["id"] = s.id;
    js["probability"] = s.probability;
    js["workload"] = {{"population", s.workload.population},
                      {"think_time_s", s.workload.think_time_s}};
    js["messages"] = json::array();
    for (const Message& msg : s.messages) {
      json jm;
      jm["id"] = msg.id;
      jm["sender"] = msg.sender;
      jm["receiver_op"] = msg.receiver_op;
      jm["exec_time_s"] = msg.exec_time_s;
      jm["rep"] = msg.repetitions;
      jm["msg_size_kb"] = msg.msg_size_kb;
      if (msg.data_format) jm["format"] = *msg.data_format;
      js["messages"].push_back(std::move(jm));
    }
    doc["scenarios"].push_back(std::move(js));
  }
  return doc;
}

void save_model(const ArchitectureModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << model_to_json(model).dump(2) << "\n";
}

json report_to_json(const ValidationReport& report) {
  json doc;
  doc["ok"] = report.ok();
  doc["violations"] = json::array();
  for (const Violation& v : report.violations) {
    doc["violations"].push_back(
        {{"element", v.element}, {"rule", v.rule}, {"detail", v.detail}});
  }
  return doc;
}

}  // namespace archopt

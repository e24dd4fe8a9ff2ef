#include <fstream>
#include <sstream>

#include "json.hpp"
#include "semgame/game.hpp"

namespace semgame {

using nlohmann::json;

SchemaError::SchemaError(const std::string& pointer, const std::string& msg)
    : std::runtime_error("schema error at " + (pointer.empty() ? std::string("/") : pointer) + ": " + msg),
      pointer_(pointer) {}

namespace {

const json& require(const json& obj, const std::string& key, const std::string& at) {
  if (!obj.is_object())
    throw SchemaError(at, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaError(at + "/" + key, "missing required field");
  return *it;
}

std::uint64_t as_index(const json& j, const std::string& at) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
    throw SchemaError(at, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

Formula as_formula(const json& j, const std::string& at) {
  if (!j.is_string())
    throw SchemaError(at, "expected an LTL string");
  try {
    return parse(j.get<std::string>());
  } catch (const ParseError& e) {
    throw SchemaError(at, e.what());
  }
}

std::vector<std::string> as_names(const json& j, const std::string& at) {
  if (!j.is_array())
    throw SchemaError(at, "expected an array of proposition names");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string())
      throw SchemaError(at + "/" + std::to_string(i), "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

}  // namespace

Game game_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw SchemaError("", "expected an object");

  Game game;
  if (auto it = doc.find("aps"); it != doc.end()) {
    if (it->contains("inputs"))
      game.set_inputs(as_names((*it)["inputs"], "/aps/inputs"));
    if (it->contains("outputs"))
      game.set_outputs(as_names((*it)["outputs"], "/aps/outputs"));
  }

  const json& vertices = require(doc, "vertices", "");
  if (!vertices.is_array())
    throw SchemaError("/vertices", "expected an array");
  std::vector<std::optional<unsigned>> vertex_prio;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string at = "/vertices/" + std::to_string(i);
    const json& v = vertices[i];
    if (as_index(require(v, "id", at), at + "/id") != i)
      throw SchemaError(at + "/id", "vertex ids must be dense and in order starting at 0");
    auto owner = as_index(require(v, "owner", at), at + "/owner");
    if (owner > 1)
      throw SchemaError(at + "/owner", "expected 0 (system) or 1 (environment)");
    std::optional<Labelling> label;
    if (v.contains("master")) {
      Labelling l;
      l.master = as_formula(v["master"], at + "/master");
      if (v.contains("monitors")) {
        const json& mons = v["monitors"];
        if (!mons.is_array())
          throw SchemaError(at + "/monitors", "expected an array of formula lists");
        for (std::size_t m = 0; m < mons.size(); ++m) {
          const std::string mat = at + "/monitors/" + std::to_string(m);
          if (!mons[m].is_array())
            throw SchemaError(mat, "expected an array of formulae");
          Monitor mon{static_cast<int>(m), {}};
          for (std::size_t k = 0; k < mons[m].size(); ++k)
            mon.obligations.push_back(as_formula(mons[m][k], mat + "/" + std::to_string(k)));
          l.monitors.push_back(std::move(mon));
        }
      }
      if (v.contains("monitor_ids")) {
        const json& ids = v["monitor_ids"];
        if (!ids.is_array() || ids.size() != l.monitors.size())
          throw SchemaError(at + "/monitor_ids", "expected one id per monitor");
        for (std::size_t m = 0; m < ids.size(); ++m)
          l.monitors[m].id = static_cast<int>(as_index(ids[m], at + "/monitor_ids/" + std::to_string(m)));
      }
      label = std::move(l);
    }
    if (v.contains("prio"))
      vertex_prio.push_back(static_cast<unsigned>(as_index(v["prio"], at + "/prio")));
    else
      vertex_prio.push_back(std::nullopt);
    game.add_vertex(owner == 0 ? Player::System : Player::Environment, std::move(label));
  }

  const auto start = as_index(require(doc, "start", ""), "/start");
  if (start >= game.vertex_count())
    throw SchemaError("/start", "start vertex does not exist");
  game.set_start(static_cast<VertexId>(start));

  const json& edges = require(doc, "edges", "");
  if (!edges.is_array())
    throw SchemaError("/edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string at = "/edges/" + std::to_string(i);
    const json& e = edges[i];
    auto src = as_index(require(e, "src", at), at + "/src");
    auto dst = as_index(require(e, "dst", at), at + "/dst");
    if (src >= game.vertex_count())
      throw SchemaError(at + "/src", "vertex does not exist");
    if (dst >= game.vertex_count())
      throw SchemaError(at + "/dst", "vertex does not exist");
    unsigned prio;
    if (e.contains("prio"))
      prio = static_cast<unsigned>(as_index(e["prio"], at + "/prio"));
    else if (vertex_prio[src])
      prio = *vertex_prio[src];  // legacy vertex priorities move onto outgoing edges
    else
      throw SchemaError(at + "/prio", "missing required field");
    Move move;
    if (e.contains("move")) {
      const json& m = e["move"];
      if (!m.is_object())
        throw SchemaError(at + "/move", "expected an object of proposition values");
      for (auto it = m.begin(); it != m.end(); ++it) {
        if (!it.value().is_boolean())
          throw SchemaError(at + "/move/" + it.key(), "expected a boolean");
        move[it.key()] = it.value().get<bool>();
      }
    }
    game.add_edge(static_cast<VertexId>(src), static_cast<VertexId>(dst), prio, std::move(move));
  }
  return game;
}

std::string game_to_json(const Game& game, int indent) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["aps"] = {{"inputs", game.inputs()}, {"outputs", game.outputs()}};
  doc["start"] = game.start();
  json vertices = json::array();
  for (VertexId v = 0; v < game.vertex_count(); ++v) {
    const Vertex& vx = game.vertex(v);
    json jv = {{"id", v}, {"owner", index(vx.owner)}};
    if (vx.label) {
      jv["master"] = to_string(vx.label->master);
      json mons = json::array();
      json ids = json::array();
      bool identity = true;
      for (std::size_t m = 0; m < vx.label->monitors.size(); ++m) {
        const Monitor& mon = vx.label->monitors[m];
        json obligations = json::array();
        for (Formula f : mon.obligations)
          obligations.push_back(to_string(f));
        mons.push_back(std::move(obligations));
        ids.push_back(mon.id);
        identity = identity && mon.id == static_cast<int>(m);
      }
      jv["monitors"] = std::move(mons);
      if (!identity)
        jv["monitor_ids"] = std::move(ids);
    }
    vertices.push_back(std::move(jv));
  }
  doc["vertices"] = std::move(vertices);
  json edges = json::array();
  for (const Edge& e : game.edges()) {
    json je = {{"src", e.src}, {"dst", e.dst}, {"prio", e.priority}};
    if (!e.move.empty())
      je["move"] = e.move;
    edges.push_back(std::move(je));
  }
  doc["edges"] = std::move(edges);
  return doc.dump(indent);
}

Game load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return game_from_json(ss.str());
}

void store_game(const Game& game, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << game_to_json(game) << '\n';
}

}  // namespace semgame

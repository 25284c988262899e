#include "mars/jsonld.hpp"

#include "json.hpp"
#include "mars/embedding.hpp"

namespace mars {

using nlohmann::json;

namespace {

constexpr const char* kContextVocab = "urn:memory-graph:vocab#";

json payload_to_json(const MemoryNode& n) {
  json j;
  switch (n.node_type) {
    case NodeType::Episodic: {
      const auto& p = std::get<EpisodicPayload>(n.type_payload);
      j["event"] = p.event;
      j["context"] = p.context;
      j["participants"] = p.participants;
      j["valence"] = p.valence;
      break;
    }
    case NodeType::Semantic: {
      const auto& p = std::get<SemanticPayload>(n.type_payload);
      j["concept"] = p.concept_name;
      j["relations"] = p.relations;
      j["confidence"] = p.confidence;
      j["generality"] = p.generality;
      break;
    }
    case NodeType::Social: {
      const auto& p = std::get<SocialPayload>(n.type_payload);
      j["entity"] = p.entity;
      j["relationshipType"] = p.relationship_type;
      j["attributes"] = p.attributes;
      j["interactionHistory"] = p.interaction_history;
      break;
    }
    case NodeType::Task: {
      const auto& p = std::get<TaskPayload>(n.type_payload);
      j["goal"] = p.goal;
      j["status"] = task_status_name(p.status);
      j["dependencies"] = p.dependencies;
      j["priority"] = p.priority;
      if (p.deadline) j["deadline"] = *p.deadline;
      break;
    }
  }
  return j;
}

TypePayload payload_from_json(NodeType type, const json& j) {
  switch (type) {
    case NodeType::Episodic: {
      EpisodicPayload p;
      p.event = j.value("event", "");
      p.context = j.value("context", "");
      p.participants = j.value("participants", std::vector<std::string>{});
      p.valence = j.value("valence", 0.0);
      return p;
    }
    case NodeType::Semantic: {
      SemanticPayload p;
      p.concept_name = j.value("concept", "");
      p.relations = j.value("relations", std::vector<std::string>{});
      p.confidence = j.value("confidence", 1.0);
      p.generality = j.value("generality", 0.0);
      return p;
    }
    case NodeType::Social: {
      SocialPayload p;
      p.entity = j.value("entity", "");
      p.relationship_type = j.value("relationshipType", "");
      p.attributes = j.value("attributes", std::map<std::string, std::string>{});
      p.interaction_history =
          j.value("interactionHistory", std::vector<std::string>{});
      return p;
    }
    case NodeType::Task: {
      TaskPayload p;
      p.goal = j.value("goal", "");
      auto status = task_status_from_name(j.value("status", "active"));
      if (!status)
        throw Error(ErrorCode::MalformedDocument, "unknown task status");
      p.status = *status;
      p.dependencies = j.value("dependencies", std::vector<NodeId>{});
      p.priority = j.value("priority", 0.5);
      if (j.contains("deadline")) p.deadline = j["deadline"].get<Turn>();
      return p;
    }
  }
  return EpisodicPayload{};
}

}  // namespace

std::string export_jsonld(const MemoryStore& store) {
  StoreSnapshot snap = store.snapshot();
  json doc;
  doc["@context"] = json{{"@vocab", kContextVocab}};

  json graph = json::array();
  for (const auto& n : snap.nodes) {
    json nd;
    nd["@id"] = n.id;
    nd["@type"] = node_type_name(n.node_type);
    nd["content"] = n.content;
    nd["createdAt"] = n.created_at;
    nd["lastAccess"] = n.last_access;
    nd["accessCount"] = n.access_count;
    nd["sensitivity"] = n.sensitivity;
    nd["weight"] = n.weight;
    nd["provenance"] = json{{"source", n.provenance.source},
                            {"actor", n.provenance.actor},
                            {"consent", n.provenance.consent},
                            {"parents", n.provenance.parents}};
    nd["payload"] = payload_to_json(n);
    graph.push_back(std::move(nd));
  }
  doc["@graph"] = std::move(graph);

  json edges = json::array();
  for (const auto& e : snap.edges) {
    edges.push_back(json{{"subject", e.src},
                         {"predicate", relation_name(e.relation)},
                         {"object", e.dst}});
  }
  doc["edges"] = std::move(edges);

  json tombs = json::array();
  for (const auto& t : snap.tombstones) {
    tombs.push_back(json{{"@id", t.id},
                         {"@type", node_type_name(t.node_type)},
                         {"contentHash", t.content_hash},
                         {"actor", t.actor},
                         {"parents", t.parents},
                         {"summary", t.summary}});
  }
  doc["tombstones"] = std::move(tombs);

  doc["budget"] = snap.budget;
  doc["typeBudgets"] = json{{"Episodic", snap.type_budgets[0]},
                            {"Semantic", snap.type_budgets[1]},
                            {"Social", snap.type_budgets[2]},
                            {"Task", snap.type_budgets[3]}};
  doc["clock"] = snap.clock;
  doc["nextNodeSeq"] = snap.next_node_seq;
  doc["knownUsers"] = snap.known_users;

  return doc.dump(2) + "\n";
}

MemoryStore import_jsonld(const std::string& bytes, ScoringConfig scoring) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
  if (!doc.is_object() || !doc.contains("@graph") || !doc.contains("budget"))
    throw Error(ErrorCode::MalformedDocument, "missing @graph or budget");

  StoreSnapshot snap;
  snap.budget = doc["budget"].get<Weight>();
  if (doc.contains("typeBudgets")) {
    const json& tb = doc["typeBudgets"];
    snap.type_budgets = {tb.value("Episodic", Weight{0}),
                         tb.value("Semantic", Weight{0}),
                         tb.value("Social", Weight{0}),
                         tb.value("Task", Weight{0})};
  } else {
    Weight q = snap.budget / kNumNodeTypes;
    snap.type_budgets = {q, q, q, snap.budget - 3 * q};
  }
  snap.clock = doc.value("clock", Turn{0});
  snap.next_node_seq = doc.value("nextNodeSeq", int64_t{1});
  snap.known_users = doc.value("knownUsers", std::vector<std::string>{});

  for (const json& td : doc.value("tombstones", json::array())) {
    Tombstone t;
    t.id = td.at("@id").get<NodeId>();
    auto type = node_type_from_name(td.value("@type", "Episodic"));
    if (!type) throw Error(ErrorCode::UnknownPredicate, "unknown @type");
    t.node_type = *type;
    t.content_hash = td.value("contentHash", "");
    t.actor = td.value("actor", "");
    t.parents = td.value("parents", std::vector<NodeId>{});
    t.summary = td.value("summary", false);
    snap.tombstones.push_back(std::move(t));
  }

  std::unordered_set<NodeId> ids;
  for (const auto& t : snap.tombstones) ids.insert(t.id);
  for (const json& nd : doc["@graph"]) {
    if (!nd.contains("@id") || !nd.contains("@type"))
      throw Error(ErrorCode::MalformedDocument, "node missing @id or @type");
    MemoryNode n;
    n.id = nd["@id"].get<NodeId>();
    auto type = node_type_from_name(nd["@type"].get<std::string>());
    if (!type)
      throw Error(ErrorCode::UnknownPredicate,
                  "unknown @type: " + nd["@type"].get<std::string>());
    n.node_type = *type;
    n.content = nd.value("content", "");
    n.content_embedding = embed_text(n.content);
    n.created_at = nd.value("createdAt", Turn{0});
    n.last_access = nd.value("lastAccess", n.created_at);
    n.access_count = nd.value("accessCount", int64_t{0});
    n.sensitivity = nd.value("sensitivity", 0.0);
    if (n.sensitivity < 0.0 || n.sensitivity > 1.0)
      throw Error(ErrorCode::MalformedDocument, "sensitivity outside [0,1]");
    n.weight = nd.value("weight", Weight{1});
    if (n.weight < 1)
      throw Error(ErrorCode::MalformedDocument, "weight must be >= 1");
    if (nd.contains("provenance")) {
      const json& pv = nd["provenance"];
      n.provenance.source = pv.value("source", "");
      n.provenance.actor = pv.value("actor", "");
      n.provenance.consent = pv.value("consent", true);
      n.provenance.parents = pv.value("parents", std::vector<NodeId>{});
    }
    n.type_payload = payload_from_json(n.node_type, nd.value("payload", json::object()));
    ids.insert(n.id);
    snap.nodes.push_back(std::move(n));
  }

  for (const auto& n : snap.nodes)
    for (const auto& p : n.provenance.parents)
      if (!ids.count(p))
        throw Error(ErrorCode::DanglingReference, "unknown parent: " + p);

  for (const json& ed : doc.value("edges", json::array())) {
    MemoryEdge e;
    e.src = ed.at("subject").get<NodeId>();
    e.dst = ed.at("object").get<NodeId>();
    auto rel = relation_from_name(ed.at("predicate").get<std::string>());
    if (!rel)
      throw Error(ErrorCode::UnknownPredicate,
                  "unknown predicate: " + ed.at("predicate").get<std::string>());
    e.relation = *rel;
    if (!ids.count(e.src))
      throw Error(ErrorCode::DanglingReference, "unknown subject: " + e.src);
    if (!ids.count(e.dst))
      throw Error(ErrorCode::DanglingReference, "unknown object: " + e.dst);
    snap.edges.push_back(e);
  }

  return MemoryStore::restore(snap, std::move(scoring));
}

}  // namespace mars

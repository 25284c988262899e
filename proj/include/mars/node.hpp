#pragma once
// Memory node and edge types of the store schema. A node is one retention
// unit: immutable content plus mutable access metadata. Content changes are
// copy-on-write: a transformed node is a new node linked by derivesFrom.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mars/embedding.hpp"

namespace mars {

using NodeId = std::string;
using Turn = int64_t;
using Weight = int64_t;  // tokens

enum class NodeType { Episodic, Semantic, Social, Task };

const char* node_type_name(NodeType t);
std::optional<NodeType> node_type_from_name(const std::string& name);

enum class Relation {
  temporalNext,
  derivesFrom,
  isA,
  partOf,
  friendOf,
  colleagueOf,
  reportsTo,
  requiresDep,
  attachesToGoal,
};

const char* relation_name(Relation r);
std::optional<Relation> relation_from_name(const std::string& name);

// Edge-set partition used by centrality and recall traversals.
bool is_semantic_relation(Relation r);
bool is_social_relation(Relation r);
// Structural dependency relations; these define provenance closure.
bool is_dependency_relation(Relation r);

struct MemoryEdge {
  NodeId src;
  NodeId dst;
  Relation relation = Relation::derivesFrom;

  bool operator==(const MemoryEdge&) const = default;
};

struct EpisodicPayload {
  std::string event;
  std::string context;
  std::vector<std::string> participants;
  double valence = 0.0;
};

struct SemanticPayload {
  std::string concept_name;
  std::vector<std::string> relations;
  double confidence = 1.0;
  double generality = 0.0;
};

struct SocialPayload {
  std::string entity;
  std::string relationship_type;
  std::map<std::string, std::string> attributes;
  std::vector<std::string> interaction_history;
};

enum class TaskStatus { Active, Completed, Cancelled };
const char* task_status_name(TaskStatus s);
std::optional<TaskStatus> task_status_from_name(const std::string& name);

struct TaskPayload {
  std::string goal;
  TaskStatus status = TaskStatus::Active;
  std::vector<NodeId> dependencies;
  double priority = 0.5;
  std::optional<Turn> deadline;
};

using TypePayload =
    std::variant<EpisodicPayload, SemanticPayload, SocialPayload, TaskPayload>;

struct Provenance {
  std::string source;            // where the memory came from
  std::string actor;             // person/entity the memory is attributed to
  bool consent = true;
  std::vector<NodeId> parents;   // first entry is the structural parent
};

struct MemoryNode {
  NodeId id;
  std::string content;
  Embedding content_embedding{};
  NodeType node_type = NodeType::Episodic;
  Turn created_at = 0;
  double sensitivity = 0.0;     // s in [0,1]
  Weight weight = 1;            // tokens, >= 1
  Provenance provenance;
  int64_t access_count = 0;
  Turn last_access = 0;
  TypePayload type_payload;

  bool is_task() const { return node_type == NodeType::Task; }
  const TaskPayload* task() const { return std::get_if<TaskPayload>(&type_payload); }
  TaskPayload* task() { return std::get_if<TaskPayload>(&type_payload); }
};

// Insert request; the store assigns id, timestamps and the embedding.
struct NodeDraft {
  std::string content;
  NodeType node_type = NodeType::Episodic;
  double sensitivity = 0.0;
  Weight weight = 0;  // 0 means "token count of content"
  Provenance provenance;
  TypePayload type_payload;
};

}  // namespace mars

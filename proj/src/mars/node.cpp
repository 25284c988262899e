#include "mars/node.hpp"

namespace mars {

const char* node_type_name(NodeType t) {
  switch (t) {
    case NodeType::Episodic: return "Episodic";
    case NodeType::Semantic: return "Semantic";
    case NodeType::Social: return "Social";
    case NodeType::Task: return "Task";
  }
  return "Episodic";
}

std::optional<NodeType> node_type_from_name(const std::string& name) {
  if (name == "Episodic") return NodeType::Episodic;
  if (name == "Semantic") return NodeType::Semantic;
  if (name == "Social") return NodeType::Social;
  if (name == "Task") return NodeType::Task;
  return std::nullopt;
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::temporalNext: return "temporalNext";
    case Relation::derivesFrom: return "derivesFrom";
    case Relation::isA: return "isA";
    case Relation::partOf: return "partOf";
    case Relation::friendOf: return "friendOf";
    case Relation::colleagueOf: return "colleagueOf";
    case Relation::reportsTo: return "reportsTo";
    case Relation::requiresDep: return "requires";
    case Relation::attachesToGoal: return "attachesToGoal";
  }
  return "derivesFrom";
}

std::optional<Relation> relation_from_name(const std::string& name) {
  if (name == "temporalNext") return Relation::temporalNext;
  if (name == "derivesFrom") return Relation::derivesFrom;
  if (name == "isA") return Relation::isA;
  if (name == "partOf") return Relation::partOf;
  if (name == "friendOf") return Relation::friendOf;
  if (name == "colleagueOf") return Relation::colleagueOf;
  if (name == "reportsTo") return Relation::reportsTo;
  if (name == "requires") return Relation::requiresDep;
  if (name == "attachesToGoal") return Relation::attachesToGoal;
  return std::nullopt;
}

bool is_semantic_relation(Relation r) {
  return r == Relation::isA || r == Relation::partOf;
}

bool is_social_relation(Relation r) {
  return r == Relation::friendOf || r == Relation::colleagueOf ||
         r == Relation::reportsTo;
}

bool is_dependency_relation(Relation r) {
  return r == Relation::derivesFrom || r == Relation::requiresDep;
}

const char* task_status_name(TaskStatus s) {
  switch (s) {
    case TaskStatus::Active: return "active";
    case TaskStatus::Completed: return "completed";
    case TaskStatus::Cancelled: return "cancelled";
  }
  return "active";
}

std::optional<TaskStatus> task_status_from_name(const std::string& name) {
  if (name == "active") return TaskStatus::Active;
  if (name == "completed") return TaskStatus::Completed;
  if (name == "cancelled") return TaskStatus::Cancelled;
  return std::nullopt;
}

}  // namespace mars

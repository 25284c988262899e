#pragma once
// Deterministic scenario scripting: seeded worlds of entities, relations,
// goal DAGs and a 200-600 turn event stream with repeating entities,
// cross-session references and marked privacy probes. Identical
// (type, seed) pairs produce byte-identical scripts.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mars/node.hpp"

namespace mars::fifa {

enum class ScenarioType {
  SocialGathering,
  ProjectCollaboration,
  LearningSession,
  CrisisManagement,
  PersonalReflection,
};
inline constexpr int kNumScenarios = 5;

const char* scenario_name(ScenarioType t);
std::optional<ScenarioType> scenario_from_name(const std::string& name);

enum class EventKind {
  Introduce,
  SocialChat,
  PreferenceReveal,
  FactTeach,
  GoalAssign,
  GoalStep,
  RecallQuery,
  PrivacyProbe,
  ThreadContinue,
  ConsolidationPrompt,
  EraseRequest,
};

const char* event_kind_name(EventKind k);

struct ScriptEvent {
  Turn turn = 0;
  int actor = 0;                    // responding agent
  std::vector<int> participants;    // stores that perceive the event
  EventKind kind = EventKind::SocialChat;
  std::string entity;
  std::string attribute;
  std::string value;
  std::string text;                 // perception content
  int thread_id = -1;
  int goal_id = -1;
  int step = -1;
  bool privacy_opportunity = false;
};

struct GroundTruthGoal {
  int goal_id = 0;
  std::string name;
  double weight = 1.0;
  int steps = 1;
  std::vector<int> prereq_goals;
  int owner = 0;  // agent index
};

struct FactUpdate {
  Turn turn = 0;
  std::string value;
};

struct GroundTruth {
  std::vector<std::string> entities;
  // entity -> attribute -> timeline of values (latest at or before a turn wins)
  std::map<std::string, std::map<std::string, std::vector<FactUpdate>>> facts;
  std::vector<GroundTruthGoal> goals;
  std::vector<Turn> privacy_opportunity_turns;
  std::map<std::string, std::string> secrets;  // entity -> sensitive phrase
  std::vector<Turn> eligible_social_turns;     // reference opportunities
  std::map<std::string, Turn> introduced_at;

  // Ground-truth value of (entity, attribute) as of `turn`, if any.
  std::optional<std::string> fact_at(const std::string& entity,
                                     const std::string& attribute,
                                     Turn turn) const;
};

struct ScenarioScript {
  ScenarioType type = ScenarioType::SocialGathering;
  uint64_t seed = 0;
  int num_agents = 15;
  std::vector<ScriptEvent> events;  // one per turn
  GroundTruth truth;

  std::string to_json() const;
  static ScenarioScript from_json(const std::string& text);
  std::string content_hash() const;
};

ScenarioScript generate_scenario(ScenarioType type, uint64_t seed);

}  // namespace mars::fifa

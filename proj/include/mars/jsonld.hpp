#pragma once
// JSON-LD serialization of a store. Nodes are @id/@type documents, edges are
// subject-predicate-object statements over the fixed relation vocabulary.
// Index structures are derived state and never serialized; import rebuilds
// them. The round trip is lossless and byte-stable.

#include <string>

#include "mars/store.hpp"

namespace mars {

std::string export_jsonld(const MemoryStore& store);
MemoryStore import_jsonld(const std::string& bytes, ScoringConfig scoring = {});

}  // namespace mars

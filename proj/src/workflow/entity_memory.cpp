#include "agwf/entity_memory.hpp"

#include "agwf/error.hpp"

namespace agwf {

void EntityMemory::store(const std::string& key, EntityValue value) {
    if (key.empty()) throw Error(ErrorCode::UnknownEntityKey, "entity key must be non-empty");
    if (!entries_.try_emplace(key, std::move(value)).second) {
        throw Error(ErrorCode::DuplicateKey, "entity '" + key + "' is already stored");
    }
}

void EntityMemory::store_log(const std::string& key, EventLog log) {
    store(key, std::make_shared<const EventLog>(std::move(log)));
}

const EntityValue& EntityMemory::load(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw Error(ErrorCode::UnknownEntityKey, "no entity stored under '" + key + "'");
    return it->second;
}

LogHandle EntityMemory::load_log(const std::string& key) const {
    const auto& value = load(key);
    if (const auto* log = std::get_if<LogHandle>(&value)) return *log;
    throw Error(ErrorCode::EntityTypeMismatch, "entity '" + key + "' holds text, not an event log");
}

}  // namespace agwf

#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>

#include "agwf/event_log.hpp"

namespace agwf {

using LogHandle = std::shared_ptr<const EventLog>;
using EntityValue = std::variant<LogHandle, std::string>;

/// Write-once key/value store carrying artifacts between tasks of one
/// execution. Copies are cheap snapshots: stored logs are shared and immutable.
class EntityMemory {
public:
    /// Throws DuplicateKey if `key` is already bound.
    void store(const std::string& key, EntityValue value);
    void store_log(const std::string& key, EventLog log);

    /// Throws UnknownEntityKey.
    const EntityValue& load(const std::string& key) const;
    /// Throws UnknownEntityKey, or EntityTypeMismatch if the key holds text.
    LogHandle load_log(const std::string& key) const;

    bool contains(const std::string& key) const { return entries_.count(key) != 0; }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::map<std::string, EntityValue>& entries() const noexcept { return entries_; }

private:
    std::map<std::string, EntityValue> entries_;
};

}  // namespace agwf

#pragma once

#include "trippred/errors.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace trippred {

/// A point in decimal degrees. Both components must be finite.
struct Coordinate {
    double lon = 0.0;
    double lat = 0.0;

    bool finite() const { return std::isfinite(lon) && std::isfinite(lat); }

    friend bool operator==(const Coordinate&, const Coordinate&) = default;
    friend auto operator<=>(const Coordinate&, const Coordinate&) = default;
};

/// One realized journey. `via` lists intermediate transit stops; every trip
/// that reaches a distance computation must be single leg (empty via).
/// `yday` (day of year) orders trips inside one entity's history.
struct Trip {
    Coordinate origin;
    Coordinate destination;
    std::vector<Coordinate> via;
    int yday = 0;

    bool single_leg() const { return via.empty(); }

    friend bool operator==(const Trip&, const Trip&) = default;
};

/// Equality of the (origin, destination) pair; y-day is ignored. This is the
/// identity used when counting trip frequencies in a pool.
inline bool od_equal(const Trip& a, const Trip& b) {
    return a.origin == b.origin && a.destination == b.destination;
}

/// Total order on (origin.lon, origin.lat, destination.lon, destination.lat),
/// used for deterministic tie-breaking among equally scored trips.
inline bool od_less(const Trip& a, const Trip& b) {
    return std::tie(a.origin.lon, a.origin.lat, a.destination.lon, a.destination.lat) <
           std::tie(b.origin.lon, b.origin.lat, b.destination.lon, b.destination.lat);
}

/// Identity of one behavioral unit: a user restricted to one weekly time slot.
/// The comparison order (ticket, weekday, hour) is the tie-break order used
/// throughout the library.
struct EntityKey {
    std::string ticket_id;
    int wday = 1;  // 1..7
    int dhour = 0; // 0..23

    std::string str() const {
        return ticket_id + "/w" + std::to_string(wday) + "/h" + std::to_string(dhour);
    }

    friend bool operator==(const EntityKey&, const EntityKey&) = default;
    friend auto operator<=>(const EntityKey&, const EntityKey&) = default;
};

namespace detail {

inline void check_trip(const Trip& t, const EntityKey& key) {
    if (!t.origin.finite() || !t.destination.finite()) {
        throw InvalidTripError("non-finite coordinate in trip of entity " + key.str());
    }
    for (const Coordinate& c : t.via) {
        if (!c.finite()) {
            throw InvalidTripError("non-finite via coordinate in trip of entity " + key.str());
        }
    }
    if (t.yday < 1) {
        throw InvalidTripError("trip y-day must be >= 1 for entity " + key.str());
    }
}

} // namespace detail

/// A (user, time-slot) unit owning an ordered trip history and, optionally,
/// one held-out test trip. Construction normalizes the history order by y-day
/// and validates the domain invariants; instances are immutable afterwards.
class Entity {
public:
    Entity(EntityKey key, std::vector<Trip> history, std::optional<Trip> test_trip = std::nullopt)
        : key_(std::move(key)), history_(std::move(history)), test_trip_(std::move(test_trip)) {
        if (history_.empty()) {
            throw InvalidTripError("entity " + key_.str() + " has an empty history");
        }
        for (const Trip& t : history_) detail::check_trip(t, key_);
        std::sort(history_.begin(), history_.end(),
                  [](const Trip& a, const Trip& b) { return a.yday < b.yday; });
        for (std::size_t i = 1; i < history_.size(); ++i) {
            if (history_[i].yday == history_[i - 1].yday) {
                throw DuplicateYdayError("duplicate y-day " + std::to_string(history_[i].yday) +
                                         " in history of entity " + key_.str());
            }
        }
        if (test_trip_) {
            detail::check_trip(*test_trip_, key_);
            if (test_trip_->yday <= history_.back().yday) {
                throw InvalidTripError("test trip y-day must follow the history of entity " +
                                       key_.str());
            }
        }
    }

    const EntityKey& key() const { return key_; }
    const std::vector<Trip>& history() const { return history_; }
    const std::optional<Trip>& test_trip() const { return test_trip_; }

    /// History length L.
    int length() const { return static_cast<int>(history_.size()); }

    friend bool operator==(const Entity&, const Entity&) = default;

private:
    EntityKey key_;
    std::vector<Trip> history_;
    std::optional<Trip> test_trip_;
};

inline int entity_length(const Entity& e) { return e.length(); }

/// Provenance carried by a dataset: where the entities came from and which
/// filters or generator parameters produced them.
struct DatasetMeta {
    std::string source;                // file name, "synthetic", or merge description
    std::string l_filter;              // e.g. "L=3 policy=earliest"
    std::optional<std::uint64_t> seed; // generator seed when synthetic
    std::vector<std::string> notes;

    friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

/// Frozen collection of entities, sorted by key. Duplicate keys are rejected
/// at construction; all downstream code treats a dataset as read-only.
class Dataset {
public:
    Dataset() = default;

    Dataset(std::vector<Entity> entities, DatasetMeta meta)
        : entities_(std::move(entities)), meta_(std::move(meta)) {
        std::sort(entities_.begin(), entities_.end(),
                  [](const Entity& a, const Entity& b) { return a.key() < b.key(); });
        for (std::size_t i = 1; i < entities_.size(); ++i) {
            if (entities_[i].key() == entities_[i - 1].key()) {
                throw DuplicateEntityError("duplicate entity key " + entities_[i].key().str());
            }
        }
    }

    const std::vector<Entity>& entities() const { return entities_; }
    const DatasetMeta& meta() const { return meta_; }
    std::size_t size() const { return entities_.size(); }
    bool empty() const { return entities_.empty(); }

    const Entity* find(const EntityKey& key) const {
        auto it = std::lower_bound(entities_.begin(), entities_.end(), key,
                                   [](const Entity& e, const EntityKey& k) { return e.key() < k; });
        if (it == entities_.end() || !(it->key() == key)) return nullptr;
        return &*it;
    }

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::vector<Entity> entities_;
    DatasetMeta meta_;
};

} // namespace trippred

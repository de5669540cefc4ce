#pragma once

#include "trippred/detail/parallel.hpp"
#include "trippred/domain.hpp"
#include "trippred/errors.hpp"
#include "trippred/metrics.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace trippred {

/// One entity's history partitioned into a training prefix and a validation
/// suffix, both ordered by y-day.
struct SplitHistory {
    EntityKey key;
    std::vector<Trip> trn;
    std::vector<Trip> vld;
};

using SplitMap = std::map<EntityKey, SplitHistory>;

/// Splits a history of length L into the first ceil(L/2) trips (training)
/// and the remaining floor(L/2) trips (validation).
inline SplitHistory split_entity(const Entity& e) {
    const std::size_t l = e.history().size();
    if (l < 2) {
        throw CannotSplitError("entity " + e.key().str() + " has only " + std::to_string(l) +
                               " trip(s); need at least 2 to split");
    }
    const std::size_t trn_len = (l + 1) / 2;
    SplitHistory s;
    s.key = e.key();
    s.trn.assign(e.history().begin(), e.history().begin() + static_cast<std::ptrdiff_t>(trn_len));
    s.vld.assign(e.history().begin() + static_cast<std::ptrdiff_t>(trn_len), e.history().end());
    return s;
}

inline SplitMap split_dataset(const Dataset& ds) {
    SplitMap out;
    for (const Entity& e : ds.entities()) out.emplace(e.key(), split_entity(e));
    return out;
}

struct NeighborEntry {
    EntityKey key;
    double distance = 0.0;

    friend bool operator==(const NeighborEntry&, const NeighborEntry&) = default;
};

/// The usefulness neighborhood of one entity: all entities whose training
/// history is at least as close to the owner's validation history as the
/// owner's own training history. The owner is always a member; the relation
/// is not symmetric across entities. Members are sorted ascending by
/// distance, ties by key order.
struct NeighborList {
    EntityKey owner;
    double self_dist = 0.0;
    std::vector<NeighborEntry> neighbors;
    std::size_t skipped_mismatched = 0; // ordered variant: candidates with unaligned lengths

    friend bool operator==(const NeighborList&, const NeighborList&) = default;
};

namespace detail {

/// Per-entity row ranges inside a flat point table.
struct HistoryRows {
    std::size_t trn_begin = 0, trn_len = 0;
    std::size_t vld_begin = 0, vld_len = 0;
};

/// All training and validation points of a dataset in one row-major buffer,
/// entities in key order.
struct FlatSplits {
    std::size_t dim = 4;
    std::vector<double> rows;
    std::vector<HistoryRows> entities;

    PointSeq trn(std::size_t e) const {
        return {rows.data() + entities[e].trn_begin * dim, entities[e].trn_len, dim};
    }
    PointSeq vld(std::size_t e) const {
        return {rows.data() + entities[e].vld_begin * dim, entities[e].vld_len, dim};
    }
};

inline FlatSplits flatten_splits(const SplitMap& splits) {
    FlatSplits out;
    out.entities.reserve(splits.size());
    for (const auto& [key, split] : splits) {
        HistoryRows rows;
        rows.trn_begin = out.rows.size() / out.dim;
        rows.trn_len = split.trn.size();
        for (const Trip& t : split.trn) {
            const auto f = od_features(t);
            out.rows.insert(out.rows.end(), f.begin(), f.end());
        }
        rows.vld_begin = out.rows.size() / out.dim;
        rows.vld_len = split.vld.size();
        for (const Trip& t : split.vld) {
            const auto f = od_features(t);
            out.rows.insert(out.rows.end(), f.begin(), f.end());
        }
        out.entities.push_back(rows);
    }
    return out;
}

struct IndexNeighbor {
    std::size_t entity = 0;
    double distance = 0.0;
};

struct IndexNeighborList {
    double self_dist = 0.0;
    std::vector<IndexNeighbor> members; // ascending (distance, entity index)
    std::size_t skipped_mismatched = 0;
};

/// Neighborhood of one entity over flattened splits. Candidates are scanned
/// in index order; under the ordered variant, candidates whose training
/// length differs from the target's are skipped and counted.
inline IndexNeighborList neighbor_set_indexed(std::size_t target, const FlatSplits& fs,
                                              MetricVariant variant) {
    IndexNeighborList out;
    const PointSeq target_vld = fs.vld(target);
    out.self_dist = history_dist(variant, fs.trn(target), target_vld);
    for (std::size_t c = 0; c < fs.entities.size(); ++c) {
        if (variant == MetricVariant::ordered && fs.entities[c].trn_len != target_vld.n) {
            ++out.skipped_mismatched;
            continue;
        }
        const double d = history_dist(variant, fs.trn(c), target_vld);
        if (d <= out.self_dist) out.members.push_back({c, d});
    }
    std::sort(out.members.begin(), out.members.end(),
              [](const IndexNeighbor& a, const IndexNeighbor& b) {
                  if (a.distance != b.distance) return a.distance < b.distance;
                  return a.entity < b.entity;
              });
    return out;
}

inline std::vector<IndexNeighborList> all_neighbor_sets_indexed(const FlatSplits& fs,
                                                                MetricVariant variant,
                                                                unsigned threads = 1) {
    std::vector<IndexNeighborList> out(fs.entities.size());
    parallel_for(fs.entities.size(), threads,
                 [&](std::size_t i) { out[i] = neighbor_set_indexed(i, fs, variant); });
    return out;
}

} // namespace detail

/// Computes the neighborhood of `target` against every split in `splits`
/// (including itself).
inline NeighborList neighbor_set(const EntityKey& target, const SplitMap& splits,
                                 MetricVariant variant) {
    const auto it = splits.find(target);
    if (it == splits.end()) throw UnknownEntityError("unknown entity " + target.str());

    const detail::FlatSplits fs = detail::flatten_splits(splits);
    const std::size_t index =
        static_cast<std::size_t>(std::distance(splits.begin(), it));
    detail::IndexNeighborList raw;
    try {
        raw = detail::neighbor_set_indexed(index, fs, variant);
    } catch (const Error& e) {
        throw LengthMismatchError("entity " + target.str() + ": " + e.what());
    }

    std::vector<const EntityKey*> keys;
    keys.reserve(splits.size());
    for (const auto& [key, split] : splits) keys.push_back(&key);

    NeighborList out;
    out.owner = target;
    out.self_dist = raw.self_dist;
    out.skipped_mismatched = raw.skipped_mismatched;
    out.neighbors.reserve(raw.members.size());
    for (const auto& m : raw.members) out.neighbors.push_back({*keys[m.entity], m.distance});
    return out;
}

/// One NeighborList per entity. Entities are evaluated independently (in
/// parallel when `threads` > 1) and merged in key order, so the output is
/// identical for any thread count.
inline std::map<EntityKey, NeighborList> all_neighbor_sets(const Dataset& ds,
                                                           MetricVariant variant,
                                                           unsigned threads = 1) {
    const SplitMap splits = split_dataset(ds);
    const detail::FlatSplits fs = detail::flatten_splits(splits);
    std::vector<EntityKey> keys;
    keys.reserve(splits.size());
    for (const auto& [key, value] : splits) keys.push_back(key);

    std::vector<detail::IndexNeighborList> raw(keys.size());
    std::vector<std::string> failures(keys.size());
    detail::parallel_for(keys.size(), threads, [&](std::size_t i) {
        try {
            raw[i] = detail::neighbor_set_indexed(i, fs, variant);
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (!failures[i].empty()) {
            throw LengthMismatchError("entity " + keys[i].str() + ": " + failures[i]);
        }
    }

    std::map<EntityKey, NeighborList> out;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        NeighborList list;
        list.owner = keys[i];
        list.self_dist = raw[i].self_dist;
        list.skipped_mismatched = raw[i].skipped_mismatched;
        list.neighbors.reserve(raw[i].members.size());
        for (const auto& m : raw[i].members) {
            list.neighbors.push_back({keys[m.entity], m.distance});
        }
        out.emplace(keys[i], std::move(list));
    }
    return out;
}

} // namespace trippred

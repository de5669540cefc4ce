#pragma once

#include "trippred/domain.hpp"
#include "trippred/errors.hpp"
#include "trippred/metrics.hpp"
#include "trippred/selection.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <vector>

namespace trippred {

struct PooledTrip {
    Trip trip;
    int freq = 0;

    friend bool operator==(const PooledTrip&, const PooledTrip&) = default;
};

/// The pooled trips of a neighbor set. `trips` keeps the full multiset in
/// pool order; `distinct` groups them by exact (origin, destination)
/// coordinate equality, sorted in od-lexicographic order.
struct TripPool {
    std::vector<Trip> trips;
    std::vector<PooledTrip> distinct;

    std::size_t total() const { return trips.size(); }
};

namespace detail {

/// Largest pairwise distance over n items (0 when n < 2). `dist(i, j)` must
/// be symmetric. max is exact, so any evaluation order gives the same value.
template <typename DistFn>
double max_pairwise(std::size_t n, DistFn&& dist) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, dist(i, j));
    }
    return best;
}

/// Index of the best-scoring entry under the frequency-weighted similarity
/// sum. Entries must already be in tie-break order: the strict comparison
/// keeps the first of equally scored entries. Accumulation order (ascending
/// j, then one multiply) is fixed so every caller produces identical bits.
template <typename DistFn>
std::size_t best_scored_index(std::span<const int> freqs, double offset, DistFn&& dist) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < freqs.size(); ++j) {
            acc += static_cast<double>(freqs[j]) * (offset - dist(i, j));
        }
        const double score = static_cast<double>(freqs[i]) * acc;
        if (score > best_score) {
            best = i;
            best_score = score;
        }
    }
    return best;
}

} // namespace detail

/// Builds a TripPool from the full histories (training plus validation) of
/// the listed entities. Frequencies count exact coordinate repeats; y-day
/// plays no role in trip identity.
inline TripPool pool_trips(std::span<const EntityKey> members, const SplitMap& splits) {
    TripPool pool;
    for (const EntityKey& key : members) {
        const auto it = splits.find(key);
        if (it == splits.end()) throw UnknownEntityError("unknown entity " + key.str());
        const SplitHistory& s = it->second;
        pool.trips.insert(pool.trips.end(), s.trn.begin(), s.trn.end());
        pool.trips.insert(pool.trips.end(), s.vld.begin(), s.vld.end());
    }
    for (const Trip& t : pool.trips) {
        auto it = std::lower_bound(pool.distinct.begin(), pool.distinct.end(), t,
                                   [](const PooledTrip& p, const Trip& q) {
                                       return od_less(p.trip, q);
                                   });
        if (it != pool.distinct.end() && od_equal(it->trip, t)) {
            ++it->freq;
        } else {
            pool.distinct.insert(it, PooledTrip{t, 1});
        }
    }
    return pool;
}

/// The minimal offset that keeps every pairwise similarity in the pool
/// nonnegative: the largest pairwise trip distance (0 for a single distinct
/// trip).
inline double medoid_const(const TripPool& pool) {
    if (pool.trips.empty()) throw EmptyPoolError("medoid offset of an empty pool");
    return detail::max_pairwise(pool.distinct.size(), [&](std::size_t i, std::size_t j) {
        return seuc(pool.distinct[i].trip, pool.distinct[j].trip);
    });
}

/// The frequency-weighted medoid of the pool: the trip maximizing
/// f_x * sum_y f_y * (offset - seuc(x, y)) with offset = medoid_const(pool).
/// Equal scores are resolved in od-lexicographic order, so the result is
/// deterministic. The returned trip is always an element of the pool.
inline Trip representative_trip(const TripPool& pool) {
    if (pool.trips.empty()) throw EmptyPoolError("representative trip of an empty pool");
    const double offset = medoid_const(pool);
    std::vector<int> freqs;
    freqs.reserve(pool.distinct.size());
    for (const PooledTrip& p : pool.distinct) freqs.push_back(p.freq);
    const std::size_t best = detail::best_scored_index(
        freqs, offset, [&](std::size_t i, std::size_t j) {
            return seuc(pool.distinct[i].trip, pool.distinct[j].trip);
        });
    return pool.distinct[best].trip;
}

struct Prediction {
    Trip trip;
    int used_k = 0; // non-self neighbors actually pooled (k capped at availability)

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Predicts the next trip of `target` from its own history plus the k most
/// useful non-self neighbors (fewer when the neighborhood is smaller).
inline Prediction predict_trip(const EntityKey& target, int k,
                               const std::map<EntityKey, NeighborList>& neighbor_lists,
                               const SplitMap& splits) {
    if (k < 0) throw ValidationError("neighbor count k must be >= 0");
    const auto it = neighbor_lists.find(target);
    if (it == neighbor_lists.end()) throw UnknownEntityError("unknown entity " + target.str());
    const NeighborList& list = it->second;

    std::vector<EntityKey> members;
    members.push_back(target);
    for (const NeighborEntry& n : list.neighbors) {
        if (static_cast<int>(members.size()) - 1 >= k) break;
        if (n.key == target) continue;
        members.push_back(n.key);
    }
    const TripPool pool = pool_trips(members, splits);
    return Prediction{representative_trip(pool), static_cast<int>(members.size()) - 1};
}

} // namespace trippred

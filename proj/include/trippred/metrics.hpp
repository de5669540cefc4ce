#pragma once

#include "trippred/domain.hpp"
#include "trippred/errors.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace trippred {

/// The two history-level distance functions. `ordered` compares trips at the
/// same positions and therefore needs equally long histories; `all2all`
/// compares every trip of one history against every trip of the other and
/// works for any pair of lengths.
enum class MetricVariant { ordered, all2all };

inline std::string_view to_string(MetricVariant v) {
    return v == MetricVariant::ordered ? "ordered" : "all2all";
}

inline MetricVariant parse_variant(std::string_view s) {
    if (s == "ordered") return MetricVariant::ordered;
    if (s == "all2all") return MetricVariant::all2all;
    throw ValidationError("unknown metric variant '" + std::string(s) +
                          "' (expected ordered or all2all)");
}

/// The four features of a single-leg trip: origin lon/lat, destination lon/lat.
inline std::array<double, 4> od_features(const Trip& t) {
    return {t.origin.lon, t.origin.lat, t.destination.lon, t.destination.lat};
}

/// Squared Euclidean distance between two points of equal dimension.
/// Terms are accumulated in index order so results are reproducible.
inline double seuc(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

/// Squared Euclidean distance between two single-leg trips in the
/// 4-dimensional (origin, destination) coordinate space. Symmetric,
/// nonnegative, and zero exactly for coordinate-identical trips.
inline double seuc(const Trip& a, const Trip& b) {
    if (!a.single_leg() || !b.single_leg()) {
        throw InvalidTripError("seuc is defined for single-leg trips only (non-empty via list)");
    }
    const std::array<double, 4> fa = od_features(a);
    const std::array<double, 4> fb = od_features(b);
    return seuc(std::span<const double>(fa), std::span<const double>(fb));
}

/// Mean positional trip distance between two aligned histories: both
/// sequences must be sorted by realization day and equally long.
inline double dist_ordered(std::span<const Trip> p, std::span<const Trip> q) {
    if (p.size() != q.size()) {
        throw LengthMismatchError("ordered distance requires aligned histories (got " +
                                  std::to_string(p.size()) + " and " + std::to_string(q.size()) +
                                  " trips)");
    }
    if (p.empty()) throw EmptyHistoryError("ordered distance of empty histories");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += seuc(p[i], q[i]);
    return acc / static_cast<double>(p.size());
}

/// Mean trip distance over the full cross product of two histories. Lengths
/// may differ; symmetric in (p, q).
inline double dist_all2all(std::span<const Trip> p, std::span<const Trip> q) {
    if (p.empty() || q.empty()) throw EmptyHistoryError("all2all distance of an empty history");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) acc += seuc(p[i], q[j]);
    }
    return acc / (static_cast<double>(p.size()) * static_cast<double>(q.size()));
}

/// Similarity transform used by the medoid: `offset - seuc(x, y)`. The caller
/// must pick an offset at least as large as the distance.
inline double sim(const Trip& x, const Trip& y, double offset) {
    const double d = seuc(x, y);
    if (offset < d) {
        throw NegativeSimilarityError("similarity offset " + std::to_string(offset) +
                                      " is below the trip distance " + std::to_string(d));
    }
    return offset - d;
}

namespace detail {

/// Rows of a flat row-major point table, one point per row.
struct PointSeq {
    const double* data = nullptr;
    std::size_t n = 0;
    std::size_t dim = 0;

    std::span<const double> row(std::size_t i) const { return {data + i * dim, dim}; }
};

inline double dist_ordered(const PointSeq& p, const PointSeq& q) {
    if (p.n != q.n) {
        throw LengthMismatchError("ordered distance requires aligned histories (got " +
                                  std::to_string(p.n) + " and " + std::to_string(q.n) + " trips)");
    }
    if (p.n == 0) throw EmptyHistoryError("ordered distance of empty histories");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.n; ++i) acc += seuc(p.row(i), q.row(i));
    return acc / static_cast<double>(p.n);
}

inline double dist_all2all(const PointSeq& p, const PointSeq& q) {
    if (p.n == 0 || q.n == 0) throw EmptyHistoryError("all2all distance of an empty history");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t j = 0; j < q.n; ++j) acc += seuc(p.row(i), q.row(j));
    }
    return acc / (static_cast<double>(p.n) * static_cast<double>(q.n));
}

inline double history_dist(MetricVariant v, const PointSeq& p, const PointSeq& q) {
    return v == MetricVariant::ordered ? dist_ordered(p, q) : dist_all2all(p, q);
}

} // namespace detail

} // namespace trippred

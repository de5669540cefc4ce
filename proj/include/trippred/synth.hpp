#pragma once

#include "trippred/domain.hpp"
#include "trippred/errors.hpp"
#include "trippred/metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace trippred {

struct BoundingBox {
    double lon_min = 6.14, lon_max = 6.20;
    double lat_min = 48.64, lat_max = 48.70;

    bool valid() const { return lon_min < lon_max && lat_min < lat_max; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Parameters of the archetype-structured population generator. Each entity
/// follows one latent origin-destination pair; its trips are that pair plus
/// per-coordinate Gaussian noise, except that with probability
/// `outlier_rate` a trip is replaced by a fresh uniform OD inside the box.
struct SynthParams {
    std::vector<std::pair<int, int>> l_counts = {{6, 200}}; // (L, entity count)
    int n_archetypes = 4;
    BoundingBox bbox{};
    double noise_sigma = 0.002;  // degrees, per coordinate
    double outlier_rate = 0.1;
    std::uint64_t seed = 0;
    std::string id_prefix = "syn"; // distinct prefixes keep generated populations mergeable

    /// The generator defaults used by the experiment suite: `count` entities
    /// for every requested history length.
    static SynthParams defaults(std::vector<int> l_values, int count = 200,
                                std::uint64_t seed = 0) {
        SynthParams p;
        p.l_counts.clear();
        for (int l : l_values) p.l_counts.emplace_back(l, count);
        p.seed = seed;
        return p;
    }
};

struct SynthResult {
    Dataset dataset;
    std::map<EntityKey, int> labels; // entity -> archetype id
};

namespace detail {

inline void validate(const SynthParams& p) {
    if (p.l_counts.empty()) throw ValidationError("synth: need at least one (L, count) pair");
    for (const auto& [l, count] : p.l_counts) {
        if (l < 1) throw ValidationError("synth: history length L must be >= 1");
        if (count < 1) throw ValidationError("synth: entity count must be >= 1");
    }
    if (p.n_archetypes < 1) throw ValidationError("synth: need at least one archetype");
    if (!p.bbox.valid()) throw ValidationError("synth: empty bounding box");
    if (p.noise_sigma < 0) throw ValidationError("synth: noise sigma must be >= 0");
    if (p.outlier_rate < 0 || p.outlier_rate > 1) {
        throw ValidationError("synth: outlier rate must be in [0, 1]");
    }
    if (p.id_prefix.empty() || p.id_prefix.find(',') != std::string::npos ||
        p.id_prefix.find('#') != std::string::npos) {
        throw ValidationError("synth: id prefix must be non-empty and free of ',' and '#'");
    }
}

} // namespace detail

/// Generates a synthetic population in the ingest schema. Deterministic for
/// a fixed seed: archetypes, the assignment shuffle, and per-entity trips
/// are drawn from one generator in a fixed order.
inline SynthResult generate(const SynthParams& params) {
    detail::validate(params);
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> ulon(params.bbox.lon_min, params.bbox.lon_max);
    std::uniform_real_distribution<double> ulat(params.bbox.lat_min, params.bbox.lat_max);

    auto uniform_trip = [&](int yday) {
        Trip t;
        t.origin = {ulon(rng), ulat(rng)};
        t.destination = {ulon(rng), ulat(rng)};
        t.yday = yday;
        return t;
    };

    // Archetype ODs, resampled until every pair is well separated relative
    // to the noise level.
    const double min_sep = (10.0 * params.noise_sigma) * (10.0 * params.noise_sigma);
    std::vector<Trip> archetypes;
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 1000) {
            throw ValidationError("synth: could not place separated archetypes in the box; "
                                  "reduce noise sigma or the archetype count");
        }
        archetypes.clear();
        for (int a = 0; a < params.n_archetypes; ++a) archetypes.push_back(uniform_trip(1));
        bool ok = true;
        for (std::size_t i = 0; i < archetypes.size() && ok; ++i) {
            for (std::size_t j = i + 1; j < archetypes.size() && ok; ++j) {
                if (seuc(archetypes[i], archetypes[j]) < min_sep) ok = false;
            }
        }
        if (ok) break;
    }

    std::size_t total = 0;
    for (const auto& [l, count] : params.l_counts) total += static_cast<std::size_t>(count);

    // Archetypes are dealt round-robin over a seeded shuffle of the entities.
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> archetype_of(total);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        archetype_of[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(params.n_archetypes));
    }

    std::normal_distribution<double> noise(0.0, params.noise_sigma > 0 ? params.noise_sigma : 1.0);
    std::bernoulli_distribution is_outlier(params.outlier_rate);

    SynthResult out;
    std::vector<Entity> entities;
    entities.reserve(total);
    std::size_t index = 0;
    for (const auto& [l, count] : params.l_counts) {
        for (int c = 0; c < count; ++c, ++index) {
            char suffix[8];
            std::snprintf(suffix, sizeof(suffix), "%06zu", index);
            const EntityKey key{params.id_prefix + suffix, static_cast<int>(index % 7) + 1, 8};
            const int archetype = archetype_of[index];
            const Trip& base = archetypes[static_cast<std::size_t>(archetype)];

            std::vector<Trip> trips;
            trips.reserve(static_cast<std::size_t>(l) + 1);
            for (int i = 0; i < l + 1; ++i) {
                const int yday = i + 1;
                if (is_outlier(rng)) {
                    trips.push_back(uniform_trip(yday));
                    continue;
                }
                Trip t = base;
                t.yday = yday;
                if (params.noise_sigma > 0) {
                    t.origin.lon += noise(rng);
                    t.origin.lat += noise(rng);
                    t.destination.lon += noise(rng);
                    t.destination.lat += noise(rng);
                }
                trips.push_back(std::move(t));
            }
            Trip test = std::move(trips.back());
            trips.pop_back();
            entities.emplace_back(key, std::move(trips), std::move(test));
            out.labels.emplace(key, archetype);
        }
    }

    DatasetMeta meta;
    meta.source = "synthetic";
    {
        std::string ls;
        for (const auto& [l, count] : params.l_counts) {
            if (!ls.empty()) ls += ",";
            ls += "L=" + std::to_string(l) + "x" + std::to_string(count);
        }
        meta.l_filter = ls;
    }
    meta.seed = params.seed;
    out.dataset = Dataset(std::move(entities), std::move(meta));
    return out;
}

/// Writes the archetype assignment next to a generated dataset.
inline void export_labels_csv(const SynthResult& result, std::ostream& out) {
    out << "TicketId,w-day,d-hour,archetype\n";
    for (const auto& [key, archetype] : result.labels) {
        out << key.ticket_id << ',' << key.wday << ',' << key.dhour << ',' << archetype << '\n';
    }
}

} // namespace trippred

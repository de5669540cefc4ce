#pragma once

#include "trippred/detail/format.hpp"
#include "trippred/detail/parallel.hpp"
#include "trippred/domain.hpp"
#include "trippred/errors.hpp"
#include "trippred/ingest.hpp"
#include "trippred/metrics.hpp"
#include "trippred/nmf.hpp"
#include "trippred/predict.hpp"
#include "trippred/selection.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace trippred {

/// Mean squared trip error over the evaluated entities (all of them by
/// default), accumulated in key order.
inline double mse(const std::map<EntityKey, Trip>& predictions, const Dataset& ds,
                  const std::optional<std::vector<EntityKey>>& subset = std::nullopt) {
    std::vector<EntityKey> keys;
    if (subset) {
        keys = *subset;
        std::sort(keys.begin(), keys.end());
    } else {
        keys.reserve(ds.size());
        for (const Entity& e : ds.entities()) keys.push_back(e.key());
    }
    if (keys.empty()) throw ValidationError("mse of an empty evaluation set");
    double acc = 0.0;
    for (const EntityKey& key : keys) {
        const Entity* e = ds.find(key);
        if (e == nullptr) throw UnknownEntityError("unknown entity " + key.str());
        if (!e->test_trip()) {
            throw EvaluationIncompleteError("entity " + key.str() + " has no test trip");
        }
        const auto it = predictions.find(key);
        if (it == predictions.end()) {
            throw EvaluationIncompleteError("entity " + key.str() + " has no prediction");
        }
        acc += seuc(it->second, *e->test_trip());
    }
    return acc / static_cast<double>(keys.size());
}

struct NmfConfig {
    bool enabled = false;
    NmfOptions options{};
    bool embedding_error_space = false; // measure errors between embeddings instead of coordinates
    std::string cache_dir{};            // reuse factorizations across runs when set
};

struct SweepOptions {
    MetricVariant variant = MetricVariant::all2all;
    int k_max = 30;
    NmfConfig nmf{};
    std::optional<std::vector<EntityKey>> subset{}; // evaluation subset; all entities by default
    unsigned threads = 1;
    std::string experiment_id{};
    bool capture_predictions = false;
};

struct SweepPoint {
    int k = 0;
    std::size_t n_entities = 0;
    double mean_used_k = 0.0;
    double mse = 0.0;

    friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct SweepSummary {
    double self_only_mse = std::numeric_limits<double>::quiet_NaN();
    double nearest_neighbor_mse = std::numeric_limits<double>::quiet_NaN();
    int oracle_k = 0; // smallest k achieving the minimal error of the curve
    double oracle_mse = std::numeric_limits<double>::quiet_NaN();
};

struct SweepConfig {
    std::string experiment_id;
    MetricVariant variant = MetricVariant::all2all;
    std::string l_desc;      // "6", or "mixed(3,4,5,6)"
    int nmf_r = 0;           // 0 when factorization preprocessing is off
    std::string error_space; // "coords" or "embedding"
    std::string source;
    std::size_t n_evaluated = 0;
};

/// Error-versus-neighbor-count curve of one configuration, with the
/// self-only / nearest-neighbor / best-k summary.
struct SweepResult {
    SweepConfig config;
    std::vector<SweepPoint> curve; // k contiguous from 0
    SweepSummary summary;
    // predictions[k] in subset key order; filled only when capture_predictions is set
    std::vector<std::vector<std::pair<EntityKey, Trip>>> predictions;
};

namespace detail {

inline std::string l_description(const Dataset& ds) {
    std::set<int> ls;
    for (const Entity& e : ds.entities()) ls.insert(e.length());
    if (ls.empty()) return "none";
    if (ls.size() == 1) return std::to_string(*ls.begin());
    std::string out = "mixed(";
    bool first = true;
    for (int l : ls) {
        if (!first) out += ",";
        out += std::to_string(l);
        first = false;
    }
    return out + ")";
}

/// Everything the sweep needs, resolved once per configuration: instance
/// rows in the active metric space, the coordinate-identity registry with
/// one canonical scoring row per distinct trip, per-entity test rows, and
/// the neighbor lists.
struct EvalPipeline {
    std::size_t dim = 4;
    FlatSplits inst;                      // per-instance metric rows
    std::vector<int> inst_distinct;       // instance row -> distinct id
    std::vector<double> canon;            // distinct id -> canonical metric row
    std::vector<Trip> distinct_trip;      // distinct id -> first pooled occurrence
    std::vector<int> lex_rank;            // distinct id -> od-lexicographic rank
    std::vector<std::array<double, 4>> test_od;   // per entity
    std::vector<std::vector<double>> test_metric; // per entity, active-space row
    std::vector<IndexNeighborList> neighbors;
    bool embedding_error_space = false;

    std::span<const double> canon_row(int id) const {
        return {canon.data() + static_cast<std::size_t>(id) * dim, dim};
    }
};

inline EvalPipeline build_pipeline(const Dataset& ds, const SweepOptions& opts) {
    if (ds.empty()) throw ValidationError("cannot sweep an empty dataset");
    EvalPipeline p;
    const SplitMap splits = split_dataset(ds);

    // Coordinate-identity registry over all history trips, in entity/history
    // order so "first occurrence" is well defined.
    std::map<std::array<double, 4>, int> distinct_ids;
    std::vector<std::size_t> first_row(0);
    std::size_t row = 0;
    for (const Entity& e : ds.entities()) {
        for (const Trip& t : e.history()) {
            const std::array<double, 4> od = od_features(t);
            auto [it, inserted] = distinct_ids.emplace(od, static_cast<int>(distinct_ids.size()));
            if (inserted) {
                p.distinct_trip.push_back(t);
                first_row.push_back(row);
            }
            p.inst_distinct.push_back(it->second);
            ++row;
        }
    }
    p.lex_rank.resize(distinct_ids.size());
    int rank = 0;
    for (const auto& [od, id] : distinct_ids) p.lex_rank[static_cast<std::size_t>(id)] = rank++;

    if (opts.nmf.enabled) {
        const FeatureMatrix x = build_feature_matrix(ds);
        Factorization fact;
        bool loaded = false;
        std::string cache_path;
        if (!opts.nmf.cache_dir.empty()) {
            cache_path = (std::filesystem::path(opts.nmf.cache_dir) /
                          (nmf_cache_key(x, opts.nmf.options) + ".nmf"))
                             .string();
            if (std::filesystem::exists(cache_path)) {
                fact = load_factorization(cache_path);
                loaded = true;
            }
        }
        if (!loaded) {
            fact = nmf_factorize(x, opts.nmf.options);
            if (!cache_path.empty()) save_factorization(fact, cache_path);
        }
        p.dim = fact.r;
        // Instance rows are the W rows, in the same order as the histories.
        p.inst.dim = p.dim;
        p.inst.rows.assign(fact.w.begin(), fact.w.end());
        std::size_t base = 0;
        for (const auto& [key, split] : splits) {
            HistoryRows hr;
            hr.trn_begin = base;
            hr.trn_len = split.trn.size();
            hr.vld_begin = base + hr.trn_len;
            hr.vld_len = split.vld.size();
            p.inst.entities.push_back(hr);
            base += hr.trn_len + hr.vld_len;
        }
        // Canonical scoring row of a distinct trip: the W row of its first
        // occurrence in the feature matrix.
        p.canon.resize(p.distinct_trip.size() * p.dim);
        for (std::size_t id = 0; id < p.distinct_trip.size(); ++id) {
            const auto w = fact.w_row(first_row[id]);
            std::copy(w.begin(), w.end(), p.canon.begin() + static_cast<std::ptrdiff_t>(id * p.dim));
        }
        // Test rows: reuse the canonical embedding when the exact coordinates
        // already occur in a history; otherwise project onto the fitted H.
        for (const Entity& e : ds.entities()) {
            std::array<double, 4> od{0, 0, 0, 0};
            std::vector<double> trow;
            if (e.test_trip()) {
                od = od_features(*e.test_trip());
                const auto it = distinct_ids.find(od);
                if (it != distinct_ids.end()) {
                    const auto c = p.canon_row(it->second);
                    trow.assign(c.begin(), c.end());
                } else {
                    trow = nmf_transform(fact, od);
                }
            }
            p.test_od.push_back(od);
            p.test_metric.push_back(std::move(trow));
        }
    } else {
        p.dim = 4;
        p.inst = flatten_splits(splits);
        p.canon.resize(p.distinct_trip.size() * 4);
        for (std::size_t id = 0; id < p.distinct_trip.size(); ++id) {
            const auto od = od_features(p.distinct_trip[id]);
            std::copy(od.begin(), od.end(), p.canon.begin() + static_cast<std::ptrdiff_t>(id * 4));
        }
        for (const Entity& e : ds.entities()) {
            std::array<double, 4> od{0, 0, 0, 0};
            std::vector<double> trow;
            if (e.test_trip()) {
                od = od_features(*e.test_trip());
                trow.assign(od.begin(), od.end());
            }
            p.test_od.push_back(od);
            p.test_metric.push_back(std::move(trow));
        }
    }
    p.embedding_error_space = opts.nmf.enabled && opts.nmf.embedding_error_space;

    std::vector<std::string> failures(ds.size());
    p.neighbors.resize(ds.size());
    parallel_for(ds.size(), opts.threads, [&](std::size_t i) {
        try {
            p.neighbors[i] = neighbor_set_indexed(i, p.inst, opts.variant);
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < failures.size(); ++i) {
        if (!failures[i].empty()) {
            throw LengthMismatchError("entity " + ds.entities()[i].key().str() + ": " +
                                      failures[i]);
        }
    }
    return p;
}

/// Incrementally pooled per-entity sweep state. The pool grows one neighbor
/// per k; scores are recomputed per k over the distinct trips in
/// od-lexicographic order (exactly like the standalone medoid path) from a
/// cached pairwise distance matrix.
class PoolSweeper {
public:
    PoolSweeper(const EvalPipeline& p, std::size_t target, int k_max) : p_(p), target_(target) {
        // Upper bound on the number of pooled instances over the whole sweep.
        std::size_t cap = instance_count(target);
        int picked = 0;
        for (const auto& m : p.neighbors[target].members) {
            if (m.entity == target) continue;
            if (picked >= k_max) break;
            cap += instance_count(m.entity);
            ++picked;
        }
        dmat_stride_ = cap;
        dmat_.assign(cap * cap, 0.0);
        local_of_.reserve(cap);
    }

    /// Adds the next pool member for step k (self at k = 0), or returns
    /// false when the neighborhood is exhausted.
    bool advance(int k) {
        if (k == 0) {
            add_entity(target_);
            return true;
        }
        const auto& members = p_.neighbors[target_].members;
        while (next_member_ < members.size() && members[next_member_].entity == target_) {
            ++next_member_;
        }
        if (next_member_ >= members.size()) return false;
        add_entity(members[next_member_].entity);
        ++next_member_;
        ++used_k_;
        return true;
    }

    int used_k() const { return used_k_; }

    /// Distinct id of the current frequency-weighted medoid.
    int representative() const {
        std::vector<int> freqs(lex_order_.size());
        for (std::size_t i = 0; i < lex_order_.size(); ++i) {
            freqs[i] = freq_[static_cast<std::size_t>(lex_order_[i])];
        }
        const std::size_t best = best_scored_index(
            freqs, max_dist_, [this](std::size_t i, std::size_t j) {
                return dmat_[static_cast<std::size_t>(lex_order_[i]) * dmat_stride_ +
                             static_cast<std::size_t>(lex_order_[j])];
            });
        return gid_[static_cast<std::size_t>(lex_order_[best])];
    }

private:
    std::size_t instance_count(std::size_t e) const {
        return p_.inst.entities[e].trn_len + p_.inst.entities[e].vld_len;
    }

    void add_entity(std::size_t e) {
        const auto& hr = p_.inst.entities[e];
        for (std::size_t i = 0; i < hr.trn_len + hr.vld_len; ++i) {
            add_instance(p_.inst_distinct[hr.trn_begin + i]);
        }
    }

    void add_instance(int gid) {
        const auto it = local_of_.find(gid);
        if (it != local_of_.end()) {
            ++freq_[static_cast<std::size_t>(it->second)];
            return;
        }
        const int local = static_cast<int>(gid_.size());
        local_of_.emplace(gid, local);
        gid_.push_back(gid);
        freq_.push_back(1);
        const auto row = p_.canon_row(gid);
        for (int j = 0; j < local; ++j) {
            const double d = seuc(row, p_.canon_row(gid_[static_cast<std::size_t>(j)]));
            dmat_[static_cast<std::size_t>(local) * dmat_stride_ + static_cast<std::size_t>(j)] = d;
            dmat_[static_cast<std::size_t>(j) * dmat_stride_ + static_cast<std::size_t>(local)] = d;
            max_dist_ = std::max(max_dist_, d);
        }
        // Keep the lex iteration order sorted as the pool grows.
        const int rank = p_.lex_rank[static_cast<std::size_t>(gid)];
        auto pos = std::lower_bound(lex_order_.begin(), lex_order_.end(), rank,
                                    [this](int l, int r) {
                                        return p_.lex_rank[static_cast<std::size_t>(
                                                   gid_[static_cast<std::size_t>(l)])] < r;
                                    });
        lex_order_.insert(pos, local);
    }

    const EvalPipeline& p_;
    std::size_t target_;
    std::size_t next_member_ = 0;
    int used_k_ = 0;
    std::unordered_map<int, int> local_of_; // global distinct id -> local index
    std::vector<int> gid_;                  // local index -> global distinct id
    std::vector<int> freq_;
    std::vector<int> lex_order_;            // local indices in od-lex order
    std::vector<double> dmat_;
    std::size_t dmat_stride_ = 0;
    double max_dist_ = 0.0;
};

} // namespace detail

/// Runs the neighbor-count sweep: for k = 0..k_max, every evaluated entity
/// is predicted from its own history plus its k most useful neighbors, and
/// the mean squared error is recorded. k = 0 is the self-only baseline and
/// k = 1 the nearest-neighbor baseline.
inline SweepResult sweep_neighbors(const Dataset& ds, const SweepOptions& opts) {
    if (opts.k_max < 0) throw ValidationError("k_max must be >= 0");
    const detail::EvalPipeline pipeline = detail::build_pipeline(ds, opts);

    // Resolve the evaluation subset to entity indices, in key order.
    std::vector<std::size_t> eval_indices;
    if (opts.subset) {
        std::vector<EntityKey> keys = *opts.subset;
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (const EntityKey& key : keys) {
            const Entity* e = ds.find(key);
            if (e == nullptr) throw UnknownEntityError("unknown entity " + key.str());
            eval_indices.push_back(
                static_cast<std::size_t>(e - ds.entities().data()));
        }
    } else {
        eval_indices.resize(ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) eval_indices[i] = i;
    }
    if (eval_indices.empty()) throw ValidationError("empty evaluation subset");
    for (const std::size_t i : eval_indices) {
        if (!ds.entities()[i].test_trip()) {
            throw EvaluationIncompleteError("entity " + ds.entities()[i].key().str() +
                                            " has no test trip");
        }
    }

    const std::size_t n_eval = eval_indices.size();
    const std::size_t n_k = static_cast<std::size_t>(opts.k_max) + 1;
    std::vector<double> errors(n_eval * n_k);
    std::vector<int> used(n_eval * n_k);
    std::vector<int> reps(opts.capture_predictions ? n_eval * n_k : 0);

    detail::parallel_for(n_eval, opts.threads, [&](std::size_t slot) {
        const std::size_t target = eval_indices[slot];
        detail::PoolSweeper sweeper(pipeline, target, opts.k_max);
        double err = 0.0;
        int rep = -1;
        for (int k = 0; k <= opts.k_max; ++k) {
            if (sweeper.advance(k)) {
                rep = sweeper.representative();
                if (pipeline.embedding_error_space) {
                    err = seuc(pipeline.canon_row(rep),
                               std::span<const double>(pipeline.test_metric[target]));
                } else {
                    const auto od = od_features(pipeline.distinct_trip[static_cast<std::size_t>(rep)]);
                    err = seuc(std::span<const double>(od),
                               std::span<const double>(pipeline.test_od[target]));
                }
            }
            errors[slot * n_k + static_cast<std::size_t>(k)] = err;
            used[slot * n_k + static_cast<std::size_t>(k)] = sweeper.used_k();
            if (opts.capture_predictions) {
                reps[slot * n_k + static_cast<std::size_t>(k)] = rep;
            }
        }
    });

    SweepResult result;
    result.config.experiment_id = opts.experiment_id.empty() ? "sweep" : opts.experiment_id;
    result.config.variant = opts.variant;
    result.config.l_desc = detail::l_description(ds);
    result.config.nmf_r = opts.nmf.enabled ? opts.nmf.options.rank : 0;
    result.config.error_space = pipeline.embedding_error_space ? "embedding" : "coords";
    result.config.source = ds.meta().source;
    result.config.n_evaluated = n_eval;

    result.curve.reserve(n_k);
    for (std::size_t k = 0; k < n_k; ++k) {
        double err_acc = 0.0;
        double used_acc = 0.0;
        for (std::size_t slot = 0; slot < n_eval; ++slot) {
            err_acc += errors[slot * n_k + k];
            used_acc += static_cast<double>(used[slot * n_k + k]);
        }
        result.curve.push_back(SweepPoint{static_cast<int>(k), n_eval,
                                          used_acc / static_cast<double>(n_eval),
                                          err_acc / static_cast<double>(n_eval)});
    }
    if (opts.capture_predictions) {
        result.predictions.resize(n_k);
        for (std::size_t k = 0; k < n_k; ++k) {
            result.predictions[k].reserve(n_eval);
            for (std::size_t slot = 0; slot < n_eval; ++slot) {
                const std::size_t target = eval_indices[slot];
                const int rep = reps[slot * n_k + k];
                result.predictions[k].emplace_back(
                    ds.entities()[target].key(),
                    pipeline.distinct_trip[static_cast<std::size_t>(rep)]);
            }
        }
    }

    result.summary.self_only_mse = result.curve[0].mse;
    if (result.curve.size() > 1) result.summary.nearest_neighbor_mse = result.curve[1].mse;
    result.summary.oracle_k = 0;
    result.summary.oracle_mse = result.curve[0].mse;
    for (const SweepPoint& pt : result.curve) {
        if (pt.mse < result.summary.oracle_mse) {
            result.summary.oracle_mse = pt.mse;
            result.summary.oracle_k = pt.k;
        }
    }
    return result;
}

/// Entities of one exact history length, as a derived dataset.
inline Dataset filter_by_length(const Dataset& ds, int l) {
    std::vector<Entity> picked;
    for (const Entity& e : ds.entities()) {
        if (e.length() == l) picked.push_back(e);
    }
    DatasetMeta meta = ds.meta();
    meta.notes.push_back("filtered to L=" + std::to_string(l));
    return Dataset(std::move(picked), std::move(meta));
}

struct PerLOptions {
    std::vector<int> l_values;
    std::vector<MetricVariant> variants = {MetricVariant::ordered, MetricVariant::all2all};
    int k_max = 30;
    NmfConfig nmf{};
    unsigned threads = 1;
    std::string id_prefix = "per_l";
};

struct PerLOutcome {
    std::vector<SweepResult> results;
    std::vector<std::string> skipped; // (L, variant) combinations that were not run
};

/// One sweep per (history length, variant). The ordered variant needs
/// aligned half-histories, so it is skipped (and logged) for odd lengths.
inline PerLOutcome experiment_per_l(const Dataset& ds, const PerLOptions& opts) {
    PerLOutcome out;
    for (const int l : opts.l_values) {
        const Dataset filtered = filter_by_length(ds, l);
        for (const MetricVariant variant : opts.variants) {
            if (variant == MetricVariant::ordered && l % 2 != 0) {
                out.skipped.push_back("L=" + std::to_string(l) +
                                      " ordered skipped: odd history length cannot be "
                                      "split into aligned halves");
                continue;
            }
            if (filtered.empty()) {
                out.skipped.push_back("L=" + std::to_string(l) + " " +
                                      std::string(to_string(variant)) +
                                      " skipped: no entities with this history length");
                continue;
            }
            SweepOptions sweep = {};
            sweep.variant = variant;
            sweep.k_max = opts.k_max;
            sweep.nmf = opts.nmf;
            sweep.threads = opts.threads;
            sweep.experiment_id = opts.id_prefix + "_L" + std::to_string(l) + "_" +
                                  std::string(to_string(variant));
            out.results.push_back(sweep_neighbors(filtered, sweep));
        }
    }
    return out;
}

struct AugmentOptions {
    std::vector<std::size_t> short_counts;
    std::uint64_t seed = 0;
    int k_max = 30;
    unsigned threads = 1;
    std::string id_prefix = "augment";
};

struct AugmentOutcome {
    std::vector<SweepResult> results;
    std::vector<std::string> warnings;
};

/// Augments short-history entities with a pool of long-history entities:
/// for each requested count, a seeded subsample of the short dataset is
/// merged with the long dataset and swept under all2all, evaluating only
/// the short entities.
inline AugmentOutcome experiment_augment(const Dataset& short_ds, const Dataset& long_ds,
                                         const AugmentOptions& opts) {
    AugmentOutcome out;
    std::vector<EntityKey> short_keys;
    short_keys.reserve(short_ds.size());
    for (const Entity& e : short_ds.entities()) short_keys.push_back(e.key());

    for (const std::size_t requested : opts.short_counts) {
        if (requested == 0) {
            out.warnings.push_back("count 0 skipped: empty evaluation subset");
            continue;
        }
        std::size_t count = requested;
        if (count > short_keys.size()) {
            out.warnings.push_back("count " + std::to_string(requested) + " capped to " +
                                   std::to_string(short_keys.size()) +
                                   " available short entities");
            count = short_keys.size();
        }
        std::vector<EntityKey> sample = short_keys;
        std::mt19937_64 rng(opts.seed);
        std::shuffle(sample.begin(), sample.end(), rng);
        sample.resize(count);
        std::sort(sample.begin(), sample.end());

        std::vector<Entity> picked;
        picked.reserve(count);
        for (const EntityKey& key : sample) picked.push_back(*short_ds.find(key));
        DatasetMeta meta = short_ds.meta();
        meta.notes.push_back("subsampled " + std::to_string(count) + " of " +
                             std::to_string(short_keys.size()) + " entities");
        const Dataset short_sample(std::move(picked), std::move(meta));
        const Dataset merged = merge_datasets(short_sample, long_ds);

        SweepOptions sweep = {};
        sweep.variant = MetricVariant::all2all;
        sweep.k_max = opts.k_max;
        sweep.threads = opts.threads;
        sweep.subset = sample;
        sweep.experiment_id = opts.id_prefix + "_n" + std::to_string(requested);
        out.results.push_back(sweep_neighbors(merged, sweep));
    }
    return out;
}

/// Mixed-length pools use the all2all variant and evaluate every entity.
inline SweepResult experiment_mixed(const Dataset& ds, int k_max, unsigned threads = 1,
                                    const std::string& experiment_id = "mixed") {
    SweepOptions sweep = {};
    sweep.variant = MetricVariant::all2all;
    sweep.k_max = k_max;
    sweep.threads = threads;
    sweep.experiment_id = experiment_id;
    return sweep_neighbors(ds, sweep);
}

inline void write_results_csv(std::ostream& out, std::span<const SweepResult> results) {
    out << "experiment_id,variant,L,nmf_r,k,n_entities,mean_used_k,mse\n";
    for (const SweepResult& r : results) {
        for (const SweepPoint& pt : r.curve) {
            out << r.config.experiment_id << ',' << to_string(r.config.variant) << ','
                << r.config.l_desc << ',' << r.config.nmf_r << ',' << pt.k << ','
                << pt.n_entities << ',' << detail::format_double(pt.mean_used_k) << ','
                << detail::format_double_sci(pt.mse) << '\n';
        }
    }
}

inline void write_summary_csv(std::ostream& out, std::span<const SweepResult> results) {
    out << "experiment_id,variant,L,nmf_r,row,k,mse\n";
    for (const SweepResult& r : results) {
        auto line = [&](const char* name, int k, double value) {
            out << r.config.experiment_id << ',' << to_string(r.config.variant) << ','
                << r.config.l_desc << ',' << r.config.nmf_r << ',' << name << ',' << k << ','
                << detail::format_double_sci(value) << '\n';
        };
        line("self_only", 0, r.summary.self_only_mse);
        line("nearest_neighbor", 1, r.summary.nearest_neighbor_mse);
        line("oracle", r.summary.oracle_k, r.summary.oracle_mse);
    }
}

} // namespace trippred

#pragma once

#include "trippred/detail/format.hpp"
#include "trippred/domain.hpp"
#include "trippred/errors.hpp"
#include "trippred/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace trippred {

/// One row per history trip (training plus validation of every entity, in
/// key order), four columns: origin lon/lat, destination lon/lat. All
/// entries must be nonnegative; `shift` records the global min-shift that
/// was applied to achieve that, if any.
struct FeatureMatrix {
    std::size_t rows = 0;
    static constexpr std::size_t cols = 4;
    std::vector<double> data; // row-major
    std::vector<std::pair<EntityKey, int>> row_keys; // (entity, history position)
    double shift = 0.0;

    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

/// Builds the feature matrix of a dataset. Negative entries are rejected
/// unless `allow_min_shift` is set, in which case every entry is increased
/// by the magnitude of the smallest one.
inline FeatureMatrix build_feature_matrix(const Dataset& ds, bool allow_min_shift = false) {
    FeatureMatrix m;
    for (const Entity& e : ds.entities()) {
        int position = 0;
        for (const Trip& t : e.history()) {
            const auto f = od_features(t);
            m.data.insert(m.data.end(), f.begin(), f.end());
            m.row_keys.emplace_back(e.key(), position++);
        }
    }
    m.rows = m.row_keys.size();

    double min_entry = 0.0;
    for (const double v : m.data) min_entry = std::min(min_entry, v);
    if (min_entry < 0.0) {
        if (!allow_min_shift) {
            for (std::size_t i = 0; i < m.rows; ++i) {
                for (std::size_t c = 0; c < FeatureMatrix::cols; ++c) {
                    if (m.data[i * FeatureMatrix::cols + c] < 0.0) {
                        throw NmfError("negative feature in row " + std::to_string(i) +
                                       " (entity " + m.row_keys[i].first.str() +
                                       ", position " + std::to_string(m.row_keys[i].second) +
                                       "); enable min-shift to offset the matrix");
                    }
                }
            }
        }
        m.shift = -min_entry;
        for (double& v : m.data) v += m.shift;
    }
    return m;
}

struct NmfOptions {
    int rank = 4;
    int max_iters = 500;
    double tol = 1e-6; // relative objective decrease that stops the iteration
    std::uint64_t seed = 0;

    friend bool operator==(const NmfOptions&, const NmfOptions&) = default;
};

/// Result of the multiplicative-update factorization X ~ W H with
/// W: n x r and H: r x 4, both entrywise nonnegative. `objective_trace`
/// holds the Frobenius error before the first update and after each
/// iteration; it is non-increasing up to float slack.
struct Factorization {
    std::size_t n = 0, r = 0, m = FeatureMatrix::cols;
    std::vector<double> w; // n x r, row-major
    std::vector<double> h; // r x m, row-major
    std::vector<double> objective_trace;
    double shift = 0.0; // copied from the input matrix

    std::span<const double> w_row(std::size_t i) const { return {w.data() + i * r, r}; }

    friend bool operator==(const Factorization&, const Factorization&) = default;
};

namespace detail {

inline double frobenius_error(const std::vector<double>& x, const std::vector<double>& w,
                              const std::vector<double>& h, std::size_t n, std::size_t r,
                              std::size_t m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double wh = 0.0;
            for (std::size_t k = 0; k < r; ++k) wh += w[i * r + k] * h[k * m + j];
            const double d = x[i * m + j] - wh;
            acc += d * d;
        }
    }
    return std::sqrt(acc);
}

} // namespace detail

/// Lee-Seung multiplicative updates minimizing the squared Frobenius error.
/// Stops after `max_iters` iterations or when the relative objective
/// decrease falls below `tol`. Deterministic for a fixed seed.
inline Factorization nmf_factorize(const FeatureMatrix& x, const NmfOptions& opts) {
    constexpr std::size_t m = FeatureMatrix::cols;
    if (opts.rank < 1 || static_cast<std::size_t>(opts.rank) > m) {
        throw NmfError("rank must be in [1, " + std::to_string(m) + "], got " +
                       std::to_string(opts.rank));
    }
    if (opts.max_iters < 1) throw NmfError("max_iters must be >= 1");
    if (!(opts.tol > 0)) throw NmfError("tol must be > 0");
    if (x.rows == 0) throw NmfError("empty feature matrix");
    bool all_zero = true;
    for (const double v : x.data) {
        if (v != 0.0) {
            all_zero = false;
            break;
        }
    }
    if (all_zero) throw NmfError("all-zero feature matrix cannot be factorized");

    const std::size_t n = x.rows;
    const std::size_t r = static_cast<std::size_t>(opts.rank);
    constexpr double eps = 1e-12;

    Factorization f;
    f.n = n;
    f.r = r;
    f.shift = x.shift;
    f.w.resize(n * r);
    f.h.resize(r * m);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> init(0.1, 1.0);
    for (double& v : f.w) v = init(rng);
    for (double& v : f.h) v = init(rng);

    std::vector<double> wt_x(r * m), wt_w_h(r * m), wt_w(r * r);
    std::vector<double> x_ht(n * r), w_h_ht(n * r), h_ht(r * r);

    f.objective_trace.push_back(detail::frobenius_error(x.data, f.w, f.h, n, r, m));
    for (int iter = 0; iter < opts.max_iters; ++iter) {
        // H <- H * (W^T X) / (W^T W H + eps)
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = 0; b < r; ++b) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += f.w[i * r + a] * f.w[i * r + b];
                wt_w[a * r + b] = acc;
            }
            for (std::size_t j = 0; j < m; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += f.w[i * r + a] * x.data[i * m + j];
                wt_x[a * m + j] = acc;
            }
        }
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t j = 0; j < m; ++j) {
                double acc = 0.0;
                for (std::size_t b = 0; b < r; ++b) acc += wt_w[a * r + b] * f.h[b * m + j];
                wt_w_h[a * m + j] = acc;
            }
        }
        for (std::size_t i = 0; i < r * m; ++i) f.h[i] *= wt_x[i] / (wt_w_h[i] + eps);

        // W <- W * (X H^T) / (W H H^T + eps)
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = 0; b < r; ++b) {
                double acc = 0.0;
                for (std::size_t j = 0; j < m; ++j) acc += f.h[a * m + j] * f.h[b * m + j];
                h_ht[a * r + b] = acc;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t a = 0; a < r; ++a) {
                double acc = 0.0;
                for (std::size_t j = 0; j < m; ++j) acc += x.data[i * m + j] * f.h[a * m + j];
                x_ht[i * r + a] = acc;
                acc = 0.0;
                for (std::size_t b = 0; b < r; ++b) acc += f.w[i * r + b] * h_ht[b * r + a];
                w_h_ht[i * r + a] = acc;
            }
        }
        for (std::size_t i = 0; i < n * r; ++i) f.w[i] *= x_ht[i] / (w_h_ht[i] + eps);

        const double err = detail::frobenius_error(x.data, f.w, f.h, n, r, m);
        const double prev = f.objective_trace.back();
        f.objective_trace.push_back(err);
        if (prev > 0 && (prev - err) / prev < opts.tol) break;
    }
    return f;
}

/// Nonnegative projection of one feature row onto a fixed H: multiplicative
/// updates on the coefficient vector only. Used to place out-of-sample
/// (test) trips in the embedding space. The input row must be in the same
/// frame as the fitted matrix; the matrix shift is applied here.
inline std::vector<double> nmf_transform(const Factorization& f, std::span<const double> features,
                                         int iters = 200) {
    constexpr std::size_t m = FeatureMatrix::cols;
    constexpr double eps = 1e-12;
    std::vector<double> x(features.begin(), features.end());
    for (double& v : x) v += f.shift;
    std::vector<double> w(f.r, 1.0);
    std::vector<double> h_ht(f.r * f.r), x_ht(f.r);
    for (std::size_t a = 0; a < f.r; ++a) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += x[j] * f.h[a * m + j];
        x_ht[a] = acc;
        for (std::size_t b = 0; b < f.r; ++b) {
            acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += f.h[a * m + j] * f.h[b * m + j];
            h_ht[a * f.r + b] = acc;
        }
    }
    for (int it = 0; it < iters; ++it) {
        for (std::size_t a = 0; a < f.r; ++a) {
            double denom = 0.0;
            for (std::size_t b = 0; b < f.r; ++b) denom += w[b] * h_ht[b * f.r + a];
            w[a] *= x_ht[a] / (denom + eps);
        }
    }
    return w;
}

/// Embeddings of every history trip: row i of W for feature-matrix row i,
/// addressable by (entity key, history position).
struct EmbeddingTable {
    std::size_t dim = 0;
    std::vector<double> rows; // one embedding per feature-matrix row
    std::map<std::pair<EntityKey, int>, std::size_t> index;

    std::span<const double> lookup(const EntityKey& key, int position) const {
        const auto it = index.find({key, position});
        if (it == index.end()) {
            throw UnknownEntityError("no embedding for entity " + key.str() + " position " +
                                     std::to_string(position));
        }
        return {rows.data() + it->second * dim, dim};
    }
};

inline EmbeddingTable embed_trips(const Factorization& f, const FeatureMatrix& x) {
    if (f.n != x.rows) throw NmfError("factorization and feature matrix disagree on row count");
    EmbeddingTable table;
    table.dim = f.r;
    table.rows = f.w;
    for (std::size_t i = 0; i < x.rows; ++i) table.index.emplace(x.row_keys[i], i);
    return table;
}

/// Cache key for a factorization: a hash of the matrix contents and the
/// options, so a re-run with identical inputs can reuse the result.
inline std::string nmf_cache_key(const FeatureMatrix& x, const NmfOptions& opts) {
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    auto mix = [&h](const void* p, std::size_t len) {
        const unsigned char* bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;
        }
    };
    mix(x.data.data(), x.data.size() * sizeof(double));
    mix(&x.shift, sizeof(x.shift));
    mix(&opts.rank, sizeof(opts.rank));
    mix(&opts.max_iters, sizeof(opts.max_iters));
    mix(&opts.tol, sizeof(opts.tol));
    mix(&opts.seed, sizeof(opts.seed));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Textual (exact round-trip) serialization of a factorization.
inline void save_factorization(const Factorization& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open cache file for writing: " + path);
    out << "nmf v1\n" << f.n << ' ' << f.r << ' ' << f.m << ' '
        << detail::format_double(f.shift) << '\n';
    auto write_all = [&out](const std::vector<double>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            out << (i ? " " : "") << detail::format_double(v[i]);
        }
        out << '\n';
    };
    write_all(f.w);
    write_all(f.h);
    write_all(f.objective_trace);
}

inline Factorization load_factorization(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open cache file: " + path);
    std::string magic, version;
    in >> magic >> version;
    if (magic != "nmf" || version != "v1") throw Error("unrecognized cache format in " + path);
    Factorization f;
    in >> f.n >> f.r >> f.m >> f.shift;
    f.w.resize(f.n * f.r);
    f.h.resize(f.r * f.m);
    for (double& v : f.w) in >> v;
    for (double& v : f.h) in >> v;
    double t = 0.0;
    while (in >> t) f.objective_trace.push_back(t);
    if (f.w.size() != f.n * f.r || f.h.size() != f.r * f.m || f.objective_trace.empty()) {
        throw Error("truncated cache file: " + path);
    }
    return f;
}

} // namespace trippred

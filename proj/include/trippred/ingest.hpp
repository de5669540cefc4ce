#pragma once

#include "trippred/detail/format.hpp"
#include "trippred/domain.hpp"
#include "trippred/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trippred {

/// One e-ticket validation record, straight from the CSV.
struct RawRecord {
    std::string ticket_id;
    int wday = 0;  // 1..7
    int dhour = 0; // 0..23
    int yday = 0;  // 1..366
    double o_lon = 0.0, o_lat = 0.0;
    double d_lon = 0.0, d_lat = 0.0;
    bool is_test = false; // only present in exported dataset files

    friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

struct ParseIssue {
    std::size_t line = 0;
    std::string message;
};

struct ParseResult {
    std::vector<RawRecord> records;
    std::vector<ParseIssue> issues;      // malformed rows, one entry each
    std::vector<std::string> meta_lines; // leading "# key=value" comment lines
    bool has_test_flags = false;         // header carried an is-test column
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line,
                                                  std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

struct ColumnIndex {
    int ticket = -1, wday = -1, dhour = -1, yday = -1;
    int o_lon = -1, o_lat = -1, d_lon = -1, d_lat = -1;
    int is_test = -1;
    std::size_t count = 0;
};

inline ColumnIndex match_header(std::string_view line) {
    std::vector<std::string_view> fields;
    split_fields(line, fields);
    ColumnIndex idx;
    idx.count = fields.size();
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string name = to_lower(fields[i]);
        const int pos = static_cast<int>(i);
        if (name == "ticketid" || name == "tickedid") idx.ticket = pos;
        else if (name == "w-day") idx.wday = pos;
        else if (name == "d-hour") idx.dhour = pos;
        else if (name == "y-day") idx.yday = pos;
        else if (name == "o-longitude") idx.o_lon = pos;
        else if (name == "o-latitude") idx.o_lat = pos;
        else if (name == "d-longitude") idx.d_lon = pos;
        else if (name == "d-latitude") idx.d_lat = pos;
        else if (name == "is-test") idx.is_test = pos;
    }
    if (idx.ticket < 0 || idx.wday < 0 || idx.dhour < 0 || idx.yday < 0 || idx.o_lon < 0 ||
        idx.o_lat < 0 || idx.d_lon < 0 || idx.d_lat < 0) {
        throw SchemaError(
            "missing required CSV columns; expected header: "
            "TicketId (or TickedId), w-day, d-hour, y-day, "
            "o-longitude, o-latitude, d-longitude, d-latitude");
    }
    return idx;
}

} // namespace detail

/// Parses e-ticket validation records. The header row is required and is
/// matched case-insensitively; both the TicketId and TickedId spellings of
/// the id column are accepted. Rows that fail to parse are excluded and
/// reported with their line number. Lines starting with '#' before the
/// header carry dataset metadata and are preserved.
inline ParseResult parse_csv(std::istream& in) {
    ParseResult out;
    std::string line;
    std::size_t line_no = 0;

    std::optional<detail::ColumnIndex> columns;
    std::vector<std::string_view> fields;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view trimmed = detail::trim(line);
        if (!columns) {
            if (trimmed.empty()) continue;
            if (trimmed.front() == '#') {
                out.meta_lines.emplace_back(trimmed);
                continue;
            }
            columns = detail::match_header(trimmed);
            out.has_test_flags = columns->is_test >= 0;
            continue;
        }
        if (trimmed.empty()) continue;
        detail::split_fields(trimmed, fields);
        if (fields.size() != columns->count) {
            out.issues.push_back({line_no, "expected " + std::to_string(columns->count) +
                                               " fields, got " + std::to_string(fields.size())});
            continue;
        }
        RawRecord rec;
        rec.ticket_id = std::string(fields[static_cast<std::size_t>(columns->ticket)]);
        std::string problem;
        auto want_int = [&](int col, int lo, int hi, const char* name, int& dst) {
            if (!problem.empty()) return;
            const std::string_view f = fields[static_cast<std::size_t>(col)];
            if (!detail::parse_int(f, dst) || dst < lo || dst > hi) {
                problem = std::string(name) + " '" + std::string(f) + "' is not an integer in [" +
                          std::to_string(lo) + "," + std::to_string(hi) + "]";
            }
        };
        auto want_double = [&](int col, const char* name, double& dst) {
            if (!problem.empty()) return;
            const std::string_view f = fields[static_cast<std::size_t>(col)];
            if (!detail::parse_double(f, dst) || !std::isfinite(dst)) {
                problem = std::string(name) + " '" + std::string(f) + "' is not a finite number";
            }
        };
        want_int(columns->wday, 1, 7, "w-day", rec.wday);
        want_int(columns->dhour, 0, 23, "d-hour", rec.dhour);
        want_int(columns->yday, 1, 366, "y-day", rec.yday);
        want_double(columns->o_lon, "o-longitude", rec.o_lon);
        want_double(columns->o_lat, "o-latitude", rec.o_lat);
        want_double(columns->d_lon, "d-longitude", rec.d_lon);
        want_double(columns->d_lat, "d-latitude", rec.d_lat);
        if (problem.empty() && rec.ticket_id.empty()) problem = "empty ticket id";
        if (problem.empty() && columns->is_test >= 0) {
            int flag = 0;
            want_int(columns->is_test, 0, 1, "is-test", flag);
            rec.is_test = flag == 1;
        }
        if (!problem.empty()) {
            out.issues.push_back({line_no, problem});
            continue;
        }
        out.records.push_back(std::move(rec));
    }
    if (!columns) throw SchemaError("missing CSV header row");
    return out;
}

inline ParseResult parse_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file: " + path);
    return parse_csv(in);
}

/// For groups larger than L+1 records: `exact` drops them, `earliest` keeps
/// the L+1 earliest records.
enum class GroupPolicy { exact, earliest };

inline std::string_view to_string(GroupPolicy p) {
    return p == GroupPolicy::exact ? "exact" : "earliest";
}

inline GroupPolicy parse_policy(std::string_view s) {
    if (s == "exact") return GroupPolicy::exact;
    if (s == "earliest") return GroupPolicy::earliest;
    throw ValidationError("unknown group policy '" + std::string(s) +
                          "' (expected exact or earliest)");
}

struct GroupReport {
    std::size_t groups_total = 0;
    std::size_t eligible = 0;
    std::size_t too_short = 0;     // fewer than L+1 records
    std::size_t wrong_length = 0;  // exact policy: more than L+1 records
    std::size_t trimmed = 0;       // earliest policy: groups reduced to L+1
    std::vector<std::string> rejected; // named rejections (duplicate y-day)
};

struct GroupResult {
    Dataset dataset;
    GroupReport report;
};

/// Groups records by (ticket, weekday, hour), orders each group by y-day,
/// and keeps groups that can supply L history trips plus one test trip.
/// The first L records become the history and record L+1 the test trip.
inline GroupResult group_entities(std::span<const RawRecord> records, int l,
                                  GroupPolicy policy = GroupPolicy::earliest,
                                  std::string source = {}) {
    if (l < 1) throw ValidationError("history length L must be >= 1");

    std::map<EntityKey, std::vector<RawRecord>> groups;
    for (const RawRecord& r : records) {
        groups[EntityKey{r.ticket_id, r.wday, r.dhour}].push_back(r);
    }

    GroupResult out;
    out.report.groups_total = groups.size();
    std::vector<Entity> entities;
    const std::size_t need = static_cast<std::size_t>(l) + 1;
    for (auto& [key, group] : groups) {
        std::sort(group.begin(), group.end(),
                  [](const RawRecord& a, const RawRecord& b) { return a.yday < b.yday; });
        bool duplicate = false;
        for (std::size_t i = 1; i < group.size(); ++i) {
            if (group[i].yday == group[i - 1].yday) {
                out.report.rejected.push_back("entity " + key.str() + ": duplicate y-day " +
                                              std::to_string(group[i].yday));
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        if (group.size() < need) {
            ++out.report.too_short;
            continue;
        }
        if (group.size() > need) {
            if (policy == GroupPolicy::exact) {
                ++out.report.wrong_length;
                continue;
            }
            ++out.report.trimmed;
        }
        std::vector<Trip> history;
        history.reserve(static_cast<std::size_t>(l));
        for (std::size_t i = 0; i < static_cast<std::size_t>(l); ++i) {
            const RawRecord& r = group[i];
            history.push_back(Trip{{r.o_lon, r.o_lat}, {r.d_lon, r.d_lat}, {}, r.yday});
        }
        const RawRecord& t = group[static_cast<std::size_t>(l)];
        Trip test{{t.o_lon, t.o_lat}, {t.d_lon, t.d_lat}, {}, t.yday};
        entities.emplace_back(key, std::move(history), std::move(test));
        ++out.report.eligible;
    }

    DatasetMeta meta;
    meta.source = source.empty() ? "records" : std::move(source);
    meta.l_filter = "L=" + std::to_string(l) + " policy=" + std::string(to_string(policy));
    out.dataset = Dataset(std::move(entities), std::move(meta));
    return out;
}

/// Union of two datasets with disjoint keys; provenance records both sources.
inline Dataset merge_datasets(const Dataset& a, const Dataset& b) {
    std::vector<Entity> entities;
    entities.reserve(a.size() + b.size());
    entities.insert(entities.end(), a.entities().begin(), a.entities().end());
    for (const Entity& e : b.entities()) {
        if (a.find(e.key()) != nullptr) {
            throw DuplicateEntityError("entity " + e.key().str() + " present in both datasets");
        }
        entities.push_back(e);
    }
    DatasetMeta meta;
    meta.source = "merge(" + a.meta().source + ", " + b.meta().source + ")";
    meta.l_filter = a.meta().l_filter == b.meta().l_filter
                        ? a.meta().l_filter
                        : a.meta().l_filter + " + " + b.meta().l_filter;
    meta.notes = a.meta().notes;
    meta.notes.insert(meta.notes.end(), b.meta().notes.begin(), b.meta().notes.end());
    return Dataset(std::move(entities), std::move(meta));
}

namespace detail {

inline void write_meta_lines(std::ostream& out, const DatasetMeta& meta) {
    out << "# source=" << meta.source << "\n";
    if (!meta.l_filter.empty()) out << "# l_filter=" << meta.l_filter << "\n";
    if (meta.seed) out << "# seed=" << *meta.seed << "\n";
    for (const std::string& n : meta.notes) out << "# note=" << n << "\n";
}

inline DatasetMeta parse_meta_lines(const std::vector<std::string>& lines) {
    DatasetMeta meta;
    for (std::string_view line : lines) {
        line.remove_prefix(1); // '#'
        line = trim(line);
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) continue;
        const std::string_view key = line.substr(0, eq);
        const std::string_view value = line.substr(eq + 1);
        if (key == "source") meta.source = std::string(value);
        else if (key == "l_filter") meta.l_filter = std::string(value);
        else if (key == "seed") {
            std::uint64_t s = 0;
            if (parse_u64(value, s)) meta.seed = s;
        } else if (key == "note") {
            meta.notes.emplace_back(value);
        }
    }
    return meta;
}

inline void write_record_row(std::ostream& out, const EntityKey& key, const Trip& t,
                             bool is_test) {
    out << key.ticket_id << ',' << key.wday << ',' << key.dhour << ',' << t.yday << ','
        << format_double(t.origin.lon) << ',' << format_double(t.origin.lat) << ','
        << format_double(t.destination.lon) << ',' << format_double(t.destination.lat) << ','
        << (is_test ? 1 : 0) << '\n';
}

} // namespace detail

/// Writes a dataset in the ingest schema: one row per history trip and per
/// test trip, with an extra is-test column marking the held-out rows.
/// Metadata goes into leading '#' comment lines so a dataset round-trips
/// exactly through export and import.
inline void export_dataset_csv(const Dataset& ds, std::ostream& out) {
    detail::write_meta_lines(out, ds.meta());
    out << "TicketId,w-day,d-hour,y-day,o-longitude,o-latitude,d-longitude,d-latitude,is-test\n";
    for (const Entity& e : ds.entities()) {
        for (const Trip& t : e.history()) detail::write_record_row(out, e.key(), t, false);
        if (e.test_trip()) detail::write_record_row(out, e.key(), *e.test_trip(), true);
    }
}

inline void export_dataset_csv_file(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    export_dataset_csv(ds, out);
}

/// Reads back a dataset written by export_dataset_csv, using the is-test
/// flags to reconstruct histories and held-out trips exactly.
inline Dataset import_dataset_csv(std::istream& in) {
    const ParseResult parsed = parse_csv(in);
    if (!parsed.issues.empty()) {
        throw Error("dataset file has " + std::to_string(parsed.issues.size()) +
                    " malformed row(s); first at line " + std::to_string(parsed.issues[0].line) +
                    ": " + parsed.issues[0].message);
    }
    if (!parsed.has_test_flags) {
        throw SchemaError("dataset file lacks the is-test column; run ingest or synth first");
    }
    std::map<EntityKey, std::pair<std::vector<Trip>, std::optional<Trip>>> groups;
    for (const RawRecord& r : parsed.records) {
        auto& slot = groups[EntityKey{r.ticket_id, r.wday, r.dhour}];
        Trip trip{{r.o_lon, r.o_lat}, {r.d_lon, r.d_lat}, {}, r.yday};
        if (r.is_test) {
            if (slot.second) {
                throw Error("entity " + EntityKey{r.ticket_id, r.wday, r.dhour}.str() +
                            " has more than one test row");
            }
            slot.second = std::move(trip);
        } else {
            slot.first.push_back(std::move(trip));
        }
    }
    std::vector<Entity> entities;
    entities.reserve(groups.size());
    for (auto& [key, slot] : groups) {
        entities.emplace_back(key, std::move(slot.first), std::move(slot.second));
    }
    return Dataset(std::move(entities), detail::parse_meta_lines(parsed.meta_lines));
}

inline Dataset import_dataset_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file: " + path);
    return import_dataset_csv(in);
}

} // namespace trippred

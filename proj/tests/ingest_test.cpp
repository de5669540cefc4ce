#include "trippred/ingest.hpp"

#include "support/builders.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace trippred {
namespace {

using testing::key;

std::string fragment_path() {
    return std::string(TRIPPRED_TEST_DATA_DIR) + "/eticket_fragment.csv";
}

TEST(ParseCsv, ReadsTheFragment) {
    const ParseResult r = parse_csv_file(fragment_path());
    EXPECT_TRUE(r.issues.empty());
    ASSERT_EQ(r.records.size(), 14u);
    std::set<std::string> ids;
    for (const RawRecord& rec : r.records) ids.insert(rec.ticket_id);
    EXPECT_EQ(ids.size(), 3u);
    EXPECT_FALSE(r.has_test_flags);

    const RawRecord& first = r.records[0];
    EXPECT_EQ(first.ticket_id, "tid000001");
    EXPECT_EQ(first.wday, 2);
    EXPECT_EQ(first.dhour, 13);
    EXPECT_EQ(first.yday, 65);
    EXPECT_EQ(first.o_lon, 6.160129);
    EXPECT_EQ(first.d_lat, 48.693237);
}

TEST(ParseCsv, AcceptsHeaderSpellingsCaseInsensitively) {
    for (const char* id_col : {"TicketId", "TickedId", "TicketID", "ticketid", "TICKEDID"}) {
        std::istringstream in(std::string(id_col) +
                              ",W-DAY,d-hour,y-day,o-longitude,o-latitude,"
                              "d-longitude,d-latitude\nt1,1,8,10,1.0,2.0,3.0,4.0\n");
        const ParseResult r = parse_csv(in);
        ASSERT_EQ(r.records.size(), 1u) << id_col;
        EXPECT_EQ(r.records[0].ticket_id, "t1");
    }
}

TEST(ParseCsv, EmptyFileWithHeaderGivesNoRecords) {
    std::istringstream in(
        "TicketId,w-day,d-hour,y-day,o-longitude,o-latitude,d-longitude,d-latitude\n");
    const ParseResult r = parse_csv(in);
    EXPECT_TRUE(r.records.empty());
    EXPECT_TRUE(r.issues.empty());
}

TEST(ParseCsv, MissingColumnIsASchemaError) {
    std::istringstream in("TicketId,w-day,d-hour,y-day,o-longitude,o-latitude,d-longitude\n");
    try {
        parse_csv(in);
        FAIL() << "expected SchemaError";
    } catch (const SchemaError& e) {
        EXPECT_NE(std::string(e.what()).find("d-latitude"), std::string::npos);
    }
}

TEST(ParseCsv, NoHeaderAtAllIsASchemaError) {
    std::istringstream in("");
    EXPECT_THROW(parse_csv(in), SchemaError);
}

TEST(ParseCsv, MalformedRowsAreReportedWithLineNumbers) {
    std::istringstream in(
        "TicketId,w-day,d-hour,y-day,o-longitude,o-latitude,d-longitude,d-latitude\n"
        "t1,1,8,10,1.0,2.0,3.0,4.0\n"
        "t1,1,8,11,1.0,2.0,3.0,abc\n"
        "t1,9,8,12,1.0,2.0,3.0,4.0\n"
        "t1,1,8,13,1.0,2.0,3.0\n"
        "t1,1,8,14,1.0,2.0,3.0,4.0\n");
    const ParseResult r = parse_csv(in);
    EXPECT_EQ(r.records.size(), 2u);
    ASSERT_EQ(r.issues.size(), 3u);
    EXPECT_EQ(r.issues[0].line, 3u);
    EXPECT_NE(r.issues[0].message.find("abc"), std::string::npos);
    EXPECT_EQ(r.issues[1].line, 4u); // w-day out of range
    EXPECT_EQ(r.issues[2].line, 5u); // missing field
}

TEST(GroupEntities, EarliestPolicyOnTheFragment) {
    const ParseResult parsed = parse_csv_file(fragment_path());
    const GroupResult grouped = group_entities(parsed.records, 3, GroupPolicy::earliest);

    EXPECT_EQ(grouped.report.groups_total, 3u);
    EXPECT_EQ(grouped.report.eligible, 2u);
    EXPECT_EQ(grouped.report.too_short, 1u); // the 3-record ticket needs 4
    ASSERT_EQ(grouped.dataset.size(), 2u);

    const Entity* e1 = grouped.dataset.find(key("tid000001", 2, 13));
    ASSERT_NE(e1, nullptr);
    ASSERT_EQ(e1->length(), 3);
    EXPECT_EQ(e1->history()[0].yday, 65);
    EXPECT_EQ(e1->history()[1].yday, 72);
    EXPECT_EQ(e1->history()[2].yday, 93);
    ASSERT_TRUE(e1->test_trip());
    EXPECT_EQ(e1->test_trip()->yday, 107);

    const Entity* e3 = grouped.dataset.find(key("tid000003", 2, 8));
    ASSERT_NE(e3, nullptr);
    EXPECT_EQ(e3->history()[2].yday, 79);
    EXPECT_EQ(e3->test_trip()->yday, 93);

    EXPECT_EQ(grouped.dataset.find(key("tid000002", 4, 12)), nullptr);
}

TEST(GroupEntities, ExactPolicyKeepsOnlyMatchingLengths) {
    const ParseResult parsed = parse_csv_file(fragment_path());
    const GroupResult grouped = group_entities(parsed.records, 6, GroupPolicy::exact);
    ASSERT_EQ(grouped.dataset.size(), 1u);
    const Entity& e = grouped.dataset.entities()[0];
    EXPECT_EQ(e.key(), key("tid000003", 2, 8));
    EXPECT_EQ(entity_length(e), 6);
    EXPECT_EQ(grouped.report.too_short, 2u);
    EXPECT_EQ(grouped.report.wrong_length, 0u);

    // With L=3 under exact, the 4-record ticket qualifies and the 7-record
    // one is rejected for having too many records.
    const GroupResult l3 = group_entities(parsed.records, 3, GroupPolicy::exact);
    EXPECT_EQ(l3.dataset.size(), 1u);
    EXPECT_EQ(l3.report.wrong_length, 1u);
}

TEST(GroupEntities, DuplicateYdayRejectsTheGroupByName) {
    std::vector<RawRecord> records;
    records.push_back({"dup", 1, 8, 10, 1, 2, 3, 4, false});
    records.push_back({"dup", 1, 8, 10, 1, 2, 3, 4, false});
    records.push_back({"dup", 1, 8, 11, 1, 2, 3, 4, false});
    records.push_back({"ok", 1, 8, 10, 1, 2, 3, 4, false});
    records.push_back({"ok", 1, 8, 11, 1, 2, 3, 4, false});
    const GroupResult grouped = group_entities(records, 1, GroupPolicy::earliest);
    EXPECT_EQ(grouped.dataset.size(), 1u);
    ASSERT_EQ(grouped.report.rejected.size(), 1u);
    EXPECT_NE(grouped.report.rejected[0].find("dup"), std::string::npos);
    EXPECT_NE(grouped.report.rejected[0].find("10"), std::string::npos);
}

TEST(GroupEntities, InputOrderDoesNotMatter) {
    const ParseResult parsed = parse_csv_file(fragment_path());
    std::vector<RawRecord> shuffled = parsed.records;
    std::mt19937_64 rng(7);
    for (int round = 0; round < 10; ++round) {
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const GroupResult a = group_entities(parsed.records, 3, GroupPolicy::earliest);
        const GroupResult b = group_entities(shuffled, 3, GroupPolicy::earliest);
        EXPECT_EQ(a.dataset, b.dataset);
    }
}

TEST(MergeDatasets, UnionAndCollisions) {
    const ParseResult parsed = parse_csv_file(fragment_path());
    const Dataset d3 = group_entities(parsed.records, 3, GroupPolicy::earliest, "frag").dataset;
    const Dataset d6 = group_entities(parsed.records, 6, GroupPolicy::exact, "frag").dataset;

    const Dataset merged = merge_datasets(d3, Dataset{});
    EXPECT_EQ(merged.entities(), d3.entities());

    // d3 and d6 share tid000003 -> collision
    EXPECT_THROW(merge_datasets(d3, d6), DuplicateEntityError);

    // Disjoint merge: relabel the second dataset's keys.
    std::vector<Entity> relabeled;
    for (const Entity& e : d6.entities()) {
        relabeled.emplace_back(key(e.key().ticket_id + "-b", e.key().wday, e.key().dhour),
                               e.history(), e.test_trip());
    }
    const Dataset other(std::move(relabeled), DatasetMeta{"other", "", std::nullopt, {}});
    const Dataset both = merge_datasets(d3, other);
    EXPECT_EQ(both.size(), d3.size() + other.size());
    EXPECT_NE(both.meta().source.find("frag"), std::string::npos);
    EXPECT_NE(both.meta().source.find("other"), std::string::npos);
}

TEST(ExportImport, DatasetRoundTripsExactly) {
    const ParseResult parsed = parse_csv_file(fragment_path());
    GroupResult grouped = group_entities(parsed.records, 3, GroupPolicy::earliest, "fragment");
    std::ostringstream exported;
    export_dataset_csv(grouped.dataset, exported);

    std::istringstream back(exported.str());
    const Dataset reloaded = import_dataset_csv(back);
    EXPECT_EQ(reloaded, grouped.dataset);

    // Re-parsing the export as raw records and regrouping also reproduces
    // the dataset: the test rows rejoin their groups as record L+1.
    std::istringstream raw(exported.str());
    const ParseResult reparsed = parse_csv(raw);
    EXPECT_TRUE(reparsed.has_test_flags);
    const GroupResult regrouped =
        group_entities(reparsed.records, 3, GroupPolicy::earliest, "fragment");
    EXPECT_EQ(regrouped.dataset.entities(), grouped.dataset.entities());
}

TEST(ExportImport, MetaSurvivesTheRoundTrip) {
    std::vector<Entity> entities;
    entities.push_back(testing::entity("a", {testing::line_trip(0.125), testing::line_trip(0.25)},
                                       testing::line_trip(0.5)));
    DatasetMeta meta;
    meta.source = "unit-test";
    meta.l_filter = "L=2 policy=earliest";
    meta.seed = 99;
    meta.notes = {"first note", "second note"};
    const Dataset ds(std::move(entities), meta);

    std::ostringstream out;
    export_dataset_csv(ds, out);
    std::istringstream in(out.str());
    const Dataset back = import_dataset_csv(in);
    EXPECT_EQ(back.meta(), meta);
    EXPECT_EQ(back, ds);
}

TEST(ExportImport, ImportRequiresTestFlags) {
    std::ifstream in(fragment_path());
    EXPECT_THROW(import_dataset_csv(in), SchemaError);
}

TEST(ExportImport, ExactDoubleRoundTripOnAwkwardValues) {
    // Values with no short decimal representation survive the export.
    std::vector<Entity> entities;
    entities.push_back(testing::entity(
        "a", {testing::trip(1.0 / 3.0, 2.0 / 7.0, 0.1 + 0.2, 6.160129),
              testing::trip(1e-17, 123456.789012345, 3.14159265358979, 2.718281828459045)}));
    const Dataset ds(std::move(entities), {});
    std::ostringstream out;
    export_dataset_csv(ds, out);
    std::istringstream in(out.str());
    EXPECT_EQ(import_dataset_csv(in), ds);
}

} // namespace
} // namespace trippred

// Stream runner and report emission: deterministic bytes, schema shape,
// audit policies, invalid-event handling, and the bench sweep.
#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "dyncol/dyncol.hpp"
#include "test_util.hpp"

using namespace dyncol;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::size_t comma_count(const std::string& line) {
    std::size_t c = 0;
    for (char ch : line)
        if (ch == ',') ++c;
    return c;
}

}  // namespace

TEST_CASE("repeated runs emit byte-identical reports", "[runner]") {
    struct Config {
        const char* model;
        std::uint32_t n, delta;
        std::uint64_t t, seed;
    };
    const Config configs[] = {
        {"churn:0.6", 200, 8, 5000, 3},
        {"sliding:60", 150, 6, 5000, 4},
    };
    for (const Config& c : configs) {
        INFO("model " << c.model);
        std::string first_json, first_csv;
        for (int rep = 0; rep < 2; ++rep) {
            const Stream s = generate(GenModel::parse(c.model), c.n, c.delta, c.t, c.seed);
            RunOptions opt;
            opt.seed = c.seed;
            opt.audit = AuditPolicy::at_end();
            opt.baseline = true;
            opt.model_tag = c.model;
            const RunReport r = run(s, opt);
            const std::string j = emit_json(r), v = emit_csv(r);
            if (rep == 0) {
                first_json = j;
                first_csv = v;
            } else {
                CHECK(j == first_json);
                CHECK(v == first_csv);
            }
        }
    }
}

TEST_CASE("json report carries the documented fields", "[runner]") {
    const Stream s = generate(GenModel::parse("churn:0.6"), 120, 8, 3000, 5);
    RunOptions opt;
    opt.seed = 5;
    opt.audit = AuditPolicy::every(500);
    opt.baseline = true;
    opt.model_tag = "churn:0.6";
    const RunReport r = run(s, opt);

    const nlohmann::json j = nlohmann::json::parse(emit_json(r));
    CHECK(j.at("seed") == 5);
    CHECK(j.at("model") == "churn:0.6");
    CHECK(j.at("config").at("n") == 120);
    CHECK(j.at("config").at("delta") == 8);
    CHECK(j.at("config").at("top_level") == level_cap(120));
    CHECK(j.at("totals").at("updates") == 3000);
    CHECK(j.at("totals").at("inserts").get<std::uint64_t>() +
              j.at("totals").at("deletes").get<std::uint64_t>() ==
          3000);

    // Work categories add up to the reported total.
    const auto& work = j.at("totals").at("work_units");
    std::uint64_t sum = 0;
    for (const auto& [key, val] : work.items())
        if (key != "total") sum += val.get<std::uint64_t>();
    CHECK(sum == work.at("total").get<std::uint64_t>());

    // Levels span -1 .. top_level.
    const auto& levels = j.at("levels");
    REQUIRE(levels.size() == static_cast<std::size_t>(level_cap(120) + 2));
    CHECK(levels[0].at("level") == -1);
    for (const auto& l : levels) {
        CHECK(l.contains("epochs"));
        CHECK(l.contains("original"));
        CHECK(l.contains("induced"));
        CHECK(l.contains("final"));
        CHECK(l.contains("dur_short"));
        CHECK(l.contains("incident_insertions"));
    }

    for (const char* key :
         {"invariant2", "palette_bound", "call_bound", "audit", "proper", "baseline_proper"})
        CHECK(j.at("violations").at(key) == 0);
    CHECK(j.at("baseline").at("enabled") == true);
    CHECK(j.at("status") == "ok");
}

TEST_CASE("csv report is a header plus one matching row", "[runner]") {
    const Stream s = generate(GenModel::parse("churn:0.5"), 80, 6, 2000, 6);
    RunOptions opt;
    opt.seed = 6;
    const RunReport r = run(s, opt);

    const auto lines = split_lines(emit_csv(r));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].rfind("seed,model,n,delta,top_level", 0) == 0);
    CHECK(comma_count(lines[0]) == comma_count(lines[1]));
    // Per-level blocks: 6 columns for each of levels -1..top.
    const std::size_t fixed = 33;
    CHECK(comma_count(lines[0]) + 1 ==
          fixed + 6 * static_cast<std::size_t>(r.top_level + 2));
}

TEST_CASE("audits observe without disturbing the engine's work", "[runner]") {
    const Stream s = generate(GenModel::parse("churn:0.6"), 150, 8, 4000, 7);
    RunOptions off;
    off.seed = 7;
    RunOptions end = off;
    end.audit = AuditPolicy::at_end();
    RunOptions often = off;
    often.audit = AuditPolicy::every(400);

    const RunReport a = run(s, off), b = run(s, end), c = run(s, often);
    CHECK(a.audits_run == 0);
    CHECK(b.audits_run == 1);
    CHECK(c.audits_run == 4000 / 400 + 1);
    CHECK(a.work_total == b.work_total);
    CHECK(a.work_total == c.work_total);
    CHECK(a.amortized_units == c.amortized_units);
    CHECK(b.audit_units > 0);
    CHECK(b.violation_total() == 0);
    CHECK(c.violation_total() == 0);
}

TEST_CASE("rejected events abort by default and are skippable", "[runner]") {
    Stream s;
    s.header = {4, 3};
    s.events = {UpdateEvent::ins(0, 1), UpdateEvent::ins(0, 1), UpdateEvent::ins(1, 2)};

    RunOptions opt;
    SECTION("default: throw with the offending index") {
        try {
            run(s, opt);
            FAIL("expected stream_apply_error");
        } catch (const stream_apply_error& e) {
            CHECK(e.event_index == 1);
            CHECK(e.status == UpdateStatus::duplicate_edge);
            CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("event 1"));
        }
    }
    SECTION("skip_invalid counts only accepted events") {
        opt.skip_invalid = true;
        opt.audit = AuditPolicy::at_end();
        const RunReport r = run(s, opt);
        CHECK(r.updates == 2);
        CHECK(r.inserts == 2);
        CHECK(r.deletes == 0);
        CHECK(r.violation_total() == 0);
    }
}

TEST_CASE("bench sweeps are ordered and job-count independent", "[runner]") {
    BenchOptions opt;
    opt.ns = {50, 100};
    opt.delta = 6;
    opt.updates_per_n = 50;
    opt.model = GenModel::parse("churn:0.6");
    opt.seeds = 3;
    opt.seed_base = 1;
    opt.audit = AuditPolicy::at_end();

    opt.jobs = 1;
    const BenchResult serial = bench(opt);
    opt.jobs = 4;
    const BenchResult parallel = bench(opt);

    REQUIRE(serial.rows.size() == 6);
    CHECK(emit_bench_json(serial) == emit_bench_json(parallel));
    CHECK(emit_bench_csv(serial) == emit_bench_csv(parallel));

    // Rows come back in (n, seed) order regardless of which thread ran them.
    CHECK(serial.rows[0].n == 50);
    CHECK(serial.rows[3].n == 100);
    CHECK(serial.rows[0].seed == 1);
    CHECK(serial.rows[2].seed == 3);

    REQUIRE(serial.aggregates.size() == 2);
    for (const BenchAggregate& a : serial.aggregates) {
        CHECK(a.min_amortized <= a.mean_amortized);
        CHECK(a.mean_amortized <= a.max_amortized);
    }
    CHECK(serial.amortized_ratio >= 1.0);
}

TEST_CASE("empty bench sweep yields an empty table", "[runner]") {
    BenchOptions opt;
    opt.model = GenModel::parse("churn:0.6");
    const BenchResult b = bench(opt);
    CHECK(b.rows.empty());
    CHECK(b.aggregates.empty());
    CHECK(b.amortized_ratio == 0.0);
    const nlohmann::json j = nlohmann::json::parse(emit_bench_json(b));
    CHECK(j.at("rows").empty());
    CHECK(j.at("aggregates").empty());
}

TEST_CASE("setup cost tracks delta while per-update cost does not", "[runner]") {
    const std::uint32_t n = 400;
    auto run_with_delta = [&](std::uint32_t delta) {
        const Stream s = generate(GenModel::parse("churn:0.6"), n, delta, 20000, 9);
        RunOptions opt;
        opt.seed = 9;
        return run(s, opt);
    };
    const RunReport small = run_with_delta(10);
    const RunReport large = run_with_delta(100);

    const auto pre = [](const RunReport& r) {
        return r.work_by_cat[static_cast<std::size_t>(WorkCat::preprocess)];
    };
    CHECK(pre(small) == static_cast<std::uint64_t>(n) * (10 + 2) + n);
    CHECK(pre(large) == static_cast<std::uint64_t>(n) * (100 + 2) + n);

    // Per-update cost is palette-size-free: a 10x delta change stays within a
    // small constant factor.
    CHECK(small.amortized_units > 0.0);
    CHECK(large.amortized_units > 0.0);
    const double ratio = large.amortized_units / small.amortized_units;
    CHECK(ratio < 4.0);
    CHECK(ratio > 0.25);
}

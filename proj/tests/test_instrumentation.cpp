#include <catch2/catch_amalgamated.hpp>

#include "dyncol/dyncol.hpp"
#include "test_util.hpp"

using namespace dyncol;
using testutil::ins;
using testutil::paint_isolated;

TEST_CASE("work meter charging") {
    WorkMeter m;

    SECTION("single charge lands in its category") {
        m.charge(WorkCat::deletion, 1);
        CHECK(m.category(WorkCat::deletion) == 1);
        CHECK(m.total() == 1);
    }

    SECTION("totals accumulate across categories") {
        for (int i = 0; i < 100; ++i) m.charge(WorkCat::palette_scan, 1);
        m.charge(WorkCat::det_color, 5);
        CHECK(m.total() == 105);
        CHECK(m.total() == m.category_sum());
    }

    SECTION("negative units are rejected") {
        CHECK_THROWS_AS(m.charge(WorkCat::deletion, -1), std::invalid_argument);
        CHECK_THROWS_AS(m.charge_structure(-3), std::invalid_argument);
    }

    SECTION("frames tally everything charged inside them") {
        m.begin_frame();
        m.charge(WorkCat::det_color, 4);
        m.charge(WorkCat::palette_scan, 2);
        CHECK(m.end_frame(WorkCat::det_color) == 6);
        CHECK(m.total() == 6);
    }

    SECTION("structure charges follow the announced context") {
        m.set_context(WorkCat::deletion);
        m.charge_structure(3);
        CHECK(m.category(WorkCat::deletion) == 3);
    }

    SECTION("buffered attach units are categorized exactly once") {
        m.begin_pending();
        m.charge_structure(3);  // conflicting-insert attach, category unknown yet
        CHECK(m.total() == 0);  // nothing counted until a call claims it

        m.begin_frame();
        m.charge(WorkCat::rand_color, 2);
        CHECK(m.end_frame(WorkCat::rand_color) == 5);  // buffer + in-frame work
        CHECK(m.category(WorkCat::rand_color) == 5);
        CHECK(m.total() == 5);

        // A later frame must not see the buffer again.
        m.begin_frame();
        m.charge(WorkCat::det_color, 1);
        CHECK(m.end_frame(WorkCat::det_color) == 1);
        CHECK(m.total() == 6);
    }
}

TEST_CASE("per-call ceilings") {
    WorkMeter m;

    SECTION("constant-time calls pass under the slack") {
        m.record_call(CallKind::deletion, 0, 2);
        m.record_call(CallKind::conflictless_insert, 0, kCallSlack);
        CHECK(m.assert_call_bounds().empty());
        CHECK(m.calls(CallKind::deletion) == 1);
    }

    SECTION("an oversized call is flagged with its ceiling") {
        const std::uint64_t bound = call_bound(CallKind::det_color, 0);
        CHECK(bound == kCallFactor * 9 + kCallSlack);
        m.record_call(CallKind::det_color, 0, bound + 1);
        REQUIRE(m.assert_call_bounds().size() == 1);
        const CallBoundViolation& v = m.assert_call_bounds()[0];
        CHECK(v.kind == CallKind::det_color);
        CHECK(v.units == bound + 1);
        CHECK(v.bound == bound);
    }

    SECTION("ceilings grow with the landing level") {
        CHECK(call_bound(CallKind::rand_color, 2) == kCallFactor * 81 + kCallSlack);
        CHECK(call_bound(CallKind::deletion, 5) == kCallSlack);  // level-independent
    }
}

TEST_CASE("epoch lifecycle") {
    SECTION("construction opens one bottom epoch per vertex") {
        EpochTracker t(5, 2, 1);
        REQUIRE(t.records().size() == 5);
        for (const EpochRecord& r : t.records()) {
            CHECK(r.end == EpochEnd::open);
            CHECK(r.level == -1);
            CHECK(r.dur == 0);
        }
        CHECK(t.recolor_count() == 0);
    }

    SECTION("landing checks fire only above the bottom") {
        EpochTracker t(3, 2, 1);
        t.on_recolor(0, 2, 0, 3, 3, 10, RecolorCause::conflicting_insertion, 1);
        CHECK(t.invariant2_violations().empty());  // 2*3 >= 5 and 3 >= 3

        t.on_recolor(1, 2, 0, 2, 3, 10, RecolorCause::conflicting_insertion, 2);
        REQUIRE(t.invariant2_violations().size() == 1);  // palette 2: 4 < 5
        CHECK(t.invariant2_violations()[0].vertex == 1);

        t.on_recolor(2, 2, 0, 3, 2, 10, RecolorCause::conflicting_insertion, 3);
        CHECK(t.invariant2_violations().size() == 2);  // down 2 < 3

        t.on_recolor(0, 3, -1, 1, 0, 5, RecolorCause::induced, 4);
        CHECK(t.invariant2_violations().size() == 2);  // bottom landings are exempt
    }

    SECTION("every recolor closes one epoch and opens one") {
        const Stream s = generate(GenModel::parse("churn:0.6"), 60, 8, 3000, 2);
        Engine e({60, 8, 2});
        for (const UpdateEvent& ev : s.events) REQUIRE(e.apply_update(ev) == UpdateStatus::ok);
        CHECK(e.epochs_.records().size() == e.epochs_.recolor_count() + 60);

        const auto stats = e.epochs_.finalize_epochs();
        std::uint64_t total = 0, finals = 0;
        for (const LevelStat& ls : stats) {
            CHECK(ls.original + ls.induced + ls.final_ == ls.epochs);
            total += ls.epochs;
            finals += ls.final_;
        }
        CHECK(total == e.epochs_.records().size());
        CHECK(finals == 60);  // one still-open interval per vertex
    }
}

TEST_CASE("durations count incident insertions") {
    Engine e({10, 9, 1});
    for (VertexId w = 1; w <= 5; ++w) paint_isolated(e, w, static_cast<Color>(w + 1));
    for (VertexId w = 1; w <= 5; ++w) REQUIRE(ins(e, 0, w) == UpdateStatus::ok);

    SECTION("one insertion advances both endpoint intervals") {
        CHECK(e.epochs_.open_epoch(0).dur == 5);
        CHECK(e.epochs_.open_epoch(1).dur == 1);
        CHECK(e.epochs_.open_epoch(5).dur == 1);
    }

    SECTION("the terminating insertion is part of the closed interval") {
        paint_isolated(e, 6, 1);
        REQUIRE(ins(e, 0, 6) == UpdateStatus::ok);  // conflict ends 0's interval
        const EpochRecord& closed = e.epochs_.records()[0];
        REQUIRE(closed.vertex == 0);
        CHECK(closed.end == EpochEnd::original);
        CHECK(closed.dur == 6);
    }

    SECTION("untouched vertices finish with zero duration") {
        (void)e.epochs_.finalize_epochs();
        const EpochRecord& r = e.epochs_.open_epoch(9);
        CHECK(r.end == EpochEnd::final_);
        CHECK(r.dur == 0);
    }

    SECTION("a deletion-only tail closes nothing") {
        const std::uint64_t before = e.epochs_.recolor_count();
        for (auto [u, v] : e.edges()) REQUIRE(e.apply_update(UpdateEvent::del(u, v)) == UpdateStatus::ok);
        CHECK(e.epochs_.recolor_count() == before);
        std::uint64_t originals = 0;
        for (const EpochRecord& r : e.epochs_.records())
            if (r.end == EpochEnd::original) ++originals;
        CHECK(originals == 0);  // nothing ever closed as original in this run
    }
}

TEST_CASE("short-duration thresholds") {
    CHECK(dur_short(0, 0));
    CHECK_FALSE(dur_short(0, 1));  // 1 >= 1/(32e)
    CHECK(dur_short(-1, 0));
    CHECK_FALSE(dur_short(-1, 1));
    CHECK(dur_short(5, 2));        // 2 < 243/(32e) ~ 2.79
    CHECK_FALSE(dur_short(5, 3));
}

TEST_CASE("audits charge nothing to the engine meter") {
    Engine e({30, 5, 3});
    REQUIRE(ins(e, 0, 1) == UpdateStatus::ok);
    const std::uint64_t before = e.meter_.total();
    const AuditResult a = e.audit_structures();
    CHECK(a.clean());
    CHECK(a.units > 0);  // the audit accounts for itself
    CHECK(e.meter_.total() == before);
}

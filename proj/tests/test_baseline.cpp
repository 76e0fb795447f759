#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "dyncol/dyncol.hpp"
#include "test_util.hpp"

using namespace dyncol;

TEST_CASE("proper coloring check") {
    SECTION("empty graph has nothing to violate") {
        CHECK(check_proper({}, {}).empty());
        CHECK(check_proper({1, 1}, {}).empty());
    }

    SECTION("a monochrome edge is one violation") {
        const auto bad = check_proper({1, 1}, {{0, 1}});
        REQUIRE(bad.size() == 1);
        CHECK(bad[0] == std::pair<VertexId, VertexId>{0, 1});
    }

    SECTION("distinct endpoint colors pass") {
        CHECK(check_proper({1, 2, 1}, {{0, 1}, {1, 2}}).empty());
    }
}

TEST_CASE("naive recoloring on conflict") {
    SECTION("fresh state is uniformly colored and scan-free") {
        NaiveState s(5, 3);
        for (VertexId v = 0; v < 5; ++v) CHECK(s.color(v) == 1);
        CHECK(s.scan_units() == 0);
    }

    SECTION("first-fit takes the smallest absent color") {
        NaiveState s(8, 4);
        // Each fresh conflicting pair recolors its first-listed endpoint.
        REQUIRE(s.apply_update(UpdateEvent::ins(1, 5)) == UpdateStatus::ok);
        REQUIRE(s.color(1) == 2);
        REQUIRE(s.apply_update(UpdateEvent::ins(2, 6)) == UpdateStatus::ok);
        REQUIRE(s.color(2) == 2);
        REQUIRE(s.apply_update(UpdateEvent::ins(2, 1)) == UpdateStatus::ok);  // 2 vs 2
        REQUIRE(s.color(2) == 3);  // neighbors held {1, 2}

        REQUIRE(s.apply_update(UpdateEvent::ins(0, 1)) == UpdateStatus::ok);
        REQUIRE(s.apply_update(UpdateEvent::ins(0, 2)) == UpdateStatus::ok);
        REQUIRE(s.apply_update(UpdateEvent::ins(0, 3)) == UpdateStatus::ok);  // 1 vs 1
        CHECK(s.color(0) == 4);  // neighbors held {2, 3, 1}
        CHECK(s.proper_violations().empty());
    }

    SECTION("conflicting insert scans the endpoint neighborhood once") {
        NaiveState s(20, 12);
        REQUIRE(s.apply_update(UpdateEvent::ins(0, 1)) == UpdateStatus::ok);  // 0 -> 2
        REQUIRE(s.scan_units() == 1);
        for (VertexId w = 2; w <= 9; ++w)
            REQUIRE(s.apply_update(UpdateEvent::ins(0, w)) == UpdateStatus::ok);
        REQUIRE(s.scan_units() == 1);  // conflict-free growth costs nothing
        REQUIRE(s.apply_update(UpdateEvent::ins(10, 11)) == UpdateStatus::ok);  // 10 -> 2
        REQUIRE(s.color(10) == 2);

        const std::uint64_t before = s.scan_units();
        REQUIRE(s.apply_update(UpdateEvent::ins(0, 10)) == UpdateStatus::ok);  // 2 vs 2
        CHECK(s.scan_units() == before + 10);  // exactly one scan of the new degree
        CHECK(s.color(0) == 3);
    }

    SECTION("deletions add no scan work") {
        NaiveState s(6, 4);
        REQUIRE(s.apply_update(UpdateEvent::ins(0, 1)) == UpdateStatus::ok);
        const std::uint64_t before = s.scan_units();
        REQUIRE(s.apply_update(UpdateEvent::del(0, 1)) == UpdateStatus::ok);
        CHECK(s.scan_units() == before);
    }

    SECTION("validation mirrors the engine") {
        NaiveState s(4, 2);
        CHECK(s.apply_update(UpdateEvent::ins(0, 0)) == UpdateStatus::invalid_edge);
        CHECK(s.apply_update(UpdateEvent::del(0, 1)) == UpdateStatus::missing_edge);
        REQUIRE(s.apply_update(UpdateEvent::ins(0, 1)) == UpdateStatus::ok);
        CHECK(s.apply_update(UpdateEvent::ins(0, 1)) == UpdateStatus::duplicate_edge);
        REQUIRE(s.apply_update(UpdateEvent::ins(0, 2)) == UpdateStatus::ok);
        CHECK(s.apply_update(UpdateEvent::ins(0, 3)) == UpdateStatus::degree_cap_exceeded);
    }
}

TEST_CASE("both schemes stay proper on the same stream") {
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
        const Stream s = generate(GenModel::parse("churn:0.6"), 80, 7, 4000, seed);
        Engine e({80, 7, seed});
        NaiveState naive(80, 7);
        for (const UpdateEvent& ev : s.events) {
            REQUIRE(e.apply_update(ev) == UpdateStatus::ok);
            REQUIRE(naive.apply_update(ev) == UpdateStatus::ok);
        }
        CHECK(check_proper(e.coloring(), e.edges()).empty());
        CHECK(naive.proper_violations().empty());
    }
}

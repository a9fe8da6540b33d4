#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "srm/moves.hpp"

using namespace srm;

TEST_CASE("all thirty patterns validate and are pairwise distinct") {
    std::set<std::string> classes;
    for (int i = 0; i < kMoveCount; ++i) {
        MoveLabel m = static_cast<MoveLabel>(i);
        const MovePattern& p = pattern(m);
        INFO(move_name(m));
        CHECK(p.lhs.validate().ok());
        CHECK(p.rhs.validate().ok());
        CHECK(p.lhs.boundary.size() == p.rhs.boundary.size());
        for (std::size_t b = 0; b < p.lhs.boundary.size(); ++b)
            CHECK(p.lhs.boundary[b].outbound == p.rhs.boundary[b].outbound);
        classes.insert(pattern_rotation_class(p.lhs, p.rhs, false));
    }
    CHECK(classes.size() == kMoveCount);
}

TEST_CASE("crossing counts per family") {
    CHECK(pattern(MoveLabel::M2a).lhs.classical_count() == 2);
    CHECK(pattern(MoveLabel::M2a).rhs.classical_count() == 0);
    CHECK(pattern(MoveLabel::M2a).lhs.boundary.size() == 4);
    CHECK(pattern(MoveLabel::M1a).rhs.classical_count() == 1);
    CHECK(pattern(MoveLabel::M1a).lhs.classical_count() == 0);
    CHECK(pattern(MoveLabel::M1a).lhs.boundary.size() == 2);
    CHECK(pattern(MoveLabel::M4a).lhs.singular_count() == 1);
    CHECK(pattern(MoveLabel::M4a).lhs.classical_count() == 2);
    CHECK(pattern(MoveLabel::M4a).rhs.singular_count() == 1);
    CHECK(pattern(MoveLabel::M4a).rhs.classical_count() == 2);
    CHECK(pattern(MoveLabel::M5a).lhs.singular_count() == 1);
    CHECK(pattern(MoveLabel::M5a).lhs.classical_count() == 1);
    for (int i = 8; i < 16; ++i) {
        CHECK(pattern(static_cast<MoveLabel>(i)).lhs.classical_count() == 3);
        CHECK(pattern(static_cast<MoveLabel>(i)).lhs.boundary.size() == 6);
    }
}

TEST_CASE("classification tables") {
    auto c = classify(MoveLabel::M3a);
    CHECK(c.fam == MoveFamily::RIII);
    CHECK_FALSE(c.braid);
    CHECK(c.side == IvSide::None);
    c = classify(MoveLabel::M5d);
    CHECK(c.fam == MoveFamily::RV);
    CHECK(c.braid);
    c = classify(MoveLabel::M4f);
    CHECK(c.fam == MoveFamily::RIV);
    CHECK(c.braid);
    CHECK(c.side == IvSide::U);
    CHECK(behy_label(MoveLabel::M4b) == MoveLabel::M4d);
    CHECK(behy_label(MoveLabel::M4a) == MoveLabel::M4a);
    CHECK(behy_label(MoveLabel::M4h) == MoveLabel::M4f);
    CHECK_THROWS(behy_label(MoveLabel::M1a));
}

TEST_CASE("unoriented quotient has the right shape") {
    std::map<std::string, std::vector<MoveLabel>> classes;
    for (int i = 0; i < kMoveCount; ++i) {
        MoveLabel m = static_cast<MoveLabel>(i);
        classes[unoriented_class(m)].push_back(m);
    }
    CHECK(classes.size() == 9);
    std::map<MoveFamily, std::map<IvSide, std::set<std::string>>> per_family;
    for (auto& [name, members] : classes) {
        per_family[family(members[0])][iv_side(members[0])].insert(name);
        for (MoveLabel m : members) CHECK(family(m) == family(members[0]));
    }
    CHECK(per_family[MoveFamily::RI][IvSide::None].size() == 2);
    CHECK(per_family[MoveFamily::RII][IvSide::None].size() == 1);
    CHECK(per_family[MoveFamily::RIII][IvSide::None].size() == 2);
    CHECK(per_family[MoveFamily::RIV][IvSide::O].size() == 1);
    CHECK(per_family[MoveFamily::RIV][IvSide::U].size() == 1);
    CHECK(per_family[MoveFamily::RV][IvSide::None].size() == 2);
    auto r2 = orientations_of(unoriented_class(MoveLabel::M2a));
    CHECK(r2.size() == 4);
}

TEST_CASE("convention file round trip") {
    std::string text = convention_text();
    CHECK(load_convention(text) == fnv1a(text));
}

#include "srm/match.hpp"

TEST_CASE("identity match and apply on every pattern") {
    for (int i = 0; i < kMoveCount; ++i) {
        MoveLabel m = static_cast<MoveLabel>(i);
        INFO(move_name(m));
        const MovePattern& p = pattern(m);
        auto fwd = find_matches(p.lhs, m, false);
        if (!p.lhs.nodes.empty()) CHECK(!fwd.empty());
        bool hit_rhs = false;
        for (auto& inst : fwd) {
            Diagram r = apply_move(p.lhs, inst);
            auto rep = r.validate();
            INFO(rep.str());
            CHECK(rep.ok());
            if (canonical_code(r) == canonical_code(p.rhs)) hit_rhs = true;
        }
        if (!p.lhs.nodes.empty()) CHECK(hit_rhs);

        auto bwd = find_matches(p.rhs, m, true);
        CHECK(!bwd.empty());
        bool hit_lhs = false;
        for (auto& inst : bwd) {
            Diagram r = apply_move(p.rhs, inst);
            CHECK(r.validate().ok());
            if (canonical_code(r) == canonical_code(p.lhs)) hit_lhs = true;
        }
        CHECK(hit_lhs);
    }
}

TEST_CASE("apply then undo restores the diagram") {
    for (int i = 0; i < kMoveCount; ++i) {
        MoveLabel m = static_cast<MoveLabel>(i);
        INFO(move_name(m));
        const MovePattern& p = pattern(m);
        std::string lhs_code = canonical_code(p.lhs);
        auto fwd = find_matches(p.lhs, m, false);
        for (auto& inst : fwd) {
            Diagram r = apply_move(p.lhs, inst);
            bool restored = false;
            for (auto& binst : find_matches(r, m, true)) {
                Diagram rr = apply_move(r, binst);
                if (canonical_code(rr) == lhs_code) restored = true;
            }
            CHECK(restored);
        }
    }
}

TEST_CASE("kink removal produces the crossingless unknot and back") {
    // close the 1a rhs kink into a circle: build it directly
    geom::StrandSpec s;
    s.closed = true;
    s.pts = {{0.0, -3.0}, {0.5, -1.0}, {1.5, 0.5}, {-1.5, 0.5}, {0.5, -2.0}};
    Diagram kinked = geom::build({s}, [](const geom::CrossingInfo&) {
        return geom::Resolution{NodeKind::Classical, 0};
    }, false);
    bool removed = false;
    for (int i = 0; i < 4; ++i) {
        MoveLabel m = static_cast<MoveLabel>(i);
        for (auto& inst : find_matches(kinked, m, true)) {
            Diagram r = apply_move(kinked, inst);
            REQUIRE(r.validate().ok());
            CHECK(r.nodes.empty());
            CHECK(r.components.size() == 1);
            CHECK(r.components[0].bare_circle);
            removed = true;
            // and forward again: kink the bare circle
            bool rekinked = false;
            for (auto& finst : find_matches(r, m, false)) {
                Diagram k2 = apply_move(r, finst);
                REQUIRE(k2.validate().ok());
                if (canonical_code(k2) == canonical_code(kinked)) rekinked = true;
            }
            CHECK(rekinked);
        }
    }
    CHECK(removed);
}

TEST_CASE("crossing count deltas per family") {
    for (int i = 0; i < kMoveCount; ++i) {
        MoveLabel m = static_cast<MoveLabel>(i);
        const MovePattern& p = pattern(m);
        int dc = p.rhs.classical_count() - p.lhs.classical_count();
        int ds = p.rhs.singular_count() - p.lhs.singular_count();
        CHECK(ds == 0);
        switch (family(m)) {
            case MoveFamily::RI: CHECK(std::abs(dc) == 1); break;
            case MoveFamily::RII: CHECK(std::abs(dc) == 2); break;
            default: CHECK(dc == 0);
        }
        if (family(m) == MoveFamily::RIV || family(m) == MoveFamily::RV)
            CHECK(p.lhs.singular_count() == 1);
    }
}

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "srm/canonical.hpp"
#include "srm/diagram.hpp"
#include "srm/format.hpp"
#include "srm/geom.hpp"

namespace srm {

enum class MoveLabel : std::uint8_t {
    M1a, M1b, M1c, M1d,
    M2a, M2b, M2c, M2d,
    M3a, M3b, M3c, M3d, M3e, M3f, M3g, M3h,
    M4a, M4b, M4c, M4d, M4e, M4f, M4g, M4h,
    M5a, M5b, M5c, M5d, M5e, M5f,
};
constexpr int kMoveCount = 30;

enum class MoveFamily : std::uint8_t { RI, RII, RIII, RIV, RV };
enum class IvSide : std::uint8_t { None, O, U };

inline const char* move_name(MoveLabel m) {
    static const char* names[] = {"1a", "1b", "1c", "1d", "2a", "2b", "2c", "2d",
                                  "3a", "3b", "3c", "3d", "3e", "3f", "3g", "3h",
                                  "4a", "4b", "4c", "4d", "4e", "4f", "4g", "4h",
                                  "5a", "5b", "5c", "5d", "5e", "5f"};
    return names[static_cast<int>(m)];
}

inline std::optional<MoveLabel> move_from_name(const std::string& s) {
    for (int i = 0; i < kMoveCount; ++i)
        if (s == move_name(static_cast<MoveLabel>(i))) return static_cast<MoveLabel>(i);
    return std::nullopt;
}

inline MoveFamily family(MoveLabel m) {
    int i = static_cast<int>(m);
    if (i < 4) return MoveFamily::RI;
    if (i < 8) return MoveFamily::RII;
    if (i < 16) return MoveFamily::RIII;
    if (i < 24) return MoveFamily::RIV;
    return MoveFamily::RV;
}

inline IvSide iv_side(MoveLabel m) {
    if (family(m) != MoveFamily::RIV) return IvSide::None;
    return static_cast<int>(m) < static_cast<int>(MoveLabel::M4e) ? IvSide::O : IvSide::U;
}

// Braid / non-braid classification of the catalog.
inline bool braid_type(MoveLabel m) {
    switch (m) {
        case MoveLabel::M2c: case MoveLabel::M2d:
        case MoveLabel::M3a: case MoveLabel::M3h:
        case MoveLabel::M4a: case MoveLabel::M4e:
        case MoveLabel::M5b: case MoveLabel::M5c:
        case MoveLabel::M5e: case MoveLabel::M5f:
            return false;
        default:
            return family(m) != MoveFamily::RI;  // kinks are never braid moves
    }
}

// Correspondence of type IV labels with the singquandle literature's table.
inline MoveLabel behy_label(MoveLabel m) {
    switch (m) {
        case MoveLabel::M4a: return MoveLabel::M4a;
        case MoveLabel::M4b: return MoveLabel::M4d;
        case MoveLabel::M4c: return MoveLabel::M4c;
        case MoveLabel::M4d: return MoveLabel::M4b;
        case MoveLabel::M4e: return MoveLabel::M4e;
        case MoveLabel::M4f: return MoveLabel::M4h;
        case MoveLabel::M4g: return MoveLabel::M4g;
        case MoveLabel::M4h: return MoveLabel::M4f;
        default: throw std::invalid_argument("behy_label is defined on type IV moves only");
    }
}

struct MovePattern {
    Diagram lhs, rhs;
};

struct ClassifyResult {
    MoveFamily fam;
    bool braid;
    IvSide side;
};

inline ClassifyResult classify(MoveLabel m) { return {family(m), braid_type(m), iv_side(m)}; }

namespace catalog_detail {

using geom::CrossingInfo;
using geom::Resolution;
using geom::StrandSpec;
using geom::Vec;

inline StrandSpec arc(std::vector<Vec> pts, int comp) {
    StrandSpec s;
    s.pts = std::move(pts);
    s.component = comp;
    return s;
}

inline std::vector<Vec> maybe_rev(std::vector<Vec> pts, bool rev) {
    if (rev) std::reverse(pts.begin(), pts.end());
    return pts;
}

// --- type I: plain strand vs kink -------------------------------------------
// variants: loop side (right/left of the upward strand) x over pass (first/second)
inline MovePattern build_r1(bool mirror, int over_pass) {
    double f = mirror ? -1.0 : 1.0;
    MovePattern p;
    p.lhs = geom::build({arc({{0, -2}, {0, 2}}, 0)}, {}, true);
    std::vector<Vec> kink = {{0, -2},          {f * -0.25, -1.0}, {f * 0.25, 0.6},
                             {f * 0.9, 0.9},   {f * 1.1, 0.3},    {f * 0.35, 0.25},
                             {f * -0.35, -0.65}, {0, 2}};
    p.rhs = geom::build({arc(kink, 0)}, [&](const CrossingInfo&) {
        return Resolution{NodeKind::Classical, over_pass};
    }, true);
    return p;
}

// --- type II: two crossings vs parallel strands ------------------------------
// left strand alpha bulges across the right strand beta; the four oriented
// variants are the two coherent over choices and, for antiparallel strands,
// the two direction patterns (over-under flips are rotations of each other)
inline MovePattern build_r2(bool rev_alpha, bool rev_beta, int over_strand) {
    MovePattern p;
    std::vector<Vec> bulge = {{-0.5, -2}, {-0.2, -1}, {1.1, -0.5}, {1.1, 0.5}, {-0.2, 1}, {-0.5, 2}};
    std::vector<Vec> straight = {{0.5, -2}, {0.5, 2}};
    auto resolver = [&](const CrossingInfo&) { return Resolution{NodeKind::Classical, over_strand}; };
    p.lhs = geom::build({arc(maybe_rev(bulge, rev_alpha), 0), arc(maybe_rev(straight, rev_beta), 1)}, resolver, true);
    p.rhs = geom::build({arc(maybe_rev({{-0.5, -2}, {-0.5, 2}}, rev_alpha), 0), arc(maybe_rev(straight, rev_beta), 1)}, {}, true);
    return p;
}

// --- type III: triangle slide -----------------------------------------------
// three chords of a hexagon; the horizontal chord bends below (lhs) or above
// (rhs) the other two's crossing. depth[i]: larger = nearer the eye.
inline MovePattern build_r3(std::array<int, 3> depth, std::array<bool, 3> rev) {
    auto side = [&](double dy) {
        std::vector<StrandSpec> ss;
        ss.push_back(arc(maybe_rev({{2, 0}, {0, dy}, {-2, 0}}, rev[0]), 0));
        ss.push_back(arc(maybe_rev({{1, 1.7320508}, {-1, -1.7320508}}, rev[1]), 1));
        ss.push_back(arc(maybe_rev({{-1, 1.7320508}, {1, -1.7320508}}, rev[2]), 2));
        auto resolver = [&](const CrossingInfo& ci) {
            int over = depth[ci.strand_a] > depth[ci.strand_b] ? ci.strand_a : ci.strand_b;
            return Resolution{NodeKind::Classical, over};
        };
        return geom::build(ss, resolver, true);
    };
    return MovePattern{side(-0.4), side(0.4)};
}

// --- type IV: strand slides past a singular crossing -------------------------
// slider runs south->north, bowing left (lhs) or right (rhs) of the vertex
inline MovePattern build_r4(bool slider_over, bool rev_b1, bool rev_b2) {
    auto side = [&](double bow) {
        std::vector<StrandSpec> ss;
        ss.push_back(arc({{0, -2}, {bow, 0}, {0, 2}}, 0));                                        // slider
        ss.push_back(arc(maybe_rev({{-1.7320508, -1}, {1.7320508, 1}}, rev_b1), 1));              // branch 1
        ss.push_back(arc(maybe_rev({{1.7320508, -1}, {-1.7320508, 1}}, rev_b2), 2));              // branch 2
        auto resolver = [&](const CrossingInfo& ci) {
            if (ci.strand_a == 1 && ci.strand_b == 2) return Resolution{NodeKind::Singular, -1};
            return Resolution{NodeKind::Classical, slider_over ? 0 : (ci.strand_a == 0 ? ci.strand_b : ci.strand_a)};
        };
        return geom::build(ss, resolver, true);
    };
    return MovePattern{side(-0.5), side(0.5)};
}

// --- type V: classical crossing slides through a singular one ----------------
// two strands crossing twice, one vertex singular and one classical; the move
// carries the classical crossing through the vertex. Sliding through the
// double point exchanges which strand is over while keeping the local writhe,
// so the rhs crossing is marked over on the other strand.
inline MovePattern build_r5(bool rev_alpha, bool rev_beta, int over_lhs) {
    std::vector<Vec> bulge = {{-0.5, -2}, {-0.2, -1}, {1.1, -0.5}, {1.1, 0.5}, {-0.2, 1}, {-0.5, 2}};
    std::vector<Vec> straight = {{0.5, -2}, {0.5, 2}};
    auto side = [&](bool classical_bottom, int over_strand) {
        auto resolver = [&](const CrossingInfo& ci) {
            bool bottom = ci.pos.y < 0;
            if (bottom == classical_bottom) return Resolution{NodeKind::Classical, over_strand};
            return Resolution{NodeKind::Singular, -1};
        };
        return geom::build({arc(maybe_rev(bulge, rev_alpha), 0), arc(maybe_rev(straight, rev_beta), 1)}, resolver, true);
    };
    return MovePattern{side(true, over_lhs), side(false, over_lhs ^ 1)};
}

}  // namespace catalog_detail

// The move catalog: all thirty oriented patterns. Label assignment within each
// family is pinned by the generation lemma certificates (see the tests); the
// braid/non-braid split follows the standard classification.
inline const std::array<MovePattern, kMoveCount>& catalog() {
    using namespace catalog_detail;
    static const std::array<MovePattern, kMoveCount> c = [] {
        std::array<MovePattern, kMoveCount> a;
        auto set = [&](MoveLabel m, MovePattern p) { a[static_cast<int>(m)] = std::move(p); };
        set(MoveLabel::M1a, build_r1(false, 0));
        set(MoveLabel::M1b, build_r1(false, 1));
        set(MoveLabel::M1c, build_r1(true, 1));
        set(MoveLabel::M1d, build_r1(true, 0));
        set(MoveLabel::M2a, build_r2(false, false, 0));
        set(MoveLabel::M2b, build_r2(false, false, 1));
        set(MoveLabel::M2c, build_r2(false, true, 0));
        set(MoveLabel::M2d, build_r2(true, false, 0));
        // depth: higher = nearer the eye; strand 0 is the sliding chord
        set(MoveLabel::M3a, build_r3({2, 1, 0}, {false, true, false}));
        set(MoveLabel::M3b, build_r3({2, 1, 0}, {false, false, false}));
        set(MoveLabel::M3c, build_r3({2, 1, 0}, {true, false, false}));
        set(MoveLabel::M3d, build_r3({2, 1, 0}, {false, false, true}));
        set(MoveLabel::M3e, build_r3({2, 0, 1}, {false, false, false}));
        set(MoveLabel::M3f, build_r3({2, 0, 1}, {true, false, false}));
        set(MoveLabel::M3g, build_r3({2, 0, 1}, {false, false, true}));
        set(MoveLabel::M3h, build_r3({2, 0, 1}, {false, true, false}));
        // type IV_O: the strands of the vertex stay over (slider under);
        // type IV_U: the vertex strands stay under (slider over)
        set(MoveLabel::M4a, build_r4(false, true, true));
        set(MoveLabel::M4b, build_r4(false, false, false));
        set(MoveLabel::M4c, build_r4(false, false, true));
        set(MoveLabel::M4d, build_r4(false, true, false));
        set(MoveLabel::M4e, build_r4(true, true, true));
        set(MoveLabel::M4f, build_r4(true, false, false));
        set(MoveLabel::M4g, build_r4(true, false, true));
        set(MoveLabel::M4h, build_r4(true, true, false));
        set(MoveLabel::M5a, build_r5(false, false, 0));
        set(MoveLabel::M5d, build_r5(false, false, 1));
        set(MoveLabel::M5b, build_r5(false, true, 0));
        set(MoveLabel::M5c, build_r5(false, true, 1));
        set(MoveLabel::M5e, build_r5(true, false, 0));
        set(MoveLabel::M5f, build_r5(true, false, 1));
        return a;
    }();
    return c;
}

inline const MovePattern& pattern(MoveLabel m) { return catalog()[static_cast<int>(m)]; }

// Patterns equal up to rotating the disk (and nothing else): used for the
// unoriented quotient and for catalog sanity checks.
inline std::string pattern_rotation_class(const Diagram& lhs_in, const Diagram& rhs_in, bool strip_orientation) {
    auto rotate_boundary = [](const Diagram& d, int r) {
        Diagram out = d;
        int k = static_cast<int>(d.boundary.size());
        for (int b = 0; b < k; ++b) out.boundary[(b + r) % k] = d.boundary[b];
        for (auto& e : out.edges) {
            if (e.tail.at_boundary()) e.tail.port = (e.tail.port + r) % k;
            if (e.head.at_boundary()) e.head.port = (e.head.port + r) % k;
        }
        return out;
    };
    // component indices carry no meaning for patterns: rename by first
    // boundary appearance so the comparison quotients them out
    auto renumber_components = [](Diagram d) {
        std::vector<int> remap(d.components.size(), -1);
        int next = 0;
        for (auto& bp : d.boundary) {
            int& r = remap[d.edges[bp.edge].component];
            if (r == -1) r = next++;
        }
        for (auto& e : d.edges) e.component = remap[e.component];
        std::vector<Component> comps(next);
        for (std::size_t c = 0; c < d.components.size(); ++c)
            if (remap[c] != -1) comps[remap[c]] = d.components[c];
        d.components = comps;
        return d;
    };
    auto reversed_strands = [](const Diagram& d, unsigned mask) {
        // reverse the orientation of every component whose index is set in
        // mask; over marks are orientation independent, port tables unchanged
        Diagram out = d;
        for (int e = 0; e < static_cast<int>(d.edges.size()); ++e)
            if (mask >> d.edges[e].component & 1) std::swap(out.edges[e].tail, out.edges[e].head);
        for (auto& bp : out.boundary)
            if (mask >> d.edges[bp.edge].component & 1) bp.outbound = !bp.outbound;
        return out;
    };
    int k = static_cast<int>(lhs_in.boundary.size());
    // orientation stripping: compare over all whole-strand reversals, which for
    // the catalog patterns is one reversal bit per component
    int nstrands = static_cast<int>(lhs_in.components.size());
    std::string best;
    unsigned maskmax = strip_orientation ? (1u << nstrands) : 1u;
    for (unsigned mask = 0; mask < maskmax; ++mask) {
        Diagram l = reversed_strands(lhs_in, mask);
        Diagram r = reversed_strands(rhs_in, mask);
        for (int rot = 0; rot < k; ++rot) {
            Diagram lr = renumber_components(rotate_boundary(l, rot));
            Diagram rr = renumber_components(rotate_boundary(r, rot));
            std::string a = canonical_code(lr) + "=>" + canonical_code(rr);
            std::string b = canonical_code(rr) + "=>" + canonical_code(lr);
            if (b < a) std::swap(a, b);
            if (best.empty() || a < best) best = a;
        }
    }
    return best;
}

// Unoriented class of a move: the orientation-stripped rotation class of its
// pattern pair. Class names are derived from the least member's label.
inline std::string unoriented_class(MoveLabel m) {
    static const std::map<std::string, std::string> class_name = [] {
        std::map<std::string, std::vector<MoveLabel>> classes;
        for (int i = 0; i < kMoveCount; ++i) {
            MoveLabel mm = static_cast<MoveLabel>(i);
            const MovePattern& p = pattern(mm);
            classes[pattern_rotation_class(p.lhs, p.rhs, true)].push_back(mm);
        }
        std::map<std::string, std::string> names;
        for (auto& [key, members] : classes) names[key] = std::string(move_name(members.front())) + "un";
        return names;
    }();
    const MovePattern& p = pattern(m);
    return class_name.at(pattern_rotation_class(p.lhs, p.rhs, true));
}

inline std::vector<MoveLabel> orientations_of(const std::string& unoriented) {
    std::vector<MoveLabel> out;
    for (int i = 0; i < kMoveCount; ++i)
        if (unoriented_class(static_cast<MoveLabel>(i)) == unoriented) out.push_back(static_cast<MoveLabel>(i));
    return out;
}

// Convention file: every move's lhs/rhs in the diagram text format.
inline std::string convention_text() {
    std::ostringstream os;
    for (int i = 0; i < kMoveCount; ++i) {
        MoveLabel m = static_cast<MoveLabel>(i);
        os << "move " << move_name(m) << "\nside lhs\n" << serialize_diagram(pattern(m).lhs)
           << "side rhs\n" << serialize_diagram(pattern(m).rhs) << "end\n";
    }
    return os.str();
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
    return h;
}

// Loads a convention file and checks it against the built-in catalog.
// Returns the file's checksum; throws if the patterns disagree.
inline std::uint64_t load_convention(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::optional<MoveLabel> cur;
    bool in_rhs = false;
    std::string buf;
    int verified = 0;
    auto flush = [&]() {
        if (!cur || buf.empty()) return;
        Diagram got = parse_diagram(buf);
        const Diagram& want = in_rhs ? pattern(*cur).rhs : pattern(*cur).lhs;
        if (canonical_code(got) != canonical_code(want))
            throw std::runtime_error(std::string("convention file disagrees with catalog at move ") + move_name(*cur));
        buf.clear();
        ++verified;
    };
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string t0;
        ls >> t0;
        if (t0 == "move") {
            flush();
            std::string name;
            ls >> name;
            cur = move_from_name(name);
            if (!cur) throw std::runtime_error("unknown move in convention file: " + name);
            in_rhs = false;
        } else if (t0 == "side") {
            flush();
            std::string which;
            ls >> which;
            in_rhs = which == "rhs";
        } else if (t0 == "end") {
            flush();
            cur.reset();
        } else {
            buf += line;
            buf += '\n';
        }
    }
    flush();
    if (verified != 2 * kMoveCount) throw std::runtime_error("convention file incomplete");
    return fnv1a(text);
}

}  // namespace srm

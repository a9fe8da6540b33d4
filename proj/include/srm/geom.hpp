#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "srm/diagram.hpp"

namespace srm::geom {

// Builds diagrams from polyline drawings. Crossings are computed from the
// geometry and the caller resolves each one's kind and over-strand, so
// rotation systems are derived rather than transcribed by hand. The move
// catalog and the shipped witness diagrams are all produced this way.

struct Vec {
    double x = 0, y = 0;
};

inline Vec operator-(Vec a, Vec b) { return {a.x - b.x, a.y - b.y}; }
inline double cross(Vec a, Vec b) { return a.x * b.y - a.y * b.x; }

struct StrandSpec {
    std::vector<Vec> pts;
    bool closed = false;
    int component = 0;
    double base_at = -1;  // param (segment index + fraction) of a basepoint
};

struct CrossingInfo {
    int strand_a, strand_b;  // strand_a <= strand_b
    Vec pos;
    Vec dir_a, dir_b;        // travel directions; for self-crossings a = earlier passage
};

struct Resolution {
    NodeKind kind = NodeKind::Classical;
    // For crossings of distinct strands: the strand index passing over.
    // For self-crossings: 0 = earlier passage over, 1 = later passage over.
    int over = -1;
};

using Resolver = std::function<Resolution(const CrossingInfo&)>;

namespace detail {

inline bool seg_intersect(Vec p1, Vec p2, Vec q1, Vec q2, double& s, double& t) {
    Vec r = p2 - p1, d = q2 - q1;
    double den = cross(r, d);
    if (std::abs(den) < 1e-12) return false;
    Vec w = q1 - p1;
    s = cross(w, d) / den;
    t = cross(w, r) / den;
    const double eps = 1e-9;
    return s > eps && s < 1 - eps && t > eps && t < 1 - eps;
}

}  // namespace detail

inline Diagram build(const std::vector<StrandSpec>& strands, const Resolver& resolve, bool tangle) {
    Diagram d;
    d.tangle = tangle;

    int ncomp = 0;
    for (auto& s : strands) ncomp = std::max(ncomp, s.component + 1);
    d.components.assign(ncomp, Component{});

    auto segs = [&](int si) {
        std::vector<std::pair<Vec, Vec>> out;
        const auto& p = strands[si].pts;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) out.emplace_back(p[i], p[i + 1]);
        if (strands[si].closed) out.emplace_back(p.back(), p.front());
        return out;
    };

    // crossings
    std::vector<std::vector<std::tuple<double, int, int>>> passages(strands.size());  // (param, node, side)
    std::vector<std::array<int, 4>> node_port;  // node -> port of [in_a, out_a, in_b, out_b]
    int nn = 0;
    for (int a = 0; a < static_cast<int>(strands.size()); ++a) {
        auto sa = segs(a);
        for (int b = a; b < static_cast<int>(strands.size()); ++b) {
            auto sb = segs(b);
            for (std::size_t i = 0; i < sa.size(); ++i) {
                for (std::size_t j = (a == b ? i + 1 : 0); j < sb.size(); ++j) {
                    if (a == b && (j == i + 1 || (i == 0 && j == sa.size() - 1 && strands[a].closed)))
                        continue;  // adjacent segments only touch
                    double s, t;
                    if (!detail::seg_intersect(sa[i].first, sa[i].second, sb[j].first, sb[j].second, s, t)) continue;
                    CrossingInfo info;
                    info.strand_a = a;
                    info.strand_b = b;
                    info.pos = {sa[i].first.x + s * (sa[i].second.x - sa[i].first.x),
                                sa[i].first.y + s * (sa[i].second.y - sa[i].first.y)};
                    info.dir_a = sa[i].second - sa[i].first;
                    info.dir_b = sb[j].second - sb[j].first;
                    Resolution res = resolve(info);

                    int n = nn++;
                    d.nodes.push_back(Node{});
                    d.nodes[n].kind = res.kind;
                    auto ang = [](Vec v) { return std::atan2(v.y, v.x); };
                    std::array<std::pair<double, int>, 4> hs = {{
                        {ang({-info.dir_a.x, -info.dir_a.y}), 0},
                        {ang(info.dir_a), 1},
                        {ang({-info.dir_b.x, -info.dir_b.y}), 2},
                        {ang(info.dir_b), 3},
                    }};
                    std::sort(hs.begin(), hs.end());
                    std::array<int, 4> po{};
                    for (int p = 0; p < 4; ++p) po[hs[p].second] = p;
                    if (po[0] % 2 == po[2] % 2) throw std::logic_error("degenerate crossing geometry");
                    node_port.push_back(po);
                    if (res.kind == NodeKind::Classical) {
                        bool over_is_a = (a == b) ? res.over == 0 : res.over == a;
                        if (a != b && res.over != a && res.over != b)
                            throw std::logic_error("resolver must name a crossing strand as over");
                        bool a_on_even = po[0] % 2 == 0;
                        d.nodes[n].over_strand = (over_is_a == a_on_even) ? 0 : 1;
                    }
                    passages[a].emplace_back(i + s, n, 0);
                    passages[b].emplace_back(j + t, n, 1);
                }
            }
        }
    }

    // edges along strands
    std::vector<std::tuple<double, int, bool>> ends;  // (angle, edge, outbound)
    auto in_port = [&](int node, int side) { return node_port[node][side == 0 ? 0 : 2]; };
    auto out_port = [&](int node, int side) { return node_port[node][side == 0 ? 1 : 3]; };
    auto attach = [&](int e, Endpoint ep, bool as_head) {
        (as_head ? d.edges[e].head : d.edges[e].tail) = ep;
        if (!ep.at_boundary()) d.nodes[ep.node].port_edge[ep.port] = e;
    };

    for (int si = 0; si < static_cast<int>(strands.size()); ++si) {
        auto& ps = passages[si];
        std::sort(ps.begin(), ps.end());
        int comp = strands[si].component;
        int m = static_cast<int>(ps.size());
        const auto& pts = strands[si].pts;
        if (m == 0) {
            if (strands[si].closed) {
                d.components[comp].bare_circle = true;
            } else {
                int e = static_cast<int>(d.edges.size());
                d.edges.push_back(Edge{{}, {}, comp});
                ends.emplace_back(std::atan2(pts.front().y, pts.front().x), e, false);
                ends.emplace_back(std::atan2(pts.back().y, pts.back().x), e, true);
            }
            continue;
        }
        int nedges = strands[si].closed ? m : m + 1;
        std::vector<int> eid(nedges);
        for (int k = 0; k < nedges; ++k) {
            eid[k] = static_cast<int>(d.edges.size());
            d.edges.push_back(Edge{{}, {}, comp});
        }
        for (int k = 0; k < m; ++k) {
            auto [param, node, side] = ps[k];
            (void)param;
            // edge arriving at passage k / edge leaving it
            int e_in = strands[si].closed ? eid[(k + m - 1) % m] : eid[k];
            int e_out = strands[si].closed ? eid[k] : eid[k + 1];
            attach(e_in, Endpoint{node, in_port(node, side)}, true);
            attach(e_out, Endpoint{node, out_port(node, side)}, false);
        }
        if (!strands[si].closed) {
            ends.emplace_back(std::atan2(pts.front().y, pts.front().x), eid[0], false);
            ends.emplace_back(std::atan2(pts.back().y, pts.back().x), eid[m], true);
        }
        if (strands[si].base_at >= 0) {
            int idx = 0;
            for (auto& [param, node, side] : ps) idx += param <= strands[si].base_at;
            int be = strands[si].closed ? eid[(idx + m - 1) % m] : eid[idx];
            d.components[comp].base_edge = be;
        }
    }
    // basepoints on free arcs / circles are not supported by the builder
    for (int si = 0; si < static_cast<int>(strands.size()); ++si)
        if (strands[si].base_at >= 0 && passages[si].empty())
            throw std::logic_error("basepoint on a crossingless strand");

    if (tangle) {
        std::sort(ends.begin(), ends.end());
        for (int b = 0; b < static_cast<int>(ends.size()); ++b) {
            auto [angle, e, outbound] = ends[b];
            (void)angle;
            d.boundary.push_back(BoundaryPoint{e, outbound});
            (outbound ? d.edges[e].head : d.edges[e].tail) = Endpoint{-1, b};
        }
    } else if (!ends.empty()) {
        throw std::logic_error("open strands in a closed diagram");
    }

    auto rep = d.validate();
    if (!rep.ok()) throw std::logic_error("geometry produced an invalid diagram: " + rep.violations.front());
    return d;
}

}  // namespace srm::geom

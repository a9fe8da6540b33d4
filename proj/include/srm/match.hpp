#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "srm/canonical.hpp"
#include "srm/diagram.hpp"
#include "srm/moves.hpp"

namespace srm {

// An applicable move site. The instance records, for each boundary index of
// the matched pattern side, where the changing disk cuts a host edge, plus the
// host nodes consumed. Creation sites (matching a side with no nodes) carry
// cuts only. Everything apply() needs is here; no geometry is kept.
struct MoveInstance {
    MoveLabel kind;
    bool backward = false;  // matched side: false = lhs (replace by rhs)

    struct Cut {
        EdgeId edge = -1;
        int index = 0;  // position among this edge's cuts, counted from the tail
    };
    std::vector<Cut> cuts;           // one per pattern boundary index
    std::vector<NodeId> interior;    // host nodes consumed, in pattern node order
    std::vector<int> rotation;       // host port = (rotation[i] + pattern port) & 3
    int bare_circle = -1;            // kink creation on a crossingless circle
};

namespace match_detail {

struct PatternIndex {
    const Diagram* side;
    std::vector<std::vector<Dart>> internal_faces;  // faces away from the boundary
    // pattern edge classification
    std::vector<bool> edge_interior;                // both ends at nodes
};

inline PatternIndex index_pattern(const Diagram& side) {
    PatternIndex px;
    px.side = &side;
    px.edge_interior.assign(side.edges.size(), false);
    for (std::size_t e = 0; e < side.edges.size(); ++e)
        px.edge_interior[e] = !side.edges[e].tail.at_boundary() && !side.edges[e].head.at_boundary();
    for (auto& f : compute_faces(side)) {
        bool internal = true;
        for (Dart dt : f.darts)
            if (side.dart_head(dt).at_boundary()) { internal = false; break; }
        if (internal) px.internal_faces.push_back(f.darts);
    }
    return px;
}

// Walks the pattern side's strands from each boundary-in point and lists, per
// boundary index, the pattern edge incident there.
inline EdgeId boundary_edge(const Diagram& side, int b) { return side.boundary[b].edge; }

}  // namespace match_detail

// All embeddings of pattern(kind)'s chosen side into the host, deterministic
// order, deduplicated up to pattern automorphism (instances that consume the
// same material and cut the same places are reported once).
std::vector<MoveInstance> find_matches(const Diagram& host, MoveLabel kind, bool backward);

// Rewrites the host along the instance; the matched side is replaced by the
// other side of the pattern. The result is fully renumbered and validated.
Diagram apply_move(const Diagram& host, const MoveInstance& inst);

namespace match_detail {

// ---- nodeful matching -------------------------------------------------------

struct NodefulMatch {
    std::vector<NodeId> node_image;  // pattern node -> host node
    std::vector<int> rot;            // pattern port p at node i -> host port (p + rot[i]) & 3
};

inline bool grow_match(const Diagram& P, const Diagram& H, NodefulMatch& m, int seed_p, int seed_h, int seed_rot) {
    int np = static_cast<int>(P.nodes.size());
    m.node_image.assign(np, -1);
    m.rot.assign(np, 0);
    std::vector<int> stack;
    auto set_image = [&](int pn, int hn, int rot) -> bool {
        if (m.node_image[pn] != -1) return m.node_image[pn] == hn && m.rot[pn] == rot;
        // kinds must agree; over marks must agree under the port rotation
        const Node& pd = P.nodes[pn];
        const Node& hd = H.nodes[hn];
        if (pd.kind != hd.kind) return false;
        if (pd.kind == NodeKind::Classical && ((pd.over_strand + rot) & 1) != hd.over_strand) return false;
        for (int j = 0; j < 4; ++j)
            if (P.port_is_in(pn, j) != H.port_is_in(hn, (j + rot) & 3)) return false;
        for (int prev = 0; prev < np; ++prev)
            if (m.node_image[prev] == hn) return false;  // injective on nodes
        m.node_image[pn] = hn;
        m.rot[pn] = rot;
        stack.push_back(pn);
        return true;
    };
    if (!set_image(seed_p, seed_h, seed_rot)) return false;
    while (!stack.empty()) {
        int pn = stack.back();
        stack.pop_back();
        for (int p = 0; p < 4; ++p) {
            EdgeId pe = P.nodes[pn].port_edge[p];
            const Edge& ped = P.edges[pe];
            // find the pattern endpoint at the far side of this edge
            Endpoint mine{pn, p};
            Endpoint other = (ped.tail == mine) ? ped.head : ped.tail;
            if (other.at_boundary()) continue;
            // interior pattern edge: the host must connect correspondingly
            int hp = (p + m.rot[pn]) & 3;
            EdgeId he = H.nodes[m.node_image[pn]].port_edge[hp];
            const Edge& hed = H.edges[he];
            Endpoint hmine{m.node_image[pn], hp};
            // direction must match: tail maps to tail
            bool p_tail_here = ped.tail == mine;
            bool h_tail_here = hed.tail == hmine;
            if (p_tail_here != h_tail_here) return false;
            Endpoint hother = h_tail_here ? hed.head : hed.tail;
            if (hother.at_boundary()) return false;
            int want_rot = (hother.port - other.port) & 3;
            if (!set_image(other.node, hother.node, want_rot)) return false;
        }
    }
    return true;
}

inline bool faces_match(const Diagram& P, const Diagram& H, const PatternIndex& px, const NodefulMatch& m,
                        const std::vector<int>& host_face_of_dart, const std::vector<Face>& host_faces) {
    auto map_dart = [&](Dart pd) -> Dart {
        EdgeId pe = dart_edge(pd);
        const Edge& ped = P.edges[pe];
        Endpoint tail = ped.tail;  // interior edges only
        EdgeId he = H.nodes[m.node_image[tail.node]].port_edge[(tail.port + m.rot[tail.node]) & 3];
        const Edge& hed = H.edges[he];
        bool same_dir = hed.tail.node == m.node_image[tail.node] &&
                        hed.tail.port == ((tail.port + m.rot[tail.node]) & 3);
        return make_dart(he, same_dir ? dart_dir(pd) : dart_dir(pd) ^ 1);
    };
    for (auto& walk : px.internal_faces) {
        int f = -1;
        for (Dart pd : walk) {
            Dart hd = map_dart(pd);
            int hf = host_face_of_dart[hd];
            if (f == -1) f = hf;
            else if (f != hf) return false;
        }
        if (f == -1 || host_faces[f].darts.size() != walk.size()) return false;
    }
    return true;
}

// Cuts for a nodeful match: pattern boundary index -> (host edge, cut index).
// Returns false when the match is inconsistent (e.g. a host edge would be both
// consumed and cut).
inline bool collect_cuts(const Diagram& P, const Diagram& H, const NodefulMatch& m, std::vector<MoveInstance::Cut>& cuts) {
    // host edges imaging interior pattern edges
    std::set<EdgeId> interior_edges;
    for (std::size_t pe = 0; pe < P.edges.size(); ++pe) {
        const Edge& ped = P.edges[pe];
        if (ped.tail.at_boundary() || ped.head.at_boundary()) continue;
        EdgeId he = H.nodes[m.node_image[ped.tail.node]].port_edge[(ped.tail.port + m.rot[ped.tail.node]) & 3];
        if (!interior_edges.insert(he).second) return false;  // two pattern edges on one host edge
    }
    // boundary-incident pattern edges: find the host edge and which end is cut
    struct RawCut {
        int bindex;
        EdgeId he;
        bool from_tail;  // the surviving interior stub sits at the host edge's tail side
    };
    std::vector<RawCut> raw;
    for (std::size_t pe = 0; pe < P.edges.size(); ++pe) {
        const Edge& ped = P.edges[pe];
        int nb = ped.tail.at_boundary() + ped.head.at_boundary();
        if (nb == 0) continue;
        if (nb == 2) return false;  // nodeful sides have no through strands
        Endpoint at_node = ped.tail.at_boundary() ? ped.head : ped.tail;
        Endpoint at_bd = ped.tail.at_boundary() ? ped.tail : ped.head;
        int hp = (at_node.port + m.rot[at_node.node]) & 3;
        EdgeId he = H.nodes[m.node_image[at_node.node]].port_edge[hp];
        const Edge& hed = H.edges[he];
        bool node_is_tail = !ped.tail.at_boundary();  // pattern edge leaves the node
        // host edge direction must agree
        bool host_tail_here = hed.tail.node == m.node_image[at_node.node] && hed.tail.port == hp;
        if (node_is_tail != host_tail_here) return false;
        if (interior_edges.count(he)) return false;
        raw.push_back({at_bd.port, he, node_is_tail});
    }
    // order cuts along each host edge: the piece adjacent to the matched node
    // is consumed, so a cut whose stub leaves from the tail side comes first
    std::map<EdgeId, std::vector<RawCut*>> per_edge;
    for (auto& rc : raw) per_edge[rc.he].push_back(&rc);
    cuts.assign(P.boundary.size(), MoveInstance::Cut{});
    for (auto& [he, list] : per_edge) {
        if (list.size() > 2) return false;
        if (list.size() == 2) {
            if (list[0]->from_tail == list[1]->from_tail) return false;
            // the tail-side stub's cut is nearer the tail
            for (auto* rc : list) cuts[rc->bindex] = {he, rc->from_tail ? 0 : 1};
        } else {
            cuts[list[0]->bindex] = {he, 0};
        }
    }
    return true;
}

}  // namespace match_detail

// ---- creation matching ------------------------------------------------------

namespace match_detail {

// Matches a pattern side with no nodes (one or two strands across the disk).
// One strand: every host edge. Two strands: pairs of positions on a common
// face walk with travel directions matching the pattern corridor, or any
// ordered pair of darts from different connected parts of the host.
inline std::vector<MoveInstance> creation_matches(const Diagram& host, const Diagram& side, MoveLabel kind, bool backward) {
    std::vector<MoveInstance> out;
    int nstrands = static_cast<int>(side.edges.size());
    if (nstrands == 1) {
        for (EdgeId e = 0; e < static_cast<int>(host.edges.size()); ++e) {
            MoveInstance mi;
            mi.kind = kind;
            mi.backward = backward;
            bool in_first = !side.boundary[0].outbound;
            mi.cuts.resize(2);
            mi.cuts[in_first ? 0 : 1] = {e, 0};
            mi.cuts[in_first ? 1 : 0] = {e, 1};
            out.push_back(std::move(mi));
        }
        // a crossingless circle can also host the strand
        for (int c = 0; c < static_cast<int>(host.components.size()); ++c)
            if (host.components[c].bare_circle) {
                MoveInstance mi;
                mi.kind = kind;
                mi.backward = backward;
                mi.bare_circle = c;
                out.push_back(std::move(mi));
            }
        return out;
    }
    if (nstrands != 2) throw std::logic_error("unexpected creation pattern");

    // pattern corridor: walk of the face between the two strands, recording
    // each strand's travel direction along that walk
    auto faces = compute_faces(side);
    int corridor = -1;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
        if (faces[f].darts.size() == 2) corridor = f;
    if (corridor < 0) throw std::logic_error("creation pattern has no corridor");
    // corridor darts: travel direction relative to each edge
    Dart c0 = faces[corridor].darts[0], c1 = faces[corridor].darts[1];
    // map pattern boundary index -> (which strand, enters at tail?)
    // strand of c0 is edge(c0) etc.
    auto host_faces = compute_faces(host);

    // connected part of each host edge (crossing the corridor between
    // different parts is unconstrained: nesting is not embedded data)
    std::vector<int> part(host.nodes.size(), -1);
    {
        int np = 0;
        for (std::size_t n0 = 0; n0 < host.nodes.size(); ++n0) {
            if (part[n0] != -1) continue;
            std::vector<int> stack{static_cast<int>(n0)};
            part[n0] = np;
            while (!stack.empty()) {
                int n = stack.back();
                stack.pop_back();
                for (int p = 0; p < 4; ++p) {
                    EdgeId e = host.nodes[n].port_edge[p];
                    for (const Endpoint* ep : {&host.edges[e].tail, &host.edges[e].head})
                        if (!ep->at_boundary() && part[ep->node] == -1) {
                            part[ep->node] = np;
                            stack.push_back(ep->node);
                        }
                }
            }
            ++np;
        }
    }
    auto edge_part = [&](EdgeId e) {
        const Edge& ed = host.edges[e];
        if (!ed.tail.at_boundary()) return part[ed.tail.node];
        if (!ed.head.at_boundary()) return part[ed.head.node];
        return -1 - e;  // free arcs: their own pseudo part... boundary connects them though
    };
    // boundary-touching pieces all live in one region; treat them as one part
    auto norm_part = [&](EdgeId e) {
        const Edge& ed = host.edges[e];
        bool bd = ed.tail.at_boundary() || ed.head.at_boundary();
        if (bd) return -1;
        return edge_part(e);
    };

    auto emit = [&](Dart da, Dart db) {
        // da plays the corridor dart c0, db plays c1
        MoveInstance mi;
        mi.kind = kind;
        mi.backward = backward;
        mi.cuts.resize(4);
        // for each pattern strand: boundary indices where it starts/ends
        auto place = [&](Dart cd, Dart hd) {
            EdgeId pe = dart_edge(cd);
            EdgeId he = dart_edge(hd);
            int bin = -1, bout = -1;
            const Edge& ped = side.edges[pe];
            bin = ped.tail.port;
            bout = ped.head.port;
            mi.cuts[bin] = {he, 0};
            mi.cuts[bout] = {he, 1};
        };
        // travel direction: corridor dart cd travels forward along its pattern
        // edge iff dart_dir == 0; the host dart must match
        if (dart_dir(c0) == dart_dir(da)) place(c0, da);
        else return;
        if (dart_dir(c1) == dart_dir(db)) place(c1, db);
        else return;
        out.push_back(std::move(mi));
    };
    (void)emit;

    // same-face pairs
    for (auto& f : host_faces) {
        for (std::size_t i = 0; i < f.darts.size(); ++i)
            for (std::size_t j = 0; j < f.darts.size(); ++j) {
                if (i == j) continue;
                Dart da = f.darts[i], db = f.darts[j];
                if (dart_edge(da) == dart_edge(db) && dart_dir(da) == dart_dir(db)) continue;
                if (dart_dir(da) != dart_dir(c0) || dart_dir(db) != dart_dir(c1)) continue;
                MoveInstance mi;
                mi.kind = kind;
                mi.backward = backward;
                mi.cuts.resize(4);
                EdgeId ea = dart_edge(da), eb = dart_edge(db);
                const Edge& pa = side.edges[dart_edge(c0)];
                const Edge& pb = side.edges[dart_edge(c1)];
                if (ea != eb) {
                    mi.cuts[pa.tail.port] = {ea, 0};
                    mi.cuts[pa.head.port] = {ea, 1};
                    mi.cuts[pb.tail.port] = {eb, 0};
                    mi.cuts[pb.head.port] = {eb, 1};
                    out.push_back(mi);
                } else {
                    // both strands on one host edge: two sub-arc orders
                    mi.cuts[pa.tail.port] = {ea, 0};
                    mi.cuts[pa.head.port] = {ea, 1};
                    mi.cuts[pb.tail.port] = {ea, 2};
                    mi.cuts[pb.head.port] = {ea, 3};
                    out.push_back(mi);
                    mi.cuts[pa.tail.port] = {ea, 2};
                    mi.cuts[pa.head.port] = {ea, 3};
                    mi.cuts[pb.tail.port] = {ea, 0};
                    mi.cuts[pb.head.port] = {ea, 1};
                    out.push_back(mi);
                }
            }
    }
    // cross-part pairs (different connected pieces; any face pairing works on
    // the sphere, so faces are not constrained)
    for (EdgeId ea = 0; ea < static_cast<int>(host.edges.size()); ++ea)
        for (EdgeId eb = 0; eb < static_cast<int>(host.edges.size()); ++eb) {
            if (ea == eb) continue;
            int paf = norm_part(ea), pbf = norm_part(eb);
            if (paf == pbf) continue;  // same part: face rule already covered it
            for (int da_dir = 0; da_dir < 2; ++da_dir)
                for (int db_dir = 0; db_dir < 2; ++db_dir) {
                    if (da_dir != dart_dir(c0) || db_dir != dart_dir(c1)) continue;
                    MoveInstance mi;
                    mi.kind = kind;
                    mi.backward = backward;
                    mi.cuts.resize(4);
                    const Edge& pa = side.edges[dart_edge(c0)];
                    const Edge& pb = side.edges[dart_edge(c1)];
                    mi.cuts[pa.tail.port] = {ea, 0};
                    mi.cuts[pa.head.port] = {ea, 1};
                    mi.cuts[pb.tail.port] = {eb, 0};
                    mi.cuts[pb.head.port] = {eb, 1};
                    out.push_back(mi);
                }
        }
    return out;
}

}  // namespace match_detail

inline std::vector<MoveInstance> find_matches(const Diagram& host, MoveLabel kind, bool backward) {
    using namespace match_detail;
    const MovePattern& pat = pattern(kind);
    const Diagram& side = backward ? pat.rhs : pat.lhs;
    if (side.nodes.empty()) return creation_matches(host, side, kind, backward);

    static std::map<std::pair<MoveLabel, bool>, PatternIndex> index_cache;
    auto key = std::make_pair(kind, backward);
    auto it = index_cache.find(key);
    if (it == index_cache.end()) it = index_cache.emplace(key, index_pattern(side)).first;
    const PatternIndex& px = it->second;

    auto host_faces = compute_faces(host);
    auto fo = face_of_dart(host, host_faces);

    std::vector<MoveInstance> out;
    std::set<std::pair<std::vector<NodeId>, std::vector<std::pair<EdgeId, int>>>> seen;
    for (int hn = 0; hn < static_cast<int>(host.nodes.size()); ++hn)
        for (int rot = 0; rot < 4; ++rot) {
            NodefulMatch m;
            if (!grow_match(side, host, m, 0, hn, rot)) continue;
            if (!faces_match(side, host, px, m, fo, host_faces)) continue;
            MoveInstance mi;
            mi.kind = kind;
            mi.backward = backward;
            if (!collect_cuts(side, host, m, mi.cuts)) continue;
            mi.interior = m.node_image;
            mi.rotation = m.rot;
            std::vector<NodeId> ikey = m.node_image;
            std::sort(ikey.begin(), ikey.end());
            std::vector<std::pair<EdgeId, int>> ckey;
            for (auto& c : mi.cuts) ckey.emplace_back(c.edge, c.index);
            std::sort(ckey.begin(), ckey.end());
            if (!seen.emplace(std::move(ikey), std::move(ckey)).second) continue;
            out.push_back(std::move(mi));
        }
    return out;
}

// Rewrites host by replacing the matched image of `from` with `to`; the two
// sides must share boundary structure. apply_move wraps this with the catalog
// sides; splices use it directly.
inline Diagram apply_sides(const Diagram& host, const Diagram& from, const Diagram& to, const MoveInstance& inst) {
    if (inst.bare_circle >= 0 && !(from.nodes.empty() && from.edges.size() == 1))
        throw std::logic_error("bare circle instance on a non-creation move");

    Diagram out;
    out.tangle = host.tangle;
    out.boundary = host.boundary;  // edge ids rewritten below
    out.components = host.components;
    std::vector<char> had_base(out.components.size(), 0);
    for (std::size_t c = 0; c < out.components.size(); ++c) {
        had_base[c] = out.components[c].base_edge >= 0;
        out.components[c].base_edge = -1;
    }

    std::vector<int> node_new(host.nodes.size(), -1);
    std::vector<char> consumed(host.nodes.size(), 0);
    for (NodeId n : inst.interior) consumed[n] = 1;
    for (std::size_t n = 0; n < host.nodes.size(); ++n)
        if (!consumed[n]) {
            node_new[n] = static_cast<int>(out.nodes.size());
            out.nodes.push_back(host.nodes[n]);
        }
    std::vector<int> to_node_new(to.nodes.size(), -1);
    for (std::size_t n = 0; n < to.nodes.size(); ++n) {
        to_node_new[n] = static_cast<int>(out.nodes.size());
        out.nodes.push_back(to.nodes[n]);
    }

    // Pieces to sew. Junction j is pattern boundary index j; an end is a node
    // port, a tangle boundary position, or a junction.
    struct End {
        int type;  // 0 = node port, 1 = host boundary, 2 = junction
        int a = 0, b = 0;
    };
    struct Piece {
        End from, to;
        int old_edge = -1;  // host edge this piece came from
    };
    std::vector<Piece> pieces;

    std::map<EdgeId, std::vector<std::pair<int, int>>> edge_cuts;  // edge -> (cut index, junction)
    for (std::size_t j = 0; j < inst.cuts.size(); ++j)
        if (inst.cuts[j].edge >= 0) edge_cuts[inst.cuts[j].edge].emplace_back(inst.cuts[j].index, static_cast<int>(j));

    auto host_end = [&](const Endpoint& ep) -> End {
        if (ep.at_boundary()) return {1, ep.port, 0};
        return {0, node_new[ep.node], ep.port};
    };
    for (std::size_t e = 0; e < host.edges.size(); ++e) {
        const Edge& ed = host.edges[e];
        auto it = edge_cuts.find(static_cast<EdgeId>(e));
        bool tail_gone = !ed.tail.at_boundary() && consumed[ed.tail.node];
        bool head_gone = !ed.head.at_boundary() && consumed[ed.head.node];
        if (it == edge_cuts.end()) {
            if (tail_gone || head_gone) {
                if (!(tail_gone && head_gone)) throw std::logic_error("half-consumed edge without a cut");
                continue;  // interior edge, consumed with its nodes
            }
            pieces.push_back({host_end(ed.tail), host_end(ed.head), static_cast<int>(e)});
            continue;
        }
        auto cl = it->second;
        std::sort(cl.begin(), cl.end());
        // pieces alternate inside/outside starting from the tail
        int m = static_cast<int>(cl.size());
        bool piece_inside = tail_gone;
        End prev = host_end(ed.tail);
        for (int k = 0; k <= m; ++k) {
            End cur = (k < m) ? End{2, cl[k].second, 0} : host_end(ed.head);
            if (!piece_inside) pieces.push_back({prev, cur, static_cast<int>(e)});
            prev = cur;
            piece_inside = !piece_inside;
        }
        if (piece_inside == head_gone) throw std::logic_error("cut parity mismatch");
    }

    for (std::size_t e = 0; e < to.edges.size(); ++e) {
        const Edge& ed = to.edges[e];
        auto to_end = [&](const Endpoint& ep) -> End {
            if (ep.at_boundary()) return {2, ep.port, 0};
            return {0, to_node_new[ep.node], ep.port};
        };
        pieces.push_back({to_end(ed.tail), to_end(ed.head), -1});
    }

    // kink creation on a crossingless circle: the circle is the outside piece
    int bare_comp = inst.bare_circle;
    if (bare_comp >= 0) {
        int out_idx = from.boundary[0].outbound ? 0 : 1;
        pieces.push_back({End{2, out_idx, 0}, End{2, out_idx ^ 1, 0}, -1});
        out.components[bare_comp].bare_circle = false;
    }

    int nj = static_cast<int>(inst.cuts.size());
    std::vector<int> j_out(std::max(nj, 2), -1);
    for (int p = 0; p < static_cast<int>(pieces.size()); ++p)
        if (pieces[p].from.type == 2) j_out[pieces[p].from.a] = p;

    struct NewEdge {
        End from, to;
        int comp = -1;
        long long key = 1LL << 60;
        bool has_base = false;
    };
    std::vector<NewEdge> new_edges;
    std::vector<int> circle_comp;

    std::vector<char> piece_done(pieces.size(), 0);
    auto walk_chain = [&](int p0, NewEdge& ne) -> bool {  // false: chain closed up
        int p = p0;
        while (true) {
            piece_done[p] = 1;
            if (pieces[p].old_edge >= 0) {
                ne.comp = host.edges[pieces[p].old_edge].component;
                ne.key = std::min(ne.key, static_cast<long long>(pieces[p].old_edge));
                if (had_base[ne.comp] && host.components[ne.comp].base_edge == pieces[p].old_edge) ne.has_base = true;
            }
            if (pieces[p].to.type != 2) {
                ne.to = pieces[p].to;
                return true;
            }
            p = j_out[pieces[p].to.a];
            if (p < 0) throw std::logic_error("dangling junction");
            if (p == p0) return false;
        }
    };
    for (int p0 = 0; p0 < static_cast<int>(pieces.size()); ++p0) {
        if (piece_done[p0] || pieces[p0].from.type == 2) continue;
        NewEdge ne;
        ne.from = pieces[p0].from;
        if (!walk_chain(p0, ne)) throw std::logic_error("open chain closed unexpectedly");
        new_edges.push_back(ne);
    }
    for (int p0 = 0; p0 < static_cast<int>(pieces.size()); ++p0) {
        if (piece_done[p0]) continue;
        NewEdge ne;
        ne.from = pieces[p0].from;
        walk_chain(p0, ne);
        int comp = ne.comp >= 0 ? ne.comp : bare_comp;
        circle_comp.push_back(comp);
    }

    std::vector<int> order(new_edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return new_edges[a].key < new_edges[b].key; });

    auto place_end = [&](const End& en) -> Endpoint {
        if (en.type == 1) return Endpoint{-1, en.a};
        return Endpoint{en.a, en.b};
    };
    std::vector<int> base_candidate(out.components.size(), -1);
    std::vector<int> edge_base(new_edges.size(), 0);
    for (int oi : order) {
        const NewEdge& ne = new_edges[oi];
        Edge e;
        e.component = ne.comp >= 0 ? ne.comp : bare_comp;  // may stay -1; fixed by propagation
        e.tail = place_end(ne.from);
        e.head = place_end(ne.to);
        int id = static_cast<int>(out.edges.size());
        out.edges.push_back(e);
        edge_base[id] = ne.has_base;
        if (!e.tail.at_boundary()) out.nodes[e.tail.node].port_edge[e.tail.port] = id;
        if (!e.head.at_boundary()) out.nodes[e.head.node].port_edge[e.head.port] = id;
        if (e.tail.at_boundary()) out.boundary[e.tail.port] = {id, false};
        if (e.head.at_boundary()) out.boundary[e.head.port] = {id, true};
    }

    // propagate components along strands (replacement-interior edges have none yet)
    {
        int ne2 = static_cast<int>(out.edges.size());
        std::vector<int> cls(ne2, -1);
        int nc = 0;
        for (int e = 0; e < ne2; ++e) {
            if (cls[e] != -1) continue;
            std::vector<int> stack{e};
            cls[e] = nc;
            while (!stack.empty()) {
                int cur = stack.back();
                stack.pop_back();
                for (const Endpoint* ep : {&out.edges[cur].tail, &out.edges[cur].head}) {
                    if (ep->at_boundary()) continue;
                    int nxt = out.nodes[ep->node].port_edge[ep->port ^ 2];
                    if (cls[nxt] == -1) { cls[nxt] = nc; stack.push_back(nxt); }
                }
            }
            ++nc;
        }
        std::vector<int> cls_comp(nc, -1);
        for (int e = 0; e < ne2; ++e)
            if (out.edges[e].component >= 0) {
                int& cc = cls_comp[cls[e]];
                if (cc == -1) cc = out.edges[e].component;
                else if (cc != out.edges[e].component) throw std::logic_error("move merged components");
            }
        for (int e = 0; e < ne2; ++e) {
            if (cls_comp[cls[e]] < 0) throw std::logic_error("edge with no component");
            out.edges[e].component = cls_comp[cls[e]];
        }
    }

    // basepoints: keep the surviving one, else relocate to the lowest edge
    for (int e = 0; e < static_cast<int>(out.edges.size()); ++e) {
        int c = out.edges[e].component;
        if (edge_base[e]) out.components[c].base_edge = e;
        else if (base_candidate[c] == -1) base_candidate[c] = e;
    }
    std::vector<char> comp_has_edges(out.components.size(), 0);
    for (auto& e : out.edges) comp_has_edges[e.component] = 1;
    for (int c : circle_comp)
        if (c >= 0 && !comp_has_edges[c]) out.components[c].bare_circle = true;
    for (int c = 0; c < static_cast<int>(out.components.size()); ++c) {
        if (out.components[c].bare_circle) { out.components[c].base_edge = -1; continue; }
        if (had_base[c] && out.components[c].base_edge == -1 && comp_has_edges[c])
            out.components[c].base_edge = base_candidate[c];
    }
    return out;
}

inline Diagram apply_move(const Diagram& host, const MoveInstance& inst) {
    const MovePattern& pat = pattern(inst.kind);
    const Diagram& from = inst.backward ? pat.rhs : pat.lhs;
    const Diagram& to = inst.backward ? pat.lhs : pat.rhs;
    return apply_sides(host, from, to, inst);
}

}  // namespace srm

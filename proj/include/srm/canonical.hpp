#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "srm/diagram.hpp"

namespace srm {

// Canonical code: a string equal for two diagrams exactly when they are
// isomorphic rotation systems with the same decorations (kinds, over marks,
// orientations, component order, basepoints, boundary). Tangle codes are
// anchored at the boundary; closed parts are minimized over start darts.
// Nesting of disjoint parts in the plane is deliberately not distinguished.
namespace detail {

struct Labeling {
    std::vector<int> node_id;      // node -> canonical id, -1 unvisited
    std::vector<int> node_rot;     // canonical port j = actual (rot + j) & 3
    std::vector<int> order;        // canonical id -> node
};

// Deterministic BFS from a list of entry darts. Returns false if some entry
// was already labeled (used when minimizing: all starts must be fresh).
inline void bfs_label(const Diagram& d, const std::vector<Dart>& entries, Labeling& lab) {
    std::vector<Dart> queue;
    std::size_t qi = 0;
    auto touch = [&](Dart dt) { queue.push_back(dt); };
    for (Dart e : entries) touch(e);
    while (qi < queue.size()) {
        Dart cur = queue[qi++];
        Endpoint h = d.dart_head(cur);
        if (h.at_boundary()) continue;
        if (lab.node_id[h.node] != -1) continue;
        lab.node_id[h.node] = static_cast<int>(lab.order.size());
        lab.node_rot[h.node] = h.port;
        lab.order.push_back(h.node);
        for (int j = 1; j < 4; ++j) touch(d.dart_leaving(h.node, (h.port + j) & 3));
    }
}

inline std::string emit_part(const Diagram& d, const Labeling& lab, const std::vector<int>& part_nodes) {
    // canonical edge numbering local to the emission sweep
    std::vector<int> edge_id(d.edges.size(), -1);
    int next_edge = 0;
    std::ostringstream os;
    for (int n : part_nodes) {
        const Node& nd = d.nodes[n];
        int rot = lab.node_rot[n];
        os << (nd.kind == NodeKind::Classical ? 'X' : 'S');
        if (nd.kind == NodeKind::Classical) os << ((nd.over_strand + rot) & 1);
        for (int j = 0; j < 4; ++j) {
            int p = (rot + j) & 3;
            EdgeId e = nd.port_edge[p];
            if (edge_id[e] == -1) edge_id[e] = next_edge++;
            os << '(' << edge_id[e] << (d.port_is_in(n, p) ? 'i' : 'o');
            Endpoint other = d.port_is_in(n, p) ? d.edges[e].tail : d.edges[e].head;
            if (other.at_boundary()) os << 'b' << other.port;
            else os << 'n' << lab.node_id[other.node] << '.' << ((other.port - lab.node_rot[other.node]) & 3);
            os << 'c' << d.edges[e].component;
            if (d.components[d.edges[e].component].base_edge == e) os << '*';
            os << ')';
        }
        os << ';';
    }
    return os.str();
}

}  // namespace detail

inline std::string canonical_code(const Diagram& d) {
    using namespace detail;
    int nn = static_cast<int>(d.nodes.size());
    Labeling lab;
    lab.node_id.assign(nn, -1);
    lab.node_rot.assign(nn, 0);

    std::ostringstream os;
    os << (d.tangle ? 'T' : 'L') << d.components.size() << '|';

    std::vector<std::string> part_codes;
    if (d.tangle) {
        std::vector<Dart> entries;
        for (auto& bp : d.boundary) entries.push_back(bp.outbound ? make_dart(bp.edge, 1) : make_dart(bp.edge, 0));
        bfs_label(d, entries, lab);
        std::string anchored = emit_part(d, lab, lab.order);
        // boundary section with its own edge sweep (ids as seen from the boundary)
        std::vector<int> edge_id(d.edges.size(), -1);
        int next_edge = 0;
        std::ostringstream bs;
        bs << "B[";
        for (auto& bp : d.boundary) {
            if (edge_id[bp.edge] == -1) edge_id[bp.edge] = next_edge++;
            bs << (bp.outbound ? '+' : '-') << edge_id[bp.edge] << 'c' << d.edges[bp.edge].component;
            if (d.components[d.edges[bp.edge].component].base_edge == bp.edge) bs << '*';
            bs << ' ';
        }
        bs << ']';
        part_codes.push_back("A[" + anchored + "]" + bs.str());
    }

    // floating parts (all parts, for closed diagrams): minimize per part
    std::vector<char> done(nn, 0);
    for (int n : lab.order) done[n] = 1;
    for (int n0 = 0; n0 < nn; ++n0) {
        if (done[n0]) continue;
        // collect this graph part
        std::vector<int> part{n0};
        done[n0] = 1;
        for (std::size_t i = 0; i < part.size(); ++i)
            for (int p = 0; p < 4; ++p) {
                EdgeId e = d.nodes[part[i]].port_edge[p];
                for (const Endpoint* ep : {&d.edges[e].tail, &d.edges[e].head})
                    if (!ep->at_boundary() && !done[ep->node]) { done[ep->node] = 1; part.push_back(ep->node); }
            }
        std::string best;
        for (int n : part)
            for (int p = 0; p < 4; ++p) {
                Labeling l2;
                l2.node_id.assign(nn, -1);
                l2.node_rot.assign(nn, 0);
                bfs_label(d, {d.dart_leaving(n, p)}, l2);
                // seed by the dart head, so label the dart's head first:
                std::string code = emit_part(d, l2, l2.order);
                if (best.empty() || code < best) best = code;
            }
        part_codes.push_back("P[" + best + "]");
    }
    if (!d.tangle) std::sort(part_codes.begin(), part_codes.end());
    for (auto& pc : part_codes) os << pc;

    os << "C[";
    for (auto& c : d.components) os << (c.bare_circle ? '@' : c.base_edge >= 0 ? '*' : '.');
    os << ']';
    return os.str();
}

// 128-bit FNV-1a of the canonical code, for visited sets.
struct CodeKey {
    std::uint64_t a = 0, b = 0;
    bool operator==(const CodeKey& o) const { return a == o.a && b == o.b; }
};

struct CodeKeyHash {
    std::size_t operator()(const CodeKey& k) const { return k.a ^ (k.b * 0x9e3779b97f4a7c15ULL); }
};

inline CodeKey code_key(const std::string& s) {
    std::uint64_t h1 = 14695981039346656037ULL, h2 = 0xcbf29ce484222325ULL ^ 0x9ae16a3b2f90404fULL;
    for (unsigned char c : s) {
        h1 = (h1 ^ c) * 1099511628211ULL;
        h2 = (h2 ^ (c + 0x9e)) * 0x100000001b3ULL;
    }
    return {h1, h2};
}

}  // namespace srm

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace srm {

using NodeId = int;
using EdgeId = int;

enum class NodeKind : std::uint8_t { Classical, Singular };

// One end of an edge: a node port (0..3, counterclockwise) or, when
// node < 0, a tangle boundary position (stored in port).
struct Endpoint {
    NodeId node = -1;
    int port = -1;

    bool at_boundary() const { return node < 0; }
    bool operator==(const Endpoint& o) const { return node == o.node && port == o.port; }
};

struct Edge {
    Endpoint tail;       // the edge leaves here
    Endpoint head;       // and arrives here
    int component = -1;
};

// 4-valent vertex with a rotation system. Ports are listed counterclockwise;
// the two strands through the node are the port pairs {0,2} and {1,3}.
struct Node {
    NodeKind kind = NodeKind::Classical;
    std::array<EdgeId, 4> port_edge{-1, -1, -1, -1};
    int over_strand = -1;  // 0 or 1 for classical nodes, -1 for singular
};

struct BoundaryPoint {
    EdgeId edge = -1;
    bool outbound = false;  // true: the strand exits the disk here (edge.head)
};

struct Component {
    EdgeId base_edge = -1;   // basepoint, -1 if none
    bool bare_circle = false;  // crossingless circle: owns no edges or nodes
};

// A dart is a directed traversal of an edge: 2*edge + dir,
// dir 0 = tail->head, dir 1 = head->tail.
using Dart = int;

inline Dart make_dart(EdgeId e, int dir) { return 2 * e + dir; }
inline EdgeId dart_edge(Dart d) { return d >> 1; }
inline int dart_dir(Dart d) { return d & 1; }
inline Dart dart_reverse(Dart d) { return d ^ 1; }

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string str() const {
        std::string s;
        for (auto& v : violations) { s += v; s += '\n'; }
        return s;
    }
};

// Planar diagram of an oriented singular link or tangle. Immutable by
// convention: operations build new diagrams rather than mutating shared ones.
struct Diagram {
    bool tangle = false;
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<BoundaryPoint> boundary;  // counterclockwise, tangles only
    std::vector<Component> components;

    int classical_count() const {
        int n = 0;
        for (auto& nd : nodes) n += nd.kind == NodeKind::Classical;
        return n;
    }
    int singular_count() const {
        int n = 0;
        for (auto& nd : nodes) n += nd.kind == NodeKind::Singular;
        return n;
    }

    Endpoint dart_head(Dart d) const {
        const Edge& e = edges[dart_edge(d)];
        return dart_dir(d) == 0 ? e.head : e.tail;
    }
    Endpoint dart_tail(Dart d) const {
        const Edge& e = edges[dart_edge(d)];
        return dart_dir(d) == 0 ? e.tail : e.head;
    }

    // The dart that leaves endpoint (n, p), travelling away from it.
    Dart dart_leaving(NodeId n, int port) const {
        EdgeId e = nodes[n].port_edge[port];
        const Edge& ed = edges[e];
        if (ed.tail.node == n && ed.tail.port == port) return make_dart(e, 0);
        return make_dart(e, 1);
    }

    bool port_is_in(NodeId n, int port) const {
        EdgeId e = nodes[n].port_edge[port];
        const Edge& ed = edges[e];
        return ed.head.node == n && ed.head.port == port;
    }

    // Strand continuation: arriving at (n, p), the strand leaves at p^2.
    Dart strand_next(Dart d) const {
        Endpoint h = dart_head(d);
        if (h.at_boundary()) throw std::logic_error("strand_next ran into boundary");
        return dart_leaving(h.node, h.port ^ 2);
    }

    // Out-port of the strand s (0 or 1) at node n.
    int strand_out_port(NodeId n, int strand) const {
        int a = strand, b = strand ^ 2;
        return port_is_in(n, a) ? b : a;
    }
    int strand_in_port(NodeId n, int strand) const { return strand_out_port(n, strand) ^ 2; }

    // Local writhe of a classical crossing, +1 or -1.
    int sign(NodeId n) const {
        const Node& nd = nodes[n];
        if (nd.kind != NodeKind::Classical) throw std::logic_error("sign of singular node");
        int over_out = strand_out_port(n, nd.over_strand);
        int under_out = strand_out_port(n, nd.over_strand ^ 1);
        return under_out == ((over_out + 1) & 3) ? +1 : -1;
    }

    // The strand (0 or 1) that makes the crossing positive when marked over.
    // Defined for any node; this is the "regard as a positive crossing" rule.
    int positive_over_strand(NodeId n) const {
        int out0 = strand_out_port(n, 0);
        int out1 = strand_out_port(n, 1);
        return out1 == ((out0 + 1) & 3) ? 0 : 1;
    }

    // Component of the strand through (n, strand).
    int strand_component(NodeId n, int strand) const {
        return edges[nodes[n].port_edge[strand]].component;
    }

    bool node_is_self(NodeId n) const {
        return strand_component(n, 0) == strand_component(n, 1);
    }
    bool node_is_self_singular(NodeId n) const {
        return nodes[n].kind == NodeKind::Singular && node_is_self(n);
    }
    bool node_is_inter_classical(NodeId n) const {
        return nodes[n].kind == NodeKind::Classical && !node_is_self(n);
    }

    int graph_component_count() const;  // connected components of the 4-valent graph
    ValidationReport validate() const;
};

// Faces of the rotation system, traced with the face on the left.
// Tangle boundaries are walked as part of face boundaries, so a face walk is
// a cyclic list of darts possibly interrupted by boundary arcs.
struct Face {
    std::vector<Dart> darts;  // in walk order
};

inline std::vector<Face> compute_faces(const Diagram& d) {
    std::vector<Face> faces;
    int ndarts = 2 * static_cast<int>(d.edges.size());
    std::vector<char> seen(ndarts, 0);
    for (Dart start = 0; start < ndarts; ++start) {
        if (seen[start]) continue;
        Face f;
        Dart cur = start;
        while (!seen[cur]) {
            seen[cur] = 1;
            f.darts.push_back(cur);
            Endpoint h = d.dart_head(cur);
            if (h.at_boundary()) {
                int k = static_cast<int>(d.boundary.size());
                int b = (h.port + 1) % k;
                // continue inward along the next boundary position
                const BoundaryPoint& bp = d.boundary[b];
                cur = bp.outbound ? make_dart(bp.edge, 1) : make_dart(bp.edge, 0);
            } else {
                cur = d.dart_leaving(h.node, (h.port + 3) & 3);
            }
        }
        faces.push_back(std::move(f));
    }
    return faces;
}

// dart -> face index lookup
inline std::vector<int> face_of_dart(const Diagram& d, const std::vector<Face>& faces) {
    std::vector<int> fo(2 * d.edges.size(), -1);
    for (int i = 0; i < static_cast<int>(faces.size()); ++i)
        for (Dart dt : faces[i].darts) fo[dt] = i;
    return fo;
}

inline int Diagram::graph_component_count() const {
    int n = static_cast<int>(nodes.size());
    if (n == 0) return edges.empty() ? 0 : 1;
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : edges) {
        if (!e.tail.at_boundary() && !e.head.at_boundary()) {
            int a = find(e.tail.node), b = find(e.head.node);
            if (a != b) parent[a] = b;
        }
    }
    int c = 0;
    for (int i = 0; i < n; ++i) c += find(i) == i;
    return c;
}

inline ValidationReport Diagram::validate() const {
    ValidationReport r;
    auto bad = [&](const std::string& m) { r.violations.push_back(m); };

    int nn = static_cast<int>(nodes.size());
    int ne = static_cast<int>(edges.size());

    // incidence: every node slot holds exactly one edge end
    std::vector<int> slot_hits(nn * 4, 0);
    std::vector<int> bnd_hits(boundary.size(), 0);
    for (int e = 0; e < ne; ++e) {
        for (const Endpoint* ep : {&edges[e].tail, &edges[e].head}) {
            if (ep->at_boundary()) {
                if (!tangle) { bad("edge " + std::to_string(e) + " touches boundary of a closed diagram"); continue; }
                if (ep->port < 0 || ep->port >= static_cast<int>(boundary.size())) { bad("edge " + std::to_string(e) + " has bad boundary index"); continue; }
                ++bnd_hits[ep->port];
                if (boundary[ep->port].edge != e) bad("boundary table mismatch at position " + std::to_string(ep->port));
            } else {
                if (ep->node < 0 || ep->node >= nn || ep->port < 0 || ep->port > 3) { bad("edge " + std::to_string(e) + " has bad endpoint"); continue; }
                ++slot_hits[ep->node * 4 + ep->port];
                if (nodes[ep->node].port_edge[ep->port] != e) bad("node port table mismatch at node " + std::to_string(ep->node));
            }
        }
    }
    for (int n = 0; n < nn; ++n)
        for (int p = 0; p < 4; ++p)
            if (slot_hits[n * 4 + p] != 1) bad("node " + std::to_string(n) + " port " + std::to_string(p) + " has " + std::to_string(slot_hits[n * 4 + p]) + " incidences");
    for (std::size_t b = 0; b < boundary.size(); ++b)
        if (bnd_hits[b] != 1) bad("boundary position " + std::to_string(b) + " has " + std::to_string(bnd_hits[b]) + " incidences");
    for (std::size_t b = 0; b < boundary.size(); ++b) {
        const BoundaryPoint& bp = boundary[b];
        if (bp.edge < 0 || bp.edge >= ne) { bad("boundary references bad edge"); continue; }
        const Endpoint& ep = bp.outbound ? edges[bp.edge].head : edges[bp.edge].tail;
        if (!(ep.at_boundary() && ep.port == static_cast<int>(b)))
            bad("boundary direction mark wrong at position " + std::to_string(b));
    }
    if (!r.ok()) return r;  // structure too broken for the deeper checks

    // orientation: 2 in / 2 out per node, inbound ports never opposite
    for (int n = 0; n < nn; ++n) {
        int ins = 0;
        for (int p = 0; p < 4; ++p) ins += port_is_in(n, p);
        if (ins != 2) { bad("node " + std::to_string(n) + " has " + std::to_string(ins) + " inbound ports"); continue; }
        if (port_is_in(n, 0) == port_is_in(n, 2)) bad("node " + std::to_string(n) + ": strands not transverse to orientation");
    }

    // over marks
    for (int n = 0; n < nn; ++n) {
        if (nodes[n].kind == NodeKind::Classical) {
            if (nodes[n].over_strand != 0 && nodes[n].over_strand != 1) bad("missing over/under at node " + std::to_string(n));
        } else if (nodes[n].over_strand != -1) {
            bad("singular node " + std::to_string(n) + " carries an over mark");
        }
    }

    // component labels constant along strands
    for (int n = 0; n < nn; ++n)
        for (int s = 0; s < 2; ++s) {
            int c1 = edges[nodes[n].port_edge[s]].component;
            int c2 = edges[nodes[n].port_edge[s ^ 2]].component;
            if (c1 != c2) bad("component label changes across node " + std::to_string(n));
        }
    int ncomp = static_cast<int>(components.size());
    for (int e = 0; e < ne; ++e)
        if (edges[e].component < 0 || edges[e].component >= ncomp) bad("edge " + std::to_string(e) + " has bad component label");
    for (int c = 0; c < ncomp; ++c) {
        if (components[c].base_edge >= ne) bad("component " + std::to_string(c) + " basepoint references bad edge");
        else if (components[c].base_edge >= 0 && edges[components[c].base_edge].component != c)
            bad("component " + std::to_string(c) + " basepoint lies on another component");
        if (components[c].bare_circle && components[c].base_edge >= 0)
            bad("bare circle component " + std::to_string(c) + " cannot carry a basepoint");
    }
    // every non-bare component owns at least one edge; bare ones own none
    {
        std::vector<int> owned(ncomp, 0);
        for (const auto& e : edges) if (e.component >= 0 && e.component < ncomp) ++owned[e.component];
        for (int c = 0; c < ncomp; ++c) {
            if (components[c].bare_circle && owned[c] != 0) bad("bare circle component " + std::to_string(c) + " owns edges");
            if (!components[c].bare_circle && owned[c] == 0) bad("component " + std::to_string(c) + " owns no edges");
        }
    }
    if (!r.ok()) return r;

    if (tangle && boundary.empty()) bad("tangle without boundary points");
    if (!r.ok()) return r;

    // planarity: Euler characteristic of the rotation system.
    // The boundary-attached part must be a disk (chi 1); every floating
    // connected part is a sphere piece (chi 2). Nesting of disjoint parts is
    // not embedded data, so each part is checked on its own.
    if (ne > 0 || nn > 0) {
        auto faces = compute_faces(*this);
        int f = static_cast<int>(faces.size());
        int total = nn + 1;  // last slot: virtual boundary vertex
        std::vector<int> parent(total);
        for (int i = 0; i < total; ++i) parent[i] = i;
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& e : edges) {
            int a = e.tail.at_boundary() ? nn : e.tail.node;
            int b = e.head.at_boundary() ? nn : e.head.node;
            a = find(a); b = find(b);
            if (a != b) parent[a] = b;
        }
        std::vector<char> used(total, 0);
        for (const auto& e : edges) {
            used[find(e.tail.at_boundary() ? nn : e.tail.node)] = 1;
            used[find(e.head.at_boundary() ? nn : e.head.node)] = 1;
        }
        int parts = 0;
        for (int i = 0; i < total; ++i) parts += (find(i) == i && used[i]);
        bool has_disk_part = tangle && used[find(nn)];
        int expected = has_disk_part ? 1 + 2 * (parts - 1) : 2 * parts;
        if (nn - ne + f != expected)
            bad("rotation system is not planar (V-E+F = " + std::to_string(nn - ne + f) + ", expected " + std::to_string(expected) + ")");
    }
    return r;
}

}  // namespace srm

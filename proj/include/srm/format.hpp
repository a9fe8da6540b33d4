#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "srm/diagram.hpp"

namespace srm {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

namespace detail {

struct RawNode {
    NodeKind kind;
    std::array<long, 4> edge_ids;
    long over_id = -1;  // file edge id named by over=, classical only
    int line;
};

struct RawIncidence {
    int node;   // -1 = boundary
    int slot;   // port or boundary position
};

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (t[0] == '#') break;
        out.push_back(t);
    }
    return out;
}

}  // namespace detail

// Parses the diagram text format:
//   link | tangle
//   component <index> [base=<edge-id>]
//   X <a> <b> <c> <d> over=<a|b>     (ids counterclockwise, slot 0 inbound)
//   S <a> <b> <c> <d>
//   boundary <+|-><edge-id>...       (tangles; + outbound, - inbound)
inline Diagram parse_diagram(const std::string& text) {
    using namespace detail;
    Diagram d;
    std::vector<RawNode> raw;
    std::vector<std::pair<long, bool>> raw_boundary;  // (edge id, outbound)
    std::vector<std::optional<long>> comp_base;
    bool have_header = false;
    int lineno = 0;

    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        ++lineno;
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        if (!have_header) {
            if (tok[0] == "link") d.tangle = false;
            else if (tok[0] == "tangle") d.tangle = true;
            else throw ParseError(lineno, "expected header 'link' or 'tangle'");
            if (tok.size() != 1) throw ParseError(lineno, "unexpected tokens after header");
            have_header = true;
        } else if (tok[0] == "component") {
            if (tok.size() < 2) throw ParseError(lineno, "component index missing");
            long idx = 0;
            try { idx = std::stol(tok[1]); } catch (...) { throw ParseError(lineno, "bad component index"); }
            if (idx != static_cast<long>(comp_base.size()) + 1)
                throw ParseError(lineno, "component indices must be 1,2,... in order");
            std::optional<long> base;
            for (std::size_t i = 2; i < tok.size(); ++i) {
                if (tok[i].rfind("base=", 0) == 0) {
                    try { base = std::stol(tok[i].substr(5)); } catch (...) { throw ParseError(lineno, "bad base edge id"); }
                } else throw ParseError(lineno, "unexpected token '" + tok[i] + "'");
            }
            comp_base.push_back(base);
        } else if (tok[0] == "X" || tok[0] == "S") {
            bool classical = tok[0] == "X";
            if (tok.size() < 5) throw ParseError(lineno, "node needs four edge ids");
            RawNode rn;
            rn.kind = classical ? NodeKind::Classical : NodeKind::Singular;
            rn.line = lineno;
            for (int i = 0; i < 4; ++i) {
                try { rn.edge_ids[i] = std::stol(tok[1 + i]); } catch (...) { throw ParseError(lineno, "bad edge id"); }
            }
            std::size_t next = 5;
            if (classical) {
                if (tok.size() < 6 || tok[5].rfind("over=", 0) != 0)
                    throw ParseError(lineno, "classical node needs over=<edge-id>");
                try { rn.over_id = std::stol(tok[5].substr(5)); } catch (...) { throw ParseError(lineno, "bad over edge id"); }
                next = 6;
            }
            if (tok.size() != next) throw ParseError(lineno, "unexpected trailing tokens");
            raw.push_back(rn);
        } else if (tok[0] == "boundary") {
            if (!d.tangle) throw ParseError(lineno, "boundary in a closed diagram");
            if (!raw_boundary.empty()) throw ParseError(lineno, "duplicate boundary line");
            for (std::size_t i = 1; i < tok.size(); ++i) {
                const std::string& t = tok[i];
                if (t.size() < 2 || (t[0] != '+' && t[0] != '-')) throw ParseError(lineno, "boundary entries look like +<id> or -<id>");
                long id = 0;
                try { id = std::stol(t.substr(1)); } catch (...) { throw ParseError(lineno, "bad boundary edge id"); }
                raw_boundary.emplace_back(id, t[0] == '+');
            }
        } else {
            throw ParseError(lineno, "unknown directive '" + tok[0] + "'");
        }
    }
    if (!have_header) throw ParseError(lineno, "empty input");
    if (comp_base.empty()) throw ParseError(lineno, "no components declared");

    // collect edge ids; every id occurs exactly twice
    std::map<long, std::vector<RawIncidence>> occ;
    for (int n = 0; n < static_cast<int>(raw.size()); ++n)
        for (int p = 0; p < 4; ++p) occ[raw[n].edge_ids[p]].push_back({n, p});
    for (int b = 0; b < static_cast<int>(raw_boundary.size()); ++b)
        occ[raw_boundary[b].first].push_back({-1, b});
    for (auto& [id, v] : occ)
        if (v.size() != 2)
            throw ParseError(0, "edge multiplicity: id " + std::to_string(id) + " occurs " + std::to_string(v.size()) + " times");

    std::map<long, int> edge_index;
    for (auto& [id, v] : occ) edge_index[id] = static_cast<int>(edge_index.size());
    int ne = static_cast<int>(edge_index.size());

    // orient: decide which incidence of each edge is the head.
    // -1 unknown, otherwise the index (0/1) into occ[id] of the head end.
    std::vector<int> head_end(ne, -1);
    auto slot_io = [&](long id, int which, bool is_head) -> bool {
        // returns false on contradiction
        int e = edge_index[id];
        int want = is_head ? which : which ^ 1;
        if (head_end[e] == -1) { head_end[e] = want; return true; }
        return head_end[e] == want;
    };
    auto pin = [&](int node, int slot, bool inbound) -> bool {
        long id = raw[node].edge_ids[slot];
        auto& v = occ[id];
        int which = (v[0].node == node && v[0].slot == slot) ? 0 : 1;
        return slot_io(id, which, inbound);
    };
    // boundary marks
    for (int b = 0; b < static_cast<int>(raw_boundary.size()); ++b) {
        auto& v = occ[raw_boundary[b].first];
        int which = (v[0].node == -1 && v[0].slot == b) ? 0 : 1;
        if (!slot_io(raw_boundary[b].first, which, raw_boundary[b].second))
            throw ParseError(0, "inconsistent boundary direction for edge " + std::to_string(raw_boundary[b].first));
    }
    // slot 0 inbound, slot 2 outbound, over= pins when it names slot 1/3
    for (int n = 0; n < static_cast<int>(raw.size()); ++n) {
        if (!pin(n, 0, true) || !pin(n, 2, false))
            throw ParseError(raw[n].line, "inconsistent orientation at node");
        if (raw[n].kind == NodeKind::Classical) {
            // over= names an inbound edge; when that edge sits at slot 1 or 3
            // (and nowhere else on this node) it pins the cross strand too
            long ov = raw[n].over_id;
            if (raw[n].edge_ids[0] != ov && raw[n].edge_ids[2] != ov)
                for (int s : {1, 3})
                    if (raw[n].edge_ids[s] == ov && raw[n].edge_ids[s ^ 2] != ov)
                        if (!pin(n, s, true)) throw ParseError(raw[n].line, "over mark contradicts orientation");
        }
    }
    // propagate through transversality: slots 1 and 3 carry one in, one out
    bool changed = true;
    while (changed) {
        changed = false;
        for (int n = 0; n < static_cast<int>(raw.size()); ++n) {
            for (int s : {1, 3}) {
                long id = raw[n].edge_ids[s];
                int e = edge_index[id];
                auto& v = occ[id];
                int which = (v[0].node == n && v[0].slot == s) ? 0 : 1;
                if (raw[n].edge_ids[s ^ 2] == id && v[0].node == n && v[1].node == n) continue;  // both ends here
                if (head_end[e] == -1) continue;
                bool inbound = head_end[e] == which;
                long oid = raw[n].edge_ids[s ^ 2];
                int oe = edge_index[oid];
                auto& ov = occ[oid];
                int owhich = (ov[0].node == n && ov[0].slot == (s ^ 2)) ? 0 : 1;
                int want = inbound ? (owhich ^ 1) : owhich;  // partner slot gets the opposite io
                if (head_end[oe] == -1) { head_end[oe] = want; changed = true; }
                else if (head_end[oe] != want) throw ParseError(raw[n].line, "inconsistent orientation through node");
            }
        }
    }
    for (int e = 0; e < ne; ++e)
        if (head_end[e] == -1) throw ParseError(0, "ambiguous orientation: anchor a strand by listing one of its inbound edges first");

    // build edges and nodes
    d.edges.assign(ne, Edge{});
    for (auto& [id, v] : occ) {
        int e = edge_index[id];
        auto mk = [&](const RawIncidence& ri) {
            return ri.node < 0 ? Endpoint{-1, ri.slot} : Endpoint{ri.node, ri.slot};
        };
        d.edges[e].head = mk(v[head_end[e]]);
        d.edges[e].tail = mk(v[head_end[e] ^ 1]);
    }
    d.nodes.assign(raw.size(), Node{});
    for (int n = 0; n < static_cast<int>(raw.size()); ++n) {
        d.nodes[n].kind = raw[n].kind;
        for (int p = 0; p < 4; ++p) d.nodes[n].port_edge[p] = edge_index[raw[n].edge_ids[p]];
        if (raw[n].kind == NodeKind::Classical) {
            long ov = raw[n].over_id;
            int strand = -1;
            for (int s = 0; s < 4; ++s)
                if (raw[n].edge_ids[s] == ov && d.edges[edge_index[ov]].head == Endpoint{n, s}) strand = s & 1;
            if (strand < 0) throw ParseError(raw[n].line, "over= must name an inbound edge of the node");
            d.nodes[n].over_strand = strand;
        }
    }
    d.boundary.assign(raw_boundary.size(), BoundaryPoint{});
    for (int b = 0; b < static_cast<int>(raw_boundary.size()); ++b)
        d.boundary[b] = BoundaryPoint{edge_index[raw_boundary[b].first], raw_boundary[b].second};

    // strand partition -> components
    std::vector<int> strand_class(ne, -1);
    int nclasses = 0;
    for (int e = 0; e < ne; ++e) {
        if (strand_class[e] != -1) continue;
        int cls = nclasses++;
        // walk both ways along the strand
        std::vector<int> stack{e};
        strand_class[e] = cls;
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            for (const Endpoint* ep : {&d.edges[cur].tail, &d.edges[cur].head}) {
                if (ep->at_boundary()) continue;
                int nxt = d.nodes[ep->node].port_edge[ep->port ^ 2];
                if (strand_class[nxt] == -1) { strand_class[nxt] = cls; stack.push_back(nxt); }
            }
        }
    }
    int ncomp = static_cast<int>(comp_base.size());
    if (nclasses > ncomp) throw ParseError(0, "more strands than declared components");
    std::vector<int> class_to_comp(nclasses, -1);
    std::vector<char> comp_taken(ncomp, 0);
    for (int c = 0; c < ncomp; ++c) {
        if (!comp_base[c]) continue;
        auto it = edge_index.find(*comp_base[c]);
        if (it == edge_index.end()) throw ParseError(0, "basepoint references unknown edge " + std::to_string(*comp_base[c]));
        int cls = strand_class[it->second];
        if (class_to_comp[cls] != -1) throw ParseError(0, "two basepoints on one strand");
        class_to_comp[cls] = c;
        comp_taken[c] = 1;
    }
    // remaining strands by smallest file edge id, remaining components in order
    std::vector<std::pair<long, int>> rest;
    std::vector<long> class_min(nclasses, -1);
    for (auto& [id, v] : occ) {
        int cls = strand_class[edge_index[id]];
        if (class_min[cls] < 0 || id < class_min[cls]) class_min[cls] = id;
    }
    for (int cls = 0; cls < nclasses; ++cls)
        if (class_to_comp[cls] == -1) rest.emplace_back(class_min[cls], cls);
    std::sort(rest.begin(), rest.end());
    std::size_t ri = 0;
    for (int c = 0; c < ncomp && ri < rest.size(); ++c) {
        if (comp_taken[c]) continue;
        class_to_comp[rest[ri++].second] = c;
        comp_taken[c] = 1;
    }
    if (ri < rest.size()) throw ParseError(0, "could not assign all strands to components");

    d.components.assign(ncomp, Component{});
    for (int c = 0; c < ncomp; ++c) {
        if (!comp_taken[c]) d.components[c].bare_circle = true;  // declared, owns nothing
        if (comp_base[c]) d.components[c].base_edge = edge_index[*comp_base[c]];
    }
    for (int e = 0; e < ne; ++e) d.edges[e].component = class_to_comp[strand_class[e]];

    auto rep = d.validate();
    if (!rep.ok()) throw ParseError(0, "invalid diagram: " + rep.violations.front());
    return d;
}

// Serializes a diagram in the same format; parse(serialize(d)) is isomorphic to d.
inline std::string serialize_diagram(const Diagram& d) {
    int nn = static_cast<int>(d.nodes.size());
    int ne = static_cast<int>(d.edges.size());

    // pick slot-0 anchors: every closed strand needs one node where its
    // inbound edge is listed first
    struct Passage { int node; int strand; };
    std::vector<int> strand_class(ne, -1);
    int nclasses = 0;
    for (int e = 0; e < ne; ++e) {
        if (strand_class[e] != -1) continue;
        int cls = nclasses++;
        std::vector<int> stack{e};
        strand_class[e] = cls;
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            for (const Endpoint* ep : {&d.edges[cur].tail, &d.edges[cur].head}) {
                if (ep->at_boundary()) continue;
                int nxt = d.nodes[ep->node].port_edge[ep->port ^ 2];
                if (strand_class[nxt] == -1) { strand_class[nxt] = cls; stack.push_back(nxt); }
            }
        }
    }
    std::vector<char> cls_closed(nclasses, 1);
    for (int e = 0; e < ne; ++e)
        if (d.edges[e].tail.at_boundary() || d.edges[e].head.at_boundary()) cls_closed[strand_class[e]] = 0;
    // bipartite matching strands -> anchoring nodes (Kuhn)
    std::vector<std::vector<int>> node_of_cls(nclasses);
    for (int n = 0; n < nn; ++n)
        for (int s = 0; s < 2; ++s) {
            int cls = strand_class[d.nodes[n].port_edge[s]];
            if (cls_closed[cls]) node_of_cls[cls].push_back(n);
        }
    std::vector<int> anchor_of_node(nn, -1);  // strand class anchored at this node
    for (int cls = 0; cls < nclasses; ++cls) {
        if (!cls_closed[cls]) continue;
        std::vector<char> vis(nn, 0);
        std::function<bool(int)> try_match = [&](int c) -> bool {
            for (int n : node_of_cls[c]) {
                if (vis[n]) continue;
                vis[n] = 1;
                if (anchor_of_node[n] == -1 || try_match(anchor_of_node[n])) {
                    anchor_of_node[n] = c;
                    return true;
                }
            }
            return false;
        };
        if (!node_of_cls[cls].empty() && !try_match(cls))
            throw std::runtime_error("cannot anchor every closed strand");
    }

    std::ostringstream os;
    os << (d.tangle ? "tangle" : "link") << '\n';
    for (int c = 0; c < static_cast<int>(d.components.size()); ++c) {
        os << "component " << (c + 1);
        if (d.components[c].base_edge >= 0) os << " base=" << (d.components[c].base_edge + 1);
        os << '\n';
    }
    for (int n = 0; n < nn; ++n) {
        int slot0 = -1;
        if (anchor_of_node[n] != -1) {
            int cls = anchor_of_node[n];
            for (int s = 0; s < 2; ++s)
                if (strand_class[d.nodes[n].port_edge[s]] == cls) slot0 = d.strand_in_port(n, s);
        }
        if (slot0 < 0) slot0 = d.strand_in_port(n, 0);
        os << (d.nodes[n].kind == NodeKind::Classical ? "X" : "S");
        for (int j = 0; j < 4; ++j) os << ' ' << (d.nodes[n].port_edge[(slot0 + j) & 3] + 1);
        if (d.nodes[n].kind == NodeKind::Classical)
            os << " over=" << (d.nodes[n].port_edge[d.strand_in_port(n, d.nodes[n].over_strand)] + 1);
        os << '\n';
    }
    if (d.tangle) {
        os << "boundary";
        for (auto& bp : d.boundary) os << ' ' << (bp.outbound ? '+' : '-') << (bp.edge + 1);
        os << '\n';
    }
    return os.str();
}

}  // namespace srm

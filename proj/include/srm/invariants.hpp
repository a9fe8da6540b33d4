#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "srm/diagram.hpp"
#include "srm/gauss.hpp"
#include "srm/laurent.hpp"
#include "srm/match.hpp"

namespace srm {

// ---- projections -------------------------------------------------------------

// pr_s: the oriented smoothing of every singular crossing. Components are
// rebuilt: those containing an original basepoint keep their identity and
// order, new circles follow by smallest surviving edge id.
inline Diagram smooth_singular(const Diagram& d) {
    int ne = static_cast<int>(d.edges.size());
    // connection[k]: for each singular node, in-port -> paired out-port
    std::vector<char> smooth(d.nodes.size(), 0);
    for (std::size_t n = 0; n < d.nodes.size(); ++n) smooth[n] = d.nodes[n].kind == NodeKind::Singular;

    // chase chains of edges through smoothed nodes
    auto next_through = [&](Dart cur) -> std::optional<Dart> {
        Endpoint h = d.dart_head(cur);
        if (h.at_boundary() || !smooth[h.node]) return std::nullopt;
        // oriented smoothing: the inbound port connects to the adjacent
        // outbound port, turning rather than crossing
        int p = h.port;
        int q = d.port_is_in(h.node, (p + 1) & 3) ? (p + 3) & 3 : (p + 1) & 3;
        return d.dart_leaving(h.node, q);
    };

    Diagram out;
    out.tangle = d.tangle;
    out.boundary = d.boundary;
    std::vector<int> node_new(d.nodes.size(), -1);
    for (std::size_t n = 0; n < d.nodes.size(); ++n)
        if (!smooth[n]) {
            node_new[n] = static_cast<int>(out.nodes.size());
            out.nodes.push_back(d.nodes[n]);
        }

    // build merged edges; chain identity keyed by the smallest old edge id
    struct Chain {
        Endpoint from, to;      // in old coordinates; node == -2 means "none" (circle)
        int min_edge;
        bool has_base;
        int base_comp = -1;
        int old_comp;
    };
    std::vector<Chain> chains;
    std::vector<char> used(ne, 0);
    for (int e0 = 0; e0 < ne; ++e0) {
        if (used[e0]) continue;
        // walk forward to a real endpoint or a loop
        Chain ch;
        ch.min_edge = e0;
        ch.has_base = false;
        ch.old_comp = d.edges[e0].component;
        Dart cur = make_dart(e0, 0);
        std::vector<int> members;
        while (true) {
            members.push_back(dart_edge(cur));
            auto nxt = next_through(cur);
            if (!nxt) break;
            cur = *nxt;
            if (dart_edge(cur) == e0) break;  // closed chain
        }
        bool closed = false;
        {
            auto nxt = next_through(cur);
            closed = nxt && dart_edge(*nxt) == e0 && members.size() >= 1 && dart_edge(cur) != e0;
            if (dart_edge(cur) == e0 && members.size() > 1) closed = true;
        }
        // walk backward from e0 unless closed
        Dart back = make_dart(e0, 1);
        std::vector<int> prefix;
        if (!closed) {
            while (true) {
                auto nxt = next_through(back);
                if (!nxt) break;
                back = *nxt;
                if (dart_edge(back) == e0) { closed = true; break; }
                prefix.push_back(dart_edge(back));
            }
        }
        std::vector<int> all(prefix.rbegin(), prefix.rend());
        for (int m : members) all.push_back(m);
        for (int m : all) {
            used[m] = 1;
            ch.min_edge = std::min(ch.min_edge, m);
            int c = d.edges[m].component;
            if (d.components[c].base_edge == m && (ch.base_comp == -1 || c < ch.base_comp)) {
                ch.has_base = true;
                ch.base_comp = c;
            }
        }
        if (closed) {
            ch.from = Endpoint{-2, 0};
            ch.to = Endpoint{-2, 0};
        } else {
            ch.from = d.dart_tail(make_dart(all.front(), 0));
            ch.to = d.dart_head(make_dart(all.back(), 0));
        }
        chains.push_back(ch);
    }

    // component identities: basepointed chains keep their component, then by
    // smallest edge id; component count can change under smoothing
    std::vector<int> order(chains.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return chains[a].min_edge < chains[b].min_edge; });

    // group chains into strands of the smoothed diagram
    // first materialize edges, then partition into strands for components
    std::vector<Edge> new_edges(chains.size());
    std::vector<int> chain_new_id(chains.size(), -1);
    for (std::size_t oi = 0; oi < order.size(); ++oi) chain_new_id[order[oi]] = static_cast<int>(oi);
    int ncirc = 0;
    std::vector<int> circle_base_comp;
    for (std::size_t i = 0; i < chains.size(); ++i) {
        const Chain& ch = chains[i];
        if (ch.from.node == -2) {
            ++ncirc;
            circle_base_comp.push_back(ch.base_comp);  // -1 when unbased
            chain_new_id[i] = -1;
            continue;
        }
        Edge e;
        e.tail = ch.from.at_boundary() ? ch.from : Endpoint{node_new[ch.from.node], ch.from.port};
        e.head = ch.to.at_boundary() ? ch.to : Endpoint{node_new[ch.to.node], ch.to.port};
        e.component = -1;
        new_edges[i] = e;
    }
    // compact edge array in deterministic order
    out.edges.clear();
    std::vector<int> edge_final(chains.size(), -1);
    for (int oi : order) {
        if (chain_new_id[oi] == -1 || chains[oi].from.node == -2) continue;
        edge_final[oi] = static_cast<int>(out.edges.size());
        out.edges.push_back(new_edges[oi]);
    }
    for (std::size_t i = 0; i < chains.size(); ++i)
        if (edge_final[i] >= 0) {
            Edge& e = out.edges[edge_final[i]];
            if (!e.tail.at_boundary()) out.nodes[e.tail.node].port_edge[e.tail.port] = edge_final[i];
            if (!e.head.at_boundary()) out.nodes[e.head.node].port_edge[e.head.port] = edge_final[i];
            if (e.tail.at_boundary()) out.boundary[e.tail.port] = {edge_final[i], false};
            if (e.head.at_boundary()) out.boundary[e.head.port] = {edge_final[i], true};
        }

    // strand partition of the result
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
    // strand -> kept basepoint component (smallest), strand -> smallest chain min_edge
    std::vector<int> cls_base(nc, -1);
    std::vector<int> cls_min(nc, 1 << 30);
    std::vector<int> cls_base_edge(nc, -1);
    for (std::size_t i = 0; i < chains.size(); ++i) {
        if (edge_final[i] < 0) continue;
        int k = cls[edge_final[i]];
        cls_min[k] = std::min(cls_min[k], chains[i].min_edge);
        if (chains[i].has_base && (cls_base[k] == -1 || chains[i].base_comp < cls_base[k])) {
            cls_base[k] = chains[i].base_comp;
            cls_base_edge[k] = edge_final[i];
        }
    }
    // order components: based strands by their inherited component order, then
    // unbased strands by smallest edge id, then circles (based first)
    struct CompRec {
        int kind;  // 0 = strand, 1 = circle
        int idx;
        int base_comp;
        int min_edge;
    };
    std::vector<CompRec> recs;
    for (int k = 0; k < nc; ++k) recs.push_back({0, k, cls_base[k], cls_min[k]});
    for (int i = 0; i < ncirc; ++i) recs.push_back({1, i, circle_base_comp[i], 1 << 29});
    std::stable_sort(recs.begin(), recs.end(), [](const CompRec& a, const CompRec& b) {
        bool ab = a.base_comp >= 0, bb = b.base_comp >= 0;
        if (ab != bb) return ab;
        if (ab && bb && a.base_comp != b.base_comp) return a.base_comp < b.base_comp;
        return a.min_edge < b.min_edge;
    });
    out.components.assign(recs.size(), Component{});
    std::vector<int> cls_comp(nc, -1);
    for (std::size_t c = 0; c < recs.size(); ++c) {
        if (recs[c].kind == 0) {
            cls_comp[recs[c].idx] = static_cast<int>(c);
            if (cls_base[recs[c].idx] >= 0) out.components[c].base_edge = cls_base_edge[recs[c].idx];
        } else {
            out.components[c].bare_circle = true;
        }
    }
    for (int e = 0; e < ne2; ++e) out.edges[e].component = cls_comp[cls[e]];
    return out;
}

// pr_+: replace every inter-component singular crossing by a positive crossing.
inline Diagram project_positive(const Diagram& d) {
    Diagram out = d;
    for (std::size_t n = 0; n < out.nodes.size(); ++n) {
        if (out.nodes[n].kind != NodeKind::Singular) continue;
        if (out.node_is_self(static_cast<NodeId>(n))) continue;
        out.nodes[n].kind = NodeKind::Classical;
        out.nodes[n].over_strand = out.positive_over_strand(static_cast<NodeId>(n));
    }
    return out;
}

// ---- generalized cross chord number -------------------------------------------

// X: interleaved letter pairs of the full cyclic Gauss word read as a single
// cycle with the separators dropped. Words start at stored basepoints when
// present, otherwise at each component's smallest edge.
inline int cross_chord_number(const Diagram& d) {
    std::vector<StartPosition> starts(d.components.size());
    for (std::size_t c = 0; c < d.components.size(); ++c) {
        if (d.components[c].base_edge >= 0) starts[c].edge = d.components[c].base_edge;
        else {
            int best = -1;
            for (int e = 0; e < static_cast<int>(d.edges.size()); ++e)
                if (d.edges[e].component == static_cast<int>(c) && (best == -1 || e < best)) best = e;
            starts[c].edge = best;
        }
        // arcs begin at their inbound boundary end
        if (d.tangle) {
            for (auto& bp : d.boundary)
                if (!bp.outbound && d.edges[bp.edge].component == static_cast<int>(c)) starts[c].edge = bp.edge;
        }
    }
    std::vector<int> comp_order(d.components.size());
    for (std::size_t c = 0; c < comp_order.size(); ++c) comp_order[c] = static_cast<int>(c);
    GaussPhrase ph = gauss_phrase(d, starts, comp_order, RecordFilter::All);
    auto lin = ph.linear();
    int n = static_cast<int>(lin.size());
    std::map<NodeId, std::pair<int, int>> occ;
    for (int i = 0; i < n; ++i) {
        auto it = occ.find(lin[i].node);
        if (it == occ.end()) occ[lin[i].node] = {i, -1};
        else it->second.second = i;
    }
    int x = 0;
    for (auto a = occ.begin(); a != occ.end(); ++a)
        for (auto b = std::next(a); b != occ.end(); ++b) {
            auto [p1, p2] = a->second;
            auto [q1, q2] = b->second;
            if (p2 < 0 || q2 < 0) throw std::logic_error("open letter in cross chord count");
            bool in1 = p1 < q1 && q1 < p2;
            bool in2 = p1 < q2 && q2 < p2;
            x += in1 != in2;
        }
    return x;
}

inline int x_mod2(const Diagram& d) { return cross_chord_number(smooth_singular(d)) & 1; }

inline int x_parity_delta(const Diagram& d, const MoveInstance& inst) {
    Diagram after = apply_move(d, inst);
    return (x_mod2(after) - x_mod2(d)) & 1;
}

// ---- crossing type labels ------------------------------------------------------

enum class CrossingTypeLabel { APlus, AMinus, BPlus, BMinus };

inline const char* label_name(CrossingTypeLabel l) {
    switch (l) {
        case CrossingTypeLabel::APlus: return "a+";
        case CrossingTypeLabel::AMinus: return "a-";
        case CrossingTypeLabel::BPlus: return "b+";
        case CrossingTypeLabel::BMinus: return "b-";
    }
    return "?";
}

// The letter a/b is the orientation class of the crossing: a when the second
// component's direction is clockwise from the first component's (their frame
// is negative), b otherwise. It does not depend on over/under, which is what
// makes a type II pair cancel and a type V move flip the letter. The sign is
// the local writhe.
inline bool inter_letter_is_a(const Diagram& d, NodeId n) {
    int s1 = d.strand_component(n, 0) < d.strand_component(n, 1) ? 0 : 1;
    int out1 = d.strand_out_port(n, s1);
    int out2 = d.strand_out_port(n, s1 ^ 1);
    bool det_positive = out2 == ((out1 + 1) & 3);
    return !det_positive;
}

inline CrossingTypeLabel classify_inter_crossing(const Diagram& d, NodeId n) {
    if (d.nodes[n].kind != NodeKind::Classical) throw std::invalid_argument("crossing type of a singular node");
    if (d.node_is_self(n)) throw std::invalid_argument("crossing type of a self crossing");
    bool a = inter_letter_is_a(d, n);
    bool plus = d.sign(n) > 0;
    if (a) return plus ? CrossingTypeLabel::APlus : CrossingTypeLabel::AMinus;
    return plus ? CrossingTypeLabel::BPlus : CrossingTypeLabel::BMinus;
}

// delta: type a inter-component classical crossings minus type b ones.
inline int delta(const Diagram& d) {
    if (d.components.size() != 2) throw std::invalid_argument("delta needs an ordered two-component diagram");
    int v = 0;
    for (NodeId n = 0; n < static_cast<int>(d.nodes.size()); ++n) {
        if (!d.node_is_inter_classical(n)) continue;
        v += inter_letter_is_a(d, n) ? 1 : -1;
    }
    return v;
}

// ---- encoding phrases and separation numbers ------------------------------------

inline void require_based_two_component(const Diagram& d) {
    if (d.components.size() != 2) throw std::invalid_argument("needs an ordered two-component diagram");
    for (int c = 0; c < 2; ++c) {
        if (d.components[c].bare_circle) continue;
        if (d.components[c].base_edge < 0) throw std::invalid_argument("missing basepoint on component " + std::to_string(c + 1));
    }
}

// w_o and w_u for a distinguished singular crossing s, regarded as positive.
// The first word is s's component read from just before s along the over or
// under path; the other component is read from its basepoint.
inline std::pair<GaussPhrase, GaussPhrase> encoding_phrases(const Diagram& d, NodeId s) {
    require_based_two_component(d);
    if (s < 0 || s >= static_cast<int>(d.nodes.size()) || d.nodes[s].kind != NodeKind::Singular)
        throw std::invalid_argument("distinguished crossing must be singular");
    int over = d.positive_over_strand(s);
    auto phrase_from = [&](int strand) {
        int in_port = d.strand_in_port(s, strand);
        EdgeId start_edge = d.nodes[s].port_edge[in_port];
        int comp = d.edges[start_edge].component;
        std::vector<StartPosition> starts = base_starts(d);
        starts[comp].edge = start_edge;
        std::vector<int> order = {comp, comp ^ 1};
        return gauss_phrase(d, starts, order, RecordFilter::SingularAndInter, s);
    };
    return {phrase_from(over), phrase_from(over ^ 1)};
}

// Occurrences of self-singular letters strictly between the two occurrences of
// crossing c in the linear reading of w.
inline int separation_number(const GaussPhrase& w, NodeId c) {
    auto lin = w.linear();
    int first = -1, second = -1;
    for (int i = 0; i < static_cast<int>(lin.size()); ++i)
        if (lin[i].node == c) {
            if (first < 0) first = i;
            else if (second < 0) second = i;
            else throw std::invalid_argument("letter occurs more than twice");
        }
    if (second < 0) throw std::invalid_argument("letter must occur exactly twice");
    int tau = 0;
    for (int i = first + 1; i < second; ++i)
        if (lin[i].kind == NodeKind::Singular && lin[i].self) ++tau;
    return tau;
}

struct SeparationTable {
    NodeId s;
    struct Row {
        NodeId c;
        CrossingTypeLabel type;
        int tau_o, tau_u;
        int tau() const { return tau_o + tau_u; }
    };
    std::vector<Row> rows;
    int aggregate(CrossingTypeLabel t) const {
        int v = 0;
        for (auto& r : rows)
            if (r.type == t) v += r.tau();
        return v;
    }
};

inline SeparationTable tau_table(const Diagram& d, NodeId s) {
    auto [wo, wu] = encoding_phrases(d, s);
    SeparationTable t;
    t.s = s;
    for (NodeId n = 0; n < static_cast<int>(d.nodes.size()); ++n) {
        if (!d.node_is_inter_classical(n)) continue;
        SeparationTable::Row r;
        r.c = n;
        r.type = classify_inter_crossing(d, n);
        r.tau_o = separation_number(wo, n);
        r.tau_u = separation_number(wu, n);
        t.rows.push_back(r);
    }
    return t;
}

// ---- the invariant f -------------------------------------------------------------

// f(D) = (sum over realized exponents tau(s,a+)-tau(s,b-) of t^e,
//         sum over realized exponents tau(s,a-)-tau(s,b+) of t^e),
// s ranging over the self-singular crossings. Each exponent value contributes
// once; a diagram without self-singular crossings gives (0, 0).
inline LaurentPair invariant_f(const Diagram& d) {
    require_based_two_component(d);
    std::set<int> e1, e2;
    for (NodeId s = 0; s < static_cast<int>(d.nodes.size()); ++s) {
        if (!d.node_is_self_singular(s)) continue;
        SeparationTable t = tau_table(d, s);
        e1.insert(t.aggregate(CrossingTypeLabel::APlus) - t.aggregate(CrossingTypeLabel::BMinus));
        e2.insert(t.aggregate(CrossingTypeLabel::AMinus) - t.aggregate(CrossingTypeLabel::BPlus));
    }
    LaurentPair out;
    for (int e : e1) out.first += Laurent::monomial(e);
    for (int e : e2) out.second += Laurent::monomial(e);
    return out;
}

inline LaurentPair f_proj(const Diagram& d) { return invariant_f(project_positive(d)); }

}  // namespace srm

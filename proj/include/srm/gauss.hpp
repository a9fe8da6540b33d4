#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "srm/diagram.hpp"

namespace srm {

// One recorded crossing visit along a traversal.
struct Letter {
    NodeId node = -1;
    NodeKind kind = NodeKind::Classical;
    bool self = false;          // both strands on one component
    bool over_branch = false;   // this visit runs along the over strand
                                // (singular crossings: over when regarded positive)
};

// Words of recorded letters, one per component in a stated order.
struct GaussPhrase {
    std::vector<std::vector<Letter>> words;
    std::vector<int> component_order;  // component index per word

    // letters in the linear reading, first word then the rest
    std::vector<Letter> linear() const {
        std::vector<Letter> out;
        for (auto& w : words) out.insert(out.end(), w.begin(), w.end());
        return out;
    }
    int count(NodeId n) const {
        int c = 0;
        for (auto& w : words)
            for (auto& l : w) c += l.node == n;
        return c;
    }
};

enum class RecordFilter {
    All,                 // every crossing
    SingularAndInter,    // self-singular crossings and inter-component classical ones
};

struct StartPosition {
    EdgeId edge = -1;  // traversal begins on this edge; first letter is its head node
};

inline bool letter_passes(const Diagram& d, NodeId n, RecordFilter f, NodeId distinguished) {
    if (n == distinguished) return true;
    switch (f) {
        case RecordFilter::All: return true;
        case RecordFilter::SingularAndInter:
            return d.node_is_self_singular(n) || d.node_is_inter_classical(n);
    }
    return false;
}

// Traverses each component from its start position following the orientation,
// recording the crossings that pass the filter. Components are emitted in the
// order given; zero-crossing components contribute empty words.
inline GaussPhrase gauss_phrase(const Diagram& d, const std::vector<StartPosition>& starts,
                                const std::vector<int>& component_order, RecordFilter filter,
                                NodeId distinguished = -1) {
    if (starts.size() != d.components.size()) throw std::invalid_argument("one start per component required");
    GaussPhrase ph;
    ph.component_order = component_order;
    for (int c : component_order) {
        std::vector<Letter> word;
        const StartPosition& sp = starts[c];
        if (sp.edge < 0) {
            if (!d.components[c].bare_circle) {
                // a component with edges needs a start
                bool has_edges = false;
                for (auto& e : d.edges) has_edges |= e.component == c;
                if (has_edges) throw std::invalid_argument("missing start position on component " + std::to_string(c + 1));
            }
            ph.words.push_back(word);
            continue;
        }
        if (d.edges[sp.edge].component != c) throw std::invalid_argument("start position not on the stated component");
        Dart cur = make_dart(sp.edge, 0);
        while (true) {
            Endpoint h = d.dart_head(cur);
            if (h.at_boundary()) break;  // arcs end at the boundary
            NodeId n = h.node;
            if (letter_passes(d, n, filter, distinguished)) {
                Letter l;
                l.node = n;
                l.kind = d.nodes[n].kind;
                l.self = d.node_is_self(n);
                int strand = h.port & 1;
                int over = d.nodes[n].kind == NodeKind::Classical ? d.nodes[n].over_strand
                                                                  : d.positive_over_strand(n);
                l.over_branch = strand == over;
                word.push_back(l);
            }
            cur = d.strand_next(cur);
            if (dart_edge(cur) == sp.edge && dart_dir(cur) == 0) break;
        }
        ph.words.push_back(word);
    }
    return ph;
}

// Default starts: the stored basepoints.
inline std::vector<StartPosition> base_starts(const Diagram& d) {
    std::vector<StartPosition> s(d.components.size());
    for (std::size_t c = 0; c < d.components.size(); ++c) s[c].edge = d.components[c].base_edge;
    return s;
}

// Render with a naming scheme: singular crossings s1..sk, inter-component
// classical crossings c1..cm, both in node order; everything else x1...
struct LetterNames {
    std::vector<std::string> by_node;

    static LetterNames standard(const Diagram& d) {
        LetterNames n;
        n.by_node.resize(d.nodes.size());
        int s = 0, c = 0, x = 0;
        for (std::size_t i = 0; i < d.nodes.size(); ++i) {
            if (d.nodes[i].kind == NodeKind::Singular) n.by_node[i] = "s" + std::to_string(++s);
            else if (d.node_is_inter_classical(static_cast<NodeId>(i))) n.by_node[i] = "c" + std::to_string(++c);
            else n.by_node[i] = "x" + std::to_string(++x);
        }
        return n;
    }
};

inline std::string phrase_str(const GaussPhrase& ph, const LetterNames& names) {
    std::ostringstream os;
    for (std::size_t w = 0; w < ph.words.size(); ++w) {
        if (w) os << " | ";
        for (std::size_t i = 0; i < ph.words[w].size(); ++i) {
            if (i) os << ' ';
            os << names.by_node[ph.words[w][i].node];
        }
        if (ph.words[w].empty()) os << "-";
    }
    return os.str();
}

}  // namespace srm

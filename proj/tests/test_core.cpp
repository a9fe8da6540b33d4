#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "srm/canonical.hpp"
#include "srm/diagram.hpp"
#include "srm/format.hpp"
#include "srm/geom.hpp"
#include "srm/laurent.hpp"
#include <sstream>

using namespace srm;

static geom::Resolution classical_over_first(const geom::CrossingInfo&) {
    return {NodeKind::Classical, 0};
}

// closed circle with one kink; mirroring flips the kink's chirality
static Diagram kink_diagram(bool mirror = false) {
    double f = mirror ? -1.0 : 1.0;
    geom::StrandSpec s;
    s.closed = true;
    s.pts = {{f * 0.0, -3.0}, {f * 0.5, -1.0}, {f * 1.5, 0.5}, {f * -1.5, 0.5}, {f * 0.5, -2.0}};
    return geom::build({s}, classical_over_first, false);
}

TEST_CASE("laurent arithmetic and wire format") {
    Laurent p = Laurent::monomial(-4) + Laurent::monomial(4);
    CHECK(p.str() == "(-4:1,4:1)");
    CHECK(Laurent::zero().str() == "()");
    CHECK((p - p).is_zero());
    CHECK((Laurent::monomial(1) * Laurent::monomial(-1)) == Laurent::one());
    LaurentPair pr{p, Laurent::one()};
    CHECK(pr.str() == "(-4:1,4:1);(0:1)");
    CHECK(LaurentPair::parse("(-4:1,4:1);(0:1)") == pr);
    CHECK(Laurent::parse("()").is_zero());
}

TEST_CASE("kink diagram validates and has three faces") {
    Diagram d = kink_diagram();
    auto rep = d.validate();
    INFO(rep.str());
    CHECK(rep.ok());
    CHECK(d.nodes.size() == 1);
    CHECK(d.edges.size() == 2);
    CHECK(compute_faces(d).size() == 3);
    CHECK(d.sign(0) != 0);
}

TEST_CASE("kink chirality flips sign, mirror codes differ") {
    Diagram a = kink_diagram(false), b = kink_diagram(true);
    CHECK(a.sign(0) == -b.sign(0));
    CHECK(canonical_code(a) != canonical_code(b));
}

TEST_CASE("round trip through the text format") {
    Diagram d = kink_diagram();
    std::string text = serialize_diagram(d);
    Diagram d2 = parse_diagram(text);
    CHECK(d2.validate().ok());
    CHECK(canonical_code(d) == canonical_code(d2));
}

TEST_CASE("zero-crossing unknot file") {
    Diagram d = parse_diagram("link\ncomponent 1\n");
    CHECK(d.validate().ok());
    CHECK(d.components.size() == 1);
    CHECK(d.components[0].bare_circle);
}

TEST_CASE("edge multiplicity is a semantic error") {
    CHECK_THROWS_AS(parse_diagram("link\ncomponent 1\nX 1 1 1 2 over=1\n"), ParseError);
}

TEST_CASE("hopf link: positive vs negative codes differ") {
    auto mk = [&](int over) {
        geom::StrandSpec a, b;
        a.closed = true;
        a.component = 0;
        a.pts = {{-1.5, -0.6}, {1.5, -0.6}, {1.5, 0.6}, {-1.5, 0.6}};
        b.closed = true;
        b.component = 1;
        b.pts = {{0.6, -1.5}, {2.5, -1.5}, {2.5, 1.5}, {0.6, 1.5}};
        return geom::build({a, b}, [&](const geom::CrossingInfo&) {
            return geom::Resolution{NodeKind::Classical, over};
        }, false);
    };
    Diagram pos = mk(0), neg = mk(1);
    CHECK(pos.validate().ok());
    CHECK(pos.nodes.size() == 2);
    CHECK(canonical_code(pos) != canonical_code(neg));
    CHECK(canonical_code(pos) == canonical_code(mk(0)));
}

TEST_CASE("canonical code is invariant under file id permutation") {
    Diagram d = kink_diagram();
    std::string text = serialize_diagram(d);
    // renumber edge ids 1->7, 2->3, leaving component indices alone
    auto remap = [](const std::string& id) { return id == "1" ? std::string("7") : id == "2" ? std::string("3") : id; };
    std::istringstream is(text);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tok;
        bool first = true;
        int k = 0;
        std::string head;
        while (ls >> tok) {
            if (k == 0) head = tok;
            std::string out = tok;
            if (head == "X" || head == "S") {
                if (k >= 1 && k <= 4) out = remap(tok);
                if (tok.rfind("over=", 0) == 0) out = "over=" + remap(tok.substr(5));
            } else if (head == "boundary" && k >= 1) {
                out = tok.substr(0, 1) + remap(tok.substr(1));
            } else if (tok.rfind("base=", 0) == 0) {
                out = "base=" + remap(tok.substr(5));
            }
            os << (first ? "" : " ") << out;
            first = false;
            ++k;
        }
        os << '\n';
    }
    Diagram d2 = parse_diagram(os.str());
    CHECK(canonical_code(d) == canonical_code(d2));
}

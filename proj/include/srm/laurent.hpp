#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>

namespace srm {

// Integer Laurent polynomial in one variable t, kept as a sparse
// exponent -> coefficient map with no zero coefficients stored.
class Laurent {
public:
    Laurent() = default;

    static Laurent monomial(int exponent, long long coeff = 1) {
        Laurent p;
        if (coeff != 0) p.terms_[exponent] = coeff;
        return p;
    }

    static Laurent zero() { return Laurent{}; }
    static Laurent one() { return monomial(0); }

    bool is_zero() const { return terms_.empty(); }

    long long coeff(int exponent) const {
        auto it = terms_.find(exponent);
        return it == terms_.end() ? 0 : it->second;
    }

    Laurent& operator+=(const Laurent& o) {
        for (auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }

    Laurent operator-() const {
        Laurent r;
        for (auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }

    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }

    bool operator==(const Laurent& o) const { return terms_ == o.terms_; }
    bool operator!=(const Laurent& o) const { return !(*this == o); }

    void add_term(int exponent, long long coeff) {
        auto it = terms_.find(exponent);
        if (it == terms_.end()) {
            if (coeff != 0) terms_[exponent] = coeff;
        } else {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    // Sparse text form, ascending exponents: "(-4:1,4:1)"; zero is "()".
    std::string str() const {
        std::ostringstream os;
        os << '(';
        bool first = true;
        for (auto& [e, c] : terms_) {
            if (!first) os << ',';
            os << e << ':' << c;
            first = false;
        }
        os << ')';
        return os.str();
    }

    static Laurent parse(const std::string& s, std::size_t* pos = nullptr);

    const std::map<int, long long>& terms() const { return terms_; }

private:
    std::map<int, long long> terms_;
};

inline Laurent Laurent::parse(const std::string& s, std::size_t* pos) {
    std::size_t i = pos ? *pos : 0;
    auto fail = [&]() -> Laurent { throw std::invalid_argument("bad laurent literal: " + s); };
    if (i >= s.size() || s[i] != '(') return fail();
    ++i;
    Laurent p;
    while (i < s.size() && s[i] != ')') {
        std::size_t used = 0;
        int e = std::stoi(s.substr(i), &used);
        i += used;
        if (i >= s.size() || s[i] != ':') return fail();
        ++i;
        long long c = std::stoll(s.substr(i), &used);
        i += used;
        p.add_term(e, c);
        if (i < s.size() && s[i] == ',') ++i;
    }
    if (i >= s.size() || s[i] != ')') return fail();
    ++i;
    if (pos) *pos = i;
    return p;
}

// Ordered pair of Laurent polynomials; the value type of the invariant f.
struct LaurentPair {
    Laurent first, second;

    bool operator==(const LaurentPair& o) const {
        return first == o.first && second == o.second;
    }
    bool operator!=(const LaurentPair& o) const { return !(*this == o); }

    // Wire form used by the CLI and golden files, e.g. "(-4:1,4:1);(0:1)".
    std::string str() const { return first.str() + ";" + second.str(); }

    static LaurentPair parse(const std::string& s) {
        std::size_t i = 0;
        LaurentPair p;
        p.first = Laurent::parse(s, &i);
        if (i >= s.size() || s[i] != ';') throw std::invalid_argument("bad pair literal: " + s);
        ++i;
        p.second = Laurent::parse(s, &i);
        return p;
    }
};

}  // namespace srm

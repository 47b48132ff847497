#include "kdv/xypoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <vector>

#include "kdv/param_scalar.hpp"

namespace kdv {

XYPoly XYPoly::dy_divided(int i) const {
    if (i == 0) return *this;
    XYPoly r;
    for (const auto& [k, c] : terms_) {
        if (k.second < i) continue;
        // binomial(ye, i) is the divided-derivative factor
        Rat f(1);
        for (int t = 0; t < i; ++t) f *= Rat(k.second - t, t + 1);
        r.add_term(k.first, k.second - i, c * f);
    }
    return r;
}

namespace {

// diff: nullptr for plain polynomials, "dx"/"dy" for form components
void render_monomial(std::ostringstream& os, const Rat& c, long long xe, long long ye,
                     bool leading, const char* diff = nullptr) {
    Rat a = c;
    bool neg = a.sign() < 0;
    if (neg) a = -a;
    if (leading) {
        if (neg) os << "-";
    } else {
        os << (neg ? " - " : " + ");
    }
    bool unit = a.is_one() && (xe > 0 || ye > 0 || diff != nullptr);
    bool printed = false;
    if (!unit) {
        os << a.str();
        printed = true;
    }
    if (xe > 0) {
        if (printed) os << " ";
        os << "x";
        if (xe > 1) os << "^" << xe;
        printed = true;
    }
    if (ye > 0) {
        if (printed) os << " ";
        os << "y";
        if (ye > 1) os << "^" << ye;
        printed = true;
    }
    if (diff) {
        if (printed) os << " ";
        os << diff;
    }
}

} // namespace

std::string XYPoly::str() const {
    if (terms_.empty()) return "0";
    // graded order, y-degree breaking ties, for readable leading terms
    std::vector<std::pair<Key, Rat>> v(terms_.begin(), terms_.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        long long da = a.first.first + a.first.second, db = b.first.first + b.first.second;
        if (da != db) return da < db;
        return a.first < b.first;
    });
    std::ostringstream os;
    bool leading = true;
    for (const auto& [k, c] : v) {
        render_monomial(os, c, k.first, k.second, leading);
        leading = false;
    }
    return os.str();
}

std::string OneForm::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool leading = true;
    auto emit = [&](const XYPoly& p, const char* diff) {
        std::vector<std::pair<XYPoly::Key, Rat>> v(p.terms().begin(), p.terms().end());
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            long long da = a.first.first + a.first.second, db = b.first.first + b.first.second;
            if (da != db) return da < db;
            return a.first < b.first;
        });
        for (const auto& [k, c] : v) {
            render_monomial(os, c, k.first, k.second, leading, diff);
            leading = false;
        }
    };
    emit(adx, "dx");
    emit(ady, "dy");
    return os.str();
}

namespace {

struct Lexer {
    std::string s;
    size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    std::string number() {
        skip_ws();
        size_t start = i;
        while (i < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) {
            ++i;
        }
        return s.substr(start, i - start);
    }
    long long integer() {
        std::string n = number();
        if (n.empty() || n.find('/') != std::string::npos)
            throw InputError("form parser: expected integer exponent in '" + s + "'");
        return std::stoll(n);
    }
    bool accept_word(const std::string& w) {
        skip_ws();
        if (s.compare(i, w.size(), w) == 0) {
            // make sure we are not chopping "dx" out of "dxy" etc.
            size_t end = i + w.size();
            if (end < s.size() && std::isalpha(static_cast<unsigned char>(s[end]))) return false;
            i = end;
            return true;
        }
        return false;
    }
};

// term := [coefficient] {x[^k] | y[^k]} (dx | dy)?
struct Term {
    Rat c{1};
    long long xe = 0, ye = 0;
    int diff = -1; // 0 = dx, 1 = dy, -1 = pure function term
};

Term parse_term(Lexer& lx) {
    Term t;
    lx.skip_ws();
    if (std::isdigit(static_cast<unsigned char>(lx.peek()))) t.c = Rat::parse(lx.number());
    for (;;) {
        if (lx.accept_word("dx")) {
            t.diff = 0;
            break;
        }
        if (lx.accept_word("dy")) {
            t.diff = 1;
            break;
        }
        if (lx.accept_word("x")) {
            long long e = 1;
            if (lx.accept('^')) e = lx.integer();
            t.xe += e;
            continue;
        }
        if (lx.accept_word("y")) {
            long long e = 1;
            if (lx.accept('^')) e = lx.integer();
            t.ye += e;
            continue;
        }
        if (lx.accept('*')) continue;
        break;
    }
    return t;
}

std::vector<Term> parse_terms(const std::string& s) {
    Lexer lx{s};
    std::vector<Term> out;
    bool first = true;
    while (!lx.eof()) {
        int sign = 1;
        if (lx.accept('-'))
            sign = -1;
        else if (lx.accept('+'))
            sign = 1;
        else if (!first)
            throw InputError("form parser: expected '+' or '-' in '" + s + "'");
        Term t = parse_term(lx);
        if (sign < 0) t.c = -t.c;
        out.push_back(t);
        first = false;
    }
    if (out.empty()) throw InputError("form parser: empty expression");
    return out;
}

} // namespace

XYPoly XYPoly::parse(const std::string& s) {
    if (s == "0") return XYPoly();
    XYPoly p;
    for (const Term& t : parse_terms(s)) {
        if (t.diff != -1) throw InputError("polynomial parser: unexpected dx/dy in '" + s + "'");
        p.add_term(t.xe, t.ye, t.c);
    }
    return p;
}

OneForm OneForm::parse(const std::string& s) {
    if (s == "0") return OneForm();
    OneForm w;
    for (const Term& t : parse_terms(s)) {
        if (t.diff == -1)
            throw InputError("form parser: term without dx or dy in '" + s + "'");
        (t.diff == 0 ? w.adx : w.ady).add_term(t.xe, t.ye, t.c);
    }
    return w;
}

std::string ParamScalar::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool leading = true;
    for (int i = 0; i <= degree(); ++i) {
        Rat c = coeff(i);
        if (c.is_zero()) continue;
        bool neg = c.sign() < 0;
        Rat a = neg ? -c : c;
        if (leading) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        if (!a.is_one() || i == 0) {
            os << a.str();
            if (i > 0) os << " ";
        }
        if (i >= 1) os << "a";
        if (i > 1) os << "^" << i;
        leading = false;
    }
    return os.str();
}

} // namespace kdv

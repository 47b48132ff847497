#include "kdv/rational.hpp"

#include <cctype>
#include <ostream>

namespace kdv {

Rat Rat::parse(const std::string& s) {
    if (s.empty()) throw InputError("Rat: empty string");
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
            throw InputError("Rat: bad character in '" + s + "'");
    }
    try {
        mpq_class q(s, 10);
        if (q.get_den() == 0) throw InputError("Rat: zero denominator in '" + s + "'");
        q.canonicalize();
        return Rat(std::move(q));
    } catch (const std::invalid_argument&) {
        throw InputError("Rat: cannot parse '" + s + "'");
    }
}

std::string Rat::str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

} // namespace kdv

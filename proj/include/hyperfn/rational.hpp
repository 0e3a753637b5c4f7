#ifndef HYPERFN_RATIONAL_HPP
#define HYPERFN_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>
#include <string>
#include <vector>

#include "hyperfn/errors.hpp"

namespace hyperfn {

// All cone arithmetic is exact; floating point never decides a membership.
using Rational = boost::multiprecision::mpq_rational;
using RationalVector = std::vector<Rational>;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Parses "p/q" or "p".  The denominator must be positive after normalization.
inline Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(boost::multiprecision::mpz_int(s));
        }
        boost::multiprecision::mpz_int num(s.substr(0, slash));
        boost::multiprecision::mpz_int den(s.substr(slash + 1));
        if (den == 0) throw Error("rational with zero denominator: " + s);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw Error("malformed rational literal: " + s);
    }
}

inline std::string rational_to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline Rational dot(const RationalVector& a, const RationalVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline std::vector<double> to_double_vector(const RationalVector& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(to_double(q));
    return out;
}

}  // namespace hyperfn

#endif

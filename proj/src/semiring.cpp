#include "semiring.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace anyva {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(unsigned n) {
    cpp_int p = 1;
    for (unsigned i = 0; i < n; ++i) p *= 10;
    return p;
}

class ArithRational final : public Semiring {
public:
    SemiringId id() const override { return SemiringId::arith_rational; }
    std::string_view name() const override { return "arith-rational"; }
    SemiringFlags flags() const override { return {true, true, true, false}; }

    Value zero() const override { return Value(Rational(0)); }

    Value add(const Value& a, const Value& b) const override {
        check_operand(a);
        check_operand(b);
        return Value(a.rational() + b.rational());
    }

    Value mul(const Value& a, const Value& b) const override {
        check_operand(a);
        check_operand(b);
        return Value(a.rational() * b.rational());
    }

    bool leq(const Value& a, const Value& b) const override {
        check_operand(a);
        check_operand(b);
        return a.rational() <= b.rational();
    }

    bool is_zero(const Value& v) const override {
        check_operand(v);
        return v.rational() == 0;
    }

    Value parse(std::string_view text) const override { return Value(parse_nonneg_rational(text)); }

    std::string format(const Value& v) const override {
        check_operand(v);
        return format_rational(v.rational());
    }
};

class ArithFloat final : public Semiring {
public:
    SemiringId id() const override { return SemiringId::arith_float; }
    std::string_view name() const override { return "arith-float"; }
    // Floating-point addition rounds, so cancellativity is not declared.
    SemiringFlags flags() const override { return {true, true, false, false}; }

    Value zero() const override { return Value(0.0); }

    Value add(const Value& a, const Value& b) const override {
        check_operand(a);
        check_operand(b);
        return Value(a.real() + b.real());
    }

    Value mul(const Value& a, const Value& b) const override {
        check_operand(a);
        check_operand(b);
        return Value(a.real() * b.real());
    }

    bool leq(const Value& a, const Value& b) const override {
        check_operand(a);
        check_operand(b);
        return a.real() <= b.real();
    }

    bool is_zero(const Value& v) const override {
        check_operand(v);
        return v.real() == 0.0;
    }

    Value parse(std::string_view text) const override {
        std::string s(text);
        char* end = nullptr;
        double d = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size() || s.empty())
            fail_parse("invalid numeric value '" + s + "'");
        if (!(d >= 0.0) || std::isinf(d))
            fail_parse("value must be a finite nonnegative number: '" + s + "'");
        return Value(d);
    }

    std::string format(const Value& v) const override {
        check_operand(v);
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v.real());
        return buf;
    }
};

// max/min on {0,1}: logical-or as + and logical-and as x. Not cancellative
// (max(1,0) = max(1,1)); the order 0 <= 1 is still a partial order.
class BoolMaxMin final : public Semiring {
public:
    SemiringId id() const override { return SemiringId::bool_maxmin; }
    std::string_view name() const override { return "bool-maxmin"; }
    SemiringFlags flags() const override { return {true, true, false, true}; }

    Value zero() const override { return Value(false); }

    Value add(const Value& a, const Value& b) const override {
        check_operand(a);
        check_operand(b);
        return Value(bool(std::max(a.boolean(), b.boolean())));
    }

    Value mul(const Value& a, const Value& b) const override {
        check_operand(a);
        check_operand(b);
        return Value(bool(std::min(a.boolean(), b.boolean())));
    }

    bool leq(const Value& a, const Value& b) const override {
        check_operand(a);
        check_operand(b);
        return a.boolean() <= b.boolean();
    }

    bool is_zero(const Value& v) const override {
        check_operand(v);
        return v.boolean() == 0;
    }

    Value parse(std::string_view text) const override {
        if (text == "0" || text == "false") return Value(false);
        if (text == "1" || text == "true") return Value(true);
        fail_parse("boolean value must be 0/1/true/false, got '" + std::string(text) + "'");
    }

    std::string format(const Value& v) const override {
        check_operand(v);
        return v.boolean() ? "1" : "0";
    }
};

const ArithRational g_arith_rational;
const ArithFloat g_arith_float;
const BoolMaxMin g_bool_maxmin;

} // namespace

const Semiring& semiring(SemiringId id) {
    switch (id) {
    case SemiringId::arith_rational: return g_arith_rational;
    case SemiringId::arith_float: return g_arith_float;
    case SemiringId::bool_maxmin: return g_bool_maxmin;
    }
    fail_usage("unknown semiring id");
}

const Semiring* find_semiring(std::string_view name) {
    if (name == g_arith_rational.name()) return &g_arith_rational;
    if (name == g_arith_float.name()) return &g_arith_float;
    if (name == g_bool_maxmin.name()) return &g_bool_maxmin;
    return nullptr;
}

const Semiring& semiring_by_name(std::string_view name) {
    const Semiring* s = find_semiring(name);
    if (!s)
        fail_parse("unknown semiring '" + std::string(name) + "'");
    return *s;
}

Rational parse_nonneg_rational(std::string_view text) {
    std::string s(text);
    if (s.empty())
        fail_parse("empty numeric value");
    if (s[0] == '-')
        fail_parse("value must be nonnegative: '" + s + "'");
    if (s[0] == '+') s.erase(0, 1);

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string p = s.substr(0, slash), q = s.substr(slash + 1);
        if (p.empty() || q.empty() || p.find_first_not_of("0123456789") != std::string::npos ||
            q.find_first_not_of("0123456789") != std::string::npos)
            fail_parse("invalid rational '" + s + "'");
        cpp_int num(p), den(q);
        if (den == 0)
            fail_parse("zero denominator in '" + s + "'");
        return Rational(num, den);
    }

    // decimal form: digits [. digits] [e[+-]digits]
    std::string mantissa = s;
    long exponent = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        mantissa = s.substr(0, epos);
        std::string es = s.substr(epos + 1);
        if (es.empty())
            fail_parse("invalid exponent in '" + s + "'");
        try {
            exponent = std::stol(es);
        } catch (const std::exception&) {
            fail_parse("invalid exponent in '" + s + "'");
        }
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (char c : mantissa) {
        if (c == '.') {
            if (seen_dot)
                fail_parse("invalid number '" + s + "'");
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            fail_parse("invalid number '" + s + "'");
        }
    }
    if (!seen_digit)
        fail_parse("invalid number '" + s + "'");

    cpp_int num(digits.empty() ? "0" : digits);
    long net = exponent - frac_digits;
    if (net >= 0)
        return Rational(num * pow10(unsigned(net)), 1);
    return Rational(num, pow10(unsigned(-net)));
}

std::string format_rational(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

} // namespace anyva

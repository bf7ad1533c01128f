#ifndef ANYVA_SEMIRING_HPP
#define ANYVA_SEMIRING_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace anyva {

// Exact nonnegative rationals back the "arith-rational" instance so the
// algebraic law suites can assert equality instead of tolerances.
using Rational = boost::multiprecision::cpp_rational;

enum class SemiringId : uint8_t {
    arith_rational = 0,
    arith_float = 1,
    bool_maxmin = 2,
};

// A semiring value. The active alternative is fixed by the instance:
// arith-rational -> Rational, arith-float -> double, bool-maxmin -> uint8_t.
class Value {
public:
    Value() : payload_(Rational(0)) {}
    explicit Value(Rational r) : payload_(std::move(r)) {}
    explicit Value(double d) : payload_(d) {}
    explicit Value(bool b) : payload_(uint8_t(b ? 1 : 0)) {}

    SemiringId instance() const { return SemiringId(payload_.index()); }

    const Rational& rational() const { return std::get<Rational>(payload_); }
    double real() const { return std::get<double>(payload_); }
    uint8_t boolean() const { return std::get<uint8_t>(payload_); }

    bool operator==(const Value& other) const { return payload_ == other.payload_; }
    bool operator!=(const Value& other) const { return !(*this == other); }

private:
    std::variant<Rational, double, uint8_t> payload_;
};

struct SemiringFlags {
    bool totally_ordered = false;
    bool positive = false;
    bool cancellative = false;
    bool mul_idempotent = false;
};

// Commutative semiring with a zero element plus its canonical order
// (a <= b iff a = b or a + c = b for some c). No multiplicative unit is
// required; none of the algorithms use one.
class Semiring {
public:
    virtual ~Semiring() = default;

    virtual SemiringId id() const = 0;
    virtual std::string_view name() const = 0;
    virtual SemiringFlags flags() const = 0;

    virtual Value zero() const = 0;
    virtual Value add(const Value& a, const Value& b) const = 0;
    virtual Value mul(const Value& a, const Value& b) const = 0;

    // Canonical order; for both shipped instances it is total.
    virtual bool leq(const Value& a, const Value& b) const = 0;

    virtual bool is_zero(const Value& v) const = 0;

    virtual Value parse(std::string_view text) const = 0;
    virtual std::string format(const Value& v) const = 0;

    // Strict version of the total order, used for decreasing-weight
    // enumeration. Only meaningful when flags().totally_ordered.
    bool less(const Value& a, const Value& b) const { return leq(a, b) && !(a == b); }

    void check_operand(const Value& v) const {
        if (v.instance() != id())
            fail_usage("semiring instance mismatch: value does not belong to '" + std::string(name()) + "'");
    }
};

// Instances are registered under stable string identifiers used by model
// files and the CLI: "arith-rational", "arith-float", "bool-maxmin".
const Semiring& semiring(SemiringId id);
const Semiring* find_semiring(std::string_view name);
const Semiring& semiring_by_name(std::string_view name); // throws parse error if unknown

// Nonnegative rational parsing: "p/q", integers, and decimal strings
// (optionally with an exponent). Negative inputs are rejected.
Rational parse_nonneg_rational(std::string_view text);
std::string format_rational(const Rational& r); // canonical "p/q"

} // namespace anyva

#endif

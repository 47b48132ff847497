#pragma once

#include <string>

#include "kdv/errors.hpp"

namespace kdv {

// A contact order: a positive integer or infinity (identically
// vanishing pullback).  Totally ordered with infinity above everything.
class Value {
public:
    Value() : v_(0), inf_(true) {}

    static Value finite(long long v) {
        Value r;
        r.v_ = v;
        r.inf_ = false;
        return r;
    }
    static Value infinity() { return Value(); }

    bool is_infinite() const { return inf_; }
    bool is_finite() const { return !inf_; }
    long long get() const {
        if (inf_) throw InternalError("Value: get() on infinity");
        return v_;
    }

    std::string str() const { return inf_ ? std::string("infinity") : std::to_string(v_); }

    friend bool operator==(const Value& a, const Value& b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.v_ == b.v_;
    }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
    friend bool operator<(const Value& a, const Value& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator>(const Value& a, const Value& b) { return b < a; }
    friend bool operator<=(const Value& a, const Value& b) { return !(b < a); }
    friend bool operator>=(const Value& a, const Value& b) { return !(a < b); }

    friend bool operator==(const Value& a, long long b) { return !a.inf_ && a.v_ == b; }
    friend bool operator>(const Value& a, long long b) { return a.inf_ || a.v_ > b; }
    friend bool operator<=(const Value& a, long long b) { return !(a > b); }

private:
    long long v_;
    bool inf_;
};

} // namespace kdv

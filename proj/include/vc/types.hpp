// Shared arithmetic types: arbitrary-precision counts and exact rationals.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <string>

namespace vc {

// Solution counts are exact big integers end to end; entropy takes logs only
// at the reporting boundary.
using BigCount = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Count of assignments achieving the minimum covered-vertex total.  Sums keep
// the smaller size (ties add counts), products add sizes and multiply counts.
// An infeasible value has count 0 and covered = kInfeasibleSize.
struct SizedCount {
    int covered = 0;
    BigCount count = 1;

    static constexpr int kInfeasibleSize = std::numeric_limits<int>::max() / 4;

    static SizedCount infeasible() { return {kInfeasibleSize, BigCount(0)}; }
    static SizedCount one() { return {0, BigCount(1)}; }

    bool feasible() const { return count != 0; }

    SizedCount& operator*=(const SizedCount& o) {
        if (!feasible() || !o.feasible()) { *this = infeasible(); return *this; }
        covered += o.covered;
        count *= o.count;
        return *this;
    }
    friend SizedCount operator*(SizedCount a, const SizedCount& b) { return a *= b; }

    SizedCount& operator+=(const SizedCount& o) {
        if (!o.feasible()) return *this;
        if (!feasible() || o.covered < covered) { *this = o; return *this; }
        if (o.covered == covered) count += o.count;
        return *this;
    }
    friend SizedCount operator+(SizedCount a, const SizedCount& b) { return a += b; }
};

inline std::string to_decimal(const BigCount& c) { return c.str(); }

}  // namespace vc

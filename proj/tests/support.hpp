#pragma once

#include <kb/random.hpp>

#include <gtest/gtest.h>

namespace kbtest {

using namespace kb;

inline Matrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index i = 0;
    for (const auto &row : rows) {
        Index j = 0;
        for (const auto &x : row) { m(i, j++) = x; }
        ++i;
    }
    return m;
}

inline Vector vec(std::initializer_list<Complex> xs) {
    Vector v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (const auto &x : xs) { v(i++) = x; }
    return v;
}

inline KernelRef table(const Matrix &g) { return share(table_kernel(g)); }

template <class F>
ErrorKind kind_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no kb::Error raised";
    return ErrorKind::ConfigError;
}

#define EXPECT_KB_ERROR(kind, stmt) EXPECT_EQ(::kbtest::kind_of([&] { (void)(stmt); }), ::kb::ErrorKind::kind)

inline constexpr Complex I{0.0, 1.0};

}  // namespace kbtest

#pragma once

#include <doctest.h>

#include "volcano/classgroup.hpp"

namespace doctest {
template <>
struct StringMaker<__int128> {
    static String convert(__int128 x) { return volcano::to_string(x).c_str(); }
};
template <>
struct StringMaker<volcano::QuadForm> {
    static String convert(const volcano::QuadForm& f) { return f.str().c_str(); }
};
}  // namespace doctest

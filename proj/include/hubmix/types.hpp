#pragma once

#include <complex>
#include <cstdint>

namespace hubmix {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using Complex = std::complex<double>;

}  // namespace hubmix

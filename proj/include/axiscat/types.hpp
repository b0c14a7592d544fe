#pragma once

#include <complex>
#include <cstddef>

namespace axiscat
{

using cplx = std::complex<double>;

constexpr bool is_power_of_two(std::size_t n)
{
    return n != 0 && (n & (n - 1)) == 0;
}

constexpr std::size_t next_power_of_two(std::size_t n)
{
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

} // namespace axiscat

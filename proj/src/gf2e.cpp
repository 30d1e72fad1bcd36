#include "motif/gf2e.hpp"

#include <array>
#include <cstdio>

namespace motif::gf2e {

std::string FieldElement::hex() const
{
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(bits_));
    return buf;
}

Wide clmul_portable(std::uint64_t a, std::uint64_t b)
{
    // table[i] = a * i for i < 16; high part holds at most 3 bits
    std::array<unsigned __int128, 16> table{};
    const unsigned __int128 wa = a;
    for (unsigned i = 1; i < 16; ++i) {
        unsigned __int128 v = 0;
        for (unsigned bit = 0; bit < 4; ++bit)
            if (i & (1u << bit))
                v ^= wa << bit;
        table[i] = v;
    }

    unsigned __int128 r = 0;
    for (int shift = 60; shift >= 0; shift -= 4) {
        r <<= 4;
        r ^= table[(b >> shift) & 0xF];
    }
    return Wide{static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(r >> 64)};
}

FieldElement mul_reference(FieldElement a, FieldElement b)
{
    std::uint64_t x = a.bits();
    std::uint64_t y = b.bits();
    std::uint64_t r = 0;
    while (y) {
        if (y & 1)
            r ^= x;
        y >>= 1;
        const bool carry = x >> 63;
        x <<= 1;
        if (carry)
            x ^= kModulusLow;
    }
    return FieldElement{r};
}

} // namespace motif::gf2e

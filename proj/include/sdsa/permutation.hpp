#ifndef SDSA_PERMUTATION_HPP_INCLUDED
#define SDSA_PERMUTATION_HPP_INCLUDED

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include <sdsa/aes.hpp>
#include <sdsa/error.hpp>

namespace sdsa
{
    /// First `needed` entries of a keyed Fisher-Yates shuffle of [0, count).
    /// Runs front to back, so the prefix does not depend on `needed`.
    inline std::vector<std::size_t> keyed_permutation_prefix(std::size_t count, std::size_t needed,
                                                             const aes::AesKey& key,
                                                             const aes::Nonce&  nonce)
    {
        if (needed > count)
            throw Error(ErrorCode::NotEnoughBlocks, "requested " + std::to_string(needed)
                                                        + " items out of " + std::to_string(count));
        if (count > std::numeric_limits<std::uint32_t>::max())
            throw Error(ErrorCode::DimensionMismatch, "permutation domain too large");

        std::vector<std::size_t> items(count);
        std::iota(items.begin(), items.end(), std::size_t{0});
        aes::CtrStream stream(key, nonce);
        for (std::size_t i = 0; i < needed; ++i)
        {
            const auto j = i + stream.uniform(static_cast<std::uint32_t>(count - i));
            std::swap(items[i], items[j]);
        }
        items.resize(needed);
        return items;
    }

    /// Domain-separated nonce for a fixed purpose label (at most 12 bytes used).
    inline aes::Nonce purpose_nonce(std::string_view label)
    {
        aes::Nonce nonce{};
        for (std::size_t i = 0; i < nonce.size() && i < label.size(); ++i)
            nonce[i] = static_cast<std::uint8_t>(label[i]);
        return nonce;
    }
} // namespace sdsa

#endif // SDSA_PERMUTATION_HPP_INCLUDED

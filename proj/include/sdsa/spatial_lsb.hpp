#ifndef SDSA_SPATIAL_LSB_HPP_INCLUDED
#define SDSA_SPATIAL_LSB_HPP_INCLUDED

#include <cstdint>
#include <string>

#include <sdsa/aes.hpp>
#include <sdsa/bitstream.hpp>
#include <sdsa/image.hpp>
#include <sdsa/permutation.hpp>

// Spatial-domain baselines: one bit per pixel, pixels visited in a keyed
// pseudo-random order.

namespace sdsa::lsb
{
    inline std::size_t capacity(const GrayImage& cover) noexcept
    {
        return cover.size();
    }

    inline std::vector<std::size_t> pixel_order(const GrayImage& image, std::size_t count,
                                                const aes::AesKey& key)
    {
        return keyed_permutation_prefix(image.size(), count, key, purpose_nonce("lsb-order"));
    }

    namespace detail
    {
        inline void check_capacity(const GrayImage& cover, const BitStream& bits)
        {
            if (bits.size() > cover.size())
                throw Error(ErrorCode::PayloadExceedsCapacity,
                            std::to_string(bits.size()) + " bits exceed " + std::to_string(cover.size())
                                + " pixels");
        }
    } // namespace detail

    inline GrayImage replace_embed(const GrayImage& cover, const BitStream& bits, const aes::AesKey& key)
    {
        detail::check_capacity(cover, bits);
        GrayImage stego = cover;
        const auto order = pixel_order(cover, bits.size(), key);
        for (std::size_t i = 0; i < bits.size(); ++i)
        {
            auto& px = stego.samples()[order[i]];
            px = static_cast<std::uint8_t>((px & 0xFE) | (bits[i] ? 1 : 0));
        }
        return stego;
    }

    /// LSB matching: a mismatched pixel moves by +1 or -1 at random (from a
    /// keystream seeded by `rng_seed`), forced inward at 0 and 255.
    inline GrayImage match_embed(const GrayImage& cover, const BitStream& bits, const aes::AesKey& key,
                                 std::uint64_t rng_seed)
    {
        detail::check_capacity(cover, bits);
        GrayImage  stego = cover;
        const auto order = pixel_order(cover, bits.size(), key);

        aes::Nonce nonce = purpose_nonce("lsb-pm1");
        for (int i = 0; i < 8; ++i)
            nonce[4 + i] = static_cast<std::uint8_t>(rng_seed >> (8 * (7 - i)));
        aes::CtrStream coin(key, nonce);

        std::uint8_t coin_bits = 0;
        int          coin_left = 0;
        for (std::size_t i = 0; i < bits.size(); ++i)
        {
            auto& px = stego.samples()[order[i]];
            if (((px & 1) != 0) == bits[i])
                continue;
            if (coin_left == 0)
            {
                coin_bits = coin.next_byte();
                coin_left = 8;
            }
            const bool up = (coin_bits & 1) != 0;
            coin_bits >>= 1;
            --coin_left;

            if (px == 0)
                px = 1;
            else if (px == 255)
                px = 254;
            else
                px = static_cast<std::uint8_t>(up ? px + 1 : px - 1);
        }
        return stego;
    }

    /// Serves both schemes: after either one the LSB of each visited pixel is the bit.
    inline BitStream extract(const GrayImage& stego, std::size_t bit_count, const aes::AesKey& key)
    {
        if (bit_count > stego.size())
            throw Error(ErrorCode::NotEnoughBlocks, "bit count exceeds pixel count");
        const auto order = pixel_order(stego, bit_count, key);
        BitStream  out;
        for (auto idx : order)
            out.push((stego.samples()[idx] & 1) != 0);
        return out;
    }
} // namespace sdsa::lsb

#endif // SDSA_SPATIAL_LSB_HPP_INCLUDED

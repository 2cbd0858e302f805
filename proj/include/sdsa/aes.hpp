#ifndef SDSA_AES_HPP_INCLUDED
#define SDSA_AES_HPP_INCLUDED

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <sdsa/error.hpp>

// AES (FIPS-197) with CBC/PKCS#7 for messages and a counter-mode keystream for
// keyed pseudo-randomness. Table lookups are not constant time.

namespace sdsa::aes
{
    using Block128 = std::array<std::uint8_t, 16>;
    using Nonce = std::array<std::uint8_t, 12>;

    class AesKey
    {
    public:
        AesKey() = default;

        explicit AesKey(std::span<const std::uint8_t> bytes) : bytes_(bytes.begin(), bytes.end())
        {
            if (bytes_.size() != 16 && bytes_.size() != 24 && bytes_.size() != 32)
                throw Error(ErrorCode::BadKeyLength,
                            "AES keys are 16, 24 or 32 bytes, got " + std::to_string(bytes_.size()));
        }

        std::span<const std::uint8_t> bytes() const noexcept
        {
            return bytes_;
        }
        std::size_t size() const noexcept
        {
            return bytes_.size();
        }
        int rounds() const noexcept
        {
            return static_cast<int>(bytes_.size() / 4) + 6;
        }

        friend bool operator==(const AesKey&, const AesKey&) = default;

    private:
        std::vector<std::uint8_t> bytes_;
    };

    namespace detail
    {
        constexpr std::array<std::uint8_t, 256> sbox = {
            0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7,
            0xab, 0x76, 0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf,
            0x9c, 0xa4, 0x72, 0xc0, 0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5,
            0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15, 0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a,
            0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75, 0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e,
            0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84, 0x53, 0xd1, 0x00, 0xed,
            0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf, 0xd0, 0xef,
            0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
            0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff,
            0xf3, 0xd2, 0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d,
            0x64, 0x5d, 0x19, 0x73, 0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee,
            0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb, 0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c,
            0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79, 0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5,
            0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08, 0xba, 0x78, 0x25, 0x2e,
            0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a, 0x70, 0x3e,
            0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
            0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55,
            0x28, 0xdf, 0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f,
            0xb0, 0x54, 0xbb, 0x16};

        constexpr std::array<std::uint8_t, 256> make_inverse_sbox()
        {
            std::array<std::uint8_t, 256> inv{};
            for (std::size_t i = 0; i < 256; ++i)
                inv[sbox[i]] = static_cast<std::uint8_t>(i);
            return inv;
        }
        constexpr auto inv_sbox = make_inverse_sbox();

        // multiplication by x in GF(2^8) modulo x^8 + x^4 + x^3 + x + 1
        constexpr std::uint8_t xtime(std::uint8_t a) noexcept
        {
            return static_cast<std::uint8_t>((a << 1) ^ ((a & 0x80) ? 0x1b : 0x00));
        }

        constexpr std::uint8_t gmul(std::uint8_t a, std::uint8_t b) noexcept
        {
            std::uint8_t p = 0;
            while (b)
            {
                if (b & 1)
                    p ^= a;
                a = xtime(a);
                b >>= 1;
            }
            return p;
        }

        // state is column-major: byte (row r, column c) lives at index 4c + r
        inline void sub_bytes(Block128& s) noexcept
        {
            for (auto& b : s)
                b = sbox[b];
        }
        inline void inv_sub_bytes(Block128& s) noexcept
        {
            for (auto& b : s)
                b = inv_sbox[b];
        }

        inline void shift_rows(Block128& s) noexcept
        {
            Block128 t = s;
            for (int r = 1; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    s[4 * c + r] = t[4 * ((c + r) % 4) + r];
        }
        inline void inv_shift_rows(Block128& s) noexcept
        {
            Block128 t = s;
            for (int r = 1; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    s[4 * ((c + r) % 4) + r] = t[4 * c + r];
        }

        inline void mix_columns(Block128& s) noexcept
        {
            for (int c = 0; c < 4; ++c)
            {
                auto* col = &s[4 * c];
                const std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
                col[0] = gmul(a0, 2) ^ gmul(a1, 3) ^ a2 ^ a3;
                col[1] = a0 ^ gmul(a1, 2) ^ gmul(a2, 3) ^ a3;
                col[2] = a0 ^ a1 ^ gmul(a2, 2) ^ gmul(a3, 3);
                col[3] = gmul(a0, 3) ^ a1 ^ a2 ^ gmul(a3, 2);
            }
        }
        inline void inv_mix_columns(Block128& s) noexcept
        {
            for (int c = 0; c < 4; ++c)
            {
                auto* col = &s[4 * c];
                const std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
                col[0] = gmul(a0, 14) ^ gmul(a1, 11) ^ gmul(a2, 13) ^ gmul(a3, 9);
                col[1] = gmul(a0, 9) ^ gmul(a1, 14) ^ gmul(a2, 11) ^ gmul(a3, 13);
                col[2] = gmul(a0, 13) ^ gmul(a1, 9) ^ gmul(a2, 14) ^ gmul(a3, 11);
                col[3] = gmul(a0, 11) ^ gmul(a1, 13) ^ gmul(a2, 9) ^ gmul(a3, 14);
            }
        }

        inline void add_round_key(Block128& s, const Block128& k) noexcept
        {
            for (std::size_t i = 0; i < 16; ++i)
                s[i] ^= k[i];
        }
    } // namespace detail

    /// Expanded key: rounds + 1 round keys of 16 bytes each. Immutable once built.
    class RoundKeySchedule
    {
    public:
        explicit RoundKeySchedule(const AesKey& key) : rounds_(key.rounds())
        {
            const std::size_t nk = key.size() / 4;
            const std::size_t total_words = 4 * static_cast<std::size_t>(rounds_ + 1);
            std::vector<std::array<std::uint8_t, 4>> w(total_words);
            for (std::size_t i = 0; i < nk; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                    w[i][j] = key.bytes()[4 * i + j];

            std::uint8_t rcon = 0x01;
            for (std::size_t i = nk; i < total_words; ++i)
            {
                auto temp = w[i - 1];
                if (i % nk == 0)
                {
                    std::rotate(temp.begin(), temp.begin() + 1, temp.end());
                    for (auto& b : temp)
                        b = detail::sbox[b];
                    temp[0] ^= rcon;
                    rcon = detail::xtime(rcon);
                }
                else if (nk > 6 && i % nk == 4)
                {
                    for (auto& b : temp)
                        b = detail::sbox[b];
                }
                for (std::size_t j = 0; j < 4; ++j)
                    w[i][j] = w[i - nk][j] ^ temp[j];
            }

            keys_.resize(static_cast<std::size_t>(rounds_ + 1));
            for (std::size_t r = 0; r < keys_.size(); ++r)
                for (std::size_t c = 0; c < 4; ++c)
                    for (std::size_t j = 0; j < 4; ++j)
                        keys_[r][4 * c + j] = w[4 * r + c][j];
        }

        int rounds() const noexcept
        {
            return rounds_;
        }
        std::size_t size() const noexcept
        {
            return keys_.size();
        }
        const Block128& operator[](std::size_t round) const noexcept
        {
            return keys_[round];
        }

    private:
        int                   rounds_;
        std::vector<Block128> keys_;
    };

    inline RoundKeySchedule key_expand(const AesKey& key)
    {
        return RoundKeySchedule(key);
    }

    inline Block128 encrypt_block(Block128 s, const RoundKeySchedule& ks) noexcept
    {
        detail::add_round_key(s, ks[0]);
        for (int r = 1; r < ks.rounds(); ++r)
        {
            detail::sub_bytes(s);
            detail::shift_rows(s);
            detail::mix_columns(s);
            detail::add_round_key(s, ks[static_cast<std::size_t>(r)]);
        }
        detail::sub_bytes(s);
        detail::shift_rows(s);
        detail::add_round_key(s, ks[static_cast<std::size_t>(ks.rounds())]);
        return s;
    }

    inline Block128 decrypt_block(Block128 s, const RoundKeySchedule& ks) noexcept
    {
        detail::add_round_key(s, ks[static_cast<std::size_t>(ks.rounds())]);
        for (int r = ks.rounds() - 1; r >= 1; --r)
        {
            detail::inv_shift_rows(s);
            detail::inv_sub_bytes(s);
            detail::add_round_key(s, ks[static_cast<std::size_t>(r)]);
            detail::inv_mix_columns(s);
        }
        detail::inv_shift_rows(s);
        detail::inv_sub_bytes(s);
        detail::add_round_key(s, ks[0]);
        return s;
    }

    //=== CBC with PKCS#7; output is iv || ciphertext ===//
    inline std::vector<std::uint8_t> cbc_encrypt(std::span<const std::uint8_t> plaintext,
                                                 const AesKey& key, const Block128& iv)
    {
        const RoundKeySchedule ks(key);
        const std::size_t      pad = 16 - plaintext.size() % 16;

        std::vector<std::uint8_t> out(iv.begin(), iv.end());
        out.reserve(16 + plaintext.size() + pad);

        Block128 chain = iv;
        for (std::size_t offset = 0; offset < plaintext.size() + pad; offset += 16)
        {
            Block128 block;
            for (std::size_t i = 0; i < 16; ++i)
            {
                const std::size_t idx = offset + i;
                const std::uint8_t byte
                    = idx < plaintext.size() ? plaintext[idx] : static_cast<std::uint8_t>(pad);
                block[i] = byte ^ chain[i];
            }
            chain = encrypt_block(block, ks);
            out.insert(out.end(), chain.begin(), chain.end());
        }
        return out;
    }

    inline std::vector<std::uint8_t> cbc_decrypt(std::span<const std::uint8_t> data, const AesKey& key)
    {
        if (data.size() < 32 || data.size() % 16 != 0)
            throw Error(ErrorCode::BadPadding,
                        "CBC input must be iv plus a positive multiple of 16 bytes");
        const RoundKeySchedule ks(key);

        Block128 chain;
        std::copy_n(data.begin(), 16, chain.begin());

        std::vector<std::uint8_t> out;
        out.reserve(data.size() - 16);
        for (std::size_t offset = 16; offset < data.size(); offset += 16)
        {
            Block128 block;
            std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(offset), 16, block.begin());
            auto plain = decrypt_block(block, ks);
            for (std::size_t i = 0; i < 16; ++i)
                out.push_back(plain[i] ^ chain[i]);
            chain = block;
        }

        const std::uint8_t pad = out.back();
        if (pad == 0 || pad > 16)
            throw Error(ErrorCode::BadPadding, "invalid PKCS#7 pad length");
        for (std::size_t i = out.size() - pad; i < out.size(); ++i)
            if (out[i] != pad)
                throw Error(ErrorCode::BadPadding, "inconsistent PKCS#7 padding");
        out.resize(out.size() - pad);
        return out;
    }

    //=== counter mode keystream ===//

    /// AES-CTR keystream: block i is E_K(nonce || be32(i)). Bytes are produced
    /// lazily, so any prefix is identical regardless of how much is drawn.
    class CtrStream
    {
    public:
        CtrStream(const AesKey& key, const Nonce& nonce) : schedule_(key), nonce_(nonce) {}

        std::uint8_t next_byte()
        {
            if (pos_ == 16)
                refill();
            return buffer_[pos_++];
        }

        std::uint32_t next_u32()
        {
            std::uint32_t v = 0;
            for (int i = 0; i < 4; ++i)
                v = (v << 8) | next_byte();
            return v;
        }

        /// Uniform integer in [0, bound) by rejection sampling.
        std::uint32_t uniform(std::uint32_t bound)
        {
            if (bound <= 1)
                return 0;
            const std::uint32_t limit = static_cast<std::uint32_t>(-bound) % bound; // 2^32 mod bound
            for (;;)
            {
                const auto x = next_u32();
                if (x >= limit)
                    return x % bound;
            }
        }

    private:
        void refill()
        {
            Block128 counter_block;
            std::copy(nonce_.begin(), nonce_.end(), counter_block.begin());
            counter_block[12] = static_cast<std::uint8_t>(counter_ >> 24);
            counter_block[13] = static_cast<std::uint8_t>(counter_ >> 16);
            counter_block[14] = static_cast<std::uint8_t>(counter_ >> 8);
            counter_block[15] = static_cast<std::uint8_t>(counter_);
            ++counter_;
            buffer_ = encrypt_block(counter_block, schedule_);
            pos_ = 0;
        }

        RoundKeySchedule schedule_;
        Nonce            nonce_;
        std::uint32_t    counter_ = 0;
        Block128         buffer_{};
        std::size_t      pos_ = 16;
    };

    inline std::vector<std::uint8_t> ctr_keystream(const AesKey& key, const Nonce& nonce,
                                                   std::size_t length)
    {
        CtrStream                 stream(key, nonce);
        std::vector<std::uint8_t> out(length);
        for (auto& b : out)
            b = stream.next_byte();
        return out;
    }

    //=== hex helpers for keys and nonces ===//
    inline std::string to_hex(std::span<const std::uint8_t> bytes)
    {
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        out.reserve(bytes.size() * 2);
        for (auto b : bytes)
        {
            out.push_back(digits[b >> 4]);
            out.push_back(digits[b & 0xF]);
        }
        return out;
    }

    inline std::vector<std::uint8_t> from_hex(std::string_view hex)
    {
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9')
                return c - '0';
            if (c >= 'a' && c <= 'f')
                return c - 'a' + 10;
            if (c >= 'A' && c <= 'F')
                return c - 'A' + 10;
            return -1;
        };
        if (hex.size() % 2 != 0)
            throw Error(ErrorCode::BadKeyLength, "odd number of hex digits");
        std::vector<std::uint8_t> out(hex.size() / 2);
        for (std::size_t i = 0; i < out.size(); ++i)
        {
            const int hi = nibble(hex[2 * i]), lo = nibble(hex[2 * i + 1]);
            if (hi < 0 || lo < 0)
                throw Error(ErrorCode::BadKeyLength, "invalid hex digit");
            out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
        }
        return out;
    }

    inline AesKey key_from_hex(std::string_view hex)
    {
        if (hex.size() != 32 && hex.size() != 48 && hex.size() != 64)
            throw Error(ErrorCode::BadKeyLength, "key must be 32, 48 or 64 hex characters");
        return AesKey(from_hex(hex));
    }
} // namespace sdsa::aes

#endif // SDSA_AES_HPP_INCLUDED

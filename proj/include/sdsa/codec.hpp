#ifndef SDSA_CODEC_HPP_INCLUDED
#define SDSA_CODEC_HPP_INCLUDED

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <zlib.h>

#include <sdsa/aes.hpp>
#include <sdsa/bitstream.hpp>
#include <sdsa/error.hpp>
#include <sdsa/image_io.hpp>
#include <sdsa/permutation.hpp>

// Payload frame, all multi-byte fields big-endian, serialized MSB first:
//
//   "SDSA" | version (1) | length (4) | crc32 (4) | iv || cbc ciphertext
//
// `length` counts the ciphertext bytes including the IV; the CRC (IEEE) covers
// the same bytes.

namespace sdsa::codec
{
    inline constexpr std::array<std::uint8_t, 4> magic = {'S', 'D', 'S', 'A'};
    inline constexpr std::uint8_t                version = 0x01;
    inline constexpr std::size_t                 header_bytes = 13;
    inline constexpr std::size_t                 header_bits = header_bytes * 8;

    struct FrameHeader
    {
        std::uint32_t length = 0;
        std::uint32_t crc = 0;
    };

    inline std::uint32_t crc32_ieee(std::span<const std::uint8_t> bytes) noexcept
    {
        return static_cast<std::uint32_t>(
            ::crc32(::crc32(0L, Z_NULL, 0), bytes.data(), static_cast<uInt>(bytes.size())));
    }

    /// Deterministic IV: CBC-MAC of the length-prefixed plaintext under a key
    /// derived from `key`. Identical messages give identical frames, distinct
    /// messages get unrelated IVs.
    inline aes::Block128 synthetic_iv(std::span<const std::uint8_t> plaintext, const aes::AesKey& key)
    {
        const auto mac_key = aes::AesKey(aes::ctr_keystream(key, purpose_nonce("iv-derive"), key.size()));
        const aes::RoundKeySchedule ks(mac_key);

        std::vector<std::uint8_t> message(8);
        const std::uint64_t       len = plaintext.size();
        for (int i = 0; i < 8; ++i)
            message[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(len >> (8 * (7 - i)));
        message.insert(message.end(), plaintext.begin(), plaintext.end());
        message.resize((message.size() + 15) / 16 * 16, 0);

        aes::Block128 state{};
        for (std::size_t off = 0; off < message.size(); off += 16)
        {
            for (std::size_t i = 0; i < 16; ++i)
                state[i] ^= message[off + i];
            state = aes::encrypt_block(state, ks);
        }
        return state;
    }

    inline std::size_t frame_bytes(std::size_t plaintext_size) noexcept
    {
        return header_bytes + 16 + (plaintext_size / 16 + 1) * 16;
    }

    inline std::vector<std::uint8_t> build_frame(std::span<const std::uint8_t> ciphertext)
    {
        std::vector<std::uint8_t> frame(magic.begin(), magic.end());
        frame.push_back(version);
        auto put32 = [&](std::uint32_t v) {
            for (int i = 3; i >= 0; --i)
                frame.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        };
        put32(static_cast<std::uint32_t>(ciphertext.size()));
        put32(crc32_ieee(ciphertext));
        frame.insert(frame.end(), ciphertext.begin(), ciphertext.end());
        return frame;
    }

    inline BitStream encode_payload(std::span<const std::uint8_t> plaintext, const aes::AesKey& key,
                                    const aes::Block128& iv)
    {
        if (plaintext.empty())
            throw Error(ErrorCode::EmptyPayload, "plaintext must not be empty");
        return BitStream::from_bytes(build_frame(aes::cbc_encrypt(plaintext, key, iv)));
    }

    inline BitStream encode_payload(std::span<const std::uint8_t> plaintext, const aes::AesKey& key)
    {
        return encode_payload(plaintext, key, synthetic_iv(plaintext, key));
    }

    /// Parses the first 13 bytes; throws BadMagic on anything that is not a frame.
    inline FrameHeader parse_header(const BitStream& bits)
    {
        if (bits.size() < header_bits)
            throw Error(ErrorCode::BadMagic, "fewer bits than a frame header");
        const auto bytes = bits.prefix(header_bits).to_bytes();
        if (!std::equal(magic.begin(), magic.end(), bytes.begin()) || bytes[4] != version)
            throw Error(ErrorCode::BadMagic, "no SDSA frame (wrong parameters or not a stego image)");
        auto get32 = [&](std::size_t at) {
            return std::uint32_t(bytes[at]) << 24 | std::uint32_t(bytes[at + 1]) << 16
                   | std::uint32_t(bytes[at + 2]) << 8 | std::uint32_t(bytes[at + 3]);
        };
        FrameHeader header{get32(5), get32(9)};
        if (header.length < 32 || header.length % 16 != 0)
            throw Error(ErrorCode::BadMagic, "implausible ciphertext length " + std::to_string(header.length));
        return header;
    }

    inline std::size_t frame_bits(const FrameHeader& header) noexcept
    {
        return (header_bytes + header.length) * 8;
    }

    inline std::vector<std::uint8_t> decode_payload(const BitStream& bits, const aes::AesKey& key)
    {
        const auto header = parse_header(bits);
        if (bits.size() < frame_bits(header))
            throw Error(ErrorCode::BadCrc, "frame truncated");
        const auto bytes = bits.prefix(frame_bits(header)).to_bytes();
        const std::span<const std::uint8_t> ciphertext(bytes.data() + header_bytes, header.length);
        if (crc32_ieee(ciphertext) != header.crc)
            throw Error(ErrorCode::BadCrc, "ciphertext checksum mismatch");
        return aes::cbc_decrypt(ciphertext, key);
    }

    //=== text files ===//
    inline BitStream encode_text_file(const std::filesystem::path& path, const aes::AesKey& key)
    {
        return encode_payload(sdsa::detail::read_file(path), key);
    }

    inline void decode_to_text_file(const BitStream& bits, const aes::AesKey& key, const std::filesystem::path& path)
    {
        const auto plaintext = decode_payload(bits, key);
        sdsa::detail::write_atomically(path, [&](const auto& tmp) {
            sdsa::detail::write_bytes(tmp, plaintext.data(), plaintext.size());
        });
    }
} // namespace sdsa::codec

#endif // SDSA_CODEC_HPP_INCLUDED

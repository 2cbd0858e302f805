#ifndef SDSA_BITSTREAM_HPP_INCLUDED
#define SDSA_BITSTREAM_HPP_INCLUDED

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <sdsa/error.hpp>

namespace sdsa
{
    /// Ordered bits, one per element, with a read cursor. Bytes serialize MSB first.
    class BitStream
    {
    public:
        BitStream() = default;
        explicit BitStream(std::vector<std::uint8_t> bits) : bits_(std::move(bits))
        {
            for (auto& b : bits_)
                b = b ? 1 : 0;
        }

        static BitStream from_bytes(std::span<const std::uint8_t> bytes)
        {
            BitStream out;
            out.bits_.reserve(bytes.size() * 8);
            for (auto byte : bytes)
                out.push_byte(byte);
            return out;
        }

        void push(bool bit)
        {
            bits_.push_back(bit ? 1 : 0);
        }

        void push_byte(std::uint8_t byte)
        {
            for (int i = 7; i >= 0; --i)
                bits_.push_back(static_cast<std::uint8_t>((byte >> i) & 1));
        }

        std::size_t size() const noexcept
        {
            return bits_.size();
        }
        bool empty() const noexcept
        {
            return bits_.empty();
        }
        bool operator[](std::size_t i) const noexcept
        {
            return bits_[i] != 0;
        }
        std::span<const std::uint8_t> bits() const noexcept
        {
            return bits_;
        }

        //=== cursor ===//
        std::size_t position() const noexcept
        {
            return cursor_;
        }
        std::size_t remaining() const noexcept
        {
            return bits_.size() - cursor_;
        }
        void rewind() noexcept
        {
            cursor_ = 0;
        }

        bool read()
        {
            if (cursor_ >= bits_.size())
                throw Error(ErrorCode::NotEnoughBlocks, "bit stream exhausted");
            return bits_[cursor_++] != 0;
        }

        std::uint8_t read_byte()
        {
            std::uint8_t byte = 0;
            for (int i = 0; i < 8; ++i)
                byte = static_cast<std::uint8_t>(byte << 1 | (read() ? 1 : 0));
            return byte;
        }

        /// Packs all bits into bytes; a trailing partial byte is zero padded.
        std::vector<std::uint8_t> to_bytes() const
        {
            std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
            for (std::size_t i = 0; i < bits_.size(); ++i)
                if (bits_[i])
                    out[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
            return out;
        }

        BitStream prefix(std::size_t count) const
        {
            BitStream out;
            out.bits_.assign(bits_.begin(),
                             bits_.begin() + static_cast<std::ptrdiff_t>(std::min(count, bits_.size())));
            return out;
        }

        friend bool operator==(const BitStream& a, const BitStream& b) noexcept
        {
            return a.bits_ == b.bits_;
        }

    private:
        std::vector<std::uint8_t> bits_;
        std::size_t               cursor_ = 0;
    };

    /// Fraction of positions where `a` and `b` differ; positions missing from
    /// `b` count as errors against a zero bit.
    inline double bit_error_rate(const BitStream& reference, const BitStream& received)
    {
        if (reference.empty())
            return 0.0;
        std::size_t errors = 0;
        for (std::size_t i = 0; i < reference.size(); ++i)
        {
            const bool got = i < received.size() ? received[i] : false;
            errors += (got != reference[i]) ? 1 : 0;
        }
        return static_cast<double>(errors) / static_cast<double>(reference.size());
    }
} // namespace sdsa

#endif // SDSA_BITSTREAM_HPP_INCLUDED

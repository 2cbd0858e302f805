#include <fstream>
#include <optional>
#include <string>

#include <gtest/gtest.h>

#include <sdsa/bitstream.hpp>
#include <sdsa/codec.hpp>

#include "support.hpp"

using namespace sdsa;

namespace
{
    std::vector<std::uint8_t> bytes_of(std::string_view s)
    {
        return {s.begin(), s.end()};
    }

    aes::AesKey test_key(std::uint8_t seed = 1)
    {
        return aes::AesKey(std::vector<std::uint8_t>(16, seed));
    }

    std::optional<ErrorCode> decode_error(const BitStream& bits, const aes::AesKey& key)
    {
        try
        {
            codec::decode_payload(bits, key);
        }
        catch (const Error& e)
        {
            return e.code();
        }
        return std::nullopt;
    }
} // namespace

TEST(BitStream, MsbFirstAndBack)
{
    const auto bits = BitStream::from_bytes(std::vector<std::uint8_t>{0xa0, 0x01});
    ASSERT_EQ(bits.size(), 16u);
    EXPECT_TRUE(bits[0]);
    EXPECT_FALSE(bits[1]);
    EXPECT_TRUE(bits[2]);
    EXPECT_TRUE(bits[15]);
    EXPECT_EQ(bits.to_bytes(), (std::vector<std::uint8_t>{0xa0, 0x01}));
    EXPECT_EQ(bits.prefix(4).size(), 4u);
}

TEST(BitStream, CursorReads)
{
    auto bits = BitStream::from_bytes(std::vector<std::uint8_t>{0x5a});
    EXPECT_EQ(bits.read_byte(), 0x5a);
    EXPECT_THROW(bits.read(), Error);
}

TEST(BitStream, ErrorRate)
{
    const auto a = test::random_bits(1000, 1);
    EXPECT_EQ(bit_error_rate(a, a), 0.0);
    auto flipped = BitStream();
    for (std::size_t i = 0; i < a.size(); ++i)
        flipped.push(i < 250 ? !a[i] : a[i]);
    EXPECT_DOUBLE_EQ(bit_error_rate(a, flipped), 0.25);
    EXPECT_NEAR(bit_error_rate(a, test::random_bits(1000, 2)), 0.5, 0.06);
}

TEST(Crc32, CheckValue)
{
    // CRC-32/IEEE check value over "123456789"
    EXPECT_EQ(codec::crc32_ieee(bytes_of("123456789")), 0xcbf43926u);
}

TEST(Codec, FrameSizes)
{
    const auto key = test_key();
    EXPECT_EQ(codec::encode_payload(std::vector<std::uint8_t>(25, 'a'), key).size(), 61u * 8);
    EXPECT_EQ(codec::encode_payload(std::vector<std::uint8_t>(1, 'a'), key).size(), 45u * 8);
    for (std::size_t n : {1, 15, 16, 17, 100, 4096})
        EXPECT_EQ(codec::encode_payload(std::vector<std::uint8_t>(n, 'x'), key).size(),
                  codec::frame_bytes(n) * 8);
}

TEST(Codec, HeaderLayout)
{
    const auto msg = bytes_of("Meet at the north gate");
    const auto frame = codec::encode_payload(msg, test_key()).to_bytes();
    EXPECT_EQ(std::string(frame.begin(), frame.begin() + 4), "SDSA");
    EXPECT_EQ(frame[4], codec::version);
    const std::uint32_t length = std::uint32_t(frame[5]) << 24 | frame[6] << 16 | frame[7] << 8 | frame[8];
    EXPECT_EQ(length, frame.size() - codec::header_bytes);
    const std::uint32_t crc = std::uint32_t(frame[9]) << 24 | frame[10] << 16 | frame[11] << 8 | frame[12];
    EXPECT_EQ(crc, codec::crc32_ieee(std::span(frame).subspan(codec::header_bytes)));
}

TEST(Codec, RoundTripAndDeterminism)
{
    std::mt19937_64 rng(3);
    for (std::size_t n : {1, 2, 15, 16, 31, 33, 500, 4096})
    {
        const auto msg = test::random_bytes(rng, n);
        const auto key = test_key(static_cast<std::uint8_t>(n));
        const auto bits = codec::encode_payload(msg, key);
        EXPECT_EQ(bits, codec::encode_payload(msg, key));
        EXPECT_EQ(codec::decode_payload(bits, key), msg);
    }
}

TEST(Codec, SyntheticIvSeparatesMessages)
{
    const auto key = test_key();
    EXPECT_NE(codec::synthetic_iv(bytes_of("a"), key), codec::synthetic_iv(bytes_of("b"), key));
    EXPECT_NE(codec::synthetic_iv(bytes_of("a"), key), codec::synthetic_iv(bytes_of("a"), test_key(2)));
    // the length prefix separates messages that differ only in trailing zeros
    EXPECT_NE(codec::synthetic_iv(std::vector<std::uint8_t>(3, 0), key),
              codec::synthetic_iv(std::vector<std::uint8_t>(4, 0), key));
}

TEST(Codec, EmptyPlaintextRejected)
{
    EXPECT_THROW(codec::encode_payload({}, test_key()), Error);
}

TEST(Codec, TamperedCiphertextIsBadCrc)
{
    const auto bits = codec::encode_payload(bytes_of("payload under test"), test_key());
    for (std::size_t pos : {codec::header_bits, codec::header_bits + 77, bits.size() - 1})
    {
        BitStream tampered;
        for (std::size_t i = 0; i < bits.size(); ++i)
            tampered.push(i == pos ? !bits[i] : bits[i]);
        EXPECT_EQ(decode_error(tampered, test_key()), ErrorCode::BadCrc);
    }
    EXPECT_EQ(decode_error(bits.prefix(bits.size() - 8), test_key()), ErrorCode::BadCrc);
}

TEST(Codec, WrongKeyIsBadPadding)
{
    const auto bits = codec::encode_payload(bytes_of("payload under test"), test_key());
    int        bad_padding = 0;
    for (std::uint8_t k = 2; k < 34; ++k)
        bad_padding += decode_error(bits, test_key(k)) == ErrorCode::BadPadding ? 1 : 0;
    EXPECT_GE(bad_padding, 30);
}

TEST(Codec, RandomBitsAreBadMagic)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed)
        EXPECT_EQ(decode_error(test::random_bits(2000, seed), test_key()), ErrorCode::BadMagic);
    EXPECT_EQ(decode_error(test::random_bits(20, 99), test_key()), ErrorCode::BadMagic);
}

TEST(Codec, TextFileRoundTrip)
{
    test::ScratchDir  dir;
    const std::string text = "line one\nline two\n\x01\xff binary tail";
    std::ofstream(dir / "in.txt", std::ios::binary) << text;
    const auto bits = codec::encode_text_file(dir / "in.txt", test_key());
    codec::decode_to_text_file(bits, test_key(), dir / "out.txt");
    EXPECT_EQ(detail::read_file(dir / "out.txt"), bytes_of(text));

    std::ofstream(dir / "empty.txt").close();
    EXPECT_THROW(codec::encode_text_file(dir / "empty.txt", test_key()), Error);
}

TEST(Codec, FailedDecodeWritesNothing)
{
    test::ScratchDir dir;
    const auto       bits = codec::encode_payload(bytes_of("x"), test_key());
    EXPECT_THROW(codec::decode_to_text_file(bits, test_key(9), dir / "out.txt"), Error);
    EXPECT_FALSE(std::filesystem::exists(dir / "out.txt"));
}

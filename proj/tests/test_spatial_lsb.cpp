#include <gtest/gtest.h>

#include <sdsa/spatial_lsb.hpp>

#include "support.hpp"

using namespace sdsa;

namespace
{
    const aes::AesKey key(std::vector<std::uint8_t>(16, 0x3c));

    BitStream single(bool bit)
    {
        BitStream b;
        b.push(bit);
        return b;
    }
} // namespace

TEST(LsbReplace, SinglePixel)
{
    EXPECT_EQ(lsb::replace_embed(GrayImage(1, 1, 254), single(true), key).at(0, 0), 255);
    EXPECT_EQ(lsb::replace_embed(GrayImage(1, 1, 255), single(false), key).at(0, 0), 254);
}

TEST(LsbReplace, MatchingPayloadIsFixedPoint)
{
    const auto cover = test::random_gray(40, 40, 1);
    const auto order = lsb::pixel_order(cover, 900, key);
    BitStream  bits;
    for (auto idx : order)
        bits.push((cover.samples()[idx] & 1) != 0);
    EXPECT_EQ(lsb::replace_embed(cover, bits, key), cover);
    EXPECT_EQ(lsb::match_embed(cover, bits, key, 7), cover);
}

TEST(LsbReplace, RoundTripAndUpperBitsKept)
{
    const auto cover = test::random_gray(100, 100, 2);
    const auto bits = test::random_bits(1000, 3);
    const auto stego = lsb::replace_embed(cover, bits, key);
    EXPECT_EQ(lsb::extract(stego, 1000, key), bits);
    for (std::size_t i = 0; i < cover.size(); ++i)
        EXPECT_EQ(cover.samples()[i] & 0xFE, stego.samples()[i] & 0xFE);
}

TEST(LsbMatch, BoundaryAndMatchingPixels)
{
    EXPECT_EQ(lsb::match_embed(GrayImage(1, 1, 7), single(true), key, 1).at(0, 0), 7);
    EXPECT_EQ(lsb::match_embed(GrayImage(1, 1, 0), single(true), key, 1).at(0, 0), 1);
    EXPECT_EQ(lsb::match_embed(GrayImage(1, 1, 255), single(false), key, 1).at(0, 0), 254);
}

TEST(LsbMatch, RoundTripWithUnitChanges)
{
    const auto cover = test::random_gray(128, 128, 4);
    const auto bits = test::random_bits(10000, 5);
    const auto stego = lsb::match_embed(cover, bits, key, 99);
    EXPECT_EQ(lsb::extract(stego, bits.size(), key), bits);
    std::size_t up = 0, down = 0;
    for (std::size_t i = 0; i < cover.size(); ++i)
    {
        const int d = int(stego.samples()[i]) - int(cover.samples()[i]);
        ASSERT_LE(std::abs(d), 1);
        up += d > 0;
        down += d < 0;
    }
    // about half of the 10,000 pixels need a change, split evenly by direction
    EXPECT_NEAR(double(up + down), 5000.0, 250.0);
    EXPECT_NEAR(double(up) / double(up + down), 0.5, 0.05);
}

TEST(LsbMatch, SeedChangesDirectionsOnly)
{
    const auto cover = test::random_gray(64, 64, 6);
    const auto bits = test::random_bits(3000, 7);
    const auto a = lsb::match_embed(cover, bits, key, 1);
    const auto b = lsb::match_embed(cover, bits, key, 2);
    EXPECT_NE(a, b);
    EXPECT_EQ(lsb::extract(a, 3000, key), lsb::extract(b, 3000, key));
    EXPECT_EQ(a, lsb::match_embed(cover, bits, key, 1));
}

TEST(LsbExtract, WrongKeyIsUncorrelated)
{
    const auto cover = test::random_gray(128, 128, 8);
    const auto bits = test::random_bits(10000, 9);
    const auto stego = lsb::replace_embed(cover, bits, key);
    const aes::AesKey other(std::vector<std::uint8_t>(16, 0x3d));
    EXPECT_NEAR(bit_error_rate(bits, lsb::extract(stego, 10000, other)), 0.5, 0.05);
}

TEST(LsbCapacity, Exceeded)
{
    const GrayImage cover(10, 10, 5);
    EXPECT_EQ(lsb::capacity(cover), 100u);
    EXPECT_THROW(lsb::replace_embed(cover, test::random_bits(101, 1), key), Error);
    EXPECT_THROW(lsb::match_embed(cover, test::random_bits(101, 1), key, 0), Error);
}

#ifndef SDSA_TESTS_SUPPORT_HPP_INCLUDED
#define SDSA_TESTS_SUPPORT_HPP_INCLUDED

#include <array>
#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <sdsa/image_io.hpp>
#include <sdsa/sdsa.hpp>

namespace sdsa::test
{
    inline std::filesystem::path fixture(const std::string& name)
    {
        return std::filesystem::path(SDSA_FIXTURE_DIR) / name;
    }

    // Five 512x512 grayscale photographs with different texture statistics.
    inline constexpr std::array<const char*, 5> corpus_names = {"camera", "astronaut", "moon", "brick", "ihc"};

    inline GrayImage corpus_image(const std::string& name)
    {
        return load_gray(fixture(name + ".png"));
    }

    inline std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t count)
    {
        std::vector<std::uint8_t> out(count);
        for (auto& b : out)
            b = static_cast<std::uint8_t>(rng());
        return out;
    }

    inline GrayImage random_gray(std::size_t w, std::size_t h, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        return GrayImage(w, h, random_bytes(rng, w * h));
    }

    inline BitStream random_bits(std::size_t count, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        BitStream       out;
        for (std::size_t i = 0; i < count; ++i)
            out.push((rng() & 1) != 0);
        return out;
    }

    inline StegoParams random_params(std::mt19937_64& rng)
    {
        StegoParams p;
        p.key = aes::AesKey(random_bytes(rng, 16));
        const auto nonce = random_bytes(rng, 12);
        std::copy(nonce.begin(), nonce.end(), p.selection_nonce.begin());
        return p;
    }

    /// Fresh directory under the system temp dir, removed on destruction.
    class ScratchDir
    {
    public:
        ScratchDir()
        {
            static std::atomic<int> counter{0};
            std::random_device      rd;
            path_ = std::filesystem::temp_directory_path()
                    / ("sdsa-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
            std::filesystem::create_directories(path_);
        }
        ~ScratchDir()
        {
            std::error_code ec;
            std::filesystem::remove_all(path_, ec);
        }
        ScratchDir(const ScratchDir&) = delete;
        ScratchDir& operator=(const ScratchDir&) = delete;

        std::filesystem::path operator/(const std::string& name) const
        {
            return path_ / name;
        }
        const std::filesystem::path& path() const noexcept
        {
            return path_;
        }

    private:
        std::filesystem::path path_;
    };
} // namespace sdsa::test

#endif // SDSA_TESTS_SUPPORT_HPP_INCLUDED

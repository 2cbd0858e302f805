#ifndef SDSA_ANALYSIS_HPP_INCLUDED
#define SDSA_ANALYSIS_HPP_INCLUDED

#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <sdsa/bitstream.hpp>
#include <sdsa/dct.hpp>
#include <sdsa/image.hpp>
#include <sdsa/image_io.hpp>
#include <sdsa/sdsa.hpp>

namespace sdsa::analysis
{
    /// 10 log10(255^2 / MSE); +infinity for identical images.
    inline double psnr(const GrayImage& a, const GrayImage& b)
    {
        if (a.width() != b.width() || a.height() != b.height())
            throw Error(ErrorCode::DimensionMismatch, "PSNR needs images of equal size");
        double sum = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            const double d = double(a.samples()[i]) - double(b.samples()[i]);
            sum += d * d;
        }
        if (sum == 0.0)
            return std::numeric_limits<double>::infinity();
        const double mse = sum / static_cast<double>(a.size());
        return 10.0 * std::log10(255.0 * 255.0 / mse);
    }

    inline double psnr(const AnyImage& a, const AnyImage& b)
    {
        if (a.index() != b.index())
            throw Error(ErrorCode::DimensionMismatch, "PSNR needs images of the same kind");
        if (const auto* ga = std::get_if<GrayImage>(&a))
            return psnr(*ga, std::get<GrayImage>(b));
        // color: MSE pooled over the three channels
        const auto& ca = std::get<ColorImage>(a);
        const auto& cb = std::get<ColorImage>(b);
        if (ca.width() != cb.width() || ca.height() != cb.height())
            throw Error(ErrorCode::DimensionMismatch, "PSNR needs images of equal size");
        double sum = 0.0;
        for (auto [pa, pb] : {std::pair{&ca.r, &cb.r}, std::pair{&ca.g, &cb.g}, std::pair{&ca.b, &cb.b}})
            for (std::size_t i = 0; i < pa->size(); ++i)
            {
                const double d = double(pa->samples()[i]) - double(pb->samples()[i]);
                sum += d * d;
            }
        if (sum == 0.0)
            return std::numeric_limits<double>::infinity();
        return 10.0 * std::log10(255.0 * 255.0 / (sum / (3.0 * static_cast<double>(ca.r.size()))));
    }

    //=== calibration features ===//
    inline constexpr int histogram_min = -8;
    inline constexpr int histogram_max = 8;
    inline constexpr std::size_t histogram_bins = histogram_max - histogram_min + 1;

    inline constexpr std::array<std::pair<std::size_t, std::size_t>, 9> feature_modes = {
        {{0, 1}, {1, 0}, {1, 1}, {0, 2}, {2, 0}, {1, 2}, {2, 1}, {0, 3}, {3, 0}}};

    /// Per-mode histograms of quantized 8x8-grid DCT values, clamped into [-8, 8].
    struct FeatureVector
    {
        std::array<std::array<double, histogram_bins>, feature_modes.size()> histograms{};
    };

    /// Quantization used by the analyst: the standard 8x8 table at `quality`.
    inline FeatureVector features(const GrayImage& image, int quality = 70)
    {
        const auto grid = partition(image, 8, 8);
        const auto q = derive_q(8, 8, quality);
        const DctPlan plan(8, 8);

        FeatureVector f;
        RealBlock     block(8, 8);
        for (std::size_t b = 0; b < grid.block_count(); ++b)
        {
            auto [r0, c0] = grid.origin(b);
            for (std::size_t r = 0; r < 8; ++r)
                for (std::size_t c = 0; c < 8; ++c)
                    block(r, c) = double(image.at(r0 + r, c0 + c)) - 128.0;
            const auto coeffs = plan.forward(block);
            for (std::size_t k = 0; k < feature_modes.size(); ++k)
            {
                auto [i, j] = feature_modes[k];
                const auto level = static_cast<int>(std::round(coeffs(i, j) / q(i, j)));
                const auto bin = std::clamp(level, histogram_min, histogram_max) - histogram_min;
                f.histograms[k][static_cast<std::size_t>(bin)] += 1.0;
            }
        }
        const double total = static_cast<double>(grid.block_count());
        for (auto& h : f.histograms)
            for (auto& v : h)
                v /= total;
        return f;
    }

    inline double l1_distance(const FeatureVector& a, const FeatureVector& b) noexcept
    {
        double d = 0.0;
        for (std::size_t k = 0; k < a.histograms.size(); ++k)
            for (std::size_t i = 0; i < histogram_bins; ++i)
                d += std::abs(a.histograms[k][i] - b.histograms[k][i]);
        return d;
    }

    /// The analyst's estimate of the cover: drop 4 rows and 4 columns so the
    /// 8x8 grid no longer lines up with any embedding done on it.
    inline GrayImage calibrate(const GrayImage& image)
    {
        if (image.width() < 12 || image.height() < 12)
            throw Error(ErrorCode::ImageTooSmall, "calibration needs at least 12x12 pixels");
        return crop(image, {4, 4}).inner;
    }

    struct CalibrationReport
    {
        double d_stego = 0.0; // L1(features(image), features(calibrate(image)))
        double psnr_db = 0.0; // against the cover, when known
    };

    inline double calibration_distance(const GrayImage& image, int quality = 70)
    {
        return l1_distance(features(image, quality), features(calibrate(image), quality));
    }

    struct DetectabilityReport
    {
        double            d_cover = 0.0;
        CalibrationReport synchronized;
        CalibrationReport sdsa;
        std::size_t       payload_bits = 0;
    };

    /// Same params with the grid forced onto the 8x8 JPEG lattice.
    inline StegoParams synchronized_variant(const StegoParams& params)
    {
        StegoParams sync = params;
        sync.offsets = {0, 0};
        sync.m = 8;
        sync.n = 8;
        if (!std::holds_alternative<int>(sync.q_source))
            sync.q_source = 70;
        return sync;
    }

    /// Pseudo-random payload bits, reproducible from `params`.
    inline BitStream keyed_payload(const StegoParams& params, std::size_t bits)
    {
        const auto bytes = aes::ctr_keystream(params.key, purpose_nonce("payload"), (bits + 7) / 8);
        return BitStream::from_bytes(bytes).prefix(bits);
    }

    /// Embeds the same payload with the synchronized 8x8 grid and with `params`,
    /// and measures each result's calibration distance. `payload_rate` is in
    /// bits per usable coefficient of the smaller of the two capacities.
    inline DetectabilityReport detectability(const GrayImage& cover, const StegoParams& params, double payload_rate)
    {
        const auto sync = synchronized_variant(params);
        const int  quality = std::holds_alternative<int>(params.q_source) ? std::get<int>(params.q_source) : 70;

        DetectabilityReport report;
        const auto cap = std::min(capacity(cover, sync), capacity(cover, params));
        if (payload_rate < 0.0 || payload_rate > 1.0)
            throw Error(ErrorCode::PayloadExceedsCapacity, "payload rate must lie in [0, 1]");
        report.payload_bits = static_cast<std::size_t>(std::floor(payload_rate * static_cast<double>(cap)));
        report.d_cover = calibration_distance(cover, quality);

        const auto payload = keyed_payload(params, report.payload_bits);
        for (auto [p, out] : {std::pair{&sync, &report.synchronized}, std::pair{&params, &report.sdsa}})
        {
            const auto stego = sdsa_embed(cover, *p, payload);
            out->d_stego = calibration_distance(stego, quality);
            out->psnr_db = psnr(cover, stego);
        }
        return report;
    }

    /// Mean of `trials` detectability runs whose keys and nonces are derived
    /// from `params`. A single run is dominated by the sampling difference
    /// between the two grids; the mean isolates the embedding's contribution.
    inline DetectabilityReport detectability_mean(const GrayImage& cover, const StegoParams& params,
                                                  double payload_rate, std::size_t trials)
    {
        if (trials == 0)
            return detectability(cover, params, payload_rate);
        DetectabilityReport mean;
        for (std::size_t t = 0; t < trials; ++t)
        {
            StegoParams trial = params;
            auto        nonce = purpose_nonce("trial");
            for (int i = 0; i < 4; ++i)
                nonce[8 + i] = static_cast<std::uint8_t>(t >> (8 * (3 - i)));
            const auto material = aes::ctr_keystream(params.key, nonce, params.key.size() + 12);
            trial.key = aes::AesKey(std::span(material).first(params.key.size()));
            std::copy_n(material.end() - 12, 12, trial.selection_nonce.begin());

            const auto r = detectability(cover, trial, payload_rate);
            mean.d_cover = r.d_cover;
            mean.payload_bits = r.payload_bits;
            mean.synchronized.d_stego += r.synchronized.d_stego / double(trials);
            mean.synchronized.psnr_db += r.synchronized.psnr_db / double(trials);
            mean.sdsa.d_stego += r.sdsa.d_stego / double(trials);
            mean.sdsa.psnr_db += r.sdsa.psnr_db / double(trials);
        }
        return mean;
    }

    /// Embed, pass through baseline JPEG at `quality` (0 means the lossless
    /// container), extract, and report the fraction of flipped payload bits.
    inline double ber_after_jpeg(const AnyImage& cover, const StegoParams& params, const BitStream& payload,
                                 int quality)
    {
        auto stego = sdsa_embed(cover, params, payload);
        if (quality > 0)
            stego = to_jpeg(stego, quality);
        const auto received = sdsa_extract_available(stego.image, params, payload.size());
        return bit_error_rate(payload, received);
    }
} // namespace sdsa::analysis

#endif // SDSA_ANALYSIS_HPP_INCLUDED

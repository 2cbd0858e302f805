#ifndef SDSA_SDSA_HPP_INCLUDED
#define SDSA_SDSA_HPP_INCLUDED

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <variant>
#include <vector>

#include <sdsa/aes.hpp>
#include <sdsa/bitstream.hpp>
#include <sdsa/dct.hpp>
#include <sdsa/error.hpp>
#include <sdsa/image.hpp>
#include <sdsa/image_io.hpp>
#include <sdsa/permutation.hpp>

// Spatially desynchronized DCT embedding.
//
// The cover (luma plane for color images) is cropped by (u, v), the inner part
// is tiled with m x n blocks, and blocks are visited in a keyed order. In each
// visited block the quantized AC coefficients of magnitude >= 2 carry one bit
// each as the parity of their magnitude, read in zig-zag order. Embedding never
// moves a magnitude below 2, so the set of carrying coefficients is the same
// for the sender and the receiver.

namespace sdsa
{
    enum class CoeffScheme
    {
        plus_minus_one, // +-1 on the magnitude toward the bit's parity
        lsb_replace,    // overwrite the magnitude's LSB
    };

    /// The shared secret. Every field must match between sender and receiver.
    /// `key` encrypts the payload; block order is keyed by the nonce alone so
    /// the cipher layer and the embedding layer fail independently.
    struct StegoParams
    {
        aes::AesKey                    key;
        CropOffsets                    offsets{4, 4};
        std::size_t                    m = 9;
        std::size_t                    n = 9;
        std::variant<int, QuantMatrix> q_source = 70; // JPEG-style quality or a custom matrix
        CoeffScheme                    scheme = CoeffScheme::plus_minus_one;
        aes::Nonce                     selection_nonce{};

        QuantMatrix quant_matrix() const
        {
            if (const auto* quality = std::get_if<int>(&q_source))
                return derive_q(m, n, *quality);
            const auto& custom = std::get<QuantMatrix>(q_source);
            if (custom.rows() != m || custom.cols() != n)
                throw Error(ErrorCode::DimensionMismatch, "custom Q is not " + std::to_string(m) + "x"
                                                              + std::to_string(n));
            return custom;
        }

        aes::AesKey selection_key() const
        {
            static const aes::AesKey fixed(std::vector<std::uint8_t>(16, 0));
            return aes::AesKey(aes::ctr_keystream(fixed, selection_nonce, 16));
        }
    };

    struct BlockSelection
    {
        std::vector<std::size_t> indices;
    };

    inline BlockSelection select_blocks(std::size_t block_count, std::size_t needed, const aes::AesKey& key,
                                        const aes::Nonce& nonce)
    {
        return {keyed_permutation_prefix(block_count, needed, key, nonce)};
    }

    enum class Container
    {
        lossless,
        jpeg,
    };

    struct StegoImage
    {
        AnyImage  image;
        Container container = Container::lossless;
        int       jpeg_quality = 0; // only meaningful for Container::jpeg
    };

    struct EmbedStats
    {
        std::size_t blocks_visited = 0;
        std::size_t blocks_flattened = 0; // could not be stabilized; carry no bits
        std::size_t max_iterations = 0;
    };

    namespace detail
    {
        inline constexpr int max_stabilize_iterations = 8;

        /// Per-geometry machinery shared by embedding, extraction and capacity.
        class BlockCoder
        {
        public:
            BlockCoder(std::size_t m, std::size_t n, QuantMatrix q)
            : plan_(m, n), q_(std::move(q)), impulse_(m * n)
            {
                for (auto [r, c] : zigzag_order(m, n))
                    if (r != 0 || c != 0)
                        ac_order_.push_back(r * n + c);
                RealBlock unit(m, n);
                for (std::size_t k = 0; k < m * n; ++k)
                {
                    unit[k] = 1.0;
                    impulse_[k] = plan_.forward(unit);
                    unit[k] = 0.0;
                }
            }

            std::size_t rows() const noexcept
            {
                return plan_.rows();
            }
            std::size_t cols() const noexcept
            {
                return plan_.cols();
            }
            const DctPlan& plan() const noexcept
            {
                return plan_;
            }
            const QuantMatrix& q() const noexcept
            {
                return q_;
            }
            /// Coefficients of a unit change in pixel `k`.
            const RealBlock& impulse(std::size_t k) const noexcept
            {
                return impulse_[k];
            }

            RealBlock load(const GrayImage& img, std::size_t row0, std::size_t col0) const
            {
                RealBlock b(rows(), cols());
                for (std::size_t r = 0; r < rows(); ++r)
                    for (std::size_t c = 0; c < cols(); ++c)
                        b(r, c) = static_cast<double>(img.at(row0 + r, col0 + c)) - 128.0;
                return b;
            }

            RealBlock level_shift(const std::vector<std::uint8_t>& px) const
            {
                RealBlock b(rows(), cols());
                for (std::size_t i = 0; i < px.size(); ++i)
                    b[i] = static_cast<double>(px[i]) - 128.0;
                return b;
            }

            /// Inverse transform to 8-bit pixels. The DC term carries nothing, so
            /// when the block would clip it is shifted back into [0, 255].
            std::vector<std::uint8_t> render(RealBlock& coeffs) const
            {
                auto spatial = plan_.inverse(coeffs);
                const auto [lo, hi] = std::minmax_element(spatial.begin(), spatial.end());
                double shift = 0.0;
                if (*hi - *lo <= 254.0)
                {
                    if (*lo + 128.0 < 0.0)
                        shift = -(*lo + 128.0);
                    else if (*hi + 128.0 > 255.0)
                        shift = 255.0 - (*hi + 128.0);
                }
                if (shift != 0.0)
                {
                    coeffs[0] += shift * std::sqrt(static_cast<double>(coeffs.size()));
                    for (auto& v : spatial)
                        v += shift;
                }
                std::vector<std::uint8_t> px(spatial.size());
                for (std::size_t i = 0; i < px.size(); ++i)
                    px[i] = detail::clamp_u8(spatial[i] + 128.0);
                return px;
            }

            /// Flat indices of carrying coefficients, in zig-zag order.
            std::vector<std::size_t> eligible(const CoefficientBlock& levels) const
            {
                std::vector<std::size_t> out;
                for (auto idx : ac_order_)
                    if (std::abs(levels[idx]) >= 2)
                        out.push_back(idx);
                return out;
            }

            std::size_t count_eligible(const CoefficientBlock& levels) const
            {
                std::size_t count = 0;
                for (auto idx : ac_order_)
                    count += std::abs(levels[idx]) >= 2 ? 1 : 0;
                return count;
            }

        private:
            DctPlan                  plan_;
            QuantMatrix              q_;
            std::vector<std::size_t> ac_order_;
            std::vector<RealBlock>   impulse_;
        };

        inline int embed_coefficient(int level, double unquantized, bool bit, CoeffScheme scheme) noexcept
        {
            const int sign = level < 0 ? -1 : 1;
            int       mag = std::abs(level);
            if (((mag & 1) != 0) == bit)
                return level;
            if (scheme == CoeffScheme::lsb_replace)
                mag ^= 1;
            else if (mag == 2)
                mag = 3;
            else
                mag = std::abs(unquantized) < static_cast<double>(mag) ? mag - 1 : mag + 1;
            return sign * mag;
        }

        /// Distance a realized coefficient keeps from the bin edges that matter
        /// (the 1|2 eligibility edge and every edge above it), so that small
        /// channel noise such as a high-quality JPEG pass does not move it.
        inline double robust_margin(int q) noexcept
        {
            return std::min(1.0, 0.15 * q);
        }

        // Reconstruction aims this far inside the bin, leaving room for
        // rounding noise before the check above fails.
        inline double target_margin(int q) noexcept
        {
            return std::min(2.0, 0.3 * q);
        }

        /// Dequantization that keeps the cover's position inside the bin: each
        /// nonzero level is reconstructed at the point of its (margin-shrunk)
        /// bin nearest to the original coefficient. Modified levels land just
        /// past the edge they crossed; zero levels keep the original value.
        inline RealBlock dequantize_nearest(const RealBlock& original, const CoefficientBlock& levels,
                                            const QuantMatrix& q)
        {
            RealBlock out = original;
            for (std::size_t i = 1; i < out.size(); ++i)
            {
                const int mag = std::abs(levels[i]);
                if (mag == 0)
                    continue;
                const double step = q[i];
                const double t = target_margin(q[i]);
                const double lo = mag >= 2 ? (mag - 0.5) * step + t : 0.0;
                const double hi = (mag + 0.5) * step - t;
                const double value = std::clamp(std::abs(original[i]), lo, hi);
                out[i] = levels[i] < 0 ? -value : value;
            }
            return out;
        }

        /// True if `realized` reads back as exactly `bits` (the receiver reads
        /// all carrying coefficients of a block, or only a prefix of the last
        /// one) and every relevant coefficient keeps its margin.
        inline bool carries(const BlockCoder& coder, const RealBlock& realized, std::span<const std::uint8_t> bits,
                            bool final_block)
        {
            const auto levels = quantize(realized, coder.q());
            const auto positions = coder.eligible(levels);
            if (final_block ? positions.size() < bits.size() : positions.size() != bits.size())
                return false;
            for (std::size_t i = 0; i < bits.size(); ++i)
                if ((std::abs(levels[positions[i]]) & 1) != bits[i])
                    return false;
            for (std::size_t i = 1; i < realized.size(); ++i)
            {
                const int mag = std::abs(levels[i]);
                if (mag == 0)
                    continue;
                const double q = coder.q()[i];
                const double value = std::abs(realized[i]);
                const double upper = (mag + 0.5) * q - value;
                const double lower = mag >= 2 ? value - (mag - 0.5) * q : q; // 0|1 edge is irrelevant
                if (std::min(upper, lower) < robust_margin(coder.q()[i]))
                    return false;
            }
            return true;
        }

        /// Interval `carries` accepts for each AC coefficient, given the target
        /// levels: carrying levels keep their bin, the rest stay below 2.
        inline std::vector<std::pair<double, double>> accept_intervals(const BlockCoder&      coder,
                                                                       const CoefficientBlock& target)
        {
            std::vector<std::pair<double, double>> out(target.size());
            for (std::size_t i = 1; i < target.size(); ++i)
            {
                const double q = coder.q()[i];
                const double r = robust_margin(coder.q()[i]);
                const int    mag = std::abs(target[i]);
                if (mag < 2)
                    out[i] = {-(1.5 * q - r), 1.5 * q - r};
                else if (target[i] > 0)
                    out[i] = {(mag - 0.5) * q + r, (mag + 0.5) * q - r};
                else
                    out[i] = {-(mag + 0.5) * q + r, -(mag - 0.5) * q - r};
            }
            return out;
        }

        inline double violation(double value, std::pair<double, double> range) noexcept
        {
            const double v = std::max(0.0, range.first - value) + std::max(0.0, value - range.second);
            return v * v;
        }

        inline double total_violation(const RealBlock& coeffs, const std::vector<std::pair<double, double>>& ranges)
        {
            double total = 0.0;
            for (std::size_t i = 1; i < coeffs.size(); ++i)
                total += violation(coeffs[i], ranges[i]);
            return total;
        }

        /// Greedy +-1 search over the requested pixels, raster order, keeping
        /// the first step that lowers the total interval violation. Rounding
        /// noise the AC feedback cannot steer is removed this way.
        /// `realize_pixel` maps a requested value to what the receiver sees.
        template <typename RealizePixel>
        bool repair(const BlockCoder& coder, const CoefficientBlock& target, std::vector<std::uint8_t>& requested,
                    std::vector<std::uint8_t>& realized_px, RealBlock& realized, RealizePixel&& realize_pixel)
        {
            constexpr int max_passes = 6;
            const auto    ranges = accept_intervals(coder, target);
            double        total = total_violation(realized, ranges);

            for (int pass = 0; pass < max_passes && total > 0.0; ++pass)
            {
                bool improved = false;
                for (std::size_t k = 0; k < requested.size() && total > 0.0; ++k)
                    for (int step : {1, -1})
                    {
                        const int value = requested[k] + step;
                        if (value < 0 || value > 255)
                            continue;
                        const auto seen = realize_pixel(k, static_cast<std::uint8_t>(value));
                        const int  delta = int(seen) - int(realized_px[k]);
                        if (delta == 0)
                            continue;
                        auto        moved = realized;
                        const auto& basis = coder.impulse(k);
                        for (std::size_t i = 0; i < moved.size(); ++i)
                            moved[i] += delta * basis[i];
                        const double next = total_violation(moved, ranges);
                        if (!(next < total))
                            continue;
                        requested[k] = static_cast<std::uint8_t>(value);
                        realized_px[k] = seen;
                        realized = std::move(moved);
                        total = next;
                        improved = true;
                        break;
                    }
                if (!improved)
                    break;
            }
            return total == 0.0;
        }

        /// Writes luma blocks of a grayscale cover.
        class GrayCarrier
        {
        public:
            explicit GrayCarrier(GrayImage& inner) : inner_(inner) {}

            std::vector<std::uint8_t> realize(std::size_t, std::size_t, std::vector<std::uint8_t> px) const
            {
                return px;
            }

            std::uint8_t realize_pixel(std::size_t, std::size_t, std::size_t, std::uint8_t value) const noexcept
            {
                return value;
            }

            void commit(std::size_t row0, std::size_t col0, std::size_t m, std::size_t n,
                        const std::vector<std::uint8_t>& px)
            {
                for (std::size_t r = 0; r < m; ++r)
                    for (std::size_t c = 0; c < n; ++c)
                        inner_.at(row0 + r, col0 + c) = px[r * n + c];
            }

            std::vector<std::uint8_t> commit_flat(std::size_t row0, std::size_t col0, std::size_t m,
                                                  std::size_t n, std::uint8_t value)
            {
                std::vector<std::uint8_t> px(m * n, value);
                commit(row0, col0, m, n, px);
                return px;
            }

        private:
            GrayImage& inner_;
        };

        /// Luma blocks of a color cover. A modified block is written back as
        /// RGB through the cover's chroma, and `realize` reports the luma the
        /// receiver will recompute from those RGB values.
        class ColorCarrier
        {
        public:
            ColorCarrier(ColorImage& rgb, GrayImage& inner_luma, const YCbCrPlanes& planes, CropOffsets offsets,
                         std::size_t block_cols)
            : rgb_(rgb), inner_(inner_luma), planes_(planes), offsets_(offsets), block_cols_(block_cols)
            {}

            std::vector<std::uint8_t> realize(std::size_t row0, std::size_t col0, std::vector<std::uint8_t> px) const
            {
                for (std::size_t i = 0; i < px.size(); ++i)
                    px[i] = realize_pixel(row0, col0, i, px[i]);
                return px;
            }

            std::uint8_t realize_pixel(std::size_t row0, std::size_t col0, std::size_t i, std::uint8_t luma) const
            {
                const auto fr = row0 + i / block_cols_ + offsets_.u, fc = col0 + i % block_cols_ + offsets_.v;
                return rgb_to_ycbcr(ycbcr_to_rgb(YCbCr{luma, planes_.cb.at(fr, fc), planes_.cr.at(fr, fc)})).y;
            }

            void commit(std::size_t row0, std::size_t col0, std::size_t m, std::size_t n,
                        const std::vector<std::uint8_t>& px)
            {
                for (std::size_t r = 0; r < m; ++r)
                    for (std::size_t c = 0; c < n; ++c)
                    {
                        const auto ir = row0 + r, ic = col0 + c;
                        const auto fr = ir + offsets_.u, fc = ic + offsets_.v;
                        auto rgb = ycbcr_to_rgb(YCbCr{px[r * n + c], planes_.cb.at(fr, fc), planes_.cr.at(fr, fc)});
                        rgb_.r.at(fr, fc) = rgb.r;
                        rgb_.g.at(fr, fc) = rgb.g;
                        rgb_.b.at(fr, fc) = rgb.b;
                        inner_.at(ir, ic) = rgb_to_ycbcr(rgb).y;
                    }
            }

            // Neutral chroma so the realized luma is exactly `value`.
            std::vector<std::uint8_t> commit_flat(std::size_t row0, std::size_t col0, std::size_t m,
                                                  std::size_t n, std::uint8_t value)
            {
                for (std::size_t r = 0; r < m; ++r)
                    for (std::size_t c = 0; c < n; ++c)
                    {
                        const auto fr = row0 + r + offsets_.u, fc = col0 + c + offsets_.v;
                        rgb_.r.at(fr, fc) = rgb_.g.at(fr, fc) = rgb_.b.at(fr, fc) = value;
                        inner_.at(row0 + r, col0 + c) = rgb_to_ycbcr(Rgb{value, value, value}).y;
                    }
                std::vector<std::uint8_t> out(m * n);
                for (std::size_t r = 0; r < m; ++r)
                    for (std::size_t c = 0; c < n; ++c)
                        out[r * n + c] = inner_.at(row0 + r, col0 + c);
                return out;
            }

        private:
            ColorImage&        rgb_;
            GrayImage&         inner_;
            const YCbCrPlanes& planes_;
            CropOffsets        offsets_;
            std::size_t        block_cols_;
        };

        struct Geometry
        {
            CroppedPair pair;
            BlockGrid   grid;
        };

        inline Geometry geometry(const GrayImage& luma, const StegoParams& params)
        {
            if (params.m < 2 || params.n < 2)
                throw Error(ErrorCode::BlockTooLarge, "block dimensions must be at least 2x2");
            auto pair = crop(luma, params.offsets, params.m, params.n);
            auto grid = partition(pair.inner, params.m, params.n);
            return {std::move(pair), grid};
        }

        inline std::size_t capacity_of(const GrayImage& inner, const BlockGrid& grid, const BlockCoder& coder)
        {
            std::size_t total = 0;
            for (std::size_t b = 0; b < grid.block_count(); ++b)
            {
                auto [r0, c0] = grid.origin(b);
                total += coder.count_eligible(quantize(coder.plan().forward(coder.load(inner, r0, c0)), coder.q()));
            }
            return total;
        }

        /// Embeds `payload` into `inner` (already cropped) through `carrier`.
        template <typename Carrier>
        EmbedStats embed_plane(const GrayImage& inner, const BlockGrid& grid, const StegoParams& params,
                               const BlockCoder& coder, const BitStream& payload, Carrier& carrier)
        {
            EmbedStats stats;
            if (payload.empty())
                return stats;

            const auto order = select_blocks(grid.block_count(), grid.block_count(), params.selection_key(),
                                             params.selection_nonce)
                                   .indices;
            const auto  bits = payload.bits();
            std::size_t pos = 0;

            for (auto block : order)
            {
                if (pos == bits.size())
                    break;
                auto [r0, c0] = grid.origin(block);
                const auto coeffs = coder.plan().forward(coder.load(inner, r0, c0));
                auto       target = quantize(coeffs, coder.q());
                const auto positions = coder.eligible(target);
                ++stats.blocks_visited;

                // Blocks without carrying coefficients still go through the
                // margin check so none of their coefficients sits near the 1|2 edge.
                const std::size_t take = std::min(positions.size(), bits.size() - pos);
                const auto        chunk = bits.subspan(pos, take);
                const bool        final_block = pos + take == bits.size();
                for (std::size_t i = 0; i < take; ++i)
                {
                    const auto idx = positions[i];
                    target[idx] = embed_coefficient(target[idx], coeffs[idx] / coder.q()[idx], chunk[i] != 0,
                                                    params.scheme);
                }

                // Rounding and clamping in the pixel domain can move coefficients
                // across a bin; feed the AC error back and retry.
                const auto desired = dequantize_nearest(coeffs, target, coder.q());
                auto       request = desired;
                bool       done = false;
                for (int iter = 1; iter <= max_stabilize_iterations && !done; ++iter)
                {
                    auto       px = coder.render(request);
                    auto       seen = carrier.realize(r0, c0, px);
                    const auto realized = coder.plan().forward(coder.level_shift(seen));
                    bool       ok = carries(coder, realized, chunk, final_block);
                    if (!ok)
                    {
                        auto repaired = realized;
                        auto realize_pixel = [&](std::size_t k, std::uint8_t v) {
                            return carrier.realize_pixel(r0, c0, k, v);
                        };
                        if (repair(coder, target, px, seen, repaired, realize_pixel))
                            ok = carries(coder, coder.plan().forward(coder.level_shift(seen)), chunk, final_block);
                    }
                    if (ok)
                    {
                        carrier.commit(r0, c0, grid.m, grid.n, px);
                        stats.max_iterations = std::max<std::size_t>(stats.max_iterations, iter);
                        done = true;
                        break;
                    }
                    for (std::size_t i = 1; i < request.size(); ++i)
                        request[i] += desired[i] - realized[i];
                }

                if (done)
                {
                    pos += take;
                    continue;
                }
                // A flat block has no AC energy, so the receiver skips it as well.
                const auto mean = std::lround(coeffs[0] / std::sqrt(double(grid.m * grid.n)) + 128.0);
                carrier.commit_flat(r0, c0, grid.m, grid.n,
                                    static_cast<std::uint8_t>(std::clamp(mean, 0L, 255L)));
                ++stats.blocks_flattened;
            }

            if (pos < bits.size())
                throw Error(ErrorCode::PayloadExceedsCapacity,
                            "only " + std::to_string(pos) + " of " + std::to_string(bits.size())
                                + " bits fit after stabilization");
            return stats;
        }

        inline BitStream extract_plane(const GrayImage& luma, const StegoParams& params, std::size_t bit_count,
                                       bool allow_short)
        {
            auto [pair, grid] = geometry(luma, params);
            const BlockCoder coder(params.m, params.n, params.quant_matrix());
            const auto order = select_blocks(grid.block_count(), grid.block_count(), params.selection_key(),
                                             params.selection_nonce)
                                   .indices;
            BitStream out;
            for (auto block : order)
            {
                if (out.size() == bit_count)
                    break;
                auto [r0, c0] = grid.origin(block);
                const auto levels = quantize(coder.plan().forward(coder.load(pair.inner, r0, c0)), coder.q());
                for (auto idx : coder.eligible(levels))
                {
                    if (out.size() == bit_count)
                        break;
                    out.push((std::abs(levels[idx]) & 1) != 0);
                }
            }
            if (out.size() < bit_count && !allow_short)
                throw Error(ErrorCode::NotEnoughBlocks, "stego image yields only " + std::to_string(out.size())
                                                            + " of " + std::to_string(bit_count) + " bits");
            return out;
        }

        inline const GrayImage& luma_of(const AnyImage& image, std::optional<GrayImage>& storage)
        {
            if (const auto* gray = std::get_if<GrayImage>(&image))
                return *gray;
            storage = rgb_to_ycbcr(std::get<ColorImage>(image)).y;
            return *storage;
        }
    } // namespace detail

    //=== capacity ===//
    inline std::size_t capacity(const GrayImage& cover, const StegoParams& params)
    {
        auto [pair, grid] = detail::geometry(cover, params);
        const detail::BlockCoder coder(params.m, params.n, params.quant_matrix());
        return detail::capacity_of(pair.inner, grid, coder);
    }

    inline std::size_t capacity(const AnyImage& cover, const StegoParams& params)
    {
        std::optional<GrayImage> storage;
        return capacity(detail::luma_of(cover, storage), params);
    }

    //=== embedding ===//
    inline GrayImage sdsa_embed(const GrayImage& cover, const StegoParams& params, const BitStream& payload,
                                EmbedStats* stats = nullptr)
    {
        auto [pair, grid] = detail::geometry(cover, params);
        const detail::BlockCoder coder(params.m, params.n, params.quant_matrix());
        const auto               available = detail::capacity_of(pair.inner, grid, coder);
        if (payload.size() > available)
            throw Error(ErrorCode::PayloadExceedsCapacity, std::to_string(payload.size()) + " bits exceed capacity "
                                                               + std::to_string(available));

        GrayImage           inner = pair.inner;
        detail::GrayCarrier carrier(inner);
        auto                s = detail::embed_plane(pair.inner, grid, params, coder, payload, carrier);
        if (stats)
            *stats = s;
        return stitch(inner, pair.border);
    }

    inline ColorImage sdsa_embed(const ColorImage& cover, const StegoParams& params, const BitStream& payload,
                                 EmbedStats* stats = nullptr)
    {
        const auto planes = rgb_to_ycbcr(cover);
        auto [pair, grid] = detail::geometry(planes.y, params);
        const detail::BlockCoder coder(params.m, params.n, params.quant_matrix());
        const auto               available = detail::capacity_of(pair.inner, grid, coder);
        if (payload.size() > available)
            throw Error(ErrorCode::PayloadExceedsCapacity, std::to_string(payload.size()) + " bits exceed capacity "
                                                               + std::to_string(available));

        ColorImage           out = cover;
        GrayImage            inner = pair.inner;
        detail::ColorCarrier carrier(out, inner, planes, params.offsets, params.n);
        auto s = detail::embed_plane(pair.inner, grid, params, coder, payload, carrier);
        if (stats)
            *stats = s;
        return out;
    }

    inline StegoImage sdsa_embed(const AnyImage& cover, const StegoParams& params, const BitStream& payload,
                                 EmbedStats* stats = nullptr)
    {
        return {std::visit([&](const auto& img) -> AnyImage { return sdsa_embed(img, params, payload, stats); },
                           cover),
                Container::lossless, 0};
    }

    //=== extraction ===//
    inline BitStream sdsa_extract(const GrayImage& stego, const StegoParams& params, std::size_t bit_count)
    {
        return detail::extract_plane(stego, params, bit_count, false);
    }

    inline BitStream sdsa_extract(const AnyImage& stego, const StegoParams& params, std::size_t bit_count)
    {
        std::optional<GrayImage> storage;
        return detail::extract_plane(detail::luma_of(stego, storage), params, bit_count, false);
    }

    /// Like sdsa_extract but returns however many bits (up to `bit_count`) the
    /// image yields, for measuring damaged stego images.
    inline BitStream sdsa_extract_available(const AnyImage& stego, const StegoParams& params,
                                            std::size_t bit_count)
    {
        std::optional<GrayImage> storage;
        return detail::extract_plane(detail::luma_of(stego, storage), params, bit_count, true);
    }

    /// Re-encodes the stego raster as baseline JPEG and decodes it again, as the
    /// receiver of a JPEG-compressed stego image would see it.
    inline StegoImage to_jpeg(const StegoImage& stego, int quality)
    {
        auto bytes = std::visit([&](const auto& img) { return encode_jpeg(img, quality); }, stego.image);
        return {decode_image(bytes), Container::jpeg, quality};
    }
} // namespace sdsa

#endif // SDSA_SDSA_HPP_INCLUDED

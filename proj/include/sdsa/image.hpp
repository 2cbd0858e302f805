#ifndef SDSA_IMAGE_HPP_INCLUDED
#define SDSA_IMAGE_HPP_INCLUDED

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <sdsa/error.hpp>

namespace sdsa
{
    /// 8-bit single-plane raster, row-major.
    class GrayImage
    {
    public:
        GrayImage() = default;

        GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0)
        : width_(width), height_(height), samples_(width * height, fill)
        {
            if (width == 0 || height == 0)
                throw Error(ErrorCode::DimensionMismatch, "image dimensions must be at least 1x1");
        }

        GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> samples)
        : width_(width), height_(height), samples_(std::move(samples))
        {
            if (width == 0 || height == 0 || samples_.size() != width * height)
                throw Error(ErrorCode::DimensionMismatch,
                            "sample count does not match " + std::to_string(width) + "x"
                                + std::to_string(height));
        }

        std::size_t width() const noexcept
        {
            return width_;
        }
        std::size_t height() const noexcept
        {
            return height_;
        }
        std::size_t size() const noexcept
        {
            return samples_.size();
        }
        bool empty() const noexcept
        {
            return samples_.empty();
        }

        std::uint8_t& at(std::size_t row, std::size_t col) noexcept
        {
            return samples_[row * width_ + col];
        }
        std::uint8_t at(std::size_t row, std::size_t col) const noexcept
        {
            return samples_[row * width_ + col];
        }

        std::span<std::uint8_t> samples() noexcept
        {
            return samples_;
        }
        std::span<const std::uint8_t> samples() const noexcept
        {
            return samples_;
        }

        friend bool operator==(const GrayImage&, const GrayImage&) = default;

    private:
        std::size_t               width_ = 0;
        std::size_t               height_ = 0;
        std::vector<std::uint8_t> samples_;
    };

    /// Three 8-bit planes of identical geometry.
    struct ColorImage
    {
        GrayImage r, g, b;

        ColorImage() = default;
        ColorImage(GrayImage red, GrayImage green, GrayImage blue)
        : r(std::move(red)), g(std::move(green)), b(std::move(blue))
        {
            if (r.width() != g.width() || r.width() != b.width() || r.height() != g.height()
                || r.height() != b.height())
                throw Error(ErrorCode::DimensionMismatch, "color planes differ in size");
        }

        std::size_t width() const noexcept
        {
            return r.width();
        }
        std::size_t height() const noexcept
        {
            return r.height();
        }

        friend bool operator==(const ColorImage&, const ColorImage&) = default;
    };

    //=== crop / stitch ===//
    struct CropOffsets
    {
        std::size_t u = 0; // rows removed from the top
        std::size_t v = 0; // columns removed from the left

        friend bool operator==(const CropOffsets&, const CropOffsets&) = default;
    };

    /// Pixels removed by a crop: the top `u` full rows and the left `v` columns
    /// of the remaining rows. Positions are implied by the layout, so only the
    /// original dimensions are kept alongside the values.
    struct BorderRecord
    {
        std::size_t               original_width = 0;
        std::size_t               original_height = 0;
        CropOffsets               offsets;
        std::vector<std::uint8_t> top;  // u x original_width, row-major
        std::vector<std::uint8_t> left; // (original_height - u) x v, row-major

        std::size_t pixel_count() const noexcept
        {
            return top.size() + left.size();
        }
    };

    struct CroppedPair
    {
        GrayImage    inner;
        BorderRecord border;
    };

    /// Splits `image` into the sub-image starting at (u, v) and the removed
    /// border. `min_rows`/`min_cols` let callers demand room for one block.
    inline CroppedPair crop(const GrayImage& image, CropOffsets offsets, std::size_t min_rows = 1,
                            std::size_t min_cols = 1)
    {
        const auto w = image.width();
        const auto h = image.height();
        if (offsets.u >= h || offsets.v >= w || h - offsets.u < std::max<std::size_t>(min_rows, 1)
            || w - offsets.v < std::max<std::size_t>(min_cols, 1))
            throw Error(ErrorCode::OffsetsTooLarge,
                        "crop (" + std::to_string(offsets.u) + "," + std::to_string(offsets.v)
                            + ") leaves no room in a " + std::to_string(w) + "x"
                            + std::to_string(h) + " image");

        const auto inner_w = w - offsets.v;
        const auto inner_h = h - offsets.u;

        BorderRecord border;
        border.original_width = w;
        border.original_height = h;
        border.offsets = offsets;
        border.top.reserve(offsets.u * w);
        border.left.reserve(inner_h * offsets.v);

        std::vector<std::uint8_t> inner;
        inner.reserve(inner_w * inner_h);

        for (std::size_t row = 0; row < h; ++row)
        {
            const auto* line = image.samples().data() + row * w;
            if (row < offsets.u)
            {
                border.top.insert(border.top.end(), line, line + w);
                continue;
            }
            border.left.insert(border.left.end(), line, line + offsets.v);
            inner.insert(inner.end(), line + offsets.v, line + w);
        }
        return {GrayImage(inner_w, inner_h, std::move(inner)), std::move(border)};
    }

    inline GrayImage stitch(const GrayImage& inner, const BorderRecord& border)
    {
        const auto& off = border.offsets;
        if (border.original_width <= off.v || border.original_height <= off.u
            || inner.width() != border.original_width - off.v
            || inner.height() != border.original_height - off.u
            || border.top.size() != off.u * border.original_width
            || border.left.size() != inner.height() * off.v)
            throw Error(ErrorCode::GeometryMismatch, "border record does not fit the inner image");

        const auto w = border.original_width;
        std::vector<std::uint8_t> out;
        out.reserve(w * border.original_height);
        out.insert(out.end(), border.top.begin(), border.top.end());
        for (std::size_t row = 0; row < inner.height(); ++row)
        {
            auto left = border.left.begin() + static_cast<std::ptrdiff_t>(row * off.v);
            out.insert(out.end(), left, left + static_cast<std::ptrdiff_t>(off.v));
            auto line = inner.samples().subspan(row * inner.width(), inner.width());
            out.insert(out.end(), line.begin(), line.end());
        }
        return GrayImage(w, border.original_height, std::move(out));
    }

    //=== block partitioning ===//
    struct BlockGrid
    {
        std::size_t m = 0; // block height
        std::size_t n = 0; // block width
        std::size_t block_rows = 0;
        std::size_t block_cols = 0;
        std::size_t remainder_rows = 0; // bottom strip height
        std::size_t remainder_cols = 0; // right strip width

        std::size_t block_count() const noexcept
        {
            return block_rows * block_cols;
        }

        /// Top-left (row, col) of block `index`, raster order.
        std::pair<std::size_t, std::size_t> origin(std::size_t index) const noexcept
        {
            return {(index / block_cols) * m, (index % block_cols) * n};
        }
    };

    inline BlockGrid partition(std::size_t width, std::size_t height, std::size_t m, std::size_t n)
    {
        if (m < 2 || n < 2)
            throw Error(ErrorCode::BlockTooLarge, "block dimensions must be at least 2x2");
        if (m > height || n > width)
            throw Error(ErrorCode::BlockTooLarge,
                        std::to_string(m) + "x" + std::to_string(n) + " block does not fit "
                            + std::to_string(width) + "x" + std::to_string(height));
        BlockGrid grid;
        grid.m = m;
        grid.n = n;
        grid.block_rows = height / m;
        grid.block_cols = width / n;
        grid.remainder_rows = height % m;
        grid.remainder_cols = width % n;
        return grid;
    }

    inline BlockGrid partition(const GrayImage& inner, std::size_t m, std::size_t n)
    {
        return partition(inner.width(), inner.height(), m, n);
    }

    //=== color conversion (BT.601 full range, as in JFIF) ===//
    struct YCbCrPlanes
    {
        GrayImage y, cb, cr;
    };

    namespace detail
    {
        inline std::uint8_t clamp_u8(double value) noexcept
        {
            return static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
        }
    } // namespace detail

    struct YCbCr
    {
        std::uint8_t y, cb, cr;
    };
    struct Rgb
    {
        std::uint8_t r, g, b;
    };

    inline YCbCr rgb_to_ycbcr(Rgb px) noexcept
    {
        const double r = px.r, g = px.g, b = px.b;
        return {detail::clamp_u8(0.299 * r + 0.587 * g + 0.114 * b),
                detail::clamp_u8(128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b),
                detail::clamp_u8(128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b)};
    }

    inline Rgb ycbcr_to_rgb(YCbCr px) noexcept
    {
        const double y = px.y, cb = px.cb - 128.0, cr = px.cr - 128.0;
        return {detail::clamp_u8(y + 1.402 * cr),
                detail::clamp_u8(y - 0.344136 * cb - 0.714136 * cr),
                detail::clamp_u8(y + 1.772 * cb)};
    }

    inline YCbCrPlanes rgb_to_ycbcr(const ColorImage& image)
    {
        YCbCrPlanes out{GrayImage(image.width(), image.height()),
                        GrayImage(image.width(), image.height()),
                        GrayImage(image.width(), image.height())};
        for (std::size_t i = 0; i < image.r.size(); ++i)
        {
            auto px = rgb_to_ycbcr(Rgb{image.r.samples()[i], image.g.samples()[i], image.b.samples()[i]});
            out.y.samples()[i] = px.y;
            out.cb.samples()[i] = px.cb;
            out.cr.samples()[i] = px.cr;
        }
        return out;
    }

    inline ColorImage ycbcr_to_rgb(const YCbCrPlanes& planes)
    {
        const auto w = planes.y.width(), h = planes.y.height();
        if (planes.cb.width() != w || planes.cr.width() != w || planes.cb.height() != h
            || planes.cr.height() != h)
            throw Error(ErrorCode::DimensionMismatch, "YCbCr planes differ in size");
        ColorImage out(GrayImage(w, h), GrayImage(w, h), GrayImage(w, h));
        for (std::size_t i = 0; i < planes.y.size(); ++i)
        {
            auto px = ycbcr_to_rgb(
                YCbCr{planes.y.samples()[i], planes.cb.samples()[i], planes.cr.samples()[i]});
            out.r.samples()[i] = px.r;
            out.g.samples()[i] = px.g;
            out.b.samples()[i] = px.b;
        }
        return out;
    }
} // namespace sdsa

#endif // SDSA_IMAGE_HPP_INCLUDED

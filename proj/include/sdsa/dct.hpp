#ifndef SDSA_DCT_HPP_INCLUDED
#define SDSA_DCT_HPP_INCLUDED

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <sdsa/error.hpp>

namespace sdsa
{
    /// Dense m x n matrix, row-major.
    template <typename T>
    class Block
    {
    public:
        Block() = default;
        Block(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
        {}

        std::size_t rows() const noexcept
        {
            return rows_;
        }
        std::size_t cols() const noexcept
        {
            return cols_;
        }
        std::size_t size() const noexcept
        {
            return data_.size();
        }

        T& operator()(std::size_t r, std::size_t c) noexcept
        {
            return data_[r * cols_ + c];
        }
        const T& operator()(std::size_t r, std::size_t c) const noexcept
        {
            return data_[r * cols_ + c];
        }
        T& operator[](std::size_t i) noexcept
        {
            return data_[i];
        }
        const T& operator[](std::size_t i) const noexcept
        {
            return data_[i];
        }

        auto begin() noexcept
        {
            return data_.begin();
        }
        auto end() noexcept
        {
            return data_.end();
        }
        auto begin() const noexcept
        {
            return data_.begin();
        }
        auto end() const noexcept
        {
            return data_.end();
        }

        bool same_shape(const auto& other) const noexcept
        {
            return rows_ == other.rows() && cols_ == other.cols();
        }

        friend bool operator==(const Block&, const Block&) = default;

    private:
        std::size_t    rows_ = 0;
        std::size_t    cols_ = 0;
        std::vector<T> data_;
    };

    using RealBlock = Block<double>;
    using CoefficientBlock = Block<int>;

    /// Quantization divisors; every entry is at least 1.
    class QuantMatrix
    {
    public:
        QuantMatrix() = default;
        explicit QuantMatrix(Block<int> entries) : entries_(std::move(entries))
        {
            for (auto e : entries_)
                if (e < 1)
                    throw Error(ErrorCode::DimensionMismatch, "quantization entries must be >= 1");
        }

        std::size_t rows() const noexcept
        {
            return entries_.rows();
        }
        std::size_t cols() const noexcept
        {
            return entries_.cols();
        }
        int operator()(std::size_t r, std::size_t c) const noexcept
        {
            return entries_(r, c);
        }
        int operator[](std::size_t i) const noexcept
        {
            return entries_[i];
        }
        const Block<int>& entries() const noexcept
        {
            return entries_;
        }

        friend bool operator==(const QuantMatrix&, const QuantMatrix&) = default;

    private:
        Block<int> entries_;
    };

    //=== orthonormal DCT-II / DCT-III ===//

    /// Precomputed separable basis for m x n blocks:
    /// X = C_m * B * C_n^T and B = C_m^T * X * C_n.
    class DctPlan
    {
    public:
        DctPlan(std::size_t m, std::size_t n) : m_(m), n_(n), cm_(basis(m)), cn_(basis(n)) {}

        std::size_t rows() const noexcept
        {
            return m_;
        }
        std::size_t cols() const noexcept
        {
            return n_;
        }

        RealBlock forward(const RealBlock& block) const
        {
            check(block);
            // tmp = B * C_n^T, out = C_m * tmp
            RealBlock tmp(m_, n_);
            for (std::size_t r = 0; r < m_; ++r)
                for (std::size_t k = 0; k < n_; ++k)
                {
                    double acc = 0.0;
                    for (std::size_t c = 0; c < n_; ++c)
                        acc += block(r, c) * cn_(k, c);
                    tmp(r, k) = acc;
                }
            RealBlock out(m_, n_);
            for (std::size_t k = 0; k < m_; ++k)
                for (std::size_t c = 0; c < n_; ++c)
                {
                    double acc = 0.0;
                    for (std::size_t r = 0; r < m_; ++r)
                        acc += cm_(k, r) * tmp(r, c);
                    out(k, c) = acc;
                }
            return out;
        }

        RealBlock inverse(const RealBlock& coeffs) const
        {
            check(coeffs);
            RealBlock tmp(m_, n_);
            for (std::size_t k = 0; k < m_; ++k)
                for (std::size_t c = 0; c < n_; ++c)
                {
                    double acc = 0.0;
                    for (std::size_t l = 0; l < n_; ++l)
                        acc += coeffs(k, l) * cn_(l, c);
                    tmp(k, c) = acc;
                }
            RealBlock out(m_, n_);
            for (std::size_t r = 0; r < m_; ++r)
                for (std::size_t c = 0; c < n_; ++c)
                {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < m_; ++k)
                        acc += cm_(k, r) * tmp(k, c);
                    out(r, c) = acc;
                }
            return out;
        }

    private:
        static RealBlock basis(std::size_t size)
        {
            RealBlock c(size, size);
            const double n = static_cast<double>(size);
            for (std::size_t k = 0; k < size; ++k)
            {
                const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
                for (std::size_t i = 0; i < size; ++i)
                    c(k, i) = scale
                              * std::cos(std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0)
                                         * static_cast<double>(k) / (2.0 * n));
            }
            return c;
        }

        void check(const RealBlock& b) const
        {
            if (b.rows() != m_ || b.cols() != n_)
                throw Error(ErrorCode::DimensionMismatch, "block shape does not match DCT plan");
        }

        std::size_t m_, n_;
        RealBlock   cm_, cn_;
    };

    inline RealBlock dct2(const RealBlock& block)
    {
        return DctPlan(block.rows(), block.cols()).forward(block);
    }

    inline RealBlock idct2(const RealBlock& coeffs)
    {
        return DctPlan(coeffs.rows(), coeffs.cols()).inverse(coeffs);
    }

    //=== quantization ===//
    inline CoefficientBlock quantize(const RealBlock& coeffs, const QuantMatrix& q)
    {
        if (!coeffs.same_shape(q))
            throw Error(ErrorCode::DimensionMismatch, "coefficient block and Q differ in shape");
        CoefficientBlock out(coeffs.rows(), coeffs.cols());
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            out[i] = static_cast<int>(std::round(coeffs[i] / q[i])); // half away from zero
        return out;
    }

    inline RealBlock dequantize(const CoefficientBlock& levels, const QuantMatrix& q)
    {
        if (!levels.same_shape(q))
            throw Error(ErrorCode::DimensionMismatch, "coefficient block and Q differ in shape");
        RealBlock out(levels.rows(), levels.cols());
        for (std::size_t i = 0; i < levels.size(); ++i)
            out[i] = static_cast<double>(levels[i]) * q[i];
        return out;
    }

    //=== quantization matrices ===//

    // ITU-T T.81 Annex K.1 luminance table
    inline constexpr std::array<int, 64> jpeg_luminance_table = {
        16, 11, 10, 16, 24,  40,  51,  61,  //
        12, 12, 14, 19, 26,  58,  60,  55,  //
        14, 13, 16, 24, 40,  57,  69,  56,  //
        14, 17, 22, 29, 51,  87,  80,  62,  //
        18, 22, 37, 56, 68,  109, 103, 77,  //
        24, 35, 55, 64, 81,  104, 113, 92,  //
        49, 64, 78, 87, 103, 121, 120, 101, //
        72, 92, 95, 98, 112, 100, 103, 99};

    /// Luminance table resampled bilinearly to m x n (sample centres aligned),
    /// then scaled with the usual JPEG quality rule and clamped to [1, 255].
    inline QuantMatrix derive_q(std::size_t m, std::size_t n, int quality)
    {
        if (m < 2 || n < 2)
            throw Error(ErrorCode::BlockTooLarge, "block dimensions must be at least 2x2");
        quality = std::clamp(quality, 1, 100);
        const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;

        auto source = [](std::size_t target, std::size_t count) {
            const double pos = (static_cast<double>(target) + 0.5) * 8.0 / static_cast<double>(count) - 0.5;
            return std::clamp(pos, 0.0, 7.0);
        };

        Block<int> entries(m, n);
        for (std::size_t r = 0; r < m; ++r)
        {
            const double y = source(r, m);
            const auto   y0 = static_cast<std::size_t>(std::floor(y));
            const auto   y1 = std::min<std::size_t>(y0 + 1, 7);
            const double fy = y - static_cast<double>(y0);
            for (std::size_t c = 0; c < n; ++c)
            {
                const double x = source(c, n);
                const auto   x0 = static_cast<std::size_t>(std::floor(x));
                const auto   x1 = std::min<std::size_t>(x0 + 1, 7);
                const double fx = x - static_cast<double>(x0);
                auto t = [](std::size_t row, std::size_t col) {
                    return static_cast<double>(jpeg_luminance_table[row * 8 + col]);
                };
                const double base = (1 - fy) * ((1 - fx) * t(y0, x0) + fx * t(y0, x1))
                                    + fy * ((1 - fx) * t(y1, x0) + fx * t(y1, x1));
                const long rounded = std::lround(base);
                entries(r, c) = static_cast<int>(std::clamp((rounded * scale + 50) / 100, 1L, 255L));
            }
        }
        return QuantMatrix(std::move(entries));
    }

    /// Text form: "m n" on the first line, then m rows of n integers.
    inline QuantMatrix parse_q_text(const std::string& text)
    {
        std::istringstream in(text);
        std::size_t        m = 0, n = 0;
        if (!(in >> m >> n) || m < 2 || n < 2 || m > 64 || n > 64)
            throw Error(ErrorCode::DimensionMismatch, "Q file header must be \"m n\" with 2 <= m,n <= 64");
        Block<int> entries(m, n);
        for (auto& e : entries)
            if (!(in >> e))
                throw Error(ErrorCode::DimensionMismatch, "Q file has fewer than m*n entries");
        std::string extra;
        if (in >> extra)
            throw Error(ErrorCode::DimensionMismatch, "Q file has trailing data");
        return QuantMatrix(std::move(entries));
    }

    inline QuantMatrix load_q_file(const std::filesystem::path& path)
    {
        std::ifstream in(path);
        if (!in)
            throw Error(ErrorCode::IoFailure, "cannot open Q file " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_q_text(buf.str());
    }

    inline std::string format_q_text(const QuantMatrix& q)
    {
        std::ostringstream out;
        out << q.rows() << ' ' << q.cols() << '\n';
        for (std::size_t r = 0; r < q.rows(); ++r)
        {
            for (std::size_t c = 0; c < q.cols(); ++c)
                out << (c ? " " : "") << q(r, c);
            out << '\n';
        }
        return out.str();
    }

    /// JPEG-style zig-zag over an m x n block, generalised by anti-diagonals.
    inline std::vector<std::pair<std::size_t, std::size_t>> zigzag_order(std::size_t m, std::size_t n)
    {
        std::vector<std::pair<std::size_t, std::size_t>> order;
        order.reserve(m * n);
        for (std::size_t s = 0; s + 1 < m + n; ++s)
        {
            const std::size_t r_lo = s >= n ? s - n + 1 : 0;
            const std::size_t r_hi = std::min(s, m - 1);
            if (s % 2 == 0)
                for (std::size_t r = r_hi + 1; r-- > r_lo;)
                    order.emplace_back(r, s - r);
            else
                for (std::size_t r = r_lo; r <= r_hi; ++r)
                    order.emplace_back(r, s - r);
        }
        return order;
    }
} // namespace sdsa

#endif // SDSA_DCT_HPP_INCLUDED

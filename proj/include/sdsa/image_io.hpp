#ifndef SDSA_IMAGE_IO_HPP_INCLUDED
#define SDSA_IMAGE_IO_HPP_INCLUDED

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include <sdsa/error.hpp>
#include <sdsa/image.hpp>

namespace sdsa
{
    using AnyImage = std::variant<GrayImage, ColorImage>;

    inline std::size_t width_of(const AnyImage& image)
    {
        return std::visit([](const auto& img) { return img.width(); }, image);
    }
    inline std::size_t height_of(const AnyImage& image)
    {
        return std::visit([](const auto& img) { return img.height(); }, image);
    }

    enum class FileFormat
    {
        png,
        jpeg,
    };

    namespace detail
    {
        inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path)
        {
            std::ifstream in(path, std::ios::binary);
            if (!in)
                throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
            std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                            std::istreambuf_iterator<char>());
            if (in.bad())
                throw Error(ErrorCode::IoFailure, "read error on " + path.string());
            return bytes;
        }

        /// Runs `write(tmp_path)` and renames the result over `path` only if it
        /// succeeded, so a failed command never leaves a partial file behind.
        template <typename Fn>
        void write_atomically(const std::filesystem::path& path, Fn&& write)
        {
            std::random_device rd;
            auto tmp = path;
            tmp += ".tmp" + std::to_string(rd());
            try
            {
                write(tmp);
                std::error_code ec;
                std::filesystem::rename(tmp, path, ec);
                if (ec)
                    throw Error(ErrorCode::IoFailure,
                                "cannot move output into place at " + path.string());
            }
            catch (...)
            {
                std::error_code ignored;
                std::filesystem::remove(tmp, ignored);
                throw;
            }
        }

        inline void write_bytes(const std::filesystem::path& path, const void* data, std::size_t size)
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw Error(ErrorCode::IoFailure, "cannot create " + path.string());
            out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
            out.flush();
            if (!out)
                throw Error(ErrorCode::IoFailure, "write error on " + path.string());
        }

        inline std::vector<std::uint8_t> interleave(const ColorImage& image)
        {
            std::vector<std::uint8_t> rgb(image.r.size() * 3);
            for (std::size_t i = 0; i < image.r.size(); ++i)
            {
                rgb[3 * i] = image.r.samples()[i];
                rgb[3 * i + 1] = image.g.samples()[i];
                rgb[3 * i + 2] = image.b.samples()[i];
            }
            return rgb;
        }

        inline ColorImage deinterleave(std::size_t w, std::size_t h, const std::uint8_t* rgb)
        {
            ColorImage out(GrayImage(w, h), GrayImage(w, h), GrayImage(w, h));
            for (std::size_t i = 0; i < w * h; ++i)
            {
                out.r.samples()[i] = rgb[3 * i];
                out.g.samples()[i] = rgb[3 * i + 1];
                out.b.samples()[i] = rgb[3 * i + 2];
            }
            return out;
        }

        //=== PNG ===//
        inline AnyImage decode_png(const std::vector<std::uint8_t>& bytes)
        {
            png_image img;
            std::memset(&img, 0, sizeof(img));
            img.version = PNG_IMAGE_VERSION;
            if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size()))
                throw Error(ErrorCode::IoFailure, std::string("PNG header: ") + img.message);

            const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
            img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
            std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(img));
            if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr))
            {
                std::string msg = img.message;
                png_image_free(&img);
                throw Error(ErrorCode::IoFailure, "PNG data: " + msg);
            }
            if (color)
                return deinterleave(img.width, img.height, buffer.data());
            return GrayImage(img.width, img.height, std::move(buffer));
        }

        inline void encode_png(const std::filesystem::path& path, png_uint_32 w, png_uint_32 h,
                               std::uint32_t format, const std::uint8_t* data)
        {
            png_image img;
            std::memset(&img, 0, sizeof(img));
            img.version = PNG_IMAGE_VERSION;
            img.width = w;
            img.height = h;
            img.format = format;
            png_alloc_size_t size = 0;
            if (!png_image_write_to_memory(&img, nullptr, &size, 0, data, 0, nullptr))
                throw Error(ErrorCode::IoFailure, std::string("PNG encode: ") + img.message);
            std::vector<std::uint8_t> out(size);
            if (!png_image_write_to_memory(&img, out.data(), &size, 0, data, 0, nullptr))
                throw Error(ErrorCode::IoFailure, std::string("PNG encode: ") + img.message);
            write_bytes(path, out.data(), size);
        }

        //=== JPEG ===//
        struct JpegErrorManager
        {
            jpeg_error_mgr pub;
            std::jmp_buf   jump;
            char           message[JMSG_LENGTH_MAX];
        };

        extern "C" inline void jpeg_error_exit(j_common_ptr cinfo)
        {
            auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
            (*cinfo->err->format_message)(cinfo, err->message);
            std::longjmp(err->jump, 1);
        }

        // Warnings such as premature end of data are treated as hard errors:
        // libjpeg would otherwise pad a truncated scan with gray.
        extern "C" inline void jpeg_emit_message(j_common_ptr cinfo, int level)
        {
            if (level < 0)
                jpeg_error_exit(cinfo);
        }

        inline AnyImage decode_jpeg(const std::vector<std::uint8_t>& bytes)
        {
            jpeg_decompress_struct cinfo;
            JpegErrorManager       jerr;
            std::vector<std::uint8_t> buffer;
            std::size_t               w = 0, h = 0, comps = 0;

            cinfo.err = jpeg_std_error(&jerr.pub);
            jerr.pub.error_exit = jpeg_error_exit;
            jerr.pub.emit_message = jpeg_emit_message;
            if (setjmp(jerr.jump))
            {
                jpeg_destroy_decompress(&cinfo);
                throw Error(ErrorCode::IoFailure, std::string("JPEG: ") + jerr.message);
            }
            jpeg_create_decompress(&cinfo);
            jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
            jpeg_read_header(&cinfo, TRUE);
            cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
            cinfo.dct_method = JDCT_ISLOW;
            jpeg_start_decompress(&cinfo);
            w = cinfo.output_width;
            h = cinfo.output_height;
            comps = static_cast<std::size_t>(cinfo.output_components);
            buffer.resize(w * h * comps);
            while (cinfo.output_scanline < cinfo.output_height)
            {
                JSAMPROW row = buffer.data() + std::size_t(cinfo.output_scanline) * w * comps;
                jpeg_read_scanlines(&cinfo, &row, 1);
            }
            jpeg_finish_decompress(&cinfo);
            jpeg_destroy_decompress(&cinfo);

            if (comps == 1)
                return GrayImage(w, h, std::move(buffer));
            return deinterleave(w, h, buffer.data());
        }

        inline std::vector<std::uint8_t> encode_jpeg(std::size_t w, std::size_t h, int comps,
                                                     const std::uint8_t* data, int quality)
        {
            jpeg_compress_struct cinfo;
            JpegErrorManager     jerr;
            unsigned char*       out = nullptr;
            unsigned long        out_size = 0;

            cinfo.err = jpeg_std_error(&jerr.pub);
            jerr.pub.error_exit = jpeg_error_exit;
            if (setjmp(jerr.jump))
            {
                jpeg_destroy_compress(&cinfo);
                std::free(out);
                throw Error(ErrorCode::IoFailure, std::string("JPEG encode: ") + jerr.message);
            }
            jpeg_create_compress(&cinfo);
            jpeg_mem_dest(&cinfo, &out, &out_size);
            cinfo.image_width = static_cast<JDIMENSION>(w);
            cinfo.image_height = static_cast<JDIMENSION>(h);
            cinfo.input_components = comps;
            cinfo.in_color_space = comps == 1 ? JCS_GRAYSCALE : JCS_RGB;
            jpeg_set_defaults(&cinfo);
            cinfo.dct_method = JDCT_ISLOW;
            jpeg_set_quality(&cinfo, quality, TRUE);
            jpeg_start_compress(&cinfo, TRUE);
            while (cinfo.next_scanline < cinfo.image_height)
            {
                auto* row = const_cast<JSAMPROW>(data + std::size_t(cinfo.next_scanline) * w
                                                            * static_cast<std::size_t>(comps));
                jpeg_write_scanlines(&cinfo, &row, 1);
            }
            jpeg_finish_compress(&cinfo);
            jpeg_destroy_compress(&cinfo);

            std::vector<std::uint8_t> bytes(out, out + out_size);
            std::free(out);
            return bytes;
        }
    } // namespace detail

    inline AnyImage decode_image(const std::vector<std::uint8_t>& bytes)
    {
        static constexpr std::uint8_t png_sig[] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
        if (bytes.size() >= sizeof(png_sig) && std::memcmp(bytes.data(), png_sig, sizeof(png_sig)) == 0)
            return detail::decode_png(bytes);
        if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF)
            return detail::decode_jpeg(bytes);
        throw Error(ErrorCode::UnsupportedFormat, "not a PNG or JPEG stream");
    }

    inline AnyImage load_image(const std::filesystem::path& path)
    {
        return decode_image(detail::read_file(path));
    }

    inline GrayImage load_gray(const std::filesystem::path& path)
    {
        auto image = load_image(path);
        if (auto* gray = std::get_if<GrayImage>(&image))
            return std::move(*gray);
        return rgb_to_ycbcr(std::get<ColorImage>(image)).y;
    }

    /// Lossless container (PNG).
    inline void save_lossless(const GrayImage& image, const std::filesystem::path& path)
    {
        detail::write_atomically(path, [&](const auto& tmp) {
            detail::encode_png(tmp, static_cast<png_uint_32>(image.width()),
                               static_cast<png_uint_32>(image.height()), PNG_FORMAT_GRAY,
                               image.samples().data());
        });
    }

    inline void save_lossless(const ColorImage& image, const std::filesystem::path& path)
    {
        auto rgb = detail::interleave(image);
        detail::write_atomically(path, [&](const auto& tmp) {
            detail::encode_png(tmp, static_cast<png_uint_32>(image.width()),
                               static_cast<png_uint_32>(image.height()), PNG_FORMAT_RGB, rgb.data());
        });
    }

    inline void check_jpeg_quality(int quality)
    {
        if (quality < 1 || quality > 100)
            throw Error(ErrorCode::UnsupportedFormat,
                        "JPEG quality must be in [1,100], got " + std::to_string(quality));
    }

    /// Baseline sequential JPEG held in memory.
    inline std::vector<std::uint8_t> encode_jpeg(const GrayImage& image, int quality)
    {
        check_jpeg_quality(quality);
        return detail::encode_jpeg(image.width(), image.height(), 1, image.samples().data(), quality);
    }

    inline std::vector<std::uint8_t> encode_jpeg(const ColorImage& image, int quality)
    {
        check_jpeg_quality(quality);
        auto rgb = detail::interleave(image);
        return detail::encode_jpeg(image.width(), image.height(), 3, rgb.data(), quality);
    }

    template <typename Image>
    void save_jpeg(const Image& image, const std::filesystem::path& path, int quality)
    {
        auto bytes = encode_jpeg(image, quality);
        detail::write_atomically(path, [&](const auto& tmp) {
            detail::write_bytes(tmp, bytes.data(), bytes.size());
        });
    }

    inline void save_lossless(const AnyImage& image, const std::filesystem::path& path)
    {
        std::visit([&](const auto& img) { save_lossless(img, path); }, image);
    }

    inline void save_jpeg(const AnyImage& image, const std::filesystem::path& path, int quality)
    {
        std::visit([&](const auto& img) { save_jpeg(img, path, quality); }, image);
    }
} // namespace sdsa

#endif // SDSA_IMAGE_IO_HPP_INCLUDED

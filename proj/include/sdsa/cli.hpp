#ifndef SDSA_CLI_HPP_INCLUDED
#define SDSA_CLI_HPP_INCLUDED

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <sdsa/analysis.hpp>
#include <sdsa/codec.hpp>
#include <sdsa/image_io.hpp>
#include <sdsa/sdsa.hpp>
#include <sdsa/secret_file.hpp>
#include <sdsa/spatial_lsb.hpp>

// Command-line front end. Every command prints machine-readable key=value
// lines on `out`; diagnostics go to `err`.
//
// Exit codes:
//   0 success            4 image or geometry error      7 wrong key (BadPadding)
//   1 internal error     5 wrong parameters (BadMagic)  8 bad secret file / key
//   2 usage error        6 corrupted payload (BadCrc)
//   3 payload exceeds capacity

namespace sdsa::cli
{
    enum ExitCode : int
    {
        ok = 0,
        internal = 1,
        usage = 2,
        capacity_exceeded = 3,
        image_error = 4,
        bad_magic = 5,
        bad_crc = 6,
        bad_padding = 7,
        bad_secret = 8,
    };

    inline int exit_code_for(ErrorCode code) noexcept
    {
        switch (code)
        {
        case ErrorCode::PayloadExceedsCapacity:
            return capacity_exceeded;
        case ErrorCode::OffsetsTooLarge:
        case ErrorCode::GeometryMismatch:
        case ErrorCode::BlockTooLarge:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::UnsupportedFormat:
        case ErrorCode::IoFailure:
        case ErrorCode::ImageTooSmall:
            return image_error;
        case ErrorCode::BadMagic:
        case ErrorCode::NotEnoughBlocks:
            return bad_magic;
        case ErrorCode::BadCrc:
            return bad_crc;
        case ErrorCode::BadPadding:
            return bad_padding;
        case ErrorCode::BadKeyLength:
        case ErrorCode::BadSecretFile:
            return bad_secret;
        case ErrorCode::EmptyPayload:
            return usage;
        }
        return internal;
    }

    namespace detail
    {
        struct Secret
        {
            SharedSecretFile file;
            StegoParams      params;
        };

        inline Secret resolve_secret(const std::string& option)
        {
            std::string path = option;
            if (path.empty())
                if (const char* env = std::getenv("SDSA_SECRET"))
                    path = env;
            if (path.empty())
                throw Error(ErrorCode::BadSecretFile, "no secret file: pass --secret or set SDSA_SECRET");
            auto file = load_secret(path);
            auto params = file.to_params(std::filesystem::path(path).parent_path());
            return {std::move(file), std::move(params)};
        }

        inline std::uint64_t match_seed(const StegoParams& params) noexcept
        {
            std::uint64_t seed = 0;
            for (int i = 0; i < 8; ++i)
                seed = seed << 8 | params.selection_nonce[static_cast<std::size_t>(i)];
            return seed;
        }

        inline const GrayImage& require_gray(const AnyImage& image)
        {
            if (const auto* gray = std::get_if<GrayImage>(&image))
                return *gray;
            throw Error(ErrorCode::UnsupportedFormat, "spatial LSB schemes need a grayscale cover");
        }

        inline std::size_t scheme_capacity(const AnyImage& cover, const Secret& secret)
        {
            if (is_spatial(secret.file.scheme))
                return lsb::capacity(require_gray(cover));
            return capacity(cover, secret.params);
        }

        inline AnyImage scheme_embed(const AnyImage& cover, const Secret& secret, const BitStream& bits)
        {
            const auto& p = secret.params;
            switch (secret.file.scheme)
            {
            case Scheme::spatial_lsb_replace:
                return lsb::replace_embed(require_gray(cover), bits, p.selection_key());
            case Scheme::spatial_lsb_match:
                return lsb::match_embed(require_gray(cover), bits, p.selection_key(), match_seed(p));
            default:
                return sdsa_embed(cover, p, bits).image;
            }
        }

        inline BitStream scheme_extract(const AnyImage& stego, const Secret& secret, std::size_t bits)
        {
            if (is_spatial(secret.file.scheme))
                return lsb::extract(require_gray(stego), std::min(bits, require_gray(stego).size()),
                                    secret.params.selection_key());
            return sdsa_extract(stego, secret.params, bits);
        }

        inline std::string format_db(double db)
        {
            if (std::isinf(db))
                return "inf";
            std::ostringstream s;
            s << std::fixed << std::setprecision(4) << db;
            return s.str();
        }

        inline std::string format_value(double v)
        {
            std::ostringstream s;
            s << std::fixed << std::setprecision(6) << v;
            return s.str();
        }
    } // namespace detail

    //=== commands ===//
    inline int cmd_keygen(const std::filesystem::path& out_path, int key_bits, std::ostream& out)
    {
        const auto secret = generate_secret(key_bits);
        save_secret(secret, out_path);
        out << "secret_file=" << out_path.string() << '\n' << "key_bits=" << key_bits << '\n';
        return ok;
    }

    struct EmbedOptions
    {
        std::filesystem::path cover;
        std::filesystem::path output;
        std::string           secret;
        std::string           message_path;
        std::optional<std::string> text;
        int                   jpeg_quality = 0; // 0: lossless container
    };

    inline int cmd_embed(const EmbedOptions& opt, std::ostream& out, std::ostream& err)
    {
        const auto secret = detail::resolve_secret(opt.secret);
        std::vector<std::uint8_t> message;
        if (opt.text)
            message.assign(opt.text->begin(), opt.text->end());
        else
            message = sdsa::detail::read_file(opt.message_path);
        if (message.empty())
            throw Error(ErrorCode::EmptyPayload, "message is empty");

        const auto cover = load_image(opt.cover);
        const auto bits = codec::encode_payload(message, secret.params.key);
        const auto available = detail::scheme_capacity(cover, secret);
        if (bits.size() > available)
            throw Error(ErrorCode::PayloadExceedsCapacity, std::to_string(bits.size()) + " payload bits exceed "
                                                               + std::to_string(available) + " available");

        const auto stego = detail::scheme_embed(cover, secret, bits);
        if (opt.jpeg_quality > 0)
        {
            err << "warning: lossy container: payload integrity not guaranteed\n";
            save_jpeg(stego, opt.output, opt.jpeg_quality);
        }
        else
            save_lossless(stego, opt.output);

        out << "capacity_bits=" << available << '\n'
            << "payload_bits=" << bits.size() << '\n'
            << "capacity_used=" << detail::format_value(double(bits.size()) / double(available)) << '\n'
            << "container=" << (opt.jpeg_quality > 0 ? "jpeg" : "lossless") << '\n';
        return ok;
    }

    inline int cmd_extract(const std::filesystem::path& stego_path, const std::string& secret_path,
                           const std::filesystem::path& out_path, std::ostream& out)
    {
        const auto secret = detail::resolve_secret(secret_path);
        const auto stego = load_image(stego_path);
        const auto header = codec::parse_header(detail::scheme_extract(stego, secret, codec::header_bits));
        const auto bits = detail::scheme_extract(stego, secret, codec::frame_bits(header));
        codec::decode_to_text_file(bits, secret.params.key, out_path);
        out << "payload_bits=" << bits.size() << '\n' << "output=" << out_path.string() << '\n';
        return ok;
    }

    inline int cmd_capacity(const std::filesystem::path& cover_path, const std::string& secret_path,
                            std::ostream& out)
    {
        const auto secret = detail::resolve_secret(secret_path);
        const auto cover = load_image(cover_path);
        const auto bits = detail::scheme_capacity(cover, secret);
        // frame = header + IV + 16 * (len / 16 + 1)
        const auto blocks = bits / 8 >= codec::header_bytes + 16 ? (bits / 8 - codec::header_bytes - 16) / 16 : 0;
        out << "capacity_bits=" << bits << '\n' << "max_message_bytes=" << (blocks > 0 ? blocks * 16 - 1 : 0) << '\n';
        return ok;
    }

    inline int cmd_psnr(const std::filesystem::path& a, const std::filesystem::path& b, std::ostream& out)
    {
        out << "psnr_db=" << detail::format_db(analysis::psnr(load_image(a), load_image(b))) << '\n';
        return ok;
    }

    inline int cmd_analyze(const std::filesystem::path& cover_path, const std::string& secret_path, double rate,
                           std::size_t trials, std::ostream& out)
    {
        const auto secret = detail::resolve_secret(secret_path);
        const auto cover = load_gray(cover_path);
        const auto r = analysis::detectability_mean(cover, secret.params, rate, trials);
        out << "payload_bits=" << r.payload_bits << '\n'
            << "trials=" << std::max<std::size_t>(trials, 1) << '\n'
            << "d_cover=" << detail::format_value(r.d_cover) << '\n'
            << "d_synchronized=" << detail::format_value(r.synchronized.d_stego) << '\n'
            << "d_sdsa=" << detail::format_value(r.sdsa.d_stego) << '\n'
            << "psnr_synchronized_db=" << detail::format_db(r.synchronized.psnr_db) << '\n'
            << "psnr_sdsa_db=" << detail::format_db(r.sdsa.psnr_db) << '\n';
        return ok;
    }

    inline int cmd_berscan(const std::filesystem::path& cover_path, const std::string& secret_path,
                           double fraction, const std::vector<int>& qualities, std::ostream& out)
    {
        const auto secret = detail::resolve_secret(secret_path);
        const auto cover = load_image(cover_path);
        const auto cap = capacity(cover, secret.params);
        const auto payload = analysis::keyed_payload(
            secret.params, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(cap))));
        out << "payload_bits=" << payload.size() << '\n';
        out << "ber_lossless=" << detail::format_value(analysis::ber_after_jpeg(cover, secret.params, payload, 0))
            << '\n';
        for (int q : qualities)
        {
            check_jpeg_quality(q);
            out << "ber_q" << q << '=' << detail::format_value(analysis::ber_after_jpeg(cover, secret.params, payload, q))
                << '\n';
        }
        return ok;
    }

    //=== dispatcher ===//
    inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
    {
        CLI::App app{"Encrypt a message and hide it in an image with spatially desynchronized DCT embedding"};
        app.name("sdsa");
        app.require_subcommand(1);

        std::string secret;
        auto        add_secret = [&](CLI::App* cmd) {
            cmd->add_option("--secret", secret, "shared-secret file (default: $SDSA_SECRET)");
        };

        std::string keygen_out;
        int         key_bits = 128;
        auto*       keygen = app.add_subcommand("keygen", "write a fresh shared-secret file");
        keygen->add_option("output", keygen_out, "secret file to create")->required();
        keygen->add_option("--bits", key_bits, "AES key size")->check(CLI::IsMember({128, 192, 256}));

        EmbedOptions embed_opt;
        std::string  text;
        auto*        embed = app.add_subcommand("embed", "encrypt a message and hide it in a cover image");
        embed->add_option("cover", embed_opt.cover, "cover image (PNG or JPEG)")->required();
        embed->add_option("output", embed_opt.output, "stego image to write")->required();
        add_secret(embed);
        auto* msg = embed->add_option("--message", embed_opt.message_path, "file holding the message");
        auto* txt = embed->add_option("--text", text, "message given inline");
        msg->excludes(txt);
        embed->add_option("--jpeg", embed_opt.jpeg_quality, "write baseline JPEG at this quality (lossy)")
            ->check(CLI::Range(1, 100));

        std::string extract_in, extract_out;
        auto*       extract = app.add_subcommand("extract", "recover the hidden message");
        extract->add_option("stego", extract_in, "stego image")->required();
        extract->add_option("output", extract_out, "file to write the message to")->required();
        add_secret(extract);

        std::string cap_in;
        auto*       cap = app.add_subcommand("capacity", "usable payload bits of a cover");
        cap->add_option("cover", cap_in)->required();
        add_secret(cap);

        std::string psnr_a, psnr_b;
        auto*       psnr = app.add_subcommand("psnr", "peak signal-to-noise ratio of two images");
        psnr->add_option("a", psnr_a)->required();
        psnr->add_option("b", psnr_b)->required();

        std::string analyze_in;
        double      rate = 0.05;
        std::size_t trials = 1;
        auto*       analyze = app.add_subcommand("analyze", "calibration distance, synchronized grid vs SDSA");
        analyze->add_option("cover", analyze_in)->required();
        add_secret(analyze);
        analyze->add_option("--rate", rate, "bits per usable coefficient")->check(CLI::Range(0.0, 1.0));
        analyze->add_option("--trials", trials, "average over this many derived keys");

        std::string      ber_in;
        double           fraction = 0.25;
        std::vector<int> qualities;
        auto*            berscan = app.add_subcommand("berscan", "payload bit-error rate after JPEG recompression");
        berscan->add_option("cover", ber_in)->required();
        berscan->add_option("qualities", qualities, "JPEG qualities to test")->required();
        add_secret(berscan);
        berscan->add_option("--fraction", fraction, "payload as a fraction of capacity")->check(CLI::Range(0.0, 1.0));

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try
        {
            app.parse(reversed);
        }
        catch (const CLI::CallForHelp&)
        {
            out << app.help();
            return ok;
        }
        catch (const CLI::ParseError& e)
        {
            err << e.what() << '\n';
            return usage;
        }

        try
        {
            if (*keygen)
                return cmd_keygen(keygen_out, key_bits, out);
            if (*embed)
            {
                if (!*msg && !*txt)
                {
                    err << "embed: one of --message or --text is required\n";
                    return usage;
                }
                embed_opt.secret = secret;
                if (*txt)
                    embed_opt.text = text;
                return cmd_embed(embed_opt, out, err);
            }
            if (*extract)
                return cmd_extract(extract_in, secret, extract_out, out);
            if (*cap)
                return cmd_capacity(cap_in, secret, out);
            if (*psnr)
                return cmd_psnr(psnr_a, psnr_b, out);
            if (*analyze)
                return cmd_analyze(analyze_in, secret, rate, trials, out);
            if (*berscan)
                return cmd_berscan(ber_in, secret, fraction, qualities, out);
        }
        catch (const Error& e)
        {
            err << "error: " << e.what() << '\n';
            return exit_code_for(e.code());
        }
        catch (const std::exception& e)
        {
            err << "internal error: " << e.what() << '\n';
            return internal;
        }
        return usage;
    }
} // namespace sdsa::cli

#endif // SDSA_CLI_HPP_INCLUDED

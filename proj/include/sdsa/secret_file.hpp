#ifndef SDSA_SECRET_FILE_HPP_INCLUDED
#define SDSA_SECRET_FILE_HPP_INCLUDED

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include <sdsa/aes.hpp>
#include <sdsa/dct.hpp>
#include <sdsa/error.hpp>
#include <sdsa/image_io.hpp>
#include <sdsa/sdsa.hpp>

namespace sdsa
{
    enum class Scheme
    {
        plus_minus_one_coeff,
        lsb_replace_coeff,
        spatial_lsb_replace,
        spatial_lsb_match,
    };

    inline std::string_view to_string(Scheme s) noexcept
    {
        switch (s)
        {
        case Scheme::plus_minus_one_coeff:
            return "plus_minus_one_coeff";
        case Scheme::lsb_replace_coeff:
            return "lsb_replace_coeff";
        case Scheme::spatial_lsb_replace:
            return "spatial_lsb_replace";
        case Scheme::spatial_lsb_match:
            return "spatial_lsb_match";
        }
        return "";
    }

    inline bool is_spatial(Scheme s) noexcept
    {
        return s == Scheme::spatial_lsb_replace || s == Scheme::spatial_lsb_match;
    }

    /// Flat key=value file holding everything both parties share. Blank lines
    /// and lines starting with '#' are ignored; unknown or repeated keys are
    /// rejected.
    struct SharedSecretFile
    {
        std::string                key_hex;
        std::size_t                u = 4, v = 4, m = 9, n = 9;
        std::optional<int>         quality = 70;
        std::optional<std::string> q_file; // exclusive with quality
        Scheme                     scheme = Scheme::plus_minus_one_coeff;
        std::string                nonce_hex;

        friend bool operator==(const SharedSecretFile&, const SharedSecretFile&) = default;

        /// `base_dir` resolves a relative q_file.
        StegoParams to_params(const std::filesystem::path& base_dir = {}) const
        {
            StegoParams p;
            p.key = aes::key_from_hex(key_hex);
            const auto nonce = aes::from_hex(nonce_hex);
            if (nonce.size() != 12)
                throw Error(ErrorCode::BadSecretFile, "nonce_hex must be 24 hex characters");
            std::copy(nonce.begin(), nonce.end(), p.selection_nonce.begin());
            p.offsets = {u, v};
            p.m = m;
            p.n = n;
            if (q_file)
            {
                std::filesystem::path path(*q_file);
                if (path.is_relative() && !base_dir.empty())
                    path = base_dir / path;
                p.q_source = load_q_file(path);
            }
            else
                p.q_source = quality.value_or(70);
            p.scheme = scheme == Scheme::lsb_replace_coeff ? CoeffScheme::lsb_replace : CoeffScheme::plus_minus_one;
            return p;
        }
    };

    namespace detail
    {
        inline std::string_view trim(std::string_view s) noexcept
        {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string_view::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        }

        inline std::size_t parse_size(std::string_view key, const std::string& value)
        {
            std::size_t pos = 0;
            unsigned long long parsed = 0;
            try
            {
                parsed = std::stoull(value, &pos);
            }
            catch (const std::exception&)
            {
                pos = 0;
            }
            if (pos == 0 || pos != value.size() || value.front() == '-')
                throw Error(ErrorCode::BadSecretFile, std::string(key) + " must be a non-negative integer");
            return static_cast<std::size_t>(parsed);
        }
    } // namespace detail

    inline SharedSecretFile parse_secret(const std::string& text)
    {
        std::map<std::string, std::string, std::less<>> fields;
        std::istringstream in(text);
        std::string        line;
        std::size_t        lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            const auto body = detail::trim(line);
            if (body.empty() || body.front() == '#')
                continue;
            const auto eq = body.find('=');
            if (eq == std::string_view::npos)
                throw Error(ErrorCode::BadSecretFile, "line " + std::to_string(lineno) + ": expected key=value");
            std::string key(detail::trim(body.substr(0, eq)));
            std::string value(detail::trim(body.substr(eq + 1)));
            static constexpr std::string_view known[]
                = {"key_hex", "u", "v", "m", "n", "quality", "q_file", "scheme", "nonce_hex"};
            if (std::find(std::begin(known), std::end(known), key) == std::end(known))
                throw Error(ErrorCode::BadSecretFile, "unknown key '" + key + "'");
            if (!fields.emplace(key, value).second)
                throw Error(ErrorCode::BadSecretFile, "duplicate key '" + key + "'");
        }

        SharedSecretFile s;
        auto             take = [&](std::string_view key) -> std::optional<std::string> {
            auto it = fields.find(key);
            if (it == fields.end())
                return std::nullopt;
            return it->second;
        };

        if (auto key = take("key_hex"))
            s.key_hex = *key;
        else
            throw Error(ErrorCode::BadSecretFile, "missing key_hex");
        if (auto nonce = take("nonce_hex"))
            s.nonce_hex = *nonce;
        else
            throw Error(ErrorCode::BadSecretFile, "missing nonce_hex");
        for (auto [name, field] : {std::pair{"u", &s.u}, std::pair{"v", &s.v}, std::pair{"m", &s.m},
                                   std::pair{"n", &s.n}})
            if (auto value = take(name))
                *field = detail::parse_size(name, *value);

        const auto quality = take("quality");
        const auto q_file = take("q_file");
        if (quality && q_file)
            throw Error(ErrorCode::BadSecretFile, "quality and q_file are mutually exclusive");
        if (q_file)
        {
            s.quality.reset();
            s.q_file = *q_file;
        }
        else if (quality)
        {
            const auto q = detail::parse_size("quality", *quality);
            if (q < 1 || q > 100)
                throw Error(ErrorCode::BadSecretFile, "quality must be in [1,100]");
            s.quality = static_cast<int>(q);
        }

        if (auto scheme = take("scheme"))
        {
            bool found = false;
            for (auto candidate : {Scheme::plus_minus_one_coeff, Scheme::lsb_replace_coeff,
                                   Scheme::spatial_lsb_replace, Scheme::spatial_lsb_match})
                if (*scheme == to_string(candidate))
                {
                    s.scheme = candidate;
                    found = true;
                }
            if (!found)
                throw Error(ErrorCode::BadSecretFile, "unknown scheme '" + *scheme + "'");
        }

        // validate key material early so a bad file fails on load
        (void)aes::key_from_hex(s.key_hex);
        if (aes::from_hex(s.nonce_hex).size() != 12)
            throw Error(ErrorCode::BadSecretFile, "nonce_hex must be 24 hex characters");
        return s;
    }

    inline std::string serialize_secret(const SharedSecretFile& s)
    {
        std::ostringstream out;
        out << "key_hex=" << s.key_hex << '\n'
            << "u=" << s.u << '\n'
            << "v=" << s.v << '\n'
            << "m=" << s.m << '\n'
            << "n=" << s.n << '\n';
        if (s.q_file)
            out << "q_file=" << *s.q_file << '\n';
        else
            out << "quality=" << s.quality.value_or(70) << '\n';
        out << "scheme=" << to_string(s.scheme) << '\n' << "nonce_hex=" << s.nonce_hex << '\n';
        return out.str();
    }

    inline SharedSecretFile load_secret(const std::filesystem::path& path)
    {
        std::ifstream in(path);
        if (!in)
            throw Error(ErrorCode::BadSecretFile, "cannot open secret file " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_secret(buf.str());
    }

    inline void save_secret(const SharedSecretFile& s, const std::filesystem::path& path)
    {
        const auto text = serialize_secret(s);
        detail::write_atomically(path, [&](const auto& tmp) {
            detail::write_bytes(tmp, text.data(), text.size());
            std::error_code ec;
            std::filesystem::permissions(tmp, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write,
                                         ec);
        });
    }

    /// Fresh key and nonce from the system entropy source, default geometry.
    inline SharedSecretFile generate_secret(int key_bits)
    {
        if (key_bits != 128 && key_bits != 192 && key_bits != 256)
            throw Error(ErrorCode::BadKeyLength, "key size must be 128, 192 or 256 bits");
        std::random_device        rd;
        std::vector<std::uint8_t> key(static_cast<std::size_t>(key_bits / 8));
        std::vector<std::uint8_t> nonce(12);
        for (auto& b : key)
            b = static_cast<std::uint8_t>(rd());
        for (auto& b : nonce)
            b = static_cast<std::uint8_t>(rd());
        SharedSecretFile s;
        s.key_hex = aes::to_hex(key);
        s.nonce_hex = aes::to_hex(nonce);
        return s;
    }
} // namespace sdsa

#endif // SDSA_SECRET_FILE_HPP_INCLUDED

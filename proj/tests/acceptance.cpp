// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <sdsa/analysis.hpp>
#include <sdsa/cli.hpp>
#include <sdsa/spatial_lsb.hpp>

#include "reference_8x8.hpp"
#include "support.hpp"

namespace
{
    using namespace sdsa;
    using sdsa::test::corpus_image;
    using sdsa::test::corpus_names;
    using Clock = std::chrono::steady_clock;

    struct Outcome
    {
        bool        pass = false;
        std::string detail;
    };

    double seconds_since(Clock::time_point t0)
    {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    std::string fixed(double v, int digits = 4)
    {
        std::ostringstream s;
        s.setf(std::ios::fixed);
        s.precision(digits);
        s << v;
        return s.str();
    }

    int run_cli(const std::vector<std::string>& args)
    {
        std::ostringstream out, err;
        return cli::run(args, out, err);
    }

    std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p)
    {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    StegoParams keyed_params(std::uint8_t seed)
    {
        StegoParams p;
        std::vector<std::uint8_t> key(16);
        for (std::size_t i = 0; i < key.size(); ++i)
            key[i] = static_cast<std::uint8_t>(i * 7 + seed);
        p.key = aes::AesKey(key);
        p.selection_nonce[3] = seed;
        return p;
    }

    //=== 1 ===//
    Outcome aes_known_answers()
    {
        const auto t0 = Clock::now();
        const auto plaintext = aes::from_hex("00112233445566778899aabbccddeeff");
        aes::Block128 pt{};
        std::copy(plaintext.begin(), plaintext.end(), pt.begin());
        struct Kat
        {
            std::size_t bytes;
            int         rounds;
            const char* ct;
        };
        const Kat kats[] = {{16, 10, "69c4e0d86a7b0430d8cdb78070b4c55a"},
                            {24, 12, "dda97ca4864cdfe06eaf70a0ec0d7191"},
                            {32, 14, "8ea2b7ca516745bfeafc49904b496089"}};
        bool ok = true;
        for (const auto& k : kats)
        {
            std::vector<std::uint8_t> key(k.bytes);
            for (std::size_t i = 0; i < key.size(); ++i)
                key[i] = static_cast<std::uint8_t>(i);
            const aes::AesKey aes_key(key);
            const auto        ks = aes::key_expand(aes_key);
            const auto        ct = aes::encrypt_block(pt, ks);
            ok = ok && aes_key.rounds() == k.rounds && ks.size() == std::size_t(k.rounds + 1) && aes::to_hex(ct) == k.ct
                 && aes::decrypt_block(ct, ks) == pt;
        }
        const double secs = seconds_since(t0);
        return {ok && secs < 1.0, "3 vectors, rounds 10/12/14, " + fixed(secs, 4) + " s"};
    }

    //=== 2 ===//
    Outcome cli_round_trips()
    {
        const auto          t0 = Clock::now();
        test::ScratchDir    dir;
        std::mt19937_64     rng(2024);
        std::vector<GrayImage> covers;
        for (auto name : corpus_names)
        {
            covers.push_back(corpus_image(name));
            save_lossless(covers.back(), dir / (std::string(name) + ".png"));
        }

        std::size_t failures = 0, total_bytes = 0;
        for (int trial = 0; trial < 100; ++trial)
        {
            const auto cover_index = static_cast<std::size_t>(trial) % covers.size();
            SharedSecretFile s;
            s.key_hex = aes::to_hex(test::random_bytes(rng, 16 + 8 * (rng() % 3)));
            s.nonce_hex = aes::to_hex(test::random_bytes(rng, 12));
            s.m = 6 + rng() % 11;
            s.n = 6 + rng() % 11;
            s.u = rng() % 8;
            s.v = rng() % 8;
            s.quality = 40 + static_cast<int>(rng() % 56);
            s.scheme = rng() % 2 ? Scheme::plus_minus_one_coeff : Scheme::lsb_replace_coeff;
            save_secret(s, dir / "secret.txt");

            const auto bits = capacity(covers[cover_index], s.to_params());
            const auto blocks = bits / 8 > 29 ? (bits / 8 - 29) / 16 : 0;
            const std::size_t max_bytes = std::min<std::size_t>(4096, blocks > 0 ? blocks * 16 - 1 : 0);
            if (max_bytes == 0)
            {
                ++failures;
                continue;
            }
            const auto message = test::random_bytes(rng, 1 + rng() % max_bytes);
            total_bytes += message.size();
            {
                std::ofstream f(dir / "msg.bin", std::ios::binary);
                f.write(reinterpret_cast<const char*>(message.data()), std::streamsize(message.size()));
            }
            std::filesystem::remove(dir / "out.bin");
            const auto secret = (dir / "secret.txt").string();
            const int  e = run_cli({"embed", (dir / (std::string(corpus_names[cover_index]) + ".png")).string(),
                                    (dir / "stego.png").string(), "--secret", secret, "--message",
                                    (dir / "msg.bin").string()});
            const int  x = run_cli(
                {"extract", (dir / "stego.png").string(), (dir / "out.bin").string(), "--secret", secret});
            if (e != 0 || x != 0 || read_bytes(dir / "out.bin") != message)
                ++failures;
        }
        const double secs = seconds_since(t0);
        return {failures == 0 && secs < 120.0, std::to_string(100 - failures) + "/100 exact, "
                                                   + std::to_string(total_bytes) + " message bytes, " + fixed(secs, 1)
                                                   + " s"};
    }

    //=== 3 ===//
    Outcome reference_equivalence()
    {
        std::size_t matches = 0, runs = 0;
        std::uint8_t seed = 30;
        for (auto name : corpus_names)
        {
            const auto cover = corpus_image(name);
            for (auto scheme : {CoeffScheme::plus_minus_one, CoeffScheme::lsb_replace})
            {
                auto p = keyed_params(seed++);
                p.offsets = {0, 0};
                p.m = p.n = 8;
                p.scheme = scheme;
                const auto bits = test::random_bits(capacity(cover, p) / 4, seed);
                ++runs;
                if (sdsa_embed(cover, p, bits) == test::reference::embed(cover, p, bits))
                    ++matches;
            }
        }
        return {matches == runs, std::to_string(matches) + "/" + std::to_string(runs) + " bit-exact"};
    }

    //=== 4 ===//
    Outcome dct_identities()
    {
        std::mt19937_64                        rng(4);
        std::uniform_real_distribution<double> dist(-128.0, 127.0);
        double inverse = 0.0, parseval = 0.0, dc = 0.0;
        for (std::size_t m = 6; m <= 16; ++m)
            for (std::size_t n = 6; n <= 16; ++n)
            {
                RealBlock x(m, n);
                for (auto& v : x)
                    v = dist(rng);
                const auto c = dct2(x);
                const auto back = idct2(c);
                double ex = 0.0, ec = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i)
                {
                    inverse = std::max(inverse, std::abs(back[i] - x[i]));
                    ex += x[i] * x[i];
                    ec += c[i] * c[i];
                }
                parseval = std::max(parseval, std::abs(ec - ex) / ex);

                const double level = dist(rng);
                RealBlock    flat(m, n);
                for (auto& v : flat)
                    v = level;
                dc = std::max(dc, std::abs(dct2(flat)(0, 0) - level * std::sqrt(double(m * n))));
            }
        return {inverse < 1e-9 && parseval < 1e-6 && dc < 1e-9,
                "6..16 squared: inverse " + fixed(inverse * 1e12, 3) + "e-12, Parseval " + fixed(parseval * 1e12, 3)
                    + "e-12, DC " + fixed(dc * 1e12, 3) + "e-12"};
    }

    //=== 5 ===//
    Outcome desync_sensitivity()
    {
        struct Perturbation
        {
            const char* name;
            std::function<void(StegoParams&)> apply;
        };
        const Perturbation perturbations[] = {
            {"u+1", [](StegoParams& p) { p.offsets.u += 1; }}, {"u-1", [](StegoParams& p) { p.offsets.u -= 1; }},
            {"v+1", [](StegoParams& p) { p.offsets.v += 1; }}, {"v-1", [](StegoParams& p) { p.offsets.v -= 1; }},
            {"m+1", [](StegoParams& p) { p.m += 1; }},         {"m-1", [](StegoParams& p) { p.m -= 1; }},
            {"n+1", [](StegoParams& p) { p.n += 1; }},         {"n-1", [](StegoParams& p) { p.n -= 1; }},
        };
        constexpr std::size_t bits = 3000;
        constexpr int         trials = 10;

        std::vector<double> mean(std::size(perturbations), 0.0);
        for (int t = 0; t < trials; ++t)
        {
            const auto cover = corpus_image(corpus_names[static_cast<std::size_t>(t) % corpus_names.size()]);
            auto       p = keyed_params(static_cast<std::uint8_t>(50 + t));
            // finer tables leave more eligible coefficients on smooth covers
            for (int q = 80; capacity(cover, p) < bits && q <= 95; q += 5)
                p.q_source = q;
            const auto payload = test::random_bits(bits, 500 + static_cast<std::uint64_t>(t));
            const AnyImage stego(sdsa_embed(cover, p, payload));
            for (std::size_t k = 0; k < std::size(perturbations); ++k)
            {
                auto wrong = p;
                perturbations[k].apply(wrong);
                const auto got = sdsa_extract_available(stego, wrong, bits);
                // bits the wrong grid cannot even reach count as coin flips
                mean[k] += (bit_error_rate(payload.prefix(got.size()), got) * double(got.size())
                            + 0.5 * double(bits - got.size()))
                           / double(bits) / trials;
            }
        }
        bool        ok = true;
        std::string detail;
        for (std::size_t k = 0; k < mean.size(); ++k)
        {
            ok = ok && std::abs(mean[k] - 0.5) <= 0.05;
            detail += std::string(k ? ", " : "") + perturbations[k].name + "=" + fixed(mean[k], 3);
        }
        return {ok, std::to_string(bits) + " bits x " + std::to_string(trials) + " trials: " + detail};
    }

    //=== 6 ===//
    Outcome calibration_direction()
    {
        int         wins = 0;
        std::string detail;
        std::uint8_t seed = 1;
        for (auto name : corpus_names)
        {
            const auto r = analysis::detectability_mean(corpus_image(name), keyed_params(seed++), 0.05, 32);
            const bool win = r.sdsa.d_stego < r.synchronized.d_stego;
            wins += win;
            detail += std::string(detail.empty() ? "" : ", ") + name + " " + fixed(r.sdsa.d_stego) + (win ? "<" : ">=")
                      + fixed(r.synchronized.d_stego);
        }
        return {wins >= 4, std::to_string(wins) + "/5 covers (d_sdsa vs d_sync, mean of 32): " + detail};
    }

    //=== 7 ===//
    Outcome recompression()
    {
        bool        ok = true;
        std::string detail;
        std::uint8_t seed = 70;
        for (auto name : corpus_names)
        {
            const auto     cover = corpus_image(name);
            const auto     p = keyed_params(seed++);
            const auto     payload = analysis::keyed_payload(p, capacity(cover, p) / 4);
            const AnyImage any(cover);
            const double   lossless = analysis::ber_after_jpeg(any, p, payload, 0);
            const double   q100 = analysis::ber_after_jpeg(any, p, payload, 100);
            const double   q50 = analysis::ber_after_jpeg(any, p, payload, 50);
            ok = ok && lossless == 0.0 && q100 < q50;
            detail += std::string(detail.empty() ? "" : ", ") + name + " " + fixed(lossless, 3) + "/" + fixed(q100, 3)
                      + "/" + fixed(q50, 3);
        }
        return {ok, "BER lossless/q100/q50: " + detail};
    }

    //=== 8 ===//
    Outcome distortion()
    {
        double      worst = std::numeric_limits<double>::infinity();
        std::string detail;
        std::uint8_t seed = 80;
        for (auto name : corpus_names)
        {
            const auto cover = corpus_image(name);
            const auto p = keyed_params(seed++);
            const auto payload = analysis::keyed_payload(p, capacity(cover, p) / 4);
            const double db = analysis::psnr(cover, sdsa_embed(cover, p, payload));
            worst = std::min(worst, db);
            detail += std::string(detail.empty() ? "" : ", ") + name + " " + fixed(db, 2);
        }
        return {worst > 38.0, "PSNR dB at 25% capacity: " + detail};
    }

    //=== 9 ===//
    Outcome spatial_baselines()
    {
        const auto cover = corpus_image("camera");
        const auto key = keyed_params(90).key;
        const auto bits = test::random_bits(10000, 9);
        const auto replaced = lsb::replace_embed(cover, bits, key);
        const auto matched = lsb::match_embed(cover, bits, key, 99);
        int        worst = 0;
        for (std::size_t i = 0; i < cover.size(); ++i)
            worst = std::max(worst, std::abs(int(matched.samples()[i]) - int(cover.samples()[i])));
        const bool ok = lsb::extract(replaced, bits.size(), key) == bits && lsb::extract(matched, bits.size(), key) == bits
                        && worst <= 1;
        return {ok, "10000 bits both schemes, max |delta| under matching " + std::to_string(worst)};
    }

    //=== 10 ===//
    Outcome double_layer()
    {
        test::ScratchDir dir;
        bool             ok = true;
        std::string      detail;
        std::uint8_t     seed = 100;
        for (auto name : corpus_names)
        {
            save_lossless(corpus_image(name), dir / "cover.png");
            SharedSecretFile s;
            const auto       p = keyed_params(seed++);
            s.key_hex = aes::to_hex(p.key.bytes());
            s.nonce_hex = aes::to_hex(p.selection_nonce);
            save_secret(s, dir / "secret.txt");
            const auto stego = (dir / "stego.png").string();
            if (run_cli({"embed", (dir / "cover.png").string(), stego, "--secret", (dir / "secret.txt").string(),
                         "--text", "the eagle lands at dawn"})
                != 0)
            {
                ok = false;
                detail += std::string(detail.empty() ? "" : ", ") + name + " embed failed";
                continue;
            }

            auto extract_with = [&](const SharedSecretFile& variant) {
                save_secret(variant, dir / "variant.txt");
                return run_cli({"extract", stego, (dir / "out.txt").string(), "--secret", (dir / "variant.txt").string()});
            };

            std::vector<int> codes;
            auto             key_flip = s;
            auto             key_bytes = aes::from_hex(s.key_hex);
            key_bytes[5] ^= 0x10;
            key_flip.key_hex = aes::to_hex(key_bytes);
            codes.push_back(extract_with(key_flip));
            for (auto field : {&SharedSecretFile::u, &SharedSecretFile::v, &SharedSecretFile::m, &SharedSecretFile::n})
            {
                auto geometry = s;
                geometry.*field += 1;
                codes.push_back(extract_with(geometry));
            }
            const bool cover_ok = codes[0] == 7 && std::all_of(codes.begin() + 1, codes.end(), [](int c) { return c == 5; })
                                  && extract_with(s) == 0;
            ok = ok && cover_ok;
            std::string list;
            for (int c : codes)
                list += std::to_string(c);
            detail += std::string(detail.empty() ? "" : ", ") + name + " " + list;
        }
        return {ok, "exit codes key,u,v,m,n: " + detail};
    }
} // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"AES FIPS-197 known answers", aes_known_answers},
        {"CLI round trip, 100 random tuples", cli_round_trips},
        {"8x8 synchronized reference equivalence", reference_equivalence},
        {"DCT identities 6x6..16x16", dct_identities},
        {"desynchronization sensitivity", desync_sensitivity},
        {"calibration distance, SDSA below synchronized", calibration_direction},
        {"JPEG recompression ordering", recompression},
        {"PSNR above 38 dB at 25% capacity", distortion},
        {"spatial LSB baselines", spatial_baselines},
        {"key and geometry layers fail independently", double_layer},
    };

    int failed = 0;
    for (std::size_t i = 0; i < std::size(criteria); ++i)
    {
        Outcome outcome;
        try
        {
            outcome = criteria[i].second();
        }
        catch (const std::exception& e)
        {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        failed += !outcome.pass;
        std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
                  << outcome.detail << ")" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}

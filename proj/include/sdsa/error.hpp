#ifndef SDSA_ERROR_HPP_INCLUDED
#define SDSA_ERROR_HPP_INCLUDED

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdsa
{
    enum class ErrorCode
    {
        OffsetsTooLarge,
        GeometryMismatch,
        BlockTooLarge,
        DimensionMismatch,
        UnsupportedFormat,
        IoFailure,
        BadKeyLength,
        BadPadding,
        PayloadExceedsCapacity,
        NotEnoughBlocks,
        BadMagic,
        BadCrc,
        EmptyPayload,
        ImageTooSmall,
        BadSecretFile,
    };

    constexpr std::string_view to_string(ErrorCode code) noexcept
    {
        switch (code)
        {
        case ErrorCode::OffsetsTooLarge:
            return "OffsetsTooLarge";
        case ErrorCode::GeometryMismatch:
            return "GeometryMismatch";
        case ErrorCode::BlockTooLarge:
            return "BlockTooLarge";
        case ErrorCode::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorCode::UnsupportedFormat:
            return "UnsupportedFormat";
        case ErrorCode::IoFailure:
            return "IoFailure";
        case ErrorCode::BadKeyLength:
            return "BadKeyLength";
        case ErrorCode::BadPadding:
            return "BadPadding";
        case ErrorCode::PayloadExceedsCapacity:
            return "PayloadExceedsCapacity";
        case ErrorCode::NotEnoughBlocks:
            return "NotEnoughBlocks";
        case ErrorCode::BadMagic:
            return "BadMagic";
        case ErrorCode::BadCrc:
            return "BadCrc";
        case ErrorCode::EmptyPayload:
            return "EmptyPayload";
        case ErrorCode::ImageTooSmall:
            return "ImageTooSmall";
        case ErrorCode::BadSecretFile:
            return "BadSecretFile";
        }
        return "Unknown";
    }

    /// Every failure the library reports carries one of the codes above, so
    /// callers (the CLI in particular) can map them onto stable exit codes.
    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
        {}

        ErrorCode code() const noexcept
        {
            return code_;
        }

    private:
        ErrorCode code_;
    };
} // namespace sdsa

#endif // SDSA_ERROR_HPP_INCLUDED

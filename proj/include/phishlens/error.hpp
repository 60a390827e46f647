#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phishlens {

/// Error kinds raised across the library. Each container/decoder failure mode
/// has its own kind so callers can downgrade selectively.
enum class Errc {
    invalid_argument,
    io_error,
    // zip
    missing_eocd,
    truncated_entry,
    crc_mismatch,
    unsupported_method,
    zip64_unsupported,
    size_limit,
    entry_not_found,
    // cfb / ovba
    bad_signature,
    fat_cycle,
    sector_out_of_range,
    stream_not_found,
    malformed_chunk,
    // csv / schema
    header_mismatch,
    parse_error,
    label_out_of_range,
    schema_mismatch,
    empty_dataset,
    // qr
    payload_too_long,
    no_finder_patterns,
    format_unrecoverable,
    rs_failure,
    unsupported_mode,
    // statistics
    degenerate_groups,
    insufficient_data,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace phishlens

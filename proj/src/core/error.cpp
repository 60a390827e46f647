#include "phishlens/error.hpp"

namespace phishlens {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_argument: return "invalid_argument";
        case Errc::io_error: return "io_error";
        case Errc::missing_eocd: return "missing_eocd";
        case Errc::truncated_entry: return "truncated_entry";
        case Errc::crc_mismatch: return "crc_mismatch";
        case Errc::unsupported_method: return "unsupported_method";
        case Errc::zip64_unsupported: return "zip64_unsupported";
        case Errc::size_limit: return "size_limit";
        case Errc::entry_not_found: return "entry_not_found";
        case Errc::bad_signature: return "bad_signature";
        case Errc::fat_cycle: return "fat_cycle";
        case Errc::sector_out_of_range: return "sector_out_of_range";
        case Errc::stream_not_found: return "stream_not_found";
        case Errc::malformed_chunk: return "malformed_chunk";
        case Errc::header_mismatch: return "header_mismatch";
        case Errc::parse_error: return "parse_error";
        case Errc::label_out_of_range: return "label_out_of_range";
        case Errc::schema_mismatch: return "schema_mismatch";
        case Errc::empty_dataset: return "empty_dataset";
        case Errc::payload_too_long: return "payload_too_long";
        case Errc::no_finder_patterns: return "no_finder_patterns";
        case Errc::format_unrecoverable: return "format_unrecoverable";
        case Errc::rs_failure: return "rs_failure";
        case Errc::unsupported_mode: return "unsupported_mode";
        case Errc::degenerate_groups: return "degenerate_groups";
        case Errc::insufficient_data: return "insufficient_data";
    }
    return "unknown";
}

}  // namespace phishlens

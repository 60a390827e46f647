#pragma once

#include "phishlens/bytes.hpp"
#include "phishlens/features.hpp"

namespace phishlens {

/// Classifies a buffer by content alone. Never throws and never reads past the
/// buffer; ZIP containers are told apart by their central-directory names.
FileKind sniff_file_kind(ByteView data) noexcept;

}  // namespace phishlens

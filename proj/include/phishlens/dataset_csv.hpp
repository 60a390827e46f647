#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "phishlens/features.hpp"

namespace phishlens {

// CSV layout: UTF-8, comma separated, '.' decimal point, header row holding the
// schema columns followed by "label". Values are written with 9 significant digits.

std::size_t write_dataset_csv(const LabeledDataset& ds, std::ostream& out);
LabeledDataset read_dataset_csv(std::istream& in, const SchemaPtr& schema);

/// Unlabeled variant used by batch scans: header holds the schema columns only.
std::size_t write_features_csv(const std::vector<FeatureVector>& rows, const FeatureSchema& schema,
                               std::ostream& out);

/// Reads only the header row and returns its cells.
std::vector<std::string> read_csv_header(std::istream& in);

std::string format_value(double v);

}  // namespace phishlens

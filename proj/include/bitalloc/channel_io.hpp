#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "bitalloc/model.hpp"

namespace bitalloc {

/// Channel CSV:
///
///   # spacing_hz=24414          (optional, before the header)
///   index,G_WHz,p
///   1,3.2e-10,0.06
///   ...
///
/// `spacing_hz` overrides (or supplies) the spacing comment. Errors carry the
/// 1-based line number and the offending field.
ChannelProfile load_channel_csv(const std::string& path,
                                std::optional<double> spacing_hz = std::nullopt);
ChannelProfile parse_channel_csv(std::istream& in, std::optional<double> spacing_hz = std::nullopt);

/// Writes the spacing comment, the header and one row per subchannel using
/// shortest round-trip number formatting.
void write_channel_csv(std::ostream& out, const ChannelProfile& channel);
void save_channel_csv(const std::string& path, const ChannelProfile& channel);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace bitalloc

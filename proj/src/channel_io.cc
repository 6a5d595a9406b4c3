#include "bitalloc/channel_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "bitalloc/errors.hpp"

namespace bitalloc {

namespace {

constexpr std::string_view kHeader = "index,G_WHz,p";
constexpr std::string_view kSpacingKey = "spacing_hz=";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_real(std::string_view text, const char* field, int line) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("field " + std::string(field) + ": cannot parse '" + std::string(text) +
                         "' as a number",
                     line);
  }
  if (!std::isfinite(v)) {
    throw ParseError("field " + std::string(field) + ": value must be finite", line);
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

ChannelProfile parse_channel_csv(std::istream& in, std::optional<double> spacing_hz) {
  std::optional<double> file_spacing;
  std::vector<Subchannel> subs;
  bool header_seen = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text.front() == '#') {
        std::string_view body = trim(text.substr(1));
        if (body.starts_with(kSpacingKey)) {
          file_spacing = parse_real(body.substr(kSpacingKey.size()), "spacing_hz", line);
        }
        continue;
      }
      if (text != kHeader) {
        throw ParseError("expected header '" + std::string(kHeader) + "'", line);
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      cols.push_back(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cols.size() != 3) {
      throw ParseError("expected 3 fields, found " + std::to_string(cols.size()), line);
    }
    const double index = parse_real(cols[0], "index", line);
    const int expected = static_cast<int>(subs.size()) + 1;
    if (index != static_cast<double>(expected)) {
      throw ParseError("field index: expected " + std::to_string(expected), line);
    }
    const double g = parse_real(cols[1], "G_WHz", line);
    if (!(g > 0.0)) throw ParseError("field G_WHz: must be > 0", line);
    const double p = parse_real(cols[2], "p", line);
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ParseError("field p: value " + std::string(trim(cols[2])) + " outside [0, 1]", line);
    }
    subs.push_back({expected, g, p});
  }
  if (!header_seen) throw ParseError("missing header '" + std::string(kHeader) + "'");
  if (subs.empty()) throw ParseError("no subchannel rows");
  const std::optional<double> spacing = spacing_hz ? spacing_hz : file_spacing;
  if (!spacing) throw ParseError("subchannel spacing not given (no '# spacing_hz=' line)");
  return ChannelProfile(*spacing, std::move(subs));
}

ChannelProfile load_channel_csv(const std::string& path, std::optional<double> spacing_hz) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open channel file " + path);
  try {
    return parse_channel_csv(in, spacing_hz);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_channel_csv(std::ostream& out, const ChannelProfile& channel) {
  out << "# spacing_hz=" << format_double(channel.spacing_hz()) << '\n' << kHeader << '\n';
  for (const Subchannel& s : channel.subchannels()) {
    out << s.index << ',' << format_double(s.inverse_cnr) << ',' << format_double(s.outage_prob)
        << '\n';
  }
}

void save_channel_csv(const std::string& path, const ChannelProfile& channel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write channel file " + path);
  write_channel_csv(out, channel);
}

}  // namespace bitalloc

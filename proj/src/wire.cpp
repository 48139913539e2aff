#include "streamad/wire.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>

namespace streamad {

namespace {

constexpr std::string_view kSubjectOpen = "<og_";
constexpr std::string_view kTypeTail = "> <type> <MoldingMachineObservationGroup> .\n";
constexpr std::string_view kMachineMid = "> <machine> <machine_";
constexpr std::string_view kTimestampMid = "> <timestamp> \"";
constexpr std::string_view kPropertyMid = "> <observedProperty> <_";
constexpr std::string_view kValueMid = "> <hasValue> \"";
constexpr std::string_view kIriClose = "> .\n";
constexpr std::string_view kLongClose = "\"^^<long> .\n";
constexpr std::string_view kDoubleClose = "\"^^<double> .\n";

constexpr std::size_t kMaxDigits = 19;

// Fixed-template cursor for the fast path. Every access is bounds-checked
// and counted; nothing before `pos` is ever read again.
class Scanner {
 public:
  Scanner(std::string_view text, std::size_t pos, ParseStats* stats)
      : text_(text), pos_(pos), stats_(stats) {}

  std::size_t pos() const noexcept { return pos_; }
  void skip(std::size_t n) noexcept { pos_ += n; }

  void expect(std::string_view literal, const char* what) {
    if (pos_ + literal.size() > text_.size() ||
        std::memcmp(text_.data() + pos_, literal.data(), literal.size()) != 0) {
      throw WireFormatError(std::string("expected ") + what, pos_);
    }
    touch(literal.size());
    pos_ += literal.size();
  }

  // Reads decimal digits; returns the value and stores the width.
  std::uint64_t digits(std::uint32_t& width, const char* what) {
    std::uint64_t value = 0;
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c < '0' || c > '9') break;
      if (pos_ - start == kMaxDigits) throw WireFormatError(std::string(what) + " too long", pos_);
      value = value * 10 + static_cast<std::uint64_t>(c - '0');
      ++pos_;
    }
    touch(pos_ - start + 1);  // digits plus the terminating byte
    if (pos_ == start) throw WireFormatError(std::string("expected ") + what, pos_);
    width = static_cast<std::uint32_t>(pos_ - start);
    return value;
  }

  // Reads exactly `width` digits.
  std::uint64_t fixed_digits(std::uint32_t width, const char* what) {
    if (pos_ + width > text_.size()) throw WireFormatError(std::string("truncated ") + what, pos_);
    std::uint64_t value = 0;
    for (std::uint32_t i = 0; i < width; ++i) {
      char c = text_[pos_ + i];
      if (c < '0' || c > '9') throw WireFormatError(std::string("expected ") + what, pos_ + i);
      value = value * 10 + static_cast<std::uint64_t>(c - '0');
    }
    touch(width);
    pos_ += width;
    return value;
  }

  double real_until_quote() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    const void* hit = std::memchr(begin, '"', static_cast<std::size_t>(end - begin));
    if (hit == nullptr) throw WireFormatError("unterminated value literal", pos_);
    const char* quote = static_cast<const char*>(hit);
    touch(static_cast<std::size_t>(quote - begin) + 1);
    const char* first = begin;
    if (first != quote && *first == '+') ++first;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, quote, value);
    if (ec != std::errc{} || ptr != quote || first == quote || !std::isfinite(value)) {
      throw WireFormatError("invalid value literal", pos_);
    }
    pos_ = static_cast<std::size_t>(quote - text_.data());
    return value;
  }

 private:
  void touch(std::size_t n) noexcept {
    if (stats_ != nullptr) stats_->bytes_examined += n;
  }

  std::string_view text_;
  std::size_t pos_;
  ParseStats* stats_;
};

void append_uint(std::string& out, std::uint64_t v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

void append_subject(std::string& out, GroupId group) {
  out += kSubjectOpen;
  append_uint(out, group);
}

MachineId narrow_machine(std::uint64_t v, std::size_t pos) {
  if (v > std::numeric_limits<MachineId>::max()) throw WireFormatError("machine id out of range", pos);
  return static_cast<MachineId>(v);
}

}  // namespace

void append_group(std::string& out, const ObservationGroup& g) {
  append_subject(out, g.group_id);
  out += kTypeTail;
  append_subject(out, g.group_id);
  out += kMachineMid;
  append_uint(out, g.machine_id);
  out += kIriClose;
  append_subject(out, g.group_id);
  out += kTimestampMid;
  append_uint(out, static_cast<std::uint64_t>(g.timestamp));
  out += kLongClose;
  for (const auto& r : g.readings) {
    append_subject(out, g.group_id);
    out += kPropertyMid;
    append_uint(out, g.machine_id);
    out += '_';
    append_uint(out, r.property_id);
    out += kIriClose;
    append_subject(out, g.group_id);
    out += kValueMid;
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, r.value);
    out.append(buf, ptr);
    out += kDoubleClose;
  }
}

std::string serialize_group(const ObservationGroup& g) {
  std::string out;
  out.reserve(160 + g.readings.size() * 96);
  append_group(out, g);
  return out;
}

MachineId parse_machine_id_fast(std::string_view m, ParseStats* stats) {
  Scanner s(m, 0, stats);
  s.expect(kSubjectOpen, "'<og_'");
  std::uint32_t gw = 0;
  s.digits(gw, "group id");
  // Line 1 has a constant tail; line 2 repeats the subject.
  s.skip(kTypeTail.size() + kSubjectOpen.size() + gw);
  s.expect(kMachineMid, "machine predicate");
  std::uint32_t mw = 0;
  std::size_t at = s.pos();
  return narrow_machine(s.digits(mw, "machine id"), at);
}

RouteInfo parse_route_fast(std::string_view m, ParseStats* stats) {
  RouteInfo info;
  Scanner s(m, 0, stats);
  s.expect(kSubjectOpen, "'<og_'");
  std::uint32_t gw = 0;
  s.digits(gw, "group id");
  s.skip(kTypeTail.size() + kSubjectOpen.size() + gw);
  s.expect(kMachineMid, "machine predicate");
  std::uint32_t width = 0;
  std::size_t at = s.pos();
  info.machine_id = narrow_machine(s.digits(width, "machine id"), at);
  s.skip(kIriClose.size() + kSubjectOpen.size() + gw);
  s.expect(kTimestampMid, "timestamp predicate");
  at = s.pos();
  std::uint64_t ts = s.digits(width, "timestamp");
  if (ts > static_cast<std::uint64_t>(std::numeric_limits<Timestamp>::max())) {
    throw WireFormatError("timestamp out of range", at);
  }
  info.timestamp = static_cast<Timestamp>(ts);
  return info;
}

GroupHeader parse_header(std::string_view m, ParseStats* stats) {
  GroupHeader h;
  Scanner s(m, 0, stats);
  s.expect(kSubjectOpen, "'<og_'");
  std::uint32_t gw = 0;
  h.group_id = s.digits(gw, "group id");
  s.expect(kTypeTail, "type triple");
  s.skip(kSubjectOpen.size() + gw);
  s.expect(kMachineMid, "machine predicate");
  std::uint32_t mw = 0;
  std::size_t at = s.pos();
  h.machine_id = narrow_machine(s.digits(mw, "machine id"), at);
  s.expect(kIriClose, "machine object close");
  s.skip(kSubjectOpen.size() + gw);
  s.expect(kTimestampMid, "timestamp predicate");
  std::uint32_t tw = 0;
  at = s.pos();
  std::uint64_t ts = s.digits(tw, "timestamp");
  if (ts > static_cast<std::uint64_t>(std::numeric_limits<Timestamp>::max())) {
    throw WireFormatError("timestamp out of range", at);
  }
  h.timestamp = static_cast<Timestamp>(ts);
  s.expect(kLongClose, "timestamp literal close");
  h.cursor.offset = s.pos();
  h.cursor.group_width = gw;
  h.cursor.machine_width = mw;
  return h;
}

std::optional<Reading> parse_next_reading(std::string_view m, ParseCursor& c, ParseStats* stats) {
  if (c.offset >= m.size()) return std::nullopt;
  Scanner s(m, c.offset, stats);
  s.skip(kSubjectOpen.size() + c.group_width);
  s.expect(kPropertyMid, "observedProperty predicate");
  s.fixed_digits(c.machine_width, "machine id");
  s.expect("_", "'_'");
  std::uint32_t sw = 0;
  std::size_t at = s.pos();
  std::uint64_t property = s.digits(sw, "property id");
  if (property > std::numeric_limits<PropertyId>::max()) {
    throw WireFormatError("property id out of range", at);
  }
  s.expect(kIriClose, "property object close");
  s.skip(kSubjectOpen.size() + c.group_width);
  s.expect(kValueMid, "hasValue predicate");
  double value = s.real_until_quote();
  s.expect(kDoubleClose, "value literal close");
  c.offset = s.pos();
  ++c.readings_emitted;
  return Reading{static_cast<PropertyId>(property), value};
}

// ---------------------------------------------------------------------------
// Reference parser

namespace {

class LineReader {
 public:
  LineReader(std::string_view text, std::size_t line_no) : text_(text), line_(line_no) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(line_) + ", column " + std::to_string(pos_ + 1) +
                         ": " + what,
                     line_, pos_ + 1);
  }

  bool done() const noexcept { return pos_ == text_.size(); }

  void literal(std::string_view lit) {
    if (text_.substr(pos_, lit.size()) != lit) fail("expected '" + std::string(lit) + "'");
    pos_ += lit.size();
  }

  // Decimal integer without leading zeros.
  std::uint64_t integer(const char* what) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    std::size_t width = pos_ - start;
    if (width == 0) {
      pos_ = start;
      fail(std::string("expected ") + what);
    }
    if (width > 1 && text_[start] == '0') {
      pos_ = start;
      fail(std::string(what) + " has a leading zero");
    }
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc{}) {
      pos_ = start;
      fail(std::string(what) + " out of range");
    }
    return v;
  }

  // [+-]? digits ( '.' digits )? ( [eE] [+-]? digits )?
  double real() {
    std::size_t start = pos_;
    auto digit_run = [&] {
      std::size_t s = pos_;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
      return pos_ - s;
    };
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
    if (digit_run() == 0) fail("expected digits in value literal");
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      if (digit_run() == 0) fail("expected fraction digits in value literal");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digit_run() == 0) fail("expected exponent digits in value literal");
    }
    const char* first = text_.data() + start;
    if (*first == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, text_.data() + pos_, v);
    if (ec != std::errc{} || ptr != text_.data() + pos_ || !std::isfinite(v)) {
      pos_ = start;
      fail("value literal out of range");
    }
    return v;
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

struct Triple {
  GroupId subject = 0;
  std::string_view predicate;
};

}  // namespace

ObservationGroup parse_group_reference(std::string_view message) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start < message.size()) {
      auto nl = message.find('\n', start);
      if (nl == std::string_view::npos) {
        throw ParseError("line " + std::to_string(lines.size() + 1) + ": missing line terminator",
                         lines.size() + 1, message.size() - start + 1);
      }
      lines.push_back(message.substr(start, nl - start));
      start = nl + 1;
    }
  }
  if (lines.size() < 3) {
    throw ParseError("message has " + std::to_string(lines.size()) + " lines, expected a header",
                     lines.size() + 1, 1);
  }
  if ((lines.size() - 3) % 2 != 0) {
    throw ParseError("reading without a value line", lines.size(), 1);
  }

  ObservationGroup g;
  auto subject = [&](LineReader& r, std::size_t index) {
    r.literal(kSubjectOpen);
    GroupId id = r.integer("group id");
    if (index == 0) {
      g.group_id = id;
    } else if (id != g.group_id) {
      r.fail("subject does not match the group id");
    }
    r.literal("> ");
  };
  auto finish = [](LineReader& r) {
    if (!r.done()) r.fail("trailing characters");
  };

  {
    LineReader r(lines[0], 1);
    subject(r, 0);
    r.literal("<type> <MoldingMachineObservationGroup> .");
    finish(r);
  }
  {
    LineReader r(lines[1], 2);
    subject(r, 1);
    r.literal("<machine> <machine_");
    std::uint64_t m = r.integer("machine id");
    if (m > std::numeric_limits<MachineId>::max()) r.fail("machine id out of range");
    g.machine_id = static_cast<MachineId>(m);
    r.literal("> .");
    finish(r);
  }
  {
    LineReader r(lines[2], 3);
    subject(r, 2);
    r.literal("<timestamp> \"");
    std::uint64_t t = r.integer("timestamp");
    if (t > static_cast<std::uint64_t>(std::numeric_limits<Timestamp>::max())) {
      r.fail("timestamp out of range");
    }
    g.timestamp = static_cast<Timestamp>(t);
    r.literal("\"^^<long> .");
    finish(r);
  }
  for (std::size_t i = 3; i < lines.size(); i += 2) {
    Reading reading;
    {
      LineReader r(lines[i], i + 1);
      subject(r, i);
      r.literal("<observedProperty> <_");
      if (r.integer("machine id") != g.machine_id) r.fail("property machine does not match header");
      r.literal("_");
      std::uint64_t p = r.integer("property id");
      if (p > std::numeric_limits<PropertyId>::max()) r.fail("property id out of range");
      reading.property_id = static_cast<PropertyId>(p);
      if (!g.readings.empty() && reading.property_id <= g.readings.back().property_id) {
        r.fail("properties not in strictly ascending order");
      }
      r.literal("> .");
      finish(r);
    }
    {
      LineReader r(lines[i + 1], i + 2);
      subject(r, i + 1);
      r.literal("<hasValue> \"");
      reading.value = r.real();
      r.literal("\"^^<double> .");
      finish(r);
    }
    g.readings.push_back(reading);
  }
  return g;
}

std::vector<std::string_view> split_messages(std::string_view corpus) {
  constexpr std::string_view kTypePredicate = "> <type> ";
  std::vector<std::string_view> out;
  if (corpus.empty()) return out;
  if (!corpus.starts_with(kSubjectOpen)) throw WireFormatError("corpus does not start with '<og_'", 0);

  auto is_header = [&](std::size_t line_start) {
    if (corpus.compare(line_start, kSubjectOpen.size(), kSubjectOpen) != 0) return false;
    std::size_t p = line_start + kSubjectOpen.size();
    while (p < corpus.size() && corpus[p] >= '0' && corpus[p] <= '9') ++p;
    return corpus.compare(p, kTypePredicate.size(), kTypePredicate) == 0;
  };

  std::size_t message_start = 0;
  std::size_t pos = 0;
  while (true) {
    const void* hit = std::memchr(corpus.data() + pos, '\n', corpus.size() - pos);
    if (hit == nullptr) break;
    std::size_t next = static_cast<std::size_t>(static_cast<const char*>(hit) - corpus.data()) + 1;
    if (next < corpus.size() && is_header(next)) {
      out.push_back(corpus.substr(message_start, next - message_start));
      message_start = next;
    }
    pos = next;
    if (pos >= corpus.size()) break;
  }
  if (message_start < corpus.size()) out.push_back(corpus.substr(message_start));
  return out;
}

}  // namespace streamad

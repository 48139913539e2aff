#pragma once

// Observation-group wire format. Every message is a fixed template:
//
//   <og_G> <type> <MoldingMachineObservationGroup> .
//   <og_G> <machine> <machine_M> .
//   <og_G> <timestamp> "T"^^<long> .
//   <og_G> <observedProperty> <_M_S> .      } once per reading,
//   <og_G> <hasValue> "V"^^<double> .        } ascending S
//
// Because only the id widths vary, the position of every field follows
// from the template length plus the width of G (and M for readings). The
// fast parser jumps straight to those positions; the reference parser
// tokenizes and validates everything.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "streamad/core.hpp"

namespace streamad {

class WireFormatError : public ParseError {
 public:
  WireFormatError(const std::string& what, std::size_t offset)
      : ParseError(what + " at offset " + std::to_string(offset), 0, offset + 1), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Counts the bytes a fast-path call examined. Used to check that the
/// machine-id extraction cost stays independent of message size.
struct ParseStats {
  std::size_t bytes_examined = 0;
};

struct ParseCursor {
  std::size_t offset = 0;
  std::uint32_t readings_emitted = 0;
  std::uint32_t group_width = 0;
  std::uint32_t machine_width = 0;
};

struct GroupHeader {
  GroupId group_id = 0;
  MachineId machine_id = 0;
  Timestamp timestamp = 0;
  ParseCursor cursor;
};

void append_group(std::string& out, const ObservationGroup& group);
std::string serialize_group(const ObservationGroup& group);

MachineId parse_machine_id_fast(std::string_view message, ParseStats* stats = nullptr);
GroupHeader parse_header(std::string_view message, ParseStats* stats = nullptr);

/// Machine id and timestamp only, for routing.
struct RouteInfo {
  MachineId machine_id = 0;
  Timestamp timestamp = 0;
};
RouteInfo parse_route_fast(std::string_view message, ParseStats* stats = nullptr);

/// Returns the next reading and advances the cursor, or nullopt once the
/// cursor sits at the end of the message.
std::optional<Reading> parse_next_reading(std::string_view message, ParseCursor& cursor,
                                          ParseStats* stats = nullptr);

/// Validating parser; errors name the 1-based line and column.
ObservationGroup parse_group_reference(std::string_view message);

/// Splits a concatenated corpus into messages. A message starts at every
/// line whose predicate is `<type>`.
std::vector<std::string_view> split_messages(std::string_view corpus);

}  // namespace streamad

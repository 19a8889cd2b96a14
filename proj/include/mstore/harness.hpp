#pragma once

#include <iosfwd>

#include "mstore/runtime.hpp"

namespace mstore::harness {

// Exit-code contract shared by every command:
//   0 success, 1 domain failure, 2 input failure (unreadable/unparseable).
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitInput = 2;

// Prints one `LEVEL entity[.relation]: message` line per diagnostic.
int cmd_validate(const std::string& schema_path, std::ostream& out);

// Replays the script against freshly opened embedded stores. Unless
// measure_wall_clock is set, each store observes exactly its configured
// injected delay, which makes the report byte-reproducible. The report goes
// to report_path when given, otherwise to `out`.
int cmd_run(const std::string& script_path, const std::optional<std::string>& report_path,
            bool measure_wall_clock, std::ostream& out, std::ostream& err);

// Scores every store for placing `payload_bytes` of the entity, using the
// script's initial metrics. One line per store; the chosen one is starred.
int cmd_explain(const std::string& script_path, const std::string& entity,
                std::int64_t payload_bytes, std::ostream& out, std::ostream& err);

}  // namespace mstore::harness

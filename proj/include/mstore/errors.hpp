#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mstore {

// Every failure surfaced by the library carries one of these codes.
enum class Errc {
  // schema
  duplicate_entity,
  invalid_descriptor,
  duplicate_location,
  // query building
  unknown_entity,
  unknown_field,
  unknown_relation,
  type_mismatch,
  missing_field,
  empty_changes,
  primary_key_update,
  invalid_argument,
  // storage engine
  unknown_location,
  unsupported_store_kind,
  closed_store,
  constraint_violation,
  malformed_statement,
  unknown_table_or_field,
  // runtime
  confidentiality_violation,
  missing_location,
  restrict_violation,
  not_many_to_many,
  dangling_endpoint,
  duplicate_link,
  partial_cascade,
  // placement
  invalid_metrics,
  invalid_observation,
  no_eligible_store,
};

// Stable CamelCase name, e.g. "ConstraintViolation". Used in reports and CLI output.
const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

// One row removed by a cascade before the operation failed.
struct CompletedDeletion {
  std::string entity;
  std::string pk;  // rendered value
  std::string location;
};

// A cascade failed after some deletions already took effect. The store is left
// in the partially-deleted state; completed() lists what was removed.
class PartialCascadeError : public Error {
 public:
  PartialCascadeError(const std::string& message, std::vector<CompletedDeletion> completed)
      : Error(Errc::partial_cascade, message), completed_(std::move(completed)) {}

  const std::vector<CompletedDeletion>& completed() const { return completed_; }

 private:
  std::vector<CompletedDeletion> completed_;
};

}  // namespace mstore

#include "mstore/errors.hpp"

namespace mstore {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::duplicate_entity: return "DuplicateEntity";
    case Errc::invalid_descriptor: return "InvalidDescriptor";
    case Errc::duplicate_location: return "DuplicateLocation";
    case Errc::unknown_entity: return "UnknownEntity";
    case Errc::unknown_field: return "UnknownField";
    case Errc::unknown_relation: return "UnknownRelation";
    case Errc::type_mismatch: return "TypeMismatch";
    case Errc::missing_field: return "MissingField";
    case Errc::empty_changes: return "EmptyChanges";
    case Errc::primary_key_update: return "PrimaryKeyUpdate";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::unknown_location: return "UnknownLocation";
    case Errc::unsupported_store_kind: return "UnsupportedStoreKind";
    case Errc::closed_store: return "ClosedStore";
    case Errc::constraint_violation: return "ConstraintViolation";
    case Errc::malformed_statement: return "MalformedStatement";
    case Errc::unknown_table_or_field: return "UnknownTableOrField";
    case Errc::confidentiality_violation: return "ConfidentialityViolation";
    case Errc::missing_location: return "MissingLocation";
    case Errc::restrict_violation: return "RestrictViolation";
    case Errc::not_many_to_many: return "NotManyToMany";
    case Errc::dangling_endpoint: return "DanglingEndpoint";
    case Errc::duplicate_link: return "DuplicateLink";
    case Errc::partial_cascade: return "PartialCascade";
    case Errc::invalid_metrics: return "InvalidMetrics";
    case Errc::invalid_observation: return "InvalidObservation";
    case Errc::no_eligible_store: return "NoEligibleStore";
  }
  return "Unknown";
}

}  // namespace mstore

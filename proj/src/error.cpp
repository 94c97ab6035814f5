#include "guardsim/error.hpp"

namespace guardsim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::degenerate_input: return "DegenerateInput";
    case ErrorKind::degenerate_polygon: return "DegeneratePolygon";
    case ErrorKind::too_small: return "TooSmall";
    case ErrorKind::not_a_nonagon: return "NotANonagon";
    case ErrorKind::not_reflex: return "NotReflex";
    case ErrorKind::unsupported: return "Unsupported";
    case ErrorKind::speed_too_low: return "SpeedTooLow";
    case ErrorKind::infeasible: return "Infeasible";
    case ErrorKind::not_orthogonal: return "NotOrthogonal";
    case ErrorKind::quadrilateralization_failed: return "QuadrilateralizationFailed";
    case ErrorKind::config_invalid: return "ConfigInvalid";
    case ErrorKind::deployment_failed: return "DeploymentFailed";
    case ErrorKind::io: return "IO";
  }
  return "Unknown";
}

}  // namespace guardsim

#include "topobench/error.hpp"

namespace topobench {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::Disconnected: return "Disconnected";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::NegativeCapacity: return "NegativeCapacity";
    case Errc::AsymmetricLink: return "AsymmetricLink";
    case Errc::NodeOutOfRange: return "NodeOutOfRange";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::OddK: return "OddK";
    case Errc::UnsupportedLevel: return "UnsupportedLevel";
    case Errc::InfeasibleGlobalWiring: return "InfeasibleGlobalWiring";
    case Errc::Infeasible: return "Infeasible";
    case Errc::DegreeSequenceInfeasible: return "DegreeSequenceInfeasible";
    case Errc::NoServers: return "NoServers";
    case Errc::SingleServer: return "SingleServer";
    case Errc::NonSquare: return "NonSquare";
    case Errc::HoseViolation: return "HoseViolation";
    case Errc::SelfDemand: return "SelfDemand";
    case Errc::TooLargeForExact: return "TooLargeForExact";
    case Errc::Unbounded: return "Unbounded";
    case Errc::SolverFailure: return "SolverFailure";
    case Errc::CapacityViolated: return "CapacityViolated";
    case Errc::ConservationViolated: return "ConservationViolated";
    case Errc::DemandShort: return "DemandShort";
    case Errc::ZeroDemand: return "ZeroDemand";
    case Errc::InvalidCut: return "InvalidCut";
    case Errc::ZeroDemandAcrossCut: return "ZeroDemandAcrossCut";
    case Errc::EigenNoConvergence: return "EigenNoConvergence";
    case Errc::BoundViolated: return "BoundViolated";
    case Errc::CutBelowFlow: return "CutBelowFlow";
  }
  return "Unknown";
}

}  // namespace topobench

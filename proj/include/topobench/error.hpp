#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace topobench {

/// Machine-readable error categories shared by every module.
enum class Errc {
  // graph-core
  Disconnected,
  SelfLoop,
  DuplicateEdge,
  NegativeCapacity,
  AsymmetricLink,
  NodeOutOfRange,
  ParseError,
  // topologies
  InvalidParameter,
  OddK,
  UnsupportedLevel,
  InfeasibleGlobalWiring,
  Infeasible,
  DegreeSequenceInfeasible,
  // traffic
  NoServers,
  SingleServer,
  NonSquare,
  HoseViolation,
  SelfDemand,
  // throughput
  TooLargeForExact,
  Unbounded,
  SolverFailure,
  CapacityViolated,
  ConservationViolated,
  DemandShort,
  ZeroDemand,
  // cuts
  InvalidCut,
  ZeroDemandAcrossCut,
  EigenNoConvergence,
  // benchmark
  BoundViolated,
  CutBelowFlow,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace topobench

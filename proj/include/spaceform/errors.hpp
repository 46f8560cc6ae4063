#pragma once

#include <stdexcept>
#include <string>

namespace spaceform {

// Failure kinds surfaced by the kernel. Every throw carries one of these so
// callers can branch without matching message strings.
enum class Err {
  DimensionMismatch,
  DegenerateSubspace,
  LinearDependence,
  OffManifold,
  ModelMismatch,
  NotIntersecting,
  BadDimension,
  OutsideDomain,
  UnsupportedModel,
  CoincidentPoints,
  AntipodalPoints,
  IdenticalSubspaces,
  EmptyIntersection,
  PointNotOnBoth,
  NonUniqueProjection,
  PointNotOnSubspace,
  BadParameter,
  HypothesisNotMet,
  SamplingExhausted,
  UnsupportedDimension,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::DegenerateSubspace: return "DegenerateSubspace";
    case Err::LinearDependence: return "LinearDependence";
    case Err::OffManifold: return "OffManifold";
    case Err::ModelMismatch: return "ModelMismatch";
    case Err::NotIntersecting: return "NotIntersecting";
    case Err::BadDimension: return "BadDimension";
    case Err::OutsideDomain: return "OutsideDomain";
    case Err::UnsupportedModel: return "UnsupportedModel";
    case Err::CoincidentPoints: return "CoincidentPoints";
    case Err::AntipodalPoints: return "AntipodalPoints";
    case Err::IdenticalSubspaces: return "IdenticalSubspaces";
    case Err::EmptyIntersection: return "EmptyIntersection";
    case Err::PointNotOnBoth: return "PointNotOnBoth";
    case Err::NonUniqueProjection: return "NonUniqueProjection";
    case Err::PointNotOnSubspace: return "PointNotOnSubspace";
    case Err::BadParameter: return "BadParameter";
    case Err::HypothesisNotMet: return "HypothesisNotMet";
    case Err::SamplingExhausted: return "SamplingExhausted";
    case Err::UnsupportedDimension: return "UnsupportedDimension";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void raise(Err code, const std::string& what) { throw Error(code, what); }

}  // namespace spaceform

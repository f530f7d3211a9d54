#pragma once

#include <stdexcept>
#include <string>

namespace tvvecm {

// Stable error categories, mapped to CLI exit codes.
enum class ErrorCode {
  Config = 2,
  Data = 3,
  Numerical = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string name, const std::string& what)
      : std::runtime_error(what), code_(code), name_(std::move(name)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& name() const noexcept { return name_; }

 private:
  ErrorCode code_;
  std::string name_;
};

struct DegenerateWindow : Error {
  explicit DegenerateWindow(const std::string& what)
      : Error(ErrorCode::Numerical, "DegenerateWindow", what) {}
};

struct TooFewObservations : Error {
  explicit TooFewObservations(const std::string& what)
      : Error(ErrorCode::Data, "TooFewObservations", what) {}
};

struct RankOutOfRange : Error {
  explicit RankOutOfRange(const std::string& what)
      : Error(ErrorCode::Config, "RankOutOfRange", what) {}
};

struct SingularInformation : Error {
  explicit SingularInformation(const std::string& what)
      : Error(ErrorCode::Numerical, "SingularInformation", what) {}
};

struct SingularMoments : Error {
  explicit SingularMoments(const std::string& what)
      : Error(ErrorCode::Numerical, "SingularMoments", what) {}
};

struct SingularWeight : Error {
  explicit SingularWeight(const std::string& what)
      : Error(ErrorCode::Numerical, "SingularWeight", what) {}
};

struct InvalidPenalty : Error {
  explicit InvalidPenalty(const std::string& what)
      : Error(ErrorCode::Config, "InvalidPenalty", what) {}
};

struct NoValidBandwidth : Error {
  explicit NoValidBandwidth(const std::string& what)
      : Error(ErrorCode::Numerical, "NoValidBandwidth", what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what)
      : Error(ErrorCode::Data, "ParseError", what) {}
};

}  // namespace tvvecm

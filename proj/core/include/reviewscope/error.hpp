#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reviewscope {

/// Base of every error raised by the library. Each subclass names the
/// failing operation family so callers can map errors onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define REVIEWSCOPE_DEFINE_ERROR(Name)      \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

REVIEWSCOPE_DEFINE_ERROR(ConfigError);
REVIEWSCOPE_DEFINE_ERROR(LoadError);
REVIEWSCOPE_DEFINE_ERROR(SamplingError);
REVIEWSCOPE_DEFINE_ERROR(SimilarityError);
REVIEWSCOPE_DEFINE_ERROR(EmbeddingError);
REVIEWSCOPE_DEFINE_ERROR(TransportError);
REVIEWSCOPE_DEFINE_ERROR(ProjectionError);
REVIEWSCOPE_DEFINE_ERROR(CandidateError);
REVIEWSCOPE_DEFINE_ERROR(SplitError);
REVIEWSCOPE_DEFINE_ERROR(DensityError);
REVIEWSCOPE_DEFINE_ERROR(ClusteringError);
REVIEWSCOPE_DEFINE_ERROR(TrainingError);
REVIEWSCOPE_DEFINE_ERROR(EvaluationError);
REVIEWSCOPE_DEFINE_ERROR(GatingError);

#undef REVIEWSCOPE_DEFINE_ERROR

/// A malformed line in a line-oriented input file. line() is 1-based.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Binary store decode failure; offset() is the byte position of the fault.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error("offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A text the embedding provider could not resolve.
class LookupError : public Error {
 public:
  explicit LookupError(const std::string& phrase)
      : Error("no embedding for phrase \"" + phrase + "\""), phrase_(phrase) {}
  const std::string& phrase() const noexcept { return phrase_; }

 private:
  std::string phrase_;
};

/// Wraps any failure inside a pipeline stage with the stage's name.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& cause)
      : Error(stage + ": " + cause), stage_(stage) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace reviewscope

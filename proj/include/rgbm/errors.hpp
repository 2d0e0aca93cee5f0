#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace rgbm {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclass onto a process exit code.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class IngestErrorKind {
    FileNotFound,
    MissingColumn,
    MalformedValue,
    NonMonotonicYears,
    ShareOutOfRange,
    NonPositiveIncome,
    NonPositivePrice,
    NonMonotonicDates,
};

/// Raised while reading an input CSV. Row numbers are 1-based file lines
/// (the header is line 1).
class IngestError : public Error {
  public:
    IngestError(IngestErrorKind kind, std::string path, std::optional<std::size_t> line,
                std::string column, const std::string &detail);

    [[nodiscard]] IngestErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string &path() const noexcept { return path_; }
    [[nodiscard]] std::optional<std::size_t> line() const noexcept { return line_; }
    [[nodiscard]] const std::string &column() const noexcept { return column_; }

  private:
    IngestErrorKind kind_;
    std::string path_;
    std::optional<std::size_t> line_;
    std::string column_;
};

enum class EstimationErrorKind { SeriesTooShort, InsufficientData, EmptyInput };

class EstimationError : public Error {
  public:
    EstimationError(EstimationErrorKind kind, const std::string &what)
        : Error(what), kind_{kind} {}
    [[nodiscard]] EstimationErrorKind kind() const noexcept { return kind_; }

  private:
    EstimationErrorKind kind_;
};

enum class EngineErrorKind { InvalidParams, TargetUnreachable, DegenerateState };

class EngineError : public Error {
  public:
    EngineError(EngineErrorKind kind, const std::string &what) : Error(what), kind_{kind} {}
    [[nodiscard]] EngineErrorKind kind() const noexcept { return kind_; }

  private:
    EngineErrorKind kind_;
};

enum class CalibrationErrorKind {
    InvalidBracket,
    InvalidTarget,
    SeriesTooShort,
    GapInSeries,
    NoOverlap,
    NonPositiveTotal,
    EngineFailure,
};

class CalibrationError : public Error {
  public:
    CalibrationError(CalibrationErrorKind kind, const std::string &what,
                     std::optional<int> year = std::nullopt)
        : Error(what), kind_{kind}, year_{year} {}
    [[nodiscard]] CalibrationErrorKind kind() const noexcept { return kind_; }
    /// Calendar year in which the failure happened, when known.
    [[nodiscard]] std::optional<int> year() const noexcept { return year_; }

  private:
    CalibrationErrorKind kind_;
    std::optional<int> year_;
};

enum class AnalysisErrorKind { NonPositiveTotal, IndivisiblePopulation, NonPositiveMedian, EmptyInput };

class AnalysisError : public Error {
  public:
    AnalysisError(AnalysisErrorKind kind, const std::string &what) : Error(what), kind_{kind} {}
    [[nodiscard]] AnalysisErrorKind kind() const noexcept { return kind_; }

  private:
    AnalysisErrorKind kind_;
};

} // namespace rgbm

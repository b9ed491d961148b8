#pragma once

#include <stdexcept>
#include <string>

namespace diffuse {

/// Base class for all toolkit errors. `name()` is a stable identifier
/// suitable for machine consumption (the CLI prints it on failure).
class Error : public std::runtime_error {
public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

struct ZeroDegree : Error {
  explicit ZeroDegree(int row)
      : Error("ZeroDegree", "affinity row " + std::to_string(row) +
                                " sums to zero (isolated point); the kernel "
                                "scale is too small"),
        row(row) {}
  int row;
};

struct ConvergenceFailure : Error {
  explicit ConvergenceFailure(const std::string& what)
      : Error("ConvergenceFailure", what) {}
};

struct DegenerateLeadVector : Error {
  explicit DegenerateLeadVector(int index)
      : Error("DegenerateLeadVector",
              "lead eigenvector entry " + std::to_string(index) +
                  " is numerically zero; the affinity graph is disconnected "
                  "or nearly so"),
        index(index) {}
  int index;
};

struct NoLinearRegion : Error {
  NoLinearRegion()
      : Error("NoLinearRegion",
              "no linear section of length >= 3 found in the kernel-sum "
              "scan; widen the grid") {}
};

struct SmallEigenvalue : Error {
  explicit SmallEigenvalue(int component)
      : Error("SmallEigenvalue", "extension component " +
                                     std::to_string(component) +
                                     " is below the eigenvalue floor"),
        component(component) {}
  int component;
};

struct EmptySelection : Error {
  explicit EmptySelection(int label)
      : Error("EmptySelection",
              "label " + std::to_string(label) + " matches no pixels"),
        label(label) {}
  int label;
};

struct TooFewPixels : Error {
  explicit TooFewPixels(long count)
      : Error("TooFewPixels", "selection has " + std::to_string(count) +
                                  " pixels; need at least 2") {}
};

struct WindowTooLarge : Error {
  WindowTooLarge(int window, long frames)
      : Error("WindowTooLarge", "window of " + std::to_string(window) +
                                    " frames exceeds sequence length " +
                                    std::to_string(frames)) {}
};

struct BlockTooSmall : Error {
  explicit BlockTooSmall(const std::string& what)
      : Error("BlockTooSmall", what) {}
};

struct HeaderMismatch : Error {
  explicit HeaderMismatch(const std::string& what)
      : Error("HeaderMismatch", what) {}
};

struct SizeMismatch : Error {
  explicit SizeMismatch(const std::string& what)
      : Error("SizeMismatch", what) {}
};

struct BadMagic : Error {
  explicit BadMagic(const std::string& what) : Error("BadMagic", what) {}
};

struct InvalidPartition : Error {
  explicit InvalidPartition(const std::string& what)
      : Error("InvalidPartition", what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("IoError", what) {}
};

} // namespace diffuse

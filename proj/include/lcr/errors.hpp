#pragma once

#include <stdexcept>
#include <string>

namespace lcr {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inconsistent dimensions between inputs (design vs beta, sbar vs dataset, ...).
struct shape_error : error {
  using error::error;
};

// Invalid value: out-of-range category code, non-finite input, bad config field.
struct domain_error : error {
  using error::error;
};

// A unit whose mixture density is exactly zero under the current parameters.
struct degenerate_unit_error : error {
  int unit;
  explicit degenerate_unit_error(int unit_index)
      : error("unit " + std::to_string(unit_index + 1) +
              " has zero density in every class"),
        unit(unit_index) {}
};

// A class whose total responsibility mass collapsed to numerical zero.
struct empty_class_error : error {
  int class_index;
  explicit empty_class_error(int class_idx, const std::string& context = "")
      : error("class " + std::to_string(class_idx + 1) +
              " is empty (responsibility mass ~ 0)" +
              (context.empty() ? "" : "; " + context)),
        class_index(class_idx) {}
};

// A weighted normal-equation or Newton system too ill-conditioned to solve.
// class_index is -1 when the system is not tied to a single class.
struct singular_system_error : error {
  int class_index;
  explicit singular_system_error(const std::string& what, int class_idx = -1)
      : error(what), class_index(class_idx) {}
};

// Malformed input file. row/column are 1-based; 0 means not applicable.
struct parse_error : error {
  std::string path;
  int row;
  int column;
  parse_error(std::string file, int row_1based, int col_1based,
              const std::string& what)
      : error(file + (row_1based > 0
                          ? " (row " + std::to_string(row_1based) +
                                (col_1based > 0
                                     ? ", column " + std::to_string(col_1based)
                                     : "") +
                                ")"
                          : "") +
              ": " + what),
        path(std::move(file)),
        row(row_1based),
        column(col_1based) {}
};

}  // namespace lcr

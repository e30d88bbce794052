#pragma once

#include <stdexcept>
#include <string>

namespace kloostat {

/// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad inputs: non-prime p, out-of-range residues, malformed windows,
/// unreadable files.  CLI maps these to exit code 1.
class validation_error : public error {
public:
  explicit validation_error(const std::string& msg) : error(msg) {}
};

/// Malformed or mismatched table files.
class format_error : public validation_error {
public:
  explicit format_error(const std::string& msg) : validation_error(msg) {}
};

/// A window with no members where at least one is required.
class empty_window_error : public validation_error {
public:
  explicit empty_window_error(const std::string& msg) : validation_error(msg) {}
};

/// Internal consistency failures: a certified inequality did not hold.
/// These indicate an implementation bug or corrupted data, not bad input.
/// CLI maps these to exit code 2.
class computation_error : public error {
public:
  explicit computation_error(const std::string& msg) : error(msg) {}
};

/// |K_p(a)| exceeded 2*sqrt(p) beyond the rounding budget.
class weil_violation_error : public computation_error {
public:
  explicit weil_violation_error(const std::string& msg) : computation_error(msg) {}
};

/// A Kloosterman value too close to zero to sign, even after re-evaluation.
class sign_ambiguity_error : public computation_error {
public:
  explicit sign_ambiguity_error(const std::string& msg) : computation_error(msg) {}
};

}  // namespace kloostat

// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHEREVIS_ERRORS_HPP
#define SPHEREVIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spherevis {

/// The ego origin lies inside (or within the safety margin of) a box, so the
/// box's projection would cover the whole sphere and visibility is undefined.
class OriginInsideBox : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spherical polygon with fewer than 3 vertices or area below the sliver
/// threshold was passed where a proper polygon is required.
class DegeneratePolygon : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Too few sampled rays hit the target box for a statistically usable
/// Monte-Carlo estimate.
class InsufficientHits : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scene generation gave up after too many rejection-sampling failures
/// (requested density not achievable in the configured area).
class GenerationExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spherevis

#endif  // SPHEREVIS_ERRORS_HPP

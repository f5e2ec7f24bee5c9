#pragma once

#include <stdexcept>
#include <string>

namespace opdyn {

// A tally tie that the requested rule or election cannot break.
// vertex() is the offending vertex for dynamics ties, -1 for election ties.
class tie_error : public std::runtime_error {
public:
  explicit tie_error(const std::string& what, int vertex = -1)
      : std::runtime_error(what), vertex_(vertex) {}
  int vertex() const { return vertex_; }

private:
  int vertex_;
};

// Malformed graph file. line() is 1-based.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

// A randomized constructor exhausted its restart budget.
class construction_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An iterative numerical procedure failed to reach its tolerance.
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

}  // namespace opdyn

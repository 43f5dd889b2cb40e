#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace musielak {

/// Base of every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction argument (bad interval, odd node count, r <= 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Field length does not match the node count of the measure space.
class NodeMismatch : public Error {
 public:
  NodeMismatch(std::size_t field_size, std::size_t node_count)
      : Error("field has " + std::to_string(field_size) + " values but the measure has " +
              std::to_string(node_count) + " nodes"),
        field_size_(field_size),
        node_count_(node_count) {}

  std::size_t field_size() const noexcept { return field_size_; }
  std::size_t node_count() const noexcept { return node_count_; }

 private:
  std::size_t field_size_;
  std::size_t node_count_;
};

/// A partial sum left the representable range during integration.
class Overflow : public Error {
 public:
  explicit Overflow(std::size_t index)
      : Error("integration overflow at node " + std::to_string(index)), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
      : Error(format(offset, expected, found)), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 protected:
  SyntaxError(std::string message, std::size_t offset) : Error(std::move(message)), offset_(offset) {}

 private:
  static std::string format(std::size_t offset, const std::vector<std::string>& expected,
                            const std::string& found) {
    std::string msg = "syntax error at offset " + std::to_string(offset) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += (i + 1 == expected.size()) ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found " + found;
    return msg;
  }

  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// A name outside {t, u, declared parameters, functions}; a kind of SyntaxError.
class UnknownIdentifier : public SyntaxError {
 public:
  UnknownIdentifier(std::size_t offset, std::string name)
      : SyntaxError("unknown identifier '" + name + "' at offset " + std::to_string(offset), offset),
        name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class UnboundParameter : public Error {
 public:
  explicit UnboundParameter(std::string name)
      : Error("parameter '" + name + "' is not bound"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Evaluation left the real domain. `path` lists child indices from the root
/// to the offending node; `offset` is the node's byte offset in the source text.
class DomainError : public Error {
 public:
  enum class Reason { Undefined, Overflow };

  DomainError(Reason reason, std::string what_failed, std::vector<std::size_t> path,
              std::size_t offset)
      : Error(format(reason, what_failed, path, offset)),
        reason_(reason),
        path_(std::move(path)),
        offset_(offset) {}

  Reason reason() const noexcept { return reason_; }
  bool is_overflow() const noexcept { return reason_ == Reason::Overflow; }
  const std::vector<std::size_t>& path() const noexcept { return path_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  static std::string format(Reason reason, const std::string& what_failed,
                            const std::vector<std::size_t>& path, std::size_t offset) {
    std::string msg = reason == Reason::Overflow ? "overflow in " : "domain error in ";
    msg += what_failed + " at offset " + std::to_string(offset) + " (node path ";
    if (path.empty()) msg += "root";
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i > 0) msg += '.';
      msg += std::to_string(path[i]);
    }
    return msg + ")";
  }

  Reason reason_;
  std::vector<std::size_t> path_;
  std::size_t offset_;
};

class EmptyFamily : public Error {
 public:
  EmptyFamily() : Error("function family is empty") {}
};

/// The difference-quotient sequence increased as the step shrank: the input is not convex.
class NonmonotoneQuotient : public Error {
 public:
  NonmonotoneQuotient(double t, double u, double step)
      : Error("right difference quotient increased as h decreased at t=" + std::to_string(t) +
              ", u=" + std::to_string(u) + ", h=" + std::to_string(step)),
        t_(t),
        u_(u) {}
  double t() const noexcept { return t_; }
  double u() const noexcept { return u_; }

 private:
  double t_, u_;
};

/// No bracket [lo, hi] with modular(f/lo) > 1 >= modular(f/hi) within the step cap.
class BracketFailure : public Error {
 public:
  using Error::Error;
};

/// The modular increased with lambda during the norm search.
class NonmonotoneModular : public Error {
 public:
  using Error::Error;
};

class MonotonicityViolated : public Error {
 public:
  MonotonicityViolated(int index, double t, double u)
      : Error("family member " + std::to_string(index) + " exceeds member " +
              std::to_string(index + 1) + " at t=" + std::to_string(t) +
              ", u=" + std::to_string(u)),
        index_(index),
        t_(t),
        u_(u) {}
  int index() const noexcept { return index_; }
  double t() const noexcept { return t_; }
  double u() const noexcept { return u_; }

 private:
  int index_;
  double t_, u_;
};

class DominationViolated : public Error {
 public:
  DominationViolated(int index, double t, double u)
      : Error("|M_" + std::to_string(index) + "(t,u)| exceeds the dominator at t=" +
              std::to_string(t) + ", u=" + std::to_string(u)),
        index_(index),
        t_(t),
        u_(u) {}
  int index() const noexcept { return index_; }
  double t() const noexcept { return t_; }
  double u() const noexcept { return u_; }

 private:
  int index_;
  double t_, u_;
};

class UnboundedOnRectangle : public Error {
 public:
  UnboundedOnRectangle(double t, double u)
      : Error("function exceeds 1e300 on the rectangle at t=" + std::to_string(t) +
              ", u=" + std::to_string(u)),
        t_(t),
        u_(u) {}
  double t() const noexcept { return t_; }
  double u() const noexcept { return u_; }

 private:
  double t_, u_;
};

/// Delta2 precheck found M(t,u) <= 0 for some u >= u0.
class NonPositiveValue : public Error {
 public:
  NonPositiveValue(double t, double u)
      : Error("M(t,u) <= 0 at t=" + std::to_string(t) + ", u=" + std::to_string(u)), t_(t), u_(u) {}
  double t() const noexcept { return t_; }
  double u() const noexcept { return u_; }

 private:
  double t_, u_;
};

}  // namespace musielak

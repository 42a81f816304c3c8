#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dfvs {

using Rat = mpq_class;
using Int = mpz_class;

// Vertex cost: nonnegative rational with an absorbing infinite sentinel.
// Infinity compares greater than every finite value and is absorbing
// under addition; it is used for subdivision ports that must never be
// selected or become tight.
class Cost {
 public:
  Cost() : inf_(false), v_(0) {}
  Cost(const Rat& v) : inf_(false), v_(v) {
    if (v < 0) throw std::invalid_argument("negative cost");
  }
  Cost(long v) : Cost(Rat(v)) {}

  static Cost infinity() {
    Cost c;
    c.inf_ = true;
    return c;
  }

  bool is_infinite() const { return inf_; }
  const Rat& value() const {
    if (inf_) throw std::logic_error("value() on infinite cost");
    return v_;
  }

  Cost operator+(const Cost& o) const {
    if (inf_ || o.inf_) return infinity();
    return Cost(v_ + o.v_);
  }
  Cost& operator+=(const Cost& o) {
    *this = *this + o;
    return *this;
  }

  friend bool operator==(const Cost& a, const Cost& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.v_ == b.v_;
  }
  friend bool operator!=(const Cost& a, const Cost& b) { return !(a == b); }
  friend bool operator<(const Cost& a, const Cost& b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.v_ < b.v_;
  }
  friend bool operator>(const Cost& a, const Cost& b) { return b < a; }
  friend bool operator<=(const Cost& a, const Cost& b) { return !(b < a); }
  friend bool operator>=(const Cost& a, const Cost& b) { return !(a < b); }

  std::string str() const { return inf_ ? "inf" : v_.get_str(); }

 private:
  bool inf_;
  Rat v_;
};

// Parses "inf", "p/q", or a plain integer.
inline Cost parse_cost(const std::string& s) {
  if (s == "inf") return Cost::infinity();
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad cost: " + s);
  r.canonicalize();
  return Cost(r);
}

}  // namespace dfvs

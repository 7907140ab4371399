#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cubicslice {

using BigInt = boost::multiprecision::cpp_int;

// A rational point of the circle R/Z, stored as a reduced fraction in [0, 1).
//
// All arithmetic is exact. Zero is represented as 0/1.
class Angle {
 public:
  Angle() : num_(0), den_(1) {}
  Angle(BigInt numerator, BigInt denominator);
  Angle(std::int64_t numerator, std::int64_t denominator)
      : Angle(BigInt(numerator), BigInt(denominator)) {}

  // Parses "p/q", "p" or "0". Throws std::invalid_argument on malformed input.
  static Angle parse(std::string_view text);

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }

  Angle operator+(const Angle& other) const;
  Angle operator-(const Angle& other) const;
  Angle operator-() const;
  // k * t mod 1.
  Angle times(std::uint64_t k) const;
  // The preimage (t + j) / k for j in [0, k).
  Angle preimage(std::uint64_t k, std::uint64_t j) const;

  double to_double() const;
  long double to_long_double() const;
  std::string str() const;

  friend bool operator==(const Angle& a, const Angle& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Angle& a, const Angle& b);

 private:
  BigInt num_;
  BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const Angle& t);

// Reduced representative of k * t mod 1.
Angle multiply_mod1(const Angle& t, std::uint64_t k);

// Least q >= 1 with d^q t = t (mod 1), or nullopt when t is strictly preperiodic.
std::optional<unsigned> exact_period(const Angle& t, unsigned d);

// Preperiod and period of t under multiplication by d (every rational has both).
struct OrbitType {
  unsigned preperiod = 0;
  unsigned period = 1;
  friend bool operator==(const OrbitType&, const OrbitType&) = default;
};
OrbitType orbit_type(const Angle& t, unsigned d);

// Strictly increasing collection of angles in circular order from 0.
class AngleSet {
 public:
  AngleSet() = default;
  explicit AngleSet(std::vector<Angle> elements);

  const std::vector<Angle>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(const Angle& t) const;
  // Index of t, or nullopt.
  std::optional<std::size_t> index_of(const Angle& t) const;

  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }
  const Angle& operator[](std::size_t i) const { return elements_[i]; }

  friend bool operator==(const AngleSet&, const AngleSet&) = default;

 private:
  std::vector<Angle> elements_;
};

// Angles of exact period q under multiplication by d.
AngleSet periodic_angles(unsigned q, unsigned d);

// Sum over e | q of mu(q/e) (d^e - 1).
std::uint64_t mobius_count(unsigned q, unsigned d);

enum class CoperiodStatus { via_plus, via_minus, both, no };
std::string_view to_string(CoperiodStatus s);

// Which of t + 1/3, t - 1/3 has exact period q under tripling.
CoperiodStatus coperiod_status(const Angle& t, unsigned q);

// The co-period of t, i.e. the exact tripling period of t + 1/3 or t - 1/3,
// searched up to max_q.
std::optional<unsigned> coperiod(const Angle& t, unsigned max_q = 12);

// All angles t with coperiod_status(t, q) != no.
AngleSet coperiodic_angles(unsigned q);

// Least n >= 0 with 2^n t = 1/3 (mod 1), or nullopt.
std::optional<unsigned> basilica_index(const Angle& t);

inline bool is_basilica_angle(const Angle& t) { return basilica_index(t).has_value(); }

// Endpoint behaviour for arc membership.
struct ArcEnds {
  bool lo_closed = false;
  bool hi_closed = false;
};

// Membership of t in the counterclockwise arc from lo to hi. When lo == hi
// the arc is the full circle minus (or including) that point.
bool in_arc(const Angle& t, const Angle& lo, const Angle& hi, ArcEnds ends = {});

// Counterclockwise length of the arc from lo to hi, in [0, 1).
Angle arc_length(const Angle& lo, const Angle& hi);

// CSV: numerator,denominator,decimal (12 digits).
void write_csv(std::ostream& os, const AngleSet& set);

}  // namespace cubicslice

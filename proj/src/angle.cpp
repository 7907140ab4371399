#include "cubicslice/angle.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cubicslice {

namespace {

BigInt floor_mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

BigInt pow_u(std::uint64_t base, unsigned exp) {
  BigInt r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

int mobius(unsigned n) {
  int sign = 1;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      sign = -sign;
    }
  }
  if (n > 1) sign = -sign;
  return sign;
}

}  // namespace

Angle::Angle(BigInt numerator, BigInt denominator) {
  if (denominator == 0) throw std::invalid_argument("Angle: zero denominator");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  numerator = floor_mod(numerator, denominator);
  BigInt g = boost::multiprecision::gcd(numerator, denominator);
  if (numerator == 0) {
    num_ = 0;
    den_ = 1;
  } else {
    num_ = numerator / g;
    den_ = denominator / g;
  }
}

Angle Angle::parse(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  auto bad = [&] { return std::invalid_argument("Angle: cannot parse '" + std::string(text) + "'"); };
  if (s.empty()) throw bad();
  auto valid_int = [](const std::string& x) {
    if (x.empty()) return false;
    std::size_t i = (x[0] == '-' || x[0] == '+') ? 1 : 0;
    if (i == x.size()) return false;
    return std::all_of(x.begin() + static_cast<std::ptrdiff_t>(i), x.end(),
                       [](unsigned char c) { return std::isdigit(c); });
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!valid_int(s)) throw bad();
    return Angle(BigInt(s), BigInt(1));
  }
  std::string p = s.substr(0, slash), q = s.substr(slash + 1);
  if (!valid_int(p) || !valid_int(q)) throw bad();
  BigInt den(q);
  if (den == 0) throw bad();
  return Angle(BigInt(p), den);
}

Angle Angle::operator+(const Angle& o) const {
  return Angle(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Angle Angle::operator-(const Angle& o) const {
  return Angle(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Angle Angle::operator-() const { return Angle(-num_, den_); }

Angle Angle::times(std::uint64_t k) const { return Angle(num_ * k, den_); }

Angle Angle::preimage(std::uint64_t k, std::uint64_t j) const {
  return Angle(num_ + BigInt(j) * den_, den_ * k);
}

double Angle::to_double() const { return static_cast<double>(to_long_double()); }

long double Angle::to_long_double() const {
  // Numerators can exceed the long double range only for absurd denominators;
  // scale both down together in that case.
  BigInt n = num_, d = den_;
  while (d > BigInt(1) << 120) {
    n >>= 32;
    d >>= 32;
  }
  return n.convert_to<long double>() / d.convert_to<long double>();
}

std::string Angle::str() const {
  if (num_ == 0) return "0";
  return num_.str() + "/" + den_.str();
}

std::strong_ordering operator<=>(const Angle& a, const Angle& b) {
  BigInt lhs = a.num_ * b.den_, rhs = b.num_ * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Angle& t) { return os << t.str(); }

Angle multiply_mod1(const Angle& t, std::uint64_t k) { return t.times(k); }

std::optional<unsigned> exact_period(const Angle& t, unsigned d) {
  const BigInt& den = t.denominator();
  if (boost::multiprecision::gcd(den, BigInt(d)) != 1) return std::nullopt;
  if (den == 1) return 1u;
  // Multiplicative order of d modulo den.
  BigInt x = BigInt(d) % den;
  unsigned q = 1;
  while (x != 1) {
    x = (x * d) % den;
    ++q;
  }
  return q;
}

OrbitType orbit_type(const Angle& t, unsigned d) {
  OrbitType out;
  Angle s = t;
  while (boost::multiprecision::gcd(s.denominator(), BigInt(d)) != 1) {
    s = s.times(d);
    ++out.preperiod;
  }
  out.period = *exact_period(s, d);
  return out;
}

AngleSet::AngleSet(std::vector<Angle> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

bool AngleSet::contains(const Angle& t) const {
  return std::binary_search(elements_.begin(), elements_.end(), t);
}

std::optional<std::size_t> AngleSet::index_of(const Angle& t) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), t);
  if (it == elements_.end() || !(*it == t)) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

AngleSet periodic_angles(unsigned q, unsigned d) {
  if (q == 0) throw std::invalid_argument("periodic_angles: q must be >= 1");
  BigInt m = pow_u(d, q) - 1;
  std::vector<Angle> out;
  for (BigInt j = 0; j < m; ++j) {
    Angle t(j, m);
    if (exact_period(t, d) == q) out.push_back(t);
  }
  return AngleSet(std::move(out));
}

std::uint64_t mobius_count(unsigned q, unsigned d) {
  std::int64_t total = 0;
  for (unsigned e = 1; e <= q; ++e) {
    if (q % e != 0) continue;
    std::int64_t de = 1;
    for (unsigned i = 0; i < e; ++i) de *= d;
    total += mobius(q / e) * (de - 1);
  }
  return static_cast<std::uint64_t>(total);
}

std::string_view to_string(CoperiodStatus s) {
  switch (s) {
    case CoperiodStatus::via_plus: return "via_plus";
    case CoperiodStatus::via_minus: return "via_minus";
    case CoperiodStatus::both: return "both";
    case CoperiodStatus::no: return "no";
  }
  return "?";
}

CoperiodStatus coperiod_status(const Angle& t, unsigned q) {
  const Angle third(1, 3);
  bool plus = exact_period(t + third, 3) == q;
  bool minus = exact_period(t - third, 3) == q;
  if (plus && minus) return CoperiodStatus::both;
  if (plus) return CoperiodStatus::via_plus;
  if (minus) return CoperiodStatus::via_minus;
  return CoperiodStatus::no;
}

std::optional<unsigned> coperiod(const Angle& t, unsigned max_q) {
  const Angle third(1, 3);
  auto p = exact_period(t + third, 3);
  auto m = exact_period(t - third, 3);
  std::optional<unsigned> best;
  for (auto c : {p, m}) {
    if (c && *c <= max_q && (!best || *c < *best)) best = c;
  }
  return best;
}

AngleSet coperiodic_angles(unsigned q) {
  const Angle third(1, 3);
  std::vector<Angle> out;
  for (const Angle& s : periodic_angles(q, 3)) {
    out.push_back(s - third);
    out.push_back(s + third);
  }
  return AngleSet(std::move(out));
}

std::optional<unsigned> basilica_index(const Angle& t) {
  const Angle target(1, 3);
  OrbitType ot = orbit_type(t, 2);
  Angle s = t;
  for (unsigned n = 0; n <= ot.preperiod + ot.period; ++n) {
    if (s == target) return n;
    s = s.times(2);
  }
  return std::nullopt;
}

Angle arc_length(const Angle& lo, const Angle& hi) { return hi - lo; }

bool in_arc(const Angle& t, const Angle& lo, const Angle& hi, ArcEnds ends) {
  if (t == lo) return ends.lo_closed;
  if (t == hi) return ends.hi_closed;
  if (lo == hi) return true;
  return (t - lo) < (hi - lo);
}

void write_csv(std::ostream& os, const AngleSet& set) {
  os << "numerator,denominator,decimal\n";
  std::ostringstream dec;
  for (const Angle& t : set) {
    dec.str("");
    dec << std::fixed << std::setprecision(12) << t.to_double();
    os << t.numerator().str() << ',' << t.denominator().str() << ',' << dec.str() << '\n';
  }
}

}  // namespace cubicslice

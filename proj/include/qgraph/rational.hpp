#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgraph {

// Arbitrary-precision signed integer, sign-magnitude over 32-bit limbs
// (little-endian, no leading zero limbs). Sized for exact secular-polynomial
// coefficients: numerators stay small, but denominators are products of
// vertex degrees and overflow int64 already for moderate graphs.
class BigInt {
 public:
  BigInt() = default;

  BigInt(long long v) {
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    // avoid UB on LLONG_MIN
    unsigned long long m = v < 0 ? ~static_cast<unsigned long long>(v) + 1ULL
                                 : static_cast<unsigned long long>(v);
    while (m != 0) {
      limbs_.push_back(static_cast<std::uint32_t>(m & 0xffffffffULL));
      m >>= 32;
    }
  }

  BigInt(int v) : BigInt(static_cast<long long>(v)) {}

  static BigInt from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("BigInt: empty string");
    std::size_t i = 0;
    int sign = 1;
    if (s[0] == '-') { sign = -1; i = 1; }
    else if (s[0] == '+') { i = 1; }
    if (i == s.size()) throw std::invalid_argument("BigInt: no digits");
    BigInt out;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
      out.mul_small_inplace(10);
      out.add_small_inplace(static_cast<std::uint32_t>(s[i] - '0'));
    }
    if (!out.limbs_.empty()) out.sign_ = sign;
    return out;
  }

  bool is_zero() const { return limbs_.empty(); }
  int sign() const { return sign_; }

  friend bool operator==(const BigInt& a, const BigInt& b) {
    return a.sign_ == b.sign_ && a.limbs_ == b.limbs_;
  }
  friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }

  friend bool operator<(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    int c = cmp_mag(a.limbs_, b.limbs_);
    return a.sign_ >= 0 ? c < 0 : c > 0;
  }
  friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
  friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
  friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

  BigInt operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
      r.limbs_ = add_mag(a.limbs_, b.limbs_);
      r.sign_ = a.sign_;
      return r;
    }
    int c = cmp_mag(a.limbs_, b.limbs_);
    if (c == 0) return BigInt();
    if (c > 0) {
      r.limbs_ = sub_mag(a.limbs_, b.limbs_);
      r.sign_ = a.sign_;
    } else {
      r.limbs_ = sub_mag(b.limbs_, a.limbs_);
      r.sign_ = b.sign_;
    }
    return r;
  }

  friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt();
    BigInt r;
    r.limbs_ = mul_mag(a.limbs_, b.limbs_);
    r.sign_ = a.sign_ * b.sign_;
    return r;
  }

  BigInt& operator+=(const BigInt& o) { *this = *this + o; return *this; }
  BigInt& operator-=(const BigInt& o) { *this = *this - o; return *this; }
  BigInt& operator*=(const BigInt& o) { *this = *this * o; return *this; }

  // Truncated division: q rounds toward zero, r carries the sign of a,
  // |r| < |b|, and a == q*b + r.
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
    if (a.is_zero()) { q = BigInt(); r = BigInt(); return; }
    std::vector<std::uint32_t> qm, rm;
    divmod_mag(a.limbs_, b.limbs_, qm, rm);
    q = BigInt();
    q.limbs_ = std::move(qm);
    q.trim();
    if (!q.limbs_.empty()) q.sign_ = a.sign_ * b.sign_;
    r = BigInt();
    r.limbs_ = std::move(rm);
    r.trim();
    if (!r.limbs_.empty()) r.sign_ = a.sign_;
  }

  friend BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return q;
  }
  friend BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return r;
  }

  static BigInt gcd(BigInt a, BigInt b) {
    a.sign_ = a.limbs_.empty() ? 0 : 1;
    b.sign_ = b.limbs_.empty() ? 0 : 1;
    while (!b.is_zero()) {
      BigInt q, r;
      divmod(a, b, q, r);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::vector<std::uint32_t> mag = limbs_;
    std::string digits;
    while (!mag.empty()) {
      std::uint64_t rem = 0;
      for (std::size_t i = mag.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | mag[i];
        mag[i] = static_cast<std::uint32_t>(cur / 1000000000ULL);
        rem = cur % 1000000000ULL;
      }
      while (!mag.empty() && mag.back() == 0) mag.pop_back();
      for (int d = 0; d < 9; ++d) {
        digits.push_back(static_cast<char>('0' + rem % 10));
        rem /= 10;
      }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    if (sign_ < 0) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
  }

  std::size_t bit_length() const {
    if (limbs_.empty()) return 0;
    return (limbs_.size() - 1) * 32 +
           (32 - static_cast<std::size_t>(std::countl_zero(limbs_.back())));
  }

  bool fits_int64() const {
    if (limbs_.size() > 2) return false;
    if (limbs_.size() < 2) return true;
    std::uint64_t m = (static_cast<std::uint64_t>(limbs_[1]) << 32) | limbs_[0];
    if (sign_ > 0) return m <= 0x7fffffffffffffffULL;
    return m <= 0x8000000000000000ULL;
  }

  long long to_int64() const {
    if (!fits_int64()) throw std::overflow_error("BigInt: does not fit int64");
    if (limbs_.empty()) return 0;
    std::uint64_t m = limbs_[0];
    if (limbs_.size() == 2) m |= static_cast<std::uint64_t>(limbs_[1]) << 32;
    if (sign_ > 0) return static_cast<long long>(m);
    return static_cast<long long>(~m + 1ULL);
  }

  double to_double() const {
    if (limbs_.empty()) return 0.0;
    std::size_t bl = bit_length();
    double v;
    if (bl <= 62) {
      v = static_cast<double>(to_int64());
      return v;
    }
    // top 64 bits scaled by the remaining exponent
    std::uint64_t top = top_bits64();
    v = std::ldexp(static_cast<double>(top), static_cast<int>(bl) - 64);
    return sign_ < 0 ? -v : v;
  }

  // Most significant 64 bits of the magnitude (bit_length() must be >= 64).
  std::uint64_t top_bits64() const {
    std::size_t bl = bit_length();
    std::uint64_t acc = 0;
    for (int bit = 0; bit < 64; ++bit) {
      std::size_t pos = bl - 1 - static_cast<std::size_t>(bit);
      std::uint32_t limb = limbs_[pos / 32];
      std::uint64_t b = (limb >> (pos % 32)) & 1u;
      acc = (acc << 1) | b;
    }
    return acc;
  }

 private:
  int sign_ = 0;
  std::vector<std::uint32_t> limbs_;

  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) sign_ = 0;
  }

  void mul_small_inplace(std::uint32_t m) {
    std::uint64_t carry = 0;
    for (auto& l : limbs_) {
      std::uint64_t cur = static_cast<std::uint64_t>(l) * m + carry;
      l = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    trim();
  }

  void add_small_inplace(std::uint32_t a) {
    if (limbs_.empty()) {
      if (a) { limbs_.push_back(a); sign_ = 1; }
      return;
    }
    std::uint64_t carry = a;
    for (auto& l : limbs_) {
      std::uint64_t cur = static_cast<std::uint64_t>(l) + carry;
      l = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
      if (!carry) break;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  }

  static int cmp_mag(const std::vector<std::uint32_t>& a,
                     const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
  }

  static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    const auto& hi = a.size() >= b.size() ? a : b;
    const auto& lo = a.size() >= b.size() ? b : a;
    std::vector<std::uint32_t> r(hi.size() + 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < hi.size(); ++i) {
      std::uint64_t cur = carry + hi[i] + (i < lo.size() ? lo[i] : 0u);
      r[i] = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    r[hi.size()] = static_cast<std::uint32_t>(carry);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  // requires |a| >= |b|
  static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r(a.size(), 0);
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::int64_t cur = static_cast<std::int64_t>(a[i]) -
                         (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0) - borrow;
      if (cur < 0) { cur += (1LL << 32); borrow = 1; }
      else borrow = 0;
      r[i] = static_cast<std::uint32_t>(cur);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  static std::vector<std::uint32_t> mul_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < b.size(); ++j) {
        std::uint64_t cur = r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j] + carry;
        r[i + j] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
      }
      std::size_t k = i + b.size();
      while (carry) {
        std::uint64_t cur = r[k] + carry;
        r[k] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
        ++k;
      }
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  static std::vector<std::uint32_t> shl_bits(const std::vector<std::uint32_t>& a, int s) {
    if (s == 0) return a;
    std::vector<std::uint32_t> r(a.size() + 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      r[i] |= a[i] << s;
      r[i + 1] |= static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[i]) >> (32 - s));
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  static std::vector<std::uint32_t> shr_bits(const std::vector<std::uint32_t>& a, int s) {
    if (s == 0) return a;
    std::vector<std::uint32_t> r(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      r[i] = a[i] >> s;
      if (i + 1 < a.size())
        r[i] |= static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[i + 1]) << (32 - s));
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  // Knuth Algorithm D on magnitudes.
  static void divmod_mag(const std::vector<std::uint32_t>& a,
                         const std::vector<std::uint32_t>& b,
                         std::vector<std::uint32_t>& q,
                         std::vector<std::uint32_t>& r) {
    if (cmp_mag(a, b) < 0) { q.clear(); r = a; return; }
    if (b.size() == 1) {
      q.assign(a.size(), 0);
      std::uint64_t rem = 0;
      for (std::size_t i = a.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | a[i];
        q[i] = static_cast<std::uint32_t>(cur / b[0]);
        rem = cur % b[0];
      }
      while (!q.empty() && q.back() == 0) q.pop_back();
      r.clear();
      if (rem) r.push_back(static_cast<std::uint32_t>(rem));
      return;
    }

    const int s = std::countl_zero(b.back());
    std::vector<std::uint32_t> vn = shl_bits(b, s);
    std::vector<std::uint32_t> un = shl_bits(a, s);
    un.resize(a.size() + 1, 0);  // always one spare high limb

    const std::size_t n = vn.size();
    const std::size_t m = un.size() - 1 - n + 1;  // number of quotient limbs
    q.assign(m, 0);

    const std::uint64_t base = 1ULL << 32;
    for (std::size_t jj = m; jj-- > 0;) {
      std::uint64_t num = (static_cast<std::uint64_t>(un[jj + n]) << 32) | un[jj + n - 1];
      std::uint64_t qhat = num / vn[n - 1];
      std::uint64_t rhat = num % vn[n - 1];
      while (qhat >= base ||
             qhat * vn[n - 2] > ((rhat << 32) | un[jj + n - 2])) {
        --qhat;
        rhat += vn[n - 1];
        if (rhat >= base) break;
      }
      // multiply and subtract
      std::int64_t borrow = 0;
      std::uint64_t carry = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t p = qhat * vn[i] + carry;
        carry = p >> 32;
        std::int64_t t = static_cast<std::int64_t>(un[i + jj]) -
                         static_cast<std::int64_t>(p & 0xffffffffULL) - borrow;
        if (t < 0) { t += static_cast<std::int64_t>(base); borrow = 1; }
        else borrow = 0;
        un[i + jj] = static_cast<std::uint32_t>(t);
      }
      std::int64_t t = static_cast<std::int64_t>(un[jj + n]) -
                       static_cast<std::int64_t>(carry) - borrow;
      if (t < 0) {
        // qhat was one too large: add divisor back
        t += static_cast<std::int64_t>(base);
        --qhat;
        std::uint64_t c2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
          std::uint64_t cur = static_cast<std::uint64_t>(un[i + jj]) + vn[i] + c2;
          un[i + jj] = static_cast<std::uint32_t>(cur);
          c2 = cur >> 32;
        }
        t += static_cast<std::int64_t>(c2);
      }
      un[jj + n] = static_cast<std::uint32_t>(t);
      q[jj] = static_cast<std::uint32_t>(qhat);
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    un.resize(n);
    r = shr_bits(un, s);
  }
};

// Exact rational number, always stored in lowest terms with positive
// denominator.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}
  Rational(int v) : num_(v), den_(1) {}
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }
  Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
  }
  Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
  Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
  Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }

  double to_double() const {
    if (num_.is_zero()) return 0.0;
    std::size_t bn = num_.bit_length(), bd = den_.bit_length();
    if (bn <= 900 && bd <= 900) return num_.to_double() / den_.to_double();
    // keep exponents in range: compare 64-bit mantissas, track exponent gap
    double mn = bn >= 64 ? static_cast<double>(num_.top_bits64())
                         : std::abs(num_.to_double());
    double md = bd >= 64 ? static_cast<double>(den_.top_bits64())
                         : den_.to_double();
    int en = bn >= 64 ? static_cast<int>(bn) - 64 : 0;
    int ed = bd >= 64 ? static_cast<int>(bd) - 64 : 0;
    double v = std::ldexp(mn / md, en - ed);
    return num_.sign() < 0 ? -v : v;
  }

  std::string to_string() const {
    if (den_ == BigInt(1)) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
  }

 private:
  BigInt num_, den_;

  void normalize() {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    if (num_.is_zero()) { den_ = BigInt(1); return; }
    if (den_.sign() < 0) { num_ = -num_; den_ = -den_; }
    BigInt g = BigInt::gcd(num_, den_);
    if (!(g == BigInt(1))) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
  }
};

}  // namespace qgraph

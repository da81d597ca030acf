#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scv {

struct ScvError : std::runtime_error {
  explicit ScvError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DivisionByZero : ScvError {
  DivisionByZero() : ScvError("division by zero") {}
};

// Arbitrary-precision signed integer, little-endian base 2^32 magnitude.
// Used as the overflow fallback of Rational; most arithmetic never touches it.
class BigInt {
 public:
  BigInt() = default;

  BigInt(long long v) {  // NOLINT(google-explicit-constructor)
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    // Avoid UB on LLONG_MIN.
    unsigned long long m =
        v < 0 ? ~static_cast<unsigned long long>(v) + 1ULL : static_cast<unsigned long long>(v);
    while (m != 0) {
      mag_.push_back(static_cast<uint32_t>(m & 0xffffffffULL));
      m >>= 32;
    }
  }

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }

  bool fits_int64() const {
    if (mag_.size() > 2) return false;
    unsigned long long m = magnitude_u64();
    if (sign_ >= 0) return m <= 0x7fffffffffffffffULL;
    return m <= 0x8000000000000000ULL;
  }

  long long to_int64() const {
    unsigned long long m = magnitude_u64();
    if (sign_ < 0) return static_cast<long long>(~m + 1ULL);
    return static_cast<long long>(m);
  }

  friend BigInt operator-(const BigInt& a) {
    BigInt r = a;
    r.sign_ = -r.sign_;
    return r;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
      r.mag_ = add_mag(a.mag_, b.mag_);
      r.sign_ = a.sign_;
    } else {
      int c = cmp_mag(a.mag_, b.mag_);
      if (c == 0) return BigInt();
      const BigInt& big = c > 0 ? a : b;
      const BigInt& small = c > 0 ? b : a;
      r.mag_ = sub_mag(big.mag_, small.mag_);
      r.sign_ = big.sign_;
    }
    return r;
  }

  friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
    BigInt r;
    r.sign_ = a.sign_ * b.sign_;
    r.mag_.assign(a.mag_.size() + b.mag_.size(), 0);
    for (size_t i = 0; i < a.mag_.size(); ++i) {
      unsigned long long carry = 0;
      for (size_t j = 0; j < b.mag_.size(); ++j) {
        unsigned long long cur = static_cast<unsigned long long>(a.mag_[i]) * b.mag_[j] +
                                 r.mag_[i + j] + carry;
        r.mag_[i + j] = static_cast<uint32_t>(cur & 0xffffffffULL);
        carry = cur >> 32;
      }
      size_t k = i + b.mag_.size();
      while (carry != 0) {
        unsigned long long cur = r.mag_[k] + carry;
        r.mag_[k] = static_cast<uint32_t>(cur & 0xffffffffULL);
        carry = cur >> 32;
        ++k;
      }
    }
    r.trim();
    return r;
  }

  // Truncated quotient and remainder; remainder has the sign of the dividend.
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.sign_ == 0) throw DivisionByZero();
    if (cmp_mag(a.mag_, b.mag_) < 0) {
      q = BigInt();
      r = a;
      return;
    }
    std::vector<uint32_t> quot(a.mag_.size(), 0);
    BigInt rem;
    for (size_t i = a.mag_.size(); i-- > 0;) {
      for (int bit = 31; bit >= 0; --bit) {
        rem.shift_left_one();
        if ((a.mag_[i] >> bit) & 1u) rem.set_low_bit();
        if (cmp_mag(rem.mag_, b.mag_) >= 0) {
          rem.mag_ = sub_mag(rem.mag_, b.mag_);
          quot[i] |= 1u << bit;
        }
      }
    }
    q.mag_ = std::move(quot);
    q.trim();
    q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
    rem.trim();
    rem.sign_ = rem.mag_.empty() ? 0 : a.sign_;
    r = std::move(rem);
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
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    while (!b.is_zero()) {
      BigInt q, r;
      divmod(a, b, q, r);
      a = std::move(b);
      b = std::move(r);
      b.sign_ = b.mag_.empty() ? 0 : 1;
    }
    return a;
  }

  friend bool operator==(const BigInt& a, const BigInt& b) {
    return a.sign_ == b.sign_ && a.mag_ == b.mag_;
  }

  friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
    int c = cmp_mag(a.mag_, b.mag_);
    if (a.sign_ < 0) c = -c;
    return c <=> 0;
  }

  std::string to_string() const {
    if (sign_ == 0) return "0";
    std::string digits;
    std::vector<uint32_t> m = mag_;
    while (!m.empty()) {
      unsigned long long rem = 0;
      for (size_t i = m.size(); i-- > 0;) {
        unsigned long long cur = (rem << 32) | m[i];
        m[i] = static_cast<uint32_t>(cur / 10);
        rem = cur % 10;
      }
      digits.push_back(static_cast<char>('0' + rem));
      while (!m.empty() && m.back() == 0) m.pop_back();
    }
    if (sign_ < 0) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
  }

  static BigInt from_string(std::string_view s) {
    BigInt r;
    bool neg = false;
    size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
      neg = s[i] == '-';
      ++i;
    }
    if (i == s.size()) throw ScvError("empty integer literal");
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw ScvError("bad integer literal");
      r.mul_add_small(10, static_cast<uint32_t>(s[i] - '0'));
    }
    r.sign_ = r.mag_.empty() ? 0 : (neg ? -1 : 1);
    return r;
  }

  size_t hash() const {
    size_t h = static_cast<size_t>(sign_ + 2) * 1099511628211ULL;
    for (uint32_t limb : mag_) h = (h ^ limb) * 1099511628211ULL;
    return h;
  }

 private:
  int sign_ = 0;
  std::vector<uint32_t> mag_;

  unsigned long long magnitude_u64() const {
    unsigned long long m = 0;
    if (!mag_.empty()) m = mag_[0];
    if (mag_.size() == 2) m |= static_cast<unsigned long long>(mag_[1]) << 32;
    return m;
  }

  void trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
  }

  void shift_left_one() {
    uint32_t carry = 0;
    for (auto& limb : mag_) {
      uint32_t next = limb >> 31;
      limb = (limb << 1) | carry;
      carry = next;
    }
    if (carry) mag_.push_back(carry);
  }

  void set_low_bit() {
    if (mag_.empty()) mag_.push_back(1);
    else mag_[0] |= 1u;
  }

  void mul_add_small(uint32_t mul, uint32_t add) {
    unsigned long long carry = add;
    for (auto& limb : mag_) {
      unsigned long long cur = static_cast<unsigned long long>(limb) * mul + carry;
      limb = static_cast<uint32_t>(cur & 0xffffffffULL);
      carry = cur >> 32;
    }
    while (carry != 0) {
      mag_.push_back(static_cast<uint32_t>(carry & 0xffffffffULL));
      carry >>= 32;
    }
  }

  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
  }

  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r(std::max(a.size(), b.size()), 0);
    unsigned long long carry = 0;
    for (size_t i = 0; i < r.size(); ++i) {
      unsigned long long cur = carry;
      if (i < a.size()) cur += a[i];
      if (i < b.size()) cur += b[i];
      r[i] = static_cast<uint32_t>(cur & 0xffffffffULL);
      carry = cur >> 32;
    }
    if (carry) r.push_back(static_cast<uint32_t>(carry));
    return r;
  }

  // Requires a >= b.
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r = a;
    long long borrow = 0;
    for (size_t i = 0; i < r.size(); ++i) {
      long long cur = static_cast<long long>(r[i]) - borrow - (i < b.size() ? b[i] : 0);
      if (cur < 0) {
        cur += 1LL << 32;
        borrow = 1;
      } else {
        borrow = 0;
      }
      r[i] = static_cast<uint32_t>(cur);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }
};

namespace detail {

struct BigRat {
  BigInt num;
  BigInt den;  // > 0, coprime with num
};

inline long long ll_gcd(long long a, long long b) {
  unsigned long long ua = a < 0 ? ~static_cast<unsigned long long>(a) + 1 : a;
  unsigned long long ub = b < 0 ? ~static_cast<unsigned long long>(b) + 1 : b;
  while (ub != 0) {
    unsigned long long t = ua % ub;
    ua = ub;
    ub = t;
  }
  return static_cast<long long>(ua);
}

inline bool fits_i64(__int128 v) {
  return v >= -static_cast<__int128>(0x7fffffffffffffffLL) - 1 &&
         v <= static_cast<__int128>(0x7fffffffffffffffLL);
}

}  // namespace detail

// Exact rational number, stored in lowest terms with positive denominator.
// Small values live in an int64 pair; anything wider falls back to BigInt.
class Rational {
 public:
  Rational() = default;
  Rational(long long v) : n_(v) {}  // NOLINT(google-explicit-constructor)

  Rational(long long num, long long den) {
    if (den == 0) throw DivisionByZero();
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = detail::ll_gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    n_ = num;
    d_ = den;
  }

  Rational(BigInt num, BigInt den) {
    if (den.is_zero()) throw DivisionByZero();
    if (den.sign() < 0) {
      num = -num;
      den = -den;
    }
    BigInt g = BigInt::gcd(num, den);
    if (!(g == BigInt(1)) && !g.is_zero()) {
      num = num / g;
      den = den / g;
    }
    if (num.fits_int64() && den.fits_int64()) {
      n_ = num.to_int64();
      d_ = den.to_int64();
    } else {
      big_ = std::make_shared<detail::BigRat>(detail::BigRat{std::move(num), std::move(den)});
    }
  }

  bool is_small() const { return big_ == nullptr; }
  bool is_zero() const { return big_ ? big_->num.is_zero() : n_ == 0; }
  int sign() const {
    if (big_) return big_->num.sign();
    return n_ < 0 ? -1 : (n_ > 0 ? 1 : 0);
  }

  BigInt num_big() const { return big_ ? big_->num : BigInt(n_); }
  BigInt den_big() const { return big_ ? big_->den : BigInt(d_); }

  friend Rational operator-(const Rational& a) {
    if (a.big_) return Rational(-a.big_->num, a.big_->den);
    if (a.n_ == std::numeric_limits<long long>::min()) return Rational(-a.num_big(), a.den_big());
    Rational r;
    r.n_ = -a.n_;
    r.d_ = a.d_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      __int128 num = static_cast<__int128>(a.n_) * b.d_ + static_cast<__int128>(b.n_) * a.d_;
      __int128 den = static_cast<__int128>(a.d_) * b.d_;
      Rational r;
      if (make_small(num, den, r)) return r;
    }
    return Rational(a.num_big() * b.den_big() + b.num_big() * a.den_big(),
                    a.den_big() * b.den_big());
  }

  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      __int128 num = static_cast<__int128>(a.n_) * b.n_;
      __int128 den = static_cast<__int128>(a.d_) * b.d_;
      Rational r;
      if (make_small(num, den, r)) return r;
    }
    return Rational(a.num_big() * b.num_big(), a.den_big() * b.den_big());
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw DivisionByZero();
    if (a.is_small() && b.is_small()) {
      __int128 num = static_cast<__int128>(a.n_) * b.d_;
      __int128 den = static_cast<__int128>(a.d_) * b.n_;
      Rational r;
      if (make_small(num, den, r)) return r;
    }
    return Rational(a.num_big() * b.den_big(), a.den_big() * b.num_big());
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) return a.n_ == b.n_ && a.d_ == b.d_;
    return a.num_big() == b.num_big() && a.den_big() == b.den_big();
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      __int128 lhs = static_cast<__int128>(a.n_) * b.d_;
      __int128 rhs = static_cast<__int128>(b.n_) * a.d_;
      return lhs <=> rhs;
    }
    BigInt lhs = a.num_big() * b.den_big();
    BigInt rhs = b.num_big() * a.den_big();
    return lhs <=> rhs;
  }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  // Serialized as "p/q", or "p" when the denominator is 1.
  std::string to_string() const {
    if (big_) {
      std::string s = big_->num.to_string();
      if (!(big_->den == BigInt(1))) s += "/" + big_->den.to_string();
      return s;
    }
    std::string s = std::to_string(n_);
    if (d_ != 1) s += "/" + std::to_string(d_);
    return s;
  }

  static Rational from_string(std::string_view s) {
    size_t slash = s.find('/');
    if (slash == std::string_view::npos) {
      BigInt n = BigInt::from_string(s);
      return Rational(std::move(n), BigInt(1));
    }
    BigInt n = BigInt::from_string(s.substr(0, slash));
    BigInt d = BigInt::from_string(s.substr(slash + 1));
    return Rational(std::move(n), std::move(d));
  }

  // Decimal expansion with the given number of fractional digits, ties to even.
  std::string to_decimal(int digits) const {
    BigInt pow(1);
    for (int i = 0; i < digits; ++i) pow = pow * BigInt(10);
    BigInt num = num_big() * pow;
    BigInt den = den_big();
    BigInt q, r;
    BigInt::divmod(num, den, q, r);
    // q is truncated toward zero; round |r|/den to nearest, ties to even.
    BigInt twice = (r.sign() < 0 ? -r : r) * BigInt(2);
    int cmp = twice < den ? -1 : (twice == den ? 0 : 1);
    bool bump = cmp > 0;
    if (cmp == 0) {
      BigInt qq, qr;
      BigInt::divmod(q, BigInt(2), qq, qr);
      bump = !qr.is_zero();  // q odd -> round away to make it even
    }
    if (bump) q = q + BigInt(num.sign() < 0 ? -1 : 1);
    bool neg = q.sign() < 0 || (q.is_zero() && num.sign() < 0 && bump);
    BigInt qa = q.sign() < 0 ? -q : q;
    std::string body = qa.to_string();
    if (static_cast<int>(body.size()) <= digits) {
      body.insert(body.begin(), digits + 1 - body.size(), '0');
    }
    std::string out = body.substr(0, body.size() - digits);
    if (digits > 0) out += "." + body.substr(body.size() - digits);
    if (neg && qa.sign() != 0) out.insert(out.begin(), '-');
    return out;
  }

  double to_double() const {
    if (is_small()) return static_cast<double>(n_) / static_cast<double>(d_);
    return std::stod(to_decimal(18));
  }

  size_t hash() const {
    if (big_) return big_->num.hash() * 31 + big_->den.hash();
    return (static_cast<size_t>(n_) * 1099511628211ULL) ^ static_cast<size_t>(d_);
  }

 private:
  long long n_ = 0;
  long long d_ = 1;
  std::shared_ptr<const detail::BigRat> big_;

  static bool make_small(__int128 num, __int128 den, Rational& out) {
    if (den == 0) throw DivisionByZero();
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    if (!detail::fits_i64(num) || !detail::fits_i64(den)) return false;
    out.n_ = static_cast<long long>(num);
    out.d_ = static_cast<long long>(den);
    out.big_ = nullptr;
    return true;
  }
};

inline Rational rat(long long num, long long den = 1) { return Rational(num, den); }

inline const Rational& rat_min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace scv

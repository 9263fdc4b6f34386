#pragma once

#include <type_traits>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cycubic/numbers.hpp"

namespace cycubic {

struct BadPrime : std::domain_error {
    explicit BadPrime(const std::string& w) : std::domain_error(w) {}
};

// Prime-field element. The modulus is thread-local state installed with
// FpContext; it must be an odd prime below 2^61 so that products fit in
// 128-bit intermediates.
class Fp {
public:
    Fp() : v_(0) {}
    template <typename T>
        requires std::is_integral_v<T>
    explicit Fp(T v) {
        if constexpr (std::is_signed_v<T>) {
            long long m = static_cast<long long>(modulus());
            long long r = static_cast<long long>(v) % m;
            if (r < 0) r += m;
            v_ = static_cast<std::uint64_t>(r);
        } else {
            v_ = static_cast<std::uint64_t>(v) % modulus();
        }
    }

    static std::uint64_t modulus();
    static void set_modulus(std::uint64_t p);

    std::uint64_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    Fp operator+(Fp o) const {
        std::uint64_t s = v_ + o.v_;
        if (s >= modulus()) s -= modulus();
        return from_raw(s);
    }
    Fp operator-(Fp o) const {
        std::uint64_t s = v_ >= o.v_ ? v_ - o.v_ : v_ + modulus() - o.v_;
        return from_raw(s);
    }
    Fp operator-() const { return from_raw(v_ == 0 ? 0 : modulus() - v_); }
    Fp operator*(Fp o) const {
        return from_raw(static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(v_) * o.v_ % modulus()));
    }
    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    bool operator==(Fp o) const { return v_ == o.v_; }
    bool operator!=(Fp o) const { return v_ != o.v_; }

    Fp pow(std::uint64_t e) const {
        Fp r = from_raw(1), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }
    Fp inv() const {
        if (v_ == 0) throw std::domain_error("inverse of zero in F_p");
        return pow(modulus() - 2);
    }

    static Fp from_raw(std::uint64_t v) {
        Fp f;
        f.v_ = v;
        return f;
    }

private:
    std::uint64_t v_;
};

// RAII guard installing the field modulus for the current thread.
class FpContext {
public:
    explicit FpContext(std::uint64_t p);
    ~FpContext();
    FpContext(const FpContext&) = delete;
    FpContext& operator=(const FpContext&) = delete;

private:
    std::uint64_t saved_;
};

bool is_prime_u64(std::uint64_t n);

// Reduction Q -> F_p; requires the denominator to be a unit mod p.
Fp reduce_mod_p(const Rat& q);

// A primitive cube root of unity in F_p; requires p = 1 mod 3.
struct NoCubeRoot : std::domain_error {
    NoCubeRoot() : std::domain_error("field has no primitive cube root of unity") {}
};
Fp primitive_cube_root();

}  // namespace cycubic

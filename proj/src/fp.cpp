#include "cycubic/fp.hpp"

namespace cycubic {

namespace {
thread_local std::uint64_t g_modulus = 0;
}

std::uint64_t Fp::modulus() {
    if (g_modulus == 0) throw std::logic_error("no F_p modulus installed (use FpContext)");
    return g_modulus;
}

void Fp::set_modulus(std::uint64_t p) { g_modulus = p; }

FpContext::FpContext(std::uint64_t p) : saved_(g_modulus) {
    if (p < 3 || p >= (1ull << 61) || !is_prime_u64(p))
        throw BadPrime("modulus must be an odd prime below 2^61: " + std::to_string(p));
    g_modulus = p;
}

FpContext::~FpContext() { g_modulus = saved_; }

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull})
        if (n % q == 0) return n == q;
    // deterministic Miller-Rabin for 64-bit integers
    auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
    };
    auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m) {
        std::uint64_t r = 1;
        a %= m;
        while (e) {
            if (e & 1) r = mulmod(r, a, m);
            a = mulmod(a, a, m);
            e >>= 1;
        }
        return r;
    };
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

Fp reduce_mod_p(const Rat& q) {
    Int p(Fp::modulus());
    Int n = numer(q) % p, d = denom(q) % p;
    if (d == 0) throw BadPrime("denominator not invertible mod p");
    if (n < 0) n += p;
    if (d < 0) d += p;
    return Fp(static_cast<std::uint64_t>(n)) * Fp(static_cast<std::uint64_t>(d)).inv();
}

Fp primitive_cube_root() {
    std::uint64_t p = Fp::modulus();
    if (p % 3 != 1) throw NoCubeRoot();
    for (std::uint64_t g = 2; g < p; ++g) {
        Fp x = Fp(g).pow((p - 1) / 3);
        if (x != Fp::from_raw(1)) return x;  // x^3 = 1 and x != 1
    }
    throw NoCubeRoot();
}

}  // namespace cycubic

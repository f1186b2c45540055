// Exact scalar arithmetic: prime fields F_p and arbitrary-precision rationals.
// All computation in this library is exact; there is no floating point in any
// algebraic code path.

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace gentle {

// Thrown when an input fails validation (bad file, bad presentation, bad
// arguments to a constructor).  Distinct from InternalError, which always
// indicates a bug.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

// Prime field F_p.  Field objects are small values; element type is a plain
// integer in [0, p).  Every operation that could leave the field throws.
struct GF {
    using Elt = std::uint64_t;

    std::uint64_t p = 5;

    GF() = default;
    explicit GF(std::uint64_t prime) : p(prime) {
        if (prime < 2) throw ValidationError("field characteristic must be a prime >= 2");
        for (std::uint64_t d = 2; d * d <= prime; ++d)
            if (prime % d == 0) throw ValidationError("field characteristic " + std::to_string(prime) + " is not prime");
        if (prime > (std::uint64_t(1) << 31)) throw ValidationError("prime too large");
    }

    Elt zero() const { return 0; }
    Elt one() const { return 1 % p; }
    Elt from_int(long long v) const {
        long long m = v % static_cast<long long>(p);
        if (m < 0) m += static_cast<long long>(p);
        return static_cast<Elt>(m);
    }
    Elt add(Elt a, Elt b) const { return (a + b) % p; }
    Elt sub(Elt a, Elt b) const { return (a + p - b) % p; }
    Elt neg(Elt a) const { return a == 0 ? 0 : p - a; }
    Elt mul(Elt a, Elt b) const { return (a * b) % p; }
    Elt inv(Elt a) const {
        if (a == 0) throw ValidationError("division by zero in F_p");
        // extended Euclid
        long long t = 0, nt = 1;
        long long r = static_cast<long long>(p), nr = static_cast<long long>(a);
        while (nr != 0) {
            long long q = r / nr;
            long long tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        if (t < 0) t += static_cast<long long>(p);
        return static_cast<Elt>(t);
    }
    Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
    bool is_zero(Elt a) const { return a == 0; }
    bool eq(Elt a, Elt b) const { return a == b; }

    Elt rand(std::mt19937_64& rng) const { return rng() % p; }
    Elt rand_nonzero(std::mt19937_64& rng) const { return 1 + rng() % (p - 1); }

    std::string str(Elt a) const { return std::to_string(a); }
    Elt parse(const std::string& s) const {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw ValidationError("bad scalar literal '" + s + "'");
        return from_int(v);
    }

    bool operator==(const GF&) const = default;
};

// Exact rational numbers.  Used for hand-sized examples; the randomized
// decomposition machinery requires a finite field and rejects this model.
struct QQ {
    using Elt = boost::multiprecision::cpp_rational;

    Elt zero() const { return Elt(0); }
    Elt one() const { return Elt(1); }
    Elt from_int(long long v) const { return Elt(v); }
    Elt add(const Elt& a, const Elt& b) const { return a + b; }
    Elt sub(const Elt& a, const Elt& b) const { return a - b; }
    Elt neg(const Elt& a) const { return -a; }
    Elt mul(const Elt& a, const Elt& b) const { return a * b; }
    Elt inv(const Elt& a) const {
        if (a == 0) throw ValidationError("division by zero in Q");
        return Elt(1) / a;
    }
    Elt div(const Elt& a, const Elt& b) const { return a / inv_guard(b); }
    bool is_zero(const Elt& a) const { return a == 0; }
    bool eq(const Elt& a, const Elt& b) const { return a == b; }

    Elt rand(std::mt19937_64& rng) const { return Elt(static_cast<long long>(rng() % 11) - 5); }
    Elt rand_nonzero(std::mt19937_64& rng) const {
        long long v = static_cast<long long>(rng() % 10) - 5;
        if (v >= 0) ++v;
        return Elt(v);
    }

    std::string str(const Elt& a) const { return a.str(); }
    Elt parse(const std::string& s) const {
        try {
            return Elt(s);
        } catch (const std::exception&) {
            throw ValidationError("bad rational literal '" + s + "'");
        }
    }

    bool operator==(const QQ&) const = default;

  private:
    Elt inv_guard(const Elt& b) const {
        if (b == 0) throw ValidationError("division by zero in Q");
        return b;
    }
};

}  // namespace gentle

#include "phishlens/reed_solomon.hpp"

#include <array>

#include "phishlens/error.hpp"

namespace phishlens::rs {
namespace {

struct Tables {
    std::array<std::uint8_t, 512> exp{};
    std::array<int, 256> log{};
    Tables() {
        int x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[i] = static_cast<std::uint8_t>(x);
            log[x] = i;
            x <<= 1;
            if (x & 0x100) x ^= 0x11D;
        }
        for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

std::uint8_t gf_div(std::uint8_t a, std::uint8_t b) {
    if (a == 0) return 0;
    return tables().exp[(tables().log[a] + 255 - tables().log[b]) % 255];
}

// Polynomials below are stored lowest degree first.
std::uint8_t poly_eval(const std::vector<std::uint8_t>& p, std::uint8_t x) {
    std::uint8_t y = 0;
    for (std::size_t i = p.size(); i-- > 0;) y = static_cast<std::uint8_t>(gf_mul(y, x) ^ p[i]);
    return y;
}

}  // namespace

std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) noexcept {
    if (a == 0 || b == 0) return 0;
    const auto& t = tables();
    return t.exp[t.log[a] + t.log[b]];
}

std::uint8_t gf_exp(int power) noexcept { return tables().exp[((power % 255) + 255) % 255]; }

int gf_log(std::uint8_t value) noexcept { return tables().log[value]; }

std::vector<std::uint8_t> generator(int ec_len) {
    // product of (x - alpha^i), highest degree first
    std::vector<std::uint8_t> g = {1};
    for (int i = 0; i < ec_len; ++i) {
        std::vector<std::uint8_t> next(g.size() + 1, 0);
        for (std::size_t j = 0; j < g.size(); ++j) {
            next[j] ^= g[j];
            next[j + 1] ^= gf_mul(g[j], gf_exp(i));
        }
        g = std::move(next);
    }
    g.erase(g.begin());
    return g;
}

Bytes encode(ByteView data, int ec_len) {
    auto gen = generator(ec_len);
    Bytes rem(static_cast<std::size_t>(ec_len), 0);
    for (std::uint8_t b : data) {
        std::uint8_t factor = b ^ rem.front();
        rem.erase(rem.begin());
        rem.push_back(0);
        for (std::size_t i = 0; i < rem.size(); ++i) rem[i] ^= gf_mul(gen[i], factor);
    }
    return rem;
}

int decode(Bytes& block, int ec_len) {
    const int n = static_cast<int>(block.size());
    if (ec_len <= 0 || n > 255 || ec_len >= n) throw Error(Errc::invalid_argument, "bad Reed-Solomon block shape");
    // Codeword i (from the start) is the coefficient of x^(n-1-i).
    std::vector<std::uint8_t> synd(static_cast<std::size_t>(ec_len));
    bool clean = true;
    for (int i = 0; i < ec_len; ++i) {
        std::uint8_t s = 0;
        for (int k = 0; k < n; ++k) s = static_cast<std::uint8_t>(gf_mul(s, gf_exp(i)) ^ block[static_cast<std::size_t>(k)]);
        synd[static_cast<std::size_t>(i)] = s;
        if (s) clean = false;
    }
    if (clean) return 0;

    // Berlekamp-Massey: error locator sigma (lowest degree first).
    std::vector<std::uint8_t> sigma = {1}, prev = {1};
    int L = 0, m = 1;
    std::uint8_t b = 1;
    for (int r = 0; r < ec_len; ++r) {
        std::uint8_t d = synd[static_cast<std::size_t>(r)];
        for (int i = 1; i <= L && i < static_cast<int>(sigma.size()); ++i)
            d ^= gf_mul(sigma[static_cast<std::size_t>(i)], synd[static_cast<std::size_t>(r - i)]);
        if (d == 0) {
            ++m;
            continue;
        }
        std::uint8_t coef = gf_div(d, b);
        std::vector<std::uint8_t> next = sigma;
        if (next.size() < prev.size() + static_cast<std::size_t>(m)) next.resize(prev.size() + static_cast<std::size_t>(m), 0);
        for (std::size_t i = 0; i < prev.size(); ++i) next[i + static_cast<std::size_t>(m)] ^= gf_mul(coef, prev[i]);
        if (2 * L <= r) {
            prev = sigma;
            L = r + 1 - L;
            b = d;
            m = 1;
        } else {
            ++m;
        }
        sigma = std::move(next);
    }
    while (sigma.size() > 1 && sigma.back() == 0) sigma.pop_back();
    if (2 * L > ec_len || static_cast<int>(sigma.size()) - 1 != L)
        throw Error(Errc::rs_failure, "too many errors in block");

    // Chien search: error at position p (power x^p) when sigma(alpha^-p) == 0.
    std::vector<int> powers;
    for (int p = 0; p < n; ++p)
        if (poly_eval(sigma, gf_exp(-p)) == 0) powers.push_back(p);
    if (static_cast<int>(powers.size()) != L) throw Error(Errc::rs_failure, "error locator roots do not match degree");

    // Forney: omega = S(x) * sigma(x) mod x^ec_len.
    std::vector<std::uint8_t> omega(static_cast<std::size_t>(ec_len), 0);
    for (int i = 0; i < ec_len; ++i)
        for (int j = 0; j <= i && j < static_cast<int>(sigma.size()); ++j)
            omega[static_cast<std::size_t>(i)] ^= gf_mul(sigma[static_cast<std::size_t>(j)], synd[static_cast<std::size_t>(i - j)]);
    // formal derivative of sigma
    std::vector<std::uint8_t> dsigma;
    for (std::size_t i = 1; i < sigma.size(); ++i) dsigma.push_back(i % 2 ? sigma[i] : 0);

    for (int p : powers) {
        std::uint8_t xinv = gf_exp(-p);
        std::uint8_t denom = poly_eval(dsigma, xinv);
        if (denom == 0) throw Error(Errc::rs_failure, "Forney denominator vanished");
        // with first consecutive root alpha^0 the magnitude carries an extra X factor
        std::uint8_t magnitude = gf_mul(gf_exp(p), gf_div(poly_eval(omega, xinv), denom));
        block[static_cast<std::size_t>(n - 1 - p)] ^= magnitude;
    }

    for (int i = 0; i < ec_len; ++i) {
        std::uint8_t s = 0;
        for (int k = 0; k < n; ++k) s = static_cast<std::uint8_t>(gf_mul(s, gf_exp(i)) ^ block[static_cast<std::size_t>(k)]);
        if (s) throw Error(Errc::rs_failure, "residual syndrome after correction");
    }
    return L;
}

}  // namespace phishlens::rs

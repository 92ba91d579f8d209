#include "volcano/modpoly.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>

#include "volcano/arith.hpp"

#ifndef VOLCANO_DEFAULT_DATA_DIR
#define VOLCANO_DEFAULT_DATA_DIR "data"
#endif

namespace volcano {

namespace {

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
    std::ostringstream os;
    for (unsigned char c : digest) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(c);
    return os.str();
}

void trim(PolyFp& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const PolyFp& f) { return static_cast<int>(f.size()) - 1; }

Fp eval(const PolyFp& f, Fp x, std::uint64_t p) {
    Fp r = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) r = (r * x + *it) % p;
    return r;
}

// Remainder of a modulo monic-or-not b.
PolyFp poly_mod(PolyFp a, const PolyFp& b, std::uint64_t p) {
    trim(a);
    int db = degree(b);
    Fp inv_lead = invmod(b.back(), p);
    while (degree(a) >= db) {
        Fp q = a.back() * inv_lead % p;
        int shift = degree(a) - db;
        for (int i = 0; i <= db; ++i) a[shift + i] = (a[shift + i] + p - q * b[i] % p) % p;
        trim(a);
    }
    return a;
}

PolyFp mulmod_poly(const PolyFp& x, const PolyFp& y, const PolyFp& m, std::uint64_t p) {
    if (x.empty() || y.empty()) return {};
    PolyFp r(x.size() + y.size() - 1, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x[i]) continue;
        for (std::size_t k = 0; k < y.size(); ++k) r[i + k] = (r[i + k] + x[i] * y[k]) % p;
    }
    return poly_mod(std::move(r), m, p);
}

PolyFp powmod_poly(PolyFp base, std::uint64_t e, const PolyFp& m, std::uint64_t p) {
    PolyFp r{1};
    r = poly_mod(r, m, p);
    base = poly_mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = mulmod_poly(r, base, m, p);
        base = mulmod_poly(base, base, m, p);
        e >>= 1;
    }
    return r;
}

PolyFp poly_gcd(PolyFp a, PolyFp b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        PolyFp r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.empty()) return a;
    Fp inv = invmod(a.back(), p);
    for (Fp& c : a) c = c * inv % p;
    return a;
}

PolyFp poly_sub(PolyFp a, const PolyFp& b, std::uint64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

PolyFp poly_div(const PolyFp& a, const PolyFp& b, std::uint64_t p) {
    PolyFp rem = a;
    trim(rem);
    int db = degree(b);
    if (degree(rem) < db) return {};
    PolyFp q(degree(rem) - db + 1, 0);
    Fp inv_lead = invmod(b.back(), p);
    while (degree(rem) >= db) {
        Fp c = rem.back() * inv_lead % p;
        int shift = degree(rem) - db;
        q[shift] = c;
        for (int i = 0; i <= db; ++i) rem[shift + i] = (rem[shift + i] + p - c * b[i] % p) % p;
        trim(rem);
    }
    return q;
}

// Splits a squarefree product of distinct linear factors.
void split_linear(const PolyFp& g, std::uint64_t p, std::mt19937_64& rng, std::vector<Fp>& out) {
    int d = degree(g);
    if (d <= 0) return;
    if (d == 1) {
        Fp inv = invmod(g[1], p);
        out.push_back((p - g[0] * inv % p) % p);
        return;
    }
    while (true) {
        Fp delta = rng() % p;
        PolyFp h = powmod_poly({delta, 1}, (p - 1) / 2, g, p);
        PolyFp k = poly_gcd(g, poly_sub(h, {1}, p), p);
        int dk = degree(k);
        if (dk > 0 && dk < d) {
            split_linear(k, p, rng, out);
            split_linear(poly_div(g, k, p), p, rng, out);
            return;
        }
    }
}

int multiplicity_of(PolyFp f, Fp r, std::uint64_t p) {
    int m = 0;
    while (degree(f) >= 1 && eval(f, r, p) == 0) {
        // Synthetic division by (Y - r).
        PolyFp q(f.size() - 1, 0);
        Fp carry = 0;
        for (int i = degree(f); i >= 1; --i) {
            carry = (f[i] + carry * r) % p;
            q[i - 1] = carry;
        }
        f = std::move(q);
        ++m;
    }
    return m;
}

void require_nonzero(const PolyFp& f) {
    if (std::all_of(f.begin(), f.end(), [](Fp c) { return c == 0; })) {
        throw std::invalid_argument("root finding on the zero polynomial");
    }
}

}  // namespace

BigInt ModularPolynomial::coefficient(int i, int j) const {
    auto it = coefficients.find(i >= j ? std::make_pair(i, j) : std::make_pair(j, i));
    return it == coefficients.end() ? BigInt(0) : it->second;
}

bool is_supported_ell(int ell) {
    auto s = supported_ells();
    return std::find(s.begin(), s.end(), ell) != s.end();
}

std::vector<int> supported_ells() { return {2, 3, 5, 7, 11, 13}; }

std::filesystem::path modpoly_data_dir(const std::optional<std::filesystem::path>& override_dir) {
    if (override_dir) return *override_dir;
    if (const char* env = std::getenv("VOLCANO_DATA_DIR"); env && *env) return env;
    return VOLCANO_DEFAULT_DATA_DIR;
}

ModularPolynomial parse_modpoly(const std::string& text) {
    auto pos = text.rfind("sha256 ");
    if (pos == std::string::npos || (pos != 0 && text[pos - 1] != '\n')) {
        throw DataError("modular polynomial file has no checksum line");
    }
    std::string body = text.substr(0, pos);
    std::string expected = text.substr(pos + 7);
    while (!expected.empty() && (expected.back() == '\n' || expected.back() == '\r')) expected.pop_back();
    if (sha256_hex(body) != expected) throw DataError("modular polynomial checksum mismatch");

    std::istringstream in(body);
    std::string tag;
    ModularPolynomial phi;
    if (!(in >> tag >> phi.ell) || tag != "ell") throw DataError("modular polynomial file lacks 'ell' header");
    int i, j;
    std::string c;
    std::pair<int, int> prev{-1, -1};
    while (in >> i >> j >> c) {
        if (i < j || i < 0 || i > phi.ell + 1) throw DataError("bad monomial index in modular polynomial file");
        if (std::make_pair(i, j) <= prev) throw DataError("monomials out of order in modular polynomial file");
        prev = {i, j};
        phi.coefficients[{i, j}] = BigInt(c);
    }
    if (!in.eof()) throw DataError("malformed line in modular polynomial file");
    int top = phi.ell + 1;
    if (phi.coefficient(top, 0) != 1 || phi.coefficient(phi.ell, phi.ell) != -1 ||
        phi.coefficients.count({top, top})) {
        throw DataError("modular polynomial has unexpected leading terms");
    }
    return phi;
}

const ModularPolynomial& load_modpoly(int ell, const std::optional<std::filesystem::path>& dir) {
    if (!is_supported_ell(ell)) {
        throw std::invalid_argument("unsupported ell " + std::to_string(ell) + " (supported: 2, 3, 5, 7, 11, 13)");
    }
    static std::mutex mu;
    static std::map<std::pair<std::string, int>, std::unique_ptr<ModularPolynomial>> cache;
    auto root = modpoly_data_dir(dir);
    std::lock_guard lock(mu);
    auto key = std::make_pair(root.string(), ell);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
    auto path = root / ("phi_" + std::to_string(ell) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    auto phi = std::make_unique<ModularPolynomial>(parse_modpoly(ss.str()));
    if (phi->ell != ell) throw DataError(path.string() + " holds ell " + std::to_string(phi->ell));
    return *cache.emplace(key, std::move(phi)).first->second;
}

std::vector<Root> roots_by_scan(const PolyFp& f, std::uint64_t p) {
    require_nonzero(f);
    PolyFp g = f;
    trim(g);
    std::vector<Root> out;
    if (degree(g) < 1) return out;
    for (Fp y = 0; y < p; ++y) {
        if (eval(g, y, p) == 0) out.push_back({y, multiplicity_of(g, y, p)});
    }
    return out;
}

std::vector<Root> roots_by_frobenius(const PolyFp& f, std::uint64_t p) {
    require_nonzero(f);
    PolyFp g = f;
    trim(g);
    std::vector<Root> out;
    if (degree(g) < 1) return out;
    PolyFp frob = powmod_poly({0, 1}, p, g, p);
    PolyFp rational = poly_gcd(g, poly_sub(frob, {0, 1}, p), p);
    std::vector<Fp> roots;
    std::mt19937_64 rng(p * 0x2545F4914F6CDD1DULL + static_cast<std::uint64_t>(g.size()));
    split_linear(rational, p, rng, roots);
    std::sort(roots.begin(), roots.end());
    for (Fp r : roots) out.push_back({r, multiplicity_of(g, r, p)});
    return out;
}

std::vector<Root> roots_with_multiplicity(const PolyFp& f, std::uint64_t p, const RootFindingOptions& opt) {
    return p <= opt.scan_limit ? roots_by_scan(f, p) : roots_by_frobenius(f, p);
}

ReducedModPoly::ReducedModPoly(const ModularPolynomial& phi, std::uint64_t p)
    : ell_(phi.ell), p_(p), coeffs_((phi.ell + 2) * (phi.ell + 2), 0) {
    BigInt bp(p);
    for (const auto& [ij, c] : phi.coefficients) {
        BigInt r = c % bp;
        if (r < 0) r += bp;
        Fp v = r.convert_to<Fp>();
        coeffs_[ij.first * (ell_ + 2) + ij.second] = v;
        coeffs_[ij.second * (ell_ + 2) + ij.first] = v;
    }
}

PolyFp ReducedModPoly::specialize(Fp j) const {
    int n = ell_ + 2;
    PolyFp f(n, 0);
    for (int y = 0; y < n; ++y) {
        Fp acc = 0;
        for (int x = n - 1; x >= 0; --x) acc = (acc * j + coefficient(x, y)) % p_;
        f[y] = acc;
    }
    return f;
}

Fp ReducedModPoly::evaluate(Fp x, Fp y) const { return eval(specialize(x), y, p_); }

std::vector<Root> ReducedModPoly::neighbors(Fp j, const RootFindingOptions& opt) const {
    return roots_with_multiplicity(specialize(j % p_), p_, opt);
}

std::vector<Root> neighbors(Fp j, std::uint64_t p, int ell) {
    require_field_prime(p);
    if (static_cast<std::uint64_t>(ell) == p) throw std::invalid_argument("ell must differ from p");
    return ReducedModPoly(load_modpoly(ell), p).neighbors(j);
}

}  // namespace volcano

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypercover {

// Regular two-level fractional factorial designs on the vertices of a cube.
// A design in d factors with n = 2^k runs is a list of d nonzero column
// codes in F_2^k; run x takes level (-1)^<c_j, x> in factor j.
//
// Quality is judged by the word-length pattern (A_3, A_4, ...) of the
// defining contrast subgroup, which is the dual of the k-dimensional code
// spanned by the columns. The dual weight distribution comes from the
// MacWilliams transform of the 2^k-word primal distribution, so it stays
// cheap even when the subgroup itself has 2^{d-k} words.

namespace detail {

// weight distribution of the code {(<y,c_1>,...,<y,c_d>) : y in F_2^k},
// Gray-code enumeration over y
inline std::vector<std::int64_t> primal_weight_distribution(const std::vector<std::uint32_t>& cols,
                                                            int k) {
    const int d = static_cast<int>(cols.size());
    // flip masks: toggling bit b of y toggles codeword bits {j : c_j has bit b}
    std::vector<std::uint64_t> flip(k, 0);
    for (int b = 0; b < k; ++b)
        for (int j = 0; j < d; ++j)
            if ((cols[j] >> b) & 1U) flip[b] |= 1ULL << j;
    std::vector<std::int64_t> dist(d + 1, 0);
    std::uint64_t word = 0;
    dist[0] += 1;
    const std::uint64_t total = 1ULL << k;
    for (std::uint64_t g = 1; g < total; ++g) {
        const int b = std::countr_zero(g);  // Gray-code bit flip
        word ^= flip[b];
        dist[std::popcount(word)] += 1;
    }
    return dist;
}

// A_j of the dual code via MacWilliams / Krawtchouk:
//   A_j = 2^{-k} sum_i B_i K_j(i; d)
inline std::vector<double> dual_weight_distribution(const std::vector<std::int64_t>& primal, int d,
                                                    int k) {
    std::vector<double> dual(d + 1, 0.0);
    for (int i = 0; i <= d; ++i) {
        if (primal[i] == 0) continue;
        // K_j(i) by the three-term recurrence in j
        long double kjm1 = 1.0L;                   // K_0
        long double kj = static_cast<long double>(d - 2 * i);  // K_1
        dual[0] += static_cast<double>(primal[i] * kjm1);
        if (d >= 1) dual[1] += static_cast<double>(primal[i] * kj);
        for (int j = 1; j < d; ++j) {
            const long double kjp1 =
                ((d - 2 * i) * kj - static_cast<long double>(d - j + 1) * kjm1) / (j + 1);
            dual[j + 1] += static_cast<double>(primal[i] * kjp1);
            kjm1 = kj;
            kj = kjp1;
        }
    }
    const double scale = std::ldexp(1.0, -k);
    for (double& a : dual) a *= scale;
    return dual;
}

inline std::vector<double> word_length_pattern(const std::vector<std::uint32_t>& cols, int k) {
    const int d = static_cast<int>(cols.size());
    auto wlp = dual_weight_distribution(primal_weight_distribution(cols, k), d, k);
    wlp[0] = 0.0;  // the empty word is not counted
    return wlp;
}

// lexicographic comparison of (A_3, A_4, ...) with a small tolerance
inline bool wlp_less(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 3; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i] - 1e-6) return true;
        if (a[i] > b[i] + 1e-6) return false;
    }
    return false;
}

}  // namespace detail

// Greedy aberration-minimizing search: start from the k basis columns and
// add the remaining d-k columns one at a time, each time choosing the code
// with the lexicographically smallest word-length pattern (smallest code
// breaks ties, so the result is deterministic).
inline std::vector<std::uint32_t> search_factorial_columns(int d, int k) {
    if (k < 1 || k > 16) throw std::invalid_argument("search_factorial_columns: need 1 <= k <= 16");
    if (d < k) throw std::invalid_argument("search_factorial_columns: need d >= k");
    if (d > 64) throw std::invalid_argument("search_factorial_columns: d > 64 not supported");
    const std::uint32_t n_codes = (1U << k) - 1;
    if (static_cast<std::uint32_t>(d) > n_codes)
        throw std::invalid_argument("search_factorial_columns: d exceeds 2^k - 1");
    std::vector<std::uint32_t> cols;
    cols.reserve(d);
    for (int b = 0; b < k; ++b) cols.push_back(1U << b);
    std::vector<bool> used(n_codes + 1, false);
    for (auto c : cols) used[c] = true;
    while (static_cast<int>(cols.size()) < d) {
        std::uint32_t best = 0;
        std::vector<double> best_wlp;
        cols.push_back(0);
        for (std::uint32_t c = 1; c <= n_codes; ++c) {
            if (used[c]) continue;
            cols.back() = c;
            auto wlp = detail::word_length_pattern(cols, k);
            if (best == 0 || detail::wlp_less(wlp, best_wlp)) {
                best = c;
                best_wlp = std::move(wlp);
            }
        }
        cols.back() = best;
        used[best] = true;
    }
    return cols;
}

namespace detail {

// Column codes frozen from search_factorial_columns for the design sizes the
// benchmark tables use, so generation is instant and stable.
struct FactorialEntry {
    int d;
    int n;
    std::uint32_t cols[50];
};

#include "hypercover/factorial_table.inc"

}  // namespace detail

struct FactorialDesign {
    std::vector<std::uint32_t> columns;
    bool from_table = false;  // false means max-resolution greedy fallback
};

inline std::string factorial_supported_pairs() {
    std::ostringstream os;
    for (std::size_t i = 0; i < detail::kFactorialTableSize; ++i) {
        if (i) os << ", ";
        os << "(d=" << detail::kFactorialTable[i].d << ", n=" << detail::kFactorialTable[i].n << ")";
    }
    return os.str();
}

inline FactorialDesign factorial_columns(int d, std::int64_t n) {
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("factorial_columns: n must be a power of two >= 2; shipped table: " +
                                    factorial_supported_pairs());
    int k = 0;
    while ((1LL << k) < n) ++k;
    if (k > d)
        throw std::invalid_argument("factorial_columns: n = 2^k needs k <= d; shipped table: " +
                                    factorial_supported_pairs());
    for (std::size_t i = 0; i < detail::kFactorialTableSize; ++i) {
        const auto& e = detail::kFactorialTable[i];
        if (e.d == d && e.n == n)
            return FactorialDesign{std::vector<std::uint32_t>(e.cols, e.cols + d), true};
    }
    // off-table sizes fall back to the greedy search (memoized)
    static std::map<std::pair<int, int>, std::vector<std::uint32_t>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(d, k);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, search_factorial_columns(d, k)).first;
    return FactorialDesign{it->second, false};
}

// resolution = smallest nonzero word length of the defining subgroup
inline int factorial_resolution(const std::vector<std::uint32_t>& cols, int k) {
    const auto wlp = detail::word_length_pattern(cols, k);
    for (std::size_t j = 1; j < wlp.size(); ++j)
        if (wlp[j] > 0.5) return static_cast<int>(j);
    return static_cast<int>(cols.size()) + 1;  // no defining words: full factorial
}

}  // namespace hypercover

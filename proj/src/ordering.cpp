#include "oflab/ordering.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oflab {

Permutation::Permutation(std::vector<int> word) : word_(std::move(word)) {
    const int n = size();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : word_) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)]) {
            throw std::invalid_argument("permutation word is not a bijection of 1..n");
        }
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> w(static_cast<std::size_t>(n));
    std::iota(w.begin(), w.end(), 1);
    return Permutation(std::move(w));
}

Permutation Permutation::parse(std::string_view text) {
    std::vector<int> w;
    if (text.find(',') == std::string_view::npos) {
        for (char c : text) {
            if (c < '1' || c > '9') {
                throw std::invalid_argument("invalid permutation word: " + std::string(text));
            }
            w.push_back(c - '0');
        }
    } else {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto stop = std::min(text.find(',', start), text.size());
            int v = 0;
            auto tok = text.substr(start, stop - start);
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) {
                throw std::invalid_argument("invalid permutation word: " + std::string(text));
            }
            w.push_back(v);
            start = stop + 1;
        }
    }
    if (w.empty()) throw std::invalid_argument("empty permutation word");
    return Permutation(std::move(w));
}

std::uint64_t factorial(int n) {
    if (n > 20) throw std::overflow_error("factorial overflows 64 bits");
    std::uint64_t f = 1;
    for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
    return f;
}

Permutation Permutation::unrank(int n, std::uint64_t index) {
    if (index >= factorial(n)) throw std::out_of_range("permutation rank out of range");
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 1);
    std::vector<int> w;
    w.reserve(pool.size());
    for (int k = n; k >= 1; --k) {
        const auto f = factorial(k - 1);
        const auto digit = static_cast<std::size_t>(index / f);
        index %= f;
        w.push_back(pool[digit]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return Permutation(std::move(w));
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(word_.size());
    for (std::size_t k = 0; k < word_.size(); ++k) {
        inv[static_cast<std::size_t>(word_[k] - 1)] = static_cast<int>(k + 1);
    }
    return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& other) const {
    if (other.size() != size()) throw std::invalid_argument("composing permutations of different sizes");
    std::vector<int> w(word_.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] = word_[static_cast<std::size_t>(other.word_[k] - 1)];
    }
    return Permutation(std::move(w));
}

std::uint64_t lexicographic_rank(std::span<const int> word) {
    const std::size_t n = word.size();
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t smaller = 0;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (word[j] < word[i]) ++smaller;
        }
        r = r * (n - i) + smaller;
    }
    return r;
}

std::uint64_t Permutation::rank() const { return lexicographic_rank(word_); }

std::string Permutation::to_string() const {
    std::string s;
    const bool compact = size() <= 9;
    for (std::size_t k = 0; k < word_.size(); ++k) {
        if (!compact && k > 0) s += ',';
        s += std::to_string(word_[k]);
    }
    return s;
}

std::vector<Permutation> all_permutations(int n) {
    std::vector<int> w(static_cast<std::size_t>(n));
    std::iota(w.begin(), w.end(), 1);
    std::vector<Permutation> out;
    out.reserve(static_cast<std::size_t>(factorial(n)));
    do {
        out.emplace_back(w);
    } while (std::next_permutation(w.begin(), w.end()));
    return out;
}

Permutation sigma_of(std::span<const double> x) {
    std::vector<int> order(x.size());
    std::iota(order.begin(), order.end(), 1);
    update_order(x, order);
    return Permutation(std::move(order));
}

void update_order(std::span<const double> x, std::span<int> order) {
    auto before = [&](int a, int b) {
        const double xa = x[static_cast<std::size_t>(a - 1)];
        const double xb = x[static_cast<std::size_t>(b - 1)];
        return xa < xb || (xa == xb && a < b);
    };
    for (std::size_t i = 1; i < order.size(); ++i) {
        const int key = order[i];
        std::size_t j = i;
        while (j > 0 && before(key, order[j - 1])) {
            order[j] = order[j - 1];
            --j;
        }
        order[j] = key;
    }
}

std::vector<Permutation> sigma_set(std::span<const double> x, double tol) {
    const auto base = sigma_of(x);
    std::vector<int> w(base.word().begin(), base.word().end());

    // Tied blocks of the sorted word: [first, last) ranges.
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    std::size_t start = 0;
    for (std::size_t k = 1; k <= w.size(); ++k) {
        const bool cut = k == w.size() ||
                         x[static_cast<std::size_t>(w[k] - 1)] - x[static_cast<std::size_t>(w[k - 1] - 1)] > tol;
        if (cut) {
            blocks.emplace_back(start, k);
            start = k;
        }
    }

    // Odometer over the per-block permutations, each block starting sorted.
    std::vector<Permutation> out;
    for (;;) {
        out.emplace_back(w);
        std::size_t b = blocks.size();
        for (;;) {
            if (b == 0) {
                std::sort(out.begin(), out.end());
                return out;
            }
            --b;
            auto first = w.begin() + static_cast<std::ptrdiff_t>(blocks[b].first);
            auto last = w.begin() + static_cast<std::ptrdiff_t>(blocks[b].second);
            if (std::next_permutation(first, last)) break;
        }
    }
}

bool in_coincidence_set(std::span<const double> x, double tol) {
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    for (std::size_t k = 1; k < s.size(); ++k) {
        if (s[k] - s[k - 1] <= tol) return true;
    }
    return false;
}

std::vector<double> project_centered(std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    if (out.empty()) return out;
    const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
    for (auto& v : out) v -= mean;
    return out;
}

std::vector<double> gather(std::span<const double> x, const Permutation& sigma) {
    std::vector<double> out(static_cast<std::size_t>(sigma.size()));
    for (int k = 1; k <= sigma.size(); ++k) {
        out[static_cast<std::size_t>(k - 1)] = x[static_cast<std::size_t>(sigma(k) - 1)];
    }
    return out;
}

}  // namespace oflab
